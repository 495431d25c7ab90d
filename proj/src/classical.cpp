#include "kr/classical.hpp"

#include <cmath>

#include "kr/fitting.hpp"
#include "kr/kernels.hpp"
#include "kr/rng.hpp"

namespace kr {

namespace {
double mod_2pi(double x) {
    x = std::fmod(x, 2.0 * M_PI);
    return x < 0 ? x + 2.0 * M_PI : x;
}
}  // namespace

PhasePoint standard_map_step(PhasePoint pt, double K) {
    const double theta = mod_2pi(pt.theta + pt.L);
    return {theta, pt.L + K * std::sin(theta)};
}

PhasePoint standard_map_step_back(PhasePoint pt, double K) {
    const double L = pt.L - K * std::sin(pt.theta);
    return {mod_2pi(pt.theta - L), L};
}

DiffusionEstimate classical_diffusion(double K, int n_traj, int n_steps, uint64_t seed) {
    std::vector<detail::Neumaier> acc(n_steps);
    for (int i = 0; i < n_traj; ++i) {
        Xoshiro256pp rng(derive_member_seed(seed, i));
        PhasePoint pt{rng.uniform(0.0, 2.0 * M_PI), 0.0};
        for (int t = 0; t < n_steps; ++t) {
            pt = standard_map_step(pt, K);
            acc[t].add(pt.L * pt.L);
        }
    }
    DiffusionEstimate est;
    est.regime_warning = K <= 5.0;
    est.mean_L2.resize(n_steps);
    for (int t = 0; t < n_steps; ++t) est.mean_L2[t] = acc[t].value() / n_traj;

    std::vector<double> x, y;
    for (int t = 10; t < n_steps; ++t) {
        x.push_back(2.0 * (t + 1));
        y.push_back(est.mean_L2[t]);
    }
    const LinearFit fit = linear_fit(x, y);
    est.D = fit.slope;
    est.stderr_D = fit.stderr_slope;
    return est;
}

}  // namespace kr
