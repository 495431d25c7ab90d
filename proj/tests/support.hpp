#pragma once
#include <cmath>
#include <cstdint>
#include <vector>

#include "kr/engine.hpp"
#include "kr/rng.hpp"
#include "kr/scaling.hpp"

namespace kr_test {

// One-parameter-scaling family with a planted exponent:
// Lambda = f_branch(u * xi(K)), xi = (a + b|K - K_c|)^{-nu},
// f_loc(z) = Lc z^2/(1+z^2), f_dif(z) = Lc (1+z)/z.
struct SyntheticPlan {
    double nu = 1.60;
    double k_c = 4.7;
    double a = 0.3;
    double b = 1.2;
    double lc = 3.0;
    double k_min = 3.3, k_max = 5.71, k_step = 0.24;
    int n_members = 1;
    double noise = 0.0;  // lognormal member scatter
    uint64_t seed = 5;
};

inline kr::FtsCurveSet synthetic_fts(const SyntheticPlan& pl = {}) {
    kr::FtsCurveSet cs;
    for (double k = pl.k_min; k <= pl.k_max; k += pl.k_step) cs.K.push_back(k);
    for (long t : kr::sample_times(1000))
        if (t >= 10) cs.times.push_back(static_cast<double>(t));
    kr::Xoshiro256pp rng(pl.seed);
    for (double k : cs.K) {
        const double xi = std::pow(pl.a + pl.b * std::abs(k - pl.k_c), -pl.nu);
        const bool loc = k < pl.k_c;
        std::vector<std::vector<double>> members;
        for (int m = 0; m < pl.n_members; ++m) {
            std::vector<double> p2(cs.times.size());
            for (std::size_t i = 0; i < cs.times.size(); ++i) {
                const double t = cs.times[i];
                const double z = std::pow(t, -1.0 / 3.0) * xi;
                const double lam = loc ? pl.lc * z * z / (1.0 + z * z) : pl.lc * (1.0 + z) / z;
                double v = lam * std::pow(t, 2.0 / 3.0);
                if (pl.noise > 0.0) {
                    const double g = std::sqrt(-2.0 * std::log(1.0 - rng.uniform())) *
                                     std::cos(2.0 * M_PI * rng.uniform());
                    v *= std::exp(pl.noise * g);
                }
                p2[i] = v;
            }
            members.push_back(std::move(p2));
        }
        cs.p2.push_back(std::move(members));
    }
    return cs;
}

}  // namespace kr_test
