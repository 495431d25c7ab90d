#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "kr/classical.hpp"
#include "kr/fitting.hpp"

namespace {

double wrap_diff(double a, double b) {
    double d = std::fmod(a - b, 2.0 * M_PI);
    if (d > M_PI) d -= 2.0 * M_PI;
    if (d < -M_PI) d += 2.0 * M_PI;
    return d;
}

}  // namespace

TEST_CASE("the hyperbolic fixed point stays put") {
    kr::PhasePoint pt{M_PI, 0.0};
    for (int i = 0; i < 10; ++i) pt = kr::standard_map_step(pt, 3.7);
    CHECK(std::abs(wrap_diff(pt.theta, M_PI)) < 1e-12);
    CHECK(std::abs(pt.L) < 1e-12);
}

TEST_CASE("the map is reversible over a Lyapunov-limited window") {
    // Chaos amplifies rounding by ~exp(2*n*ln(K/2)); keep n short enough
    // that the round trip stays meaningful in double precision.
    kr::PhasePoint pt{1.234, 0.567};
    kr::PhasePoint cur = pt;
    for (int i = 0; i < 5; ++i) cur = kr::standard_map_step(cur, 6.6);
    for (int i = 0; i < 5; ++i) cur = kr::standard_map_step_back(cur, 6.6);
    CHECK(std::abs(wrap_diff(cur.theta, pt.theta)) < 1e-8);
    CHECK(std::abs(cur.L - pt.L) < 1e-8);
}

TEST_CASE("a single back step inverts a forward step tightly") {
    kr::PhasePoint pt{0.3, -2.7};
    const auto back = kr::standard_map_step_back(kr::standard_map_step(pt, 9.4), 9.4);
    CHECK(std::abs(wrap_diff(back.theta, pt.theta)) < 1e-13);
    CHECK(std::abs(back.L - pt.L) < 1e-13);
}

TEST_CASE("the map preserves phase-space area") {
    // Jacobian determinant by central differences at a generic point.
    const double K = 5.1, h = 1e-6;
    const kr::PhasePoint p0{2.1, 0.9};
    auto f = [K](kr::PhasePoint p) { return kr::standard_map_step(p, K); };
    const auto pt_p = f({p0.theta + h, p0.L});
    const auto pt_m = f({p0.theta - h, p0.L});
    const auto pL_p = f({p0.theta, p0.L + h});
    const auto pL_m = f({p0.theta, p0.L - h});
    const double dt_dt = (pt_p.theta - pt_m.theta) / (2 * h);
    const double dL_dt = (pt_p.L - pt_m.L) / (2 * h);
    const double dt_dL = (pL_p.theta - pL_m.theta) / (2 * h);
    const double dL_dL = (pL_p.L - pL_m.L) / (2 * h);
    CHECK(dt_dt * dL_dL - dL_dt * dt_dL == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("strong chaos diffuses near the random-walk rate") {
    // At K = 10 correlation corrections are modest; D should sit within
    // ~20% of K^2/4 = 25.
    const auto est = kr::classical_diffusion(10.0, 20000, 400, 99);
    CHECK(!est.regime_warning);
    CHECK(est.mean_L2.size() == 400);
    CHECK(est.D > 25.0 * 0.6);
    CHECK(est.D < 25.0 * 1.4);
    CHECK(est.stderr_D < 0.1 * est.D);
}

TEST_CASE("accelerator-mode K is flagged and superdiffusive") {
    const auto est = kr::classical_diffusion(7.2, 8000, 500, 7);
    // log-log slope of mean L^2 over the late window exceeds ballistic-free
    // diffusion's slope 1.
    std::vector<double> lt, ly;
    for (int t = 50; t <= 500; ++t) {
        lt.push_back(std::log(double(t)));
        ly.push_back(std::log(est.mean_L2[t - 1]));
    }
    const auto fit = kr::linear_fit(lt, ly);
    CHECK(fit.slope > 1.15);
}

TEST_CASE("regime warning tracks the mixed-phase-space bound") {
    CHECK(kr::classical_diffusion(4.0, 100, 30, 1).regime_warning);
    CHECK(!kr::classical_diffusion(10.0, 100, 30, 1).regime_warning);
}

TEST_CASE("diffusion estimate is deterministic in the seed") {
    const auto a = kr::classical_diffusion(8.0, 500, 100, 42);
    const auto b = kr::classical_diffusion(8.0, 500, 100, 42);
    CHECK(a.D == b.D);
    CHECK(a.mean_L2 == b.mean_L2);
}
