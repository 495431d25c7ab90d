#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kr/anderson.hpp"
#include "kr/errors.hpp"

TEST_CASE("pseudo-disorder matches the closed form in 1D") {
    const kr::LatticeBox box{{{-5, 5}}};
    const double omega = 1.3, kbar = 2.89, beta = 0.25;
    const auto e = kr::pseudo_disorder(omega, kbar, beta, {}, box);
    REQUIRE(e.size() == 11);
    for (int m = -5; m <= 5; ++m) {
        const double mb = m + beta;
        const double want = std::tan(0.5 * omega - 0.25 * kbar * mb * mb);
        CHECK(e[m + 5] == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("pseudo-disorder flattens row-major, last axis fastest") {
    const kr::LatticeBox box{{{-1, 1}, {2, 3}, {0, 1}}};
    const std::vector<double> omegas = {2.0 * M_PI * std::sqrt(5.0), 2.0 * M_PI * std::sqrt(13.0)};
    const double omega = 0.9, kbar = 2.89, beta = 0.1;
    const auto e = kr::pseudo_disorder(omega, kbar, beta, omegas, box);
    REQUIRE(e.size() == box.size());
    std::size_t i = 0;
    for (int m1 = -1; m1 <= 1; ++m1)
        for (int m2 = 2; m2 <= 3; ++m2)
            for (int m3 = 0; m3 <= 1; ++m3) {
                const double mb = m1 + beta;
                const double v = 0.5 * omega - 0.25 * kbar * mb * mb -
                                 0.5 * m2 * omegas[0] - 0.5 * m3 * omegas[1];
                CHECK(e[i++] == doctest::Approx(std::tan(v)).epsilon(1e-12));
            }
}

TEST_CASE("pseudo-disorder has a Cauchy bulk: median |E| near 1") {
    const kr::LatticeBox box{{{0, 19999}}};
    auto e = kr::pseudo_disorder(0.7, 2.89, 0.37, {}, box);
    for (auto& v : e) v = std::abs(v);
    std::nth_element(e.begin(), e.begin() + e.size() / 2, e.end());
    const double med = e[e.size() / 2];
    CHECK(med > 0.9);
    CHECK(med < 1.1);
}

TEST_CASE("rational kbar collapses the pseudo-disorder to a constant") {
    // kbar = 4pi: the quadratic phase is an integer multiple of pi, so tan
    // repeats the same value on every site. This is the resonance mechanism.
    const kr::LatticeBox box{{{-20, 20}}};
    const auto e = kr::pseudo_disorder(1.1, 4.0 * M_PI, 0.0, {}, box);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    CHECK(*hi - *lo < 1e-9);
}

TEST_CASE("pseudo-disorder rejects mismatched dimensions") {
    CHECK_THROWS_AS(kr::pseudo_disorder(1.0, 2.89, 0.0, {}, kr::LatticeBox{{{0, 3}, {0, 3}}}),
                    kr::IncompatibleDimensions);
    const std::vector<double> w1 = {1.0};
    CHECK_THROWS_AS(kr::pseudo_disorder(1.0, 2.89, 0.0, w1, kr::LatticeBox{{{0, 3}}}),
                    kr::IncompatibleDimensions);
    CHECK_THROWS_AS(kr::pseudo_disorder(1.0, 2.89, 0.0, {}, kr::LatticeBox{}),
                    kr::IncompatibleDimensions);
}

TEST_CASE("weak-kick hopping reproduces the linearized kernel") {
    // tan((kappa/2) cos x) -> (kappa/2) cos x as kappa -> 0, whose only
    // Fourier component is r = +-1 with weight kappa/4.
    const double kappa = 0.05;
    const auto h = kr::hopping_coefficients(kappa, 0.0, 1, 8);
    CHECK(h.sign == -1);
    CHECK(std::abs(h.t[0]) < 1e-12);
    CHECK(h.at(1) == doctest::Approx(-kappa / 4.0).epsilon(1e-3));
    CHECK(h.at(-1) == h.at(1));
    for (int r = 2; r <= 8; r += 2) CHECK(std::abs(h.at(r)) < 1e-10);
}

TEST_CASE("hopping coefficients with even r vanish by symmetry") {
    const auto h = kr::hopping_coefficients(2.5, 0.0, 1, 12);
    for (int r = 0; r <= 12; r += 2) CHECK(std::abs(h.at(r)) < 1e-10);
    for (int r = 1; r <= 11; r += 2) CHECK(std::abs(h.at(r)) > 1e-10);
    // odd coefficients decay away from r = 1
    CHECK(std::abs(h.at(11)) < std::abs(h.at(1)));
    CHECK(std::abs(h.at(11)) < std::abs(h.at(5)));
}

TEST_CASE("printed-sign tables are the exact negation") {
    const auto hm = kr::hopping_coefficients(1.7, 0.0, 1, 6, 1024, -1);
    const auto hp = kr::hopping_coefficients(1.7, 0.0, 1, 6, 1024, +1);
    for (int r = 0; r <= 6; ++r) CHECK(hm.t[r] == -hp.t[r]);
}

TEST_CASE("hopping rejects kernels whose phase reaches a tan pole") {
    CHECK_THROWS_AS(kr::hopping_coefficients(3.2, 0.0, 1, 4), kr::PoleInDomain);
    CHECK_THROWS_AS(kr::hopping_coefficients(2.0, 0.6, 2, 4), kr::PoleInDomain);
    CHECK_THROWS_AS(kr::hopping_coefficients(1.0, 0.0, 3, 4), kr::IncompatibleDimensions);
}

TEST_CASE("near-pole kernels exhaust the quadrature budget") {
    CHECK_THROWS_AS(kr::hopping_coefficients(M_PI - 1e-9, 0.0, 1, 4), kr::QuadratureNotConverged);
}

TEST_CASE("2D hopping is even in the transverse index and odd-r1 only") {
    const int r_max = 4, nr2 = 2 * r_max + 1;
    const auto h = kr::hopping_coefficients(1.2, 0.3, 2, r_max);
    auto at2 = [&](int r1, int r2) { return h.t[static_cast<std::size_t>(r1) * nr2 + (r2 + r_max)]; };
    for (int r1 = 0; r1 <= r_max; ++r1)
        for (int r2 = 1; r2 <= r_max; ++r2)
            CHECK(at2(r1, r2) == doctest::Approx(at2(r1, -r2)).epsilon(1e-10));
    for (int r1 = 0; r1 <= r_max; r1 += 2)
        for (int r2 = -r_max; r2 <= r_max; ++r2) CHECK(std::abs(at2(r1, r2)) < 1e-10);
    CHECK(std::abs(at2(1, 0)) > 1e-4);
}

TEST_CASE("tight-binding solve matches the open-chain spectrum") {
    const int n = 64;
    const std::vector<double> onsite(n, 0.0);
    const kr::HoppingTable nn{1, 1, {0.0, 1.0}, +1};
    const auto sys = kr::solve_tight_binding(onsite, nn);
    REQUIRE(sys.values.size() == static_cast<std::size_t>(n));
    std::vector<double> want;
    for (int k = 1; k <= n; ++k) want.push_back(2.0 * std::cos(M_PI * k / (n + 1)));
    std::sort(want.begin(), want.end());
    for (int i = 0; i < n; ++i) CHECK(sys.values[i] == doctest::Approx(want[i]).epsilon(1e-10));
    // eigenvectors are normalized and satisfy H v = lambda v at a spot index
    const auto& v = sys.vectors[10];
    double nrm = 0.0;
    for (double c : v) nrm += c * c;
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i + 1 < n; ++i)
        CHECK(v[i - 1] + v[i + 1] == doctest::Approx(sys.values[10] * v[i]).epsilon(1e-8));
}

TEST_CASE("diagonal-only tight binding returns sorted on-site energies") {
    const std::vector<double> onsite = {3.0, -1.0, 2.0, 0.5};
    const kr::HoppingTable none{1, 0, {0.0}, +1};
    const auto sys = kr::solve_tight_binding(onsite, none);
    std::vector<double> want = onsite;
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(sys.values[i] == doctest::Approx(want[i]).epsilon(1e-14));
    CHECK_THROWS_AS(kr::solve_tight_binding(std::vector<double>(3, 0.0), kr::HoppingTable{1, 3, {0, 1, 1, 1}, +1}),
                    kr::IncompatibleDimensions);
}

TEST_CASE("envelope fit recovers a planted exponential exactly") {
    const double xi = 25.0;
    std::vector<double> y(201);
    for (int i = 0; i < 201; ++i) y[i] = std::exp(-2.0 * std::abs(i - 100) / xi);
    CHECK(kr::envelope_xi(y) == doctest::Approx(xi).epsilon(1e-10));
    // off-center peak still works from the pooled two-sided fit
    std::vector<double> z(201);
    for (int i = 0; i < 201; ++i) z[i] = 7.0 * std::exp(-2.0 * std::abs(i - 40) / xi);
    CHECK(kr::envelope_xi(z) == doctest::Approx(xi).epsilon(1e-10));
}

TEST_CASE("envelope fit refuses degenerate input") {
    CHECK_THROWS_AS(kr::envelope_decay_rate(std::vector<double>{1, 2, 3}), kr::WindowTooNarrow);
    CHECK_THROWS_AS(kr::envelope_decay_rate(std::vector<double>(50, 0.0)), kr::WindowTooNarrow);
    std::vector<double> spike(50, 0.0);
    spike[25] = 1.0;  // nothing above floor around the peak
    CHECK_THROWS_AS(kr::envelope_decay_rate(spike), kr::WindowTooNarrow);
}

TEST_CASE("floquet states satisfy the tight-binding equation, prose sign") {
    for (double K : {2.0, 4.0}) {
        const auto rep = kr::floquet_oracle(K, 2.89, 0.3, 64);
        CAPTURE(K);
        CHECK(rep.unimodularity < 1e-12);
        CHECK(rep.n_interior > 10);
        CHECK(rep.n_interior <= rep.n_total);
        CHECK(rep.t0_abs < 1e-12);
        CHECK(rep.chosen_sign == -1);
        CHECK(rep.median_residual < 1e-6);
        CHECK(rep.median_residual_printed > 100.0 * rep.median_residual);
    }
    CHECK_THROWS_AS(kr::floquet_oracle(2.0, 2.89, 0.0, 4), kr::OutOfRange);
}

TEST_CASE("transfer matrix reproduces the weak-disorder localization length") {
    const auto est = kr::transfer_matrix_xi(1.0, 1.0, 0.0, 2'000'000, 17);
    CHECK(!est.infinite);
    CHECK(est.xi > 95.0);
    CHECK(est.xi < 115.0);
    CHECK(est.stderr_xi < 0.02 * est.xi * 1.05);
    // xi * W^2 is approximately constant across weak disorder
    const auto half = kr::transfer_matrix_xi(0.5, 1.0, 0.0, 8'000'000, 17);
    CHECK(half.xi * 0.25 == doctest::Approx(est.xi).epsilon(0.10));
}

TEST_CASE("transfer matrix edge cases") {
    CHECK(kr::transfer_matrix_xi(0.0, 1.0, 0.0, 5000, 1).infinite);
    CHECK_THROWS_AS(kr::transfer_matrix_xi(1.0, 1.0, 0.0, 999, 1), kr::OutOfRange);
    CHECK_THROWS_AS(kr::transfer_matrix_xi(1.0, 0.0, 0.0, 5000, 1), kr::OutOfRange);
    CHECK_THROWS_AS(kr::transfer_matrix_xi(0.05, 1.0, 0.0, 1008, 1), kr::NotConverged);
}
