#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "kr/params.hpp"

TEST_CASE("validate accepts a standard quasiperiodic parameter set") {
    kr::SimParams p;
    p.K = 6.3;
    p.epsilon = 0.55;
    p.omegas = kr::default_omegas3();
    p.phis = {0.1, 0.2};
    p.n_kicks = 1000;
    const kr::ValidatedParams v = kr::validate(p);
    CHECK(v.kappa == doctest::Approx(6.3 / 2.89));
    CHECK(!v.fgp_applicable);  // kappa*(1+eps) = 3.38 > pi
    p.K = 2.0;
    p.epsilon = 0.0;
    p.omegas.clear();
    p.phis.clear();
    CHECK(kr::validate(p).fgp_applicable);
}

TEST_CASE("validate rejects out-of-range fields") {
    kr::SimParams p;
    p.K = 5.0;
    p.n_kicks = 10;

    auto bad = p;
    bad.K = -1.0;
    CHECK_THROWS_AS(kr::validate(bad), kr::OutOfRange);
    bad = p;
    bad.kbar = 0.0;
    CHECK_THROWS_AS(kr::validate(bad), kr::OutOfRange);
    bad = p;
    bad.epsilon = 1.0;
    CHECK_THROWS_AS(kr::validate(bad), kr::OutOfRange);
    bad = p;
    bad.beta_qm = -0.1;
    CHECK_THROWS_AS(kr::validate(bad), kr::OutOfRange);
    bad = p;
    bad.basis_half_width = 0;
    CHECK_THROWS_AS(kr::validate(bad), kr::OutOfRange);
    bad = p;
    bad.n_kicks = -1;
    CHECK_THROWS_AS(kr::validate(bad), kr::OutOfRange);
    bad = p;
    bad.omegas = {1.0, 2.0};
    bad.phis = {0.5};
    CHECK_THROWS_AS(kr::validate(bad), kr::IncompatibleDimensions);
}

TEST_CASE("JSON round trip is exact, including doubles") {
    kr::SimParams p;
    p.K = 4.7000000000000002;
    p.kbar = 2.89;
    p.epsilon = 0.1 + 0.2;  // not representable as a short decimal
    p.omegas = kr::default_omegas3();
    p.phis = {0.7853981633974483, 1.0};
    p.beta_qm = 0.3333333333333333;
    p.n_kicks = 123456789;
    p.basis_half_width = 768;
    p.seed = 0xDEADBEEFCAFEF00DULL;
    kr::EnsembleSpec e;
    e.n_members = 357;

    const std::string text = kr::to_json(p, e);
    kr::SimParams q;
    kr::EnsembleSpec f;
    kr::from_json(text, q, f);
    CHECK(q.K == p.K);
    CHECK(q.kbar == p.kbar);
    CHECK(q.epsilon == p.epsilon);
    CHECK(q.omegas == p.omegas);
    CHECK(q.phis == p.phis);
    CHECK(q.beta_qm == p.beta_qm);
    CHECK(q.n_kicks == p.n_kicks);
    CHECK(q.basis_half_width == p.basis_half_width);
    CHECK(q.seed == p.seed);
    CHECK(f.n_members == e.n_members);
    CHECK(kr::to_json(q, f) == text);
}

TEST_CASE("default d=3 frequencies are the standard incommensurate pair") {
    const auto w = kr::default_omegas3();
    REQUIRE(w.size() == 2);
    CHECK(w[0] == doctest::Approx(2.0 * M_PI * std::sqrt(5.0)).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(2.0 * M_PI * std::sqrt(13.0)).epsilon(1e-15));
}
