#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "kr/rng.hpp"

TEST_CASE("splitmix64 matches the published reference sequence head") {
    uint64_t s = 0;
    CHECK(kr::splitmix64(s) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("xoshiro256++ streams are deterministic and seed-sensitive") {
    kr::Xoshiro256pp a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const uint64_t x = a.next();
        all_equal = all_equal && (x == b.next());
        any_diff = any_diff || (x != c.next());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform() stays in [0,1) with a sane mean") {
    kr::Xoshiro256pp r(7);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    kr::Xoshiro256pp r2(8);
    for (int i = 0; i < 1000; ++i) {
        const double v = r2.uniform(2.0, 5.0);
        REQUIRE(v >= 2.0);
        REQUIRE(v < 5.0);
    }
}

TEST_CASE("member seeds do not collide across indices or nearby ensemble seeds") {
    std::unordered_set<uint64_t> seen;
    for (uint64_t seed : {1ULL, 2ULL, 20250819ULL})
        for (uint64_t i = 0; i < 100000; ++i) seen.insert(kr::derive_member_seed(seed, i));
    CHECK(seen.size() == 300000);
}

TEST_CASE("member streams decorrelate: first draws differ across members") {
    std::unordered_set<uint64_t> firsts;
    for (uint64_t i = 0; i < 1000; ++i) {
        kr::Xoshiro256pp r(kr::derive_member_seed(99, i));
        firsts.insert(r.next());
    }
    CHECK(firsts.size() == 1000);
}
