#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "matchmech/random.hpp"

using namespace matchmech;

// Expected values come from tests/oracle/trace_prng.py.

TEST_CASE("splitmix64 first outputs") {
    RandomSource zero(0);
    CHECK(zero.next_u64() == 0xe220a8397b1dcdafull);
    RandomSource one(1);
    CHECK(one.next_u64() == 0x910a2dec89025cc1ull);
}

TEST_CASE("equal seeds give equal streams") {
    RandomSource a(987654321), b(987654321);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("bounded draws") {
    RandomSource src(42);
    CHECK(rand_below(src, 7) == 5);

    RandomSource any(1234);
    for (int i = 0; i < 100; ++i) {
        CHECK(any.below(1) == 0);
    }
    CHECK_THROWS_AS(any.below(0), std::domain_error);
}

TEST_CASE("state round trip continues the stream") {
    RandomSource src(77);
    for (int i = 0; i < 13; ++i) src.next_u64();
    auto copy = RandomSource::from_state(src.state());
    CHECK(copy == src);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(copy.next_u64() == src.next_u64());
    }
}

TEST_CASE("residues of below(8) are balanced") {
    constexpr int draws = 100000;
    std::array<int, 8> counts{};
    RandomSource src(2024);
    for (int i = 0; i < draws; ++i) {
        ++counts[src.below(8)];
    }
    const double mean = draws / 8.0;
    const double sigma = std::sqrt(draws * (1.0 / 8) * (7.0 / 8));
    for (int c : counts) {
        CHECK(std::abs(c - mean) < 5 * sigma);
    }
}

TEST_CASE("derived seeds") {
    CHECK(derive_seed(0, 0, 0) == 0x238275bc38fcbe91ull);
    CHECK(derive_seed(12345, 3, 7) == 0xde3096adff3364a5ull);
    CHECK(derive_seed(5, 1, 2) != derive_seed(5, 2, 1));
    CHECK(derive_seed(5, 0, 1) != derive_seed(5, 0, 2));
}
