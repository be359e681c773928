#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "animat/rng.hpp"

using animat::RngStream;

TEST_CASE("equal seeds give equal streams") {
    RngStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_seed separates key tuples") {
    const uint64_t base = animat::derive_seed(7, 1, 2, 3);
    REQUIRE(base != animat::derive_seed(7, 1, 2, 4));
    REQUIRE(base != animat::derive_seed(7, 1, 3, 2));
    REQUIRE(base != animat::derive_seed(8, 1, 2, 3));
    REQUIRE(base == animat::derive_seed(7, 1, 2, 3));
}

TEST_CASE("uniform01 stays in [0,1) with mean 1/2") {
    RngStream rng(1);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    REQUIRE(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("uniform respects its interval") {
    RngStream rng(2);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform(3.0, 5.0);
        REQUIRE(u >= 3.0);
        REQUIRE(u < 5.0);
    }
}

TEST_CASE("gaussian moments") {
    RngStream rng(3);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.gaussian();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    REQUIRE(std::abs(mean) < 0.01);
    REQUIRE(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("below covers its range") {
    RngStream rng(4);
    long counts[7] = {0};
    for (int i = 0; i < 70000; ++i) counts[rng.below(7)]++;
    for (long c : counts) REQUIRE(c > 8000);
}

TEST_CASE("coin is roughly fair") {
    RngStream rng(5);
    long heads = 0;
    for (int i = 0; i < 100000; ++i) heads += rng.coin() ? 1 : 0;
    REQUIRE(std::abs(heads - 50000L) < 1000);
}
