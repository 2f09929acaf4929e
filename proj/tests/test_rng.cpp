#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "disent/rng.hpp"

using disent::RngState;

TEST_CASE("same seed reproduces the draw sequence") {
    RngState a = RngState::seeded(7);
    RngState b = RngState::seeded(7);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("stream advances between draws") {
    RngState r = RngState::seeded(0);
    const std::uint64_t x = r.next_u64();
    const std::uint64_t y = r.next_u64();
    REQUIRE(x != y);
}

TEST_CASE("substream derivation is pure and label-sensitive") {
    RngState parent = RngState::seeded(123);
    RngState a1 = parent.substream("a");
    parent.next_u64();
    parent.next_u64();
    RngState a2 = parent.substream("a");  // consuming the parent must not matter
    REQUIRE(a1.next_u64() == a2.next_u64());

    // distinct labels give (statistically) distinct streams: over 1e4 seeds,
    // first-draw collisions between "a" and "b" substreams stay under 1e-3
    int collisions = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        RngState p = RngState::seeded(seed);
        RngState sa = p.substream("a");
        RngState sb = p.substream("b");
        if (sa.next_u64() == sb.next_u64()) ++collisions;
    }
    REQUIRE(collisions < 10);
}

TEST_CASE("replay with a copied state is bit-exact") {
    RngState r = RngState::seeded(99);
    r.next_u64();
    RngState snapshot = r;
    std::vector<double> first, second;
    for (int i = 0; i < 50; ++i) first.push_back(r.next_uniform());
    for (int i = 0; i < 50; ++i) second.push_back(snapshot.next_uniform());
    REQUIRE(first == second);
}

TEST_CASE("normal_sample: empty request") {
    RngState r = RngState::seeded(1);
    REQUIRE(r.normal_vector(0).empty());
}

TEST_CASE("normal_sample moments over 1e5 draws") {
    RngState r = RngState::seeded(2024);
    const std::size_t n = 100000;
    std::vector<double> v = r.normal_vector(n);
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);
    // CLT bound 3*sigma/sqrt(n) ~ 0.0095, widened to 0.02 by the source text
    REQUIRE(mean > -0.02);
    REQUIRE(mean < 0.02);
    REQUIRE(var > 0.97);
    REQUIRE(var < 1.03);
}

TEST_CASE("uniform draws live in [0,1)") {
    RngState r = RngState::seeded(5);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.next_uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("next_below covers its range uniformly enough") {
    RngState r = RngState::seeded(6);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 50000; ++i) ++counts[r.next_below(5)];
    for (int c : counts) {
        REQUIRE(c > 9000);  // expectation 10000, binomial 3-sigma ~ 268
        REQUIRE(c < 11000);
    }
}

TEST_CASE("shuffle is a permutation and seed-deterministic") {
    std::vector<int> v(100);
    for (int i = 0; i < 100; ++i) v[i] = i;
    RngState r1 = RngState::seeded(3);
    RngState r2 = RngState::seeded(3);
    std::vector<int> a = v, b = v;
    r1.shuffle(a);
    r2.shuffle(b);
    REQUIRE(a == b);
    REQUIRE(std::set<int>(a.begin(), a.end()).size() == 100);
    REQUIRE(a != v);  // 1/100! chance, effectively impossible
}
