#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "permci/errors.hpp"
#include "permci/permutation.hpp"
#include "permci/rng.hpp"

using namespace permci;

TEST_SUITE("perm_sampling") {

TEST_CASE("sampling rejects invalid arguments") {
    CHECK_THROWS_AS(sample_permutations(1, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_permutations(5, 0, 0), std::invalid_argument);
}

TEST_CASE("n=2 draws are elements of S_2") {
    const auto plan = sample_permutations(2, 1, 0);
    REQUIRE(plan.size() == 1);
    const auto& m = plan.permutations[0].mapping;
    const bool is_id = (m[0] == 0 && m[1] == 1);
    const bool is_swap = (m[0] == 1 && m[1] == 0);
    CHECK((is_id || is_swap));
}

TEST_CASE("identical (n, M, seed) reproduces the identical sequence") {
    const auto a = sample_permutations(5, 100, 7);
    const auto b = sample_permutations(5, 100, 7);
    REQUIRE(a.size() == b.size());
    CHECK(a.permutations == b.permutations);
    const auto c = sample_permutations(5, 100, 8);
    CHECK(a.permutations != c.permutations);
}

TEST_CASE("every draw is a bijection") {
    const auto plan = sample_permutations(17, 500, 321);
    CHECK(std::all_of(plan.permutations.begin(), plan.permutations.end(),
                      [](const Permutation& p) { return p.is_bijection(); }));
}

TEST_CASE("S_4 sampling frequencies are uniform") {
    const std::size_t draws = 240000;
    const auto plan = sample_permutations(4, draws, 11);
    std::vector<std::size_t> counts(24, 0);
    for (const auto& p : plan.permutations) ++counts[oracle::lehmer_index(p)];

    double chisq = 0.0;
    const double expected = double(draws) / 24.0;
    for (std::size_t c : counts) {
        CHECK(std::fabs(double(c) / double(draws) - 1.0 / 24.0) < 0.005);
        chisq += (double(c) - expected) * (double(c) - expected) / expected;
    }
    // 23 degrees of freedom; 49.7 is the 0.001 tail.
    CHECK(chisq < 49.7);
}

TEST_CASE("exhaustive enumeration is lexicographic and complete") {
    const auto plan = enumerate_all(3);
    REQUIRE(plan.size() == 6);
    CHECK(plan.exhaustive);
    CHECK(plan.permutations.front().mapping == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(plan.permutations.back().mapping == std::vector<std::uint32_t>{2, 1, 0});

    const auto trivial = enumerate_all(1);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial.permutations[0].is_identity());

    const auto big = enumerate_all(8);
    CHECK(big.size() == 40320);
    std::set<std::vector<std::uint32_t>> distinct;
    for (const auto& p : big.permutations) distinct.insert(p.mapping);
    CHECK(distinct.size() == 40320);

    CHECK_THROWS_AS(enumerate_all(11), resource_limit_error);
    CHECK_THROWS_AS(enumerate_all(5, 4), resource_limit_error);
}

TEST_CASE("apply follows the v[p(i)] convention") {
    CHECK(permci::apply(Permutation::identity(3), std::vector<double>{1, 2, 3}) ==
          std::vector<double>{1, 2, 3});
    const Permutation p({2, 0, 1});
    CHECK(permci::apply(p, std::vector<double>{10, 20, 30}) == std::vector<double>{30, 10, 20});
    CHECK_THROWS_AS(permci::apply(p, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("apply composed with the inverse is the identity") {
    const auto plan = sample_permutations(12, 50, 5);
    SplitMix64 rng(6);
    for (const auto& p : plan.permutations) {
        std::vector<double> v(12);
        for (auto& x : v) x = rng.uniform01();
        CHECK(permci::apply(p, permci::apply(p.inverse(), v)) == v);
    }
}

TEST_CASE("duplicate draws are kept and reported") {
    // With n=2 and many draws, duplicates are guaranteed.
    const auto plan = sample_permutations(2, 50, 3);
    CHECK(duplicate_count(plan) == 48);
    CHECK(duplicate_count(enumerate_all(4)) == 0);
}

TEST_CASE("plan save/load round-trips") {
    const auto plan = sample_permutations(6, 40, 987654321);
    const std::string path = "plan_roundtrip.txt";
    save_plan(plan, path);
    const auto loaded = load_plan(path);
    CHECK(loaded.n == plan.n);
    CHECK(loaded.seed == plan.seed);
    CHECK(loaded.exhaustive == plan.exhaustive);
    CHECK(loaded.permutations == plan.permutations);
    std::remove(path.c_str());
}

TEST_CASE("plan loading rejects malformed files") {
    const std::string truncated = "plan_truncated.txt";
    {
        std::ofstream out(truncated);
        out << "3 2 0 0\n0 1 2\n0 1\n";
    }
    CHECK_THROWS_AS(load_plan(truncated), parse_error);
    std::remove(truncated.c_str());

    const std::string repeated = "plan_repeated.txt";
    {
        std::ofstream out(repeated);
        out << "3 1 0 0\n0 0 2\n";
    }
    CHECK_THROWS_AS(load_plan(repeated), parse_error);
    std::remove(repeated.c_str());
}

} // TEST_SUITE
