#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "permci/rng.hpp"

using namespace permci;

TEST_SUITE("rng") {

TEST_CASE("splitmix64 is a pure function of seed and position") {
    SplitMix64 a(1234), b(1234), c(1235);
    bool all_equal = true;
    bool any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a.next();
        all_equal = all_equal && (va == b.next());
        any_diff = any_diff || (va != c.next());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("below stays in range and covers small ranges uniformly") {
    SplitMix64 rng(99);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    for (int c : counts) CHECK(std::fabs(c / 70000.0 - 1.0 / 7.0) < 0.01);
    CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("normal quantile matches reference values") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("standard normal stream has sane moments") {
    SplitMix64 rng(7);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.standard_normal();
        sum += z;
        sumsq += z * z;
    }
    CHECK(std::fabs(sum / n) < 0.01);
    CHECK(std::fabs(sumsq / n - 1.0) < 0.02);
}

TEST_CASE("derived seeds differ across indices and masters") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t master : {0ULL, 1ULL, 42ULL})
        for (std::uint64_t i = 0; i < 100; ++i) seen.insert(derive_seed(master, i));
    CHECK(seen.size() == 300);
}

} // TEST_SUITE
