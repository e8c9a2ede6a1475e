#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "permci/errors.hpp"
#include "permci/rng.hpp"
#include "permci/univariate.hpp"

using namespace permci;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<double> kToyData{2.0, 4.0, 0.0};
const Model kToyModel{TwoSampleLayout(2, 1)};

} // namespace

TEST_SUITE("univariate_ci") {

TEST_CASE("quantile is the ceil-rank order statistic") {
    CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.0);
    CHECK(quantile({4, 3, 2, 1}, 0.5) == 2.0);      // sorting is internal
    CHECK(quantile({1, 2, 3, 4}, 0.126) == 1.0);    // rank ceil(0.504) = 1
    CHECK(quantile({1, 2, 3, 4}, 0.251) == 2.0);    // rank ceil(1.004) = 2

    // Rank 250 of 10000 at gamma = 0.025, despite 10000 * 0.025 rounding up
    // in double arithmetic.
    std::vector<double> big(10000);
    for (std::size_t i = 0; i < big.size(); ++i) big[i] = double(i + 1);
    CHECK(quantile(big, 0.025) == 250.0);
    CHECK(quantile(big, 0.9999) == 9999.0);   // ceil(9999.0) = 9999
    CHECK(quantile(big, 0.99995) == 10000.0); // ceil(9999.5) = 10000

    CHECK(quantile({-kInf, 1.0, 2.0}, 0.2) == -kInf);
    CHECK_THROWS_AS(quantile({1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(quantile({1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST_CASE("rank helpers snap near-integer products") {
    CHECK(ceil_rank(10000, 0.025) == 250);
    CHECK(floor_rank(10000, 0.025) == 250);
    CHECK(ceil_rank(120, 1.0 / 120.0) == 1);
    CHECK(floor_rank(120, 1.0 / 120.0) == 1);
    CHECK(ceil_rank(6, 0.3) == 2);  // 1.8 -> 2
    CHECK(floor_rank(6, 0.3) == 1);
}

TEST_CASE("toy exhaustive endpoints match the hand enumeration") {
    const auto plan = enumerate_all(3);
    const auto ep = compute_endpoints(kToyData, kToyModel, plan);

    CHECK(ep.theta_hat == doctest::Approx(3.0));
    CHECK(ep.negligible_count == 2); // the two permutations fixing the first block
    REQUIRE(ep.size() == 6);

    // Plan is lexicographic: e, (23), (12), (123), (132), (13).
    CHECK(ep.lower[0] == -kInf);
    CHECK(ep.upper[0] == kInf);
    CHECK(ep.lower[1] == doctest::Approx(0.0));
    CHECK(ep.upper[1] == doctest::Approx(4.0));
    CHECK(ep.lower[2] == -kInf);
    CHECK(ep.upper[2] == kInf);
    CHECK(ep.lower[3] == doctest::Approx(2.0));
    CHECK(ep.upper[3] == doctest::Approx(6.0));
    CHECK(ep.lower[4] == doctest::Approx(0.0));
    CHECK(ep.upper[4] == doctest::Approx(4.0));
    CHECK(ep.lower[5] == doctest::Approx(2.0));
    CHECK(ep.upper[5] == doctest::Approx(6.0));

    for (std::size_t i = 0; i < ep.size(); ++i) {
        CHECK(ep.lower[i] <= ep.theta_hat);
        CHECK(ep.upper[i] >= ep.theta_hat);
    }
}

TEST_CASE("a plan of identity copies is all-negligible") {
    PermutationPlan plan;
    plan.n = 3;
    plan.seed = 0;
    for (int i = 0; i < 5; ++i) plan.permutations.push_back(Permutation::identity(3));
    const auto ep = compute_endpoints(kToyData, kToyModel, plan);
    CHECK(ep.negligible_count == 5);
    const auto ci = confidence_interval(ep, 0.2);
    CHECK(ci.lower == -kInf);
    CHECK(ci.upper == kInf);
}

TEST_CASE("interval ranks mirror each other") {
    const auto plan = enumerate_all(3);
    const auto ep = compute_endpoints(kToyData, kToyModel, plan);

    const auto ci = confidence_interval(ep, 1.0 / 3.0);
    // floor(6/3) = 2: lower rank 3, upper rank 4 of the sorted endpoints.
    CHECK(ci.lower == doctest::Approx(0.0));
    CHECK(ci.upper == doctest::Approx(6.0));
    CHECK(ci.contains(ep.theta_hat));

    const auto wide = confidence_interval(ep, 1e-6);
    CHECK(wide.lower == -kInf);
    CHECK(wide.upper == kInf);

    CHECK_THROWS_AS(confidence_interval(ep, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(confidence_interval(ep, 1.0), std::invalid_argument);
}

TEST_CASE("exhaustive S_5 interval sits at the mirrored order statistics") {
    const std::vector<double> data{1.4, -0.3, 2.2, 0.9, -1.7};
    const Model model{TwoSampleLayout(3, 2)};
    const auto plan = enumerate_all(5);
    const auto ep = compute_endpoints(data, model, plan);
    REQUIRE(ep.size() == 120);

    const auto ci = confidence_interval(ep, 0.2);
    CHECK(ci.lower == ep.lower_sorted[24]);  // rank 25 = floor(120 * 0.2) + 1
    CHECK(ci.upper == ep.upper_sorted[95]);  // rank 96 = 120 - 24
}

TEST_CASE("intervals are nested across levels") {
    SplitMix64 rng(404);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 10;
        std::vector<double> data(n);
        for (auto& v : data) v = rng.standard_normal();
        const Model model{TwoSampleLayout(6, 4)};
        const auto plan = sample_permutations(n, 300, 7000 + rep);
        const auto ep = compute_endpoints(data, model, plan);

        CiResult prev = confidence_interval(ep, 0.01);
        for (double alpha = 0.02; alpha < 0.51; alpha += 0.01) {
            const CiResult next = confidence_interval(ep, alpha);
            CHECK(next.lower >= prev.lower);
            CHECK(next.upper <= prev.upper);
            prev = next;
        }
    }
}

TEST_CASE("test fraction is 1 at the estimate and the negligible share far out") {
    const auto plan = enumerate_all(3);
    CHECK(permutation_test_fraction(kToyData, kToyModel, plan, 3.0) == doctest::Approx(1.0));

    // Far outside the data range only identity-like permutations tie with the
    // observed statistic; the two block-fixing permutations here.
    CHECK(permutation_test_fraction(kToyData, kToyModel, plan, 1e6) ==
          doctest::Approx(2.0 / 6.0));
    CHECK(permutation_test_fraction(kToyData, kToyModel, plan, -1e6) ==
          doctest::Approx(2.0 / 6.0));

    const auto counts = permutation_test_counts(kToyData, kToyModel, plan, 1e6);
    CHECK(counts.greater == 0);
    CHECK(counts.equal == 2);
    CHECK(counts.total == 6);
}

TEST_CASE("duality: interval membership equals the direct test decision") {
    // Exhaustive toy, every level i/M, a theta sweep across three widths.
    const auto plan = enumerate_all(3);
    const auto ep = compute_endpoints(kToyData, kToyModel, plan);
    const std::size_t m = plan.size();

    for (int j = 0; j < 120; ++j) {
        const double theta = 3.0 + 12.0 * ((j + 0.5) / 120.0 - 0.5);
        const double fraction = permutation_test_fraction(kToyData, kToyModel, plan, theta);
        for (std::size_t i = 1; i < m; ++i) {
            const double gamma = double(i) / double(m);
            const auto ci = confidence_interval(ep, gamma);
            CHECK(!ci.contains(theta) == (fraction <= gamma));
        }
    }
}

TEST_CASE("duality also holds for sampled (non-exhaustive) plans") {
    // The interval/test equivalence is a counting identity over whatever plan
    // was used; exhaustiveness is not needed.
    SplitMix64 rng(512);
    std::vector<double> data(12);
    for (auto& v : data) v = rng.standard_normal();
    const Model model{TwoSampleLayout(7, 5)};
    const auto plan = sample_permutations(12, 150, 99);
    const auto ep = compute_endpoints(data, model, plan);

    for (int j = 0; j < 100; ++j) {
        const double theta = ep.theta_hat + 6.0 * ((j + 0.5) / 100.0 - 0.5);
        const double fraction = permutation_test_fraction(data, model, plan, theta);
        for (std::size_t i = 1; i < plan.size(); ++i) {
            const double gamma = double(i) / double(plan.size());
            const auto ci = confidence_interval(ep, gamma);
            CHECK(!ci.contains(theta) == (fraction <= gamma));
        }
    }
}

TEST_CASE("compute_endpoints is independent of the thread count") {
    SplitMix64 rng(11);
    std::vector<double> data(14);
    for (auto& v : data) v = rng.standard_normal();
    const Model model{TwoSampleLayout(8, 6)};
    const auto plan = sample_permutations(14, 500, 123);
    const auto a = compute_endpoints(data, model, plan, 1);
    const auto b = compute_endpoints(data, model, plan, 4);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.negligible_count == b.negligible_count);
}

TEST_CASE("length mismatches are rejected") {
    const auto plan = enumerate_all(3);
    CHECK_THROWS_AS(compute_endpoints(std::vector<double>{1.0, 2.0}, kToyModel, plan),
                    std::invalid_argument);
    const auto plan4 = enumerate_all(4);
    CHECK_THROWS_AS(compute_endpoints(kToyData, kToyModel, plan4), std::invalid_argument);
}

TEST_CASE("non-finite data is rejected before any endpoint work") {
    const auto plan = enumerate_all(3);
    const std::vector<double> bad{2.0, kInf, 0.0};
    CHECK_THROWS_AS(compute_endpoints(bad, kToyModel, plan), numeric_error);
}

} // TEST_SUITE
