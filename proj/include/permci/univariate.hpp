#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "permci/permutation.hpp"
#include "permci/statistics.hpp"

namespace permci {

// Per-permutation interval limits in plan order, with sorted copies cached so
// interval queries at any level are O(1). Immutable once built.
struct EndpointVectors {
    std::vector<double> lower;  // entries may be -inf
    std::vector<double> upper;  // entries may be +inf
    std::vector<double> lower_sorted;
    std::vector<double> upper_sorted;
    double theta_hat = 0.0;
    std::size_t negligible_count = 0;
    std::size_t degenerate_count = 0;
    std::uint64_t seed = 0;

    std::size_t size() const { return lower.size(); }
};

struct CiResult {
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.0;
    double theta_hat = 0.0;
    std::size_t m = 0;
    std::uint64_t seed = 0;

    bool contains(double theta) const { return lower <= theta && theta <= upper; }
};

// 1-based order-statistic ranks. Products M*gamma are snapped to the nearest
// integer within 1e-9 so that levels meant as exact multiples of 1/M survive
// their round trip through double arithmetic.
std::size_t ceil_rank(std::size_t m, double gamma);   // smallest r with r >= M*gamma, in [1, M]
std::size_t floor_rank(std::size_t m, double gamma);  // largest r with r <= M*gamma, in [0, M]

// Q_gamma(v) = ascending order statistic at rank ceil(M*gamma). Infinite
// entries participate as ordinary extreme values.
double quantile(std::vector<double> v, double gamma);
double quantile_sorted(std::span<const double> sorted, double gamma);

// Interval limits for every permutation in the plan (order preserved); the
// per-permutation work may run on several threads without affecting results.
EndpointVectors compute_endpoints(std::span<const double> data, const Model& model,
                                  const PermutationPlan& plan, unsigned threads = 1);

// The confidence interval at level 1 - alpha:
//   upper = upper order statistic at rank M - floor(M*alpha),
//   lower = lower order statistic at the mirrored rank floor(M*alpha) + 1.
// The mirrored lower rank keeps the construction reflection-equivariant and
// makes the test duality exact at every level, including exact multiples of
// 1/M (see permutation_test_fraction).
CiResult confidence_interval(const EndpointVectors& ep, double alpha);

struct TestCounts {
    std::size_t greater = 0; // permuted statistic strictly above the observed one
    std::size_t equal = 0;   // ties, including identity-like permutations
    std::size_t total = 0;

    // Share of permuted statistics at least as large as the observed one.
    double fraction() const {
        return static_cast<double>(greater + equal) / static_cast<double>(total);
    }
};

// Direct permutation test of H0: theta = theta0 (residuals evaluated per
// permutation, no affine shortcut). Ties count toward the fraction: with
// that convention, theta0 lies outside the level-(1-gamma) interval from
// confidence_interval if and only if the returned fraction is <= gamma.
TestCounts permutation_test_counts(std::span<const double> data, const Model& model,
                                   const PermutationPlan& plan, double theta0);
double permutation_test_fraction(std::span<const double> data, const Model& model,
                                 const PermutationPlan& plan, double theta0);

} // namespace permci
