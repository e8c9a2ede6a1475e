#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "permci/univariate.hpp"

namespace permci {

// Hard ceiling on the number of coordinates: corner evaluation visits all 2^K
// side combinations.
inline constexpr std::size_t kDefaultCornerCap = 20;

// K coordinates' endpoint vectors computed from one shared permutation plan.
struct JointEndpoints {
    std::vector<EndpointVectors> coords;
    std::uint64_t plan_seed = 0;

    std::size_t k() const { return coords.size(); }
    std::size_t m() const { return coords.empty() ? 0 : coords.front().size(); }
};

// One column of data per coordinate; the same model applies to every column
// and every column is reduced with the same permutations.
JointEndpoints compute_joint_endpoints(const std::vector<std::vector<double>>& columns,
                                       const Model& model, const PermutationPlan& plan,
                                       unsigned threads = 1);

struct JointCoverageResult {
    double alpha_multiple = 0.0;
    double alpha = 0.0;
    // corner_counts[mask] = R_c where bit k of mask selects the upper side of
    // coordinate k; alpha_multiple = max over corners of R_c / M.
    std::vector<std::size_t> corner_counts;
    std::size_t worst_corner = 0;
};

// The corner algorithm: a permutation m fails corner c when, for any selected
// side k, its endpoint escapes the marginal interval on that side (infinite
// endpoints always fail their side). Worst corner over all 2^K choices.
JointCoverageResult joint_alpha_multiple(const JointEndpoints& je, double alpha,
                                         std::size_t corner_cap = kDefaultCornerCap);

struct AdjustmentResult {
    double alpha_star = 0.0;
    double achieved_alpha_multiple = 0.0;
    std::size_t iterations = 0;
    double threshold = 0.0;
};

inline constexpr double kDefaultAdjustThreshold = 1.0 / 640.0;

// Bisection of the marginal level over rank space {1/M, ..., floor(M*target)/M}:
// the joint level is a nondecreasing step function with steps at multiples of
// 1/M. Returns the largest marginal level whose joint level stays at or below
// the target, stopping early once within the threshold. If even 1/M overshoots
// the target by more than the threshold, throws infeasible_adjustment_error.
AdjustmentResult adjust_alpha(const JointEndpoints& je, double target,
                              double threshold = kDefaultAdjustThreshold,
                              std::size_t corner_cap = kDefaultCornerCap);

std::vector<CiResult> marginal_intervals(const JointEndpoints& je, double alpha);
std::vector<CiResult> adjusted_intervals(const JointEndpoints& je, const AdjustmentResult& ar);

// Classical reference corrections, for reporting alongside the corner result.
double sidak_alpha_multiple(double alpha, std::size_t k);      // 1 - (1-alpha)^K
double bonferroni_alpha_multiple(double alpha, std::size_t k); // min(1, K*alpha)

} // namespace permci
