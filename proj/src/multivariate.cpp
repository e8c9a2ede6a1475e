#include "permci/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "permci/errors.hpp"

namespace permci {

namespace {

void check_joint(const JointEndpoints& je) {
    if (je.coords.empty()) throw std::invalid_argument("joint endpoints: no coordinates");
    for (const auto& ep : je.coords)
        if (ep.size() != je.m())
            throw std::invalid_argument("joint endpoints: coordinates disagree on M");
}

void check_cap(std::size_t k, std::size_t cap) {
    // Masks live in 32-bit words and the counts vector holds 2^K entries.
    cap = std::min<std::size_t>(cap, 24);
    if (k > cap) {
        std::ostringstream msg;
        msg << "joint coverage: K = " << k << " exceeds the corner cap of " << cap
            << " (cost grows as 2^K)";
        throw resource_limit_error(msg.str());
    }
}

} // namespace

JointEndpoints compute_joint_endpoints(const std::vector<std::vector<double>>& columns,
                                       const Model& model, const PermutationPlan& plan,
                                       unsigned threads) {
    if (columns.empty())
        throw std::invalid_argument("compute_joint_endpoints: no data columns");

    JointEndpoints je;
    je.plan_seed = plan.seed;
    je.coords.reserve(columns.size());
    for (const auto& column : columns)
        je.coords.push_back(compute_endpoints(column, model, plan, threads));
    return je;
}

JointCoverageResult joint_alpha_multiple(const JointEndpoints& je, double alpha,
                                         std::size_t corner_cap) {
    check_joint(je);
    const std::size_t k = je.k();
    const std::size_t m = je.m();
    check_cap(k, corner_cap);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("joint_alpha_multiple: alpha must lie strictly in (0, 1)");

    const std::vector<CiResult> marginals = marginal_intervals(je, alpha);

    // Per-permutation failure masks: bit k of low_mask marks l_{mk} escaping
    // below L_k, bit k of up_mask marks u_{mk} escaping above U_k. Infinite
    // endpoints fail unconditionally.
    std::unordered_map<std::uint64_t, std::size_t> pattern_counts;
    std::size_t can_fail = 0;
    for (std::size_t i = 0; i < m; ++i) {
        std::uint32_t low_mask = 0;
        std::uint32_t up_mask = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double l = je.coords[c].lower[i];
            const double u = je.coords[c].upper[i];
            if (l < marginals[c].lower || std::isinf(l)) low_mask |= (1u << c);
            if (u > marginals[c].upper || std::isinf(u)) up_mask |= (1u << c);
        }
        if (low_mask == 0 && up_mask == 0) continue;
        ++can_fail;
        const std::uint64_t key = (static_cast<std::uint64_t>(low_mask) << 32) | up_mask;
        ++pattern_counts[key];
    }

    JointCoverageResult result;
    result.alpha = alpha;
    result.corner_counts.assign(std::size_t{1} << k, 0);

    // A permutation survives corner S (bit set = upper side) when every
    // lower-side failure sits on an upper coordinate and no upper-side failure
    // sits on one: low_mask subset of S and up_mask disjoint from S.
    for (std::uint32_t corner = 0; corner < (1u << k); ++corner) {
        std::size_t survivors = 0;
        for (const auto& [key, count] : pattern_counts) {
            const auto low_mask = static_cast<std::uint32_t>(key >> 32);
            const auto up_mask = static_cast<std::uint32_t>(key & 0xffffffffu);
            if ((low_mask & ~corner) == 0 && (up_mask & corner) == 0) survivors += count;
        }
        result.corner_counts[corner] = can_fail - survivors;
    }

    const auto worst =
        std::max_element(result.corner_counts.begin(), result.corner_counts.end());
    result.worst_corner = static_cast<std::size_t>(worst - result.corner_counts.begin());
    result.alpha_multiple = static_cast<double>(*worst) / static_cast<double>(m);
    return result;
}

AdjustmentResult adjust_alpha(const JointEndpoints& je, double target, double threshold,
                              std::size_t corner_cap) {
    check_joint(je);
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("adjust_alpha: target must lie strictly in (0, 1)");
    if (!(threshold > 0.0)) throw std::invalid_argument("adjust_alpha: threshold must be positive");

    const std::size_t m = je.m();
    const auto rank_max = floor_rank(m, target); // largest rank with rank/M <= target
    if (rank_max < 1) {
        std::ostringstream msg;
        msg << "adjust_alpha: target " << target << " is below the resolution 1/M = "
            << 1.0 / static_cast<double>(m);
        throw infeasible_adjustment_error(msg.str());
    }

    AdjustmentResult result;
    result.threshold = threshold;

    const auto level_at = [&](std::size_t rank) {
        ++result.iterations;
        return joint_alpha_multiple(je, static_cast<double>(rank) / static_cast<double>(m),
                                    corner_cap)
            .alpha_multiple;
    };

    const double at_floor = level_at(1);
    if (at_floor > target) {
        if (at_floor <= target + threshold) {
            result.alpha_star = 1.0 / static_cast<double>(m);
            result.achieved_alpha_multiple = at_floor;
            return result;
        }
        std::ostringstream msg;
        msg << "adjust_alpha: joint level " << at_floor << " at the minimum marginal level 1/M"
            << " already exceeds target " << target << " by more than the threshold "
            << threshold;
        throw infeasible_adjustment_error(msg.str());
    }

    // Largest rank whose joint level stays at or below the target; the level
    // is nondecreasing in the rank, so plain bisection applies. The first
    // rank above that is the only overshoot candidate: take it when the
    // below-target gap exceeds the threshold but the overshoot does not.
    std::size_t lo = 1;
    double lo_level = at_floor;
    double overshoot_level = -1.0; // f(lo + 1) once the bracket has collapsed
    if (rank_max > lo && target - lo_level > threshold) {
        const double top_level = level_at(rank_max);
        if (top_level <= target) {
            lo = rank_max;
            lo_level = top_level;
        } else {
            std::size_t hi = rank_max;
            double hi_level = top_level;
            while (hi - lo > 1 && target - lo_level > threshold) {
                const std::size_t mid = lo + (hi - lo) / 2;
                const double mid_level = level_at(mid);
                if (mid_level <= target) {
                    lo = mid;
                    lo_level = mid_level;
                } else {
                    hi = mid;
                    hi_level = mid_level;
                }
            }
            if (hi == lo + 1) overshoot_level = hi_level;
        }
    }

    if (target - lo_level > threshold && overshoot_level >= 0.0 &&
        overshoot_level - target <= threshold) {
        result.alpha_star = static_cast<double>(lo + 1) / static_cast<double>(m);
        result.achieved_alpha_multiple = overshoot_level;
        return result;
    }
    result.alpha_star = static_cast<double>(lo) / static_cast<double>(m);
    result.achieved_alpha_multiple = lo_level;
    return result;
}

std::vector<CiResult> marginal_intervals(const JointEndpoints& je, double alpha) {
    check_joint(je);
    std::vector<CiResult> out;
    out.reserve(je.k());
    for (const auto& ep : je.coords) out.push_back(confidence_interval(ep, alpha));
    return out;
}

std::vector<CiResult> adjusted_intervals(const JointEndpoints& je, const AdjustmentResult& ar) {
    return marginal_intervals(je, ar.alpha_star);
}

double sidak_alpha_multiple(double alpha, std::size_t k) {
    return 1.0 - std::pow(1.0 - alpha, static_cast<double>(k));
}

double bonferroni_alpha_multiple(double alpha, std::size_t k) {
    return std::min(1.0, alpha * static_cast<double>(k));
}

} // namespace permci
