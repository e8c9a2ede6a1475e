#include "permci/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "permci/errors.hpp"
#include "permci/util.hpp"

namespace permci {

namespace {

constexpr double kRankSnap = 1e-9;

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("quantile level must lie strictly in (0, 1)");
}

// M*gamma with near-integer snapping.
double scaled_level(std::size_t m, double gamma) {
    const double y = static_cast<double>(m) * gamma;
    const double nearest = std::nearbyint(y);
    if (std::fabs(y - nearest) < kRankSnap) return nearest;
    return y;
}

} // namespace

std::size_t ceil_rank(std::size_t m, double gamma) {
    check_gamma(gamma);
    const double y = scaled_level(m, gamma);
    const auto r = static_cast<std::size_t>(std::ceil(y));
    return std::clamp<std::size_t>(r, 1, m);
}

std::size_t floor_rank(std::size_t m, double gamma) {
    check_gamma(gamma);
    const double y = scaled_level(m, gamma);
    const auto r = static_cast<std::size_t>(std::floor(y));
    return std::min<std::size_t>(r, m);
}

double quantile_sorted(std::span<const double> sorted, double gamma) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty vector");
    return sorted[ceil_rank(sorted.size(), gamma) - 1];
}

double quantile(std::vector<double> v, double gamma) {
    check_gamma(gamma);
    if (v.empty()) throw std::invalid_argument("quantile: empty vector");
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, gamma);
}

EndpointVectors compute_endpoints(std::span<const double> data, const Model& model,
                                  const PermutationPlan& plan, unsigned threads) {
    if (data.size() != model_size(model))
        throw std::invalid_argument("compute_endpoints: data length does not match the model");
    if (plan.n != data.size())
        throw std::invalid_argument("compute_endpoints: plan population size mismatch");

    const std::size_t m = plan.size();
    const AffineStatCoefficients obs = observed_coefficients(data, model);
    // Non-finite data surfaces here, before any worker threads start.
    if (!std::isfinite(obs.a) || !std::isfinite(obs.b) || obs.b == 0.0)
        throw numeric_error("compute_endpoints: non-finite or degenerate observed statistic");

    EndpointVectors ep;
    ep.lower.resize(m);
    ep.upper.resize(m);
    ep.theta_hat = obs.a / obs.b;
    ep.seed = plan.seed;

    std::vector<unsigned char> degenerate(m, 0);
    parallel_chunks(m, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const AffineStatCoefficients c = coefficients(data, model, plan.permutations[i]);
            const CrossingInterval ci = solve_crossing(obs, c);
            ep.lower[i] = ci.lower;
            ep.upper[i] = ci.upper;
            degenerate[i] = ci.degenerate ? 1 : 0;
        }
    });

    for (std::size_t i = 0; i < m; ++i) {
        if (std::isinf(ep.lower[i])) ++ep.negligible_count;
        if (degenerate[i]) ++ep.degenerate_count;
    }
    ep.lower_sorted = ep.lower;
    ep.upper_sorted = ep.upper;
    std::sort(ep.lower_sorted.begin(), ep.lower_sorted.end());
    std::sort(ep.upper_sorted.begin(), ep.upper_sorted.end());
    return ep;
}

CiResult confidence_interval(const EndpointVectors& ep, double alpha) {
    check_gamma(alpha);
    if (ep.size() == 0) throw std::invalid_argument("confidence_interval: empty endpoints");

    const std::size_t m = ep.size();
    // floor(M*alpha) is at most M-1 for alpha < 1; the clamp only guards the
    // near-integer snap at alpha within 1e-9 of 1.
    const std::size_t fl = std::min(floor_rank(m, alpha), m - 1);

    CiResult ci;
    ci.lower = ep.lower_sorted[fl];         // rank floor(M*alpha) + 1
    ci.upper = ep.upper_sorted[m - fl - 1]; // rank M - floor(M*alpha)
    ci.alpha = alpha;
    ci.theta_hat = ep.theta_hat;
    ci.m = m;
    ci.seed = ep.seed;
    return ci;
}

TestCounts permutation_test_counts(std::span<const double> data, const Model& model,
                                   const PermutationPlan& plan, double theta0) {
    if (data.size() != model_size(model))
        throw std::invalid_argument("permutation_test_counts: data length does not match the model");
    if (plan.n != data.size())
        throw std::invalid_argument("permutation_test_counts: plan population size mismatch");

    const double t_obs =
        direct_statistic(data, model, Permutation::identity(data.size()), theta0);

    TestCounts counts;
    counts.total = plan.size();
    for (const Permutation& p : plan.permutations) {
        const double t = direct_statistic(data, model, p, theta0);
        if (t > t_obs)
            ++counts.greater;
        else if (t == t_obs)
            ++counts.equal;
    }
    return counts;
}

double permutation_test_fraction(std::span<const double> data, const Model& model,
                                 const PermutationPlan& plan, double theta0) {
    return permutation_test_counts(data, model, plan, theta0).fraction();
}

} // namespace permci
