#include "permci/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "permci/rng.hpp"
#include "permci/util.hpp"

namespace permci {

BootstrapResult bootstrap_endpoints(const EndpointVectors& ep, double alpha, std::size_t b,
                                    double level, std::uint64_t seed, unsigned threads) {
    if (b < kMinBootstrapReplicates)
        throw std::invalid_argument("bootstrap_endpoints: at least 100 replicates required");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("bootstrap_endpoints: level must lie strictly in (0, 1)");
    if (ep.size() == 0) throw std::invalid_argument("bootstrap_endpoints: empty endpoints");

    const std::size_t m = ep.size();
    const std::size_t fl = std::min(floor_rank(m, alpha), m - 1);
    const CiResult point = confidence_interval(ep, alpha);

    std::vector<double> lower_stars(b);
    std::vector<double> upper_stars(b);
    parallel_chunks(b, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> lo(m);
        std::vector<double> up(m);
        for (std::size_t r = begin; r < end; ++r) {
            SplitMix64 rng(derive_seed(seed, r));
            for (std::size_t i = 0; i < m; ++i) {
                const auto idx = static_cast<std::size_t>(rng.below(m));
                lo[i] = ep.lower[idx]; // pairs resampled jointly
                up[i] = ep.upper[idx];
            }
            std::nth_element(lo.begin(), lo.begin() + static_cast<std::ptrdiff_t>(fl), lo.end());
            std::nth_element(up.begin(), up.begin() + static_cast<std::ptrdiff_t>(m - fl - 1),
                             up.end());
            lower_stars[r] = lo[fl];
            upper_stars[r] = up[m - fl - 1];
        }
    });

    std::sort(lower_stars.begin(), lower_stars.end());
    std::sort(upper_stars.begin(), upper_stars.end());
    const double tail = (1.0 - level) / 2.0;

    BootstrapResult out;
    out.lower_lo = std::min(quantile_sorted(lower_stars, tail), point.lower);
    out.lower_hi = std::max(quantile_sorted(lower_stars, 1.0 - tail), point.lower);
    out.upper_lo = std::min(quantile_sorted(upper_stars, tail), point.upper);
    out.upper_hi = std::max(quantile_sorted(upper_stars, 1.0 - tail), point.upper);
    out.lower_point = point.lower;
    out.upper_point = point.upper;
    out.replicates = b;
    out.coverage_level = level;
    out.alpha = alpha;
    out.seed = seed;
    return out;
}

JointLevelBootstrap bootstrap_alpha_multiple(const JointEndpoints& je, double alpha,
                                             std::size_t b, double level, std::uint64_t seed,
                                             unsigned threads) {
    if (b < kMinBootstrapReplicates)
        throw std::invalid_argument("bootstrap_alpha_multiple: at least 100 replicates required");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("bootstrap_alpha_multiple: level must lie strictly in (0, 1)");

    const std::size_t m = je.m();
    const std::size_t k = je.k();
    const double point = joint_alpha_multiple(je, alpha).alpha_multiple;

    std::vector<double> levels(b);
    parallel_chunks(b, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> idx(m);
        for (std::size_t r = begin; r < end; ++r) {
            SplitMix64 rng(derive_seed(seed, r));
            // One index set for all coordinates: the resample keeps each
            // permutation's endpoints together across the K coordinates.
            for (std::size_t i = 0; i < m; ++i) idx[i] = static_cast<std::size_t>(rng.below(m));

            JointEndpoints resampled;
            resampled.plan_seed = je.plan_seed;
            resampled.coords.resize(k);
            for (std::size_t c = 0; c < k; ++c) {
                EndpointVectors& ep = resampled.coords[c];
                ep.lower.resize(m);
                ep.upper.resize(m);
                ep.theta_hat = je.coords[c].theta_hat;
                ep.seed = je.coords[c].seed;
                for (std::size_t i = 0; i < m; ++i) {
                    ep.lower[i] = je.coords[c].lower[idx[i]];
                    ep.upper[i] = je.coords[c].upper[idx[i]];
                    if (std::isinf(ep.lower[i])) ++ep.negligible_count;
                }
                ep.lower_sorted = ep.lower;
                ep.upper_sorted = ep.upper;
                std::sort(ep.lower_sorted.begin(), ep.lower_sorted.end());
                std::sort(ep.upper_sorted.begin(), ep.upper_sorted.end());
            }
            levels[r] = joint_alpha_multiple(resampled, alpha).alpha_multiple;
        }
    });

    std::sort(levels.begin(), levels.end());
    const double tail = (1.0 - level) / 2.0;

    JointLevelBootstrap out;
    out.lo = std::min(quantile_sorted(levels, tail), point);
    out.hi = std::max(quantile_sorted(levels, 1.0 - tail), point);
    out.point = point;
    out.replicates = b;
    out.coverage_level = level;
    out.alpha = alpha;
    out.seed = seed;
    return out;
}

} // namespace permci
