#pragma once

#include <cstddef>
#include <cstdint>

#include "permci/multivariate.hpp"
#include "permci/univariate.hpp"

namespace permci {

// Monte-Carlo uncertainty of the interval limits caused by sampling the
// permutations, assessed by resampling the (l_m, u_m) pairs jointly.
struct BootstrapResult {
    double lower_lo = 0.0, lower_hi = 0.0; // percentile interval for L
    double upper_lo = 0.0, upper_hi = 0.0; // percentile interval for U
    double lower_point = 0.0, upper_point = 0.0;
    std::size_t replicates = 0;
    double coverage_level = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinBootstrapReplicates = 100;

// B resamples of size M with replacement from the endpoint pairs; each
// replicate recomputes (L*, U*) with the interval ranks and the percentile
// interval at the given level is reported (anchored to contain the point
// estimate). Replicate r draws from derive_seed(seed, r), so the result does
// not depend on the thread count.
BootstrapResult bootstrap_endpoints(const EndpointVectors& ep, double alpha, std::size_t b,
                                    double level, std::uint64_t seed, unsigned threads = 1);

struct JointLevelBootstrap {
    double lo = 0.0, hi = 0.0;
    double point = 0.0;
    std::size_t replicates = 0;
    double coverage_level = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

// Optional diagnostic: permutation-sampling uncertainty of the joint level
// itself. Rows of the joint endpoint matrices are resampled with one index
// set shared across coordinates, preserving the cross-coordinate dependence.
JointLevelBootstrap bootstrap_alpha_multiple(const JointEndpoints& je, double alpha,
                                             std::size_t b, double level, std::uint64_t seed,
                                             unsigned threads = 1);

} // namespace permci
