#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "permci/multivariate.hpp"

namespace permci {

// Equicorrelation matrix D: unit diagonal, rho off the diagonal. Positive
// definite exactly for -1/(K-1) < rho < 1.
struct EquicorrelatedSpec {
    std::size_t k = 0;
    double rho = 0.0;

    EquicorrelatedSpec(std::size_t k, double rho);
};

// Lower-triangular F with F * F^T = D.
std::vector<std::vector<double>> cholesky_equicorrelated(const EquicorrelatedSpec& spec);

// The fixed regressor values used by the simulation study: n draws from
// uniform(-1, 1) with the published seed below. data/sim_regressors.csv holds
// the same numbers for reference.
inline constexpr std::uint64_t kRegressorSeed = 20260810;
std::vector<double> table1_regressors(std::size_t n = 20);

// N x K outcomes Y[i][k] = intercept + slope * x[i] + noise_scale * eps[i][k]
// with rows eps_i = F z_i, z_i standard normal drawn coordinate-by-coordinate
// from a SplitMix64 stream through the normal quantile. noise_scale 0 is the
// exact-recovery diagnostic.
std::vector<std::vector<double>> generate_regression_dataset(const EquicorrelatedSpec& spec,
                                                             const std::vector<double>& x,
                                                             std::uint64_t seed,
                                                             double intercept = 0.0,
                                                             double slope = 1.0,
                                                             double noise_scale = 1.0);

struct SimConfig {
    std::size_t n = 20;
    std::size_t k = 8;
    std::size_t m = 1000;
    std::size_t runs = 100;
    double alpha = 0.05;
    double threshold = kDefaultAdjustThreshold;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct Table1Run {
    double rho = 0.0;
    std::size_t run = 0;
    double alpha_multiple = 0.0;
    double alpha_star = 0.0; // NaN when the adjustment was infeasible
};

struct Table1Row {
    double rho = 0.0;
    double mean_alpha_multiple = 0.0;
    double iqr_alpha_multiple = 0.0;
    double mean_alpha_star = 0.0;
    double iqr_alpha_star = 0.0;
    std::size_t runs = 0;
    std::size_t infeasible = 0;
};

struct Table1Result {
    std::vector<Table1Row> rows;
    std::vector<Table1Run> runs;
};

// One replicate: draw a dataset, reduce all K coordinates with one fresh
// permutation plan, evaluate the joint level at config.alpha and adjust it to
// that target. Per-run seeds are derived from (config.seed, rho index, run),
// so results are independent of scheduling.
Table1Result run_table1(const SimConfig& config, const std::vector<double>& rhos,
                        const std::vector<double>& x);

enum class CoverageKind { two_sample, regression };

struct CoverageConfig {
    CoverageKind kind = CoverageKind::two_sample;
    std::size_t n1 = 15;
    std::size_t n2 = 9;
    std::size_t n = 20;      // regression only
    std::size_t k = 1;       // coordinates (independent under H0)
    std::size_t m = 500;
    std::size_t replicates = 2000;
    double alpha = 0.05;
    double threshold = kDefaultAdjustThreshold;
    bool adjust = false;     // also measure the joint rate at the adjusted level
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct CoverageResult {
    double marginal_rate = 0.0;        // per-coordinate non-coverage of the true value
    double joint_rate = 0.0;           // any coordinate missing, unadjusted level
    double joint_rate_adjusted = 0.0;  // any coordinate missing at alpha_star
    std::size_t replicates = 0;
    std::size_t marginal_trials = 0;   // replicates * K
    std::size_t infeasible = 0;
    double marginal_se = 0.0;
    double joint_se = 0.0;
};

// Type-I rates under H0 (true parameter 0 in every coordinate).
CoverageResult coverage_experiment(const CoverageConfig& config);

// Synthetic stand-in for the monthly weather comparison: n1 + n2 profiles in
// R^k with a smooth seasonal mean difference, month-dependent spread and
// strong serial correlation across columns.
struct TwoSampleFixture {
    std::vector<std::vector<double>> rows; // (n1 + n2) x k
    std::vector<std::string> column_names;
    std::vector<std::string> group_labels;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

TwoSampleFixture make_two_sample_fixture(std::size_t n1 = 15, std::size_t n2 = 9,
                                         std::size_t k = 12, std::uint64_t seed = 424242);

} // namespace permci
