#include "permci/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "permci/errors.hpp"
#include "permci/rng.hpp"
#include "permci/util.hpp"

namespace permci {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double iqr_of(std::vector<double> v) {
    if (v.size() < 2) return 0.0;
    return quantile(v, 0.75) - quantile(std::move(v), 0.25);
}

} // namespace

EquicorrelatedSpec::EquicorrelatedSpec(std::size_t k, double rho) : k(k), rho(rho) {
    if (k < 1) throw std::invalid_argument("EquicorrelatedSpec: K must be at least 1");
    const double lower = (k > 1) ? -1.0 / static_cast<double>(k - 1) : -1.0;
    if (!(rho > lower && rho < 1.0))
        throw std::invalid_argument(
            "EquicorrelatedSpec: rho must lie in (-1/(K-1), 1) for positive definiteness");
}

std::vector<std::vector<double>> cholesky_equicorrelated(const EquicorrelatedSpec& spec) {
    const std::size_t k = spec.k;
    std::vector<std::vector<double>> f(k, std::vector<double>(k, 0.0));

    // Cholesky-Banachiewicz on D = (1-rho) I + rho J.
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = (i == j) ? 1.0 : spec.rho;
            for (std::size_t p = 0; p < j; ++p) sum -= f[i][p] * f[j][p];
            if (i == j) {
                if (!(sum > 0.0))
                    throw numeric_error("cholesky_equicorrelated: matrix not positive definite");
                f[i][j] = std::sqrt(sum);
            } else {
                f[i][j] = sum / f[j][j];
            }
        }
    }
    return f;
}

std::vector<double> table1_regressors(std::size_t n) {
    SplitMix64 rng(kRegressorSeed);
    std::vector<double> x(n);
    for (double& v : x) v = 2.0 * rng.uniform01() - 1.0;
    return x;
}

std::vector<std::vector<double>> generate_regression_dataset(const EquicorrelatedSpec& spec,
                                                             const std::vector<double>& x,
                                                             std::uint64_t seed, double intercept,
                                                             double slope, double noise_scale) {
    if (x.empty()) throw std::invalid_argument("generate_regression_dataset: empty regressor");

    const auto f = cholesky_equicorrelated(spec);
    const std::size_t k = spec.k;
    SplitMix64 rng(seed);

    std::vector<std::vector<double>> y(x.size(), std::vector<double>(k, 0.0));
    std::vector<double> z(k);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t c = 0; c < k; ++c) z[c] = rng.standard_normal();
        for (std::size_t c = 0; c < k; ++c) {
            double eps = 0.0;
            for (std::size_t p = 0; p <= c; ++p) eps += f[c][p] * z[p];
            y[i][c] = intercept + slope * x[i] + noise_scale * eps;
        }
    }
    return y;
}

namespace {

std::vector<std::vector<double>> columns_of(const std::vector<std::vector<double>>& rows,
                                            std::size_t k) {
    std::vector<std::vector<double>> cols(k, std::vector<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < k; ++c) cols[c][i] = rows[i][c];
    return cols;
}

} // namespace

Table1Result run_table1(const SimConfig& config, const std::vector<double>& rhos,
                        const std::vector<double>& x) {
    if (x.size() != config.n)
        throw std::invalid_argument("run_table1: regressor length does not match config.n");
    if (rhos.empty()) throw std::invalid_argument("run_table1: no correlation values");
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw std::invalid_argument("run_table1: alpha must lie strictly in (0, 1)");

    const Model model{RegressionDesign(x)};

    Table1Result result;
    result.runs.resize(rhos.size() * config.runs);

    for (std::size_t r = 0; r < rhos.size(); ++r) {
        const EquicorrelatedSpec spec(config.k, rhos[r]);
        const std::uint64_t rho_seed = derive_seed(config.seed, r);

        parallel_chunks(config.runs, config.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t run = begin; run < end; ++run) {
                const auto rows = generate_regression_dataset(
                    spec, x, derive_seed(rho_seed, 2 * run));
                const auto plan = sample_permutations(
                    static_cast<std::uint32_t>(config.n), config.m,
                    derive_seed(rho_seed, 2 * run + 1));
                const auto je = compute_joint_endpoints(columns_of(rows, config.k), model, plan);

                Table1Run record;
                record.rho = rhos[r];
                record.run = run;
                record.alpha_multiple = joint_alpha_multiple(je, config.alpha).alpha_multiple;
                try {
                    record.alpha_star = adjust_alpha(je, config.alpha, config.threshold).alpha_star;
                } catch (const infeasible_adjustment_error&) {
                    record.alpha_star = kNaN;
                }
                result.runs[r * config.runs + run] = record;
            }
        });

        Table1Row row;
        row.rho = rhos[r];
        row.runs = config.runs;
        std::vector<double> multiples;
        std::vector<double> stars;
        for (std::size_t run = 0; run < config.runs; ++run) {
            const auto& record = result.runs[r * config.runs + run];
            multiples.push_back(record.alpha_multiple);
            if (std::isnan(record.alpha_star))
                ++row.infeasible;
            else
                stars.push_back(record.alpha_star);
        }
        row.mean_alpha_multiple = mean_of(multiples);
        row.iqr_alpha_multiple = iqr_of(multiples);
        if (!stars.empty()) {
            row.mean_alpha_star = mean_of(stars);
            row.iqr_alpha_star = iqr_of(stars);
        } else {
            row.mean_alpha_star = kNaN;
            row.iqr_alpha_star = kNaN;
        }
        result.rows.push_back(row);
    }
    return result;
}

CoverageResult coverage_experiment(const CoverageConfig& config) {
    if (config.replicates < 1) throw std::invalid_argument("coverage_experiment: no replicates");
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw std::invalid_argument("coverage_experiment: alpha must lie strictly in (0, 1)");

    const std::size_t n =
        (config.kind == CoverageKind::two_sample) ? config.n1 + config.n2 : config.n;
    Model model = (config.kind == CoverageKind::two_sample)
                      ? Model{TwoSampleLayout(config.n1, config.n2)}
                      : Model{RegressionDesign(table1_regressors(config.n))};
    const double theta_true = 0.0;

    std::vector<std::size_t> marginal_misses(config.replicates, 0);
    std::vector<unsigned char> joint_miss(config.replicates, 0);
    std::vector<unsigned char> joint_miss_adjusted(config.replicates, 0);
    std::vector<unsigned char> infeasible(config.replicates, 0);

    parallel_chunks(config.replicates, config.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t rep = begin; rep < end; ++rep) {
            SplitMix64 rng(derive_seed(config.seed, 2 * rep));
            std::vector<std::vector<double>> columns(config.k, std::vector<double>(n));
            for (std::size_t c = 0; c < config.k; ++c)
                for (std::size_t i = 0; i < n; ++i) columns[c][i] = rng.standard_normal();

            const auto plan = sample_permutations(static_cast<std::uint32_t>(n), config.m,
                                                  derive_seed(config.seed, 2 * rep + 1));
            const auto je = compute_joint_endpoints(columns, model, plan);

            for (const auto& ci : marginal_intervals(je, config.alpha)) {
                if (!ci.contains(theta_true)) {
                    ++marginal_misses[rep];
                    joint_miss[rep] = 1;
                }
            }
            if (config.adjust) {
                try {
                    const auto ar = adjust_alpha(je, config.alpha, config.threshold);
                    for (const auto& ci : adjusted_intervals(je, ar))
                        if (!ci.contains(theta_true)) joint_miss_adjusted[rep] = 1;
                } catch (const infeasible_adjustment_error&) {
                    infeasible[rep] = 1;
                }
            }
        }
    });

    CoverageResult out;
    out.replicates = config.replicates;
    out.marginal_trials = config.replicates * config.k;
    std::size_t marginal_total = 0;
    std::size_t joint_total = 0;
    std::size_t adjusted_total = 0;
    for (std::size_t rep = 0; rep < config.replicates; ++rep) {
        marginal_total += marginal_misses[rep];
        joint_total += joint_miss[rep];
        adjusted_total += joint_miss_adjusted[rep];
        out.infeasible += infeasible[rep];
    }
    out.marginal_rate = static_cast<double>(marginal_total) / static_cast<double>(out.marginal_trials);
    out.joint_rate = static_cast<double>(joint_total) / static_cast<double>(config.replicates);
    out.joint_rate_adjusted =
        static_cast<double>(adjusted_total) / static_cast<double>(config.replicates);
    out.marginal_se = std::sqrt(config.alpha * (1.0 - config.alpha) /
                                static_cast<double>(out.marginal_trials));
    out.joint_se =
        std::sqrt(config.alpha * (1.0 - config.alpha) / static_cast<double>(config.replicates));
    return out;
}

TwoSampleFixture make_two_sample_fixture(std::size_t n1, std::size_t n2, std::size_t k,
                                         std::uint64_t seed) {
    static const char* kMonths[12] = {"jan", "feb", "mar", "apr", "may", "jun",
                                      "jul", "aug", "sep", "oct", "nov", "dec"};
    TwoSampleFixture fx;
    fx.n1 = n1;
    fx.n2 = n2;
    for (std::size_t c = 0; c < k; ++c)
        fx.column_names.push_back(c < 12 ? std::string("m_") + kMonths[c]
                                         : "m" + std::to_string(c + 1));

    SplitMix64 rng(seed);
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n1 + n2; ++i) {
        const bool first = i < n1;
        std::vector<double> row(k);
        double carry = rng.standard_normal();
        for (std::size_t c = 0; c < k; ++c) {
            const double phase = 2.0 * pi * (static_cast<double>(c) + 0.5) / static_cast<double>(k);
            const double base = -2.0 - 12.0 * std::cos(phase);
            // Seasonal group gap and month-dependent spread.
            const double gap = first ? 2.0 + 3.0 * std::cos(phase) : 0.0;
            const double sd = 1.0 + 2.0 * std::fabs(std::cos(phase / 2.0));
            const double innov = rng.standard_normal();
            carry = 0.8 * carry + 0.6 * innov; // serial correlation across months
            row[c] = base + gap + sd * carry;
        }
        fx.rows.push_back(std::move(row));
        fx.group_labels.push_back(first ? "atlantic_like" : "continental_like");
    }
    return fx;
}

} // namespace permci
