#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "permci/permutation.hpp"

namespace permci {

// Relative tolerance for |b_s| = |b_e|; ties beyond it are treated as
// negligible, which can only widen intervals.
inline constexpr double kNegligibleRelTol = 1e-9;

// Unpaired two-sample setup: the first n1 observations form group Y, the
// remaining n2 form group Z, and the parameter is the mean difference.
struct TwoSampleLayout {
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    TwoSampleLayout(std::size_t n1, std::size_t n2);
    std::size_t n() const { return n1 + n2; }
};

// Simple linear regression on a fixed regressor; the parameter is the slope.
struct RegressionDesign {
    std::vector<double> x;
    std::vector<double> x_centered;
    double sxx = 0.0;

    explicit RegressionDesign(std::vector<double> regressors);
    std::size_t n() const { return x.size(); }
};

using Model = std::variant<TwoSampleLayout, RegressionDesign>;

std::size_t model_size(const Model& model);

// The permuted statistic as a function of the parameter: T_s(theta) =
// |a - b*theta|. For the identity permutation b equals the unpermuted slope
// b_e and a/b is the estimate.
struct AffineStatCoefficients {
    double a = 0.0;
    double b = 0.0;
    bool negligible = false;
    bool degenerate = false;
};

// Where the unpermuted statistic crosses the permuted one: strictly inside
// (lower, upper) the permuted statistic dominates, strictly outside the
// unpermuted one does. Negligible permutations get (-inf, +inf); the
// degenerate point case has lower == upper == theta_hat.
struct CrossingInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool degenerate = false;
};

bool is_negligible(const AffineStatCoefficients& coeffs, double b_e,
                   double rel_tol = kNegligibleRelTol);

double theta_hat(std::span<const double> data, const Model& model);

AffineStatCoefficients two_sample_coefficients(std::span<const double> data,
                                               const TwoSampleLayout& layout,
                                               const Permutation& p);

AffineStatCoefficients linreg_coefficients(std::span<const double> data,
                                           const RegressionDesign& design,
                                           const Permutation& p);

// Dispatch over the model; flags set with the default tolerance.
AffineStatCoefficients coefficients(std::span<const double> data, const Model& model,
                                    const Permutation& p);

// Identity-permutation coefficients (a_e, b_e).
AffineStatCoefficients observed_coefficients(std::span<const double> data, const Model& model);

// Closed-form crossing interval for affine statistics. obs must be the
// identity coefficients with b_e != 0.
CrossingInterval solve_crossing(const AffineStatCoefficients& obs,
                                const AffineStatCoefficients& perm);

// Generic fallback behind the same contract for statistics that are not
// affine in theta but satisfy the minimality/monotonicity/divergence
// properties. Expands from theta_hat until the sign flips, then bisects.
CrossingInterval solve_crossing_bisect(const std::function<double(double)>& observed_stat,
                                       const std::function<double(double)>& permuted_stat,
                                       double theta_hat, double width_hint,
                                       double rel_tol = 1e-12);

// t applied to the permuted residual vector at theta0, evaluated directly
// (no affine shortcut). This is the permutation-test side of the
// interval/test duality.
double direct_statistic(std::span<const double> data, const Model& model,
                        const Permutation& p, double theta0);

} // namespace permci
