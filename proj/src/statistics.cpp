#include "permci/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "permci/errors.hpp"

namespace permci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_length(std::span<const double> data, const Model& model, const char* who) {
    if (data.size() != model_size(model))
        throw std::invalid_argument(std::string(who) + ": data length does not match the model");
}

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

TwoSampleLayout::TwoSampleLayout(std::size_t n1, std::size_t n2) : n1(n1), n2(n2) {
    if (n1 < 1 || n2 < 1)
        throw std::invalid_argument("TwoSampleLayout: both group sizes must be at least 1");
}

RegressionDesign::RegressionDesign(std::vector<double> regressors) : x(std::move(regressors)) {
    if (x.size() < 2) throw std::invalid_argument("RegressionDesign: need at least 2 observations");
    const double xbar = mean(x);
    x_centered.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw std::invalid_argument("RegressionDesign: non-finite regressor");
        x_centered[i] = x[i] - xbar;
        sxx += x_centered[i] * x_centered[i];
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("RegressionDesign: regressor is constant");
}

std::size_t model_size(const Model& model) {
    return std::visit([](const auto& m) { return m.n(); }, model);
}

bool is_negligible(const AffineStatCoefficients& coeffs, double b_e, double rel_tol) {
    return std::fabs(coeffs.b) >= std::fabs(b_e) * (1.0 - rel_tol);
}

double theta_hat(std::span<const double> data, const Model& model) {
    check_length(data, model, "theta_hat");
    if (const auto* ts = std::get_if<TwoSampleLayout>(&model)) {
        return mean(data.subspan(0, ts->n1)) - mean(data.subspan(ts->n1));
    }
    const auto& design = std::get<RegressionDesign>(model);
    const double ybar = mean(data);
    double sxy = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        sxy += design.x_centered[i] * (data[i] - ybar);
    return sxy / design.sxx;
}

AffineStatCoefficients two_sample_coefficients(std::span<const double> data,
                                               const TwoSampleLayout& layout,
                                               const Permutation& p) {
    if (data.size() != layout.n() || p.size() != layout.n())
        throw std::invalid_argument("two_sample_coefficients: length mismatch");

    const std::size_t n1 = layout.n1;
    const std::size_t n2 = layout.n2;
    const Permutation inv = p.inverse();

    // Block sums accumulated in ascending source order: permutations inducing
    // the same block partition produce bit-identical sums, so structural ties
    // stay exact ties in floating point.
    double sum_first = 0.0;
    double sum_second = 0.0;
    std::size_t k = 0; // group-Y indices landing in the first block
    for (std::size_t src = 0; src < data.size(); ++src) {
        if (inv(src) < n1) {
            sum_first += data[src];
            if (src < n1) ++k;
        } else {
            sum_second += data[src];
        }
    }

    AffineStatCoefficients c;
    c.a = sum_first / static_cast<double>(n1) - sum_second / static_cast<double>(n2);
    c.b = static_cast<double>(k) / static_cast<double>(n1) -
          static_cast<double>(n1 - k) / static_cast<double>(n2);
    c.negligible = is_negligible(c, 1.0); // unpermuted slope b_e = 1
    return c;
}

AffineStatCoefficients linreg_coefficients(std::span<const double> data,
                                           const RegressionDesign& design,
                                           const Permutation& p) {
    if (data.size() != design.n() || p.size() != design.n())
        throw std::invalid_argument("linreg_coefficients: length mismatch");

    AffineStatCoefficients c;
    for (std::size_t i = 0; i < data.size(); ++i) {
        c.a += design.x_centered[i] * data[p(i)];
        c.b += design.x_centered[i] * design.x[p(i)];
    }
    c.negligible = is_negligible(c, design.sxx); // unpermuted slope b_e = Sxx
    return c;
}

AffineStatCoefficients coefficients(std::span<const double> data, const Model& model,
                                    const Permutation& p) {
    if (const auto* ts = std::get_if<TwoSampleLayout>(&model))
        return two_sample_coefficients(data, *ts, p);
    return linreg_coefficients(data, std::get<RegressionDesign>(model), p);
}

AffineStatCoefficients observed_coefficients(std::span<const double> data, const Model& model) {
    return coefficients(data, model, Permutation::identity(model_size(model)));
}

CrossingInterval solve_crossing(const AffineStatCoefficients& obs,
                                const AffineStatCoefficients& perm) {
    if (!std::isfinite(obs.a) || !std::isfinite(obs.b) || !std::isfinite(perm.a) ||
        !std::isfinite(perm.b))
        throw numeric_error("solve_crossing: non-finite coefficients");
    if (obs.b == 0.0) throw numeric_error("solve_crossing: observed slope is zero");

    if (perm.negligible) return {-kInf, kInf, false};

    const double est = obs.a / obs.b;
    // Degenerate tie: the permuted statistic also vanishes at the estimate.
    if (perm.a * obs.b == obs.a * perm.b) return {est, est, true};

    const double r1 = (obs.a - perm.a) / (obs.b - perm.b);
    const double r2 = (obs.a + perm.a) / (obs.b + perm.b);
    return {std::min(r1, r2), std::max(r1, r2), false};
}

CrossingInterval solve_crossing_bisect(const std::function<double(double)>& observed_stat,
                                       const std::function<double(double)>& permuted_stat,
                                       double theta_hat, double width_hint, double rel_tol) {
    const auto gap = [&](double theta) { return permuted_stat(theta) - observed_stat(theta); };
    // Inside the crossing interval the permuted statistic dominates.
    if (!(gap(theta_hat) > 0.0)) return {theta_hat, theta_hat, true};

    double step = (width_hint > 0.0) ? width_hint : 1.0;
    const auto cross = [&](double direction) -> double {
        double inside = theta_hat;
        double outside = theta_hat + direction * step;
        int expansions = 0;
        while (gap(outside) > 0.0) {
            inside = outside;
            outside = theta_hat + direction * step * std::ldexp(1.0, ++expansions);
            if (expansions > 200) return direction * kInf; // no crossing: negligible behaviour
        }
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (inside + outside);
            if (std::fabs(outside - inside) <=
                rel_tol * std::max(1.0, std::fabs(mid)))
                break;
            (gap(mid) > 0.0 ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };

    const double lower = cross(-1.0);
    const double upper = cross(+1.0);
    if (std::isinf(lower) || std::isinf(upper)) return {-kInf, kInf, false};
    return {lower, upper, false};
}

double direct_statistic(std::span<const double> data, const Model& model, const Permutation& p,
                        double theta0) {
    check_length(data, model, "direct_statistic");
    if (p.size() != data.size())
        throw std::invalid_argument("direct_statistic: permutation length mismatch");

    if (const auto* ts = std::get_if<TwoSampleLayout>(&model)) {
        // Residuals X_i - phi_i(theta0); phi is theta0 on the first block, 0
        // after. Block sums run in ascending source order (see
        // two_sample_coefficients): structural ties stay bit-exact.
        const Permutation inv = p.inverse();
        double sum_first = 0.0;
        double sum_second = 0.0;
        for (std::size_t src = 0; src < data.size(); ++src) {
            const double resid = data[src] - (src < ts->n1 ? theta0 : 0.0);
            if (inv(src) < ts->n1)
                sum_first += resid;
            else
                sum_second += resid;
        }
        return std::fabs(sum_first / static_cast<double>(ts->n1) -
                         sum_second / static_cast<double>(ts->n2));
    }

    const auto& design = std::get<RegressionDesign>(model);
    // The residual mean is permutation-invariant; computing it in source
    // order keeps it bitwise identical across permutations.
    std::vector<double> resid(data.size());
    double rbar = 0.0;
    for (std::size_t src = 0; src < data.size(); ++src) {
        resid[src] = data[src] - theta0 * design.x[src];
        rbar += resid[src];
    }
    rbar /= static_cast<double>(data.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        stat += design.x_centered[i] * (resid[p(i)] - rbar);
    return std::fabs(stat);
}

} // namespace permci
