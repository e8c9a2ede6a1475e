#pragma once

// Test-only reference implementations, kept independent of the library's
// coefficient/crossing code paths. Everything here evaluates statistics the
// long way: build the permuted residual vector, then apply the textbook
// formula.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "permci/permutation.hpp"

namespace oracle {

struct TwoSample {
    std::size_t n1;
    std::size_t n2;
};

struct LinReg {
    std::vector<double> x;
};

// |mean of first n1 - mean of rest| on the permuted residuals X_i - phi_i(theta).
inline double two_sample_stat(const std::vector<double>& data, const TwoSample& m,
                              const permci::Permutation& p, double theta) {
    std::vector<double> resid(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        resid[i] = data[i] - (i < m.n1 ? theta : 0.0);
    std::vector<double> permuted(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) permuted[i] = resid[p(i)];
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < m.n1; ++i) s1 += permuted[i];
    for (std::size_t i = m.n1; i < data.size(); ++i) s2 += permuted[i];
    return std::fabs(s1 / double(m.n1) - s2 / double(m.n2));
}

// |sum (x_i - xbar)(e_i - ebar)| on the permuted residuals Y_i - theta*x_i.
inline double linreg_stat(const std::vector<double>& data, const LinReg& m,
                          const permci::Permutation& p, double theta) {
    const std::size_t n = data.size();
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = data[i] - theta * m.x[i];
    std::vector<double> permuted(n);
    for (std::size_t i = 0; i < n; ++i) permuted[i] = resid[p(i)];
    double xbar = 0.0, ebar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += m.x[i];
        ebar += permuted[i];
    }
    xbar /= double(n);
    ebar /= double(n);
    double stat = 0.0;
    for (std::size_t i = 0; i < n; ++i) stat += (m.x[i] - xbar) * (permuted[i] - ebar);
    return std::fabs(stat);
}

// Crossing interval located by a dense scan for sign changes of
// T_obs(theta) - T_perm(theta), refined by bisection. Returns (-inf, +inf)
// when no crossing exists within the scanned range on either side.
template <typename ObsFn, typename PermFn>
inline std::pair<double, double> grid_crossing(const ObsFn& obs_stat, const PermFn& perm_stat,
                                               double center, double half_width,
                                               int points = 20000) {
    const double inf = std::numeric_limits<double>::infinity();
    const auto gap = [&](double t) { return obs_stat(t) - perm_stat(t); };

    const auto refine = [&](double inside, double outside) {
        for (int iter = 0; iter < 100; ++iter) {
            const double mid = 0.5 * (inside + outside);
            (gap(mid) < 0.0 ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };

    double lower = -inf, upper = inf;
    double prev_t = center;
    // Right sweep: first point where the observed statistic wins again.
    for (int j = 1; j <= points; ++j) {
        const double t = center + half_width * double(j) / double(points);
        if (gap(t) > 0.0) {
            upper = refine(prev_t, t);
            break;
        }
        prev_t = t;
    }
    prev_t = center;
    for (int j = 1; j <= points; ++j) {
        const double t = center - half_width * double(j) / double(points);
        if (gap(t) > 0.0) {
            lower = refine(prev_t, t);
            break;
        }
        prev_t = t;
    }
    return {lower, upper};
}

// Lexicographic rank of a permutation (for frequency tables over S_n).
inline std::size_t lehmer_index(const permci::Permutation& p) {
    const std::size_t n = p.size();
    std::size_t rank = 0;
    std::size_t fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= i;
    for (std::size_t i = 0; i < n; ++i) {
        fact /= (n - i);
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (p(j) < p(i)) ++smaller;
        rank += smaller * fact;
    }
    return rank;
}

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= double(x.size());
    ybar /= double(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - xbar) * (y[i] - ybar);
        sxx += (x[i] - xbar) * (x[i] - xbar);
    }
    return sxy / sxx;
}

inline double pearson(const std::vector<double>& u, const std::vector<double>& v) {
    double ubar = 0.0, vbar = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        ubar += u[i];
        vbar += v[i];
    }
    ubar /= double(u.size());
    vbar /= double(v.size());
    double suv = 0.0, suu = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suv += (u[i] - ubar) * (v[i] - vbar);
        suu += (u[i] - ubar) * (u[i] - ubar);
        svv += (v[i] - vbar) * (v[i] - vbar);
    }
    return suv / std::sqrt(suu * svv);
}

} // namespace oracle
