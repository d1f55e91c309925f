// The entire-function family f_s(y) = sum_{j>=2} j^{s+2}/j! y^{j-1}, its
// closed forms, the critical constant y* solving f_s(y*) = 1, and the
// dissipation coefficients sigma_{s,p} = 1 - f_{s+4/p-4}(||h0||_2).
//
// f_s is strictly increasing on y >= 0 with f_s(0) = 0 for every real s.
// The recursion f_s = d/dy (y f_{s-1}), f_{-1} = e^y - 1 gives polynomial
// closed forms P_s(y) e^y - 1 for integer s >= -1; s = 2 yields
// (y^3 + 6y^2 + 7y + 1) e^y - 1.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "expde/numeric.hpp"

namespace expde::series {

struct SeriesValue {
    double value = 0.0;
    double remainder_bound = 0.0;
    int terms_used = 0;
};

namespace detail {

inline void check_y(double y)
{
    if (!std::isfinite(y) || y < 0.0) throw std::invalid_argument("series: y must be finite and >= 0");
}

// Term ratio t_{j+1}/t_j = ((j+1)/j)^{s+2} * y/(j+1); monotone decreasing
// once j >= |s| + 2, so a computed ratio <= 1/2 bounds the tail by twice the
// next term.
inline double term_ratio(double s, double y, int j)
{
    return std::pow((j + 1.0) / j, s + 2.0) * y / (j + 1.0);
}

} // namespace detail

// Partial sum of f_s(y) with a certified tail bound <= tol.
inline SeriesValue eval_f_s(double s, double y, double tol, int max_terms = 2000)
{
    detail::check_y(y);
    if (!std::isfinite(s)) throw std::invalid_argument("series: s must be finite");
    if (!(tol > 0.0)) throw std::invalid_argument("series: tol must be positive");
    if (y == 0.0) return {0.0, 0.0, 0};

    CompensatedSum acc;
    double term = std::pow(2.0, s + 1.0) * y;  // j = 2 term: 2^{s+2}/2! * y
    const int j_min_stop = static_cast<int>(std::ceil(std::abs(s))) + 2;
    for (int j = 2; j <= max_terms; ++j) {
        if (!std::isfinite(term)) throw std::range_error("series: term overflow, y too large");
        acc.add(term);
        const double next = term * detail::term_ratio(s, y, j);
        const double ratio_ahead = detail::term_ratio(s, y, j + 1);
        if (j + 1 >= j_min_stop && ratio_ahead <= 0.5) {
            const double bound = 2.0 * next;
            if (bound <= tol) return {acc.value(), bound, j - 1};
        }
        term = next;
    }
    throw std::range_error("series: no convergence within max_terms");
}

// Tail sum_{j >= from_j} j^{s+2}/j! y^{j-1}, summed directly.
inline double series_tail(double s, double y, int from_j)
{
    detail::check_y(y);
    if (from_j < 2) from_j = 2;
    if (y == 0.0) return 0.0;
    CompensatedSum acc;
    double term = std::exp((s + 2.0) * std::log(static_cast<double>(from_j)) -
                           std::lgamma(from_j + 1.0) + (from_j - 1.0) * std::log(y));
    for (int j = from_j; j < from_j + 2000; ++j) {
        acc.add(term);
        const double next = term * detail::term_ratio(s, y, j);
        if (j >= static_cast<int>(std::abs(s)) + 2 && detail::term_ratio(s, y, j + 1) <= 0.5 &&
            2.0 * next < acc.value() * 1e-18 + std::numeric_limits<double>::min()) {
            return acc.value() + 2.0 * next;
        }
        term = next;
    }
    throw std::range_error("series_tail: no convergence");
}

// f_2 closed form (y^3 + 6y^2 + 7y + 1) e^y - 1.
[[nodiscard]] inline double eval_f2_closed(double y)
{
    detail::check_y(y);
    return (((y + 6.0) * y + 7.0) * y + 1.0) * std::exp(y) - 1.0;
}

// Polynomial P_s with f_s(y) = P_s(y) e^y - 1, built by s+1 applications of
// f_s = d/dy (y f_{s-1}) starting from P_{-1} = 1. Coefficients ascending.
[[nodiscard]] inline std::vector<double> recursion_polynomial(int s)
{
    if (s < -1) throw std::invalid_argument("recursion_polynomial: s must be >= -1");
    std::vector<double> p{1.0};
    for (int level = 0; level <= s; ++level) {
        // Q = P + y P' + y P
        std::vector<double> q(p.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i] += p[i];
            if (i > 0) q[i] += static_cast<double>(i) * p[i];  // (y P')_i = i p_i
            q[i + 1] += p[i];
        }
        p = std::move(q);
    }
    return p;
}

// f_s(y) for integer s >= -1 via the symbolic recursion.
[[nodiscard]] inline double eval_f_s_recursive(int s, double y)
{
    detail::check_y(y);
    const auto poly = recursion_polynomial(s);
    double val = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;) val = val * y + poly[i];
    return val * std::exp(y) - 1.0;
}

// Root of f_{s_eff}(y) = 1 by bracketing plus safeguarded secant/bisection.
// Bracket narrowed to width 1e-14; |f(y) - 1| <= tol verified on return.
[[nodiscard]] inline double solve_y_star(double s_eff, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("solve_y_star: tol must be positive");
    if (tol < 1e-13) throw std::invalid_argument("solve_y_star: tol below double-precision reach");
    const double inner_tol = std::min(tol * 1e-2, 1e-15);
    auto g = [&](double y) { return eval_f_s(s_eff, y, inner_tol).value - 1.0; };

    double lo = 0.0, glo = -1.0;  // f_s(0) = 0
    double hi = 0.25;
    double ghi = g(hi);
    int guard = 0;
    while (ghi < 0.0) {
        lo = hi;
        glo = ghi;
        hi *= 2.0;
        ghi = g(hi);
        if (++guard > 64) throw std::range_error("solve_y_star: bracket expansion failed");
    }

    double best = hi, gbest = ghi;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        // Secant proposal, clipped away from the bracket edges.
        double mid = 0.5 * (lo + hi);
        if (ghi != glo) {
            const double sec = hi - ghi * (hi - lo) / (ghi - glo);
            const double w = hi - lo;
            if (sec > lo + 0.01 * w && sec < hi - 0.01 * w) mid = sec;
        }
        const double gm = g(mid);
        if (std::abs(gm) < std::abs(gbest)) {
            best = mid;
            gbest = gm;
        }
        if (gm == 0.0) break;
        if (gm < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    if (std::abs(gbest) > tol) throw std::range_error("solve_y_star: tolerance not reached");
    return best;
}

// sigma_{s,p} = 1 - f_{s+4/p-4}(h0_norm2). Non-positive when the smallness
// condition fails; the caller decides policy.
[[nodiscard]] inline double sigma_constant(double s, double p, double h0_norm2)
{
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("sigma_constant: p must lie in [1,2]");
    detail::check_y(h0_norm2);
    const double s_eff = s + 4.0 / p - 4.0;
    return 1.0 - eval_f_s(s_eff, h0_norm2, 1e-14).value;
}

struct DissipationConstants {
    double y_star = 0.0;
    std::map<std::pair<double, double>, double> sigma;  // (s, p) -> sigma_{s,p}
};

[[nodiscard]] inline DissipationConstants
make_dissipation_constants(const std::vector<std::pair<double, double>>& sp_pairs, double h0_norm2,
                           double tol = 1e-12)
{
    DissipationConstants d;
    d.y_star = solve_y_star(2.0, tol);
    for (auto [s, p] : sp_pairs) d.sigma[{s, p}] = sigma_constant(s, p, h0_norm2);
    return d;
}

// Smallest J >= 2 with sum_{j > J} j^{s+2}/j! y^{j-1} <= eps.
[[nodiscard]] inline int truncation_order(double s, double y_bound, double eps)
{
    if (!(eps > 0.0)) throw std::invalid_argument("truncation_order: eps must be positive");
    detail::check_y(y_bound);
    if (y_bound == 0.0) return 2;
    for (int J = 2; J < 2000; ++J) {
        if (series_tail(s, y_bound, J + 1) <= eps) return J;
    }
    throw std::range_error("truncation_order: eps unreachable");
}

} // namespace expde::series
