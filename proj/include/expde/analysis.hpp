// Post-hoc monitors and estimators over run logs: the Lyapunov functional
// ||h||_2(t) + sigma int_0^t ||h||_6, F^{s,p} monotonicity, decay-rate model
// fitting, and the analyticity-radius estimator.

#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "expde/field.hpp"
#include "expde/log.hpp"
#include "expde/norms.hpp"
#include "expde/numeric.hpp"

namespace expde {

[[nodiscard]] inline std::string format_index(double v)
{
    char buf[32];
    if (v == static_cast<double>(static_cast<long long>(v)))
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    else
        std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

[[nodiscard]] inline std::string snorm_column(double s) { return "snorm_" + format_index(s); }
[[nodiscard]] inline std::string besov_column(double s) { return "besov_" + format_index(s); }
[[nodiscard]] inline std::string fsp_column(double s, double p)
{
    return "fsp_" + format_index(s) + "_" + format_index(p);
}
[[nodiscard]] inline std::string analytic_column(double s, double nu)
{
    return "anorm_" + format_index(s) + "_" + format_index(nu);
}

// Trapezoid integral of a log column against t, evaluated at every row.
[[nodiscard]] inline std::vector<double> trapezoid_integral(const TimeSeriesLog& log,
                                                            const std::string& column)
{
    const auto y = log.column(column);
    const auto t = log.times();
    std::vector<double> out(y.size(), 0.0);
    CompensatedSum acc;
    for (std::size_t i = 1; i < y.size(); ++i) {
        acc.add(0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]));
        out[i] = acc.value();
    }
    return out;
}

// max over t of ||h||_2(t) + sigma int_0^t ||h||_6 - ||h0||_2 (trapezoid rule).
[[nodiscard]] inline double lyapunov_monitor(const TimeSeriesLog& log, double sigma)
{
    if (log.rows.empty()) return 0.0;
    const auto s2 = log.column(snorm_column(2.0));
    const auto integral = trapezoid_integral(log, snorm_column(6.0));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s2.size(); ++i)
        worst = std::max(worst, s2[i] + sigma * integral[i] - s2[0]);
    return worst;
}

// Largest increase of ||h||_{F^{s,p}} between consecutive samples.
[[nodiscard]] inline double fsp_decrease_monitor(const TimeSeriesLog& log, double s, double p)
{
    const auto y = log.column(fsp_column(s, p));
    double worst = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) worst = std::max(worst, y[i] - y[i - 1]);
    return worst;
}

enum class DecayModel { algebraic, exponential };

struct DecayFit {
    double s = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    DecayModel model = DecayModel::exponential;
    double rate = 0.0;      // r in (1+t)^{-r} or lambda in e^{-lambda t}
    double residual = 0.0;  // rms log-space residual of the chosen model
    bool valid = false;
};

// Least-squares fit of both decay models on a window of an s-norm column;
// returns the better-residual model. Degenerate windows come back flagged.
[[nodiscard]] inline DecayFit fit_decay(const TimeSeriesLog& log, double s, double t_lo, double t_hi)
{
    DecayFit fit;
    fit.s = s;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    const auto y = log.column(snorm_column(s));
    const auto t = log.times();
    std::vector<double> ts, logy, log1pt;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi) continue;
        if (!(y[i] > 0.0)) return fit;  // flagged invalid
        ts.push_back(t[i]);
        logy.push_back(std::log(y[i]));
        log1pt.push_back(std::log1p(t[i]));
    }
    if (ts.size() < 10) return fit;
    const LineFit alg = fit_line(log1pt, logy);
    const LineFit expf = fit_line(ts, logy);
    if (alg.rms_residual < expf.rms_residual) {
        fit.model = DecayModel::algebraic;
        fit.rate = -alg.slope;
        fit.residual = alg.rms_residual;
    } else {
        fit.model = DecayModel::exponential;
        fit.rate = -expf.slope;
        fit.residual = expf.rms_residual;
    }
    fit.valid = true;
    return fit;
}

struct RadiusEstimate {
    double nu = 0.0;
    int modes_used = 0;
    bool degenerate = true;
};

// Least-squares slope of -log|hhat_k| against |kappa| over the band
// floor < |hhat_k| < 1e-3 max|hhat|, excluding the top decade of wavenumbers
// (round-off floor). Fewer than 3 usable modes returns 0, flagged.
[[nodiscard]] inline RadiusEstimate estimate_radius(const SpectralField& field, double floor = 1e-14)
{
    const auto& c = field.spectral();
    const Grid& g = field.grid();
    double cmax = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) cmax = std::max(cmax, std::abs(c[i]));
    RadiusEstimate est;
    if (cmax == 0.0) return est;

    const double k_cut = 0.9 * g.kappa_max();
    const double upper = 1e-3 * cmax;
    std::vector<double> ks, neglog;
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double ka = g.kappa_abs(i);
        if (ka == 0.0 || ka > k_cut) continue;
        const double mag = std::abs(c[i]);
        if (mag <= floor || mag >= upper) continue;
        ks.push_back(ka);
        neglog.push_back(-std::log(mag));
    }
    est.modes_used = static_cast<int>(ks.size());
    if (est.modes_used < 3) return est;
    est.nu = fit_line(ks, neglog).slope;
    est.degenerate = false;
    return est;
}

struct RadiusModelFit {
    double a = 0.0;  // nu(t)^4 = c + a t
    double c = 0.0;
    double rms_residual = 0.0;
};

// Linear fit of nu^4 against t, the radius-growth model with free parameters.
[[nodiscard]] inline RadiusModelFit fit_radius_model(std::span<const double> t,
                                                     std::span<const double> nu)
{
    if (t.size() != nu.size() || t.size() < 3)
        throw std::invalid_argument("fit_radius_model: need >= 3 samples");
    std::vector<double> nu4(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) nu4[i] = std::pow(nu[i], 4);
    const LineFit f = fit_line(t, nu4);
    return {f.slope, f.intercept, f.rms_residual};
}

// |hhat| at the lowest nonzero mode (k=1 axis mode), the slowest linear mode.
[[nodiscard]] inline double lowest_mode_amplitude(const SpectralField& field)
{
    return std::abs(field.spectral()[1]);
}

} // namespace expde
