// Fourier-side norm families on periodic fields.
//
// All sums run over nonzero wavenumbers (homogeneous norms quotient constants;
// the mean mode is conserved by the PDE anyway). Accumulation is compensated
// for reproducibility.

#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expde/field.hpp"
#include "expde/numeric.hpp"

namespace expde {

// s-norm: sum_{k != 0} |kappa|^s |hhat_k|.
[[nodiscard]] inline double s_norm(const SpectralField& field, double s)
{
    const auto& c = field.spectral();
    const Grid& g = field.grid();
    CompensatedSum acc;
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double ka = g.kappa_abs(i);
        if (ka == 0.0) continue;
        const double mag = std::abs(c[i]);
        if (mag == 0.0) continue;
        acc.add(std::pow(ka, s) * mag);
    }
    return acc.value();
}

// Besov-type s-norm: max over dyadic shells 2^{m-1} <= |kappa| < 2^m.
[[nodiscard]] inline double besov_norm(const SpectralField& field, double s)
{
    const auto& c = field.spectral();
    const Grid& g = field.grid();
    std::map<int, CompensatedSum> shells;
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double ka = g.kappa_abs(i);
        if (ka == 0.0) continue;
        const double mag = std::abs(c[i]);
        if (mag == 0.0) continue;
        const int m = static_cast<int>(std::floor(std::log2(ka))) + 1;
        shells[m].add(std::pow(ka, s) * mag);
    }
    double best = 0.0;
    for (auto& [m, acc] : shells) best = std::max(best, acc.value());
    return best;
}

// Homogeneous F^{s,p} norm: (sum_{k != 0} |kappa|^{sp} |hhat_k|^p)^{1/p}.
[[nodiscard]] inline double fsp_norm(const SpectralField& field, double s, double p)
{
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("fsp_norm: p must lie in [1,2]");
    const auto& c = field.spectral();
    const Grid& g = field.grid();
    CompensatedSum acc;
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double ka = g.kappa_abs(i);
        if (ka == 0.0) continue;
        const double mag = std::abs(c[i]);
        if (mag == 0.0) continue;
        acc.add(std::pow(ka, s * p) * std::pow(mag, p));
    }
    return std::pow(acc.value(), 1.0 / p);
}

// Analytic-weight norm: (sum |kappa|^{sp} e^{p nu |kappa|} |hhat|^p)^{1/p}.
// Throws std::range_error when the weighted terms overflow; shrink nu.
[[nodiscard]] inline double analytic_norm(const SpectralField& field, double s, double nu,
                                          double p = 1.0)
{
    if (nu < 0.0 || !std::isfinite(nu)) throw std::invalid_argument("analytic_norm: nu must be >= 0");
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("analytic_norm: p must lie in [1,2]");
    const auto& c = field.spectral();
    const Grid& g = field.grid();
    CompensatedSum acc;
    constexpr double kLogMax = 709.0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double ka = g.kappa_abs(i);
        if (ka == 0.0) continue;
        const double mag = std::abs(c[i]);
        if (mag == 0.0) continue;
        const double log_term = p * (s * std::log(ka) + nu * ka + std::log(mag));
        if (log_term > kLogMax)
            throw std::range_error("analytic_norm: weight overflow, shrink nu");
        acc.add(std::exp(log_term));
    }
    const double total = acc.value();
    if (!std::isfinite(total)) throw std::range_error("analytic_norm: sum overflow, shrink nu");
    return std::pow(total, 1.0 / p);
}

struct MaxNorms {
    double sup_h = 0.0;
    double sup_lap = 0.0;  // sup|Delta h|, the W^{2,inf} ingredient
};

[[nodiscard]] inline MaxNorms max_norms(const SpectralField& field)
{
    MaxNorms m;
    m.sup_h = field.max_abs_physical();
    m.sup_lap = field.laplacian().max_abs_physical();
    return m;
}

// Which norms a caller wants evaluated at one time.
struct NormRequest {
    std::vector<double> s_values{2.0, 6.0};
    std::vector<std::pair<double, double>> fsp_pairs{{0.0, 2.0}};
    std::vector<double> besov_values{2.0};
    std::vector<std::pair<double, double>> analytic_pairs;  // (s, nu)

    friend bool operator==(const NormRequest&, const NormRequest&) = default;
};

struct NormReport {
    std::map<double, double> s_norms;
    std::map<double, double> besov_norms;
    std::map<std::pair<double, double>, double> fsp_norms;
    std::map<std::pair<double, double>, double> analytic_norms;
    MaxNorms max_norms;
};

[[nodiscard]] inline NormReport compute_norms(const SpectralField& field, const NormRequest& req)
{
    NormReport r;
    for (double s : req.s_values) r.s_norms[s] = s_norm(field, s);
    for (double s : req.besov_values) r.besov_norms[s] = besov_norm(field, s);
    for (auto [s, p] : req.fsp_pairs) r.fsp_norms[{s, p}] = fsp_norm(field, s, p);
    for (auto [s, nu] : req.analytic_pairs) r.analytic_norms[{s, nu}] = analytic_norm(field, s, nu);
    r.max_norms = max_norms(field);
    return r;
}

} // namespace expde
