// Time integrators for h_t = Delta e^{-Delta h}.
//
// Spectral path: first-order IMEX with the stiff Delta^2 term implicit,
//   hhat^{n+1} = (hhat^n + dt Nhat(h^n)) / (1 + dt |kappa|^4),
// where N = Delta e^{-Delta h} + Delta^2 h is the nonlinear remainder. An
// exponential linear factor (exact semigroup) is available; the second-order
// corrector pass is ETD2RK, which stays damped at high wavenumbers where a
// Crank-Nicolson corrector does not.
//
// FD path: the 1D fully-implicit backward Euler scheme with the 3-point
// periodic Laplacian, solved by Newton iteration on the width-5 cyclic
// banded Jacobian.

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "expde/analysis.hpp"
#include "expde/field.hpp"
#include "expde/log.hpp"
#include "expde/nonlinearity.hpp"
#include "expde/norms.hpp"

namespace expde {

enum class Scheme { spectral_imex, fd_backward_euler };
enum class LinearFactor { implicit_euler, exponential };

struct SchemeConfig {
    Scheme scheme = Scheme::spectral_imex;
    double dt_init = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 0.05;
    bool adapt = true;
    double target_rel_change = 1e-3;  // controller target, relative l2 change per step
    double safety_factor = 0.9;
    double newton_tol = 1e-12;
    int newton_max_iter = 25;
    bool corrector = false;           // second-order ETD2RK pass (implies exponential factor)
    LinearFactor linear_factor = LinearFactor::implicit_euler;
    bool linear_only = false;         // freeze N to 0: h_t + Delta^2 h = 0
    bool dealias = true;

    void validate() const
    {
        if (!(dt_init > 0.0) || !(dt_min > 0.0) || dt_min > dt_init)
            throw std::invalid_argument("SchemeConfig: need 0 < dt_min <= dt_init");
        if (!(newton_tol > 0.0)) throw std::invalid_argument("SchemeConfig: newton_tol must be > 0");
        if (!(safety_factor > 0.0 && safety_factor < 1.0))
            throw std::invalid_argument("SchemeConfig: safety_factor must lie in (0,1)");
    }
};

struct StepResult {
    SpectralField field;
    double dt_used = 0.0;
    int newton_iters = 0;
    StepStatus status = StepStatus::ok;
};

namespace detail {

inline double phi1(double z)
{
    if (std::abs(z) < 1e-5) return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    return (1.0 - std::exp(-z)) / z;
}

inline double phi2(double z)
{
    if (std::abs(z) < 1e-4) return 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
    return (std::exp(-z) - 1.0 + z) / (z * z);
}

// Nhat = rhs + |kappa|^4 hhat; empty result signals blow-up from the rhs.
inline bool nonlinear_remainder(const SpectralField& h, const SchemeConfig& cfg,
                                std::vector<Complex>& out)
{
    const auto& c = h.spectral();
    const Grid& g = h.grid();
    out.assign(c.size(), Complex{});
    if (cfg.linear_only) return true;
    const RhsEvaluation eval = rhs_direct(h, cfg.dealias);
    if (eval.blowup) return false;
    const auto& r = eval.rhs.spectral();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double k2 = g.kappa_sq(i);
        out[i] = r[i] + k2 * k2 * c[i];
    }
    return true;
}

} // namespace detail

[[nodiscard]] inline StepResult step_spectral_imex(const SpectralField& h, double dt,
                                                   const SchemeConfig& cfg)
{
    if (!(dt > 0.0)) throw std::invalid_argument("step_spectral_imex: dt must be > 0");
    const Grid& g = h.grid();
    const auto& c = h.spectral();

    std::vector<Complex> nl;
    if (!detail::nonlinear_remainder(h, cfg, nl))
        return {h, dt, 0, StepStatus::blow_up_detected};

    std::vector<Complex> out(c.size());
    const bool exponential = cfg.corrector || cfg.linear_factor == LinearFactor::exponential;
    if (!exponential) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double k2 = g.kappa_sq(i);
            out[i] = (c[i] + dt * nl[i]) / (1.0 + dt * k2 * k2);
        }
    } else {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double k2 = g.kappa_sq(i);
            const double z = dt * k2 * k2;
            out[i] = std::exp(-z) * c[i] + dt * detail::phi1(z) * nl[i];
        }
        if (cfg.corrector && !cfg.linear_only) {
            out[0] = c[0];
            SpectralField stage = SpectralField::from_spectral(g, out);
            std::vector<Complex> nl2;
            if (!detail::nonlinear_remainder(stage, cfg, nl2))
                return {h, dt, 0, StepStatus::blow_up_detected};
            const auto& s = stage.spectral();
            for (std::size_t i = 0; i < c.size(); ++i) {
                const double k2 = g.kappa_sq(i);
                const double z = dt * k2 * k2;
                out[i] = s[i] + dt * detail::phi2(z) * (nl2[i] - nl[i]);
            }
        }
    }
    out[0] = c[0];  // mean mode conserved exactly

    for (const Complex& v : out)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return {h, dt, 0, StepStatus::dt_reduced};
    return {SpectralField::from_spectral(g, std::move(out)), dt, 0, StepStatus::ok};
}

// Optional manufactured-solution forcing f(x, t), evaluated at the implicit level.
using ForcingFn = std::function<double(double x, double t)>;

[[nodiscard]] inline StepResult step_fd_backward_euler(const SpectralField& h, double dt,
                                                       const SchemeConfig& cfg, double t_new = 0.0,
                                                       const ForcingFn& forcing = nullptr)
{
    if (!(dt > 0.0)) throw std::invalid_argument("step_fd_backward_euler: dt must be > 0");
    const Grid& g = h.grid();
    if (g.dim != 1) throw std::invalid_argument("step_fd_backward_euler: 1D grids only");
    const int n = g.n;
    const double dx = g.length / n;
    const double c2 = 1.0 / (dx * dx);

    const std::vector<double>& hn = h.physical();
    std::vector<double> gcur = hn;
    std::vector<double> u(n), w(n), F(n);

    const auto lap = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (int i = 0; i < n; ++i) {
            const int im = (i + n - 1) % n;
            const int ip = (i + 1) % n;
            out[i] = c2 * (v[ip] - 2.0 * v[i] + v[im]);
        }
    };

    Eigen::SparseMatrix<double> J(n, n);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5 * n));
    Eigen::VectorXd rhs(n);

    for (int it = 1; it <= cfg.newton_max_iter; ++it) {
        lap(gcur, u);
        double sup_neg = 0.0;
        for (int i = 0; i < n; ++i) sup_neg = std::max(sup_neg, -u[i]);
        if (sup_neg > kBlowupExponent) return {h, dt, it, StepStatus::dt_reduced};
        for (int i = 0; i < n; ++i) w[i] = std::exp(-u[i]);
        lap(w, F);  // F temporarily holds Delta_h w
        double res_max = 0.0;
        for (int i = 0; i < n; ++i) {
            double f = gcur[i] - dt * F[i] - hn[i];
            if (forcing) f -= dt * forcing(g.axis_coord(i), t_new);
            F[i] = f;
            res_max = std::max(res_max, std::abs(f));
        }
        if (res_max < cfg.newton_tol) {
            for (double v : gcur)
                if (!std::isfinite(v)) return {h, dt, it, StepStatus::dt_reduced};
            return {SpectralField::from_physical(g, std::move(gcur)), dt, it, StepStatus::ok};
        }

        // J = I + dt L diag(w) L, a width-5 cyclic banded matrix.
        trip.clear();
        const double a = dt * c2 * c2;
        for (int i = 0; i < n; ++i) {
            const int im = (i + n - 1) % n;
            const int ip = (i + 1) % n;
            trip.emplace_back(i, (i + n - 2) % n, a * w[im]);
            trip.emplace_back(i, im, a * (-2.0 * w[im] - 2.0 * w[i]));
            trip.emplace_back(i, i, 1.0 + a * (w[im] + 4.0 * w[i] + w[ip]));
            trip.emplace_back(i, ip, a * (-2.0 * w[i] - 2.0 * w[ip]));
            trip.emplace_back(i, (i + 2) % n, a * w[ip]);
        }
        J.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
        solver.compute(J);
        if (solver.info() != Eigen::Success) return {h, dt, it, StepStatus::dt_reduced};
        for (int i = 0; i < n; ++i) rhs(i) = F[i];
        const Eigen::VectorXd delta = solver.solve(rhs);
        if (solver.info() != Eigen::Success) return {h, dt, it, StepStatus::dt_reduced};
        for (int i = 0; i < n; ++i) gcur[i] -= delta(i);
    }
    return {h, dt, cfg.newton_max_iter, StepStatus::dt_reduced};  // caller halves dt
}

struct BlowupState {
    double w2inf_initial = 0.0;
    bool dt_floor_hit = false;
};

inline constexpr double kBlowupGrowthFactor = 1e6;

// Blow-up when sup(-Delta h) > 700, the W^{2,inf} proxy grew 1e6-fold, or the
// step controller was forced below dt_min.
[[nodiscard]] inline bool detect_blowup(const SpectralField& state, const BlowupState& ctx)
{
    if (ctx.dt_floor_hit) return true;
    if (!state.spectral_finite()) return true;
    if (sup_neg_laplacian(state) > kBlowupExponent) return true;
    const MaxNorms m = max_norms(state);
    return ctx.w2inf_initial > 0.0 && (m.sup_h + m.sup_lap) >= kBlowupGrowthFactor * ctx.w2inf_initial;
}

// What the integrator records per accepted step.
struct LogSpec {
    NormRequest norms;
    bool with_radius = true;
    double radius_floor = 1e-14;
    double sigma21 = 0.0;  // Lyapunov column weight; 0 when the smallness hypothesis fails
};

namespace detail {

inline std::vector<std::string> log_columns(const LogSpec& spec)
{
    std::vector<std::string> cols;
    for (double s : spec.norms.s_values) cols.push_back(snorm_column(s));
    for (double s : spec.norms.besov_values) cols.push_back(besov_column(s));
    for (auto [s, p] : spec.norms.fsp_pairs) cols.push_back(fsp_column(s, p));
    for (auto [s, nu] : spec.norms.analytic_pairs) cols.push_back(analytic_column(s, nu));
    cols.insert(cols.end(), {"sup_h", "sup_lap", "k1_amp", "radius", "radius_modes",
                             "dissipation_integral", "lyapunov"});
    return cols;
}

inline void append_row(TimeSeriesLog& log, const LogSpec& spec, const SpectralField& h, double t,
                       double dt, StepStatus status, double dissipation)
{
    TimeSeriesLog::Row row;
    row.t = t;
    row.dt = dt;
    row.status = status;
    row.values.reserve(log.columns.size());
    const NormReport rep = compute_norms(h, spec.norms);
    for (double s : spec.norms.s_values) row.values.push_back(rep.s_norms.at(s));
    for (double s : spec.norms.besov_values) row.values.push_back(rep.besov_norms.at(s));
    for (auto [s, p] : spec.norms.fsp_pairs) row.values.push_back(rep.fsp_norms.at({s, p}));
    for (auto [s, nu] : spec.norms.analytic_pairs)
        row.values.push_back(rep.analytic_norms.at({s, nu}));
    row.values.push_back(rep.max_norms.sup_h);
    row.values.push_back(rep.max_norms.sup_lap);
    row.values.push_back(lowest_mode_amplitude(h));
    if (spec.with_radius) {
        const RadiusEstimate re = estimate_radius(h, spec.radius_floor);
        row.values.push_back(re.nu);
        row.values.push_back(static_cast<double>(re.modes_used));
    } else {
        row.values.push_back(0.0);
        row.values.push_back(0.0);
    }
    row.values.push_back(dissipation);
    const int s2_idx = log.column_index(snorm_column(2.0));
    const double s2 = s2_idx >= 0 ? row.values[static_cast<std::size_t>(s2_idx)] : 0.0;
    row.values.push_back(s2 + spec.sigma21 * dissipation);
    log.rows.push_back(std::move(row));
}

} // namespace detail

// Advances h0 to t_end, logging every accepted step. Terminates early with
// blow_up_detected status and the last finite state when detected; the
// abort callback (when set) receives that state for checkpointing.
struct IntegrationResult {
    TimeSeriesLog log;
    SpectralField final_field;
    double final_time = 0.0;
    StepStatus status = StepStatus::ok;
};

using AbortCallback = std::function<void(const SpectralField&, double t, double dt)>;
using StepCallback = std::function<void(const SpectralField&, const TimeSeriesLog&)>;

[[nodiscard]] inline IntegrationResult integrate(const SpectralField& h0, double t_end,
                                                 const SchemeConfig& cfg, const LogSpec& spec = {},
                                                 const AbortCallback& on_abort = nullptr,
                                                 const StepCallback& on_step = nullptr)
{
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be > 0");
    cfg.validate();

    IntegrationResult result;
    result.log.columns = detail::log_columns(spec);

    SpectralField h = h0;
    double t = 0.0;
    double dt = cfg.dt_init;
    double prev_rel = cfg.target_rel_change;

    const MaxNorms m0 = max_norms(h0);
    BlowupState blowctx{m0.sup_h + m0.sup_lap, false};

    CompensatedSum dissipation;
    double s6_prev = s_norm(h, 6.0);
    double h_l2 = fsp_norm(h, 0.0, 2.0);
    detail::append_row(result.log, spec, h, 0.0, dt, StepStatus::ok, 0.0);
    if (on_step) on_step(h, result.log);

    const auto abort_blowup = [&](double dt_at) {
        result.log.rows.back().status = StepStatus::blow_up_detected;
        result.status = StepStatus::blow_up_detected;
        result.final_field = h;
        result.final_time = t;
        if (on_abort) on_abort(h, t, dt_at);
    };

    while (t < t_end * (1.0 - 1e-14)) {
        const double dt_try = std::min(dt, t_end - t);
        StepResult step = cfg.scheme == Scheme::spectral_imex
                              ? step_spectral_imex(h, dt_try, cfg)
                              : step_fd_backward_euler(h, dt_try, cfg, t + dt_try);

        if (step.status == StepStatus::blow_up_detected) {
            abort_blowup(dt_try);
            return result;
        }
        if (step.status == StepStatus::dt_reduced) {
            dt = dt_try / 2.0;
            if (dt < cfg.dt_min) {
                blowctx.dt_floor_hit = true;
                abort_blowup(dt);
                return result;
            }
            continue;
        }

        // Accept/reject on the relative l2 change per step.
        double rel = 0.0;
        if (cfg.adapt) {
            const double dl2 = fsp_norm(step.field - h, 0.0, 2.0);
            rel = dl2 / std::max(h_l2, 1e-300);
            if (rel > 10.0 * cfg.target_rel_change && dt_try > cfg.dt_min) {
                dt = dt_try / 2.0;
                if (dt < cfg.dt_min) {
                    blowctx.dt_floor_hit = true;
                    abort_blowup(dt);
                    return result;
                }
                continue;
            }
        }

        h = std::move(step.field);
        t += dt_try;
        h_l2 = fsp_norm(h, 0.0, 2.0);
        const double s6 = s_norm(h, 6.0);
        dissipation.add(0.5 * (s6 + s6_prev) * dt_try);
        s6_prev = s6;
        detail::append_row(result.log, spec, h, t, dt_try, StepStatus::ok, dissipation.value());
        if (on_step) on_step(h, result.log);

        if (detect_blowup(h, blowctx)) {
            abort_blowup(dt_try);
            return result;
        }

        if (cfg.adapt) {
            // PI-style controller on the per-step relative change.
            const double r = std::max(rel, 1e-16);
            double fac = cfg.safety_factor * std::pow(cfg.target_rel_change / r, 0.4) *
                         std::pow(prev_rel / r, 0.2);
            fac = std::clamp(fac, 0.2, 2.0);
            dt = std::clamp(dt_try * fac, cfg.dt_min, cfg.dt_max);
            prev_rel = r;
        }
    }

    result.final_field = h;
    result.final_time = t;
    result.status = StepStatus::ok;
    return result;
}

} // namespace expde
