// Experiment front end: initial-data construction, the three preset runs
// (A = 0.1 / 0.3 / 3.0 on [0, 2pi]), amplitude sweeps, the constants table,
// and all emitted artifacts (CSV, sidecar, snapshots, analysis JSON).

#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "expde/analysis.hpp"
#include "expde/config.hpp"
#include "expde/io.hpp"
#include "expde/series.hpp"
#include "expde/time_integration.hpp"

namespace expde {

[[nodiscard]] inline SpectralField build_initial_field(const RunConfig& cfg)
{
    const Grid& g = cfg.grid;
    const double two_pi_over_L = 2.0 * std::numbers::pi / g.length;
    switch (cfg.initial.kind) {
    case InitialKind::zero:
        return SpectralField::zero(g);
    case InitialKind::sine: {
        std::vector<double> h(g.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
            const int ix = g.dim == 1 ? static_cast<int>(i) : static_cast<int>(i) % g.n;
            h[i] = cfg.initial.amplitude * std::sin(two_pi_over_L * g.axis_coord(ix));
        }
        return SpectralField::from_physical(g, std::move(h));
    }
    case InitialKind::modes: {
        std::vector<double> h(g.size(), 0.0);
        for (std::size_t i = 0; i < h.size(); ++i) {
            const int ix = g.dim == 1 ? static_cast<int>(i) : static_cast<int>(i) % g.n;
            const double x = g.axis_coord(ix);
            for (const auto& m : cfg.initial.modes)
                h[i] += m[1] * std::sin(m[0] * two_pi_over_L * x + m[2]);
        }
        return SpectralField::from_physical(g, std::move(h));
    }
    case InitialKind::random: {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> unif(0.5, 1.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        std::vector<Complex> c(g.size(), Complex{});
        const int kmax = std::max(2, g.n / 8);
        if (g.dim == 1) {
            for (int k = 1; k <= kmax; ++k) {
                const double amp = std::exp(-cfg.initial.decay * k) * unif(rng);
                const Complex v = 0.5 * amp * std::polar(1.0, phase(rng));
                c[static_cast<std::size_t>(k)] = v;
                c[static_cast<std::size_t>(g.n - k)] = std::conj(v);
            }
        } else {
            for (int ky = -kmax; ky <= kmax; ++ky)
                for (int kx = 0; kx <= kmax; ++kx) {
                    if (kx == 0 && ky <= 0) continue;
                    const double kk = std::hypot(static_cast<double>(kx), static_cast<double>(ky));
                    if (kk > kmax) continue;
                    const double amp = std::exp(-cfg.initial.decay * kk) * unif(rng);
                    const Complex v = 0.5 * amp * std::polar(1.0, phase(rng));
                    const int ix = kx;
                    const int iy = (ky + g.n) % g.n;
                    const int jx = (g.n - kx) % g.n;
                    const int jy = (g.n - ky) % g.n;
                    c[static_cast<std::size_t>(iy) * g.n + ix] = v;
                    c[static_cast<std::size_t>(jy) * g.n + jx] = std::conj(v);
                }
        }
        SpectralField f = SpectralField::from_spectral(g, std::move(c));
        const double s2 = s_norm(f, 2.0);
        if (s2 > 0.0 && cfg.initial.amplitude > 0.0) f = f.scaled(cfg.initial.amplitude / s2);
        return f;
    }
    }
    throw std::logic_error("build_initial_field: unreachable");
}

// The three preset runs from the periodic simulations: decaying (A=0.1),
// non-monotone (A=0.3), and finite-time blow-up (A=3).
[[nodiscard]] inline RunConfig preset_config(const std::string& name)
{
    RunConfig cfg;
    cfg.grid = Grid{1, 256};
    cfg.initial.kind = InitialKind::sine;
    cfg.norms.s_values = {2.0, 6.0};
    cfg.norms.besov_values = {2.0};
    cfg.norms.fsp_pairs = {{0.0, 2.0}};
    cfg.output.label = name;
    if (name == "fig1") {
        cfg.initial.amplitude = 0.1;
        cfg.t_end = 10.0;
    } else if (name == "fig2") {
        cfg.initial.amplitude = 0.3;
        cfg.t_end = 10.0;
    } else if (name == "fig3") {
        cfg.initial.amplitude = 3.0;
        cfg.t_end = 1.0;
        cfg.scheme.dt_init = 1e-5;
    } else {
        throw std::invalid_argument("unknown preset (want fig1|fig2|fig3): " + name);
    }
    return cfg;
}

struct RunArtifacts {
    RunConfig config;
    TimeSeriesLog log;
    SpectralField final_field;
    double final_time = 0.0;
    StepStatus status = StepStatus::ok;
    double h0_norm2 = 0.0;
    double sigma21 = 0.0;           // raw 1 - f_2(||h0||_2); may be <= 0
    bool hypothesis_holds = false;  // ||h0||_2 < y*
    std::filesystem::path dir;      // empty when no files were written
};

namespace run_detail {

inline std::vector<double> snapshot_times(const RunConfig& cfg)
{
    std::vector<double> ts{0.0};
    const int count = cfg.output.snapshots;
    if (count <= 0) return ts;
    const double t0 = std::min(cfg.output.snapshot_t_first, cfg.t_end);
    if (count == 1 || t0 >= cfg.t_end) {
        ts.push_back(cfg.t_end);
        return ts;
    }
    const double ratio = std::pow(cfg.t_end / t0, 1.0 / (count - 1));
    for (int i = 0; i < count; ++i) ts.push_back(t0 * std::pow(ratio, i));
    return ts;
}

inline std::string snap_name(std::size_t idx, const char* kind)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "snap_%03zu_%s.csv", idx, kind);
    return buf;
}

} // namespace run_detail

// Post-hoc analysis over a finished log: Lyapunov violation, F^{s,p}
// monotonicity, decay fits against the slowest mode, radius trend and the
// (a, c) growth-model fit (reported, not asserted).
[[nodiscard]] inline nlohmann::json analysis_report(const TimeSeriesLog& log, double sigma21,
                                                    bool hypothesis_holds)
{
    nlohmann::json j;
    j["status"] = to_string(log.final_status());
    if (log.rows.empty()) return j;

    const double sigma_used = hypothesis_holds ? sigma21 : 0.0;
    j["sigma21"] = sigma21;
    j["hypothesis_holds"] = hypothesis_holds;
    j["lyapunov_max_violation"] = lyapunov_monitor(log, sigma_used);

    const auto s2 = log.column(snorm_column(2.0));
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < s2.size(); ++i)
        worst_increase = std::max(worst_increase, s2[i] - s2[i - 1]);
    j["s2_max_consecutive_increase"] = worst_increase;
    j["s2_strictly_nonincreasing"] = worst_increase <= 0.0;

    for (auto [s, p] : std::vector<std::pair<double, double>>{{0.0, 2.0}})
        if (log.has_column(fsp_column(s, p)))
            j["fsp_max_increase"][fsp_column(s, p)] = fsp_decrease_monitor(log, s, p);

    const double t_end = log.rows.back().t;
    const DecayFit fit = fit_decay(log, 2.0, 0.5 * t_end, t_end);
    if (fit.valid) {
        j["decay_fit_s2"] = {
            {"model", fit.model == DecayModel::exponential ? "exponential" : "algebraic"},
            {"rate", fit.rate},
            {"residual", fit.residual},
            {"window", {fit.t_lo, fit.t_hi}}};
        // slowest-mode reference rate over the same window
        std::vector<double> ts, logk1;
        const auto k1 = log.column("k1_amp");
        const auto times = log.times();
        for (std::size_t i = 0; i < k1.size(); ++i)
            if (times[i] >= fit.t_lo && times[i] <= fit.t_hi && k1[i] > 0.0) {
                ts.push_back(times[i]);
                logk1.push_back(std::log(k1[i]));
            }
        if (ts.size() >= 2) {
            const double lambda_k1 = -fit_line(ts, logk1).slope;
            j["k1_mode_decay_rate"] = lambda_k1;
            if (fit.model == DecayModel::exponential && lambda_k1 != 0.0)
                j["decay_rate_rel_diff_vs_k1"] = std::abs(fit.rate - lambda_k1) / std::abs(lambda_k1);
        }
    }

    if (log.has_column("radius")) {
        const auto radius = log.column("radius");
        const auto times = log.times();
        std::vector<double> rt, rv;
        for (std::size_t i = 0; i < radius.size(); ++i)
            if (radius[i] > 0.0 && times[i] >= 0.01) {
                rt.push_back(times[i]);
                rv.push_back(radius[i]);
            }
        if (!rv.empty()) {
            double running_max = 0.0, worst_drop = 0.0;
            for (double v : rv) {
                if (running_max > 0.0) worst_drop = std::max(worst_drop, (running_max - v) / running_max);
                running_max = std::max(running_max, v);
            }
            j["radius"]["first_positive_t"] = rt.front();
            j["radius"]["last"] = rv.back();
            j["radius"]["max"] = running_max;
            j["radius"]["worst_drop_below_running_max"] = worst_drop;
            j["radius"]["nondecreasing_within_5pct"] = worst_drop <= 0.05;
            if (rv.size() >= 3) {
                const RadiusModelFit rm = fit_radius_model(rt, rv);
                j["radius"]["model_fit"] = {{"a", rm.a}, {"c", rm.c}, {"rms_residual", rm.rms_residual}};
            }
        }
    }
    return j;
}

[[nodiscard]] inline RunArtifacts run_one(const RunConfig& cfg_in)
{
    RunConfig cfg = cfg_in;
    cfg.grid.validate();
    cfg.scheme.validate();

    RunArtifacts art;
    art.config = cfg;

    SpectralField h0 = build_initial_field(cfg);
    art.h0_norm2 = s_norm(h0, 2.0);

    const double y_star = series::solve_y_star(2.0, 1e-12);
    art.hypothesis_holds = art.h0_norm2 < y_star;
    try {
        art.sigma21 = series::sigma_constant(2.0, 1.0, art.h0_norm2);
    } catch (const std::range_error&) {
        art.sigma21 = -std::numeric_limits<double>::infinity();
    }

    LogSpec spec;
    spec.norms = cfg.norms;
    for (double s : {2.0, 6.0})
        if (std::find(spec.norms.s_values.begin(), spec.norms.s_values.end(), s) ==
            spec.norms.s_values.end())
            spec.norms.s_values.push_back(s);
    spec.radius_floor = cfg.radius_floor;
    spec.sigma21 = art.hypothesis_holds ? art.sigma21 : 0.0;

    const bool emit = !cfg.output.dir.empty();
    std::filesystem::path dir;
    std::ofstream stream_csv;
    if (emit) {
        dir = cfg.output.dir;
        std::filesystem::create_directories(dir);
        art.dir = dir;
        if (cfg.output.stream_csv) stream_csv.open(dir / "stream.csv");
    }

    const std::vector<double> snap_times = run_detail::snapshot_times(cfg);
    std::size_t next_snap = 0;
    nlohmann::json snap_index = nlohmann::json::array();

    StepCallback on_step;
    if (emit) {
        on_step = [&](const SpectralField& field, const TimeSeriesLog& log) {
            const auto& row = log.rows.back();
            if (stream_csv.is_open()) {
                if (log.rows.size() == 1) {
                    stream_csv << "t,dt,status";
                    for (const auto& c : log.columns) stream_csv << ',' << c;
                    stream_csv << '\n';
                }
                stream_csv << io_detail::fmt17(row.t) << ',' << io_detail::fmt17(row.dt) << ','
                           << static_cast<int>(row.status);
                for (double v : row.values) stream_csv << ',' << io_detail::fmt17(v);
                stream_csv << '\n';
            }
            while (next_snap < snap_times.size() && row.t >= snap_times[next_snap] * (1.0 - 1e-12)) {
                const std::string prof = run_detail::snap_name(next_snap, "profile");
                const std::string spect = run_detail::snap_name(next_snap, "spectrum");
                write_snapshot_csv(field, dir / prof, dir / spect);
                snap_index.push_back({{"t", row.t}, {"profile", prof}, {"spectrum", spect}});
                ++next_snap;
            }
        };
    }

    AbortCallback on_abort;
    if (emit && cfg.output.checkpoint_on_abort) {
        on_abort = [&](const SpectralField& field, double t, double dt) {
            save_checkpoint(dir / "abort_checkpoint.bin", field, t, dt,
                            StepStatus::blow_up_detected);
        };
    }

    IntegrationResult res = integrate(h0, cfg.t_end, cfg.scheme, spec, on_abort, on_step);
    art.log = std::move(res.log);
    art.final_field = std::move(res.final_field);
    art.final_time = res.final_time;
    art.status = res.status;

    if (emit) {
        write_timeseries_csv(art.log, dir / "timeseries.csv");
        std::string note;
        if (cfg.output.label.rfind("fig", 0) == 0)
            note = "grid size, time horizon, and stepping are artifact choices; "
                   "the source figures state only the initial data and domain";
        write_sidecar_json(dir / "sidecar.json", cfg, art.log, note);
        {
            std::ofstream os(dir / "snapshots.json");
            os << snap_index.dump(2) << '\n';
        }
        {
            nlohmann::json rep = analysis_report(art.log, art.sigma21, art.hypothesis_holds);
            rep["config_hash"] = config_hash(cfg);
            std::ofstream os(dir / "analysis.json");
            os << rep.dump(2) << '\n';
        }
    }
    return art;
}

struct SweepRow {
    double amplitude = 0.0;
    std::string status;
    double min_s2 = 0.0;
    double max_s2 = 0.0;
    double t_last = 0.0;
    double blowup_t_lower = -1.0;  // last finite time when blow-up was detected
    std::string error;
};

// One row per amplitude; failures are recorded per-row and the sweep continues.
[[nodiscard]] inline std::vector<SweepRow> run_sweep(const std::vector<double>& amplitudes,
                                                     const RunConfig& base, int workers = 1)
{
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        if (!(amplitudes[i] > 0.0))
            throw std::invalid_argument("run_sweep: amplitudes must be positive");
        if (i > 0 && amplitudes[i] < amplitudes[i - 1])
            throw std::invalid_argument("run_sweep: amplitudes must be sorted ascending");
    }
    std::vector<SweepRow> rows(amplitudes.size());
    std::atomic<std::size_t> next{0};
    const int nworkers = std::max(1, std::min<int>(workers, static_cast<int>(amplitudes.size())));

    const auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= amplitudes.size()) return;
            SweepRow& row = rows[i];
            row.amplitude = amplitudes[i];
            try {
                RunConfig cfg = base;
                cfg.initial.kind = InitialKind::sine;
                cfg.initial.amplitude = amplitudes[i];
                if (!base.output.dir.empty()) {
                    char sub[48];
                    std::snprintf(sub, sizeof(sub), "A_%g", amplitudes[i]);
                    cfg.output.dir = (std::filesystem::path(base.output.dir) / sub).string();
                    cfg.output.label = sub;
                }
                const RunArtifacts art = run_one(cfg);
                row.status = to_string(art.status);
                const auto s2 = art.log.column(snorm_column(2.0));
                row.min_s2 = *std::min_element(s2.begin(), s2.end());
                row.max_s2 = *std::max_element(s2.begin(), s2.end());
                row.t_last = art.final_time;
                if (art.status == StepStatus::blow_up_detected) row.blowup_t_lower = art.final_time;
            } catch (const std::exception& e) {
                row.status = "error";
                row.error = e.what();
            }
        }
    };

    if (nworkers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nworkers));
        for (int i = 0; i < nworkers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path)
{
    std::ofstream os(path);
    io_detail::require_open(os, path);
    os << "amplitude,status,min_s2,max_s2,t_last,blowup_t_lower,error\n";
    for (const auto& r : rows)
        os << io_detail::fmt17(r.amplitude) << ',' << r.status << ',' << io_detail::fmt17(r.min_s2)
           << ',' << io_detail::fmt17(r.max_s2) << ',' << io_detail::fmt17(r.t_last) << ','
           << io_detail::fmt17(r.blowup_t_lower) << ',' << r.error << '\n';
}

// y* bracket, closed-form checks at the certified interval, sigma table.
[[nodiscard]] inline nlohmann::json constants_json(
    double tol, const std::vector<std::pair<double, double>>& sp_pairs = {{2.0, 1.0}, {0.0, 2.0}, {2.0, 2.0}},
    const std::vector<double>& h0_values = {0.05, 0.1})
{
    const double ys = series::solve_y_star(2.0, tol);
    double lo = ys - 10.0 * tol;
    double hi = ys + 10.0 * tol;
    if (!(series::eval_f2_closed(lo) < 1.0 && series::eval_f2_closed(hi) > 1.0))
        throw std::runtime_error("constants: bracket verification failed");

    nlohmann::json j;
    j["tol"] = tol;
    j["y_star"] = ys;
    j["y_star_bracket"] = {lo, hi};
    j["certified_interval"] = {0.104, 0.105};
    j["f2_at_0.104"] = series::eval_f2_closed(0.104);
    j["f2_at_0.105"] = series::eval_f2_closed(0.105);
    j["f2_at_y_star"] = series::eval_f2_closed(ys);
    nlohmann::json table = nlohmann::json::array();
    for (auto [s, p] : sp_pairs)
        for (double h0 : h0_values) {
            const double sig = series::sigma_constant(s, p, h0);
            table.push_back({{"s", s}, {"p", p}, {"h0_norm2", h0}, {"sigma", sig},
                             {"smallness_holds", sig > 0.0}});
        }
    j["sigma_table"] = table;
    return j;
}

} // namespace expde
