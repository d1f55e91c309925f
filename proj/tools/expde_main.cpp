// Command-line driver: run configured experiments, the three preset runs,
// amplitude sweeps, the constants table, and post-hoc log analysis.
//
// Exit codes: 0 success, 2 run ended with blow_up_detected (expected-abnormal),
// 1 error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expde/expde.hpp"

namespace {

namespace fs = std::filesystem;

fs::path output_root(const std::string& cli_out)
{
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("EXPDE_OUTPUT_ROOT")) return env;
    return "expde_out";
}

std::string read_file(const fs::path& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

int finish_run(const expde::RunArtifacts& art)
{
    std::cout << "status: " << expde::to_string(art.status) << "\n"
              << "t_final: " << art.final_time << "\n"
              << "||h0||_2: " << art.h0_norm2 << " (smallness "
              << (art.hypothesis_holds ? "holds" : "fails") << ", sigma_21 = " << art.sigma21
              << ")\n";
    if (!art.dir.empty()) std::cout << "artifacts: " << art.dir.string() << "\n";
    return art.status == expde::StepStatus::blow_up_detected ? 2 : 0;
}

std::vector<double> parse_double_list(const std::string& csv)
{
    std::vector<double> out;
    std::istringstream is(csv);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"numerical laboratory for the exponential growth equation h_t = Delta e^{-Delta h}"};
    app.require_subcommand(1);

    std::string out_dir;
    app.add_option("--out", out_dir, "output root (default $EXPDE_OUTPUT_ROOT or ./expde_out)");

    // run <config>
    auto* cmd_run = app.add_subcommand("run", "run a config file");
    std::string run_config_path;
    std::vector<std::string> run_overrides;
    cmd_run->add_option("config", run_config_path, "config file")->required();
    cmd_run->add_option("--set", run_overrides, "override section.key=value (repeatable)");

    // preset <fig1|fig2|fig3>
    auto* cmd_preset = app.add_subcommand("preset", "run a preset experiment");
    std::string preset_name;
    std::vector<std::string> preset_overrides;
    cmd_preset->add_option("name", preset_name, "fig1 | fig2 | fig3")->required();
    cmd_preset->add_option("--set", preset_overrides, "override section.key=value (repeatable)");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "run an amplitude sweep");
    std::string sweep_amps = "0.1,0.3,3.0";
    std::string sweep_config_path;
    int sweep_workers = 2;
    std::vector<std::string> sweep_overrides;
    cmd_sweep->add_option("--amplitudes", sweep_amps, "comma-separated amplitudes, ascending");
    cmd_sweep->add_option("--config", sweep_config_path, "base config file (optional)");
    cmd_sweep->add_option("--workers", sweep_workers, "concurrent runs");
    cmd_sweep->add_option("--set", sweep_overrides, "override section.key=value (repeatable)");

    // constants
    auto* cmd_constants = app.add_subcommand("constants", "print y*, f_2 checks and sigma table as JSON");
    double constants_tol = 1e-12;
    std::string constants_h0 = "0.05,0.1";
    cmd_constants->add_option("--tol", constants_tol, "root tolerance");
    cmd_constants->add_option("--h0", constants_h0, "comma-separated ||h0||_2 values for the sigma table");

    // analyze <log.csv>
    auto* cmd_analyze = app.add_subcommand("analyze", "analyze a time-series CSV");
    std::string analyze_path;
    std::string analyze_json_out;
    cmd_analyze->add_option("log", analyze_path, "timeseries.csv from a run")->required();
    cmd_analyze->add_option("--json", analyze_json_out, "write the report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_constants) {
            const auto j = expde::constants_json(constants_tol,
                                                 {{2.0, 1.0}, {0.0, 2.0}, {2.0, 2.0}},
                                                 parse_double_list(constants_h0));
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (*cmd_run) {
            expde::RunConfig cfg = expde::parse_config(read_file(run_config_path));
            for (const auto& ov : run_overrides) expde::apply_override(cfg, ov);
            if (cfg.output.dir.empty())
                cfg.output.dir = (output_root(out_dir) / cfg.output.label).string();
            return finish_run(expde::run_one(cfg));
        }

        if (*cmd_preset) {
            expde::RunConfig cfg = expde::preset_config(preset_name);
            for (const auto& ov : preset_overrides) expde::apply_override(cfg, ov);
            if (cfg.output.dir.empty())
                cfg.output.dir = (output_root(out_dir) / preset_name).string();
            return finish_run(expde::run_one(cfg));
        }

        if (*cmd_sweep) {
            expde::RunConfig base;
            if (!sweep_config_path.empty()) base = expde::parse_config(read_file(sweep_config_path));
            for (const auto& ov : sweep_overrides) expde::apply_override(base, ov);
            const fs::path root = output_root(out_dir) / "sweep";
            base.output.dir = root.string();
            const auto rows = expde::run_sweep(parse_double_list(sweep_amps), base, sweep_workers);
            fs::create_directories(root);
            expde::write_sweep_csv(rows, root / "sweep_summary.csv");
            bool any_error = false;
            for (const auto& r : rows) {
                std::cout << "A = " << r.amplitude << ": " << r.status;
                if (r.blowup_t_lower >= 0.0) std::cout << " (blow-up t >= " << r.blowup_t_lower << ")";
                if (!r.error.empty()) {
                    std::cout << " [" << r.error << "]";
                    any_error = true;
                }
                std::cout << "\n";
            }
            std::cout << "summary: " << (root / "sweep_summary.csv").string() << "\n";
            return any_error ? 1 : 0;
        }

        if (*cmd_analyze) {
            const expde::TimeSeriesLog log = expde::read_timeseries_csv(analyze_path);
            // Self-contained: recover sigma from the first logged ||h||_2.
            double sigma21 = 0.0;
            bool hypothesis = false;
            if (!log.rows.empty() && log.has_column(expde::snorm_column(2.0))) {
                const double h0n = log.value(0, expde::snorm_column(2.0));
                const double ystar = expde::series::solve_y_star(2.0, 1e-12);
                hypothesis = h0n < ystar;
                if (hypothesis) sigma21 = expde::series::sigma_constant(2.0, 1.0, h0n);
            }
            const auto rep = expde::analysis_report(log, sigma21, hypothesis);
            if (analyze_json_out.empty()) {
                std::cout << rep.dump(2) << "\n";
            } else {
                std::ofstream os(analyze_json_out);
                os << rep.dump(2) << "\n";
                std::cout << "report: " << analyze_json_out << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
