// File artifacts: time-series CSV (with header row), JSON sidecar naming the
// config hash, profile/spectrum snapshot CSVs, and the versioned binary
// checkpoint for restart.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "expde/config.hpp"
#include "expde/field.hpp"
#include "expde/log.hpp"

namespace expde {

namespace io_detail {

inline std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void require_open(const std::ofstream& os, const std::filesystem::path& path)
{
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
}

} // namespace io_detail

inline void write_timeseries_csv(const TimeSeriesLog& log, const std::filesystem::path& path)
{
    std::ofstream os(path);
    io_detail::require_open(os, path);
    os << "t,dt,status";
    for (const auto& c : log.columns) os << ',' << c;
    os << '\n';
    for (const auto& row : log.rows) {
        os << io_detail::fmt17(row.t) << ',' << io_detail::fmt17(row.dt) << ','
           << static_cast<int>(row.status);
        for (double v : row.values) os << ',' << io_detail::fmt17(v);
        os << '\n';
    }
}

inline TimeSeriesLog read_timeseries_csv(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    TimeSeriesLog log;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty csv: " + path.string());
    {
        std::istringstream hs(line);
        std::string col;
        int idx = 0;
        while (std::getline(hs, col, ',')) {
            if (idx >= 3) log.columns.push_back(col);
            ++idx;
        }
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        TimeSeriesLog::Row row;
        int idx = 0;
        while (std::getline(ls, cell, ',')) {
            const double v = std::stod(cell);
            if (idx == 0) row.t = v;
            else if (idx == 1) row.dt = v;
            else if (idx == 2) row.status = static_cast<StepStatus>(static_cast<int>(v));
            else row.values.push_back(v);
            ++idx;
        }
        if (row.values.size() != log.columns.size())
            throw std::runtime_error("csv row width mismatch: " + path.string());
        log.rows.push_back(std::move(row));
    }
    return log;
}

// Sidecar metadata; deterministic for a given config + outcome.
inline void write_sidecar_json(const std::filesystem::path& path, const RunConfig& cfg,
                               const TimeSeriesLog& log, const std::string& preset_note = "")
{
    nlohmann::json j;
    j["config_hash"] = config_hash(cfg);
    j["config"] = serialize(cfg);
    j["columns"] = log.columns;
    j["status"] = to_string(log.final_status());
    j["status_codes"] = {{"ok", 0}, {"dt_reduced", 1}, {"blow_up_detected", 2}};
    j["rows"] = log.rows.size();
    if (!log.rows.empty()) {
        j["t_first"] = log.rows.front().t;
        j["t_last"] = log.rows.back().t;
    }
    if (!preset_note.empty()) j["preset_note"] = preset_note;
    std::ofstream os(path);
    io_detail::require_open(os, path);
    os << j.dump(2) << '\n';
}

// Snapshot pair: physical profile (coordinates, h) and spectrum (k, |hhat_k|).
inline void write_snapshot_csv(const SpectralField& field, const std::filesystem::path& profile_path,
                               const std::filesystem::path& spectrum_path)
{
    const Grid& g = field.grid();
    {
        std::ofstream os(profile_path);
        io_detail::require_open(os, profile_path);
        const auto& h = field.physical();
        if (g.dim == 1) {
            os << "x,h\n";
            for (int i = 0; i < g.n; ++i)
                os << io_detail::fmt17(g.axis_coord(i)) << ',' << io_detail::fmt17(h[static_cast<std::size_t>(i)]) << '\n';
        } else {
            os << "x,y,h\n";
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix)
                    os << io_detail::fmt17(g.axis_coord(ix)) << ',' << io_detail::fmt17(g.axis_coord(iy))
                       << ',' << io_detail::fmt17(h[static_cast<std::size_t>(iy) * g.n + ix]) << '\n';
        }
    }
    {
        std::ofstream os(spectrum_path);
        io_detail::require_open(os, spectrum_path);
        const auto& c = field.spectral();
        if (g.dim == 1) {
            os << "k,abs_hk\n";
            for (int i = 0; i < g.n; ++i)
                os << g.axis_wavenumber(i) << ',' << io_detail::fmt17(std::abs(c[static_cast<std::size_t>(i)])) << '\n';
        } else {
            os << "kx,ky,abs_hk\n";
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix)
                    os << g.axis_wavenumber(ix) << ',' << g.axis_wavenumber(iy) << ','
                       << io_detail::fmt17(std::abs(c[static_cast<std::size_t>(iy) * g.n + ix])) << '\n';
        }
    }
}

struct Checkpoint {
    Grid grid;
    double t = 0.0;
    double dt = 0.0;
    StepStatus status = StepStatus::ok;
    std::vector<double> samples;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_checkpoint(const std::filesystem::path& path, const SpectralField& field, double t,
                            double dt, StepStatus status)
{
    std::ofstream os(path, std::ios::binary);
    io_detail::require_open(os, path);
    const Grid& g = field.grid();
    const char magic[4] = {'X', 'P', 'D', 'E'};
    os.write(magic, 4);
    const auto put_u32 = [&](std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); };
    const auto put_f64 = [&](double v) { os.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(kCheckpointVersion);
    put_u32(static_cast<std::uint32_t>(g.dim));
    put_u32(static_cast<std::uint32_t>(g.n));
    put_u32(static_cast<std::uint32_t>(status));
    put_f64(g.length);
    put_f64(t);
    put_f64(dt);
    const auto& h = field.physical();
    os.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size() * 8));
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || magic[0] != 'X' || magic[1] != 'P' || magic[2] != 'D' || magic[3] != 'E')
        throw std::runtime_error("bad checkpoint magic: " + path.string());
    const auto get_u32 = [&] {
        std::uint32_t v = 0;
        is.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    const auto get_f64 = [&] {
        double v = 0;
        is.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version: " + std::to_string(version));
    Checkpoint cp;
    cp.grid.dim = static_cast<int>(get_u32());
    cp.grid.n = static_cast<int>(get_u32());
    cp.status = static_cast<StepStatus>(get_u32());
    cp.grid.length = get_f64();
    cp.t = get_f64();
    cp.dt = get_f64();
    cp.grid.validate();
    cp.samples.resize(cp.grid.size());
    is.read(reinterpret_cast<char*>(cp.samples.data()),
            static_cast<std::streamsize>(cp.samples.size() * 8));
    if (!is) throw std::runtime_error("truncated checkpoint: " + path.string());
    return cp;
}

} // namespace expde
