// Run configuration: flat key-value text with [section] headers, '#' comments.
// Parsing is strict (unknown keys are errors) and serialization is canonical,
// so parse(serialize(c)) == c and the serialized form hashes stably.

#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expde/grid.hpp"
#include "expde/norms.hpp"
#include "expde/time_integration.hpp"

namespace expde {

enum class InitialKind { sine, modes, random, zero };

struct InitialData {
    InitialKind kind = InitialKind::sine;
    double amplitude = 0.1;
    // kind = modes: list of (axis wavenumber, amplitude, phase), h = sum a sin(kx + phi)
    std::vector<std::array<double, 3>> modes;
    double decay = 0.5;  // kind = random: spectral decay exponent

    friend bool operator==(const InitialData&, const InitialData&) = default;
};

struct OutputConfig {
    std::string dir;
    std::string label = "run";
    int snapshots = 8;
    double snapshot_t_first = 0.01;
    bool stream_csv = false;
    bool checkpoint_on_abort = true;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
    Grid grid{1, 256};
    InitialData initial;
    SchemeConfig scheme;
    double t_end = 10.0;
    NormRequest norms;
    double radius_floor = 1e-14;
    OutputConfig output;
    std::uint64_t seed = 12345;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline bool operator==(const SchemeConfig& a, const SchemeConfig& b)
{
    return a.scheme == b.scheme && a.dt_init == b.dt_init && a.dt_min == b.dt_min &&
           a.dt_max == b.dt_max && a.adapt == b.adapt &&
           a.target_rel_change == b.target_rel_change && a.safety_factor == b.safety_factor &&
           a.newton_tol == b.newton_tol && a.newton_max_iter == b.newton_max_iter &&
           a.corrector == b.corrector && a.linear_factor == b.linear_factor &&
           a.linear_only == b.linear_only && a.dealias == b.dealias;
}

namespace cfg_detail {

inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt(bool v) { return v ? "true" : "false"; }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }

inline double parse_double(const std::string& s)
{
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
    return v;
}

inline int parse_int(const std::string& s)
{
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
    return v;
}

inline bool parse_bool(const std::string& s)
{
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("bad bool: " + s);
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty() || !parts.empty()) parts.push_back(trim(cur));
    if (parts.size() == 1 && parts[0].empty()) parts.clear();
    return parts;
}

inline std::string join_doubles(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt(v[i]);
    }
    return out;
}

inline std::vector<double> parse_doubles(const std::string& s)
{
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(parse_double(p));
    return out;
}

// "s:p" pairs, comma separated.
inline std::string join_pairs(const std::vector<std::pair<double, double>>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt(v[i].first) + ':' + fmt(v[i].second);
    }
    return out;
}

inline std::vector<std::pair<double, double>> parse_pairs(const std::string& s)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& item : split(s, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw std::invalid_argument("bad pair (want s:p): " + item);
        out.emplace_back(parse_double(parts[0]), parse_double(parts[1]));
    }
    return out;
}

// "k:amp:phase" triples, comma separated.
inline std::string join_modes(const std::vector<std::array<double, 3>>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt(v[i][0]) + ':' + fmt(v[i][1]) + ':' + fmt(v[i][2]);
    }
    return out;
}

inline std::vector<std::array<double, 3>> parse_modes(const std::string& s)
{
    std::vector<std::array<double, 3>> out;
    for (const auto& item : split(s, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 3) throw std::invalid_argument("bad mode (want k:amp:phase): " + item);
        out.push_back({parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])});
    }
    return out;
}

inline const char* to_string(Scheme s)
{
    return s == Scheme::spectral_imex ? "spectral_imex" : "fd_backward_euler";
}

inline Scheme parse_scheme(const std::string& s)
{
    if (s == "spectral_imex") return Scheme::spectral_imex;
    if (s == "fd_backward_euler") return Scheme::fd_backward_euler;
    throw std::invalid_argument("bad scheme: " + s);
}

inline const char* to_string(LinearFactor f)
{
    return f == LinearFactor::implicit_euler ? "implicit_euler" : "exponential";
}

inline LinearFactor parse_linear_factor(const std::string& s)
{
    if (s == "implicit_euler") return LinearFactor::implicit_euler;
    if (s == "exponential") return LinearFactor::exponential;
    throw std::invalid_argument("bad linear_factor: " + s);
}

inline const char* to_string(InitialKind k)
{
    switch (k) {
    case InitialKind::sine: return "sine";
    case InitialKind::modes: return "modes";
    case InitialKind::random: return "random";
    case InitialKind::zero: return "zero";
    }
    return "sine";
}

inline InitialKind parse_initial_kind(const std::string& s)
{
    if (s == "sine") return InitialKind::sine;
    if (s == "modes") return InitialKind::modes;
    if (s == "random") return InitialKind::random;
    if (s == "zero") return InitialKind::zero;
    throw std::invalid_argument("bad initial kind: " + s);
}

} // namespace cfg_detail

inline std::string serialize(const RunConfig& c)
{
    using namespace cfg_detail;
    std::ostringstream os;
    os << "[grid]\n"
       << "dim = " << c.grid.dim << "\n"
       << "n = " << c.grid.n << "\n"
       << "length = " << fmt(c.grid.length) << "\n"
       << "[initial]\n"
       << "kind = " << to_string(c.initial.kind) << "\n"
       << "amplitude = " << fmt(c.initial.amplitude) << "\n"
       << "modes = " << join_modes(c.initial.modes) << "\n"
       << "decay = " << fmt(c.initial.decay) << "\n"
       << "[scheme]\n"
       << "method = " << to_string(c.scheme.scheme) << "\n"
       << "dt_init = " << fmt(c.scheme.dt_init) << "\n"
       << "dt_min = " << fmt(c.scheme.dt_min) << "\n"
       << "dt_max = " << fmt(c.scheme.dt_max) << "\n"
       << "adapt = " << fmt(c.scheme.adapt) << "\n"
       << "target_rel_change = " << fmt(c.scheme.target_rel_change) << "\n"
       << "safety_factor = " << fmt(c.scheme.safety_factor) << "\n"
       << "newton_tol = " << fmt(c.scheme.newton_tol) << "\n"
       << "newton_max_iter = " << c.scheme.newton_max_iter << "\n"
       << "corrector = " << fmt(c.scheme.corrector) << "\n"
       << "linear_factor = " << to_string(c.scheme.linear_factor) << "\n"
       << "linear_only = " << fmt(c.scheme.linear_only) << "\n"
       << "dealias = " << fmt(c.scheme.dealias) << "\n"
       << "[time]\n"
       << "t_end = " << fmt(c.t_end) << "\n"
       << "[norms]\n"
       << "s = " << join_doubles(c.norms.s_values) << "\n"
       << "besov = " << join_doubles(c.norms.besov_values) << "\n"
       << "fsp = " << join_pairs(c.norms.fsp_pairs) << "\n"
       << "analytic = " << join_pairs(c.norms.analytic_pairs) << "\n"
       << "radius_floor = " << fmt(c.radius_floor) << "\n"
       << "[output]\n"
       << "dir = " << c.output.dir << "\n"
       << "label = " << c.output.label << "\n"
       << "snapshots = " << c.output.snapshots << "\n"
       << "snapshot_t_first = " << fmt(c.output.snapshot_t_first) << "\n"
       << "stream_csv = " << fmt(c.output.stream_csv) << "\n"
       << "checkpoint_on_abort = " << fmt(c.output.checkpoint_on_abort) << "\n"
       << "[run]\n"
       << "seed = " << fmt(c.seed) << "\n";
    return os.str();
}

// Applies one "section.key" assignment; shared by the parser and CLI overrides.
inline void set_config_key(RunConfig& c, const std::string& section, const std::string& key,
                           const std::string& value)
{
    using namespace cfg_detail;
    const std::string where = section + "." + key;
    if (section == "grid") {
        if (key == "dim") c.grid.dim = parse_int(value);
        else if (key == "n") c.grid.n = parse_int(value);
        else if (key == "length") c.grid.length = parse_double(value);
        else throw std::invalid_argument("unknown key: " + where);
    } else if (section == "initial") {
        if (key == "kind") c.initial.kind = parse_initial_kind(value);
        else if (key == "amplitude") c.initial.amplitude = parse_double(value);
        else if (key == "modes") c.initial.modes = parse_modes(value);
        else if (key == "decay") c.initial.decay = parse_double(value);
        else throw std::invalid_argument("unknown key: " + where);
    } else if (section == "scheme") {
        if (key == "method") c.scheme.scheme = parse_scheme(value);
        else if (key == "dt_init") c.scheme.dt_init = parse_double(value);
        else if (key == "dt_min") c.scheme.dt_min = parse_double(value);
        else if (key == "dt_max") c.scheme.dt_max = parse_double(value);
        else if (key == "adapt") c.scheme.adapt = parse_bool(value);
        else if (key == "target_rel_change") c.scheme.target_rel_change = parse_double(value);
        else if (key == "safety_factor") c.scheme.safety_factor = parse_double(value);
        else if (key == "newton_tol") c.scheme.newton_tol = parse_double(value);
        else if (key == "newton_max_iter") c.scheme.newton_max_iter = parse_int(value);
        else if (key == "corrector") c.scheme.corrector = parse_bool(value);
        else if (key == "linear_factor") c.scheme.linear_factor = parse_linear_factor(value);
        else if (key == "linear_only") c.scheme.linear_only = parse_bool(value);
        else if (key == "dealias") c.scheme.dealias = parse_bool(value);
        else throw std::invalid_argument("unknown key: " + where);
    } else if (section == "time") {
        if (key == "t_end") c.t_end = parse_double(value);
        else throw std::invalid_argument("unknown key: " + where);
    } else if (section == "norms") {
        if (key == "s") c.norms.s_values = parse_doubles(value);
        else if (key == "besov") c.norms.besov_values = parse_doubles(value);
        else if (key == "fsp") c.norms.fsp_pairs = parse_pairs(value);
        else if (key == "analytic") c.norms.analytic_pairs = parse_pairs(value);
        else if (key == "radius_floor") c.radius_floor = parse_double(value);
        else throw std::invalid_argument("unknown key: " + where);
    } else if (section == "output") {
        if (key == "dir") c.output.dir = value;
        else if (key == "label") c.output.label = value;
        else if (key == "snapshots") c.output.snapshots = parse_int(value);
        else if (key == "snapshot_t_first") c.output.snapshot_t_first = parse_double(value);
        else if (key == "stream_csv") c.output.stream_csv = parse_bool(value);
        else if (key == "checkpoint_on_abort") c.output.checkpoint_on_abort = parse_bool(value);
        else throw std::invalid_argument("unknown key: " + where);
    } else if (section == "run") {
        if (key == "seed") c.seed = static_cast<std::uint64_t>(std::stoull(value));
        else throw std::invalid_argument("unknown key: " + where);
    } else {
        throw std::invalid_argument("unknown section: " + section);
    }
}

// Applies a "section.key=value" CLI override.
inline void apply_override(RunConfig& c, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like section.key=value: " + assignment);
    const std::string path = cfg_detail::trim(assignment.substr(0, eq));
    const std::string value = cfg_detail::trim(assignment.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos)
        throw std::invalid_argument("override key must be section.key: " + path);
    set_config_key(c, path.substr(0, dot), path.substr(dot + 1), value);
}

inline RunConfig parse_config(const std::string& text)
{
    using namespace cfg_detail;
    RunConfig c;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        try {
            if (line.front() == '[') {
                if (line.back() != ']') throw std::invalid_argument("unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (section.empty()) throw std::invalid_argument("key before any [section]");
            set_config_key(c, section, key, value);
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    c.grid.validate();
    return c;
}

// FNV-1a 64-bit over the canonical serialization.
[[nodiscard]] inline std::string config_hash(const RunConfig& c)
{
    const std::string s = serialize(c);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace expde
