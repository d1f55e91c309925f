// Per-step run record: time, step size, status, and a named column per
// monitored quantity. Column layout is fixed at construction and shared by
// the CSV emitter and the post-hoc analysis.

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace expde {

enum class StepStatus { ok = 0, dt_reduced = 1, blow_up_detected = 2 };

[[nodiscard]] inline const char* to_string(StepStatus s)
{
    switch (s) {
    case StepStatus::ok: return "ok";
    case StepStatus::dt_reduced: return "dt_reduced";
    case StepStatus::blow_up_detected: return "blow_up_detected";
    }
    return "unknown";
}

struct TimeSeriesLog {
    struct Row {
        double t = 0.0;
        double dt = 0.0;
        StepStatus status = StepStatus::ok;
        std::vector<double> values;
    };

    std::vector<std::string> columns;
    std::vector<Row> rows;

    [[nodiscard]] int column_index(const std::string& name) const
    {
        const auto it = std::find(columns.begin(), columns.end(), name);
        return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
    }

    [[nodiscard]] bool has_column(const std::string& name) const { return column_index(name) >= 0; }

    [[nodiscard]] double value(std::size_t row, const std::string& name) const
    {
        const int idx = column_index(name);
        if (idx < 0) throw std::invalid_argument("TimeSeriesLog: no column named " + name);
        return rows.at(row).values.at(static_cast<std::size_t>(idx));
    }

    [[nodiscard]] std::vector<double> column(const std::string& name) const
    {
        const int idx = column_index(name);
        if (idx < 0) throw std::invalid_argument("TimeSeriesLog: no column named " + name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const Row& r : rows) out.push_back(r.values[static_cast<std::size_t>(idx)]);
        return out;
    }

    [[nodiscard]] std::vector<double> times() const
    {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const Row& r : rows) out.push_back(r.t);
        return out;
    }

    [[nodiscard]] StepStatus final_status() const
    {
        return rows.empty() ? StepStatus::ok : rows.back().status;
    }
};

} // namespace expde
