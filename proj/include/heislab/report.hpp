#pragma once

// Structured experiment outcomes and their serialization: one CSV of raw
// measurements plus a flat key = value summary per experiment. Every CSV row
// carries the anchor identifier of the estimate it measures. Files are
// written atomically (temp + rename) and contain nothing time-dependent, so
// reruns from the same config are byte-identical.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heislab {

enum class ExperimentStatus { Ok, InvalidScenario, Inconclusive };

struct ReportRow {
    std::string metric;
    double k1 = std::numeric_limits<double>::quiet_NaN();  // optional row keys
    double k2 = std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
};

struct EstimateReport {
    std::string name;
    std::string anchor;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<ReportRow> rows;
    double tolerance = 0.0;
    bool pass = false;
    ExperimentStatus status = ExperimentStatus::Ok;
    std::string note;
    double runtime_seconds = 0.0;  // console diagnostics only; never serialized

    void add(const std::string& metric, double value) { rows.push_back({metric, nan_, nan_, value}); }
    void add(const std::string& metric, double k1, double value) {
        rows.push_back({metric, k1, nan_, value});
    }
    void add(const std::string& metric, double k1, double k2, double value) {
        rows.push_back({metric, k1, k2, value});
    }
    void param(const std::string& key, const std::string& v) { params.emplace_back(key, v); }
    void param(const std::string& key, double v) { params.emplace_back(key, num(v)); }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

  private:
    static constexpr double nan_ = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void atomic_write(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(target.parent_path(), ec);
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, target);
}

inline std::string csv_num(double v) {
    if (std::isnan(v)) return "";
    return EstimateReport::num(v);
}

}  // namespace detail

inline std::string status_name(ExperimentStatus s) {
    switch (s) {
        case ExperimentStatus::Ok: return "ok";
        case ExperimentStatus::InvalidScenario: return "invalid-scenario";
        default: return "inconclusive";
    }
}

inline std::string report_csv(const EstimateReport& r) {
    std::ostringstream os;
    os << "experiment,anchor,metric,k1,k2,value\n";
    for (const auto& row : r.rows)
        os << r.name << ',' << r.anchor << ',' << row.metric << ',' << detail::csv_num(row.k1)
           << ',' << detail::csv_num(row.k2) << ',' << detail::csv_num(row.value) << "\n";
    return os.str();
}

inline std::string report_summary(const EstimateReport& r) {
    std::ostringstream os;
    os << "experiment = " << r.name << "\n";
    os << "anchor = " << r.anchor << "\n";
    os << "status = " << status_name(r.status) << "\n";
    os << "pass = " << (r.pass ? "true" : "false") << "\n";
    os << "tolerance = " << EstimateReport::num(r.tolerance) << "\n";
    if (!r.note.empty()) os << "note = " << r.note << "\n";
    for (const auto& [k, v] : r.params) os << k << " = " << v << "\n";
    return os.str();
}

inline void write_report(const EstimateReport& r, const std::string& csv_path,
                         const std::string& summary_path) {
    if (!csv_path.empty()) detail::atomic_write(csv_path, report_csv(r));
    if (!summary_path.empty()) detail::atomic_write(summary_path, report_summary(r));
}

}  // namespace heislab
