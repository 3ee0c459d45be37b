#ifndef SEGSCORE_REPORT_HPP
#define SEGSCORE_REPORT_HPP

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "segscore/core.hpp"
#include "segscore/relevance.hpp"

namespace segscore {

/// Computation parameters every report carries, so numbers are
/// reproducible from the file alone.
struct ReportParameters {
    int entropy_base = 2;
    int boundary_connectivity = 4;
    std::string f_convention = "PR/(P+R)";
};

struct MetricEntry {
    MetricValue value;
    Polarity polarity = Polarity::HigherBetter;
};

using MetricMap = std::map<std::string, MetricEntry>;

struct PerGtReport {
    std::size_t gt_index = 0;
    MetricMap metrics;
};

struct ImageReport {
    std::string id;
    MetricMap metrics;
    std::vector<PerGtReport> per_gt;  ///< populated only when K > 1
};

struct AggregateEntry {
    MetricValue mean;        ///< mean over images where the metric is defined
    std::size_t count = 0;   ///< number of images contributing
};

struct MetricReport {
    ReportParameters parameters;
    std::vector<ImageReport> images;  ///< sorted by image id
    std::map<std::string, AggregateEntry> aggregates;
};

enum class ReportFormat { Json, Csv };

namespace detail {

// Rounds through a 6-significant-digit decimal rendering, so emitted
// numbers are short and parse back to exactly the emitted value.
inline double round_sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
}

inline std::string format_sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline const char* polarity_name(Polarity p) {
    return p == Polarity::HigherBetter ? "higher_better" : "lower_better";
}

inline nlohmann::ordered_json metric_entry_json(const MetricEntry& e) {
    nlohmann::ordered_json j;
    if (e.value.is_defined())
        j["value"] = round_sig6(e.value.value());
    else
        j["value"] = nullptr;
    j["polarity"] = polarity_name(e.polarity);
    if (!e.value.is_defined()) j["reason"] = e.value.reason();
    return j;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const MetricReport& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["parameters"] = {{"entropy_base", r.parameters.entropy_base},
                       {"boundary_connectivity", r.parameters.boundary_connectivity},
                       {"f_convention", r.parameters.f_convention}};
    j["images"] = nlohmann::ordered_json::array();
    for (const ImageReport& img : r.images) {
        nlohmann::ordered_json ji;
        ji["id"] = img.id;
        ji["metrics"] = nlohmann::ordered_json::object();
        for (const auto& [name, entry] : img.metrics)
            ji["metrics"][name] = detail::metric_entry_json(entry);
        if (!img.per_gt.empty()) {
            ji["per_gt"] = nlohmann::ordered_json::array();
            for (const PerGtReport& pg : img.per_gt) {
                nlohmann::ordered_json jg;
                jg["gt_index"] = pg.gt_index;
                jg["metrics"] = nlohmann::ordered_json::object();
                for (const auto& [name, entry] : pg.metrics)
                    jg["metrics"][name] = detail::metric_entry_json(entry);
                ji["per_gt"].push_back(std::move(jg));
            }
        }
        j["images"].push_back(std::move(ji));
    }
    j["aggregates"] = nlohmann::ordered_json::object();
    for (const auto& [name, agg] : r.aggregates) {
        nlohmann::ordered_json ja;
        if (agg.mean.is_defined())
            ja["mean"] = detail::round_sig6(agg.mean.value());
        else {
            ja["mean"] = nullptr;
            ja["reason"] = agg.mean.reason();
        }
        ja["count"] = agg.count;
        j["aggregates"][name] = std::move(ja);
    }
    return j;
}

inline void emit_report(const MetricReport& r, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Json) {
        out << report_to_json(r).dump(2) << "\n";
    } else {
        out << "image_id,metric,value,polarity,reason\n";
        for (const ImageReport& img : r.images)
            for (const auto& [name, entry] : img.metrics) {
                out << detail::csv_quote(img.id) << "," << name << ",";
                if (entry.value.is_defined()) out << detail::format_sig6(entry.value.value());
                out << "," << detail::polarity_name(entry.polarity) << ",";
                if (!entry.value.is_defined()) out << detail::csv_quote(entry.value.reason());
                out << "\n";
            }
    }
    if (!out) throw IoError("emit_report: write failure");
}

inline void emit_report(const MetricReport& r, ReportFormat format,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    emit_report(r, format, out);
    out.flush();
    if (!out) throw IoError(path.string() + ": write failure");
}

}  // namespace segscore

#endif  // SEGSCORE_REPORT_HPP
