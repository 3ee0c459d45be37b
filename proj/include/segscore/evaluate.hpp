#ifndef SEGSCORE_EVALUATE_HPP
#define SEGSCORE_EVALUATE_HPP

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

#include "segscore/boundary_distance.hpp"
#include "segscore/confusion.hpp"
#include "segscore/core.hpp"
#include "segscore/fixtures.hpp"
#include "segscore/info_consistency.hpp"
#include "segscore/overlap.hpp"
#include "segscore/relevance.hpp"
#include "segscore/report.hpp"

namespace segscore {

/// Every metric name the evaluator can produce. npr is computed only in
/// dataset evaluation (it needs dataset-level PRI context).
inline std::vector<std::string> metric_names() {
    std::vector<std::string> names;
    names.reserve(polarity_table().size());
    for (const MetricPolarity& p : polarity_table()) names.emplace_back(p.name);
    return names;
}

/// A set of metric names to compute. "all" selects the full registry; an
/// explicit empty set selects nothing and yields an empty report.
class MetricSelection {
public:
    static MetricSelection all() {
        MetricSelection s;
        s.all_ = true;
        return s;
    }

    static MetricSelection none() { return MetricSelection(); }

    static MetricSelection of(const std::vector<std::string>& names) {
        MetricSelection s;
        for (const std::string& n : names) {
            if (!polarity_of(n))
                throw ValidationError("unknown metric name: " + n);
            s.names_.insert(n);
        }
        return s;
    }

    bool contains(std::string_view name) const {
        return all_ || names_.count(std::string(name)) > 0;
    }

    bool any_of(std::span<const std::string_view> names) const {
        for (auto n : names)
            if (contains(n)) return true;
        return false;
    }

    bool any_of(std::initializer_list<std::string_view> names) const {
        return any_of(std::span<const std::string_view>(names.begin(), names.size()));
    }

private:
    bool all_ = false;
    std::set<std::string> names_;
};

struct DatasetEntry {
    std::string id;
    LabelMap prediction;
    std::vector<LabelMap> ground_truths;  ///< K >= 1
};

struct Dataset {
    std::vector<DatasetEntry> entries;
};

namespace detail {

inline void put(MetricMap& out, std::string_view name, MetricValue v) {
    out.emplace(std::string(name), MetricEntry{std::move(v), *polarity_of(name)});
}

inline void put_if(MetricMap& out, const MetricSelection& sel, std::string_view name, MetricValue v) {
    if (sel.contains(name)) put(out, name, std::move(v));
}

// All single-ground-truth metrics for one (prediction, gt) map pair.
// Shared intermediates (confusion counts, contingency table, boundaries,
// distance fields) are computed at most once. Degenerate-input failures of
// individual metrics become undefined entries instead of aborting.
inline MetricMap pair_metric_map(const LabelMap& auto_map, const LabelMap& gt_map,
                                 const MetricSelection& sel) {
    MetricMap out;

    static constexpr std::string_view kBinaryNames[] = {
        "tnr", "tpr", "plr", "nlr", "fpr", "fnr", "precision", "f", "f1_conventional",
        "xor", "ac", "ep", "vd", "vs", "auc", "ji", "dice", "fmi", "mce", "er", "hd", "nsd"};
    static constexpr std::string_view kPartitionNames[] = {
        "ri", "mi", "voi", "nmi", "lce", "gce", "bce"};
    static constexpr std::string_view kBoundaryNames[] = {
        "hausd", "masd", "asd", "bde", "bhd", "nsd"};

    std::optional<BinaryMask> mask_a, mask_g;
    if (sel.any_of(kBinaryNames) || sel.any_of(kBoundaryNames)) {
        mask_a = binarize(auto_map);
        mask_g = binarize(gt_map);
    }

    if (sel.any_of({"tnr", "tpr", "plr", "nlr", "fpr", "fnr", "precision", "f",
                    "f1_conventional", "xor", "ac", "ep", "vd", "vs", "auc", "mce", "er", "hd"})) {
        const ConfusionCounts c = confusion_counts(*mask_a, *mask_g);
        const RelevanceReport r = relevance_report(c);
        put_if(out, sel, "tnr", r.tnr);
        put_if(out, sel, "tpr", r.tpr);
        put_if(out, sel, "plr", r.plr);
        put_if(out, sel, "nlr", r.nlr);
        put_if(out, sel, "fpr", r.fpr);
        put_if(out, sel, "fnr", r.fnr);
        put_if(out, sel, "precision", r.precision);
        put_if(out, sel, "f", r.f_measure);
        put_if(out, sel, "f1_conventional", r.f1_conventional);
        put_if(out, sel, "xor", r.xor_ratio);
        put_if(out, sel, "ac", r.accuracy);
        put_if(out, sel, "ep", r.error_probability);
        put_if(out, sel, "vd", r.volumetric_distance);
        put_if(out, sel, "vs", r.volumetric_similarity);
        put_if(out, sel, "auc", r.auc);
        put_if(out, sel, "mce", MetricValue::of(mce(c)));
        put_if(out, sel, "er", MetricValue::of(error_rate(c)));
        put_if(out, sel, "hd", MetricValue::of(hamming(c)));
    }

    if (sel.contains("ji")) put(out, "ji", MetricValue::of(jaccard(*mask_a, *mask_g)));
    if (sel.contains("dice")) put(out, "dice", MetricValue::of(dice(*mask_a, *mask_g)));
    if (sel.contains("fmi")) put(out, "fmi", fmi(*mask_a, *mask_g));

    if (sel.any_of(kPartitionNames)) {
        const ContingencyTable table(auto_map, gt_map);
        if (sel.contains("ri")) {
            try {
                put(out, "ri", MetricValue::of(rand_index(table)));
            } catch (const ValidationError& e) {
                put(out, "ri", MetricValue::undefined(e.what()));
            }
        }
        put_if(out, sel, "mi", MetricValue::of(mutual_information(table)));
        put_if(out, sel, "voi", MetricValue::of(voi(table)));
        if (sel.contains("nmi")) put(out, "nmi", nmi(table));
        put_if(out, sel, "lce", MetricValue::of(lce(auto_map, gt_map)));
        put_if(out, sel, "gce", MetricValue::of(gce(auto_map, gt_map)));
        put_if(out, sel, "bce", MetricValue::of(bce(auto_map, gt_map)));
    }

    if (sel.any_of(kBoundaryNames)) {
        const BoundarySet b_auto = extract_boundary(*mask_a);
        const BoundarySet b_gt = extract_boundary(*mask_g);

        if (sel.contains("bhd")) put(out, "bhd", boundary_hamming(b_auto, b_gt));

        std::optional<DistanceField> field_gt;
        if (!b_gt.empty() && sel.any_of({"hausd", "masd", "asd", "bde", "nsd"}))
            field_gt = distance_field(b_gt, gt_map.width(), gt_map.height());

        if (sel.any_of({"hausd", "masd", "asd", "bde"})) {
            if (b_auto.empty() || b_gt.empty()) {
                const MetricValue undef = MetricValue::undefined(
                    b_gt.empty() ? "ground-truth boundary is empty" : "auto boundary is empty");
                put_if(out, sel, "hausd", undef);
                put_if(out, sel, "masd", undef);
                put_if(out, sel, "asd", undef);
                put_if(out, sel, "bde", undef);
            } else {
                const DirectedDistanceStats ag = directed_stats(b_auto, b_gt, *field_gt);
                put_if(out, sel, "bde", MetricValue::of(ag.mean));
                if (sel.any_of({"hausd", "masd", "asd"})) {
                    const DistanceField field_auto =
                        distance_field(b_auto, auto_map.width(), auto_map.height());
                    const DirectedDistanceStats ga = directed_stats(b_gt, b_auto, field_auto);
                    put_if(out, sel, "hausd", MetricValue::of(std::max(ag.max, ga.max)));
                    put_if(out, sel, "masd", MetricValue::of(0.5 * (ag.mean + ga.mean)));
                    put_if(out, sel, "asd",
                           MetricValue::of((ag.sum + ga.sum) /
                                           static_cast<double>(ag.count + ga.count)));
                }
            }
        }

        if (sel.contains("nsd")) {
            if (b_gt.empty())
                put(out, "nsd", MetricValue::undefined("ground-truth boundary is empty"));
            else
                put(out, "nsd", nsd(*mask_a, *mask_g, b_gt, *field_gt));
        }
    }

    return out;
}

inline std::string format_step(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline std::map<std::string, AggregateEntry> aggregate_images(const std::vector<ImageReport>& images) {
    std::map<std::string, AggregateEntry> agg;
    std::set<std::string> names;
    for (const ImageReport& img : images)
        for (const auto& [name, entry] : img.metrics) names.insert(name);
    for (const std::string& name : names) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const ImageReport& img : images) {
            auto it = img.metrics.find(name);
            if (it != img.metrics.end() && it->second.value.is_defined()) {
                sum += it->second.value.value();
                ++count;
            }
        }
        AggregateEntry e;
        e.count = count;
        e.mean = count > 0 ? MetricValue::of(sum / static_cast<double>(count))
                           : MetricValue::undefined("undefined for all images");
        agg[name] = std::move(e);
    }
    return agg;
}

inline unsigned thread_budget(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("SEGSCORE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && static_cast<unsigned long>(v) < n)
            n = static_cast<unsigned>(v);
    }
    if (jobs < n) n = static_cast<unsigned>(jobs);
    return n;
}

}  // namespace detail

/// Evaluates one prediction against K >= 1 ground truths. Single-GT
/// metrics compare against gts[0]; pri averages over all gts; when K > 1
/// the report additionally carries per-GT metric maps. npr is omitted
/// (dataset context required).
inline MetricReport evaluate_pair(const LabelMap& auto_map, std::span<const LabelMap> gts,
                                  const MetricSelection& sel, std::string image_id = "pair") {
    if (gts.empty()) throw ValidationError("evaluate_pair: at least one ground truth is required");
    for (const LabelMap& gt : gts)
        if (!auto_map.same_shape(gt))
            throw ValidationError("evaluate_pair: dimension mismatch, prediction is " +
                                  detail::shape_string(auto_map.width(), auto_map.height()) +
                                  ", a ground truth is " +
                                  detail::shape_string(gt.width(), gt.height()));

    ImageReport img;
    img.id = std::move(image_id);
    img.metrics = detail::pair_metric_map(auto_map, gts[0], sel);
    if (sel.contains("pri")) {
        try {
            detail::put(img.metrics, "pri", MetricValue::of(pri(auto_map, gts)));
        } catch (const ValidationError& e) {
            detail::put(img.metrics, "pri", MetricValue::undefined(e.what()));
        }
    }
    if (gts.size() > 1) {
        for (std::size_t j = 0; j < gts.size(); ++j) {
            PerGtReport pg;
            pg.gt_index = j;
            pg.metrics = detail::pair_metric_map(auto_map, gts[j], sel);
            if (!pg.metrics.empty()) img.per_gt.push_back(std::move(pg));
        }
    }

    MetricReport report;
    report.images.push_back(std::move(img));
    report.aggregates = detail::aggregate_images(report.images);
    return report;
}

inline MetricReport evaluate_pair(const LabelMap& auto_map, const LabelMap& gt,
                                  const MetricSelection& sel, std::string image_id = "pair") {
    return evaluate_pair(auto_map, std::span<const LabelMap>(&gt, 1), sel, std::move(image_id));
}

/// Evaluates a whole dataset: per-image reports plus dataset aggregates.
/// PRI is computed per image, then EV (dataset mean) and MaxPR (dataset
/// max) anchor each image's NPR. Entries are processed concurrently (cap
/// with SEGSCORE_THREADS); reports are merged in image-id order, so the
/// result does not depend on entry order or scheduling.
inline MetricReport evaluate_dataset(const Dataset& ds, const MetricSelection& sel) {
    if (ds.entries.empty()) throw ValidationError("evaluate_dataset: dataset is empty");
    {
        std::set<std::string> ids;
        for (const DatasetEntry& e : ds.entries)
            if (!ids.insert(e.id).second)
                throw ValidationError("evaluate_dataset: duplicate image id \"" + e.id + "\"");
    }
    for (const DatasetEntry& e : ds.entries) {
        if (e.ground_truths.empty())
            throw ValidationError("evaluate_dataset: image \"" + e.id + "\" has no ground truths");
        for (const LabelMap& gt : e.ground_truths)
            if (!e.prediction.same_shape(gt))
                throw ValidationError("evaluate_dataset: dimension mismatch in image \"" + e.id +
                                      "\"");
    }

    const bool want_npr = sel.contains("npr");
    const bool want_pri = sel.contains("pri") || want_npr;

    struct PerEntry {
        ImageReport report;
        MetricValue pri_value;
    };
    std::vector<PerEntry> results(ds.entries.size());

    auto run_entry = [&](std::size_t i) {
        const DatasetEntry& e = ds.entries[i];
        PerEntry r;
        r.report.id = e.id;
        r.report.metrics = detail::pair_metric_map(e.prediction, e.ground_truths[0], sel);
        if (want_pri) {
            try {
                r.pri_value =
                    MetricValue::of(pri(e.prediction, std::span<const LabelMap>(e.ground_truths)));
            } catch (const ValidationError& ex) {
                r.pri_value = MetricValue::undefined(ex.what());
            }
            if (sel.contains("pri")) detail::put(r.report.metrics, "pri", r.pri_value);
        }
        if (e.ground_truths.size() > 1) {
            for (std::size_t j = 0; j < e.ground_truths.size(); ++j) {
                PerGtReport pg;
                pg.gt_index = j;
                pg.metrics = detail::pair_metric_map(e.prediction, e.ground_truths[j], sel);
                if (!pg.metrics.empty()) r.report.per_gt.push_back(std::move(pg));
            }
        }
        results[i] = std::move(r);
    };

    const unsigned threads = detail::thread_budget(ds.entries.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < ds.entries.size(); ++i) run_entry(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= ds.entries.size()) return;
                    try {
                        run_entry(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    if (want_npr) {
        std::vector<double> dataset_pri;
        for (const PerEntry& r : results)
            if (r.pri_value.is_defined()) dataset_pri.push_back(r.pri_value.value());
        for (PerEntry& r : results) {
            MetricValue v;
            if (!r.pri_value.is_defined())
                v = MetricValue::undefined("pri undefined: " + r.pri_value.reason());
            else if (dataset_pri.empty())
                v = MetricValue::undefined("no defined PRI in dataset");
            else
                v = npr(r.pri_value.value(), std::span<const double>(dataset_pri));
            detail::put(r.report.metrics, "npr", std::move(v));
        }
    }

    MetricReport report;
    report.images.reserve(results.size());
    for (PerEntry& r : results) report.images.push_back(std::move(r.report));
    std::sort(report.images.begin(), report.images.end(),
              [](const ImageReport& a, const ImageReport& b) { return a.id < b.id; });
    report.aggregates = detail::aggregate_images(report.images);
    return report;
}

enum class SweepKind { Rotation, Translation };

/// One report per perturbation step plus a per-metric trend summary.
struct SweepResult {
    SweepKind kind = SweepKind::Rotation;
    ReportParameters parameters;
    std::vector<double> steps;
    std::vector<MetricReport> reports;
    std::map<std::string, std::string> trends;  ///< monotone-up/-down, constant, non-monotone
};

namespace detail {

inline std::string classify_trend(const std::vector<double>& values) {
    if (values.size() < 2) return "constant";
    bool up = true, down = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[i - 1]) up = false;
        if (values[i] > values[i - 1]) down = false;
    }
    if (up && down) return "constant";
    if (up) return "monotone-up";
    if (down) return "monotone-down";
    return "non-monotone";
}

}  // namespace detail

/// Generates the fixture at each perturbation step and evaluates it.
/// Rotation steps are degrees applied to the auto rect; translation steps
/// are integer x-shifts of the auto rect. Steps must be monotone. An empty
/// step list evaluates the unperturbed base once.
inline SweepResult perturbation_sweep(const FixtureSpec& base, SweepKind kind,
                                      std::span<const double> steps_in,
                                      const MetricSelection& sel = MetricSelection::all()) {
    std::vector<double> steps(steps_in.begin(), steps_in.end());
    if (steps.empty()) steps.push_back(0.0);
    bool up = true, down = true;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (steps[i] < steps[i - 1]) up = false;
        if (steps[i] > steps[i - 1]) down = false;
    }
    if (!up && !down) throw ValidationError("perturbation_sweep: steps must be monotone");
    if (kind == SweepKind::Translation)
        for (double s : steps)
            if (s != std::floor(s))
                throw ValidationError("perturbation_sweep: translation steps must be whole pixels");

    SweepResult result;
    result.kind = kind;
    result.steps = steps;
    for (double step : steps) {
        FixtureSpec spec = base;
        if (kind == SweepKind::Rotation)
            spec.auto_rotation_deg = step;
        else
            spec.auto_rect.x = base.auto_rect.x + static_cast<int>(step);
        const FixturePair pair = generate_fixture(spec);
        result.reports.push_back(
            evaluate_pair(pair.auto_map, pair.gt_map, sel, "step_" + detail::format_step(step)));
    }

    std::set<std::string> names;
    for (const MetricReport& r : result.reports)
        for (const auto& [name, entry] : r.images[0].metrics) names.insert(name);
    for (const std::string& name : names) {
        std::vector<double> values;
        for (const MetricReport& r : result.reports) {
            auto it = r.images[0].metrics.find(name);
            if (it != r.images[0].metrics.end() && it->second.value.is_defined())
                values.push_back(it->second.value.value());
        }
        result.trends[name] =
            values.empty() ? "undefined" : detail::classify_trend(values);
    }
    return result;
}

inline nlohmann::ordered_json sweep_to_json(const SweepResult& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["parameters"] = {{"entropy_base", r.parameters.entropy_base},
                       {"boundary_connectivity", r.parameters.boundary_connectivity},
                       {"f_convention", r.parameters.f_convention}};
    j["sweep"] = {{"kind", r.kind == SweepKind::Rotation ? "rotation" : "translation"},
                  {"steps", r.steps}};
    j["steps"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.reports.size(); ++i) {
        nlohmann::ordered_json js;
        js["step"] = r.steps[i];
        js["metrics"] = nlohmann::ordered_json::object();
        for (const auto& [name, entry] : r.reports[i].images[0].metrics)
            js["metrics"][name] = detail::metric_entry_json(entry);
        j["steps"].push_back(std::move(js));
    }
    j["trends"] = nlohmann::ordered_json::object();
    for (const auto& [name, trend] : r.trends) j["trends"][name] = trend;
    return j;
}

inline void emit_sweep(const SweepResult& r, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Json) {
        out << sweep_to_json(r).dump(2) << "\n";
    } else {
        out << "step,metric,value,polarity,reason\n";
        for (std::size_t i = 0; i < r.reports.size(); ++i)
            for (const auto& [name, entry] : r.reports[i].images[0].metrics) {
                out << detail::format_sig6(r.steps[i]) << "," << name << ",";
                if (entry.value.is_defined()) out << detail::format_sig6(entry.value.value());
                out << "," << detail::polarity_name(entry.polarity) << ",";
                if (!entry.value.is_defined()) out << detail::csv_quote(entry.value.reason());
                out << "\n";
            }
        for (const auto& [name, trend] : r.trends)
            out << "trend," << name << "," << trend << ",,\n";
    }
    if (!out) throw IoError("emit_sweep: write failure");
}

}  // namespace segscore

#endif  // SEGSCORE_EVALUATE_HPP
