#ifndef SEGSCORE_RELEVANCE_HPP
#define SEGSCORE_RELEVANCE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

#include "segscore/confusion.hpp"
#include "segscore/core.hpp"

namespace segscore {

/// All confusion-matrix-derived rates and scores for one binary comparison.
/// Every field is explicitly defined or undefined; a zero denominator never
/// turns into NaN or a silent 0.
struct RelevanceReport {
    MetricValue tnr;                    ///< specificity, TN/(TN+FP)
    MetricValue tpr;                    ///< recall/sensitivity, TP/(TP+FN)
    MetricValue plr;                    ///< sensitivity / (1 - specificity)
    MetricValue nlr;                    ///< (1 - sensitivity) / specificity
    MetricValue fpr;                    ///< FP/(FP+TN)
    MetricValue fnr;                    ///< FN/(FN+TP)
    MetricValue precision;              ///< TP/(TP+FP)
    MetricValue f_measure;              ///< P*R/(P+R), the quotient form
    MetricValue f1_conventional;        ///< 2*P*R/(P+R), the harmonic mean
    MetricValue xor_ratio;              ///< (FP+FN)/(TP+FN)
    MetricValue accuracy;               ///< (TP+TN)/total
    MetricValue error_probability;      ///< 1 - accuracy
    MetricValue volumetric_distance;    ///< |FN-FP|/(2TP+FN+FP)
    MetricValue volumetric_similarity;  ///< 1 - VD
    MetricValue auc;                    ///< 1 - (FPR+FNR)/2
};

namespace detail {
inline MetricValue ratio(std::uint64_t num, std::uint64_t den, const char* reason_when_zero) {
    if (den == 0) return MetricValue::undefined(reason_when_zero);
    return MetricValue::of(static_cast<double>(num) / static_cast<double>(den));
}
}  // namespace detail

/// Computes every RelevanceReport field from the four counts.
///
/// The canonical F here is the quotient P*R/(P+R); the conventional
/// harmonic-mean F1 = 2PR/(P+R) is reported alongside under its own name so
/// both conventions stay available.
inline RelevanceReport relevance_report(const ConfusionCounts& c) {
    if (c.total() == 0)
        throw ValidationError("relevance_report: total pixel count is zero");

    RelevanceReport r;
    r.tnr = detail::ratio(c.tn, c.tn + c.fp, "tn+fp is zero");
    r.tpr = detail::ratio(c.tp, c.tp + c.fn, "tp+fn is zero");
    r.fpr = detail::ratio(c.fp, c.fp + c.tn, "fp+tn is zero");
    r.fnr = detail::ratio(c.fn, c.fn + c.tp, "fn+tp is zero");
    r.precision = detail::ratio(c.tp, c.tp + c.fp, "tp+fp is zero");

    if (!r.tpr.is_defined())
        r.plr = MetricValue::undefined("sensitivity undefined (tp+fn is zero)");
    else if (!r.tnr.is_defined())
        r.plr = MetricValue::undefined("specificity undefined (tn+fp is zero)");
    else if (r.tnr.value() == 1.0)
        r.plr = MetricValue::undefined("specificity is 1, denominator 1-specificity is zero");
    else
        r.plr = MetricValue::of(r.tpr.value() / (1.0 - r.tnr.value()));

    if (!r.tpr.is_defined())
        r.nlr = MetricValue::undefined("sensitivity undefined (tp+fn is zero)");
    else if (!r.tnr.is_defined())
        r.nlr = MetricValue::undefined("specificity undefined (tn+fp is zero)");
    else if (r.tnr.value() == 0.0)
        r.nlr = MetricValue::undefined("specificity is zero");
    else
        r.nlr = MetricValue::of((1.0 - r.tpr.value()) / r.tnr.value());

    if (!r.precision.is_defined())
        r.f_measure = MetricValue::undefined("precision undefined (tp+fp is zero)");
    else if (!r.tpr.is_defined())
        r.f_measure = MetricValue::undefined("recall undefined (tp+fn is zero)");
    else if (r.precision.value() + r.tpr.value() == 0.0)
        r.f_measure = MetricValue::undefined("precision+recall is zero");
    else
        r.f_measure =
            MetricValue::of(r.precision.value() * r.tpr.value() / (r.precision.value() + r.tpr.value()));
    r.f1_conventional = r.f_measure.is_defined() ? MetricValue::of(2.0 * r.f_measure.value())
                                                 : r.f_measure;

    r.xor_ratio = detail::ratio(c.fp + c.fn, c.tp + c.fn, "tp+fn is zero");
    r.accuracy = MetricValue::of(static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total()));
    r.error_probability = MetricValue::of(1.0 - r.accuracy.value());

    const std::uint64_t vd_den = 2 * c.tp + c.fn + c.fp;
    if (vd_den == 0) {
        r.volumetric_distance = MetricValue::undefined("both foregrounds empty (2tp+fn+fp is zero)");
        r.volumetric_similarity = r.volumetric_distance;
    } else {
        const std::uint64_t diff = c.fn > c.fp ? c.fn - c.fp : c.fp - c.fn;
        r.volumetric_distance = MetricValue::of(static_cast<double>(diff) / static_cast<double>(vd_den));
        r.volumetric_similarity = MetricValue::of(1.0 - r.volumetric_distance.value());
    }

    if (!r.fpr.is_defined())
        r.auc = MetricValue::undefined("fpr undefined (fp+tn is zero)");
    else if (!r.fnr.is_defined())
        r.auc = MetricValue::undefined("fnr undefined (fn+tp is zero)");
    else
        r.auc = MetricValue::of(1.0 - (r.fpr.value() + r.fnr.value()) / 2.0);

    return r;
}

/// Verifies the algebraic identity VD = | |S_GT(f)| - |S_auto(f)| | /
/// (|S_GT(f)| + |S_auto(f)|) against the counts-based form, to 1e-12.
/// Degenerate empty-vs-empty inputs (both sides undefined) count as equal.
inline bool vd_identity_check(std::uint64_t auto_fg_size, std::uint64_t gt_fg_size,
                              const ConfusionCounts& c) {
    const std::uint64_t vd_den = 2 * c.tp + c.fn + c.fp;
    const std::uint64_t size_den = auto_fg_size + gt_fg_size;
    if (vd_den == 0 || size_den == 0) return vd_den == size_den;
    const std::uint64_t count_diff = c.fn > c.fp ? c.fn - c.fp : c.fp - c.fn;
    const std::uint64_t size_diff =
        gt_fg_size > auto_fg_size ? gt_fg_size - auto_fg_size : auto_fg_size - gt_fg_size;
    const double lhs = static_cast<double>(count_diff) / static_cast<double>(vd_den);
    const double rhs = static_cast<double>(size_diff) / static_cast<double>(size_den);
    return std::abs(lhs - rhs) <= 1e-12;
}

enum class Polarity { HigherBetter, LowerBetter };

struct MetricPolarity {
    std::string_view name;
    Polarity direction;
};

/// Improvement direction for every metric the toolkit exports.
inline std::span<const MetricPolarity> polarity_table() {
    static constexpr std::array<MetricPolarity, 36> kTable{{
        {"tnr", Polarity::HigherBetter},
        {"tpr", Polarity::HigherBetter},
        {"plr", Polarity::HigherBetter},
        {"nlr", Polarity::LowerBetter},
        {"fpr", Polarity::LowerBetter},
        {"fnr", Polarity::LowerBetter},
        {"precision", Polarity::HigherBetter},
        {"f", Polarity::HigherBetter},
        {"f1_conventional", Polarity::HigherBetter},
        {"xor", Polarity::LowerBetter},
        {"ac", Polarity::HigherBetter},
        {"ep", Polarity::LowerBetter},
        {"vd", Polarity::LowerBetter},
        {"vs", Polarity::HigherBetter},
        {"auc", Polarity::HigherBetter},
        {"ji", Polarity::HigherBetter},
        {"dice", Polarity::HigherBetter},
        {"fmi", Polarity::HigherBetter},
        {"ri", Polarity::HigherBetter},
        {"pri", Polarity::HigherBetter},
        {"npr", Polarity::HigherBetter},
        {"mce", Polarity::LowerBetter},
        {"er", Polarity::LowerBetter},
        {"mi", Polarity::HigherBetter},
        {"voi", Polarity::LowerBetter},
        {"nmi", Polarity::HigherBetter},
        {"lce", Polarity::LowerBetter},
        {"gce", Polarity::LowerBetter},
        {"bce", Polarity::LowerBetter},
        {"hausd", Polarity::LowerBetter},
        {"masd", Polarity::LowerBetter},
        {"asd", Polarity::LowerBetter},
        {"nsd", Polarity::LowerBetter},
        {"bde", Polarity::LowerBetter},
        {"hd", Polarity::LowerBetter},
        {"bhd", Polarity::LowerBetter},
    }};
    return kTable;
}

inline std::optional<Polarity> polarity_of(std::string_view name) {
    for (const MetricPolarity& p : polarity_table())
        if (p.name == name) return p.direction;
    return std::nullopt;
}

}  // namespace segscore

#endif  // SEGSCORE_RELEVANCE_HPP
