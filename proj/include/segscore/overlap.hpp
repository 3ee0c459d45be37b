#ifndef SEGSCORE_OVERLAP_HPP
#define SEGSCORE_OVERLAP_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "segscore/confusion.hpp"
#include "segscore/core.hpp"

namespace segscore {

namespace detail {
struct OverlapSizes {
    std::uint64_t inter = 0;
    std::uint64_t auto_fg = 0;
    std::uint64_t gt_fg = 0;
    std::uint64_t uni() const { return auto_fg + gt_fg - inter; }
};

inline OverlapSizes overlap_sizes(const BinaryMask& a, const BinaryMask& g) {
    OverlapSizes s;
    auto ab = a.bits();
    auto gb = g.bits();
    for (std::size_t i = 0; i < ab.size(); ++i) {
        s.auto_fg += ab[i] != 0;
        s.gt_fg += gb[i] != 0;
        s.inter += (ab[i] != 0) && (gb[i] != 0);
    }
    return s;
}

inline std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }
}  // namespace detail

/// Jaccard index |A ∩ B| / |A ∪ B| over foreground sets.
/// Two empty foregrounds agree perfectly and score 1.
inline double jaccard(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    detail::require_same_shape(auto_mask, gt_mask, "jaccard");
    const auto s = detail::overlap_sizes(auto_mask, gt_mask);
    if (s.uni() == 0) return 1.0;
    return static_cast<double>(s.inter) / static_cast<double>(s.uni());
}

/// Dice coefficient 2|A ∩ B| / (|A| + |B|); 1 when both foregrounds empty.
inline double dice(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    detail::require_same_shape(auto_mask, gt_mask, "dice");
    const auto s = detail::overlap_sizes(auto_mask, gt_mask);
    if (s.auto_fg + s.gt_fg == 0) return 1.0;
    return 2.0 * static_cast<double>(s.inter) / static_cast<double>(s.auto_fg + s.gt_fg);
}

/// Mis-segmentation ratio (|A ∪ B| - |A ∩ B|) / |B| over foreground sets,
/// undefined when the ground-truth foreground is empty.
inline MetricValue xor_set(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    detail::require_same_shape(auto_mask, gt_mask, "xor_set");
    const auto s = detail::overlap_sizes(auto_mask, gt_mask);
    if (s.gt_fg == 0) return MetricValue::undefined("ground-truth foreground is empty");
    return MetricValue::of(static_cast<double>(s.uni() - s.inter) / static_cast<double>(s.gt_fg));
}

/// Fowlkes-Mallows index |A ∩ B| / sqrt(|A| * |B|), undefined when either
/// foreground is empty.
inline MetricValue fmi(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    detail::require_same_shape(auto_mask, gt_mask, "fmi");
    const auto s = detail::overlap_sizes(auto_mask, gt_mask);
    if (s.auto_fg == 0 || s.gt_fg == 0)
        return MetricValue::undefined("a foreground set is empty");
    return MetricValue::of(static_cast<double>(s.inter) /
                           std::sqrt(static_cast<double>(s.auto_fg) * static_cast<double>(s.gt_fg)));
}

/// Rand index: the fraction of unordered pixel pairs on which the two
/// partitions agree (co-clustered in both or separated in both). Closed
/// form over the contingency table, O(pixels + labels^2); equals the
/// quadratic pair enumeration.
inline double rand_index(const ContingencyTable& t) {
    const std::uint64_t n = t.total();
    if (n < 2) throw ValidationError("rand_index: needs at least 2 pixels");
    std::uint64_t cells = 0, rows = 0, cols = 0;
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) cells += detail::choose2(t.count(i, j));
    for (std::size_t i = 0; i < t.rows(); ++i) rows += detail::choose2(t.row_sum(i));
    for (std::size_t j = 0; j < t.cols(); ++j) cols += detail::choose2(t.col_sum(j));
    const std::uint64_t pairs = detail::choose2(n);
    const std::uint64_t agreements = pairs + 2 * cells - rows - cols;
    return static_cast<double>(agreements) / static_cast<double>(pairs);
}

inline double rand_index(const LabelMap& a, const LabelMap& b) {
    return rand_index(ContingencyTable(a, b));
}

/// Ground truths and dataset-level PRI context for PRI and NPR.
struct PriContext {
    std::vector<LabelMap> gt_set;            ///< K >= 1 ground truths of one image
    std::vector<double> dataset_pri_values;  ///< PRI per dataset image, for NPR

    double max_pri() const {
        if (dataset_pri_values.empty())
            throw ValidationError("PriContext: dataset_pri_values is empty");
        return *std::max_element(dataset_pri_values.begin(), dataset_pri_values.end());
    }

    double expected_pri() const {
        if (dataset_pri_values.empty())
            throw ValidationError("PriContext: dataset_pri_values is empty");
        return std::accumulate(dataset_pri_values.begin(), dataset_pri_values.end(), 0.0) /
               static_cast<double>(dataset_pri_values.size());
    }
};

/// Probabilistic Rand index: mean Rand index against K ground truths.
inline double pri(const LabelMap& auto_map, std::span<const LabelMap> gts) {
    if (gts.empty()) throw ValidationError("pri: ground-truth set is empty");
    double sum = 0.0;
    for (const LabelMap& gt : gts) sum += rand_index(auto_map, gt);
    return sum / static_cast<double>(gts.size());
}

inline double pri(const LabelMap& auto_map, const PriContext& ctx) {
    return pri(auto_map, std::span<const LabelMap>(ctx.gt_set));
}

/// Normalized PRI: (PRI - EV) / (MaxPR - EV), where EV is the dataset mean
/// PRI and MaxPR the dataset maximum. Undefined when MaxPR equals EV.
inline MetricValue npr(double pri_value, std::span<const double> dataset_pri_values) {
    if (dataset_pri_values.empty())
        throw ValidationError("npr: dataset PRI values are empty");
    const double ev = std::accumulate(dataset_pri_values.begin(), dataset_pri_values.end(), 0.0) /
                      static_cast<double>(dataset_pri_values.size());
    const double max_pr = *std::max_element(dataset_pri_values.begin(), dataset_pri_values.end());
    if (max_pr == ev) return MetricValue::undefined("degenerate dataset (max PRI equals mean PRI)");
    return MetricValue::of((pri_value - ev) / (max_pr - ev));
}

inline MetricValue npr(double pri_value, const PriContext& ctx) {
    return npr(pri_value, std::span<const double>(ctx.dataset_pri_values));
}

/// Misclassification error: 1 - (background agreement + foreground
/// agreement) / total pixels. Complements accuracy on binary masks.
inline double mce(const ConfusionCounts& c) {
    return 1.0 - static_cast<double>(c.tn + c.tp) / static_cast<double>(c.total());
}

inline double mce(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    detail::require_same_shape(auto_mask, gt_mask, "mce");
    return mce(confusion_counts(auto_mask, gt_mask));
}

/// Error rate in percent: (FP + FN) / total * 100.
inline double error_rate(const ConfusionCounts& c) {
    return static_cast<double>(c.fp + c.fn) / static_cast<double>(c.total()) * 100.0;
}

inline double error_rate(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    detail::require_same_shape(auto_mask, gt_mask, "error_rate");
    return error_rate(confusion_counts(auto_mask, gt_mask));
}

}  // namespace segscore

#endif  // SEGSCORE_OVERLAP_HPP
