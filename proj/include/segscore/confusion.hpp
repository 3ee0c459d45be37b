#ifndef SEGSCORE_CONFUSION_HPP
#define SEGSCORE_CONFUSION_HPP

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "segscore/core.hpp"

namespace segscore {

/// Pixel tallies of a binary foreground/background comparison.
/// tp + fp + tn + fn always equals the pixel count of the compared masks.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

inline ConfusionCounts confusion_counts(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    if (!auto_mask.same_shape(gt_mask))
        throw ValidationError("confusion_counts: dimension mismatch, auto is " +
                              detail::shape_string(auto_mask.width(), auto_mask.height()) +
                              ", gt is " + detail::shape_string(gt_mask.width(), gt_mask.height()));
    ConfusionCounts c;
    auto a = auto_mask.bits();
    auto g = gt_mask.bits();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i]) {
            if (g[i]) ++c.tp; else ++c.fp;
        } else {
            if (g[i]) ++c.fn; else ++c.tn;
        }
    }
    return c;
}

/// k x k' label co-occurrence counts between two label maps over the same
/// grid. Generalizes the binary confusion matrix; the marginal sums are the
/// label histograms of the two maps. Labels are remapped to dense indices
/// with the original values recorded.
class ContingencyTable {
public:
    ContingencyTable(const LabelMap& a, const LabelMap& b) {
        if (!a.same_shape(b))
            throw ValidationError("contingency_table: dimension mismatch, first is " +
                                  detail::shape_string(a.width(), a.height()) + ", second is " +
                                  detail::shape_string(b.width(), b.height()));
        row_labels_ = a.distinct_labels();
        col_labels_ = b.distinct_labels();
        std::unordered_map<std::int32_t, std::size_t> row_of, col_of;
        for (std::size_t i = 0; i < row_labels_.size(); ++i) row_of[row_labels_[i]] = i;
        for (std::size_t j = 0; j < col_labels_.size(); ++j) col_of[col_labels_[j]] = j;

        counts_.assign(row_labels_.size() * col_labels_.size(), 0);
        auto la = a.labels();
        auto lb = b.labels();
        for (std::size_t p = 0; p < la.size(); ++p)
            ++counts_[row_of[la[p]] * col_labels_.size() + col_of[lb[p]]];

        row_sums_.assign(rows(), 0);
        col_sums_.assign(cols(), 0);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) {
                row_sums_[i] += count(i, j);
                col_sums_[j] += count(i, j);
            }
        total_ = la.size();
    }

    std::size_t rows() const { return row_labels_.size(); }
    std::size_t cols() const { return col_labels_.size(); }
    std::uint64_t total() const { return total_; }

    std::uint64_t count(std::size_t i, std::size_t j) const { return counts_[i * cols() + j]; }
    std::uint64_t row_sum(std::size_t i) const { return row_sums_[i]; }
    std::uint64_t col_sum(std::size_t j) const { return col_sums_[j]; }

    std::int32_t row_label(std::size_t i) const { return row_labels_[i]; }
    std::int32_t col_label(std::size_t j) const { return col_labels_[j]; }

    const std::vector<std::int32_t>& row_labels() const { return row_labels_; }
    const std::vector<std::int32_t>& col_labels() const { return col_labels_; }

private:
    std::vector<std::int32_t> row_labels_;
    std::vector<std::int32_t> col_labels_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> row_sums_;
    std::vector<std::uint64_t> col_sums_;
    std::uint64_t total_ = 0;
};

inline ContingencyTable contingency_table(const LabelMap& a, const LabelMap& b) {
    return ContingencyTable(a, b);
}

/// One-vs-rest confusion counts for a single label value: foreground is
/// "carries exactly this label" on both maps. The label may be absent from
/// either map (the corresponding counts are zero).
inline ConfusionCounts class_confusion(const ContingencyTable& t, std::int32_t label) {
    std::uint64_t row = 0, col = 0, diag = 0;
    for (std::size_t i = 0; i < t.rows(); ++i)
        if (t.row_label(i) == label) {
            row = t.row_sum(i);
            for (std::size_t j = 0; j < t.cols(); ++j)
                if (t.col_label(j) == label) diag = t.count(i, j);
        }
    for (std::size_t j = 0; j < t.cols(); ++j)
        if (t.col_label(j) == label) col = t.col_sum(j);

    ConfusionCounts c;
    c.tp = diag;
    c.fp = row - diag;
    c.fn = col - diag;
    c.tn = t.total() - row - col + diag;
    return c;
}

/// Micro-aggregated counts: the elementwise sum of one-vs-rest counts over
/// the union of label values of both maps. The tp sum equals the diagonal
/// sum over value-matched labels.
inline ConfusionCounts micro_confusion(const ContingencyTable& t) {
    std::vector<std::int32_t> labels = t.row_labels();
    labels.insert(labels.end(), t.col_labels().begin(), t.col_labels().end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    ConfusionCounts sum;
    for (std::int32_t label : labels) {
        ConfusionCounts c = class_confusion(t, label);
        sum.tp += c.tp;
        sum.fp += c.fp;
        sum.tn += c.tn;
        sum.fn += c.fn;
    }
    return sum;
}

}  // namespace segscore

#endif  // SEGSCORE_CONFUSION_HPP
