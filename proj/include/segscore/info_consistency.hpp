#ifndef SEGSCORE_INFO_CONSISTENCY_HPP
#define SEGSCORE_INFO_CONSISTENCY_HPP

#include <cmath>
#include <vector>

#include "segscore/confusion.hpp"
#include "segscore/core.hpp"

namespace segscore {

/// Marginal and joint partition entropies, in bits.
struct PartitionEntropy {
    double h_a = 0.0;
    double h_b = 0.0;
    double h_joint = 0.0;
};

namespace detail {
inline double entropy_term(std::uint64_t count, std::uint64_t total) {
    if (count == 0) return 0.0;  // 0*log(0) = 0
    const double p = static_cast<double>(count) / static_cast<double>(total);
    return -p * std::log2(p);
}
}  // namespace detail

inline PartitionEntropy partition_entropy(const ContingencyTable& t) {
    PartitionEntropy e;
    const std::uint64_t n = t.total();
    for (std::size_t i = 0; i < t.rows(); ++i) e.h_a += detail::entropy_term(t.row_sum(i), n);
    for (std::size_t j = 0; j < t.cols(); ++j) e.h_b += detail::entropy_term(t.col_sum(j), n);
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) e.h_joint += detail::entropy_term(t.count(i, j), n);
    return e;
}

inline PartitionEntropy partition_entropy(const LabelMap& a, const LabelMap& b) {
    return partition_entropy(ContingencyTable(a, b));
}

/// MI = H(A) + H(B) - H(A,B), in bits. Non-negative up to rounding.
inline double mutual_information(const ContingencyTable& t) {
    const PartitionEntropy e = partition_entropy(t);
    return e.h_a + e.h_b - e.h_joint;
}

inline double mutual_information(const LabelMap& a, const LabelMap& b) {
    return mutual_information(ContingencyTable(a, b));
}

/// Variation of information H(A) + H(B) - 2*MI = H(A,B) - MI, in bits.
/// Zero exactly when the partitions coincide up to label renaming.
inline double voi(const ContingencyTable& t) {
    const PartitionEntropy e = partition_entropy(t);
    const double mi = e.h_a + e.h_b - e.h_joint;
    return e.h_a + e.h_b - 2.0 * mi;
}

inline double voi(const LabelMap& a, const LabelMap& b) { return voi(ContingencyTable(a, b)); }

/// Normalized mutual information MI / sqrt(H(A) * H(B)); undefined when
/// either map carries a single label (zero marginal entropy).
inline MetricValue nmi(const ContingencyTable& t) {
    const PartitionEntropy e = partition_entropy(t);
    if (e.h_a == 0.0 || e.h_b == 0.0)
        return MetricValue::undefined("a marginal entropy is zero (single-label map)");
    return MetricValue::of((e.h_a + e.h_b - e.h_joint) / std::sqrt(e.h_a * e.h_b));
}

inline MetricValue nmi(const LabelMap& a, const LabelMap& b) { return nmi(ContingencyTable(a, b)); }

/// Per-pixel local refinement errors in both directions.
/// forward(P) = |R(A,P) \ R(B,P)| / |R(A,P)| and symmetrically for
/// backward, where R(.,P) is the full pixel set of the label class
/// containing P. Values lie in [0,1]; forward is 0 wherever the A-region
/// is contained in the B-region.
struct LreField {
    int width = 0;
    int height = 0;
    std::vector<double> forward;
    std::vector<double> backward;

    double forward_at(int x, int y) const { return forward[static_cast<std::size_t>(y) * width + x]; }
    double backward_at(int x, int y) const { return backward[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

// Per-contingency-cell refinement errors: every pixel in cell (i,j) shares
// forward = (row_i - n_ij)/row_i and backward = (col_j - n_ij)/col_j, which
// is what makes the O(pixels + labels^2) evaluation possible.
struct LreCells {
    std::size_t rows = 0, cols = 0;
    std::vector<double> forward;
    std::vector<double> backward;

    explicit LreCells(const ContingencyTable& t) : rows(t.rows()), cols(t.cols()) {
        forward.resize(rows * cols);
        backward.resize(rows * cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                const std::uint64_t nij = t.count(i, j);
                forward[i * cols + j] =
                    static_cast<double>(t.row_sum(i) - nij) / static_cast<double>(t.row_sum(i));
                backward[i * cols + j] =
                    static_cast<double>(t.col_sum(j) - nij) / static_cast<double>(t.col_sum(j));
            }
    }
};

}  // namespace detail

inline LreField lre_field(const LabelMap& a, const LabelMap& b) {
    const ContingencyTable t(a, b);
    const detail::LreCells cells(t);
    std::unordered_map<std::int32_t, std::size_t> row_of, col_of;
    for (std::size_t i = 0; i < t.rows(); ++i) row_of[t.row_label(i)] = i;
    for (std::size_t j = 0; j < t.cols(); ++j) col_of[t.col_label(j)] = j;

    LreField f;
    f.width = a.width();
    f.height = a.height();
    f.forward.resize(a.pixel_count());
    f.backward.resize(a.pixel_count());
    auto la = a.labels();
    auto lb = b.labels();
    for (std::size_t p = 0; p < la.size(); ++p) {
        const std::size_t cell = row_of[la[p]] * t.cols() + col_of[lb[p]];
        f.forward[p] = cells.forward[cell];
        f.backward[p] = cells.backward[cell];
    }
    return f;
}

/// Local consistency error: mean over pixels of min(forward, backward).
inline double lce(const LabelMap& a, const LabelMap& b) {
    const ContingencyTable t(a, b);
    const detail::LreCells cells(t);
    double sum = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j)
            sum += static_cast<double>(t.count(i, j)) *
                   std::min(cells.forward[i * t.cols() + j], cells.backward[i * t.cols() + j]);
    return sum / static_cast<double>(t.total());
}

/// Global consistency error: the smaller of the two directed mean
/// refinement errors. Always >= LCE.
inline double gce(const LabelMap& a, const LabelMap& b) {
    const ContingencyTable t(a, b);
    const detail::LreCells cells(t);
    double fwd = 0.0, bwd = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const double c = static_cast<double>(t.count(i, j));
            fwd += c * cells.forward[i * t.cols() + j];
            bwd += c * cells.backward[i * t.cols() + j];
        }
    return std::min(fwd, bwd) / static_cast<double>(t.total());
}

/// Bidirectional consistency error: mean over pixels of max(forward,
/// backward). Always >= GCE.
inline double bce(const LabelMap& a, const LabelMap& b) {
    const ContingencyTable t(a, b);
    const detail::LreCells cells(t);
    double sum = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j)
            sum += static_cast<double>(t.count(i, j)) *
                   std::max(cells.forward[i * t.cols() + j], cells.backward[i * t.cols() + j]);
    return sum / static_cast<double>(t.total());
}

}  // namespace segscore

#endif  // SEGSCORE_INFO_CONSISTENCY_HPP
