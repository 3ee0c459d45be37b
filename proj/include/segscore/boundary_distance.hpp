#ifndef SEGSCORE_BOUNDARY_DISTANCE_HPP
#define SEGSCORE_BOUNDARY_DISTANCE_HPP

#include <algorithm>
#include <cmath>

#include "segscore/boundary.hpp"
#include "segscore/confusion.hpp"
#include "segscore/core.hpp"
#include "segscore/distance_field.hpp"

namespace segscore {

/// Summary of the directed minimal-distance distribution from a source
/// boundary to a target boundary: max is the supremum-infimum distance.
struct DirectedDistanceStats {
    std::size_t count = 0;  ///< source point count
    double max = 0.0;
    double mean = 0.0;
    double sum = 0.0;
};

/// Directed stats of min-distances from each src point to tgt, read from a
/// distance field built over tgt. The field must be zero on every tgt site.
inline DirectedDistanceStats directed_stats(const BoundarySet& src, const BoundarySet& tgt,
                                            const DistanceField& field_over_tgt) {
    if (src.empty() || tgt.empty())
        throw ValidationError("directed_stats: boundary sets must be non-empty");
    for (const PixelCoord& p : tgt.points())
        if (field_over_tgt.at(p.x, p.y) != 0.0)
            throw ValidationError("directed_stats: field is not zero on a target site");
    DirectedDistanceStats s;
    s.count = src.size();
    for (const PixelCoord& p : src.points()) {
        const double d = field_over_tgt.at(p.x, p.y);
        s.sum += d;
        s.max = std::max(s.max, d);
    }
    s.mean = s.sum / static_cast<double>(s.count);
    return s;
}

namespace detail {

// Directed stats without a caller-provided field: builds an exact distance
// field over the joint bounding box (distances are translation invariant).
inline DirectedDistanceStats directed(const BoundarySet& src, const BoundarySet& tgt) {
    if (src.empty() || tgt.empty())
        throw ValidationError("boundary distance: boundary sets must be non-empty");
    int min_x = src.points()[0].x, max_x = min_x;
    int min_y = src.points()[0].y, max_y = min_y;
    auto grow = [&](const BoundarySet& s) {
        for (const PixelCoord& p : s.points()) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    };
    grow(src);
    grow(tgt);
    const int w = max_x - min_x + 1, h = max_y - min_y + 1;
    std::vector<PixelCoord> shifted;
    shifted.reserve(tgt.size());
    for (const PixelCoord& p : tgt.points()) shifted.push_back({p.x - min_x, p.y - min_y});
    const DistanceField field = distance_field(BoundarySet(std::move(shifted)), w, h);

    DirectedDistanceStats s;
    s.count = src.size();
    for (const PixelCoord& p : src.points()) {
        const double d = field.at(p.x - min_x, p.y - min_y);
        s.sum += d;
        s.max = std::max(s.max, d);
    }
    s.mean = s.sum / static_cast<double>(s.count);
    return s;
}

}  // namespace detail

/// Hausdorff distance: the larger of the two directed maxima. 0 means the
/// boundaries match exhaustively.
inline double hausdorff(const BoundarySet& b_auto, const BoundarySet& b_gt) {
    return std::max(detail::directed(b_auto, b_gt).max, detail::directed(b_gt, b_auto).max);
}

/// Mean absolute surface distance: the average of the two directed means.
inline double masd(const BoundarySet& b_auto, const BoundarySet& b_gt) {
    return 0.5 * (detail::directed(b_auto, b_gt).mean + detail::directed(b_gt, b_auto).mean);
}

/// Average symmetric surface distance: both directed sums over the total
/// point count. Equals MASD only when the two boundaries are equal-sized.
inline double asd(const BoundarySet& b_auto, const BoundarySet& b_gt) {
    const auto ag = detail::directed(b_auto, b_gt);
    const auto ga = detail::directed(b_gt, b_auto);
    return (ga.sum + ag.sum) / static_cast<double>(ag.count + ga.count);
}

/// Boundary displacement error: mean distance from each auto boundary
/// pixel to the nearest gt boundary pixel. Directional.
inline double bde(const BoundarySet& b_auto, const BoundarySet& b_gt) {
    return detail::directed(b_auto, b_gt).mean;
}

/// Normalized sum of distances: distances to the gt boundary summed over
/// the foreground symmetric difference, normalized by the same sum over
/// the foreground union. In [0,1]; undefined when the union lies entirely
/// on the gt boundary (zero denominator).
inline MetricValue nsd(const BinaryMask& auto_mask, const BinaryMask& gt_mask,
                       const BoundarySet& b_gt, const DistanceField& field_over_bgt) {
    detail::require_same_shape(auto_mask, gt_mask, "nsd");
    if (b_gt.empty()) throw ValidationError("nsd: ground-truth boundary is empty");
    if (field_over_bgt.width() != gt_mask.width() || field_over_bgt.height() != gt_mask.height())
        throw ValidationError("nsd: distance field shape does not match the masks");
    double num = 0.0, den = 0.0;
    for (int y = 0; y < gt_mask.height(); ++y)
        for (int x = 0; x < gt_mask.width(); ++x) {
            const bool af = auto_mask.at(x, y), gf = gt_mask.at(x, y);
            if (!af && !gf) continue;
            const double d = field_over_bgt.at(x, y);
            den += d;
            if (af != gf) num += d;
        }
    if (den == 0.0)
        return MetricValue::undefined("foreground union lies entirely on the gt boundary");
    return MetricValue::of(num / den);
}

inline MetricValue nsd(const BinaryMask& auto_mask, const BinaryMask& gt_mask,
                       const BoundarySet& b_gt) {
    if (b_gt.empty()) throw ValidationError("nsd: ground-truth boundary is empty");
    return nsd(auto_mask, gt_mask, b_gt, distance_field(b_gt, gt_mask.width(), gt_mask.height()));
}

inline MetricValue nsd(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    return nsd(auto_mask, gt_mask, extract_boundary(gt_mask));
}

/// Hamming distance over pixels: displaced pixels (fn + fp) over the total
/// pixel count. In [0,1].
inline double hamming(const ConfusionCounts& c) {
    return static_cast<double>(c.fn + c.fp) / static_cast<double>(c.total());
}

inline double hamming(const BinaryMask& auto_mask, const BinaryMask& gt_mask) {
    detail::require_same_shape(auto_mask, gt_mask, "hamming");
    return hamming(confusion_counts(auto_mask, gt_mask));
}

/// Boundary Hamming distance: symmetric difference of the two boundary
/// pixel sets over their union. 1 for fully disjoint boundaries; undefined
/// when both are empty.
inline MetricValue boundary_hamming(const BoundarySet& b_auto, const BoundarySet& b_gt) {
    const std::size_t uni = union_size(b_auto, b_gt);
    if (uni == 0) return MetricValue::undefined("both boundary sets are empty");
    return MetricValue::of(static_cast<double>(symmetric_difference_size(b_auto, b_gt)) /
                           static_cast<double>(uni));
}

}  // namespace segscore

#endif  // SEGSCORE_BOUNDARY_DISTANCE_HPP
