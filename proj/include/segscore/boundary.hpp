#ifndef SEGSCORE_BOUNDARY_HPP
#define SEGSCORE_BOUNDARY_HPP

#include <vector>

#include "segscore/core.hpp"

namespace segscore {

/// A set of pixel coordinates on a region boundary, kept sorted row-major
/// and duplicate-free so set algebra reduces to merge walks.
class BoundarySet {
public:
    BoundarySet() = default;

    explicit BoundarySet(std::vector<PixelCoord> points) : points_(std::move(points)) {
        std::sort(points_.begin(), points_.end());
        points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    }

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    std::span<const PixelCoord> points() const { return points_; }

    friend bool operator==(const BoundarySet&, const BoundarySet&) = default;

private:
    std::vector<PixelCoord> points_;
};

/// Inner boundary under 4-connectivity: every foreground pixel with at
/// least one 4-neighbor that is background or outside the image. An empty
/// mask yields an empty boundary.
inline BoundarySet extract_boundary(const BinaryMask& mask) {
    std::vector<PixelCoord> pts;
    const int w = mask.width(), h = mask.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            const bool edge = x == 0 || !mask.at(x - 1, y) || x == w - 1 || !mask.at(x + 1, y) ||
                              y == 0 || !mask.at(x, y - 1) || y == h - 1 || !mask.at(x, y + 1);
            if (edge) pts.push_back({x, y});
        }
    }
    return BoundarySet(std::move(pts));
}

/// |A ∩ B| for sorted point sets.
inline std::size_t intersection_size(const BoundarySet& a, const BoundarySet& b) {
    std::size_t n = 0;
    auto pa = a.points();
    auto pb = b.points();
    std::size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        if (pa[i] < pb[j]) ++i;
        else if (pb[j] < pa[i]) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

inline std::size_t union_size(const BoundarySet& a, const BoundarySet& b) {
    return a.size() + b.size() - intersection_size(a, b);
}

inline std::size_t symmetric_difference_size(const BoundarySet& a, const BoundarySet& b) {
    return a.size() + b.size() - 2 * intersection_size(a, b);
}

}  // namespace segscore

#endif  // SEGSCORE_BOUNDARY_HPP
