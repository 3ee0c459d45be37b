#ifndef SEGSCORE_DISTANCE_FIELD_HPP
#define SEGSCORE_DISTANCE_FIELD_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "segscore/boundary.hpp"
#include "segscore/core.hpp"

namespace segscore {

/// Per-pixel minimal Euclidean distance to a site set, in pixel units.
/// Exact: every value is sqrt of an exact integer squared distance.
class DistanceField {
public:
    DistanceField(int width, int height, std::vector<double> dist)
        : width_(width), height_(height), dist_(std::move(dist)) {
        detail::check_dims(width_, height_, dist_.size(), "DistanceField");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    double at(int x, int y) const { return dist_[static_cast<std::size_t>(y) * width_ + x]; }
    std::span<const double> values() const { return dist_; }

private:
    int width_;
    int height_;
    std::vector<double> dist_;
};

namespace detail {

// Sentinel for "no site here". Large enough to lose every final minimum,
// small enough that sums with squared coordinates stay exact integers in
// double precision (everything < 2^53), so no NaN/inf arithmetic enters
// the envelope computation.
constexpr double kNoSite = 1e15;

// 1D lower-envelope pass of the Felzenszwalb-Huttenlocher squared
// Euclidean distance transform. f holds squared distances (or kNoSite),
// d receives min over q' of (q - q')^2 + f(q').
inline void edt_pass_1d(const std::vector<double>& f, int n, std::vector<double>& d,
                        std::vector<int>& v, std::vector<double>& z) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            const int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s <= z[k] && k > 0) { --k; continue; }
            break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace detail

/// Exact Euclidean distance transform of a site set over a width x height
/// grid: dist(p) = min over sites s of sqrt((x_p-x_s)^2 + (y_p-y_s)^2).
/// Two 1D envelope passes over squared distances; the squared values stay
/// exact integers in double precision, so the result matches a brute-force
/// double loop bit for bit.
inline DistanceField distance_field(const BoundarySet& sites, int width, int height) {
    if (sites.empty())
        throw ValidationError("distance_field: site set is empty (minimal distance undefined)");
    if (width < 1 || height < 1)
        throw ValidationError("distance_field: dimensions must be at least 1x1");
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<double> sq(n, detail::kNoSite);
    for (const PixelCoord& p : sites.points()) {
        if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height)
            throw ValidationError("distance_field: site (" + std::to_string(p.x) + "," +
                                  std::to_string(p.y) + ") outside " +
                                  detail::shape_string(width, height) + " grid");
        sq[static_cast<std::size_t>(p.y) * width + p.x] = 0.0;
    }

    const int nmax = std::max(width, height);
    std::vector<double> f(nmax), d(nmax), z(nmax + 1);
    std::vector<int> v(nmax);

    // columns
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) f[y] = sq[static_cast<std::size_t>(y) * width + x];
        detail::edt_pass_1d(f, height, d, v, z);
        for (int y = 0; y < height; ++y) sq[static_cast<std::size_t>(y) * width + x] = d[y];
    }
    // rows
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) f[x] = sq[static_cast<std::size_t>(y) * width + x];
        detail::edt_pass_1d(f, width, d, v, z);
        for (int x = 0; x < width; ++x)
            sq[static_cast<std::size_t>(y) * width + x] = std::sqrt(d[x]);
    }
    return DistanceField(width, height, std::move(sq));
}

}  // namespace segscore

#endif  // SEGSCORE_DISTANCE_FIELD_HPP
