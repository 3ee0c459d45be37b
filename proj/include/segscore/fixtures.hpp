#ifndef SEGSCORE_FIXTURES_HPP
#define SEGSCORE_FIXTURES_HPP

#include <cmath>
#include <numbers>

#include "segscore/core.hpp"

namespace segscore {

/// Axis-aligned integer rectangle: origin (x, y), extent width x height.
struct RectSpec {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

/// Synthetic two-square test image: one ground-truth rectangle and one
/// auto-segmented rectangle, optionally rotated about its own center.
struct FixtureSpec {
    int canvas_width = 0;
    int canvas_height = 0;
    RectSpec gt_rect;
    RectSpec auto_rect;
    double auto_rotation_deg = 0.0;
};

struct FixturePair {
    LabelMap auto_map;
    LabelMap gt_map;
    std::size_t auto_area = 0;   ///< rasterized auto foreground pixel count
    double area_drift = 0.0;     ///< (auto_area - nominal) / nominal
};

namespace detail {

inline void check_rect(const RectSpec& r, int cw, int ch, const char* name) {
    if (r.width < 1 || r.height < 1)
        throw ValidationError(std::string("generate_fixture: ") + name + " rect has zero or negative size");
    if (r.x < 0 || r.y < 0 || r.x + r.width > cw || r.y + r.height > ch)
        throw ValidationError(std::string("generate_fixture: ") + name + " rect exceeds the " +
                              shape_string(cw, ch) + " canvas");
}

inline void fill_rect(LabelMap& map, const RectSpec& r, std::int32_t label) {
    for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x) map.set(x, y, label);
}

// Rasterizes the rect rotated about its center by a center-of-pixel
// inclusion test. The rotation center carries a quarter-pixel offset: it
// leaves the 0-degree result identical to the integer rect (the half-open
// window still selects the same pixel columns/rows) while keeping the
// rotated edges off the pixel-center lattice at 45-degree multiples, where
// an exactly aligned diamond would systematically drop corner rows.
inline std::size_t fill_rotated_rect(LabelMap& map, const RectSpec& r, double deg, std::int32_t label) {
    const double cx = r.x + r.width / 2.0 + 0.25;
    const double cy = r.y + r.height / 2.0 + 0.25;
    const double theta = deg * std::numbers::pi / 180.0;
    const double c = std::cos(theta), s = std::sin(theta);

    const double ext_x = std::abs(c) * r.width / 2.0 + std::abs(s) * r.height / 2.0;
    const double ext_y = std::abs(s) * r.width / 2.0 + std::abs(c) * r.height / 2.0;
    if (cx - ext_x < 0.0 || cx + ext_x > map.width() || cy - ext_y < 0.0 || cy + ext_y > map.height())
        throw ValidationError("generate_fixture: rotated auto rect exceeds the " +
                              shape_string(map.width(), map.height()) + " canvas");

    std::size_t area = 0;
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x) {
            const double px = x + 0.5 - cx, py = y + 0.5 - cy;
            const double u = c * px + s * py;
            const double v = -s * px + c * py;
            if (u >= -r.width / 2.0 && u < r.width / 2.0 && v >= -r.height / 2.0 && v < r.height / 2.0) {
                map.set(x, y, label);
                ++area;
            }
        }
    return area;
}

}  // namespace detail

/// Generates the (auto, gt) label map pair for a fixture spec, label 1 on
/// foreground. Rotated auto rects must keep their rasterized area within
/// one percent of the nominal width*height.
inline FixturePair generate_fixture(const FixtureSpec& spec) {
    if (spec.canvas_width < 1 || spec.canvas_height < 1)
        throw ValidationError("generate_fixture: canvas must be at least 1x1");
    detail::check_rect(spec.gt_rect, spec.canvas_width, spec.canvas_height, "gt");
    if (spec.auto_rect.width < 1 || spec.auto_rect.height < 1)
        throw ValidationError("generate_fixture: auto rect has zero or negative size");

    LabelMap gt = LabelMap::filled(spec.canvas_width, spec.canvas_height);
    detail::fill_rect(gt, spec.gt_rect, 1);

    LabelMap auto_map = LabelMap::filled(spec.canvas_width, spec.canvas_height);
    const std::size_t nominal =
        static_cast<std::size_t>(spec.auto_rect.width) * spec.auto_rect.height;
    std::size_t area;
    if (spec.auto_rotation_deg == 0.0) {
        detail::check_rect(spec.auto_rect, spec.canvas_width, spec.canvas_height, "auto");
        detail::fill_rect(auto_map, spec.auto_rect, 1);
        area = nominal;
    } else {
        area = detail::fill_rotated_rect(auto_map, spec.auto_rect, spec.auto_rotation_deg, 1);
    }
    const double drift =
        (static_cast<double>(area) - static_cast<double>(nominal)) / static_cast<double>(nominal);
    if (std::abs(drift) > 0.01)
        throw ValidationError("generate_fixture: rotated area drift " + std::to_string(drift * 100.0) +
                              "% exceeds the 1% bound");
    return FixturePair{std::move(auto_map), std::move(gt), area, drift};
}

/// Canonical golden fixture: 100x100 canvas, centered 70x70 ground truth
/// (4,900 px), 35x35 auto square (1,225 px) fully inside it.
inline FixtureSpec s1_fixture_spec() {
    FixtureSpec s;
    s.canvas_width = s.canvas_height = 100;
    s.gt_rect = {15, 15, 70, 70};
    s.auto_rect = {32, 32, 35, 35};
    return s;
}

/// Base geometry for rotation sweeps: two equal 40x40 squares overlapping
/// by 28 columns, so rotating the auto square strictly sheds overlap and
/// shared boundary through 45 degrees.
inline FixtureSpec rotation_sweep_base() {
    FixtureSpec s;
    s.canvas_width = s.canvas_height = 100;
    s.gt_rect = {30, 30, 40, 40};
    s.auto_rect = {42, 30, 40, 40};
    return s;
}

/// Base geometry for translation sweeps: auto starts identical to gt and
/// shifts along x by the step.
inline FixtureSpec translation_sweep_base() {
    FixtureSpec s;
    s.canvas_width = s.canvas_height = 100;
    s.gt_rect = {30, 30, 40, 40};
    s.auto_rect = {30, 30, 40, 40};
    return s;
}

}  // namespace segscore

#endif  // SEGSCORE_FIXTURES_HPP
