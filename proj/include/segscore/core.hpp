#ifndef SEGSCORE_CORE_HPP
#define SEGSCORE_CORE_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace segscore {

/// Raised for inputs that violate an operation's contract (dimension
/// mismatch, unknown label, malformed fixture spec, unsupported pixel
/// format). CLI maps this to exit code 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for filesystem-level failures (unreadable, truncated, or
/// unwritable files). CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A metric result that is either a real value or explicitly undefined
/// (division by zero, degenerate input). Undefined values carry a reason
/// and serialize as null; they are never silently replaced by 0 or NaN.
class MetricValue {
public:
    MetricValue() : reason_("not computed") {}

    static MetricValue of(double v) {
        MetricValue m;
        m.value_ = v;
        m.reason_.clear();
        return m;
    }

    static MetricValue undefined(std::string reason) {
        MetricValue m;
        m.reason_ = std::move(reason);
        return m;
    }

    bool is_defined() const { return value_.has_value(); }
    double value() const {
        if (!value_) throw std::logic_error("MetricValue::value() on undefined value: " + reason_);
        return *value_;
    }
    const std::string& reason() const { return reason_; }

private:
    std::optional<double> value_;
    std::string reason_;
};

/// Integer pixel coordinate. Ordered row-major (y, then x) so that sets of
/// coordinates produced by image scans are already sorted.
struct PixelCoord {
    int x = 0;
    int y = 0;

    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
    friend std::strong_ordering operator<=>(const PixelCoord& a, const PixelCoord& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

namespace detail {
inline void check_dims(int width, int height, std::size_t n, const char* what) {
    if (width < 1 || height < 1)
        throw ValidationError(std::string(what) + ": dimensions must be at least 1x1, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    if (n != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ValidationError(std::string(what) + ": buffer size " + std::to_string(n) +
                              " does not match " + std::to_string(width) + "x" + std::to_string(height));
}

inline std::string shape_string(int w, int h) {
    return std::to_string(w) + "x" + std::to_string(h);
}
}  // namespace detail

/// Per-pixel integer region assignment, row-major. Label 0 is background by
/// convention; foreground regions use labels >= 1.
class LabelMap {
public:
    LabelMap(int width, int height, std::vector<std::int32_t> labels)
        : width_(width), height_(height), labels_(std::move(labels)) {
        detail::check_dims(width_, height_, labels_.size(), "LabelMap");
        for (std::int32_t v : labels_)
            if (v < 0) throw ValidationError("LabelMap: labels must be non-negative, got " + std::to_string(v));
    }

    static LabelMap filled(int width, int height, std::int32_t value = 0) {
        if (value < 0) throw ValidationError("LabelMap: labels must be non-negative");
        return LabelMap(width, height,
                        std::vector<std::int32_t>(static_cast<std::size_t>(width) * height, value));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return labels_.size(); }

    std::int32_t at(int x, int y) const { return labels_[index(x, y)]; }
    void set(int x, int y, std::int32_t v) {
        if (v < 0) throw ValidationError("LabelMap: labels must be non-negative");
        labels_[index(x, y)] = v;
    }

    std::span<const std::int32_t> labels() const { return labels_; }

    bool same_shape(const LabelMap& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    /// Distinct labels present, ascending.
    std::vector<std::int32_t> distinct_labels() const {
        std::vector<std::int32_t> out(labels_.begin(), labels_.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<std::int32_t> labels_;
};

/// One boolean per pixel, row-major; true = foreground.
class BinaryMask {
public:
    BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
        : width_(width), height_(height), bits_(std::move(bits)) {
        detail::check_dims(width_, height_, bits_.size(), "BinaryMask");
    }

    static BinaryMask filled(int width, int height, bool value = false) {
        return BinaryMask(width, height,
                          std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value ? 1 : 0));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return bits_.size(); }

    bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    bool same_shape(const BinaryMask& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    std::size_t foreground_count() const {
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t(1)));
    }

    std::span<const std::uint8_t> bits() const { return bits_; }

    BinaryMask complement() const {
        std::vector<std::uint8_t> inv(bits_.size());
        std::transform(bits_.begin(), bits_.end(), inv.begin(),
                       [](std::uint8_t b) { return b ? std::uint8_t(0) : std::uint8_t(1); });
        return BinaryMask(width_, height_, std::move(inv));
    }

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
};

namespace detail {
inline void require_same_shape(const BinaryMask& a, const BinaryMask& b, const char* op) {
    if (!a.same_shape(b))
        throw ValidationError(std::string(op) + ": dimension mismatch, auto is " +
                              shape_string(a.width(), a.height()) + ", gt is " +
                              shape_string(b.width(), b.height()));
}
}  // namespace detail

/// Foreground = every pixel with a nonzero label.
inline BinaryMask binarize(const LabelMap& map) {
    std::vector<std::uint8_t> bits(map.pixel_count());
    auto labels = map.labels();
    std::transform(labels.begin(), labels.end(), bits.begin(),
                   [](std::int32_t v) { return v != 0 ? std::uint8_t(1) : std::uint8_t(0); });
    return BinaryMask(map.width(), map.height(), std::move(bits));
}

/// Foreground = every pixel carrying exactly the selected label.
/// The label must be present in the map.
inline BinaryMask binarize(const LabelMap& map, std::int32_t label) {
    auto labels = map.labels();
    if (std::find(labels.begin(), labels.end(), label) == labels.end())
        throw ValidationError("binarize: label " + std::to_string(label) + " not present in map");
    std::vector<std::uint8_t> bits(map.pixel_count());
    std::transform(labels.begin(), labels.end(), bits.begin(),
                   [label](std::int32_t v) { return v == label ? std::uint8_t(1) : std::uint8_t(0); });
    return BinaryMask(map.width(), map.height(), std::move(bits));
}

/// Splits every label class into its connected components (4- or
/// 8-connectivity) and returns a map with fresh dense labels, assigned in
/// scan order starting from 0. Optional preprocessing for partition metrics;
/// by default label classes count as single regions even when disconnected.
inline LabelMap split_components(const LabelMap& map, int connectivity = 4) {
    if (connectivity != 4 && connectivity != 8)
        throw ValidationError("split_components: connectivity must be 4 or 8");
    const int w = map.width(), h = map.height();
    std::vector<std::int32_t> out(map.pixel_count(), -1);
    std::int32_t next = 0;
    std::deque<PixelCoord> queue;
    const int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (out[static_cast<std::size_t>(y) * w + x] >= 0) continue;
            const std::int32_t label = map.at(x, y);
            const std::int32_t comp = next++;
            out[static_cast<std::size_t>(y) * w + x] = comp;
            queue.push_back({x, y});
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                for (int k = 0; k < connectivity; ++k) {
                    const int nx = cx + dx8[k], ny = cy + dy8[k];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    auto& slot = out[static_cast<std::size_t>(ny) * w + nx];
                    if (slot < 0 && map.at(nx, ny) == label) {
                        slot = comp;
                        queue.push_back({nx, ny});
                    }
                }
            }
        }
    }
    return LabelMap(w, h, std::move(out));
}

}  // namespace segscore

#endif  // SEGSCORE_CORE_HPP
