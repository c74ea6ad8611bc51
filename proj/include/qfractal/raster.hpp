#pragma once

// Hit-count histograms over a rectangular grid, logarithmic/linear tone
// mapping and Netpbm graymap output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfractal/error.hpp"
#include "qfractal/vec.hpp"

namespace qfractal {

enum class GridDomain {
    upper_hemisphere_xy, ///< points of S² with z >= 0 projected to (x, y) in [-1, 1]²
    lower_hemisphere_xy, ///< points of S² with z < 0 projected to (x, y) in [-1, 1]²
    unit_square,         ///< planar points in [0, 1]²
};

enum class ToneMode { log, linear };

struct CellIndex {
    std::size_t ix = 0, iy = 0;
    bool operator==(const CellIndex&) const = default;
};

class HistogramGrid {
public:
    HistogramGrid(std::size_t rx, std::size_t ry, GridDomain domain, std::uint64_t initial_value)
        : rx_(rx), ry_(ry), domain_(domain), initial_(initial_value), counters_(rx * ry, initial_value)
    {
        if (rx == 0 || ry == 0)
            throw ValidationError("HistogramGrid: resolution must be positive");
    }

    /// Grid with counters starting at 1 for log tone mapping, 0 for linear.
    static HistogramGrid for_tone(std::size_t rx, std::size_t ry, GridDomain domain, ToneMode mode)
    {
        return {rx, ry, domain, mode == ToneMode::log ? 1u : 0u};
    }

    std::size_t rx() const { return rx_; }
    std::size_t ry() const { return ry_; }
    GridDomain domain() const { return domain_; }
    std::uint64_t initial_value() const { return initial_; }

    std::uint64_t at(std::size_t ix, std::size_t iy) const { return counters_[iy * rx_ + ix]; }
    std::span<const std::uint64_t> counters() const { return counters_; }

    /// Increments the cell containing `p` (a point of S²) and returns it, or
    /// returns nullopt if the point belongs to the other hemisphere. Cell
    /// indices follow ix = round((x + 1) / (2 / rx)), clamped to rx − 1.
    std::optional<CellIndex> bin_point(const Vec3& p)
    {
        if (domain_ == GridDomain::unit_square)
            throw ValidationError("bin_point: spherical point binned into a planar grid");
        const bool upper = p.z >= 0.0;
        if (upper != (domain_ == GridDomain::upper_hemisphere_xy))
            return std::nullopt;
        const double dx = 2.0 / double(rx_);
        const double dy = 2.0 / double(ry_);
        return increment(cell_of((p.x - (-1.0)) / dx, rx_), cell_of((p.y - (-1.0)) / dy, ry_));
    }

    /// Planar variant over [0, 1]²: ix = round(x / (1 / rx)), clamped.
    std::optional<CellIndex> bin_point(const Vec2& p)
    {
        if (domain_ != GridDomain::unit_square)
            throw ValidationError("bin_point: planar point binned into a spherical grid");
        const double dx = 1.0 / double(rx_);
        const double dy = 1.0 / double(ry_);
        return increment(cell_of(p.x / dx, rx_), cell_of(p.y / dy, ry_));
    }

    /// Σ (counter − initial value): the number of binned points.
    std::uint64_t total_hits() const
    {
        std::uint64_t s = 0;
        for (auto c : counters_)
            s += c - initial_;
        return s;
    }

    std::uint64_t max_count() const { return *std::max_element(counters_.begin(), counters_.end()); }

    bool compatible_with(const HistogramGrid& o) const
    {
        return rx_ == o.rx_ && ry_ == o.ry_ && domain_ == o.domain_ && initial_ == o.initial_;
    }

    bool operator==(const HistogramGrid&) const = default;

    /// Adds the hits of `o` to this grid in place.
    HistogramGrid& merge_from(const HistogramGrid& o)
    {
        if (!compatible_with(o))
            throw ValidationError("merge: grids differ in resolution, domain or initial value");
        for (std::size_t i = 0; i < counters_.size(); ++i)
            counters_[i] += o.counters_[i] - initial_;
        return *this;
    }

private:
    static std::size_t cell_of(double scaled, std::size_t r)
    {
        const double idx = std::round(scaled);
        if (!(idx > 0.0))
            return 0;
        return std::min(static_cast<std::size_t>(idx), r - 1);
    }

    CellIndex increment(std::size_t ix, std::size_t iy)
    {
        ++counters_[iy * rx_ + ix];
        return {ix, iy};
    }

    std::size_t rx_, ry_;
    GridDomain domain_;
    std::uint64_t initial_;
    std::vector<std::uint64_t> counters_;
};

/// Counterwise sum minus the shared initial offset, so that merging the
/// grids of split streams equals binning the concatenated stream.
inline HistogramGrid merge(const HistogramGrid& a, const HistogramGrid& b)
{
    HistogramGrid out = a;
    out.merge_from(b);
    return out;
}

struct GrayImage {
    std::size_t width = 0, height = 0;
    std::vector<std::uint8_t> pixels; ///< row-major, top row first

    std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
    bool operator==(const GrayImage&) const = default;
};

/// round(255 ln c / ln c_max); 0 when c_max <= 1.
inline std::uint8_t log_tone(double c, double c_max)
{
    if (!(c_max > 1.0))
        return 0;
    return static_cast<std::uint8_t>(std::lround(255.0 * std::log(c) / std::log(c_max)));
}

/// round(255 c / c_max); 0 when c_max is 0.
inline std::uint8_t linear_tone(double c, double c_max)
{
    if (!(c_max > 0.0))
        return 0;
    return static_cast<std::uint8_t>(std::lround(255.0 * c / c_max));
}

/// Converts counters to 8-bit gray. Row r of the image holds iy = r (or
/// iy = ry − 1 − r when `flip_vertical`).
inline GrayImage tone_map(const HistogramGrid& grid, ToneMode mode, bool flip_vertical = false)
{
    if (mode == ToneMode::log && grid.initial_value() != 1)
        throw ValidationError("tone_map: log mode requires counters initialized to 1");
    GrayImage img{grid.rx(), grid.ry(), std::vector<std::uint8_t>(grid.rx() * grid.ry())};
    const double c_max = double(grid.max_count());
    for (std::size_t row = 0; row < grid.ry(); ++row) {
        const std::size_t iy = flip_vertical ? grid.ry() - 1 - row : row;
        for (std::size_t ix = 0; ix < grid.rx(); ++ix) {
            const double c = double(grid.at(ix, iy));
            img.pixels[row * img.width + ix] = mode == ToneMode::log ? log_tone(c, c_max) : linear_tone(c, c_max);
        }
    }
    return img;
}

namespace detail {

inline void check_stream(std::ostream& out)
{
    if (!out)
        throw std::runtime_error("write_pgm: output stream failure");
}

} // namespace detail

/// Binary PGM: "P5\n<w> <h>\n255\n" followed by w*h raw bytes.
inline void write_pgm(const GrayImage& img, std::ostream& out)
{
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
    out.flush();
    detail::check_stream(out);
}

/// Plain-text PGM (P2), one row per line.
inline void write_pgm_plain(const GrayImage& img, std::ostream& out)
{
    out << "P2\n" << img.width << ' ' << img.height << "\n255\n";
    for (std::size_t r = 0; r < img.height; ++r) {
        for (std::size_t c = 0; c < img.width; ++c) {
            if (c)
                out << ' ';
            out << unsigned(img.at(r, c));
        }
        out << '\n';
    }
    out.flush();
    detail::check_stream(out);
}

} // namespace qfractal
