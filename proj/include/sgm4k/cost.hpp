#pragma once

#include <cstdint>
#include <span>

#include "sgm4k/image.hpp"

namespace sgm4k {

inline constexpr int kCensusWindow = 5;
inline constexpr int kCensusBits = kCensusWindow * kCensusWindow - 1; // center excluded
inline constexpr int kMaxMatchingCost = kCensusBits;

// Per-pixel 24-bit census descriptor; bits above kCensusBits stay zero.
class CensusImage {
public:
    CensusImage(int width, int height)
        : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint32_t at(int x, int y) const { return data_[idx(x, y)]; }
    std::uint32_t& at(int x, int y) { return data_[idx(x, y)]; }

    const std::vector<std::uint32_t>& data() const { return data_; }

    friend bool operator==(const CensusImage&, const CensusImage&) = default;

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<std::uint32_t> data_;
};

// Matching costs C(p,d) in 0..24, laid out [y][x][d] with the d lanes of a
// pixel contiguous.
class CostVolume {
public:
    CostVolume(int width, int height, int disp_range)
        : width_(width), height_(height), disp_range_(disp_range) {
        detail::check_dims(width, height);
        if (disp_range < 1)
            throw param_error("disparity range must be >= 1");
        data_.resize(static_cast<std::size_t>(width) * height * disp_range, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int disp_range() const { return disp_range_; }

    std::uint8_t at(int x, int y, int d) const { return data_[idx(x, y, d)]; }
    std::uint8_t& at(int x, int y, int d) { return data_[idx(x, y, d)]; }

    // The d lanes of one pixel.
    std::span<const std::uint8_t> lanes(int x, int y) const {
        return {data_.data() + idx(x, y, 0), static_cast<std::size_t>(disp_range_)};
    }
    std::span<std::uint8_t> lanes(int x, int y) {
        return {data_.data() + idx(x, y, 0), static_cast<std::size_t>(disp_range_)};
    }

    const std::vector<std::uint8_t>& data() const { return data_; }

    friend bool operator==(const CostVolume&, const CostVolume&) = default;

private:
    std::size_t idx(int x, int y, int d) const {
        return (static_cast<std::size_t>(y) * width_ + x) * disp_range_ + d;
    }

    int width_;
    int height_;
    int disp_range_;
    std::vector<std::uint8_t> data_;
};

// 5x5 census descriptor per pixel: bit k is set iff the k-th window neighbor
// (raster order over the window, center skipped, borders edge-replicated) is
// strictly darker than the center pixel.
CensusImage census_transform(const GrayImage& img);

// Number of differing bits between two descriptors.
int hamming(std::uint32_t a, std::uint32_t b);

// C(x,y,d) = hamming(census_base(x,y), census_ref(max(x-d,0),y)); the clamp
// replicates the reference edge for out-of-range disparities.
CostVolume cost_volume(const CensusImage& census_base, const CensusImage& census_ref,
                       int disp_range);

// Reference-image contexts needed per cycle so that `lanes` base contexts
// can each see all candidates in the disparity range: lanes + disp_range - 1.
int reference_context_count(int lanes, int disp_range);

CostVolume flip_horizontal(const CostVolume& vol);
CostVolume flip_vertical(const CostVolume& vol);

} // namespace sgm4k
