#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "sgm4k/errors.hpp"

namespace sgm4k {

namespace detail {

inline void check_dims(int width, int height) {
    if (width <= 0 || height <= 0)
        throw param_error("image dimensions must be positive");
}

} // namespace detail

// Row-major 8-bit grayscale raster. Dimensions are fixed at construction.
class GrayImage {
public:
    GrayImage(int width, int height)
        : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height, 0);
    }

    GrayImage(int width, int height, std::vector<std::uint8_t> data)
        : width_(width), height_(height), data_(std::move(data)) {
        detail::check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * height)
            throw param_error("image data length must equal width*height");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint8_t at(int x, int y) const { return data_[idx(x, y)]; }
    std::uint8_t& at(int x, int y) { return data_[idx(x, y)]; }

    // Lookup with edge replication outside the raster.
    std::uint8_t at_clamped(int x, int y) const {
        x = std::clamp(x, 0, width_ - 1);
        y = std::clamp(y, 0, height_ - 1);
        return data_[idx(x, y)];
    }

    std::span<const std::uint8_t> row(int y) const {
        return {data_.data() + idx(0, y), static_cast<std::size_t>(width_)};
    }
    std::span<std::uint8_t> row(int y) {
        return {data_.data() + idx(0, y), static_cast<std::size_t>(width_)};
    }

    const std::vector<std::uint8_t>& data() const { return data_; }

    friend bool operator==(const GrayImage& a, const GrayImage& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

// Row-major 32-bit float raster; non-finite values mark unknown samples
// (ground-truth carriers use them for occluded/unmeasured pixels).
class FloatImage {
public:
    FloatImage(int width, int height)
        : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height, 0.0f);
    }

    FloatImage(int width, int height, std::vector<float> data)
        : width_(width), height_(height), data_(std::move(data)) {
        detail::check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * height)
            throw param_error("image data length must equal width*height");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    float at(int x, int y) const { return data_[idx(x, y)]; }
    float& at(int x, int y) { return data_[idx(x, y)]; }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    friend bool operator==(const FloatImage&, const FloatImage&) = default;

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<float> data_;
};

// Selected disparity per pixel; kInvalid marks rejected pixels.
class DisparityMap {
public:
    static constexpr std::int32_t kInvalid = -1;

    DisparityMap(int width, int height)
        : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height, kInvalid);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::int32_t at(int x, int y) const { return data_[idx(x, y)]; }
    std::int32_t& at(int x, int y) { return data_[idx(x, y)]; }

    bool valid(int x, int y) const { return data_[idx(x, y)] != kInvalid; }

    const std::vector<std::int32_t>& data() const { return data_; }

    friend bool operator==(const DisparityMap&, const DisparityMap&) = default;

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<std::int32_t> data_;
};

GrayImage flip_horizontal(const GrayImage& img);
DisparityMap flip_horizontal(const DisparityMap& map);

} // namespace sgm4k
