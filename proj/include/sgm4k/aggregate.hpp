#pragma once

#include <optional>
#include <string_view>

#include "sgm4k/cost.hpp"

namespace sgm4k {

// Aggregation scan directions. The forward four can be processed in a single
// top-down raster pass; each reverse direction is realized by running its
// forward counterpart on a coordinate-flipped volume.
enum class PathDirection {
    deg0,   // predecessor (x-1, y)
    deg45,  // predecessor (x+1, y-1)
    deg90,  // predecessor (x, y-1)
    deg135, // predecessor (x-1, y-1)
    deg180, // predecessor (x+1, y)
    deg225, // predecessor (x-1, y+1)
    deg270, // predecessor (x, y+1)
    deg315, // predecessor (x+1, y+1)
};

bool is_forward(PathDirection r);
int to_degrees(PathDirection r);
std::optional<PathDirection> path_from_degrees(int degrees);
const char* to_string(PathDirection r);

struct PostProcessing {
    bool median = false;
    bool lr_check = false;
    int lr_threshold = 1;
};

// Matching/aggregation configuration. Defaults: P1=7, P2=86 (conventional for
// 24-bit census costs and tunable via the sweep command), 64 disparities,
// the four single-pass paths, lambda=2.
struct SgmParams {
    int p1 = 7;
    int p2 = 86;
    int disp_range = 64;
    // Estimation weight for the 4ppc 0-degree path. Power of two;
    // kLambdaNoCorrection (0) disables the correction term entirely.
    int lambda = 2;
    std::vector<PathDirection> paths = {PathDirection::deg0, PathDirection::deg45,
                                        PathDirection::deg90, PathDirection::deg135};
    PostProcessing post;

    void validate() const; // throws param_error
};

// Per-path aggregation costs L_r(p,d), same layout as CostVolume.
class PathCostVolume {
public:
    PathCostVolume(int width, int height, int disp_range, PathDirection direction)
        : width_(width), height_(height), disp_range_(disp_range), direction_(direction) {
        detail::check_dims(width, height);
        if (disp_range < 1)
            throw param_error("disparity range must be >= 1");
        data_.resize(static_cast<std::size_t>(width) * height * disp_range, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int disp_range() const { return disp_range_; }
    PathDirection direction() const { return direction_; }

    std::int32_t at(int x, int y, int d) const { return data_[idx(x, y, d)]; }
    std::int32_t& at(int x, int y, int d) { return data_[idx(x, y, d)]; }

    std::span<const std::int32_t> lanes(int x, int y) const {
        return {data_.data() + idx(x, y, 0), static_cast<std::size_t>(disp_range_)};
    }
    std::span<std::int32_t> lanes(int x, int y) {
        return {data_.data() + idx(x, y, 0), static_cast<std::size_t>(disp_range_)};
    }

    const std::vector<std::int32_t>& data() const { return data_; }

    friend bool operator==(const PathCostVolume& a, const PathCostVolume& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ &&
               a.disp_range_ == b.disp_range_ && a.data_ == b.data_;
    }

private:
    std::size_t idx(int x, int y, int d) const {
        return (static_cast<std::size_t>(y) * width_ + x) * disp_range_ + d;
    }

    int width_;
    int height_;
    int disp_range_;
    PathDirection direction_;
    std::vector<std::int32_t> data_;
};

// Summed aggregation costs S(p,d).
class AggregatedVolume {
public:
    AggregatedVolume(int width, int height, int disp_range)
        : width_(width), height_(height), disp_range_(disp_range) {
        detail::check_dims(width, height);
        if (disp_range < 1)
            throw param_error("disparity range must be >= 1");
        data_.resize(static_cast<std::size_t>(width) * height * disp_range, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int disp_range() const { return disp_range_; }

    std::int32_t at(int x, int y, int d) const { return data_[idx(x, y, d)]; }
    std::int32_t& at(int x, int y, int d) { return data_[idx(x, y, d)]; }

    std::span<const std::int32_t> lanes(int x, int y) const {
        return {data_.data() + idx(x, y, 0), static_cast<std::size_t>(disp_range_)};
    }

    // Elementwise accumulation of one path volume.
    void add(const PathCostVolume& path);

    const std::vector<std::int32_t>& data() const { return data_; }

    friend bool operator==(const AggregatedVolume&, const AggregatedVolume&) = default;

private:
    std::size_t idx(int x, int y, int d) const {
        return (static_cast<std::size_t>(y) * width_ + x) * disp_range_ + d;
    }

    int width_;
    int height_;
    int disp_range_;
    std::vector<std::int32_t> data_;
};

// One step of the path recursion: relax this pixel's cost lanes against the
// predecessor lanes,
//   out(d) = cost(d) + min(prev(d), prev(d-1)+p1, prev(d+1)+p1, min(prev)+p2)
//            - min(prev),
// with the d-1 / d+1 terms dropped at the lane bounds.
std::vector<std::int32_t> path_step(std::span<const std::int32_t> prev,
                                    std::span<const std::int32_t> cost, int p1, int p2);

// Path cost volume for one scan direction. Pixels whose predecessor falls
// outside the image start the path with L = C.
PathCostVolume aggregate_path(const CostVolume& cost, PathDirection r, int p1, int p2);

// Elementwise sum over path volumes of identical shape.
AggregatedVolume sum_paths(std::span<const PathCostVolume> paths);

// Per-pixel argmin over d; ties break toward the smallest disparity.
DisparityMap select_disparity(const AggregatedVolume& summed);
DisparityMap select_disparity(const CostVolume& cost); // raw-cost (local) baseline

// 3x3 median with replicated borders; invalid pixels are excluded from each
// window's sample set and a window with no valid sample stays invalid. Even
// sample counts take the lower median.
DisparityMap median3x3(const DisparityMap& map);

// Keeps a pixel iff |disp_left(x,y) - disp_right(x - disp_left(x,y), y)| is
// within the threshold; off-image or invalid lookups invalidate.
DisparityMap lr_check(const DisparityMap& disp_left, const DisparityMap& disp_right,
                      int threshold);

// Full pipeline: census -> cost volume -> per-path aggregation -> summation
// -> disparity selection -> optional post-processing. An empty path set
// degenerates to the raw-cost local baseline.
DisparityMap run_sgm(const GrayImage& left, const GrayImage& right, const SgmParams& params);

PathCostVolume flip_horizontal(const PathCostVolume& vol);
PathCostVolume flip_vertical(const PathCostVolume& vol);

} // namespace sgm4k
