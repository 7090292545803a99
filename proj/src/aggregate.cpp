#include "sgm4k/aggregate.hpp"

#include <array>
#include <bit>

#include "path_relax.hpp"
#include "pipeline_detail.hpp"

namespace sgm4k {

bool is_forward(PathDirection r) {
    switch (r) {
    case PathDirection::deg0:
    case PathDirection::deg45:
    case PathDirection::deg90:
    case PathDirection::deg135:
        return true;
    default:
        return false;
    }
}

int to_degrees(PathDirection r) {
    return static_cast<int>(r) * 45;
}

std::optional<PathDirection> path_from_degrees(int degrees) {
    if (degrees < 0 || degrees >= 360 || degrees % 45 != 0)
        return std::nullopt;
    return static_cast<PathDirection>(degrees / 45);
}

const char* to_string(PathDirection r) {
    static constexpr std::array<const char*, 8> names = {
        "0deg", "45deg", "90deg", "135deg", "180deg", "225deg", "270deg", "315deg"};
    return names[static_cast<std::size_t>(r)];
}

void SgmParams::validate() const {
    if (p1 <= 0)
        throw param_error("P1 must be positive");
    if (p2 <= p1)
        throw param_error("P2 must be greater than P1");
    if (disp_range < 1)
        throw param_error("disparity range must be >= 1");
    if (lambda != 0 && !std::has_single_bit(static_cast<unsigned>(lambda)))
        throw param_error("lambda must be a power of two (or 0 for no correction)");
    if (post.lr_threshold < 0)
        throw param_error("LR threshold must be >= 0");
    unsigned seen = 0;
    for (const PathDirection r : paths) {
        const unsigned bit = 1u << static_cast<unsigned>(r);
        if (seen & bit)
            throw param_error("paths must not repeat a direction");
        seen |= bit;
    }
}

std::vector<std::int32_t> path_step(std::span<const std::int32_t> prev,
                                    std::span<const std::int32_t> cost, int p1, int p2) {
    if (prev.size() != cost.size() || prev.empty())
        throw param_error("path_step: lane vectors must be nonempty and of equal length");
    std::vector<std::int32_t> out(prev.size());
    const std::int32_t prev_min = detail::min_of(prev.data(), static_cast<int>(prev.size()));
    detail::relax_lanes(prev.data(), prev_min, cost.data(), out.data(),
                        static_cast<int>(prev.size()), p1, p2);
    return out;
}

namespace {

// Left-to-right scan; predecessor (x-1, y).
void aggregate_deg0(const CostVolume& cost, int p1, int p2, PathCostVolume& out) {
    const int w = cost.width(), h = cost.height(), dr = cost.disp_range();
    for (int y = 0; y < h; ++y) {
        std::int32_t prev_min = detail::init_lanes(cost.lanes(0, y).data(), out.lanes(0, y).data(), dr);
        for (int x = 1; x < w; ++x)
            prev_min = detail::relax_lanes(out.lanes(x - 1, y).data(), prev_min,
                                           cost.lanes(x, y).data(), out.lanes(x, y).data(), dr,
                                           p1, p2);
    }
}

// Top-down scan; predecessor (x, y-1).
void aggregate_deg90(const CostVolume& cost, int p1, int p2, PathCostVolume& out) {
    const int w = cost.width(), h = cost.height(), dr = cost.disp_range();
    std::vector<std::int32_t> prev_min(w), cur_min(w);
    for (int x = 0; x < w; ++x)
        prev_min[x] = detail::init_lanes(cost.lanes(x, 0).data(), out.lanes(x, 0).data(), dr);
    for (int y = 1; y < h; ++y) {
        for (int x = 0; x < w; ++x)
            cur_min[x] = detail::relax_lanes(out.lanes(x, y - 1).data(), prev_min[x],
                                             cost.lanes(x, y).data(), out.lanes(x, y).data(), dr,
                                             p1, p2);
        std::swap(prev_min, cur_min);
    }
}

// Top-down scan; predecessor (x+1, y-1) for deg45, (x-1, y-1) for deg135.
void aggregate_diagonal(const CostVolume& cost, int p1, int p2, int pred_dx,
                        PathCostVolume& out) {
    const int w = cost.width(), h = cost.height(), dr = cost.disp_range();
    std::vector<std::int32_t> prev_min(w), cur_min(w);
    for (int x = 0; x < w; ++x)
        prev_min[x] = detail::init_lanes(cost.lanes(x, 0).data(), out.lanes(x, 0).data(), dr);
    for (int y = 1; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int px = x + pred_dx;
            if (px < 0 || px >= w)
                cur_min[x] = detail::init_lanes(cost.lanes(x, y).data(), out.lanes(x, y).data(), dr);
            else
                cur_min[x] = detail::relax_lanes(out.lanes(px, y - 1).data(), prev_min[px],
                                                 cost.lanes(x, y).data(), out.lanes(x, y).data(),
                                                 dr, p1, p2);
        }
        std::swap(prev_min, cur_min);
    }
}

} // namespace

PathCostVolume aggregate_path(const CostVolume& cost, PathDirection r, int p1, int p2) {
    if (p1 <= 0 || p2 <= p1)
        throw param_error("aggregate_path: require 0 < P1 < P2");
    if (!is_forward(r)) {
        // Reverse directions run the forward recursion on the flipped volume.
        switch (r) {
        case PathDirection::deg180:
            return flip_horizontal(aggregate_path(flip_horizontal(cost), PathDirection::deg0, p1, p2));
        case PathDirection::deg225:
            return flip_vertical(aggregate_path(flip_vertical(cost), PathDirection::deg135, p1, p2));
        case PathDirection::deg270:
            return flip_vertical(aggregate_path(flip_vertical(cost), PathDirection::deg90, p1, p2));
        case PathDirection::deg315:
            return flip_vertical(aggregate_path(flip_vertical(cost), PathDirection::deg45, p1, p2));
        default:
            throw param_error("aggregate_path: unsupported direction");
        }
    }

    PathCostVolume out(cost.width(), cost.height(), cost.disp_range(), r);
    switch (r) {
    case PathDirection::deg0:
        aggregate_deg0(cost, p1, p2, out);
        break;
    case PathDirection::deg45:
        aggregate_diagonal(cost, p1, p2, +1, out);
        break;
    case PathDirection::deg90:
        aggregate_deg90(cost, p1, p2, out);
        break;
    case PathDirection::deg135:
        aggregate_diagonal(cost, p1, p2, -1, out);
        break;
    default:
        throw param_error("aggregate_path: unsupported direction");
    }
    return out;
}

void AggregatedVolume::add(const PathCostVolume& path) {
    if (path.width() != width_ || path.height() != height_ || path.disp_range() != disp_range_)
        throw param_error("sum_paths: shape mismatch");
    const auto& src = path.data();
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += src[i];
}

AggregatedVolume sum_paths(std::span<const PathCostVolume> paths) {
    if (paths.empty())
        throw param_error("sum_paths: empty path list");
    AggregatedVolume out(paths[0].width(), paths[0].height(), paths[0].disp_range());
    for (const PathCostVolume& p : paths)
        out.add(p);
    return out;
}

namespace {

template <typename Volume>
DisparityMap argmin_per_pixel(const Volume& vol) {
    DisparityMap map(vol.width(), vol.height());
    for (int y = 0; y < vol.height(); ++y)
        for (int x = 0; x < vol.width(); ++x) {
            const auto lanes = vol.lanes(x, y);
            int best = 0;
            for (int d = 1; d < vol.disp_range(); ++d)
                if (lanes[d] < lanes[best])
                    best = d; // strict: ties keep the smaller disparity
            map.at(x, y) = best;
        }
    return map;
}

} // namespace

DisparityMap select_disparity(const AggregatedVolume& summed) {
    return argmin_per_pixel(summed);
}

DisparityMap select_disparity(const CostVolume& cost) {
    return argmin_per_pixel(cost);
}

DisparityMap median3x3(const DisparityMap& map) {
    const int w = map.width(), h = map.height();
    DisparityMap out(w, h);
    std::array<std::int32_t, 9> window{};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int n = 0;
            for (int wy = y - 1; wy <= y + 1; ++wy)
                for (int wx = x - 1; wx <= x + 1; ++wx) {
                    const std::int32_t v =
                        map.at(std::clamp(wx, 0, w - 1), std::clamp(wy, 0, h - 1));
                    if (v != DisparityMap::kInvalid)
                        window[n++] = v;
                }
            if (n == 0) {
                out.at(x, y) = DisparityMap::kInvalid;
                continue;
            }
            std::sort(window.begin(), window.begin() + n);
            out.at(x, y) = window[(n - 1) / 2]; // lower median for even counts
        }
    return out;
}

DisparityMap lr_check(const DisparityMap& disp_left, const DisparityMap& disp_right,
                      int threshold) {
    if (disp_left.width() != disp_right.width() || disp_left.height() != disp_right.height())
        throw param_error("lr_check: map dimensions differ");
    const int w = disp_left.width(), h = disp_left.height();
    DisparityMap out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::int32_t dl = disp_left.at(x, y);
            if (dl == DisparityMap::kInvalid) {
                out.at(x, y) = DisparityMap::kInvalid;
                continue;
            }
            const int xr = x - dl;
            if (xr < 0 || xr >= w) {
                out.at(x, y) = DisparityMap::kInvalid;
                continue;
            }
            const std::int32_t dr = disp_right.at(xr, y);
            const bool consistent = dr != DisparityMap::kInvalid && std::abs(dl - dr) <= threshold;
            out.at(x, y) = consistent ? dl : DisparityMap::kInvalid;
        }
    return out;
}

namespace detail {

DisparityMap batch_core(const GrayImage& left, const GrayImage& right, const SgmParams& params) {
    const CensusImage census_base = census_transform(left);
    const CensusImage census_ref = census_transform(right);
    const CostVolume cost = cost_volume(census_base, census_ref, params.disp_range);
    if (params.paths.empty())
        return select_disparity(cost);
    AggregatedVolume summed(cost.width(), cost.height(), cost.disp_range());
    for (const PathDirection r : params.paths)
        summed.add(aggregate_path(cost, r, params.p1, params.p2));
    return select_disparity(summed);
}

void check_pair(const GrayImage& left, const GrayImage& right) {
    if (left.width() != right.width() || left.height() != right.height())
        throw param_error("stereo pair dimensions differ");
    if (left.width() < kCensusWindow || left.height() < kCensusWindow)
        throw param_error("stereo pair smaller than the census window");
}

} // namespace detail

DisparityMap run_sgm(const GrayImage& left, const GrayImage& right, const SgmParams& params) {
    params.validate();
    detail::check_pair(left, right);
    return detail::with_post(left, right, params, detail::batch_core);
}

PathCostVolume flip_horizontal(const PathCostVolume& vol) {
    PathCostVolume out(vol.width(), vol.height(), vol.disp_range(), vol.direction());
    for (int y = 0; y < vol.height(); ++y)
        for (int x = 0; x < vol.width(); ++x)
            for (int d = 0; d < vol.disp_range(); ++d)
                out.at(x, y, d) = vol.at(vol.width() - 1 - x, y, d);
    return out;
}

PathCostVolume flip_vertical(const PathCostVolume& vol) {
    PathCostVolume out(vol.width(), vol.height(), vol.disp_range(), vol.direction());
    for (int y = 0; y < vol.height(); ++y)
        for (int x = 0; x < vol.width(); ++x)
            for (int d = 0; d < vol.disp_range(); ++d)
                out.at(x, y, d) = vol.at(x, vol.height() - 1 - y, d);
    return out;
}

} // namespace sgm4k
