#include "sgm4k/cost.hpp"

#include <bit>

namespace sgm4k {

CensusImage census_transform(const GrayImage& img) {
    const int w = img.width();
    const int h = img.height();
    const int r = kCensusWindow / 2;
    CensusImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint8_t center = img.at(x, y);
            std::uint32_t desc = 0;
            int k = 0;
            for (int wy = y - r; wy <= y + r; ++wy) {
                for (int wx = x - r; wx <= x + r; ++wx) {
                    if (wx == x && wy == y)
                        continue;
                    if (img.at_clamped(wx, wy) < center)
                        desc |= 1u << k;
                    ++k;
                }
            }
            out.at(x, y) = desc;
        }
    }
    return out;
}

int hamming(std::uint32_t a, std::uint32_t b) {
    return std::popcount(a ^ b);
}

CostVolume cost_volume(const CensusImage& census_base, const CensusImage& census_ref,
                       int disp_range) {
    if (census_base.width() != census_ref.width() || census_base.height() != census_ref.height())
        throw param_error("cost_volume: image dimensions differ");
    const int w = census_base.width();
    const int h = census_base.height();
    CostVolume vol(w, h, disp_range);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t base = census_base.at(x, y);
            const auto cost = vol.lanes(x, y);
            for (int d = 0; d < disp_range; ++d) {
                const int xr = std::max(x - d, 0);
                cost[d] = static_cast<std::uint8_t>(hamming(base, census_ref.at(xr, y)));
            }
        }
    }
    return vol;
}

int reference_context_count(int lanes, int disp_range) {
    if (lanes < 1 || disp_range < 1)
        throw param_error("reference_context_count: lanes and disp_range must be >= 1");
    return lanes + disp_range - 1;
}

CostVolume flip_horizontal(const CostVolume& vol) {
    CostVolume out(vol.width(), vol.height(), vol.disp_range());
    for (int y = 0; y < vol.height(); ++y)
        for (int x = 0; x < vol.width(); ++x)
            for (int d = 0; d < vol.disp_range(); ++d)
                out.at(x, y, d) = vol.at(vol.width() - 1 - x, y, d);
    return out;
}

CostVolume flip_vertical(const CostVolume& vol) {
    CostVolume out(vol.width(), vol.height(), vol.disp_range());
    for (int y = 0; y < vol.height(); ++y)
        for (int x = 0; x < vol.width(); ++x)
            for (int d = 0; d < vol.disp_range(); ++d)
                out.at(x, y, d) = vol.at(x, vol.height() - 1 - y, d);
    return out;
}

} // namespace sgm4k
