#include "oracles.hpp"

#include <algorithm>
#include <limits>

namespace sgm4k::testing {

CensusImage naive_census(const GrayImage& img) {
    CensusImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            std::uint32_t desc = 0;
            int bit = 0;
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx) {
                    if (dx == 0 && dy == 0)
                        continue;
                    const int nx = std::min(std::max(x + dx, 0), img.width() - 1);
                    const int ny = std::min(std::max(y + dy, 0), img.height() - 1);
                    if (img.at(nx, ny) < img.at(x, y))
                        desc |= 1u << bit;
                    ++bit;
                }
            out.at(x, y) = desc;
        }
    return out;
}

int naive_hamming(std::uint32_t a, std::uint32_t b) {
    int count = 0;
    for (std::uint32_t diff = a ^ b; diff != 0; diff >>= 1)
        count += static_cast<int>(diff & 1u);
    return count;
}

CostVolume naive_cost_volume(const GrayImage& base, const GrayImage& ref, int disp_range) {
    const CensusImage cb = naive_census(base);
    const CensusImage cr = naive_census(ref);
    CostVolume vol(base.width(), base.height(), disp_range);
    for (int y = 0; y < base.height(); ++y)
        for (int x = 0; x < base.width(); ++x)
            for (int d = 0; d < disp_range; ++d) {
                const int xr = x - d < 0 ? 0 : x - d;
                vol.at(x, y, d) =
                    static_cast<std::uint8_t>(naive_hamming(cb.at(x, y), cr.at(xr, y)));
            }
    return vol;
}

std::vector<std::int32_t> naive_path_step(const std::vector<std::int32_t>& prev,
                                          const std::vector<std::int32_t>& cost, int p1, int p2) {
    const int n = static_cast<int>(prev.size());
    std::int32_t prev_min = std::numeric_limits<std::int32_t>::max();
    for (const std::int32_t v : prev)
        prev_min = std::min(prev_min, v);
    std::vector<std::int32_t> out(n);
    for (int d = 0; d < n; ++d) {
        std::int32_t best = prev[d];
        if (d - 1 >= 0)
            best = std::min(best, prev[d - 1] + p1);
        if (d + 1 < n)
            best = std::min(best, prev[d + 1] + p1);
        for (int i = 0; i < n; ++i)
            best = std::min(best, prev[i] + p2);
        out[d] = cost[d] + best - prev_min;
    }
    return out;
}

namespace {

void predecessor_offset(PathDirection r, int& dx, int& dy) {
    switch (r) {
    case PathDirection::deg0: dx = -1; dy = 0; break;
    case PathDirection::deg45: dx = +1; dy = -1; break;
    case PathDirection::deg90: dx = 0; dy = -1; break;
    case PathDirection::deg135: dx = -1; dy = -1; break;
    case PathDirection::deg180: dx = +1; dy = 0; break;
    case PathDirection::deg225: dx = -1; dy = +1; break;
    case PathDirection::deg270: dx = 0; dy = +1; break;
    case PathDirection::deg315: dx = +1; dy = +1; break;
    }
}

std::vector<std::int32_t> lane_copy(const CostVolume& cost, int x, int y) {
    const auto lanes = cost.lanes(x, y);
    return std::vector<std::int32_t>(lanes.begin(), lanes.end());
}

} // namespace

PathCostVolume path_by_walking(const CostVolume& cost, PathDirection r, int p1, int p2) {
    int dx = 0, dy = 0;
    predecessor_offset(r, dx, dy);
    PathCostVolume out(cost.width(), cost.height(), cost.disp_range(), r);
    for (int y = 0; y < cost.height(); ++y)
        for (int x = 0; x < cost.width(); ++x) {
            // Enumerate the chain from this pixel back to the path start.
            std::vector<std::pair<int, int>> chain;
            for (int cx = x, cy = y; cx >= 0 && cx < cost.width() && cy >= 0 && cy < cost.height();
                 cx += dx, cy += dy)
                chain.emplace_back(cx, cy);
            std::reverse(chain.begin(), chain.end());

            std::vector<std::int32_t> lanes = lane_copy(cost, chain[0].first, chain[0].second);
            for (std::size_t i = 1; i < chain.size(); ++i)
                lanes = naive_path_step(lanes, lane_copy(cost, chain[i].first, chain[i].second),
                                        p1, p2);
            for (int d = 0; d < cost.disp_range(); ++d)
                out.at(x, y, d) = lanes[d];
        }
    return out;
}

std::int64_t floordiv(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

PathCostVolume scalar_0deg_4ppc(const CostVolume& cost, int p1, int p2, int lambda) {
    const int w = cost.width(), h = cost.height(), dr = cost.disp_range();
    PathCostVolume out(w, h, dr, PathDirection::deg0);
    for (int y = 0; y < h; ++y) {
        std::vector<std::int32_t> carry; // exact lanes of the previous word's pixel 4
        for (int gx = 0; gx < w; gx += 4) {
            const std::vector<std::int32_t> c1 = lane_copy(cost, gx, y);
            const std::vector<std::int32_t> c2 = lane_copy(cost, gx + 1, y);
            const std::vector<std::int32_t> c3 = lane_copy(cost, gx + 2, y);
            const std::vector<std::int32_t> c4 = lane_copy(cost, gx + 3, y);

            std::vector<std::int32_t> lane1;
            std::vector<std::int32_t> last;
            if (carry.empty()) {
                lane1 = c1; // row start
                last = lane1;
            } else {
                lane1 = naive_path_step(carry, c1, p1, p2);
                last = carry;
            }

            // Scalar estimates with explicit floor divisions.
            std::vector<std::int32_t> e2(dr), e3(dr), e4(dr);
            for (int d = 0; d < dr; ++d) {
                const std::int64_t l = last[d];
                const std::int64_t avg12 = floordiv(c1[d] + c2[d], 2);
                const std::int64_t avg123 = floordiv(avg12 + c3[d], 2);
                if (lambda == 0) {
                    e2[d] = e3[d] = e4[d] = static_cast<std::int32_t>(l);
                } else {
                    e2[d] = static_cast<std::int32_t>(l + floordiv(c1[d] - l, lambda));
                    e3[d] = static_cast<std::int32_t>(l + floordiv(avg12 - l, lambda));
                    e4[d] = static_cast<std::int32_t>(l + floordiv(avg123 - l, lambda));
                }
            }

            const std::vector<std::int32_t> lane2 = naive_path_step(e2, c2, p1, p2);
            const std::vector<std::int32_t> lane3 = naive_path_step(e3, c3, p1, p2);
            const std::vector<std::int32_t> lane4 = naive_path_step(e4, c4, p1, p2);

            const std::vector<std::int32_t>* lanes[4] = {&lane1, &lane2, &lane3, &lane4};
            for (int j = 0; j < 4; ++j)
                for (int d = 0; d < dr; ++d)
                    out.at(gx + j, y, d) = (*lanes[j])[d];
            carry = lane4;
        }
    }
    return out;
}

PathCostVolume relaxation_0deg(const CostVolume& cost, int p1, int p2) {
    const int w = cost.width(), h = cost.height(), dr = cost.disp_range();
    PathCostVolume out(w, h, dr, PathDirection::deg0);
    auto out_lanes = [&](int x, int y) {
        std::vector<std::int32_t> v(dr);
        for (int d = 0; d < dr; ++d)
            v[d] = out.at(x, y, d);
        return v;
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            // Predecessor: the last pixel of the previous word; within the
            // first word, the word's own first pixel.
            const int word_base = x - x % 4;
            std::vector<std::int32_t> result;
            if (x == 0) {
                result = lane_copy(cost, x, y);
            } else {
                const int pred = word_base == 0 ? 0 : word_base - 1;
                result = naive_path_step(out_lanes(pred, y), lane_copy(cost, x, y), p1, p2);
            }
            for (int d = 0; d < dr; ++d)
                out.at(x, y, d) = result[d];
        }
    return out;
}

} // namespace sgm4k::testing
