#pragma once

// Shared inner loop of the path recursion. Both the per-direction batch
// aggregation and the 4ppc/streaming engines funnel through these helpers so
// their arithmetic stays bit-identical.

#include <algorithm>
#include <cstdint>
#include <limits>

namespace sgm4k::detail {

// out(d) = cost(d) + min(prev(d), prev(d-1)+p1, prev(d+1)+p1, prev_min+p2)
//          - prev_min. Returns min(out).
template <typename CostT>
inline std::int32_t relax_lanes(const std::int32_t* prev, std::int32_t prev_min,
                                const CostT* cost, std::int32_t* out, int disp_range,
                                int p1, int p2) {
    std::int32_t out_min = std::numeric_limits<std::int32_t>::max();
    const std::int32_t cap = prev_min + p2;
    for (int d = 0; d < disp_range; ++d) {
        std::int32_t best = prev[d];
        if (d > 0)
            best = std::min(best, prev[d - 1] + p1);
        if (d + 1 < disp_range)
            best = std::min(best, prev[d + 1] + p1);
        best = std::min(best, cap);
        const std::int32_t v = static_cast<std::int32_t>(cost[d]) + best - prev_min;
        out[d] = v;
        out_min = std::min(out_min, v);
    }
    return out_min;
}

// Path start: L = C. Returns min(out).
template <typename CostT>
inline std::int32_t init_lanes(const CostT* cost, std::int32_t* out, int disp_range) {
    std::int32_t out_min = std::numeric_limits<std::int32_t>::max();
    for (int d = 0; d < disp_range; ++d) {
        out[d] = static_cast<std::int32_t>(cost[d]);
        out_min = std::min(out_min, out[d]);
    }
    return out_min;
}

inline std::int32_t min_of(const std::int32_t* lanes, int disp_range) {
    std::int32_t m = lanes[0];
    for (int d = 1; d < disp_range; ++d)
        m = std::min(m, lanes[d]);
    return m;
}

} // namespace sgm4k::detail
