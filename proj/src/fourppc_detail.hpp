#pragma once

// Estimation inner loop shared by estimate_prev, the batch 4ppc aggregation
// and the streaming engine, so all three stay bit-identical.

#include <bit>
#include <cstdint>

#include "sgm4k/errors.hpp"

namespace sgm4k::detail {

inline constexpr int kNoCorrectionShift = -1;

inline int lambda_shift(int lambda) {
    if (lambda == 0)
        return kNoCorrectionShift;
    if (lambda < 0 || !std::has_single_bit(static_cast<unsigned>(lambda)))
        throw param_error("lambda must be a power of two (or 0 for no correction)");
    return std::countr_zero(static_cast<unsigned>(lambda));
}

// Predecessor estimates for lanes 2..4 from the last exact lane cost and the
// current word's first three matching-cost lanes. Right shifts on the signed
// differences floor toward negative infinity (C++20 arithmetic shift).
template <typename CostT>
inline void estimate_lanes(const std::int32_t* last, const CostT* c1, const CostT* c2,
                           const CostT* c3, int shift, std::int32_t* e2, std::int32_t* e3,
                           std::int32_t* e4, int disp_range) {
    if (shift == kNoCorrectionShift) {
        for (int d = 0; d < disp_range; ++d)
            e2[d] = e3[d] = e4[d] = last[d];
        return;
    }
    for (int d = 0; d < disp_range; ++d) {
        const std::int32_t l = last[d];
        const std::int32_t cost1 = static_cast<std::int32_t>(c1[d]);
        const std::int32_t avg12 = (cost1 + static_cast<std::int32_t>(c2[d])) >> 1;
        const std::int32_t avg123 = (avg12 + static_cast<std::int32_t>(c3[d])) >> 1;
        e2[d] = l + ((cost1 - l) >> shift);
        e3[d] = l + ((avg12 - l) >> shift);
        e4[d] = l + ((avg123 - l) >> shift);
    }
}

} // namespace sgm4k::detail
