#pragma once

// Internal pipeline plumbing shared by the batch, 4ppc and streaming entry
// points: pair validation, the raw batch core, and the post-processing
// composition (median, then left-right consistency against a disparity map
// computed from the role-swapped pair).

#include "sgm4k/aggregate.hpp"

namespace sgm4k::detail {

void check_pair(const GrayImage& left, const GrayImage& right);

DisparityMap batch_core(const GrayImage& left, const GrayImage& right, const SgmParams& params);

// The right-base disparity map (reference matched against base with the
// disparity direction reversed) is computed by running the same core on the
// horizontally flipped pair and flipping the result back.
template <typename Core>
DisparityMap with_post(const GrayImage& left, const GrayImage& right, const SgmParams& params,
                       Core&& core) {
    DisparityMap map = core(left, right, params);
    if (params.post.median)
        map = median3x3(map);
    if (params.post.lr_check) {
        const GrayImage flipped_left = flip_horizontal(left);
        const GrayImage flipped_right = flip_horizontal(right);
        DisparityMap right_map = flip_horizontal(core(flipped_right, flipped_left, params));
        if (params.post.median)
            right_map = median3x3(right_map);
        map = lr_check(map, right_map, params.post.lr_threshold);
    }
    return map;
}

} // namespace sgm4k::detail
