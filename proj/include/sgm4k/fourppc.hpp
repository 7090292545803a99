#pragma once

#include <memory>

#include "sgm4k/aggregate.hpp"

namespace sgm4k {

// Pixels per vector word on the transport format.
inline constexpr int kLanes = 4;

// Sentinel lambda: the estimated predecessor degenerates to the last exact
// aggregation cost (the dependency-relaxation scheme, no correction term).
inline constexpr int kLambdaNoCorrection = 0;

struct EstimatedPredecessors {
    std::vector<std::int32_t> lane2;
    std::vector<std::int32_t> lane3;
    std::vector<std::int32_t> lane4;
};

// Estimated predecessor aggregation costs for pixels 2..4 of a 4-pixel word,
// built from the exact cost of the last pixel of the previous word (L_last)
// and the matching costs of the current word's earlier pixels:
//   lane2(d) = L_last(d) + (C1(d) - L_last(d)) / lambda
//   lane3(d) = L_last(d) + ((C1(d)+C2(d))/2 - L_last(d)) / lambda
//   lane4(d) = L_last(d) + (((C1(d)+C2(d))/2 + C3(d))/2 - L_last(d)) / lambda
// Every division is a floor division by a power of two (arithmetic shift),
// including on negative differences. Pixel 1 needs no estimate: it uses
// L_last directly.
EstimatedPredecessors estimate_prev(std::span<const std::int32_t> last,
                                    std::span<const std::int32_t> c1,
                                    std::span<const std::int32_t> c2,
                                    std::span<const std::int32_t> c3, int lambda);

// Left-to-right path aggregation processed four pixels per step. Pixel 1 of
// each word relaxes against the exact cost of the previous word's pixel 4;
// pixels 2..4 relax against the estimates above. The first word of a row
// starts with L = C on pixel 1 and estimates lanes 2..4 from that result.
// Width must be a multiple of 4.
PathCostVolume aggregate_0deg_4ppc(const CostVolume& cost, int p1, int p2, int lambda);

// Same pipeline as run_sgm, with the 0-degree path replaced by the estimated
// 4ppc variant (the other directions keep their exact predecessors, which
// live in the previous row). Widths not divisible by 4 are padded internally
// by replicating the last column; padded columns are cropped from the output.
DisparityMap run_4ppc(const GrayImage& left, const GrayImage& right, const SgmParams& params);

// Retained-state accounting of the streaming engine, in stored entries.
struct StreamStats {
    std::size_t line_buffer_entries = 0; // path line buffers, width*D each
    std::size_t carry_entries = 0;       // D-vector carries (0-degree word carry, 135-degree delay)
    std::size_t scratch_entries = 0;     // per-word working vectors
    std::size_t context_row_entries = 0; // retained input rows + current census rows

    std::size_t total() const {
        return line_buffer_entries + carry_entries + scratch_entries + context_row_entries;
    }
};

struct StreamingResult {
    DisparityMap map;
    StreamStats stats;
};

// Row-at-a-time engine. Consumes one input row per push, retains only
// line-buffer state (three path line buffers, small carries, and the census
// context rows), and emits a disparity map bit-identical to run_4ppc.
// Supports the single-pass directions only (0/45/90/135 degrees).
class StreamingSgm {
public:
    StreamingSgm(int width, int height, const SgmParams& params);
    ~StreamingSgm();

    StreamingSgm(StreamingSgm&&) noexcept;
    StreamingSgm& operator=(StreamingSgm&&) noexcept;

    // Rows must arrive top-down, exactly height() of them, width() samples each.
    void push_row(std::span<const std::uint8_t> left, std::span<const std::uint8_t> right);

    int width() const;
    int height() const;

    // Valid once all rows have been pushed.
    StreamingResult finish();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Feeds the pair through StreamingSgm (plus a second pass on the flipped
// pair when the consistency check is enabled) and reports peak retained
// state. Output is bit-identical to run_4ppc.
StreamingResult run_streaming(const GrayImage& left, const GrayImage& right,
                              const SgmParams& params);

} // namespace sgm4k
