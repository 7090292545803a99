#include "sgm4k/fourppc.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <deque>

#include "fourppc_detail.hpp"
#include "path_relax.hpp"
#include "pipeline_detail.hpp"

namespace sgm4k {

EstimatedPredecessors estimate_prev(std::span<const std::int32_t> last,
                                    std::span<const std::int32_t> c1,
                                    std::span<const std::int32_t> c2,
                                    std::span<const std::int32_t> c3, int lambda) {
    const std::size_t n = last.size();
    if (n == 0 || c1.size() != n || c2.size() != n || c3.size() != n)
        throw param_error("estimate_prev: lane vectors must be nonempty and of equal length");
    const int shift = detail::lambda_shift(lambda);
    EstimatedPredecessors est;
    est.lane2.resize(n);
    est.lane3.resize(n);
    est.lane4.resize(n);
    detail::estimate_lanes(last.data(), c1.data(), c2.data(), c3.data(), shift,
                           est.lane2.data(), est.lane3.data(), est.lane4.data(),
                           static_cast<int>(n));
    return est;
}

PathCostVolume aggregate_0deg_4ppc(const CostVolume& cost, int p1, int p2, int lambda) {
    if (p1 <= 0 || p2 <= p1)
        throw param_error("aggregate_0deg_4ppc: require 0 < P1 < P2");
    if (cost.width() % kLanes != 0)
        throw param_error("aggregate_0deg_4ppc: width must be a multiple of 4");
    const int shift = detail::lambda_shift(lambda);

    const int w = cost.width(), h = cost.height(), dr = cost.disp_range();
    PathCostVolume out(w, h, dr, PathDirection::deg0);
    std::vector<std::int32_t> est2(dr), est3(dr), est4(dr);

    for (int y = 0; y < h; ++y) {
        const std::int32_t* word_carry = nullptr; // exact L of the previous word's lane 4
        for (int gx = 0; gx < w; gx += kLanes) {
            const std::uint8_t* c1 = cost.lanes(gx, y).data();
            const std::uint8_t* c2 = cost.lanes(gx + 1, y).data();
            const std::uint8_t* c3 = cost.lanes(gx + 2, y).data();
            const std::uint8_t* c4 = cost.lanes(gx + 3, y).data();
            std::int32_t* o1 = out.lanes(gx, y).data();

            const std::int32_t* last;
            if (word_carry == nullptr) {
                detail::init_lanes(c1, o1, dr); // row start: lane 1 has no predecessor
                last = o1;
            } else {
                detail::relax_lanes(word_carry, detail::min_of(word_carry, dr), c1, o1, dr, p1, p2);
                last = word_carry;
            }

            detail::estimate_lanes(last, c1, c2, c3, shift, est2.data(), est3.data(), est4.data(), dr);

            std::int32_t* o2 = out.lanes(gx + 1, y).data();
            std::int32_t* o3 = out.lanes(gx + 2, y).data();
            std::int32_t* o4 = out.lanes(gx + 3, y).data();
            detail::relax_lanes(est2.data(), detail::min_of(est2.data(), dr), c2, o2, dr, p1, p2);
            detail::relax_lanes(est3.data(), detail::min_of(est3.data(), dr), c3, o3, dr, p1, p2);
            detail::relax_lanes(est4.data(), detail::min_of(est4.data(), dr), c4, o4, dr, p1, p2);

            word_carry = o4;
        }
    }
    return out;
}

namespace {

GrayImage pad_width(const GrayImage& img, int new_width) {
    GrayImage out(new_width, img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = img.at(x, y);
        for (int x = img.width(); x < new_width; ++x)
            out.at(x, y) = img.at(img.width() - 1, y);
    }
    return out;
}

DisparityMap crop_width(const DisparityMap& map, int width) {
    if (map.width() == width)
        return map;
    DisparityMap out(width, map.height());
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = map.at(x, y);
    return out;
}

int padded_width_for(int width) {
    return (width + kLanes - 1) / kLanes * kLanes;
}

DisparityMap fourppc_core(const GrayImage& left, const GrayImage& right, const SgmParams& params) {
    const int width = left.width();
    const int padded = padded_width_for(width);
    if (padded != width)
        return crop_width(fourppc_core(pad_width(left, padded), pad_width(right, padded), params),
                          width);

    const CensusImage census_base = census_transform(left);
    const CensusImage census_ref = census_transform(right);
    const CostVolume cost = cost_volume(census_base, census_ref, params.disp_range);
    if (params.paths.empty())
        return select_disparity(cost);
    AggregatedVolume summed(cost.width(), cost.height(), cost.disp_range());
    for (const PathDirection r : params.paths) {
        if (r == PathDirection::deg0)
            summed.add(aggregate_0deg_4ppc(cost, params.p1, params.p2, params.lambda));
        else
            summed.add(aggregate_path(cost, r, params.p1, params.p2));
    }
    return select_disparity(summed);
}

} // namespace

DisparityMap run_4ppc(const GrayImage& left, const GrayImage& right, const SgmParams& params) {
    params.validate();
    detail::check_pair(left, right);
    return detail::with_post(left, right, params, fourppc_core);
}

// ---------------------------------------------------------------------------
// Streaming engine

struct StreamingSgm::Impl {
    int width;
    int height;
    int padded;
    SgmParams params;
    bool use0 = false, use45 = false, use90 = false, use135 = false;
    bool local_only = false; // empty path set: argmin of raw costs

    // Context rows: up to five retained input rows per image plus the two
    // census descriptor rows of the line in flight.
    std::deque<std::vector<std::uint8_t>> left_rows, right_rows;
    int front_row = 0;  // image row index of the deques' front
    int rows_pushed = 0;
    int rows_produced = 0;
    std::vector<std::uint32_t> census_base, census_ref;

    // Line-buffer state: previous-row path costs, overwritten in place during
    // the left-to-right scan of the current row.
    std::vector<std::int32_t> l45, l90, l135; // padded * D each (when used)
    std::vector<std::int32_t> carry0;         // last word's lane-4 cost on the 0-degree path
    std::vector<std::int32_t> delay135;       // previous-row value at x-1, saved before overwrite

    // Per-word scratch.
    std::vector<std::int32_t> cost_word;            // 4 * D matching-cost lanes
    std::vector<std::int32_t> est2, est3, est4;     // estimated predecessors
    std::vector<std::int32_t> l0_word;              // 4 * D current-word 0-degree results
    std::vector<std::int32_t> path_tmp, sum_lanes;  // D each

    DisparityMap out;

    Impl(int w, int h, const SgmParams& p)
        : width(w), height(h), padded(padded_width_for(w)), params(p), out(w, h) {
        for (const PathDirection r : params.paths) {
            switch (r) {
            case PathDirection::deg0: use0 = true; break;
            case PathDirection::deg45: use45 = true; break;
            case PathDirection::deg90: use90 = true; break;
            case PathDirection::deg135: use135 = true; break;
            default:
                throw param_error("run_streaming: reverse directions need full-frame storage");
            }
        }
        local_only = params.paths.empty();
        const int dr = params.disp_range;
        const std::size_t line = static_cast<std::size_t>(padded) * dr;
        census_base.resize(padded);
        census_ref.resize(padded);
        if (use45) l45.resize(line);
        if (use90) l90.resize(line);
        if (use135) { l135.resize(line); delay135.resize(dr); }
        if (use0) carry0.resize(dr);
        cost_word.resize(static_cast<std::size_t>(kLanes) * dr);
        est2.resize(dr); est3.resize(dr); est4.resize(dr);
        l0_word.resize(static_cast<std::size_t>(kLanes) * dr);
        path_tmp.resize(dr);
        sum_lanes.resize(dr);
    }

    const std::uint8_t* input_row(const std::deque<std::vector<std::uint8_t>>& rows, int y) const {
        const int clamped = std::clamp(y, 0, height - 1);
        return rows[static_cast<std::size_t>(clamped - front_row)].data();
    }

    void compute_census_row(int y) {
        const int r = kCensusWindow / 2;
        for (int img = 0; img < 2; ++img) {
            const auto& rows = img == 0 ? left_rows : right_rows;
            auto& census = img == 0 ? census_base : census_ref;
            std::array<const std::uint8_t*, kCensusWindow> window{};
            for (int wy = 0; wy < kCensusWindow; ++wy)
                window[wy] = input_row(rows, y - r + wy);
            for (int x = 0; x < padded; ++x) {
                const std::uint8_t center = window[r][x];
                std::uint32_t desc = 0;
                int k = 0;
                for (int wy = 0; wy < kCensusWindow; ++wy)
                    for (int wx = x - r; wx <= x + r; ++wx) {
                        if (wy == r && wx == x)
                            continue;
                        if (window[wy][std::clamp(wx, 0, padded - 1)] < center)
                            desc |= 1u << k;
                        ++k;
                    }
                census[x] = desc;
            }
        }
    }

    void fill_cost_lanes(int x, std::int32_t* lanes) const {
        const std::uint32_t base = census_base[x];
        for (int d = 0; d < params.disp_range; ++d)
            lanes[d] = std::popcount(base ^ census_ref[std::max(x - d, 0)]);
    }

    void produce_row(int y) {
        compute_census_row(y);
        const int dr = params.disp_range;
        for (int gx = 0; gx < padded; gx += kLanes) {
            for (int lane = 0; lane < kLanes; ++lane)
                fill_cost_lanes(gx + lane, cost_word.data() + static_cast<std::size_t>(lane) * dr);

            if (use0) {
                const std::int32_t* c1 = cost_word.data();
                std::int32_t* o1 = l0_word.data();
                const std::int32_t* last;
                if (gx == 0) {
                    detail::init_lanes(c1, o1, dr);
                    last = o1;
                } else {
                    detail::relax_lanes(carry0.data(), detail::min_of(carry0.data(), dr), c1, o1,
                                        dr, params.p1, params.p2);
                    last = carry0.data();
                }
                detail::estimate_lanes(last, c1, cost_word.data() + dr,
                                       cost_word.data() + 2 * static_cast<std::size_t>(dr),
                                       detail::lambda_shift(params.lambda), est2.data(),
                                       est3.data(), est4.data(), dr);
                const std::int32_t* ests[3] = {est2.data(), est3.data(), est4.data()};
                for (int lane = 1; lane < kLanes; ++lane)
                    detail::relax_lanes(ests[lane - 1], detail::min_of(ests[lane - 1], dr),
                                        cost_word.data() + static_cast<std::size_t>(lane) * dr,
                                        l0_word.data() + static_cast<std::size_t>(lane) * dr, dr,
                                        params.p1, params.p2);
                std::memcpy(carry0.data(), l0_word.data() + static_cast<std::size_t>(kLanes - 1) * dr,
                            sizeof(std::int32_t) * dr);
            }

            for (int lane = 0; lane < kLanes; ++lane) {
                const int x = gx + lane;
                const std::int32_t* cost = cost_word.data() + static_cast<std::size_t>(lane) * dr;

                if (local_only) {
                    std::memcpy(sum_lanes.data(), cost, sizeof(std::int32_t) * dr);
                } else {
                    std::fill(sum_lanes.begin(), sum_lanes.end(), 0);
                    if (use0) {
                        const std::int32_t* l0 = l0_word.data() + static_cast<std::size_t>(lane) * dr;
                        for (int d = 0; d < dr; ++d)
                            sum_lanes[d] += l0[d];
                    }
                    if (use45) {
                        std::int32_t* buf = l45.data() + static_cast<std::size_t>(x) * dr;
                        if (y == 0 || x == padded - 1) {
                            detail::init_lanes(cost, path_tmp.data(), dr);
                        } else {
                            const std::int32_t* prev = buf + dr; // previous row, column x+1
                            detail::relax_lanes(prev, detail::min_of(prev, dr), cost,
                                                path_tmp.data(), dr, params.p1, params.p2);
                        }
                        for (int d = 0; d < dr; ++d)
                            sum_lanes[d] += path_tmp[d];
                        std::memcpy(buf, path_tmp.data(), sizeof(std::int32_t) * dr);
                    }
                    if (use90) {
                        std::int32_t* buf = l90.data() + static_cast<std::size_t>(x) * dr;
                        if (y == 0)
                            detail::init_lanes(cost, path_tmp.data(), dr);
                        else
                            detail::relax_lanes(buf, detail::min_of(buf, dr), cost, path_tmp.data(),
                                                dr, params.p1, params.p2);
                        for (int d = 0; d < dr; ++d)
                            sum_lanes[d] += path_tmp[d];
                        std::memcpy(buf, path_tmp.data(), sizeof(std::int32_t) * dr);
                    }
                    if (use135) {
                        std::int32_t* buf = l135.data() + static_cast<std::size_t>(x) * dr;
                        if (y == 0 || x == 0)
                            detail::init_lanes(cost, path_tmp.data(), dr);
                        else
                            detail::relax_lanes(delay135.data(), detail::min_of(delay135.data(), dr),
                                                cost, path_tmp.data(), dr, params.p1, params.p2);
                        // buf still holds the previous row's value at x; it becomes
                        // the delayed predecessor of column x+1.
                        std::memcpy(delay135.data(), buf, sizeof(std::int32_t) * dr);
                        for (int d = 0; d < dr; ++d)
                            sum_lanes[d] += path_tmp[d];
                        std::memcpy(buf, path_tmp.data(), sizeof(std::int32_t) * dr);
                    }
                }

                if (x < width) {
                    int best = 0;
                    for (int d = 1; d < dr; ++d)
                        if (sum_lanes[d] < sum_lanes[best])
                            best = d;
                    out.at(x, y) = best;
                }
            }
        }
        ++rows_produced;
    }

    void push(std::span<const std::uint8_t> left, std::span<const std::uint8_t> right) {
        if (rows_pushed >= height)
            throw param_error("push_row: all rows already pushed");
        if (left.size() != static_cast<std::size_t>(width) ||
            right.size() != static_cast<std::size_t>(width))
            throw param_error("push_row: row length must equal width");

        auto padded_row = [&](std::span<const std::uint8_t> row) {
            std::vector<std::uint8_t> r(padded);
            std::memcpy(r.data(), row.data(), row.size());
            for (int x = width; x < padded; ++x)
                r[x] = row[width - 1];
            return r;
        };
        left_rows.push_back(padded_row(left));
        right_rows.push_back(padded_row(right));
        if (left_rows.size() > kCensusWindow) {
            left_rows.pop_front();
            right_rows.pop_front();
            ++front_row;
        }
        ++rows_pushed;

        // Row y becomes computable once its census window (rows up to y+2,
        // clamped at the bottom edge) is available.
        while (rows_produced < height &&
               std::min(rows_produced + kCensusWindow / 2, height - 1) <= rows_pushed - 1)
            produce_row(rows_produced);
    }

    StreamStats stats() const {
        StreamStats s;
        s.line_buffer_entries = l45.size() + l90.size() + l135.size();
        s.carry_entries = carry0.size() + delay135.size();
        s.scratch_entries = cost_word.size() + est2.size() + est3.size() + est4.size() +
                            l0_word.size() + path_tmp.size() + sum_lanes.size();
        s.context_row_entries = (left_rows.size() + right_rows.size()) * padded +
                                census_base.size() + census_ref.size();
        return s;
    }
};

StreamingSgm::StreamingSgm(int width, int height, const SgmParams& params) {
    params.validate();
    if (width < kCensusWindow || height < kCensusWindow)
        throw param_error("StreamingSgm: frame smaller than the census window");
    impl_ = std::make_unique<Impl>(width, height, params);
}

StreamingSgm::~StreamingSgm() = default;
StreamingSgm::StreamingSgm(StreamingSgm&&) noexcept = default;
StreamingSgm& StreamingSgm::operator=(StreamingSgm&&) noexcept = default;

int StreamingSgm::width() const { return impl_->width; }
int StreamingSgm::height() const { return impl_->height; }

void StreamingSgm::push_row(std::span<const std::uint8_t> left,
                            std::span<const std::uint8_t> right) {
    impl_->push(left, right);
}

StreamingResult StreamingSgm::finish() {
    if (impl_->rows_pushed != impl_->height)
        throw param_error("finish: not all rows pushed");
    const StreamStats stats = impl_->stats();
    return {std::move(impl_->out), stats};
}

StreamingResult run_streaming(const GrayImage& left, const GrayImage& right,
                              const SgmParams& params) {
    params.validate();
    detail::check_pair(left, right);

    StreamStats peak;
    auto merge = [](StreamStats& a, const StreamStats& b) {
        a.line_buffer_entries = std::max(a.line_buffer_entries, b.line_buffer_entries);
        a.carry_entries = std::max(a.carry_entries, b.carry_entries);
        a.scratch_entries = std::max(a.scratch_entries, b.scratch_entries);
        a.context_row_entries = std::max(a.context_row_entries, b.context_row_entries);
    };
    auto core = [&](const GrayImage& base, const GrayImage& ref, const SgmParams& p) {
        StreamingSgm engine(base.width(), base.height(), p);
        for (int y = 0; y < base.height(); ++y)
            engine.push_row(base.row(y), ref.row(y));
        StreamingResult res = engine.finish();
        merge(peak, res.stats);
        return std::move(res.map);
    };
    DisparityMap map = detail::with_post(left, right, params, core);
    return {std::move(map), peak};
}

} // namespace sgm4k
