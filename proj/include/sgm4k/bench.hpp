#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sgm4k/errors.hpp"

namespace sgm4k {

// Disparity-estimate throughput, million estimates per second, kept as an
// exact rational (width*height*disp_range*fps / 10^6) until display.
struct MdeRate {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    // Nearest integer, half rounded up.
    std::uint64_t rounded() const { return (num + den / 2) / den; }
};

MdeRate mde_per_second(std::uint64_t width, std::uint64_t height, std::uint64_t disp_range,
                       std::uint64_t fps_num, std::uint64_t fps_den = 1);

struct BenchTiming {
    double median_seconds = 0.0;
    double min_seconds = 0.0;
    double fps = 0.0;       // 1 / median
    double mde_per_s = 0.0; // width*height*disp_range*fps / 10^6, from the median
};

// Times `reps` invocations of fn. The throughput figure uses the median wall
// time; the minimum is reported alongside.
template <typename F>
BenchTiming time_runs(int reps, std::uint64_t width, std::uint64_t height,
                      std::uint64_t disp_range, F&& fn) {
    if (reps < 1)
        throw param_error("bench: repetitions must be >= 1");
    std::vector<double> seconds(reps);
    for (int i = 0; i < reps; ++i) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    std::sort(seconds.begin(), seconds.end());
    BenchTiming t;
    t.min_seconds = seconds.front();
    t.median_seconds = seconds[(seconds.size() - 1) / 2];
    t.fps = 1.0 / t.median_seconds;
    t.mde_per_s = static_cast<double>(width * height * disp_range) * t.fps / 1e6;
    return t;
}

} // namespace sgm4k
