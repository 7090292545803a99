#pragma once

#include <filesystem>
#include <string>

#include "sgm4k/fourppc.hpp"
#include "sgm4k/imageio.hpp"

namespace sgm4k {

// Algorithm variants compared by the evaluation harness.
enum class Variant {
    local_ct, // raw census-cost argmin, no aggregation
    sgm3,     // paths {45, 90, 135}
    sgm4,     // paths {0, 45, 90, 135}
    sgm8,     // the four single-pass paths plus their reverses
    sgm_4ppc, // 4 paths with the estimated 0-degree path
};

const char* to_string(Variant v);
std::optional<Variant> variant_from_string(std::string_view name);
std::vector<PathDirection> variant_paths(Variant v);

// Runs one variant; the variant's path preset overrides params.paths.
DisparityMap run_variant(Variant v, const GrayImage& left, const GrayImage& right,
                         SgmParams params);

// Boolean per pixel, true = non-occluded.
class OcclusionMask {
public:
    OcclusionMask(int width, int height)
        : width_(width), height_(height) {
        detail::check_dims(width, height);
        data_.resize(static_cast<std::size_t>(width) * height, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    bool at(int x, int y) const { return data_[idx(x, y)] != 0; }
    void set(int x, int y, bool v) { data_[idx(x, y)] = v ? 1 : 0; }

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

// Percentage of bad pixels over the pixels with finite ground truth (further
// restricted by the mask when given): bad = invalid disparity or an absolute
// error above the threshold. Throws param_error when no pixel is counted.
double bad_pixel_rate(const DisparityMap& disp, const FloatImage& gt, const OcclusionMask* mask,
                      double threshold);

// Derives a non-occluded mask from the two ground truths: a pixel passes iff
// the right-view ground truth at column x - gt_left(x,y) (nearest integer)
// exists, is finite, and agrees with gt_left within the threshold.
OcclusionMask noc_mask(const FloatImage& gt_left, const FloatImage& gt_right, double threshold);

// Nearest-neighbor resample with disparity values rescaled by the width
// ratio (disparities scale linearly with image width).
FloatImage scale_ground_truth(const FloatImage& gt, int width, int height);

struct SceneResult {
    std::string scene;
    double all_pct = 0.0;
    double noc_pct = 0.0;
};

struct EvalResult {
    std::string variant;
    std::vector<SceneResult> scenes;
    double mean_all = 0.0;
    double mean_noc = 0.0;
};

struct DatasetOptions {
    SgmParams params;
    double bad_threshold = 1.0;  // disparity units
    double mask_threshold = 1.0; // for masks derived from the two ground truths
    int threads = 1;
    std::filesystem::path maps_dir; // when set, per-scene disparity PGMs are written
};

struct DatasetReport {
    std::vector<EvalResult> variants;
    std::vector<std::string> warnings; // skipped scenes and their reasons
};

// Evaluates each variant over every scene directory under root. A scene
// directory holds im0.pgm, im1.pgm, disp0.pfm, and either mask0nocc.pgm or
// disp1.pfm (the mask is derived when no mask file is present). Scenes with
// missing or unreadable files are skipped with a warning. Scene rows come out
// sorted by name regardless of thread count.
DatasetReport run_dataset(const std::filesystem::path& root, std::span<const Variant> variants,
                          const DatasetOptions& options);

// CSV rows variant,scene,all_pct,noc_pct with one trailing mean row per
// variant (scene name "mean").
std::string report_to_csv(const DatasetReport& report);
void write_csv(const DatasetReport& report, const std::filesystem::path& path);

} // namespace sgm4k
