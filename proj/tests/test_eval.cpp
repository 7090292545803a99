#include <doctest.h>

#include <cmath>
#include <random>

#include "sgm4k/eval.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace sgm4k;
using sgm4k::testing::TempDir;

namespace {

constexpr float kInf = std::numeric_limits<float>::infinity();

// Clean constant-shift scene whose ground truth is finite only where every
// variant can match exactly: texture fully visible, census windows clear of
// the replicated border, and no zero-cost census collision below the true
// shift (collisions at local extrema would legitimately tie a raw argmin).
void write_exact_scene(const std::filesystem::path& dir, int w, int h, int shift,
                       std::uint32_t seed) {
    GrayImage right(1, 1), unused(1, 1);
    testing::make_random_pair(w, h, seed, right, unused);
    GrayImage left(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            left.at(x, y) = right.at_clamped(x - shift, y);

    const CostVolume cost = cost_volume(census_transform(left), census_transform(right), shift + 1);

    FloatImage gt_left(w, h), gt_right(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            bool unambiguous = x >= shift + 10 && x < w - 4;
            for (int d = 0; unambiguous && d < shift; ++d)
                if (cost.at(x, y, d) == 0)
                    unambiguous = false;
            gt_left.at(x, y) = unambiguous ? static_cast<float>(shift) : kInf;
            gt_right.at(x, y) = x + shift < w ? static_cast<float>(shift) : kInf;
        }

    std::filesystem::create_directories(dir);
    save_pgm(left, dir / "im0.pgm");
    save_pgm(right, dir / "im1.pgm");
    save_pfm(gt_left, dir / "disp0.pfm");
    save_pfm(gt_right, dir / "disp1.pfm");
}

constexpr Variant kAllVariants[] = {Variant::local_ct, Variant::sgm3, Variant::sgm4,
                                    Variant::sgm8, Variant::sgm_4ppc};

} // namespace

TEST_CASE("variant names round-trip") {
    for (const Variant v : kAllVariants)
        CHECK(variant_from_string(to_string(v)) == v);
    CHECK(!variant_from_string("sgm5").has_value());
    CHECK(variant_paths(Variant::local_ct).empty());
    CHECK(variant_paths(Variant::sgm8).size() == 8);
}

TEST_CASE("bad_pixel_rate full agreement and full disagreement") {
    DisparityMap disp(6, 4);
    FloatImage gt(6, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 6; ++x) {
            disp.at(x, y) = 3;
            gt.at(x, y) = 3.2f;
        }
    CHECK(bad_pixel_rate(disp, gt, nullptr, 1.0) == 0.0);

    DisparityMap invalid(6, 4);
    CHECK(bad_pixel_rate(invalid, gt, nullptr, 1.0) == 100.0);
}

TEST_CASE("bad_pixel_rate matches a per-pixel oracle and skips non-finite truth") {
    std::mt19937 rng(3);
    DisparityMap disp(9, 7);
    FloatImage gt(9, 7);
    OcclusionMask mask(9, 7);
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 9; ++x) {
            disp.at(x, y) = rng() % 5 == 0 ? DisparityMap::kInvalid
                                           : static_cast<std::int32_t>(rng() % 10);
            gt.at(x, y) = rng() % 4 == 0 ? kInf : static_cast<float>(rng() % 10);
            mask.set(x, y, rng() % 3 != 0);
        }
    const double threshold = 1.0;

    std::size_t counted = 0, bad = 0, counted_masked = 0;
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 9; ++x) {
            if (!std::isfinite(gt.at(x, y)))
                continue;
            ++counted;
            if (mask.at(x, y))
                ++counted_masked;
            const std::int32_t d = disp.at(x, y);
            if (d == DisparityMap::kInvalid || std::abs(d - gt.at(x, y)) > threshold)
                ++bad;
        }
    CHECK(bad_pixel_rate(disp, gt, nullptr, threshold) ==
          doctest::Approx(100.0 * bad / counted).epsilon(1e-12));
    CHECK(counted_masked <= counted); // mask only shrinks the denominator

    FloatImage all_inf(9, 7);
    for (float& v : all_inf.data())
        v = kInf;
    CHECK_THROWS_AS(bad_pixel_rate(disp, all_inf, nullptr, threshold), param_error);
    CHECK_THROWS_AS(bad_pixel_rate(disp, gt, nullptr, 0.0), param_error);
    CHECK_THROWS_AS(bad_pixel_rate(disp, FloatImage(8, 7), nullptr, 1.0), param_error);
}

TEST_CASE("noc_mask accepts a consistent pair and rejects inconsistency") {
    const int w = 12, h = 3, shift = 4;
    FloatImage gl(w, h), gr(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            gl.at(x, y) = static_cast<float>(shift);
            gr.at(x, y) = static_cast<float>(shift);
        }
    const OcclusionMask mask = noc_mask(gl, gr, 1.0);
    for (int y = 0; y < h; ++y)
        for (int x = shift; x < w; ++x)
            CHECK(mask.at(x, y));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < shift; ++x)
            CHECK(!mask.at(x, y)); // lookup column off-image

    FloatImage gr_inf(w, h);
    for (float& v : gr_inf.data())
        v = kInf;
    const OcclusionMask none = noc_mask(gl, gr_inf, 1.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            CHECK(!none.at(x, y));
}

TEST_CASE("noc_mask flags a crafted inconsistent pixel") {
    FloatImage gl(4, 1), gr(4, 1);
    gl.at(0, 0) = 0; gl.at(1, 0) = 1; gl.at(2, 0) = 1; gl.at(3, 0) = 1;
    gr.at(0, 0) = 1; gr.at(1, 0) = 1; gr.at(2, 0) = 9; gr.at(3, 0) = 1;
    const OcclusionMask mask = noc_mask(gl, gr, 0.5);
    CHECK(!mask.at(0, 0)); // gr(0)=1 vs gl(0)=0
    CHECK(mask.at(1, 0));
    CHECK(mask.at(2, 0));
    CHECK(!mask.at(3, 0)); // gr(2)=9 vs gl(3)=1
}

TEST_CASE("scale_ground_truth resamples and rescales disparities") {
    FloatImage gt(8, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 8; ++x)
            gt.at(x, y) = static_cast<float>(10 + x);
    gt.at(6, 1) = kInf;

    CHECK(scale_ground_truth(gt, 8, 4) == gt);

    // Halving: pixel x samples source column 2x+1 and values shrink by 1/2.
    const FloatImage half = scale_ground_truth(gt, 4, 2);
    CHECK(half.width() == 4);
    CHECK(half.at(0, 0) == doctest::Approx(11 * 0.5));
    CHECK(half.at(1, 0) == doctest::Approx(13 * 0.5));
    CHECK(half.at(3, 0) == doctest::Approx(17 * 0.5));

    // Non-finite samples pass through unscaled.
    const FloatImage rows_halved = scale_ground_truth(gt, 8, 2);
    CHECK(std::isinf(rows_halved.at(6, 0)));
}

TEST_CASE("run_dataset scores an exactly solvable scene at zero for every variant") {
    TempDir tmp("dataset_exact");
    write_exact_scene(tmp / "flat00", 48, 20, 5, 301);

    DatasetOptions options;
    options.params.disp_range = 16;
    const std::vector<Variant> variants(std::begin(kAllVariants), std::end(kAllVariants));
    const DatasetReport report = run_dataset(tmp.path(), variants, options);

    REQUIRE(report.variants.size() == 5);
    for (const EvalResult& res : report.variants) {
        REQUIRE(res.scenes.size() == 1);
        CHECK(res.mean_all == 0.0);
        CHECK(res.mean_noc == 0.0);
    }
    CHECK(report.warnings.empty());
}

TEST_CASE("run_dataset skips broken scenes with a warning") {
    TempDir tmp("dataset_skip");
    write_exact_scene(tmp / "good", 48, 20, 5, 302);
    std::filesystem::create_directories(tmp / "broken"); // no files at all

    DatasetOptions options;
    options.params.disp_range = 16;
    const std::vector<Variant> variants = {Variant::sgm4};
    const DatasetReport report = run_dataset(tmp.path(), variants, options);
    REQUIRE(report.variants.size() == 1);
    CHECK(report.variants[0].scenes.size() == 1);
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("broken") != std::string::npos);
}

TEST_CASE("run_dataset with no variants yields an empty report") {
    TempDir tmp("dataset_empty");
    write_exact_scene(tmp / "only", 48, 20, 5, 303);
    const DatasetReport report = run_dataset(tmp.path(), {}, DatasetOptions{});
    CHECK(report.variants.empty());
    CHECK(report_to_csv(report) == "variant,scene,all_pct,noc_pct\n");
}

TEST_CASE("run_dataset output is identical across thread counts") {
    TempDir tmp("dataset_threads");
    for (int i = 0; i < 3; ++i)
        testing::write_scene(testing::make_scene(64, 32, 16, 400 + i),
                             tmp / ("s" + std::to_string(i)));

    DatasetOptions options;
    options.params.disp_range = 16;
    const std::vector<Variant> variants = {Variant::sgm4, Variant::sgm_4ppc};

    const DatasetReport serial = run_dataset(tmp.path(), variants, options);
    options.threads = 4;
    const DatasetReport parallel = run_dataset(tmp.path(), variants, options);
    CHECK(report_to_csv(serial) == report_to_csv(parallel));
}

TEST_CASE("csv layout carries one mean row per variant") {
    TempDir tmp("dataset_csv");
    write_exact_scene(tmp / "a", 48, 20, 5, 304);
    DatasetOptions options;
    options.params.disp_range = 16;
    const std::vector<Variant> variants = {Variant::sgm4};
    const std::string csv = report_to_csv(run_dataset(tmp.path(), variants, options));
    CHECK(csv == "variant,scene,all_pct,noc_pct\n"
                 "sgm4,a,0.0000,0.0000\n"
                 "sgm4,mean,0.0000,0.0000\n");
}

TEST_CASE("run_dataset writes per-scene disparity maps when asked") {
    TempDir tmp("dataset_maps");
    write_exact_scene(tmp / "a", 48, 20, 5, 305);
    DatasetOptions options;
    options.params.disp_range = 16;
    options.maps_dir = tmp / "maps";
    const std::vector<Variant> variants = {Variant::sgm4};
    run_dataset(tmp.path(), variants, options);
    CHECK(std::filesystem::exists(tmp / "maps" / "a_sgm4.pgm"));
}
