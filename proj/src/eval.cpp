#include "sgm4k/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace sgm4k {

const char* to_string(Variant v) {
    switch (v) {
    case Variant::local_ct: return "local-ct";
    case Variant::sgm3: return "sgm3";
    case Variant::sgm4: return "sgm4";
    case Variant::sgm8: return "sgm8";
    case Variant::sgm_4ppc: return "sgm-4ppc";
    }
    return "?";
}

std::optional<Variant> variant_from_string(std::string_view name) {
    for (const Variant v : {Variant::local_ct, Variant::sgm3, Variant::sgm4, Variant::sgm8,
                            Variant::sgm_4ppc})
        if (name == to_string(v))
            return v;
    return std::nullopt;
}

std::vector<PathDirection> variant_paths(Variant v) {
    using enum PathDirection;
    switch (v) {
    case Variant::local_ct:
        return {};
    case Variant::sgm3:
        return {deg45, deg90, deg135};
    case Variant::sgm4:
    case Variant::sgm_4ppc:
        return {deg0, deg45, deg90, deg135};
    case Variant::sgm8:
        return {deg0, deg45, deg90, deg135, deg180, deg225, deg270, deg315};
    }
    return {};
}

DisparityMap run_variant(Variant v, const GrayImage& left, const GrayImage& right,
                         SgmParams params) {
    params.paths = variant_paths(v);
    if (v == Variant::sgm_4ppc)
        return run_4ppc(left, right, params);
    return run_sgm(left, right, params);
}

double bad_pixel_rate(const DisparityMap& disp, const FloatImage& gt, const OcclusionMask* mask,
                      double threshold) {
    if (disp.width() != gt.width() || disp.height() != gt.height())
        throw param_error("bad_pixel_rate: disparity/ground-truth dimensions differ");
    if (mask && (mask->width() != gt.width() || mask->height() != gt.height()))
        throw param_error("bad_pixel_rate: mask dimensions differ");
    if (threshold <= 0.0)
        throw param_error("bad_pixel_rate: threshold must be positive");

    std::size_t counted = 0, bad = 0;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x) {
            const float truth = gt.at(x, y);
            if (!std::isfinite(truth))
                continue;
            if (mask && !mask->at(x, y))
                continue;
            ++counted;
            const std::int32_t d = disp.at(x, y);
            if (d == DisparityMap::kInvalid || std::abs(d - static_cast<double>(truth)) > threshold)
                ++bad;
        }
    if (counted == 0)
        throw param_error("bad_pixel_rate: no pixels counted (empty denominator)");
    return 100.0 * static_cast<double>(bad) / static_cast<double>(counted);
}

OcclusionMask noc_mask(const FloatImage& gt_left, const FloatImage& gt_right, double threshold) {
    if (gt_left.width() != gt_right.width() || gt_left.height() != gt_right.height())
        throw param_error("noc_mask: ground-truth dimensions differ");
    const int w = gt_left.width(), h = gt_left.height();
    OcclusionMask mask(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const float dl = gt_left.at(x, y);
            if (!std::isfinite(dl))
                continue;
            const int xr = static_cast<int>(std::lround(x - static_cast<double>(dl)));
            if (xr < 0 || xr >= w)
                continue;
            const float dr = gt_right.at(xr, y);
            if (std::isfinite(dr) && std::abs(static_cast<double>(dl) - dr) <= threshold)
                mask.set(x, y, true);
        }
    return mask;
}

FloatImage scale_ground_truth(const FloatImage& gt, int width, int height) {
    detail::check_dims(width, height);
    if (gt.width() == width && gt.height() == height)
        return gt;
    FloatImage out(width, height);
    const double value_scale = static_cast<double>(width) / gt.width();
    for (int y = 0; y < height; ++y) {
        const int sy = std::min(gt.height() - 1, static_cast<int>((y + 0.5) * gt.height() / height));
        for (int x = 0; x < width; ++x) {
            const int sx = std::min(gt.width() - 1, static_cast<int>((x + 0.5) * gt.width() / width));
            const float v = gt.at(sx, sy);
            out.at(x, y) = std::isfinite(v) ? static_cast<float>(v * value_scale) : v;
        }
    }
    return out;
}

namespace {

struct SceneInput {
    std::string name;
    GrayImage left;
    GrayImage right;
    FloatImage gt_left;
    OcclusionMask mask;
};

// Loads one scene directory, scaling ground truth to the image resolution
// and deriving the non-occluded mask when no mask file is present.
SceneInput load_scene(const std::filesystem::path& dir, const DatasetOptions& options) {
    namespace fs = std::filesystem;
    auto pick = [&](std::initializer_list<const char*> names) -> fs::path {
        for (const char* n : names)
            if (fs::exists(dir / n))
                return dir / n;
        throw io_error("missing " + std::string(*names.begin()));
    };

    GrayImage left = load_pgm(pick({"im0.pgm", "im0.ppm"}));
    GrayImage right = load_pgm(pick({"im1.pgm", "im1.ppm"}));
    if (left.width() != right.width() || left.height() != right.height())
        throw format_error("left/right dimensions differ");

    FloatImage gt_left =
        scale_ground_truth(load_pfm(dir / "disp0.pfm"), left.width(), left.height());

    const fs::path mask_path = dir / "mask0nocc.pgm";
    OcclusionMask mask(left.width(), left.height());
    if (fs::exists(mask_path)) {
        const GrayImage m = load_pgm(mask_path);
        if (m.width() != left.width() || m.height() != left.height())
            throw format_error("mask0nocc.pgm dimensions differ from images");
        for (int y = 0; y < m.height(); ++y)
            for (int x = 0; x < m.width(); ++x)
                mask.set(x, y, m.at(x, y) == 255); // Middlebury: 255 = known non-occluded
    } else {
        FloatImage gt_right =
            scale_ground_truth(load_pfm(dir / "disp1.pfm"), left.width(), left.height());
        mask = noc_mask(gt_left, gt_right, options.mask_threshold);
    }
    return {dir.filename().string(), std::move(left), std::move(right), std::move(gt_left),
            std::move(mask)};
}

std::string format_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace

DatasetReport run_dataset(const std::filesystem::path& root, std::span<const Variant> variants,
                          const DatasetOptions& options) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root))
        throw io_error("dataset root is not a directory: " + root.string());
    options.params.validate();

    std::vector<fs::path> scene_dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory())
            scene_dirs.push_back(entry.path());
    std::sort(scene_dirs.begin(), scene_dirs.end());

    DatasetReport report;
    for (const Variant v : variants)
        report.variants.push_back({to_string(v), {}, 0.0, 0.0});

    // One job per scene computes every variant; rows land in per-scene slots
    // so assembly order does not depend on the thread count.
    struct SceneRows {
        bool ok = false;
        std::string warning;
        std::vector<SceneResult> rows; // one per variant
    };
    std::vector<SceneRows> results(scene_dirs.size());

    auto process_scene = [&](std::size_t idx) {
        SceneRows& slot = results[idx];
        const std::string name = scene_dirs[idx].filename().string();
        try {
            const SceneInput scene = load_scene(scene_dirs[idx], options);
            for (const Variant v : variants) {
                const DisparityMap disp =
                    run_variant(v, scene.left, scene.right, options.params);
                const double all = bad_pixel_rate(disp, scene.gt_left, nullptr,
                                                  options.bad_threshold);
                const double noc = bad_pixel_rate(disp, scene.gt_left, &scene.mask,
                                                  options.bad_threshold);
                slot.rows.push_back({name, all, noc});
                if (!options.maps_dir.empty()) {
                    fs::create_directories(options.maps_dir);
                    const int scale = std::max(1, 255 / std::max(1, options.params.disp_range - 1));
                    save_disparity(disp, options.maps_dir / (name + "_" + to_string(v) + ".pgm"),
                                   scale);
                }
            }
            slot.ok = true;
        } catch (const std::exception& err) {
            slot.ok = false;
            slot.warning = "scene " + name + " skipped: " + err.what();
        }
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1 || scene_dirs.size() <= 1) {
        for (std::size_t i = 0; i < scene_dirs.size(); ++i)
            process_scene(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t n = std::min<std::size_t>(threads, scene_dirs.size());
        for (std::size_t t = 0; t < n; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < scene_dirs.size();
                     i = next.fetch_add(1))
                    process_scene(i);
            });
        for (std::thread& t : pool)
            t.join();
    }

    for (const SceneRows& slot : results) {
        if (!slot.ok) {
            if (!slot.warning.empty())
                report.warnings.push_back(slot.warning);
            continue;
        }
        for (std::size_t vi = 0; vi < report.variants.size(); ++vi)
            report.variants[vi].scenes.push_back(slot.rows[vi]);
    }
    for (EvalResult& res : report.variants) {
        double sum_all = 0.0, sum_noc = 0.0;
        for (const SceneResult& row : res.scenes) {
            sum_all += row.all_pct;
            sum_noc += row.noc_pct;
        }
        const double n = res.scenes.empty() ? 1.0 : static_cast<double>(res.scenes.size());
        res.mean_all = sum_all / n;
        res.mean_noc = sum_noc / n;
    }
    return report;
}

std::string report_to_csv(const DatasetReport& report) {
    std::string csv = "variant,scene,all_pct,noc_pct\n";
    for (const EvalResult& res : report.variants) {
        for (const SceneResult& row : res.scenes)
            csv += res.variant + "," + row.scene + "," + format_pct(row.all_pct) + "," +
                   format_pct(row.noc_pct) + "\n";
        csv += res.variant + ",mean," + format_pct(res.mean_all) + "," +
               format_pct(res.mean_noc) + "\n";
    }
    return csv;
}

void write_csv(const DatasetReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write " + path.string());
    out << report_to_csv(report);
}

} // namespace sgm4k
