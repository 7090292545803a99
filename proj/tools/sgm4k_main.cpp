// sgm4k: stereo disparity from rectified pairs, dataset evaluation,
// throughput benchmarking, and parameter sweeps.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "sgm4k/bench.hpp"
#include "sgm4k/config.hpp"
#include "sgm4k/eval.hpp"

namespace {

using namespace sgm4k;

// Optional flag values; anything unset falls back to the config file and then
// to the built-in defaults.
struct FlagSet {
    std::optional<std::string> left, right, out, raw, variant, variants, paths, dataset, maps_dir,
        size;
    std::optional<int> disp_range, p1, p2, lambda, threads, reps;
    std::optional<int> lr_threshold;      // depth: --threshold
    std::optional<double> bad_threshold;  // eval/sweep: --threshold
    std::optional<bool> median, lr_check;
    std::optional<std::string> p1_list, p2_list, lambda_list;
    std::string config_path; // resolved by CLI11 (flag or SGM4K_CONFIG)
};

void add_param_flags(CLI::App* cmd, FlagSet& flags) {
    cmd->add_option("--disp-range", flags.disp_range, "Disparity range D (default 64)");
    cmd->add_option("--p1", flags.p1, "Small-change penalty (default 7)");
    cmd->add_option("--p2", flags.p2, "Large-change penalty (default 86)");
    cmd->add_option("--lambda", flags.lambda,
                    "Estimation weight, power of two; 0 disables the correction (default 2)");
    cmd->add_option("--paths", flags.paths,
                    "Comma list of path directions in degrees, e.g. 0,45,90,135");
    cmd->add_flag("--median", [&flags](std::int64_t) { flags.median = true; },
                  "Apply a 3x3 median filter");
    cmd->add_flag("--lr-check", [&flags](std::int64_t) { flags.lr_check = true; },
                  "Apply the left-right consistency check");
    cmd->add_option("--config", flags.config_path, "key=value config file")
        ->envname("SGM4K_CONFIG");
}

ConfigMap load_config(const FlagSet& flags) {
    if (flags.config_path.empty())
        return {};
    return load_config_file(flags.config_path);
}

std::vector<PathDirection> parse_paths(const std::string& text) {
    std::vector<PathDirection> out;
    for (const int deg : cfg::to_int_list(text, "paths")) {
        const auto dir = path_from_degrees(deg);
        if (!dir)
            throw param_error("paths: " + std::to_string(deg) + " is not a multiple of 45 in 0..315");
        out.push_back(*dir);
    }
    return out;
}

// The "threshold" config key is per-command (LR-check distance for depth,
// bad-pixel distance for eval/sweep), mirroring the flag semantics.
SgmParams resolve_params(const FlagSet& flags, const ConfigMap& config,
                         bool threshold_is_lr = false) {
    SgmParams params;
    params.disp_range = cfg::resolve_int(flags.disp_range, config, "disp-range", params.disp_range);
    params.p1 = cfg::resolve_int(flags.p1, config, "p1", params.p1);
    params.p2 = cfg::resolve_int(flags.p2, config, "p2", params.p2);
    params.lambda = cfg::resolve_int(flags.lambda, config, "lambda", params.lambda);
    const std::string paths = cfg::resolve_string(flags.paths, config, "paths", "");
    if (!paths.empty())
        params.paths = parse_paths(paths);
    params.post.median = cfg::resolve_bool(flags.median, config, "median", false);
    params.post.lr_check = cfg::resolve_bool(flags.lr_check, config, "lr-check", false);
    if (threshold_is_lr)
        params.post.lr_threshold = cfg::resolve_int(flags.lr_threshold, config, "threshold", 1);
    params.validate();
    return params;
}

std::vector<Variant> resolve_variants(const FlagSet& flags, const ConfigMap& config,
                                      const std::string& fallback) {
    const std::string text = cfg::resolve_string(flags.variants, config, "variants", fallback);
    std::vector<Variant> out;
    for (const std::string& name : cfg::split_list(text)) {
        const auto v = variant_from_string(name);
        if (!v)
            throw param_error("unknown variant '" + name + "'");
        out.push_back(*v);
    }
    return out;
}

void write_raw16(const DisparityMap& map, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write " + path.string());
    for (const std::int32_t d : map.data()) {
        const std::uint16_t v =
            d == DisparityMap::kInvalid ? 0xffff : static_cast<std::uint16_t>(d);
        const char bytes[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
        out.write(bytes, 2);
    }
}

int cmd_depth(const FlagSet& flags) {
    const ConfigMap config = load_config(flags);
    const SgmParams params = resolve_params(flags, config, /*threshold_is_lr=*/true);
    const std::string left_path = cfg::resolve_string(flags.left, config, "left", "");
    const std::string right_path = cfg::resolve_string(flags.right, config, "right", "");
    const std::string out_path = cfg::resolve_string(flags.out, config, "out", "");
    const std::string variant = cfg::resolve_string(flags.variant, config, "variant", "sgm4");
    if (left_path.empty() || right_path.empty() || out_path.empty())
        throw param_error("depth requires --left, --right and --out");

    const GrayImage left = load_pgm(left_path);
    const GrayImage right = load_pgm(right_path);

    const auto start = std::chrono::steady_clock::now();
    DisparityMap map(left.width(), left.height());
    if (variant == "streaming") {
        const StreamingResult res = run_streaming(left, right, params);
        map = res.map;
        std::printf("streaming peak state: %zu entries (%zu line-buffer)\n", res.stats.total(),
                    res.stats.line_buffer_entries);
    } else {
        const auto v = variant_from_string(variant);
        if (!v)
            throw param_error("unknown variant '" + variant + "'");
        SgmParams run = params;
        if (!flags.paths && config.find("paths") == config.end())
            run.paths = variant_paths(*v); // explicit --paths overrides the preset
        map = *v == Variant::sgm_4ppc ? run_4ppc(left, right, run) : run_sgm(left, right, run);
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const int scale = std::max(1, 255 / std::max(1, params.disp_range - 1));
    save_disparity(map, out_path, scale);
    if (flags.raw)
        write_raw16(map, *flags.raw);

    std::printf("depth: %dx%d, D=%d, variant %s: %.1f ms (disparity scale %d -> %s)\n",
                left.width(), left.height(), params.disp_range, variant.c_str(), ms, scale,
                out_path.c_str());
    return 0;
}

int cmd_eval(const FlagSet& flags) {
    const ConfigMap config = load_config(flags);
    DatasetOptions options;
    options.params = resolve_params(flags, config);
    // For evaluation, --threshold is the bad-pixel threshold in disparities.
    options.bad_threshold = cfg::resolve_double(flags.bad_threshold, config, "threshold", 1.0);
    options.threads = cfg::resolve_int(flags.threads, config, "threads", 1);
    const std::string dataset = cfg::resolve_string(flags.dataset, config, "dataset", "");
    const std::string out = cfg::resolve_string(flags.out, config, "out", "eval.csv");
    if (dataset.empty())
        throw param_error("eval requires --dataset");
    if (flags.maps_dir)
        options.maps_dir = *flags.maps_dir;

    const std::vector<Variant> variants =
        resolve_variants(flags, config, "local-ct,sgm3,sgm4,sgm8,sgm-4ppc");
    const DatasetReport report = run_dataset(dataset, variants, options);

    for (const std::string& warning : report.warnings)
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    std::printf("%-10s %8s %8s   (bad-pixel threshold %.2f, %zu scenes)\n", "variant", "all%",
                "noc%", options.bad_threshold,
                report.variants.empty() ? 0 : report.variants.front().scenes.size());
    for (const EvalResult& res : report.variants)
        std::printf("%-10s %8.2f %8.2f\n", res.variant.c_str(), res.mean_all, res.mean_noc);
    write_csv(report, out);
    std::printf("report written to %s\n", out.c_str());
    return 0;
}

int cmd_bench(const FlagSet& flags) {
    const ConfigMap config = load_config(flags);
    const SgmParams params = resolve_params(flags, config);
    const int reps = cfg::resolve_int(flags.reps, config, "reps", 5);
    if (reps < 1)
        throw param_error("bench: repetitions must be >= 1");

    GrayImage left(8, 8), right(8, 8);
    std::string source;
    const std::string left_path = cfg::resolve_string(flags.left, config, "left", "");
    const std::string right_path = cfg::resolve_string(flags.right, config, "right", "");
    if (!left_path.empty() && !right_path.empty()) {
        left = load_pgm(left_path);
        right = load_pgm(right_path);
        source = left_path;
    } else {
        const std::string size = cfg::resolve_string(flags.size, config, "size", "640x480");
        int w = 0, h = 0;
        if (std::sscanf(size.c_str(), "%dx%d", &w, &h) != 2 || w < 5 || h < 5)
            throw param_error("bench: --size must look like 640x480");
        left = GrayImage(w, h);
        right = GrayImage(w, h);
        std::mt19937 rng(12345);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                left.at(x, y) = static_cast<std::uint8_t>(rng() % 256);
                right.at(x, y) = static_cast<std::uint8_t>(rng() % 256);
            }
        source = "synthetic " + size;
    }

    const auto w = static_cast<std::uint64_t>(left.width());
    const auto h = static_cast<std::uint64_t>(left.height());
    const auto d = static_cast<std::uint64_t>(params.disp_range);
    std::printf("bench input: %s, D=%llu, %d repetitions\n", source.c_str(),
                static_cast<unsigned long long>(d), reps);
    std::printf("%-12s %12s %12s %10s %12s\n", "variant", "median [s]", "min [s]", "fps", "MDE/s");

    const auto report = [&](const char* name, const BenchTiming& t) {
        std::printf("%-12s %12.4f %12.4f %10.2f %12.2f\n", name, t.median_seconds, t.min_seconds,
                    t.fps, t.mde_per_s);
    };
    report("sgm", time_runs(reps, w, h, d, [&] { run_sgm(left, right, params); }));
    report("sgm-4ppc", time_runs(reps, w, h, d, [&] { run_4ppc(left, right, params); }));
    return 0;
}

int cmd_sweep(const FlagSet& flags) {
    const ConfigMap config = load_config(flags);
    // p1/p2/lambda are grid lists here; only the disparity range resolves as
    // a scalar. Each combination is validated by the dataset runner.
    SgmParams base;
    base.disp_range = cfg::resolve_int(flags.disp_range, config, "disp-range", base.disp_range);
    const std::string dataset = cfg::resolve_string(flags.dataset, config, "dataset", "");
    const std::string out = cfg::resolve_string(flags.out, config, "out", "sweep.csv");
    if (dataset.empty())
        throw param_error("sweep requires --dataset");

    auto list = [&](const std::optional<std::string>& flag, const char* key,
                    std::vector<int> fallback) {
        const std::string text = cfg::resolve_string(flag, config, key, "");
        return text.empty() ? fallback : cfg::to_int_list(text, key);
    };
    const std::vector<int> p1s = list(flags.p1_list, "p1", {base.p1});
    const std::vector<int> p2s = list(flags.p2_list, "p2", {base.p2});
    const std::vector<int> lambdas = list(flags.lambda_list, "lambda", {1, 2, 4});
    if (p1s.empty() || p2s.empty() || lambdas.empty())
        throw param_error("sweep: grid lists must be nonempty");

    DatasetOptions options;
    options.bad_threshold = cfg::resolve_double(flags.bad_threshold, config, "threshold", 1.0);
    options.threads = cfg::resolve_int(flags.threads, config, "threads", 1);
    const std::vector<Variant> variants = resolve_variants(flags, config, "sgm4,sgm-4ppc");

    std::string csv = "p1,p2,lambda,variant,mean_all,mean_noc\n";
    for (const int p1 : p1s)
        for (const int p2 : p2s)
            for (const int lambda : lambdas) {
                if (p1 >= p2) {
                    std::fprintf(stderr, "sweep: skipped p1=%d p2=%d (requires P1 < P2)\n", p1, p2);
                    continue;
                }
                options.params = base;
                options.params.p1 = p1;
                options.params.p2 = p2;
                options.params.lambda = lambda;
                const DatasetReport report = run_dataset(dataset, variants, options);
                for (const std::string& warning : report.warnings)
                    std::fprintf(stderr, "warning: %s\n", warning.c_str());
                for (const EvalResult& res : report.variants) {
                    char row[160];
                    std::snprintf(row, sizeof(row), "%d,%d,%d,%s,%.4f,%.4f\n", p1, p2, lambda,
                                  res.variant.c_str(), res.mean_all, res.mean_noc);
                    csv += row;
                    std::printf("p1=%d p2=%d lambda=%d %-10s all=%.2f noc=%.2f\n", p1, p2, lambda,
                                res.variant.c_str(), res.mean_all, res.mean_noc);
                }
            }

    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file)
        throw io_error("cannot write " + out);
    file << csv;
    std::printf("sweep written to %s\n", out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app("semi-global stereo matching with a 4-pixel-per-clock estimated path");
    app.require_subcommand(1);

    FlagSet flags;

    CLI::App* depth = app.add_subcommand("depth", "Compute a disparity map for one pair");
    depth->add_option("--left", flags.left, "Left (base) image, PGM P5/P6");
    depth->add_option("--right", flags.right, "Right (reference) image");
    depth->add_option("--out", flags.out, "Output disparity PGM");
    depth->add_option("--raw", flags.raw, "Optional 16-bit little-endian raw disparity output");
    depth->add_option("--variant", flags.variant,
                      "local-ct | sgm3 | sgm4 | sgm8 | sgm-4ppc | streaming (default sgm4)");
    depth->add_option("--threshold", flags.lr_threshold, "LR-check threshold in disparities");
    add_param_flags(depth, flags);

    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate variants over a dataset");
    eval_cmd->add_option("--dataset", flags.dataset, "Dataset root (scene subdirectories)");
    eval_cmd->add_option("--out", flags.out, "Output CSV (default eval.csv)");
    eval_cmd->add_option("--maps-dir", flags.maps_dir, "Directory for per-scene disparity PGMs");
    eval_cmd->add_option("--variants,--variant", flags.variants, "Comma list of variants");
    eval_cmd->add_option("--threshold", flags.bad_threshold, "Bad-pixel threshold in disparities");
    eval_cmd->add_option("--threads", flags.threads, "Worker threads over scenes (default 1)");
    add_param_flags(eval_cmd, flags);

    CLI::App* bench = app.add_subcommand("bench", "Time the matchers and report MDE/s");
    bench->add_option("--left", flags.left, "Left image (optional)");
    bench->add_option("--right", flags.right, "Right image (optional)");
    bench->add_option("--size", flags.size, "Synthetic input size WxH (default 640x480)");
    bench->add_option("--reps", flags.reps, "Timed repetitions (default 5)");
    add_param_flags(bench, flags);

    CLI::App* sweep = app.add_subcommand("sweep", "Grid-sweep P1/P2/lambda over a dataset");
    sweep->add_option("--dataset", flags.dataset, "Dataset root");
    sweep->add_option("--out", flags.out, "Output CSV (default sweep.csv)");
    sweep->add_option("--p1", flags.p1_list, "Comma list of P1 values");
    sweep->add_option("--p2", flags.p2_list, "Comma list of P2 values");
    sweep->add_option("--lambda", flags.lambda_list, "Comma list of lambda values");
    sweep->add_option("--variants,--variant", flags.variants, "Comma list of variants");
    sweep->add_option("--threshold", flags.bad_threshold, "Bad-pixel threshold in disparities");
    sweep->add_option("--threads", flags.threads, "Worker threads over scenes (default 1)");
    sweep->add_option("--disp-range", flags.disp_range, "Disparity range D (default 64)");
    sweep->add_option("--config", flags.config_path, "key=value config file")
        ->envname("SGM4K_CONFIG");

    try {
        app.parse(argc, argv);
        if (depth->parsed())
            return cmd_depth(flags);
        if (eval_cmd->parsed())
            return cmd_eval(flags);
        if (bench->parsed())
            return cmd_bench(flags);
        if (sweep->parsed())
            return cmd_sweep(flags);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors exit 1; --help exits 0
    } catch (const param_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const format_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
