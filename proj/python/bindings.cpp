#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sgm4k/bench.hpp"
#include "sgm4k/eval.hpp"

namespace py = pybind11;
using namespace sgm4k;

namespace {

template <typename T>
using c_array = py::array_t<T, py::array::c_style | py::array::forcecast>;

GrayImage to_gray(const c_array<std::uint8_t>& a) {
    if (a.ndim() != 2)
        throw param_error("expected a 2-d uint8 array (height, width)");
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    std::vector<std::uint8_t> data(a.data(), a.data() + a.size());
    return GrayImage(w, h, std::move(data));
}

py::array_t<std::uint8_t> from_gray(const GrayImage& img) {
    py::array_t<std::uint8_t> a({img.height(), img.width()});
    std::copy(img.data().begin(), img.data().end(), a.mutable_data());
    return a;
}

FloatImage to_float_image(const c_array<float>& a) {
    if (a.ndim() != 2)
        throw param_error("expected a 2-d float32 array (height, width)");
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    std::vector<float> data(a.data(), a.data() + a.size());
    return FloatImage(w, h, std::move(data));
}

py::array_t<float> from_float_image(const FloatImage& img) {
    py::array_t<float> a({img.height(), img.width()});
    std::copy(img.data().begin(), img.data().end(), a.mutable_data());
    return a;
}

DisparityMap to_map(const c_array<std::int32_t>& a) {
    if (a.ndim() != 2)
        throw param_error("expected a 2-d int32 array (height, width)");
    DisparityMap map(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    auto r = a.unchecked<2>();
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            map.at(x, y) = r(y, x);
    return map;
}

py::array_t<std::int32_t> from_map(const DisparityMap& map) {
    py::array_t<std::int32_t> a({map.height(), map.width()});
    std::copy(map.data().begin(), map.data().end(), a.mutable_data());
    return a;
}

CensusImage to_census(const c_array<std::uint32_t>& a) {
    if (a.ndim() != 2)
        throw param_error("expected a 2-d uint32 array (height, width)");
    CensusImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    auto r = a.unchecked<2>();
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            img.at(x, y) = r(y, x);
    return img;
}

py::array_t<std::uint32_t> from_census(const CensusImage& img) {
    py::array_t<std::uint32_t> a({img.height(), img.width()});
    std::copy(img.data().begin(), img.data().end(), a.mutable_data());
    return a;
}

CostVolume to_cost_volume(const c_array<std::uint8_t>& a) {
    if (a.ndim() != 3)
        throw param_error("expected a 3-d uint8 array (height, width, disp)");
    CostVolume vol(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)),
                   static_cast<int>(a.shape(2)));
    std::copy(a.data(), a.data() + a.size(), const_cast<std::uint8_t*>(vol.data().data()));
    return vol;
}

py::array_t<std::uint8_t> from_cost_volume(const CostVolume& vol) {
    py::array_t<std::uint8_t> a({vol.height(), vol.width(), vol.disp_range()});
    std::copy(vol.data().begin(), vol.data().end(), a.mutable_data());
    return a;
}

py::array_t<std::int32_t> from_path_volume(const PathCostVolume& vol) {
    py::array_t<std::int32_t> a({vol.height(), vol.width(), vol.disp_range()});
    std::copy(vol.data().begin(), vol.data().end(), a.mutable_data());
    return a;
}

std::vector<std::int32_t> to_lane_vector(const c_array<std::int32_t>& a) {
    if (a.ndim() != 1)
        throw param_error("expected a 1-d int32 array of disparity lanes");
    return std::vector<std::int32_t>(a.data(), a.data() + a.size());
}

py::array_t<std::int32_t> from_lane_vector(const std::vector<std::int32_t>& v) {
    py::array_t<std::int32_t> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

PathDirection direction_from_degrees(int degrees) {
    const auto dir = path_from_degrees(degrees);
    if (!dir)
        throw param_error("direction must be a multiple of 45 in 0..315");
    return *dir;
}

SgmParams build_params(int disp_range, int p1, int p2, int lam,
                       const std::optional<std::vector<int>>& paths, bool median, bool lr_check,
                       int lr_threshold) {
    SgmParams params;
    params.disp_range = disp_range;
    params.p1 = p1;
    params.p2 = p2;
    params.lambda = lam;
    if (paths) {
        params.paths.clear();
        for (const int deg : *paths)
            params.paths.push_back(direction_from_degrees(deg));
    }
    params.post.median = median;
    params.post.lr_check = lr_check;
    params.post.lr_threshold = lr_threshold;
    params.validate();
    return params;
}

py::dict stats_dict(const StreamStats& s) {
    py::dict d;
    d["line_buffer_entries"] = s.line_buffer_entries;
    d["carry_entries"] = s.carry_entries;
    d["scratch_entries"] = s.scratch_entries;
    d["context_row_entries"] = s.context_row_entries;
    d["total_entries"] = s.total();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Semi-global stereo matching with a 4-pixel-per-clock estimated 0-degree path";

    m.attr("INVALID_DISPARITY") = DisparityMap::kInvalid;
    m.attr("CENSUS_BITS") = kCensusBits;
    m.attr("LAMBDA_NO_CORRECTION") = kLambdaNoCorrection;

    py::register_exception<param_error>(m, "ParamError", PyExc_ValueError);
    py::register_exception<io_error>(m, "IoError", PyExc_OSError);
    py::register_exception<format_error>(m, "FormatError", PyExc_ValueError);

    // image I/O
    m.def("load_pgm", [](const std::filesystem::path& p) { return from_gray(load_pgm(p)); },
          py::arg("path"), "Load a binary PGM (P5, or P6 converted to gray) as uint8 (h, w).");
    m.def("save_pgm",
          [](const c_array<std::uint8_t>& img, const std::filesystem::path& p) {
              save_pgm(to_gray(img), p);
          },
          py::arg("image"), py::arg("path"));
    m.def("load_pfm", [](const std::filesystem::path& p) { return from_float_image(load_pfm(p)); },
          py::arg("path"), "Load a single-channel PFM as float32 (h, w), top-down rows.");
    m.def("save_pfm",
          [](const c_array<float>& img, const std::filesystem::path& p) {
              save_pfm(to_float_image(img), p);
          },
          py::arg("image"), py::arg("path"));
    m.def("save_disparity",
          [](const c_array<std::int32_t>& map, const std::filesystem::path& p, int scale) {
              save_disparity(to_map(map), p, scale);
          },
          py::arg("disparity"), py::arg("path"), py::arg("scale"));

    // matching cost
    m.def("census_transform",
          [](const c_array<std::uint8_t>& img) { return from_census(census_transform(to_gray(img))); },
          py::arg("image"), "5x5 census descriptors as uint32 (h, w).");
    m.def("hamming", &hamming, py::arg("a"), py::arg("b"));
    m.def("cost_volume",
          [](const c_array<std::uint32_t>& base, const c_array<std::uint32_t>& ref, int disp_range) {
              return from_cost_volume(cost_volume(to_census(base), to_census(ref), disp_range));
          },
          py::arg("census_base"), py::arg("census_ref"), py::arg("disp_range"),
          "Hamming-distance cost volume as uint8 (h, w, disp).");
    m.def("reference_context_count", &reference_context_count, py::arg("lanes"),
          py::arg("disp_range"));

    // aggregation
    m.def("path_step",
          [](const c_array<std::int32_t>& prev, const c_array<std::int32_t>& cost, int p1, int p2) {
              return from_lane_vector(path_step(to_lane_vector(prev), to_lane_vector(cost), p1, p2));
          },
          py::arg("prev"), py::arg("cost"), py::arg("p1"), py::arg("p2"));
    m.def("aggregate_path",
          [](const c_array<std::uint8_t>& cost, int degrees, int p1, int p2) {
              return from_path_volume(
                  aggregate_path(to_cost_volume(cost), direction_from_degrees(degrees), p1, p2));
          },
          py::arg("cost"), py::arg("degrees"), py::arg("p1"), py::arg("p2"));
    m.def("estimate_prev",
          [](const c_array<std::int32_t>& last, const c_array<std::int32_t>& c1,
             const c_array<std::int32_t>& c2, const c_array<std::int32_t>& c3, int lam) {
              const EstimatedPredecessors est =
                  estimate_prev(to_lane_vector(last), to_lane_vector(c1), to_lane_vector(c2),
                                to_lane_vector(c3), lam);
              return py::make_tuple(from_lane_vector(est.lane2), from_lane_vector(est.lane3),
                                    from_lane_vector(est.lane4));
          },
          py::arg("last"), py::arg("c1"), py::arg("c2"), py::arg("c3"), py::arg("lam"));
    m.def("aggregate_0deg_4ppc",
          [](const c_array<std::uint8_t>& cost, int p1, int p2, int lam) {
              return from_path_volume(aggregate_0deg_4ppc(to_cost_volume(cost), p1, p2, lam));
          },
          py::arg("cost"), py::arg("p1"), py::arg("p2"), py::arg("lam"));
    m.def("select_disparity",
          [](const c_array<std::int32_t>& summed) {
              if (summed.ndim() != 3)
                  throw param_error("expected a 3-d int32 array (height, width, disp)");
              AggregatedVolume vol(static_cast<int>(summed.shape(1)),
                                   static_cast<int>(summed.shape(0)),
                                   static_cast<int>(summed.shape(2)));
              auto r = summed.unchecked<3>();
              for (int y = 0; y < vol.height(); ++y)
                  for (int x = 0; x < vol.width(); ++x)
                      for (int d = 0; d < vol.disp_range(); ++d)
                          vol.at(x, y, d) = r(y, x, d);
              return from_map(select_disparity(vol));
          },
          py::arg("summed"));
    m.def("median3x3",
          [](const c_array<std::int32_t>& map) { return from_map(median3x3(to_map(map))); },
          py::arg("disparity"));
    m.def("lr_check",
          [](const c_array<std::int32_t>& left, const c_array<std::int32_t>& right, int threshold) {
              return from_map(lr_check(to_map(left), to_map(right), threshold));
          },
          py::arg("disp_left"), py::arg("disp_right"), py::arg("threshold"));

    // full pipelines
    m.def("run_sgm",
          [](const c_array<std::uint8_t>& left, const c_array<std::uint8_t>& right,
                         int disp_range, int p1, int p2, int lam,
                         const std::optional<std::vector<int>>& paths, bool median, bool lr_check,
                         int lr_threshold) {
              return from_map(run_sgm(to_gray(left), to_gray(right),
                                      build_params(disp_range, p1, p2, lam, paths, median,
                                                   lr_check, lr_threshold)));
          },
          py::arg("left"), py::arg("right"), py::arg("disp_range") = 64, py::arg("p1") = 7,
          py::arg("p2") = 86, py::arg("lam") = 2, py::arg("paths") = std::nullopt,
          py::arg("median") = false, py::arg("lr_check") = false, py::arg("lr_threshold") = 1,
          "Disparity map as int32 (h, w); INVALID_DISPARITY marks rejected pixels.");
    m.def("run_4ppc",
          [](const c_array<std::uint8_t>& left, const c_array<std::uint8_t>& right,
                         int disp_range, int p1, int p2, int lam,
                         const std::optional<std::vector<int>>& paths, bool median, bool lr_check,
                         int lr_threshold) {
              return from_map(run_4ppc(to_gray(left), to_gray(right),
                                       build_params(disp_range, p1, p2, lam, paths, median,
                                                    lr_check, lr_threshold)));
          },
          py::arg("left"), py::arg("right"), py::arg("disp_range") = 64, py::arg("p1") = 7,
          py::arg("p2") = 86, py::arg("lam") = 2, py::arg("paths") = std::nullopt,
          py::arg("median") = false, py::arg("lr_check") = false, py::arg("lr_threshold") = 1);
    m.def("run_streaming",
          [](const c_array<std::uint8_t>& left, const c_array<std::uint8_t>& right,
                         int disp_range, int p1, int p2, int lam,
                         const std::optional<std::vector<int>>& paths, bool median, bool lr_check,
                         int lr_threshold) {
              const StreamingResult res =
                  run_streaming(to_gray(left), to_gray(right),
                                build_params(disp_range, p1, p2, lam, paths, median, lr_check,
                                             lr_threshold));
              return py::make_tuple(from_map(res.map), stats_dict(res.stats));
          },
          py::arg("left"), py::arg("right"), py::arg("disp_range") = 64, py::arg("p1") = 7,
          py::arg("p2") = 86, py::arg("lam") = 2, py::arg("paths") = std::nullopt,
          py::arg("median") = false, py::arg("lr_check") = false, py::arg("lr_threshold") = 1,
          "Returns (disparity, stats) where stats reports peak retained entries.");

    // evaluation
    m.def("bad_pixel_rate",
          [](const c_array<std::int32_t>& disp, const c_array<float>& gt,
             const std::optional<c_array<bool>>& mask, double threshold) {
              const DisparityMap map = to_map(disp);
              const FloatImage truth = to_float_image(gt);
              if (!mask)
                  return bad_pixel_rate(map, truth, nullptr, threshold);
              if (mask->ndim() != 2)
                  throw param_error("expected a 2-d bool mask");
              OcclusionMask occ(static_cast<int>(mask->shape(1)),
                                static_cast<int>(mask->shape(0)));
              auto r = mask->unchecked<2>();
              for (int y = 0; y < occ.height(); ++y)
                  for (int x = 0; x < occ.width(); ++x)
                      occ.set(x, y, r(y, x));
              return bad_pixel_rate(map, truth, &occ, threshold);
          },
          py::arg("disparity"), py::arg("ground_truth"), py::arg("mask") = std::nullopt,
          py::arg("threshold") = 1.0);
    m.def("noc_mask",
          [](const c_array<float>& gt_left, const c_array<float>& gt_right, double threshold) {
              const OcclusionMask mask =
                  noc_mask(to_float_image(gt_left), to_float_image(gt_right), threshold);
              py::array_t<bool> a({mask.height(), mask.width()});
              auto w = a.mutable_unchecked<2>();
              for (int y = 0; y < mask.height(); ++y)
                  for (int x = 0; x < mask.width(); ++x)
                      w(y, x) = mask.at(x, y);
              return a;
          },
          py::arg("gt_left"), py::arg("gt_right"), py::arg("threshold") = 1.0);
    m.def("scale_ground_truth",
          [](const c_array<float>& gt, int width, int height) {
              return from_float_image(scale_ground_truth(to_float_image(gt), width, height));
          },
          py::arg("ground_truth"), py::arg("width"), py::arg("height"));

    // throughput
    m.def("mde_per_second",
          [](std::uint64_t w, std::uint64_t h, std::uint64_t d, std::uint64_t fps_num,
             std::uint64_t fps_den) { return mde_per_second(w, h, d, fps_num, fps_den).value(); },
          py::arg("width"), py::arg("height"), py::arg("disp_range"), py::arg("fps_num"),
          py::arg("fps_den") = 1);
    m.def("mde_rounded",
          [](std::uint64_t w, std::uint64_t h, std::uint64_t d, std::uint64_t fps_num,
             std::uint64_t fps_den) { return mde_per_second(w, h, d, fps_num, fps_den).rounded(); },
          py::arg("width"), py::arg("height"), py::arg("disp_range"), py::arg("fps_num"),
          py::arg("fps_den") = 1);
}
