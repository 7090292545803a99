#pragma once

#include <filesystem>

#include "sgm4k/image.hpp"

namespace sgm4k {

// Binary PGM loader. Accepts P5 (grayscale, maxval <= 255) and P6 (color,
// converted to gray with integer luma (77*R + 150*G + 29*B) >> 8).
GrayImage load_pgm(const std::filesystem::path& path);

// Writes binary P5 with maxval 255. load_pgm(save_pgm(x)) == x.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

// Single-channel PFM ("Pf"). Negative scale means little-endian payload,
// positive big-endian; the magnitude is ignored. File rows are stored
// bottom-to-top and come out top-down here. "PF" (color) is rejected.
FloatImage load_pfm(const std::filesystem::path& path);

// Writes "Pf" with scale -1.0 (little-endian), rows bottom-to-top.
void save_pfm(const FloatImage& img, const std::filesystem::path& path);

// 8-bit visualization: pixel value = disparity * scale, invalid pixels 0.
// Throws param_error if any scaled value would exceed 255.
void save_disparity(const DisparityMap& map, const std::filesystem::path& path, int scale);

} // namespace sgm4k
