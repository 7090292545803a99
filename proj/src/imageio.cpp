#include "sgm4k/imageio.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sgm4k {

namespace {

// Reads one whitespace-separated header token, skipping '#' comment lines.
std::string next_token(std::istream& in, const char* field) {
    int c = in.peek();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            in.get();
        }
        c = in.peek();
    }
    std::string tok;
    in >> tok;
    if (tok.empty())
        throw format_error(std::string("PNM header: missing field '") + field + "'");
    return tok;
}

int parse_int_field(std::istream& in, const char* field) {
    const std::string tok = next_token(in, field);
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size())
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw format_error(std::string("PNM header: field '") + field + "' is not an integer: " + tok);
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write " + path.string());
    return out;
}

} // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);

    const std::string magic = next_token(in, "magic");
    if (magic != "P5" && magic != "P6")
        throw format_error("PGM: unsupported magic '" + magic + "' (field: magic)");

    const int width = parse_int_field(in, "width");
    const int height = parse_int_field(in, "height");
    const int maxval = parse_int_field(in, "maxval");
    if (width <= 0 || height <= 0)
        throw format_error("PGM: non-positive dimensions (field: width/height)");
    if (maxval <= 0 || maxval > 255)
        throw format_error("PGM: maxval " + std::to_string(maxval) + " out of range 1..255 (field: maxval)");
    in.get(); // single whitespace after maxval

    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    if (magic == "P5") {
        std::vector<std::uint8_t> data(pixels);
        in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(pixels));
        if (static_cast<std::size_t>(in.gcount()) != pixels)
            throw format_error("PGM: truncated payload (field: raster)");
        return GrayImage(width, height, std::move(data));
    }

    std::vector<std::uint8_t> rgb(pixels * 3);
    in.read(reinterpret_cast<char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
    if (static_cast<std::size_t>(in.gcount()) != rgb.size())
        throw format_error("PPM: truncated payload (field: raster)");
    std::vector<std::uint8_t> gray(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
        const unsigned r = rgb[3 * i], g = rgb[3 * i + 1], b = rgb[3 * i + 2];
        gray[i] = static_cast<std::uint8_t>((77u * r + 150u * g + 29u * b) >> 8);
    }
    return GrayImage(width, height, std::move(gray));
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.data().size()));
    if (!out)
        throw io_error("write failed: " + path.string());
}

FloatImage load_pfm(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);

    const std::string magic = next_token(in, "magic");
    if (magic == "PF")
        throw format_error("PFM: color 'PF' not supported, single channel 'Pf' required (field: magic)");
    if (magic != "Pf")
        throw format_error("PFM: bad magic '" + magic + "' (field: magic)");

    const int width = parse_int_field(in, "width");
    const int height = parse_int_field(in, "height");
    if (width <= 0 || height <= 0)
        throw format_error("PFM: non-positive dimensions (field: width/height)");

    const std::string scale_tok = next_token(in, "scale");
    double scale = 0.0;
    try {
        scale = std::stod(scale_tok);
    } catch (const std::exception&) {
        throw format_error("PFM: scale is not a number: " + scale_tok + " (field: scale)");
    }
    if (scale == 0.0)
        throw format_error("PFM: scale must be nonzero (field: scale)");
    const bool little_endian = scale < 0.0;
    in.get(); // single whitespace after scale

    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    std::vector<std::uint8_t> raw(pixels * 4);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw format_error("PFM: truncated payload (field: raster)");

    FloatImage img(width, height);
    for (int file_row = 0; file_row < height; ++file_row) {
        const int y = height - 1 - file_row; // file rows are bottom-to-top
        const std::uint8_t* src = raw.data() + static_cast<std::size_t>(file_row) * width * 4;
        for (int x = 0; x < width; ++x) {
            std::uint32_t bits;
            if (little_endian)
                bits = std::uint32_t(src[4 * x]) | std::uint32_t(src[4 * x + 1]) << 8 |
                       std::uint32_t(src[4 * x + 2]) << 16 | std::uint32_t(src[4 * x + 3]) << 24;
            else
                bits = std::uint32_t(src[4 * x + 3]) | std::uint32_t(src[4 * x + 2]) << 8 |
                       std::uint32_t(src[4 * x + 1]) << 16 | std::uint32_t(src[4 * x]) << 24;
            img.at(x, y) = std::bit_cast<float>(bits);
        }
    }
    return img;
}

void save_pfm(const FloatImage& img, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "Pf\n" << img.width() << " " << img.height() << "\n-1.0\n";
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(img.width()) * 4);
    for (int file_row = 0; file_row < img.height(); ++file_row) {
        const int y = img.height() - 1 - file_row;
        for (int x = 0; x < img.width(); ++x) {
            const auto bits = std::bit_cast<std::uint32_t>(img.at(x, y));
            raw[4 * x] = static_cast<std::uint8_t>(bits);
            raw[4 * x + 1] = static_cast<std::uint8_t>(bits >> 8);
            raw[4 * x + 2] = static_cast<std::uint8_t>(bits >> 16);
            raw[4 * x + 3] = static_cast<std::uint8_t>(bits >> 24);
        }
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    }
    if (!out)
        throw io_error("write failed: " + path.string());
}

void save_disparity(const DisparityMap& map, const std::filesystem::path& path, int scale) {
    if (scale < 1)
        throw param_error("save_disparity: scale must be >= 1");
    std::int32_t max_disp = 0;
    for (const std::int32_t d : map.data())
        if (d != DisparityMap::kInvalid)
            max_disp = std::max(max_disp, d);
    if (static_cast<std::int64_t>(max_disp) * scale > 255)
        throw param_error("save_disparity: scaled disparity " + std::to_string(max_disp) + "*" +
                          std::to_string(scale) + " exceeds 255");

    GrayImage out(map.width(), map.height());
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x) {
            const std::int32_t d = map.at(x, y);
            out.at(x, y) = d == DisparityMap::kInvalid ? 0 : static_cast<std::uint8_t>(d * scale);
        }
    save_pgm(out, path);
}

GrayImage flip_horizontal(const GrayImage& img) {
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = img.at(img.width() - 1 - x, y);
    return out;
}

DisparityMap flip_horizontal(const DisparityMap& map) {
    DisparityMap out(map.width(), map.height());
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            out.at(x, y) = map.at(map.width() - 1 - x, y);
    return out;
}

} // namespace sgm4k
