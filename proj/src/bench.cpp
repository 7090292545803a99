#include "sgm4k/bench.hpp"

namespace sgm4k {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
        throw param_error("mde_per_second: product overflows");
    return a * b;
}

} // namespace

MdeRate mde_per_second(std::uint64_t width, std::uint64_t height, std::uint64_t disp_range,
                       std::uint64_t fps_num, std::uint64_t fps_den) {
    if (width == 0 || height == 0 || disp_range == 0 || fps_num == 0 || fps_den == 0)
        throw param_error("mde_per_second: all factors must be positive");
    MdeRate r;
    r.num = checked_mul(checked_mul(checked_mul(width, height), disp_range), fps_num);
    r.den = checked_mul(1'000'000ull, fps_den);
    const std::uint64_t g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
}

} // namespace sgm4k
