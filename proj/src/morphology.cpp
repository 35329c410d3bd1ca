#include "darkseg/morphology.hpp"

#include <algorithm>

namespace darkseg {

namespace {

int radius_of(int side) {
    if (side < 1 || side % 2 == 0) {
        throw Error("morphology: structuring element side must be odd and >= 1");
    }
    return side / 2;
}

/// Separable running window: out(x) = op over [x-r, x+r] clipped to bounds.
void line_window(const std::uint8_t * src, std::uint8_t * dst, int n, std::ptrdiff_t stride,
                 int r, bool take_max) {
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - r);
        const int hi = std::min(n - 1, i + r);
        std::uint8_t acc = take_max ? 0 : 1;
        for (int j = lo; j <= hi; ++j) {
            const std::uint8_t v = src[j * stride];
            acc = take_max ? std::max(acc, v) : std::min(acc, v);
        }
        dst[i * stride] = acc;
    }
}

BinaryMask separable_morph(const BinaryMask & mask, int side, bool take_max) {
    const int r = radius_of(side);
    BinaryMask tmp(mask.width, mask.height);
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        line_window(mask.bits.data() + static_cast<std::size_t>(y) * mask.width,
                    tmp.bits.data() + static_cast<std::size_t>(y) * mask.width, mask.width, 1,
                    r, take_max);
    }
    for (int x = 0; x < mask.width; ++x) {
        line_window(tmp.bits.data() + x, out.bits.data() + x, mask.height, mask.width, r,
                    take_max);
    }
    return out;
}

} // namespace

BinaryMask dilate(const BinaryMask & mask, int side) {
    return separable_morph(mask, side, true);
}

BinaryMask erode(const BinaryMask & mask, int side) {
    return separable_morph(mask, side, false);
}

BinaryMask morph_close(const BinaryMask & mask, int side) {
    return erode(dilate(mask, side), side);
}

} // namespace darkseg
