#include "darkseg/rle.hpp"

#include <charconv>

namespace darkseg {

std::string encode_rle(const BinaryMask & mask) {
    std::string out;
    const std::size_t total = mask.bits.size();
    std::size_t i = 0;
    while (i < total) {
        const std::uint8_t value = mask.bits[i] ? 1 : 0;
        std::size_t run = 1;
        while (i + run < total && (mask.bits[i + run] ? 1 : 0) == value) {
            ++run;
        }
        if (!out.empty()) {
            out.push_back(',');
        }
        out.push_back(value ? '1' : '0');
        out.push_back(':');
        out += std::to_string(run);
        i += run;
    }
    return out;
}

BinaryMask decode_rle(const std::string & rle, int width, int height) {
    if (width <= 0 || height <= 0) {
        throw DecodeError("decode_rle: non-positive dimensions");
    }
    BinaryMask mask(width, height);
    const std::size_t total = mask.bits.size();
    std::size_t pos = 0;

    const char * p = rle.data();
    const char * end = p + rle.size();
    while (p < end) {
        if (*p != '0' && *p != '1') {
            throw DecodeError("decode_rle: run value must be 0 or 1");
        }
        const std::uint8_t value = static_cast<std::uint8_t>(*p - '0');
        ++p;
        if (p >= end || *p != ':') {
            throw DecodeError("decode_rle: expected ':' after run value");
        }
        ++p;
        std::uint64_t count = 0;
        auto [next, ec] = std::from_chars(p, end, count);
        if (ec != std::errc{} || next == p || count == 0) {
            throw DecodeError("decode_rle: malformed run count");
        }
        p = next;
        if (pos + count > total) {
            throw DecodeError("decode_rle: runs exceed width*height");
        }
        if (value) {
            std::fill(mask.bits.begin() + pos, mask.bits.begin() + pos + count, 1);
        }
        pos += count;
        if (p < end) {
            if (*p != ',') {
                throw DecodeError("decode_rle: expected ',' between runs");
            }
            ++p;
            if (p == end) {
                throw DecodeError("decode_rle: trailing comma");
            }
        }
    }
    if (pos != total) {
        throw DecodeError("decode_rle: runs sum to " + std::to_string(pos) +
                          ", expected " + std::to_string(total));
    }
    return mask;
}

} // namespace darkseg
