#pragma once

#include <string>

#include "darkseg/raster.hpp"

namespace darkseg {

/// Run-length encodes a mask as comma-separated `value:count` runs in
/// row-major order, value in {0,1}. Counts always sum to width*height, so
/// decode(encode(m)) == m exactly. Example: a 2x2 mask [1,1,0,0] encodes
/// as "1:2,0:2"; an all-zero 3x3 mask encodes as "0:9".
std::string encode_rle(const BinaryMask & mask);

/// Inverse of encode_rle. Accepts any well-formed run list whose counts sum
/// to width*height; the encoder itself always emits maximal alternating runs.
/// Throws DecodeError on malformed input or count mismatch.
BinaryMask decode_rle(const std::string & rle, int width, int height);

} // namespace darkseg
