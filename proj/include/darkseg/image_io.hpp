#pragma once

#include <filesystem>

#include "darkseg/raster.hpp"

namespace darkseg {

/// Reads an 8-bit PNG into normalized intensities (value / 255).
/// Palette, 16-bit and alpha variants are normalized on the fly: palettes
/// expand to RGB, 16-bit narrows to 8, alpha is dropped. Gray(+alpha) maps
/// to 1 channel, everything else to 3.
/// Throws DecodeError with the offending path on any failure.
RasterImage read_image(const std::filesystem::path & path);

/// Writes a 1- or 3-channel image as an 8-bit PNG, quantizing with
/// round(v * 255). Filtering is pinned to NONE and compression to level 6 so
/// output bytes do not depend on encoder heuristics.
/// Throws DecodeError when the file cannot be written or the image is invalid.
void write_image(const RasterImage & image, const std::filesystem::path & path);

} // namespace darkseg
