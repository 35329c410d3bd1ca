#pragma once

#include "darkseg/raster.hpp"

namespace darkseg {

/// Binary morphology with a square structuring element of odd side `side`,
/// centered. Dilation treats out-of-bounds as unset; erosion treats
/// out-of-bounds as set (window clipped to the image), so closing neither
/// grows nor eats solid shapes at the border and stays idempotent.
BinaryMask dilate(const BinaryMask & mask, int side);
BinaryMask erode(const BinaryMask & mask, int side);

/// Dilation followed by erosion. Fills gaps up to the element size without
/// growing solid regions; closing(closing(m)) == closing(m).
BinaryMask morph_close(const BinaryMask & mask, int side);

} // namespace darkseg
