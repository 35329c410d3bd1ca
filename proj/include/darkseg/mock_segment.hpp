#pragma once

#include <cstdint>

#include "darkseg/raster.hpp"

namespace darkseg {

/// Deterministic ground-truth perturber standing in for external neural
/// segmenters in fixtures and tests. Per instance, seeded from
/// (seed, image_id, instance index):
///   - dropped with probability epsilon/4,
///   - mask dilated or eroded to a random depth up to round(epsilon * 5)
///     (an erosion that would empty the mask keeps it unchanged),
///   - translated by up to epsilon * 10 px per axis,
///   - score = 1 - epsilon * U(0,1).
/// epsilon = 0 reproduces the input with scores 1; a translation that pushes
/// a mask fully outside the image drops the instance.
InstanceSet mock_segment(const InstanceSet & gt, double epsilon, std::uint64_t seed);

} // namespace darkseg
