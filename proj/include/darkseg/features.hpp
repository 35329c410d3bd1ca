#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "darkseg/fusion_config.hpp"
#include "darkseg/raster.hpp"

namespace darkseg {

/// One oriented corner with its 256-bit binary descriptor.
struct OrbFeature {
    float x = 0.0f;
    float y = 0.0f;
    /// Orientation from the intensity centroid of the surrounding patch,
    /// radians in (-pi, pi].
    float angle = 0.0f;
    /// Corner strength (Harris response) used for ranking.
    float response = 0.0f;
    /// 256 bits, packed little-endian within each byte.
    std::array<std::uint8_t, 32> descriptor{};
};

/// Hamming distance between two descriptors.
int descriptor_distance(const OrbFeature & a, const OrbFeature & b);

/// Detects up to cfg.max_features oriented corners:
///   - segment-test corners (16-pixel circle, 9 contiguous) at
///     cfg.fast_threshold contrast, with 3x3 non-max suppression,
///   - ranked by Harris response over a 7x7 gradient window,
///   - oriented by the intensity centroid over a radius-15 disc,
///   - described by 256 rotation-steered binary intensity comparisons on the
///     box-smoothed image.
/// The comparison pattern is a fixed table generated once from a seeded
/// Gaussian spread over a radius-13 disc (see kPatternSeed in features.cpp);
/// it is part of the descriptor contract and never changes at runtime.
/// Multi-channel input collapses through max_channel. A textureless image
/// yields an empty list.
std::vector<OrbFeature> detect_orb(const RasterImage & image, const FusionConfig & cfg);

/// Brute-force Hamming matching with the Lowe ratio test and mutual-best
/// filtering; returns (index in a, index in b) pairs.
/// Throws InsufficientMatchesError when fewer than 4 matches survive.
std::vector<std::pair<int, int>> match_features(const std::vector<OrbFeature> & a,
                                                const std::vector<OrbFeature> & b,
                                                const FusionConfig & cfg);

} // namespace darkseg
