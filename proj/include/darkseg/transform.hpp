#pragma once

#include <utility>
#include <vector>

#include "darkseg/features.hpp"
#include "darkseg/fusion_config.hpp"
#include "darkseg/raster.hpp"

namespace darkseg {

enum class TransformKind {
    Identity,
    Similarity,
};

/// Planar similarity p' = s R(theta) p + t, the transform family used for
/// mask alignment. Both model outputs come from the same image, so only
/// small drift is expected; a similarity keeps estimation 2-point cheap.
struct PlanarTransform {
    TransformKind kind = TransformKind::Identity;
    double scale = 1.0;
    double rotation = 0.0; // radians
    double tx = 0.0;
    double ty = 0.0;

    static PlanarTransform identity() { return PlanarTransform{}; }

    std::pair<double, double> apply(double x, double y) const;
    PlanarTransform inverse() const;
};

/// Least-squares similarity fit over point pairs (from -> to). Requires at
/// least 2 pairs with distinct source points.
PlanarTransform fit_similarity(const std::vector<std::pair<double, double>> & from,
                               const std::vector<std::pair<double, double>> & to);

/// RANSAC over 2-point similarity hypotheses followed by a least-squares
/// refit on the best inlier set. Deterministic for a fixed cfg.seed.
/// Throws AlignmentFailedError when the inlier fraction stays below
/// cfg.min_inlier_ratio or the refit scale leaves [min_scale, max_scale];
/// callers fall back to identity and record the fallback.
PlanarTransform estimate_transform(const std::vector<std::pair<int, int>> & matches,
                                   const std::vector<OrbFeature> & a,
                                   const std::vector<OrbFeature> & b,
                                   const FusionConfig & cfg);

/// Nearest-neighbor resampling through the inverse map; pixels that land
/// outside the source stay unset.
BinaryMask warp_mask(const BinaryMask & mask, const PlanarTransform & t);

/// Bilinear resampling through the inverse map; out-of-bounds reads as 0.
RasterImage warp_image(const RasterImage & image, const PlanarTransform & t);

} // namespace darkseg
