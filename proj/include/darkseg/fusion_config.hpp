#pragma once

#include <cstdint>
#include <set>

#include "darkseg/raster.hpp"

namespace darkseg {

/// Every tunable of the dual-model mask fusion stage: feature detection,
/// matching, robust alignment, instance pairing, morphology, and the
/// position-based grid reclassification.
struct FusionConfig {
    // --- feature detection / description ---
    int max_features = 500;
    /// Corner test contrast threshold, in [0,1] intensity units.
    float fast_threshold = 0.08f;

    // --- matching ---
    /// Lowe ratio: best distance must be < ratio * second-best.
    float match_ratio = 0.75f;

    // --- robust similarity estimation ---
    int ransac_iters = 1000;
    float ransac_inlier_px = 3.0f;
    /// Estimation fails below this inlier fraction.
    float min_inlier_ratio = 0.3f;
    /// Estimated scale outside [min_scale, max_scale] counts as failure.
    float min_scale = 0.5f;
    float max_scale = 2.0f;
    /// Seed for hypothesis sampling; fixed seed gives bit-identical fusions.
    std::uint64_t seed = 0;

    // --- instance pairing / fusion ---
    /// Minimum IoU for two same-class instances to fuse.
    float pair_iou_min = 0.5f;
    /// Pass unmatched instances through (no intersection, no closing)
    /// instead of dropping them.
    bool keep_unmatched = false;
    /// Square structuring element side for the closing step; odd.
    int struct_elem = 5;
    /// Intersect the two masks after warping each toward the other's frame
    /// instead of warping A into B's frame. Off by default because it mixes
    /// coordinate frames; kept as a comparison mode.
    bool symmetric_warp = false;
    /// Skip alignment and fuse with the identity transform (ablation mode).
    bool force_identity = false;

    // --- grid reclassification ---
    int grid_rows = 4;
    int grid_cols = 4;
    /// Fraction of an instance's pixels that must fall in the bottom grid
    /// row to trigger reclassification as road.
    float grid_row_fraction = 0.3f;
    /// Classes the rule may overwrite. Restricted to structural classes by
    /// default; add the remaining classes to reproduce an unrestricted rule.
    std::set<ClassId> grid_rule_classes = {ClassId::Wall, ClassId::Roof, ClassId::Road};
};

} // namespace darkseg
