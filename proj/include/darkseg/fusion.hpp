#pragma once

#include <utility>
#include <vector>

#include "darkseg/fusion_config.hpp"
#include "darkseg/raster.hpp"
#include "darkseg/transform.hpp"

namespace darkseg {

/// Greedy max-IoU pairing restricted to equal classes: candidate pairs with
/// IoU >= cfg.pair_iou_min are accepted best-first, each instance used at
/// most once. Ties break toward lower indices. Returns (index in a,
/// index in b) pairs; may be empty.
std::vector<std::pair<int, int>> pair_instances(const InstanceSet & a, const InstanceSet & b,
                                                const FusionConfig & cfg);

/// Fuses one mask pair: warp a through t into b's frame, intersect with b,
/// then close with the configured square element. With cfg.symmetric_warp
/// the intersection instead combines a warped by t with b warped by t's
/// inverse. The result may be empty.
BinaryMask fuse_pair(const BinaryMask & mask_a, const BinaryMask & mask_b,
                     const PlanarTransform & t, const FusionConfig & cfg);

/// Position rule: an instance whose fraction of set pixels inside the bottom
/// grid row reaches cfg.grid_row_fraction, and whose class is listed in
/// cfg.grid_rule_classes, is reassigned to road. Everything else is
/// untouched. Applying the rule twice equals applying it once.
InstanceSet apply_grid_rules(const InstanceSet & set, const FusionConfig & cfg);

/// Renders an instance set as a single-channel image for alignment: each
/// mask painted at a per-class intensity level (max where they overlap),
/// lightly blurred so mask boundaries carry gradients for corner detection.
RasterImage render_instances(const InstanceSet & set);

struct FusionOutcome {
    InstanceSet fused;
    PlanarTransform transform;
    /// True when alignment failed (or was disabled) and identity was used.
    bool alignment_fallback = false;
    int dropped_empty = 0;
    int unmatched_a = 0;
    int unmatched_b = 0;
};

/// Full dual-model fusion for one image:
///   1. estimate one global transform A -> B from features detected on the
///      two stacked mask renderings (identity fallback on failure, identity
///      always when cfg.force_identity is set),
///   2. pair instances by class and IoU (A warped into B's frame),
///   3. intersect and close each pair via fuse_pair; fused score is the
///      pair minimum; empty fused masks are dropped,
///   4. unmatched instances are dropped, or passed through when
///      cfg.keep_unmatched (A's warped into B's frame, no closing),
///   5. apply the grid reclassification rule.
/// B's frame is the reference frame throughout. Output order: fused pairs by
/// B index, then unmatched A, then unmatched B.
FusionOutcome fuse_sets(const InstanceSet & set_a, const InstanceSet & set_b,
                        const RasterImage & image, const FusionConfig & cfg);

} // namespace darkseg
