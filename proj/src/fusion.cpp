#include "darkseg/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "darkseg/enhance.hpp"
#include "darkseg/features.hpp"
#include "darkseg/morphology.hpp"

namespace darkseg {

namespace {

double mask_iou(const BinaryMask & a, const BinaryMask & b) {
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const bool va = a.bits[i] != 0;
        const bool vb = b.bits[i] != 0;
        inter += va && vb;
        uni += va || vb;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace

std::vector<std::pair<int, int>> pair_instances(const InstanceSet & a, const InstanceSet & b,
                                                const FusionConfig & cfg) {
    if (a.width != b.width || a.height != b.height) {
        throw ShapeMismatchError("pair_instances: instance sets have different dimensions");
    }
    struct Candidate {
        double iou;
        int ia;
        int ib;
    };
    std::vector<Candidate> candidates;
    for (int ia = 0; ia < static_cast<int>(a.instances.size()); ++ia) {
        for (int ib = 0; ib < static_cast<int>(b.instances.size()); ++ib) {
            if (a.instances[ia].cls != b.instances[ib].cls) {
                continue;
            }
            const double iou = mask_iou(a.instances[ia].mask, b.instances[ib].mask);
            if (iou >= cfg.pair_iou_min) {
                candidates.push_back({iou, ia, ib});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate & l, const Candidate & r) {
        if (l.iou != r.iou) {
            return l.iou > r.iou;
        }
        return l.ia != r.ia ? l.ia < r.ia : l.ib < r.ib;
    });

    std::vector<char> used_a(a.instances.size(), 0);
    std::vector<char> used_b(b.instances.size(), 0);
    std::vector<std::pair<int, int>> pairs;
    for (const Candidate & c : candidates) {
        if (used_a[c.ia] || used_b[c.ib]) {
            continue;
        }
        used_a[c.ia] = 1;
        used_b[c.ib] = 1;
        pairs.emplace_back(c.ia, c.ib);
    }
    return pairs;
}

BinaryMask fuse_pair(const BinaryMask & mask_a, const BinaryMask & mask_b,
                     const PlanarTransform & t, const FusionConfig & cfg) {
    const BinaryMask warped_a = warp_mask(mask_a, t);
    BinaryMask warped_b;
    const BinaryMask * rhs = &mask_b;
    if (cfg.symmetric_warp) {
        warped_b = warp_mask(mask_b, t.inverse());
        rhs = &warped_b;
    }

    BinaryMask intersection(mask_a.width, mask_a.height);
    for (std::size_t i = 0; i < intersection.bits.size(); ++i) {
        intersection.bits[i] = (warped_a.bits[i] && rhs->bits[i]) ? 1 : 0;
    }
    return morph_close(intersection, cfg.struct_elem);
}

InstanceSet apply_grid_rules(const InstanceSet & set, const FusionConfig & cfg) {
    InstanceSet out = set;
    // Bottom grid row: y >= row_start.
    const int row_start = set.height - set.height / std::max(1, cfg.grid_rows);
    for (Instance & inst : out.instances) {
        if (!cfg.grid_rule_classes.contains(inst.cls)) {
            continue;
        }
        std::size_t total = 0;
        std::size_t bottom = 0;
        for (int y = inst.bbox.y_min; y < inst.bbox.y_max; ++y) {
            for (int x = inst.bbox.x_min; x < inst.bbox.x_max; ++x) {
                if (!inst.mask.get(x, y)) {
                    continue;
                }
                ++total;
                bottom += y >= row_start;
            }
        }
        if (total > 0 &&
            static_cast<double>(bottom) >=
                static_cast<double>(cfg.grid_row_fraction) * static_cast<double>(total)) {
            inst.cls = ClassId::Road;
        }
    }
    return out;
}

RasterImage render_instances(const InstanceSet & set) {
    RasterImage canvas(set.width, set.height, 1, 0.0f);
    for (const Instance & inst : set.instances) {
        const float level =
            0.3f + 0.7f * (static_cast<float>(inst.cls) + 1.0f) /
                       static_cast<float>(kAllClasses.size());
        for (int y = inst.bbox.y_min; y < inst.bbox.y_max; ++y) {
            for (int x = inst.bbox.x_min; x < inst.bbox.x_max; ++x) {
                if (inst.mask.get(x, y)) {
                    canvas.at(x, y) = std::max(canvas.at(x, y), level);
                }
            }
        }
    }
    return box_smooth(canvas, 1);
}

FusionOutcome fuse_sets(const InstanceSet & set_a, const InstanceSet & set_b,
                        const RasterImage & image, const FusionConfig & cfg) {
    if (set_a.width != set_b.width || set_a.height != set_b.height) {
        throw ShapeMismatchError("fuse_sets: instance sets have different dimensions");
    }
    if (image.width != set_b.width || image.height != set_b.height) {
        throw ShapeMismatchError("fuse_sets: image dimensions differ from the instance sets");
    }

    FusionOutcome outcome;
    outcome.transform = PlanarTransform::identity();
    if (cfg.force_identity) {
        outcome.alignment_fallback = true;
    } else {
        try {
            const RasterImage render_a = render_instances(set_a);
            const RasterImage render_b = render_instances(set_b);
            const auto features_a = detect_orb(render_a, cfg);
            const auto features_b = detect_orb(render_b, cfg);
            const auto matches = match_features(features_a, features_b, cfg);
            outcome.transform = estimate_transform(matches, features_a, features_b, cfg);
        } catch (const Error &) {
            outcome.transform = PlanarTransform::identity();
            outcome.alignment_fallback = true;
        }
    }

    // Pairing happens in B's frame.
    InstanceSet warped_a = set_a;
    for (Instance & inst : warped_a.instances) {
        inst.mask = warp_mask(inst.mask, outcome.transform);
    }
    const auto pairs = pair_instances(warped_a, set_b, cfg);

    std::vector<char> matched_a(set_a.instances.size(), 0);
    std::vector<char> matched_b(set_b.instances.size(), 0);
    struct FusedEntry {
        int ib;
        Instance inst;
    };
    std::vector<FusedEntry> fused_entries;
    for (const auto & [ia, ib] : pairs) {
        matched_a[ia] = 1;
        matched_b[ib] = 1;
        BinaryMask fused_mask =
            fuse_pair(set_a.instances[ia].mask, set_b.instances[ib].mask, outcome.transform, cfg);
        if (fused_mask.count() == 0) {
            ++outcome.dropped_empty;
            continue;
        }
        const float score =
            std::min(set_a.instances[ia].score, set_b.instances[ib].score);
        fused_entries.push_back(
            {ib, make_instance(set_b.instances[ib].cls, std::move(fused_mask), score)});
    }
    std::sort(fused_entries.begin(), fused_entries.end(),
              [](const FusedEntry & l, const FusedEntry & r) { return l.ib < r.ib; });

    InstanceSet fused;
    fused.image_id = set_b.image_id.empty() ? set_a.image_id : set_b.image_id;
    fused.width = set_b.width;
    fused.height = set_b.height;
    for (FusedEntry & e : fused_entries) {
        fused.instances.push_back(std::move(e.inst));
    }

    for (std::size_t ia = 0; ia < set_a.instances.size(); ++ia) {
        if (matched_a[ia]) {
            continue;
        }
        ++outcome.unmatched_a;
        if (!cfg.keep_unmatched) {
            continue;
        }
        // Pass-throughs still live in B's frame.
        BinaryMask warped = std::move(warped_a.instances[ia].mask);
        if (warped.count() == 0) {
            ++outcome.dropped_empty;
            continue;
        }
        fused.instances.push_back(make_instance(set_a.instances[ia].cls, std::move(warped),
                                                set_a.instances[ia].score));
    }
    for (std::size_t ib = 0; ib < set_b.instances.size(); ++ib) {
        if (matched_b[ib]) {
            continue;
        }
        ++outcome.unmatched_b;
        if (!cfg.keep_unmatched) {
            continue;
        }
        fused.instances.push_back(set_b.instances[ib]);
    }

    outcome.fused = apply_grid_rules(fused, cfg);
    return outcome;
}

} // namespace darkseg
