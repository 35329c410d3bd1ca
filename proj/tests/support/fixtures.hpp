#pragma once

#include <cstdint>
#include <vector>

#include "darkseg/raster.hpp"
#include "darkseg/rng.hpp"

namespace darkseg::testing {

/// Left half `dark`, right half `bright`.
RasterImage step_image(int width, int height, float dark, float bright);

/// Deterministic per-pixel gradient, useful for I/O round trips.
RasterImage gradient_image(int width, int height, int channels);

/// Corner-rich texture: overlapping random-intensity rectangles over a mid
/// gray background, lightly smoothed. Deterministic per seed.
RasterImage textured_image(std::uint64_t seed, int width, int height);

/// Grid of isolated bright squares on black; every square contributes
/// segment-test corners at known positions. Returns the board plus the list
/// of true corner coordinates that lie inside `margin`.
struct CornerBoard {
    RasterImage image;
    std::vector<std::pair<int, int>> corners;
};
CornerBoard corner_board(int width, int height, int cell, int pitch, int margin);

/// Uniformly random mask with the given fill density.
BinaryMask random_mask(Rng & rng, int width, int height, double density);

/// Random solid rectangle mask (at least 3x3), fully inside the image.
BinaryMask random_rect_mask(Rng & rng, int width, int height);

BinaryMask rect_mask(int width, int height, int x0, int y0, int w, int h);

/// 64x64 set exercising the grid reclassification rule:
///   [0] wall entirely inside the bottom grid row,
///   [1] people entirely inside the bottom grid row,
///   [2] roof with exactly 25% of its pixels in the bottom row,
///   [3] wall entirely above the bottom row.
InstanceSet grid_rule_set();

/// 2 predictions over 3 ground-truth instances (single class): one pred
/// overlaps its target at IoU 0.6, the other at 0.3. At threshold 0.5 this
/// gives tp=1 fp=1 fn=2, so P=0.5, R=1/3, F1=0.4.
struct MatchFixture {
    InstanceSet pred;
    InstanceSet gt;
};
MatchFixture three_gt_two_pred_fixture();

/// Two classes on a 2x2 grid: one class overlaps at IoU 0.5, the other at
/// 1.0, so class-mean IoU is 0.75.
MatchFixture two_class_miou_fixture();

/// Synthetic corpus: per image a scene PNG-able raster plus a ground-truth
/// set of solid rectangles (road along the bottom, walls/roof high, people,
/// equipment and corridor mid-frame). Layouts jitter per image; the grid
/// rule is a no-op on the ground truth by construction.
struct CorpusImage {
    RasterImage scene;
    InstanceSet gt;
};
std::vector<CorpusImage> make_corpus(std::uint64_t seed, int count);

/// Every instance of `cls` removed.
InstanceSet drop_class(const InstanceSet & set, ClassId cls);

/// Every mask translated by (dx, dy); instances pushed fully outside vanish.
InstanceSet shift_set(const InstanceSet & set, int dx, int dy);

} // namespace darkseg::testing
