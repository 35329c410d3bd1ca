#include "support/fixtures.hpp"

#include <algorithm>

#include "darkseg/enhance.hpp"

namespace darkseg::testing {

RasterImage step_image(int width, int height, float dark, float bright) {
    RasterImage image(width, height, 1);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            image.at(x, y) = x < width / 2 ? dark : bright;
        }
    }
    return image;
}

RasterImage gradient_image(int width, int height, int channels) {
    RasterImage image(width, height, channels);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c) {
                const float v = static_cast<float>((x + y + 7 * c) % 256) / 255.0f;
                image.at(x, y, c) = v;
            }
        }
    }
    return image;
}

RasterImage textured_image(std::uint64_t seed, int width, int height) {
    Rng rng(seed);
    RasterImage image(width, height, 1, 0.45f);
    const int rects = 28;
    for (int r = 0; r < rects; ++r) {
        const int w = std::min(width, 10 + static_cast<int>(rng.below(31)));
        const int h = std::min(height, 10 + static_cast<int>(rng.below(31)));
        const int x0 =
            static_cast<int>(rng.below(static_cast<std::uint32_t>(width - w + 1)));
        const int y0 =
            static_cast<int>(rng.below(static_cast<std::uint32_t>(height - h + 1)));
        const float level = 0.08f + 0.84f * static_cast<float>(rng.uniform01());
        for (int y = y0; y < y0 + h; ++y) {
            for (int x = x0; x < x0 + w; ++x) {
                image.at(x, y) = level;
            }
        }
    }
    return box_smooth(image, 1);
}

CornerBoard corner_board(int width, int height, int cell, int pitch, int margin) {
    CornerBoard board;
    board.image = RasterImage(width, height, 1, 0.0f);
    for (int y0 = pitch; y0 + cell + pitch <= height; y0 += cell + pitch) {
        for (int x0 = pitch; x0 + cell + pitch <= width; x0 += cell + pitch) {
            for (int y = y0; y < y0 + cell; ++y) {
                for (int x = x0; x < x0 + cell; ++x) {
                    board.image.at(x, y) = 0.9f;
                }
            }
            const std::pair<int, int> corners[4] = {{x0, y0},
                                                    {x0 + cell - 1, y0},
                                                    {x0, y0 + cell - 1},
                                                    {x0 + cell - 1, y0 + cell - 1}};
            for (const auto & [cx, cy] : corners) {
                if (cx >= margin && cx < width - margin && cy >= margin &&
                    cy < height - margin) {
                    board.corners.emplace_back(cx, cy);
                }
            }
        }
    }
    return board;
}

BinaryMask random_mask(Rng & rng, int width, int height, double density) {
    BinaryMask mask(width, height);
    for (auto & bit : mask.bits) {
        bit = rng.uniform01() < density ? 1 : 0;
    }
    return mask;
}

BinaryMask rect_mask(int width, int height, int x0, int y0, int w, int h) {
    BinaryMask mask(width, height);
    for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) {
            mask.set(x, y, true);
        }
    }
    return mask;
}

BinaryMask random_rect_mask(Rng & rng, int width, int height) {
    const int w = 3 + static_cast<int>(rng.below(static_cast<std::uint32_t>(width - 3)));
    const int h = 3 + static_cast<int>(rng.below(static_cast<std::uint32_t>(height - 3)));
    const int x0 = static_cast<int>(rng.below(static_cast<std::uint32_t>(width - w + 1)));
    const int y0 = static_cast<int>(rng.below(static_cast<std::uint32_t>(height - h + 1)));
    return rect_mask(width, height, x0, y0, w, h);
}

InstanceSet grid_rule_set() {
    // 64x64, 4 grid rows: the bottom row is y in [48, 64).
    InstanceSet set;
    set.image_id = "grid-rule";
    set.width = 64;
    set.height = 64;
    set.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(64, 64, 4, 50, 16, 10), 1.0f));
    set.instances.push_back(
        make_instance(ClassId::People, rect_mask(64, 64, 26, 50, 8, 12), 1.0f));
    // 16 wide x 4 tall at y in [45, 49): exactly one of four rows is >= 48.
    set.instances.push_back(
        make_instance(ClassId::Roof, rect_mask(64, 64, 40, 45, 16, 4), 1.0f));
    set.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(64, 64, 4, 6, 20, 12), 1.0f));
    return set;
}

MatchFixture three_gt_two_pred_fixture() {
    MatchFixture fx;
    fx.gt.image_id = "match-fixture";
    fx.gt.width = 16;
    fx.gt.height = 16;
    fx.pred.image_id = "match-fixture";
    fx.pred.width = 16;
    fx.pred.height = 16;

    // gt0 4px / pred0 4px sharing 3 -> IoU 3/5 = 0.6.
    fx.gt.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(16, 16, 1, 1, 4, 1), 1.0f));
    fx.pred.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(16, 16, 2, 1, 4, 1), 0.9f));
    // gt1 9px / pred1 4px sharing 3 -> IoU 3/10 = 0.3.
    fx.gt.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(16, 16, 1, 5, 9, 1), 1.0f));
    fx.pred.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(16, 16, 0, 5, 4, 1), 0.8f));
    // gt2 untouched by any prediction.
    fx.gt.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(16, 16, 1, 9, 5, 2), 1.0f));
    return fx;
}

MatchFixture two_class_miou_fixture() {
    MatchFixture fx;
    fx.gt.image_id = "miou-fixture";
    fx.gt.width = 2;
    fx.gt.height = 2;
    fx.pred.image_id = "miou-fixture";
    fx.pred.width = 2;
    fx.pred.height = 2;

    // Wall: gt covers the top row, pred only its left pixel -> IoU 1/2.
    fx.gt.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(2, 2, 0, 0, 2, 1), 1.0f));
    fx.pred.instances.push_back(
        make_instance(ClassId::Wall, rect_mask(2, 2, 0, 0, 1, 1), 1.0f));
    // People: identical single pixel -> IoU 1.
    fx.gt.instances.push_back(
        make_instance(ClassId::People, rect_mask(2, 2, 1, 1, 1, 1), 1.0f));
    fx.pred.instances.push_back(
        make_instance(ClassId::People, rect_mask(2, 2, 1, 1, 1, 1), 1.0f));
    return fx;
}

std::vector<CorpusImage> make_corpus(std::uint64_t seed, int count) {
    constexpr int kWidth = 160;
    constexpr int kHeight = 120;

    std::vector<CorpusImage> corpus;
    corpus.reserve(count);
    for (int n = 0; n < count; ++n) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n)));
        const auto jitter = [&] { return static_cast<int>(rng.below(4)); };

        struct Slot {
            ClassId cls;
            int x, y, w, h;
        };
        const Slot slots[] = {
            {ClassId::Road, 10 + jitter(), 94 + static_cast<int>(rng.below(3)), 130, 20},
            {ClassId::Wall, 8 + jitter(), 8 + jitter(), 30 + jitter(), 26},
            {ClassId::Wall, 120 + jitter(), 10 + jitter(), 26, 30},
            {ClassId::Roof, 56 + jitter(), 6 + jitter(), 40, 16},
            {ClassId::People, 52 + jitter(), 52 + jitter(), 12, 26},
            {ClassId::Equipment, 100 + jitter(), 48 + jitter(), 22, 22},
            {ClassId::Corridor, 12 + jitter(), 50 + jitter(), 28, 30},
        };

        CorpusImage entry;
        entry.gt.image_id = "frame_" + std::string(n < 10 ? "0" : "") + std::to_string(n);
        entry.gt.width = kWidth;
        entry.gt.height = kHeight;

        // Low-light scene: dark background with brighter instance regions.
        entry.scene = RasterImage(kWidth, kHeight, 1);
        for (auto & v : entry.scene.data) {
            v = 0.02f + 0.03f * static_cast<float>(rng.uniform01());
        }
        for (const Slot & slot : slots) {
            const float level =
                0.10f + 0.08f * (static_cast<float>(slot.cls) + 1.0f);
            for (int y = slot.y; y < slot.y + slot.h; ++y) {
                for (int x = slot.x; x < slot.x + slot.w; ++x) {
                    entry.scene.at(x, y) =
                        std::min(1.0f, level + 0.02f * static_cast<float>(rng.uniform01()));
                }
            }
            entry.gt.instances.push_back(make_instance(
                slot.cls, rect_mask(kWidth, kHeight, slot.x, slot.y, slot.w, slot.h),
                1.0f));
        }
        corpus.push_back(std::move(entry));
    }
    return corpus;
}

InstanceSet drop_class(const InstanceSet & set, ClassId cls) {
    InstanceSet out;
    out.image_id = set.image_id;
    out.width = set.width;
    out.height = set.height;
    for (const Instance & inst : set.instances) {
        if (inst.cls != cls) {
            out.instances.push_back(inst);
        }
    }
    return out;
}

InstanceSet shift_set(const InstanceSet & set, int dx, int dy) {
    InstanceSet out;
    out.image_id = set.image_id;
    out.width = set.width;
    out.height = set.height;
    for (const Instance & inst : set.instances) {
        BinaryMask shifted(set.width, set.height);
        for (int y = 0; y < set.height; ++y) {
            const int sy = y - dy;
            if (sy < 0 || sy >= set.height) {
                continue;
            }
            for (int x = 0; x < set.width; ++x) {
                const int sx = x - dx;
                if (sx >= 0 && sx < set.width && inst.mask.get(sx, sy)) {
                    shifted.set(x, y, true);
                }
            }
        }
        if (shifted.count() > 0) {
            out.instances.push_back(make_instance(inst.cls, std::move(shifted), inst.score));
        }
    }
    return out;
}

} // namespace darkseg::testing
