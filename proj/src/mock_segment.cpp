#include "darkseg/mock_segment.hpp"

#include <cmath>

#include "darkseg/morphology.hpp"
#include "darkseg/rng.hpp"

namespace darkseg {

namespace {

BinaryMask shift_mask(const BinaryMask & mask, int dx, int dy) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        const int sy = y - dy;
        if (sy < 0 || sy >= mask.height) {
            continue;
        }
        for (int x = 0; x < mask.width; ++x) {
            const int sx = x - dx;
            if (sx >= 0 && sx < mask.width && mask.get(sx, sy)) {
                out.set(x, y, true);
            }
        }
    }
    return out;
}

} // namespace

InstanceSet mock_segment(const InstanceSet & gt, double epsilon, std::uint64_t seed) {
    InstanceSet out;
    out.image_id = gt.image_id;
    out.width = gt.width;
    out.height = gt.height;

    const std::uint64_t image_seed = mix_seed(seed, fnv1a(gt.image_id));
    for (std::size_t i = 0; i < gt.instances.size(); ++i) {
        Rng rng(mix_seed(image_seed, i));

        // Fixed draw order keeps streams aligned whatever the branches do.
        const double u_drop = rng.uniform01();
        const double u_depth = rng.uniform01();
        const double u_dir = rng.uniform01();
        const double u_dx = rng.uniform01();
        const double u_dy = rng.uniform01();
        const double u_score = rng.uniform01();

        if (u_drop < epsilon / 4.0) {
            continue;
        }

        const Instance & src = gt.instances[i];
        BinaryMask mask = src.mask;

        const int depth = static_cast<int>(std::llround(u_depth * epsilon * 5.0));
        if (depth > 0) {
            const int side = 2 * depth + 1;
            if (u_dir < 0.5) {
                mask = dilate(mask, side);
            } else {
                BinaryMask eroded = erode(mask, side);
                if (eroded.count() > 0) {
                    mask = std::move(eroded);
                }
            }
        }

        const int dx = static_cast<int>(std::llround((2.0 * u_dx - 1.0) * epsilon * 10.0));
        const int dy = static_cast<int>(std::llround((2.0 * u_dy - 1.0) * epsilon * 10.0));
        if (dx != 0 || dy != 0) {
            mask = shift_mask(mask, dx, dy);
        }
        if (mask.count() == 0) {
            continue;
        }

        const float score = static_cast<float>(1.0 - epsilon * u_score);
        out.instances.push_back(make_instance(src.cls, std::move(mask), score));
    }
    return out;
}

} // namespace darkseg
