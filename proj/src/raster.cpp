#include "darkseg/raster.hpp"

#include <cmath>

namespace darkseg {

namespace {

constexpr std::array<std::string_view, 7> kClassNames = {
    "road", "wall", "roof", "people", "equipment", "corridor", "surrounding",
};

} // namespace

std::string_view class_name(ClassId cls) {
    return kClassNames[static_cast<std::size_t>(cls)];
}

std::optional<ClassId> class_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (kClassNames[i] == name) {
            return static_cast<ClassId>(i);
        }
    }
    return std::nullopt;
}

RasterImage::RasterImage(int w, int h, int c, float fill)
    : width(w), height(h), channels(c),
      data(static_cast<std::size_t>(w) * h * c, fill) {}

double RasterImage::mean() const {
    if (data.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (float v : data) {
        sum += v;
    }
    return sum / static_cast<double>(data.size());
}

bool RasterImage::valid() const {
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3)) {
        return false;
    }
    if (data.size() != sample_count()) {
        return false;
    }
    for (float v : data) {
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
            return false;
        }
    }
    return true;
}

BinaryMask::BinaryMask(int w, int h, bool fill)
    : width(w), height(h),
      bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

std::size_t BinaryMask::count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits) {
        n += b != 0;
    }
    return n;
}

Box tight_bbox(const BinaryMask & mask) {
    int x0 = mask.width;
    int y0 = mask.height;
    int x1 = -1;
    int y1 = -1;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) {
                continue;
            }
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) {
        throw EmptyMaskError("tight_bbox: mask has no set pixel");
    }
    return Box{x0, y0, x1 + 1, y1 + 1};
}

Instance make_instance(ClassId cls, BinaryMask mask, float score) {
    Box box = tight_bbox(mask); // throws on empty mask
    Instance inst;
    inst.cls = cls;
    inst.mask = std::move(mask);
    inst.bbox = box;
    inst.score = score;
    return inst;
}

void validate_instance_set(const InstanceSet & set) {
    for (const Instance & inst : set.instances) {
        if (inst.mask.width != set.width || inst.mask.height != set.height) {
            throw ShapeMismatchError("instance set '" + set.image_id +
                                     "': mask dimensions differ from set dimensions");
        }
    }
}

} // namespace darkseg
