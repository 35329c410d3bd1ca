#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "darkseg/errors.hpp"

namespace darkseg {

/// Object categories used throughout the toolkit. `Surrounding` is a
/// reporting-only label produced by merge_surrounding(); it never appears
/// in raw annotations.
enum class ClassId : std::uint8_t {
    Road = 0,
    Wall,
    Roof,
    People,
    Equipment,
    Corridor,
    Surrounding,
};

inline constexpr std::array<ClassId, 7> kAllClasses = {
    ClassId::Road,      ClassId::Wall,     ClassId::Roof,       ClassId::People,
    ClassId::Equipment, ClassId::Corridor, ClassId::Surrounding,
};

std::string_view class_name(ClassId cls);
std::optional<ClassId> class_from_name(std::string_view name);

/// H x W x C raster of normalized intensities in [0,1], row-major with
/// interleaved channels. 8-bit quantization happens only at file boundaries;
/// all in-memory math runs on the continuous values.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1; // 1 or 3
    std::vector<float> data;

    RasterImage() = default;
    RasterImage(int w, int h, int c, float fill = 0.0f);

    float & at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    std::size_t sample_count() const {
        return static_cast<std::size_t>(width) * height * channels;
    }

    /// Mean over every sample (all pixels, all channels).
    double mean() const;

    /// Dimensions match and every sample is finite and inside [0,1].
    bool valid() const;
};

/// Row-major binary mask. Stored as bytes, one per pixel.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    bool get(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v) {
        bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }

    /// Number of set pixels.
    std::size_t count() const;

    bool operator==(const BinaryMask &) const = default;
};

/// Axis-aligned box, half-open on both axes: x in [x_min, x_max),
/// y in [y_min, y_max). width = x_max - x_min with no off-by-one bookkeeping.
struct Box {
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    bool operator==(const Box &) const = default;
};

/// Minimal axis-aligned box covering every set pixel.
/// Throws EmptyMaskError when the mask has no set pixel.
Box tight_bbox(const BinaryMask & mask);

/// One detected or annotated object. The bbox is always the tight box of
/// the mask and the mask always has at least one set pixel; construct
/// through make_instance to keep that true.
struct Instance {
    ClassId cls = ClassId::Road;
    BinaryMask mask;
    Box bbox;
    float score = 1.0f;
};

/// Builds an Instance with the bbox recomputed from the mask.
/// Throws EmptyMaskError for an all-zero mask.
Instance make_instance(ClassId cls, BinaryMask mask, float score);

/// All instances predicted or annotated for one image. Every member mask
/// shares the set's width/height.
struct InstanceSet {
    std::string image_id;
    int width = 0;
    int height = 0;
    std::vector<Instance> instances;
};

/// Throws ShapeMismatchError unless every mask matches the set dimensions.
void validate_instance_set(const InstanceSet & set);

} // namespace darkseg
