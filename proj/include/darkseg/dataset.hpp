#pragma once

#include <cstdint>
#include <vector>

#include "darkseg/raster.hpp"

namespace darkseg {

struct DegradeConfig {
    std::uint64_t seed = 0;
    /// Std-dev of the additive Gaussian noise, in intensity units.
    float noise_sigma = 0.05f;
    /// Multiplier in (0,1] applied before the contrast stretch.
    float brightness_factor = 0.3f;
    /// Contrast multiplier >= 1 applied around the post-brightness mean.
    float contrast_factor = 1.3f;
};

/// Produces a synthetic low-light counterpart of an image:
///
///   out = clamp((image * brightness - m) * contrast + m + N(0, sigma))
///
/// where m is the mean of the brightness-scaled image. Noise samples are
/// drawn per value in row-major, channel-interleaved order from the seeded
/// generator in rng.hpp, so equal seeds give bit-identical outputs.
RasterImage degrade(const RasterImage & image, const DegradeConfig & cfg);

struct FilterConfig {
    /// Keep threshold on mean intensity; below it the frame is too dark.
    float dark_threshold = 0.04f;
    /// Keep threshold on the variance of the 3x3 Laplacian response.
    float blur_threshold = 1e-4f;
    /// Max Hamming distance on the 64-bit average hash at which two frames
    /// count as duplicates.
    int dup_hash_distance = 5;
};

enum class RejectReason {
    TooDark,
    Blurred,
    Duplicate,
};

const char * reject_reason_name(RejectReason reason);

struct FilterVerdict {
    bool keep = true;
    std::vector<RejectReason> reasons; // keep == reasons.empty()
};

/// 64-bit average hash: 8x8 mean-pooled grayscale thresholded at its mean.
std::uint64_t average_hash(const RasterImage & image);

/// Variance of the 3x3 Laplacian of the grayscale image (channel mean).
double laplacian_variance(const RasterImage & image);

/// Checks one frame against all three rejection rules and records its hash
/// in `seen_hashes`. Darkness and blur are order-independent; duplicates
/// depend on what was seen before, so callers own the iteration order and
/// must not share the hash set across threads without synchronization.
FilterVerdict filter_image(const RasterImage & image, const FilterConfig & cfg,
                           std::vector<std::uint64_t> & seen_hashes);

} // namespace darkseg
