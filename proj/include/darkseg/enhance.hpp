#pragma once

#include <optional>

#include "darkseg/raster.hpp"

namespace darkseg {

struct EnhanceConfig {
    /// Illumination floor; keeps the reflectance division finite on black input.
    float eps_floor = 1e-3f;
    /// Box-smoothing radius for the illumination estimate.
    int smoothing_radius = 15;
    /// Brightening exponent: illumination is mapped through I^(1/gamma).
    float gamma = 2.2f;
    /// When present, gamma is solved by bisection over [1,10] so the adjusted
    /// illumination mean lands within 1e-3 of this target (or the bracket edge).
    std::optional<float> target_mean;
    /// Optional 3x3 median filter on the reflectance, off by default.
    bool median_restore = false;
};

/// Reflectance/illumination split of an image. The illumination is a single
/// channel in (0,1]; reflectance shares the input's channel count and stays
/// in [0,1]. Per pixel, reflectance * illumination reconstructs the input.
struct IlluminationPair {
    RasterImage reflectance;
    RasterImage illumination;
};

/// Max over channels, as a 1-channel map. Identity for 1-channel input.
RasterImage max_channel(const RasterImage & image);

/// Separable box filter with edge-replicate padding. 1 or 3 channels.
RasterImage box_smooth(const RasterImage & image, int radius);

/// 3x3 median filter with edge-replicate padding, applied per channel.
RasterImage median3(const RasterImage & image);

/// Splits an image into reflectance and illumination. The illumination is
/// the box-smoothed max-channel map lifted to the pointwise upper envelope
/// max(smoothed, max-channel) and clamped to [eps_floor, 1]; the envelope
/// keeps reflectance = input / illumination inside [0,1] so the product
/// reconstructs the input everywhere (all-black regions reconstruct to 0).
IlluminationPair decompose(const RasterImage & image, const EnhanceConfig & cfg);

/// Gamma-brightens a 1-channel illumination map: I' = I^(1/gamma). With
/// cfg.target_mean set, gamma comes from solve_gamma_for_mean. Monotone in I
/// and in gamma; output stays in (0,1].
RasterImage adjust_illumination(const RasterImage & illumination, const EnhanceConfig & cfg);

/// Bisection over gamma in [1,10] for mean(I^(1/gamma)) ~= target (within
/// 1e-3, or the nearest bracket edge when the target is unreachable).
double solve_gamma_for_mean(const RasterImage & illumination, double target_mean);

/// Full pipeline: decompose, optionally median-restore the reflectance,
/// adjust the illumination, recombine, clamp to [0,1]. With gamma >= 1 the
/// output mean never drops below the recombined input's mean.
RasterImage enhance(const RasterImage & image, const EnhanceConfig & cfg);

} // namespace darkseg
