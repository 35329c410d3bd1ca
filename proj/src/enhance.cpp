#include "darkseg/enhance.hpp"

#include <algorithm>
#include <cmath>

namespace darkseg {

namespace {

int clamp_index(int v, int lo, int hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

/// One box pass along x or y for a single channel, replicate padding.
void box_pass(const std::vector<float> & src, std::vector<float> & dst, int width,
              int height, int channels, int channel, int radius, bool horizontal) {
    const double inv = 1.0 / (2 * radius + 1);
    const auto idx = [&](int x, int y) {
        return (static_cast<std::size_t>(y) * width + x) * channels + channel;
    };
    if (horizontal) {
        for (int y = 0; y < height; ++y) {
            double sum = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                sum += src[idx(clamp_index(k, 0, width - 1), y)];
            }
            dst[idx(0, y)] = static_cast<float>(sum * inv);
            for (int x = 1; x < width; ++x) {
                sum += src[idx(clamp_index(x + radius, 0, width - 1), y)];
                sum -= src[idx(clamp_index(x - radius - 1, 0, width - 1), y)];
                dst[idx(x, y)] = static_cast<float>(sum * inv);
            }
        }
    } else {
        for (int x = 0; x < width; ++x) {
            double sum = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                sum += src[idx(x, clamp_index(k, 0, height - 1))];
            }
            dst[idx(x, 0)] = static_cast<float>(sum * inv);
            for (int y = 1; y < height; ++y) {
                sum += src[idx(x, clamp_index(y + radius, 0, height - 1))];
                sum -= src[idx(x, clamp_index(y - radius - 1, 0, height - 1))];
                dst[idx(x, y)] = static_cast<float>(sum * inv);
            }
        }
    }
}

void check_config(const EnhanceConfig & cfg) {
    if (!(cfg.gamma > 0.0f) || cfg.smoothing_radius < 1 || !(cfg.eps_floor > 0.0f)) {
        throw Error("enhance: config requires gamma > 0, smoothing_radius >= 1, eps_floor > 0");
    }
    if (cfg.target_mean && !(*cfg.target_mean > 0.0f && *cfg.target_mean <= 1.0f)) {
        throw Error("enhance: target_mean must lie in (0,1]");
    }
}

double mean_after_gamma(const RasterImage & illum, double gamma) {
    const double e = 1.0 / gamma;
    double sum = 0.0;
    for (float v : illum.data) {
        sum += std::pow(static_cast<double>(v), e);
    }
    return sum / static_cast<double>(illum.data.size());
}

} // namespace

RasterImage max_channel(const RasterImage & image) {
    if (image.channels == 1) {
        return image;
    }
    RasterImage out(image.width, image.height, 1);
    const std::size_t pixels = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t p = 0; p < pixels; ++p) {
        float m = image.data[p * image.channels];
        for (int c = 1; c < image.channels; ++c) {
            m = std::max(m, image.data[p * image.channels + c]);
        }
        out.data[p] = m;
    }
    return out;
}

RasterImage box_smooth(const RasterImage & image, int radius) {
    if (radius < 1) {
        return image;
    }
    RasterImage tmp(image.width, image.height, image.channels);
    RasterImage out(image.width, image.height, image.channels);
    for (int c = 0; c < image.channels; ++c) {
        box_pass(image.data, tmp.data, image.width, image.height, image.channels, c,
                 radius, true);
        box_pass(tmp.data, out.data, image.width, image.height, image.channels, c,
                 radius, false);
    }
    return out;
}

RasterImage median3(const RasterImage & image) {
    RasterImage out(image.width, image.height, image.channels);
    std::array<float, 9> window;
    for (int c = 0; c < image.channels; ++c) {
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                int n = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int sx = clamp_index(x + dx, 0, image.width - 1);
                        const int sy = clamp_index(y + dy, 0, image.height - 1);
                        window[n++] = image.at(sx, sy, c);
                    }
                }
                std::nth_element(window.begin(), window.begin() + 4, window.end());
                out.at(x, y, c) = window[4];
            }
        }
    }
    return out;
}

IlluminationPair decompose(const RasterImage & image, const EnhanceConfig & cfg) {
    check_config(cfg);
    const RasterImage luma = max_channel(image);
    RasterImage illum = box_smooth(luma, cfg.smoothing_radius);

    // Upper envelope: smoothing alone can dip below the local maximum, which
    // would force reflectance past 1 and break reconstruction.
    for (std::size_t i = 0; i < illum.data.size(); ++i) {
        float v = std::max(illum.data[i], luma.data[i]);
        illum.data[i] = std::clamp(v, cfg.eps_floor, 1.0f);
    }

    RasterImage refl(image.width, image.height, image.channels);
    const std::size_t pixels = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t p = 0; p < pixels; ++p) {
        const float il = illum.data[p];
        for (int c = 0; c < image.channels; ++c) {
            const float r = image.data[p * image.channels + c] / il;
            refl.data[p * image.channels + c] = std::clamp(r, 0.0f, 1.0f);
        }
    }
    return IlluminationPair{std::move(refl), std::move(illum)};
}

double solve_gamma_for_mean(const RasterImage & illumination, double target_mean) {
    constexpr double kLo = 1.0;
    constexpr double kHi = 10.0;
    constexpr double kTol = 1e-3;

    // mean(I^(1/g)) is nondecreasing in g for I in (0,1].
    if (mean_after_gamma(illumination, kLo) >= target_mean - kTol) {
        return kLo;
    }
    if (mean_after_gamma(illumination, kHi) <= target_mean + kTol) {
        return kHi;
    }
    double lo = kLo;
    double hi = kHi;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double m = mean_after_gamma(illumination, mid);
        if (std::abs(m - target_mean) <= kTol) {
            return mid;
        }
        if (m < target_mean) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

RasterImage adjust_illumination(const RasterImage & illumination, const EnhanceConfig & cfg) {
    check_config(cfg);
    double gamma = cfg.gamma;
    if (cfg.target_mean.has_value()) {
        gamma = solve_gamma_for_mean(illumination, *cfg.target_mean);
    }
    if (gamma == 1.0) {
        return illumination;
    }
    RasterImage out(illumination.width, illumination.height, 1);
    const double e = 1.0 / gamma;
    for (std::size_t i = 0; i < illumination.data.size(); ++i) {
        out.data[i] = static_cast<float>(std::pow(static_cast<double>(illumination.data[i]), e));
    }
    return out;
}

RasterImage enhance(const RasterImage & image, const EnhanceConfig & cfg) {
    IlluminationPair pair = decompose(image, cfg);
    if (cfg.median_restore) {
        pair.reflectance = median3(pair.reflectance);
    }
    const RasterImage adjusted = adjust_illumination(pair.illumination, cfg);

    RasterImage out(image.width, image.height, image.channels);
    const std::size_t pixels = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t p = 0; p < pixels; ++p) {
        const float il = adjusted.data[p];
        for (int c = 0; c < image.channels; ++c) {
            const float v = pair.reflectance.data[p * image.channels + c] * il;
            out.data[p * image.channels + c] = std::clamp(v, 0.0f, 1.0f);
        }
    }
    return out;
}

} // namespace darkseg
