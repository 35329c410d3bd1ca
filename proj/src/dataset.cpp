#include "darkseg/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "darkseg/rng.hpp"

namespace darkseg {

RasterImage degrade(const RasterImage & image, const DegradeConfig & cfg) {
    if (cfg.noise_sigma < 0.0f || !(cfg.brightness_factor > 0.0f) ||
        cfg.brightness_factor > 1.0f || cfg.contrast_factor < 1.0f) {
        throw Error("degrade: config requires sigma >= 0, brightness in (0,1], contrast >= 1");
    }
    Rng rng(cfg.seed);

    double sum = 0.0;
    for (float v : image.data) {
        sum += static_cast<double>(v) * cfg.brightness_factor;
    }
    const double m = image.data.empty() ? 0.0 : sum / static_cast<double>(image.data.size());

    RasterImage out(image.width, image.height, image.channels);
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        const double scaled = static_cast<double>(image.data[i]) * cfg.brightness_factor;
        double v = (scaled - m) * cfg.contrast_factor + m;
        if (cfg.noise_sigma > 0.0f) {
            v += cfg.noise_sigma * rng.gaussian();
        }
        out.data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
    return out;
}

const char * reject_reason_name(RejectReason reason) {
    switch (reason) {
    case RejectReason::TooDark:
        return "too_dark";
    case RejectReason::Blurred:
        return "blurred";
    case RejectReason::Duplicate:
        return "duplicate";
    }
    return "unknown";
}

namespace {

/// Grayscale as the channel mean; identity for single-channel input.
float gray_at(const RasterImage & image, int x, int y) {
    if (image.channels == 1) {
        return image.at(x, y);
    }
    float s = 0.0f;
    for (int c = 0; c < image.channels; ++c) {
        s += image.at(x, y, c);
    }
    return s / static_cast<float>(image.channels);
}

} // namespace

std::uint64_t average_hash(const RasterImage & image) {
    // Mean-pool onto an 8x8 grid, then threshold at the grid mean.
    std::array<double, 64> cells{};
    std::array<std::uint32_t, 64> counts{};
    for (int y = 0; y < image.height; ++y) {
        const int cy = std::min(y * 8 / image.height, 7);
        for (int x = 0; x < image.width; ++x) {
            const int cx = std::min(x * 8 / image.width, 7);
            cells[cy * 8 + cx] += gray_at(image, x, y);
            counts[cy * 8 + cx] += 1;
        }
    }
    double total = 0.0;
    for (int i = 0; i < 64; ++i) {
        if (counts[i] > 0) {
            cells[i] /= counts[i];
        }
        total += cells[i];
    }
    const double mean = total / 64.0;
    std::uint64_t hash = 0;
    for (int i = 0; i < 64; ++i) {
        if (cells[i] > mean) {
            hash |= (1ULL << i);
        }
    }
    return hash;
}

double laplacian_variance(const RasterImage & image) {
    if (image.width < 3 || image.height < 3) {
        return 0.0;
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (int y = 1; y < image.height - 1; ++y) {
        for (int x = 1; x < image.width - 1; ++x) {
            const double r = static_cast<double>(gray_at(image, x - 1, y)) +
                             gray_at(image, x + 1, y) + gray_at(image, x, y - 1) +
                             gray_at(image, x, y + 1) - 4.0 * gray_at(image, x, y);
            sum += r;
            sum_sq += r * r;
            ++n;
        }
    }
    if (n == 0) {
        return 0.0;
    }
    const double mean = sum / static_cast<double>(n);
    return sum_sq / static_cast<double>(n) - mean * mean;
}

FilterVerdict filter_image(const RasterImage & image, const FilterConfig & cfg,
                           std::vector<std::uint64_t> & seen_hashes) {
    if (cfg.dark_threshold < 0.0f || cfg.blur_threshold < 0.0f || cfg.dup_hash_distance < 0) {
        throw Error("filter_image: thresholds must be non-negative");
    }
    FilterVerdict verdict;
    if (image.mean() < cfg.dark_threshold) {
        verdict.reasons.push_back(RejectReason::TooDark);
    }
    if (laplacian_variance(image) < cfg.blur_threshold) {
        verdict.reasons.push_back(RejectReason::Blurred);
    }
    const std::uint64_t hash = average_hash(image);
    for (std::uint64_t seen : seen_hashes) {
        if (std::popcount(hash ^ seen) <= cfg.dup_hash_distance) {
            verdict.reasons.push_back(RejectReason::Duplicate);
            break;
        }
    }
    seen_hashes.push_back(hash);
    verdict.keep = verdict.reasons.empty();
    return verdict;
}

} // namespace darkseg
