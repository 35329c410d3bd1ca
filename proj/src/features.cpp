#include "darkseg/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "darkseg/enhance.hpp"
#include "darkseg/rng.hpp"

namespace darkseg {

namespace {

/// Bresenham circle of radius 3, clockwise from 12 o'clock.
constexpr std::array<std::pair<int, int>, 16> kCircle = {{
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
    {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
}};

constexpr int kSegmentLength = 9;   // contiguous run required on the circle
constexpr int kOrientationRadius = 15;
constexpr int kPatternRadius = 13;  // keeps rotated samples inside the margin
constexpr int kEdgeMargin = 16;
constexpr std::uint64_t kPatternSeed = 0x0B5E55EDC0FFEE01ULL;

struct PatternPoint {
    std::int8_t x1, y1, x2, y2;
};

/// Fixed 256-pair comparison pattern: integer offsets drawn from an
/// isotropic Gaussian (sigma = radius/2, Irwin-Hall deviates) and
/// rejection-sampled into the radius-13 disc. Generated deterministically
/// from kPatternSeed so descriptors are identical across platforms.
const std::array<PatternPoint, 256> & comparison_pattern() {
    static const std::array<PatternPoint, 256> pattern = [] {
        std::array<PatternPoint, 256> out{};
        Rng rng(kPatternSeed);
        const double sigma = kPatternRadius / 2.0;
        auto sample = [&](std::int8_t & px, std::int8_t & py) {
            while (true) {
                const double gx = rng.gaussian() * sigma;
                const double gy = rng.gaussian() * sigma;
                const int ix = static_cast<int>(std::lround(gx));
                const int iy = static_cast<int>(std::lround(gy));
                if (ix * ix + iy * iy <= kPatternRadius * kPatternRadius) {
                    px = static_cast<std::int8_t>(ix);
                    py = static_cast<std::int8_t>(iy);
                    return;
                }
            }
        };
        for (auto & p : out) {
            do {
                sample(p.x1, p.y1);
                sample(p.x2, p.y2);
            } while (p.x1 == p.x2 && p.y1 == p.y2);
        }
        return out;
    }();
    return pattern;
}

/// Segment-test corner check; returns a contrast score (sum of absolute
/// differences over the best qualifying arc) or 0 when not a corner.
float segment_test_score(const RasterImage & img, int x, int y, float threshold) {
    const float center = img.at(x, y);
    std::array<int, 32> state; // 1 brighter, -1 darker, 0 neither; doubled for wrap
    std::array<float, 32> delta;
    for (int i = 0; i < 16; ++i) {
        const float v = img.at(x + kCircle[i].first, y + kCircle[i].second);
        const float d = v - center;
        int s = 0;
        if (d > threshold) {
            s = 1;
        } else if (d < -threshold) {
            s = -1;
        }
        state[i] = state[i + 16] = s;
        delta[i] = delta[i + 16] = std::abs(d);
    }
    float best = 0.0f;
    for (int sign : {1, -1}) {
        int run = 0;
        float run_sum = 0.0f;
        for (int i = 0; i < 32; ++i) {
            if (state[i] == sign) {
                ++run;
                run_sum += delta[i];
                if (run >= kSegmentLength) {
                    best = std::max(best, run_sum);
                }
                if (run == 16) { // full circle covered
                    break;
                }
            } else {
                run = 0;
                run_sum = 0.0f;
            }
        }
    }
    return best;
}

float harris_response(const RasterImage & img, int x, int y) {
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (int dy = -3; dy <= 3; ++dy) {
        for (int dx = -3; dx <= 3; ++dx) {
            const int px = x + dx;
            const int py = y + dy;
            const double gx = 0.5 * (img.at(px + 1, py) - img.at(px - 1, py));
            const double gy = 0.5 * (img.at(px, py + 1) - img.at(px, py - 1));
            sxx += gx * gx;
            syy += gy * gy;
            sxy += gx * gy;
        }
    }
    const double det = sxx * syy - sxy * sxy;
    const double trace = sxx + syy;
    return static_cast<float>(det - 0.04 * trace * trace);
}

float centroid_angle(const RasterImage & img, int x, int y) {
    double m10 = 0.0;
    double m01 = 0.0;
    for (int dy = -kOrientationRadius; dy <= kOrientationRadius; ++dy) {
        for (int dx = -kOrientationRadius; dx <= kOrientationRadius; ++dx) {
            if (dx * dx + dy * dy > kOrientationRadius * kOrientationRadius) {
                continue;
            }
            const double v = img.at(x + dx, y + dy);
            m10 += dx * v;
            m01 += dy * v;
        }
    }
    if (m10 == 0.0 && m01 == 0.0) {
        return 0.0f;
    }
    return static_cast<float>(std::atan2(m01, m10));
}

} // namespace

int descriptor_distance(const OrbFeature & a, const OrbFeature & b) {
    int distance = 0;
    for (int i = 0; i < 4; ++i) {
        std::uint64_t wa;
        std::uint64_t wb;
        std::memcpy(&wa, a.descriptor.data() + i * 8, 8);
        std::memcpy(&wb, b.descriptor.data() + i * 8, 8);
        distance += std::popcount(wa ^ wb);
    }
    return distance;
}

std::vector<OrbFeature> detect_orb(const RasterImage & image, const FusionConfig & cfg) {
    const RasterImage gray = max_channel(image);
    std::vector<OrbFeature> features;
    if (gray.width < 2 * kEdgeMargin || gray.height < 2 * kEdgeMargin) {
        return features;
    }

    // Segment-test scores inside the margin.
    RasterImage score(gray.width, gray.height, 1, 0.0f);
    for (int y = kEdgeMargin; y < gray.height - kEdgeMargin; ++y) {
        for (int x = kEdgeMargin; x < gray.width - kEdgeMargin; ++x) {
            score.at(x, y) = segment_test_score(gray, x, y, cfg.fast_threshold);
        }
    }

    // 3x3 non-max suppression, then Harris ranking.
    for (int y = kEdgeMargin; y < gray.height - kEdgeMargin; ++y) {
        for (int x = kEdgeMargin; x < gray.width - kEdgeMargin; ++x) {
            const float s = score.at(x, y);
            if (s <= 0.0f) {
                continue;
            }
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) {
                        continue;
                    }
                    const float n = score.at(x + dx, y + dy);
                    if (n > s || (n == s && (dy < 0 || (dy == 0 && dx < 0)))) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (!is_max) {
                continue;
            }
            OrbFeature f;
            f.x = static_cast<float>(x);
            f.y = static_cast<float>(y);
            f.response = harris_response(gray, x, y);
            features.push_back(f);
        }
    }

    std::sort(features.begin(), features.end(), [](const OrbFeature & a, const OrbFeature & b) {
        if (a.response != b.response) {
            return a.response > b.response;
        }
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    if (static_cast<int>(features.size()) > cfg.max_features) {
        features.resize(cfg.max_features);
    }

    // Orientation and descriptors come from a lightly smoothed copy.
    const RasterImage smooth = box_smooth(gray, 2);
    const auto & pattern = comparison_pattern();
    for (OrbFeature & f : features) {
        const int cx = static_cast<int>(f.x);
        const int cy = static_cast<int>(f.y);
        f.angle = centroid_angle(smooth, cx, cy);
        const double ca = std::cos(f.angle);
        const double sa = std::sin(f.angle);
        for (int bit = 0; bit < 256; ++bit) {
            const PatternPoint & p = pattern[bit];
            const int x1 = cx + static_cast<int>(std::lround(ca * p.x1 - sa * p.y1));
            const int y1 = cy + static_cast<int>(std::lround(sa * p.x1 + ca * p.y1));
            const int x2 = cx + static_cast<int>(std::lround(ca * p.x2 - sa * p.y2));
            const int y2 = cy + static_cast<int>(std::lround(sa * p.x2 + ca * p.y2));
            if (smooth.at(x1, y1) < smooth.at(x2, y2)) {
                f.descriptor[bit >> 3] |= static_cast<std::uint8_t>(1u << (bit & 7));
            }
        }
    }
    return features;
}

std::vector<std::pair<int, int>> match_features(const std::vector<OrbFeature> & a,
                                                const std::vector<OrbFeature> & b,
                                                const FusionConfig & cfg) {
    constexpr int kMinMatches = 4;
    std::vector<std::pair<int, int>> matches;
    if (a.empty() || b.empty()) {
        throw InsufficientMatchesError("match_features: empty feature list");
    }

    // Best b-index for every a, with the Lowe ratio test against the runner-up.
    std::vector<int> best_b(a.size(), -1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        int d1 = 257;
        int d2 = 257;
        int j1 = -1;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const int d = descriptor_distance(a[i], b[j]);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                j1 = static_cast<int>(j);
            } else if (d < d2) {
                d2 = d;
            }
        }
        if (j1 >= 0 && static_cast<float>(d1) < cfg.match_ratio * static_cast<float>(d2)) {
            best_b[i] = j1;
        }
    }

    // Mutual-best filtering makes the pairing one-to-one.
    std::vector<int> best_a(b.size(), -1);
    std::vector<int> best_a_dist(b.size(), 257);
    for (std::size_t j = 0; j < b.size(); ++j) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const int d = descriptor_distance(a[i], b[j]);
            if (d < best_a_dist[j]) {
                best_a_dist[j] = d;
                best_a[j] = static_cast<int>(i);
            }
        }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int j = best_b[i];
        if (j >= 0 && best_a[j] == static_cast<int>(i)) {
            matches.emplace_back(static_cast<int>(i), j);
        }
    }

    if (static_cast<int>(matches.size()) < kMinMatches) {
        throw InsufficientMatchesError("match_features: only " +
                                       std::to_string(matches.size()) +
                                       " matches survived filtering");
    }
    return matches;
}

} // namespace darkseg
