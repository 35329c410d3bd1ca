#include "darkseg/transform.hpp"

#include <cmath>

#include "darkseg/rng.hpp"

namespace darkseg {

std::pair<double, double> PlanarTransform::apply(double x, double y) const {
    if (kind == TransformKind::Identity) {
        return {x, y};
    }
    const double c = std::cos(rotation) * scale;
    const double s = std::sin(rotation) * scale;
    return {c * x - s * y + tx, s * x + c * y + ty};
}

PlanarTransform PlanarTransform::inverse() const {
    if (kind == TransformKind::Identity) {
        return identity();
    }
    PlanarTransform inv;
    inv.kind = TransformKind::Similarity;
    inv.scale = 1.0 / scale;
    inv.rotation = -rotation;
    const double c = std::cos(inv.rotation) * inv.scale;
    const double s = std::sin(inv.rotation) * inv.scale;
    inv.tx = -(c * tx - s * ty);
    inv.ty = -(s * tx + c * ty);
    return inv;
}

PlanarTransform fit_similarity(const std::vector<std::pair<double, double>> & from,
                               const std::vector<std::pair<double, double>> & to) {
    if (from.size() < 2 || from.size() != to.size()) {
        throw Error("fit_similarity: need at least 2 point pairs");
    }
    const double n = static_cast<double>(from.size());
    double cx_f = 0.0, cy_f = 0.0, cx_t = 0.0, cy_t = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        cx_f += from[i].first;
        cy_f += from[i].second;
        cx_t += to[i].first;
        cy_t += to[i].second;
    }
    cx_f /= n;
    cy_f /= n;
    cx_t /= n;
    cy_t /= n;

    double dot = 0.0;   // sum <p~, q~>
    double cross = 0.0; // sum p~ x q~
    double norm = 0.0;  // sum |p~|^2
    for (std::size_t i = 0; i < from.size(); ++i) {
        const double px = from[i].first - cx_f;
        const double py = from[i].second - cy_f;
        const double qx = to[i].first - cx_t;
        const double qy = to[i].second - cy_t;
        dot += px * qx + py * qy;
        cross += px * qy - py * qx;
        norm += px * px + py * py;
    }
    if (norm <= 0.0) {
        throw Error("fit_similarity: degenerate source points");
    }

    PlanarTransform t;
    t.kind = TransformKind::Similarity;
    t.rotation = std::atan2(cross, dot);
    t.scale = std::sqrt(dot * dot + cross * cross) / norm;
    const double c = std::cos(t.rotation) * t.scale;
    const double s = std::sin(t.rotation) * t.scale;
    t.tx = cx_t - (c * cx_f - s * cy_f);
    t.ty = cy_t - (s * cx_f + c * cy_f);
    return t;
}

PlanarTransform estimate_transform(const std::vector<std::pair<int, int>> & matches,
                                   const std::vector<OrbFeature> & a,
                                   const std::vector<OrbFeature> & b,
                                   const FusionConfig & cfg) {
    if (matches.size() < 4) {
        throw AlignmentFailedError("estimate_transform: need at least 4 matches");
    }

    std::vector<std::pair<double, double>> src(matches.size());
    std::vector<std::pair<double, double>> dst(matches.size());
    for (std::size_t i = 0; i < matches.size(); ++i) {
        src[i] = {a[matches[i].first].x, a[matches[i].first].y};
        dst[i] = {b[matches[i].second].x, b[matches[i].second].y};
    }

    const double inlier_sq =
        static_cast<double>(cfg.ransac_inlier_px) * cfg.ransac_inlier_px;
    const auto count_inliers = [&](const PlanarTransform & t, std::vector<char> & flags) {
        int inliers = 0;
        for (std::size_t i = 0; i < src.size(); ++i) {
            const auto [px, py] = t.apply(src[i].first, src[i].second);
            const double dx = px - dst[i].first;
            const double dy = py - dst[i].second;
            const bool in = dx * dx + dy * dy <= inlier_sq;
            flags[i] = in;
            inliers += in;
        }
        return inliers;
    };

    Rng rng(mix_seed(cfg.seed, 0x7261736163ULL));
    const std::uint32_t n = static_cast<std::uint32_t>(matches.size());
    int best_inliers = 0;
    std::vector<char> flags(matches.size());
    std::vector<char> best_flags(matches.size());
    for (int iter = 0; iter < cfg.ransac_iters; ++iter) {
        const std::uint32_t i = rng.below(n);
        std::uint32_t j = rng.below(n);
        if (i == j) {
            continue;
        }
        const double dx = src[i].first - src[j].first;
        const double dy = src[i].second - src[j].second;
        if (dx * dx + dy * dy < 4.0) { // too close for a stable hypothesis
            continue;
        }
        PlanarTransform hyp;
        try {
            hyp = fit_similarity({src[i], src[j]}, {dst[i], dst[j]});
        } catch (const Error &) {
            continue;
        }
        if (hyp.scale < 0.1 || hyp.scale > 10.0) {
            continue;
        }
        const int inliers = count_inliers(hyp, flags);
        if (inliers > best_inliers) {
            best_inliers = inliers;
            best_flags = flags;
        }
    }

    if (best_inliers < 2 ||
        static_cast<double>(best_inliers) <
            cfg.min_inlier_ratio * static_cast<double>(matches.size())) {
        throw AlignmentFailedError("estimate_transform: inlier ratio below threshold");
    }

    std::vector<std::pair<double, double>> in_src;
    std::vector<std::pair<double, double>> in_dst;
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (best_flags[i]) {
            in_src.push_back(src[i]);
            in_dst.push_back(dst[i]);
        }
    }
    PlanarTransform refined = fit_similarity(in_src, in_dst);
    if (refined.scale < cfg.min_scale || refined.scale > cfg.max_scale) {
        throw AlignmentFailedError("estimate_transform: scale outside the trusted range");
    }
    return refined;
}

BinaryMask warp_mask(const BinaryMask & mask, const PlanarTransform & t) {
    if (t.kind == TransformKind::Identity) {
        return mask;
    }
    const PlanarTransform inv = t.inverse();
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const auto [sx, sy] = inv.apply(x, y);
            const int ix = static_cast<int>(std::lround(sx));
            const int iy = static_cast<int>(std::lround(sy));
            if (ix >= 0 && ix < mask.width && iy >= 0 && iy < mask.height) {
                out.set(x, y, mask.get(ix, iy));
            }
        }
    }
    return out;
}

RasterImage warp_image(const RasterImage & image, const PlanarTransform & t) {
    if (t.kind == TransformKind::Identity) {
        return image;
    }
    const PlanarTransform inv = t.inverse();
    RasterImage out(image.width, image.height, image.channels, 0.0f);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const auto [sx, sy] = inv.apply(x, y);
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            if (x0 < 0 || x0 + 1 >= image.width || y0 < 0 || y0 + 1 >= image.height) {
                continue;
            }
            const double fx = sx - x0;
            const double fy = sy - y0;
            for (int c = 0; c < image.channels; ++c) {
                const double v00 = image.at(x0, y0, c);
                const double v10 = image.at(x0 + 1, y0, c);
                const double v01 = image.at(x0, y0 + 1, c);
                const double v11 = image.at(x0 + 1, y0 + 1, c);
                const double v = v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) +
                                 v01 * (1 - fx) * fy + v11 * fx * fy;
                out.at(x, y, c) = static_cast<float>(v);
            }
        }
    }
    return out;
}

} // namespace darkseg
