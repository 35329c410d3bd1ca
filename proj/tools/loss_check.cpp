#include "loss_check.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "darkseg/losses.hpp"
#include "darkseg/rng.hpp"

namespace darkseg::cli {

namespace {

constexpr double kStep = 1e-5;
constexpr double kMaxRelError = 1e-4;

double rel_error(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
    return std::abs(a - b) / scale;
}

SoftMaskPrediction random_mask_prediction(Rng & rng, int side, int channels) {
    SoftMaskPrediction pred;
    pred.width = side;
    pred.height = side;
    for (int c = 0; c < channels; ++c) {
        MaskChannel ch;
        ch.cls = static_cast<ClassId>(c % 6);
        for (int i = 0; i < side * side; ++i) {
            ch.probs.push_back(0.05 + 0.9 * rng.uniform01());
            ch.targets.push_back(rng.uniform01() < 0.5 ? 0.0 : 1.0);
        }
        pred.channels.push_back(std::move(ch));
    }
    return pred;
}

/// Max relative error between an analytic mask-loss gradient and central
/// finite differences at `points` random coordinates.
double check_mask_loss(
    const std::function<MaskLossResult(const SoftMaskPrediction &)> & loss, Rng & rng,
    int points) {
    double worst = 0.0;
    for (int p = 0; p < points; ++p) {
        SoftMaskPrediction pred = random_mask_prediction(rng, 6, 2);
        const MaskLossResult analytic = loss(pred);

        const std::size_t c = rng.below(static_cast<std::uint32_t>(pred.channels.size()));
        const std::size_t i =
            rng.below(static_cast<std::uint32_t>(pred.channels[c].probs.size()));

        const double saved = pred.channels[c].probs[i];
        pred.channels[c].probs[i] = saved + kStep;
        const double up = loss(pred).value;
        pred.channels[c].probs[i] = saved - kStep;
        const double down = loss(pred).value;
        pred.channels[c].probs[i] = saved;

        const double fd = (up - down) / (2.0 * kStep);
        worst = std::max(worst, rel_error(analytic.grad_probs[c][i], fd));
    }
    return worst;
}

std::vector<double> softmax(const std::vector<double> & logits) {
    double max_logit = logits[0];
    for (double v : logits) {
        max_logit = std::max(max_logit, v);
    }
    double sum = 0.0;
    std::vector<double> probs(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - max_logit);
        sum += probs[i];
    }
    for (double & p : probs) {
        p /= sum;
    }
    return probs;
}

double check_detection_loss(const LossConfig & cfg, Rng & rng, int points) {
    constexpr int kRois = 3;
    constexpr int kClasses = 4;
    double worst = 0.0;
    for (int p = 0; p < points; ++p) {
        std::vector<std::vector<double>> logits(kRois, std::vector<double>(kClasses));
        DetectionPrediction pred;
        pred.class_targets.resize(kRois);
        for (int r = 0; r < kRois; ++r) {
            for (int c = 0; c < kClasses; ++c) {
                logits[r][c] = 2.0 * rng.uniform01() - 1.0;
            }
            pred.class_targets[r] = static_cast<int>(rng.below(kClasses));
            std::array<double, 4> box{};
            std::array<double, 4> target{};
            for (int k = 0; k < 4; ++k) {
                // Residuals stay clear of the smooth-l1 kink at |x| = 1.
                box[k] = 1.8 * rng.uniform01() - 0.9;
                target[k] = 0.0;
            }
            pred.box_params.push_back(box);
            pred.box_targets.push_back(target);
        }
        const auto eval = [&](const std::vector<std::vector<double>> & z,
                              const std::vector<std::array<double, 4>> & boxes) {
            DetectionPrediction q = pred;
            q.box_params = boxes;
            q.class_probs.clear();
            for (const auto & row : z) {
                q.class_probs.push_back(softmax(row));
            }
            return fast_rcnn_loss(q, cfg);
        };
        const DetectionLossResult analytic = eval(logits, pred.box_params);

        // One random logit coordinate.
        {
            const std::uint32_t r = rng.below(kRois);
            const std::uint32_t c = rng.below(kClasses);
            auto perturbed = logits;
            perturbed[r][c] += kStep;
            const double up = eval(perturbed, pred.box_params).value;
            perturbed[r][c] -= 2.0 * kStep;
            const double down = eval(perturbed, pred.box_params).value;
            const double fd = (up - down) / (2.0 * kStep);
            worst = std::max(worst, rel_error(analytic.grad_logits[r][c], fd));
        }
        // One random box coordinate on a foreground ROI, when there is one.
        std::vector<int> foreground;
        for (int r = 0; r < kRois; ++r) {
            if (pred.class_targets[r] != 0) {
                foreground.push_back(r);
            }
        }
        if (!foreground.empty()) {
            const int r = foreground[rng.below(static_cast<std::uint32_t>(foreground.size()))];
            const std::uint32_t k = rng.below(4);
            auto boxes = pred.box_params;
            boxes[r][k] += kStep;
            const double up = eval(logits, boxes).value;
            boxes[r][k] -= 2.0 * kStep;
            const double down = eval(logits, boxes).value;
            const double fd = (up - down) / (2.0 * kStep);
            worst = std::max(worst, rel_error(analytic.grad_box[r][k], fd));
        }
    }
    return worst;
}

} // namespace

bool run_loss_check(std::uint64_t seed, bool verbose) {
    constexpr int kPoints = 100;
    LossConfig cfg;

    struct Entry {
        std::string name;
        double error;
    };
    std::vector<Entry> entries;

    {
        Rng rng(mix_seed(seed, 1));
        LossConfig size_sum = cfg;
        size_sum.dice_denominator = DiceDenominator::SizeSum;
        entries.push_back({"weighted-dice (size-sum)",
                           check_mask_loss(
                               [&](const SoftMaskPrediction & p) {
                                   return weighted_dice_loss(p, size_sum);
                               },
                               rng, kPoints)});
    }
    {
        Rng rng(mix_seed(seed, 2));
        LossConfig union_mode = cfg;
        union_mode.dice_denominator = DiceDenominator::UnionArea;
        entries.push_back({"weighted-dice (union)",
                           check_mask_loss(
                               [&](const SoftMaskPrediction & p) {
                                   return weighted_dice_loss(p, union_mode);
                               },
                               rng, kPoints)});
    }
    {
        Rng rng(mix_seed(seed, 3));
        entries.push_back(
            {"focal", check_mask_loss(
                          [&](const SoftMaskPrediction & p) { return focal_loss(p, cfg); },
                          rng, kPoints)});
    }
    {
        Rng rng(mix_seed(seed, 4));
        entries.push_back({"enhanced-mask",
                           check_mask_loss(
                               [&](const SoftMaskPrediction & p) {
                                   return enhanced_mask_loss(p, cfg);
                               },
                               rng, kPoints)});
    }
    {
        Rng rng(mix_seed(seed, 5));
        entries.push_back({"fast-rcnn", check_detection_loss(cfg, rng, kPoints)});
    }
    {
        // Total loss: mask side through the combined objective.
        Rng rng(mix_seed(seed, 6));
        DetectionPrediction det;
        det.class_probs = {{0.7, 0.2, 0.1}};
        det.class_targets = {1};
        det.box_params = {{0.2, -0.3, 0.1, 0.4}};
        det.box_targets = {{0.0, 0.0, 0.0, 0.0}};
        entries.push_back({"total",
                           check_mask_loss(
                               [&](const SoftMaskPrediction & p) {
                                   const TotalLossResult r = total_loss(det, p, cfg);
                                   return MaskLossResult{r.value, r.mask.grad_probs};
                               },
                               rng, kPoints)});
    }

    bool ok = true;
    for (const Entry & e : entries) {
        const bool pass = e.error < kMaxRelError;
        ok = ok && pass;
        if (verbose || !pass) {
            std::printf("%-24s max relative error %.3e  %s\n", e.name.c_str(), e.error,
                        pass ? "ok" : "FAIL");
        } else {
            std::printf("%-24s max relative error %.3e  ok\n", e.name.c_str(), e.error);
        }
    }
    return ok;
}

} // namespace darkseg::cli
