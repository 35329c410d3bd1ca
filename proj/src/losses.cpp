#include "darkseg/losses.hpp"

#include <algorithm>
#include <cmath>

namespace darkseg {

namespace {

double clamp_prob(double p, double eps) {
    return std::clamp(p, eps, 1.0 - eps);
}

double class_weight(const LossConfig & cfg, ClassId cls) {
    const auto it = cfg.class_weights.find(cls);
    return it == cfg.class_weights.end() ? 1.0 : it->second;
}

void check_config(const LossConfig & cfg) {
    if (cfg.alpha < 0.0 || cfg.alpha > 1.0 || cfg.gamma_focal < 0.0 || cfg.lambda_box < 0.0) {
        throw Error("loss config requires alpha in [0,1], gamma >= 0, lambda >= 0");
    }
    for (const auto & [cls, w] : cfg.class_weights) {
        if (!(w > 0.0)) {
            throw Error("loss config requires positive class weights");
        }
    }
}

double smooth_l1(double x) {
    const double ax = std::abs(x);
    return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

double smooth_l1_grad(double x) {
    const double ax = std::abs(x);
    return ax < 1.0 ? x : (x > 0.0 ? 1.0 : -1.0);
}

} // namespace

DetectionLossResult fast_rcnn_loss(const DetectionPrediction & pred, const LossConfig & cfg) {
    check_config(cfg);
    const std::size_t rois = pred.class_probs.size();
    DetectionLossResult result;
    result.grad_logits.resize(rois);
    result.grad_box.assign(rois, {0.0, 0.0, 0.0, 0.0});
    if (rois == 0) {
        return result;
    }

    const double n_class = pred.n_class > 0 ? pred.n_class : static_cast<double>(rois);
    const double n_box = pred.n_box > 0 ? pred.n_box : static_cast<double>(rois);

    double class_sum = 0.0;
    double box_sum = 0.0;
    for (std::size_t i = 0; i < rois; ++i) {
        const auto & probs = pred.class_probs[i];
        const int target = pred.class_targets[i];

        double row_sum = 0.0;
        for (double p : probs) {
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > 1e-6) {
            throw Error("fast_rcnn_loss: class probabilities must sum to 1");
        }

        class_sum += -std::log(clamp_prob(probs[target], cfg.prob_epsilon));
        auto & g = result.grad_logits[i];
        g.resize(probs.size());
        for (std::size_t j = 0; j < probs.size(); ++j) {
            g[j] = (probs[j] - (static_cast<int>(j) == target ? 1.0 : 0.0)) / n_class;
        }

        const bool foreground = target != 0;
        if (foreground) {
            for (int k = 0; k < 4; ++k) {
                const double r = pred.box_params[i][k] - pred.box_targets[i][k];
                box_sum += smooth_l1(r);
                result.grad_box[i][k] = cfg.lambda_box * smooth_l1_grad(r) / n_box;
            }
        }
    }
    result.value = class_sum / n_class + cfg.lambda_box * box_sum / n_box;
    return result;
}

MaskLossResult weighted_dice_loss(const SoftMaskPrediction & pred, const LossConfig & cfg) {
    check_config(cfg);
    MaskLossResult result;
    result.grad_probs.resize(pred.channels.size());

    // numerator N = sum_c w_c 2 TP_c, denominator D per the configured mode.
    double num = 0.0;
    double den = 0.0;
    std::vector<double> weights(pred.channels.size());
    for (std::size_t c = 0; c < pred.channels.size(); ++c) {
        const MaskChannel & ch = pred.channels[c];
        result.grad_probs[c].assign(ch.probs.size(), 0.0);
        weights[c] = class_weight(cfg, ch.cls);

        double tp = 0.0;
        double fp = 0.0;
        double fn = 0.0;
        for (std::size_t i = 0; i < ch.probs.size(); ++i) {
            const double p = ch.probs[i];
            const double y = ch.targets[i];
            tp += p * y;
            fp += p * (1.0 - y);
            fn += (1.0 - p) * y;
        }
        num += weights[c] * 2.0 * tp;
        den += weights[c] * (cfg.dice_denominator == DiceDenominator::SizeSum
                                 ? 2.0 * tp + fp + fn
                                 : tp + fp + fn);
    }

    if (den <= 0.0) {
        // Empty targets against an all-zero prediction: nothing to overlap.
        result.value = 0.0;
        return result;
    }

    result.value = 1.0 - num / den;

    // d num / d p = w_c 2 y.  d den / d p = w_c for the size-sum mode
    // (2y + (1-y) - y), and w_c (1-y) for the union mode (y + (1-y) - y).
    const double den_sq = den * den;
    for (std::size_t c = 0; c < pred.channels.size(); ++c) {
        const MaskChannel & ch = pred.channels[c];
        const double w = weights[c];
        for (std::size_t i = 0; i < ch.probs.size(); ++i) {
            const double y = ch.targets[i];
            const double dnum = w * 2.0 * y;
            const double dden =
                cfg.dice_denominator == DiceDenominator::SizeSum ? w : w * (1.0 - y);
            result.grad_probs[c][i] = -(dnum * den - num * dden) / den_sq;
        }
    }
    return result;
}

MaskLossResult focal_loss(const SoftMaskPrediction & pred, const LossConfig & cfg) {
    check_config(cfg);
    MaskLossResult result;
    result.grad_probs.resize(pred.channels.size());

    std::size_t total = 0;
    for (const MaskChannel & ch : pred.channels) {
        total += ch.probs.size();
    }
    if (total == 0) {
        return result;
    }
    const double inv_n = 1.0 / static_cast<double>(total);
    const double alpha = cfg.alpha;
    const double gamma = cfg.gamma_focal;

    double sum = 0.0;
    for (std::size_t c = 0; c < pred.channels.size(); ++c) {
        const MaskChannel & ch = pred.channels[c];
        result.grad_probs[c].assign(ch.probs.size(), 0.0);
        for (std::size_t i = 0; i < ch.probs.size(); ++i) {
            const double p = clamp_prob(ch.probs[i], cfg.prob_epsilon);
            const double y = ch.targets[i];
            if (y > 0.5) {
                const double q = 1.0 - p;
                const double mod = std::pow(q, gamma);
                sum += -alpha * mod * std::log(p);
                // d/dp [-a (1-p)^g log p] = a g (1-p)^(g-1) log p - a (1-p)^g / p
                const double dmod = gamma > 0.0 ? gamma * std::pow(q, gamma - 1.0) : 0.0;
                result.grad_probs[c][i] = (alpha * dmod * std::log(p) - alpha * mod / p) * inv_n;
            } else {
                const double mod = std::pow(p, gamma);
                sum += -(1.0 - alpha) * mod * std::log(1.0 - p);
                const double dmod = gamma > 0.0 ? gamma * std::pow(p, gamma - 1.0) : 0.0;
                result.grad_probs[c][i] =
                    (-(1.0 - alpha) * dmod * std::log(1.0 - p) + (1.0 - alpha) * mod / (1.0 - p)) *
                    inv_n;
            }
        }
    }
    result.value = sum * inv_n;
    return result;
}

MaskLossResult enhanced_mask_loss(const SoftMaskPrediction & pred, const LossConfig & cfg) {
    MaskLossResult dice = weighted_dice_loss(pred, cfg);
    const MaskLossResult focal = focal_loss(pred, cfg);

    dice.value += focal.value;
    for (std::size_t c = 0; c < dice.grad_probs.size(); ++c) {
        for (std::size_t i = 0; i < dice.grad_probs[c].size(); ++i) {
            dice.grad_probs[c][i] += focal.grad_probs[c][i];
        }
    }
    return dice;
}

TotalLossResult total_loss(const DetectionPrediction & det, const SoftMaskPrediction & mask,
                           const LossConfig & cfg) {
    TotalLossResult result;
    result.detection = fast_rcnn_loss(det, cfg);
    result.mask = enhanced_mask_loss(mask, cfg);
    result.value = result.detection.value + result.mask.value;
    return result;
}

double mse_loss(const RasterImage & a, const RasterImage & b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
        throw ShapeMismatchError("mse_loss: image shapes differ");
    }
    if (a.data.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - b.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.data.size());
}

} // namespace darkseg
