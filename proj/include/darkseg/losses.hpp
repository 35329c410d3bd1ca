#pragma once

#include <array>
#include <map>
#include <vector>

#include "darkseg/raster.hpp"

namespace darkseg {

/// Denominator convention for the weighted Dice loss
///   L = 1 - sum_c w_c 2 TP_c / sum_c w_c D_c.
enum class DiceDenominator {
    /// D_c = 2 TP_c + FP_c + FN_c (soft |A|+|B|). Perfect match gives loss 0.
    SizeSum,
    /// D_c = TP_c + FP_c + FN_c (soft |A u B|). Perfect match gives loss -1;
    /// kept for comparison with the size-sum form.
    UnionArea,
};

struct LossConfig {
    /// Focal positive-class weight in [0,1].
    double alpha = 0.25;
    /// Focal focusing exponent, >= 0.
    double gamma_focal = 2.0;
    /// Per-class Dice weights; classes not listed weigh 1. Scaling every
    /// weight by the same constant leaves the loss unchanged (ratio form).
    std::map<ClassId, double> class_weights;
    /// Balance factor on the box-regression term.
    double lambda_box = 1.0;
    DiceDenominator dice_denominator = DiceDenominator::SizeSum;
    /// Probabilities are clamped to [prob_epsilon, 1-prob_epsilon] before any
    /// log so saturated predictions keep the loss finite. Overlap counts use
    /// the raw probabilities.
    double prob_epsilon = 1e-7;
};

/// One class channel of a soft mask prediction: per-pixel probabilities in
/// [0,1] against binary targets, both row-major over the same grid.
struct MaskChannel {
    ClassId cls = ClassId::Road;
    std::vector<double> probs;
    std::vector<double> targets; // 0 or 1
};

struct SoftMaskPrediction {
    int width = 0;
    int height = 0;
    std::vector<MaskChannel> channels;
};

/// Detection head outputs for one batch of ROIs. class_probs rows are
/// post-softmax and sum to 1; class_targets holds the true class index per
/// ROI with index 0 reserved for background. Background ROIs contribute no
/// box term. n_class / n_box override the averaging counts when nonzero;
/// by default both equal the ROI count.
struct DetectionPrediction {
    std::vector<std::vector<double>> class_probs;
    std::vector<int> class_targets;
    std::vector<std::array<double, 4>> box_params;
    std::vector<std::array<double, 4>> box_targets;
    int n_class = 0;
    int n_box = 0;
};

struct MaskLossResult {
    double value = 0.0;
    /// d(value)/d(probs), same shape as the prediction channels.
    std::vector<std::vector<double>> grad_probs;
};

struct DetectionLossResult {
    double value = 0.0;
    /// Gradient w.r.t. pre-softmax logits: (p - onehot(target)) / N_class.
    std::vector<std::vector<double>> grad_logits;
    /// Gradient w.r.t. box_params.
    std::vector<std::array<double, 4>> grad_box;
};

struct TotalLossResult {
    double value = 0.0;
    DetectionLossResult detection;
    MaskLossResult mask;
};

/// Classification plus box-regression loss:
///   (1/N_class) sum_i CE(p_i, y_i) + lambda (1/N_box) sum_i [y_i>0] smoothL1(t_i - t_i*)
/// where smoothL1 is 0.5 x^2 for |x|<1 and |x|-0.5 otherwise, summed over
/// the 4 box coordinates.
DetectionLossResult fast_rcnn_loss(const DetectionPrediction & pred, const LossConfig & cfg);

/// Weighted Dice loss over soft confusion counts
///   TP_c = sum p y,  FP_c = sum p (1-y),  FN_c = sum (1-p) y.
/// On binary probabilities the soft counts equal the integer confusion
/// counts exactly. A degenerate all-zero denominator (empty targets and
/// empty prediction) is defined as loss 0 with zero gradient.
MaskLossResult weighted_dice_loss(const SoftMaskPrediction & pred, const LossConfig & cfg);

/// Focal loss, target-conditioned per pixel and averaged over all pixels:
///   y=1:  -alpha (1-p)^gamma log p
///   y=0:  -(1-alpha) p^gamma log(1-p)
MaskLossResult focal_loss(const SoftMaskPrediction & pred, const LossConfig & cfg);

/// weighted_dice_loss + focal_loss; gradients add componentwise.
MaskLossResult enhanced_mask_loss(const SoftMaskPrediction & pred, const LossConfig & cfg);

/// fast_rcnn_loss + enhanced_mask_loss.
TotalLossResult total_loss(const DetectionPrediction & det, const SoftMaskPrediction & mask,
                           const LossConfig & cfg);

/// Mean squared per-sample difference. Throws ShapeMismatchError.
double mse_loss(const RasterImage & a, const RasterImage & b);

} // namespace darkseg
