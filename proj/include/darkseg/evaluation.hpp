#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "darkseg/raster.hpp"

namespace darkseg {

/// |a n b| / |a u b|. Throws ShapeMismatchError on different dimensions.
double instance_iou(const BinaryMask & a, const BinaryMask & b);

struct ClassCounts {
    int tp = 0;
    int fp = 0;
    int fn = 0;
};

/// Instance-level matching bookkeeping for one image: accepted
/// (pred, gt, iou) pairs plus per-class confusion counts.
struct MatchResult {
    std::vector<std::tuple<int, int, double>> pairs;
    std::map<ClassId, ClassCounts> counts;
};

/// Detection-style greedy matching per class: predictions sorted by
/// descending score (ties by ascending index) each claim the unassigned
/// same-class ground truth with the highest IoU when that IoU reaches
/// iou_threshold. Matched = TP, leftover predictions = FP, leftover ground
/// truth = FN.
MatchResult match_instances(const InstanceSet & pred, const InstanceSet & gt,
                            double iou_threshold);

/// P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R); every 0/0 is 0.
double precision_score(int tp, int fp);
double recall_score(int tp, int fn);
double f1_score(int tp, int fp, int fn);

/// Class-level mIoU: for each class present in the ground truth, the IoU
/// between the unions of predicted and ground-truth masks of that class;
/// averaged over those classes only.
double mean_iou(const InstanceSet & pred, const InstanceSet & gt);

/// Relabels road, wall and roof instances to `surrounding`; masks untouched.
InstanceSet merge_surrounding(const InstanceSet & set);

struct EvalOptions {
    double iou_threshold = 0.5;
    bool merge_surrounding = false;
    /// Adds per-class pixel-level F1 (Dice on class union masks) columns.
    bool pixel_f1 = false;
};

struct PerClassMetrics {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double iou = 0.0;
    double pixel_f1 = 0.0;
};

struct PerImageMetrics {
    std::string image_id;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double f1 = 0.0;
    double miou = 0.0;
};

/// Corpus-level evaluation report. Aggregate F1 is micro-averaged over all
/// instance decisions; aggregate mIoU averages corpus-level per-class IoUs
/// (intersections and unions summed across images per class) over the
/// classes present in the ground truth.
struct EvalReport {
    EvalOptions options;
    std::map<ClassId, PerClassMetrics> per_class;
    std::vector<PerImageMetrics> per_image;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double miou = 0.0;
    /// image_ids skipped for a missing counterpart file.
    std::vector<std::string> skipped;
};

/// Evaluates prediction/ground-truth pairs already in memory. Pairs are
/// processed in the given order; per_image entries keep that order.
EvalReport evaluate_sets(const std::vector<std::pair<InstanceSet, InstanceSet>> & pred_gt,
                         const EvalOptions & options);

/// Directory variant: loads every instance-set JSON in both directories,
/// pairs them by image_id (not by filename), warns-and-skips ids present on
/// only one side, and evaluates in ascending image_id order.
EvalReport evaluate_dirs(const std::filesystem::path & pred_dir,
                         const std::filesystem::path & gt_dir, const EvalOptions & options);

std::string report_to_json(const EvalReport & report);
std::string report_to_csv(const EvalReport & report);
void save_report(const EvalReport & report, const std::filesystem::path & json_path);

/// Draws per-class colored mask overlays (fixed palette, 45% blend, solid
/// boundary) over the image; returns a 3-channel image.
RasterImage render_overlay(const RasterImage & image, const InstanceSet & set);

} // namespace darkseg
