#include "darkseg/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "darkseg/instance_json.hpp"

namespace darkseg {

using nlohmann::json;

double instance_iou(const BinaryMask & a, const BinaryMask & b) {
    if (a.width != b.width || a.height != b.height) {
        throw ShapeMismatchError("instance_iou: mask dimensions differ");
    }
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const bool va = a.bits[i] != 0;
        const bool vb = b.bits[i] != 0;
        inter += va && vb;
        uni += va || vb;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

MatchResult match_instances(const InstanceSet & pred, const InstanceSet & gt,
                            double iou_threshold) {
    if (pred.width != gt.width || pred.height != gt.height) {
        throw ShapeMismatchError("match_instances: instance sets have different dimensions");
    }

    MatchResult result;
    for (const Instance & inst : gt.instances) {
        result.counts[inst.cls]; // ensure the class appears even with 0 tp
    }

    std::vector<int> order(pred.instances.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int l, int r) {
        const float sl = pred.instances[l].score;
        const float sr = pred.instances[r].score;
        return sl != sr ? sl > sr : l < r;
    });

    std::vector<char> gt_used(gt.instances.size(), 0);
    for (const int ip : order) {
        const Instance & p = pred.instances[ip];
        double best_iou = 0.0;
        int best_gt = -1;
        for (std::size_t ig = 0; ig < gt.instances.size(); ++ig) {
            if (gt_used[ig] || gt.instances[ig].cls != p.cls) {
                continue;
            }
            const double iou = instance_iou(p.mask, gt.instances[ig].mask);
            if (iou > best_iou) {
                best_iou = iou;
                best_gt = static_cast<int>(ig);
            }
        }
        if (best_gt >= 0 && best_iou >= iou_threshold) {
            gt_used[best_gt] = 1;
            result.pairs.emplace_back(ip, best_gt, best_iou);
            result.counts[p.cls].tp += 1;
        } else {
            result.counts[p.cls].fp += 1;
        }
    }
    for (std::size_t ig = 0; ig < gt.instances.size(); ++ig) {
        if (!gt_used[ig]) {
            result.counts[gt.instances[ig].cls].fn += 1;
        }
    }
    return result;
}

double precision_score(int tp, int fp) {
    return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
}

double recall_score(int tp, int fn) {
    return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
}

double f1_score(int tp, int fp, int fn) {
    const double p = precision_score(tp, fp);
    const double r = recall_score(tp, fn);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

namespace {

struct ClassAreas {
    std::size_t intersection = 0;
    std::size_t union_ = 0;
    std::size_t pred_area = 0;
    std::size_t gt_area = 0;
};

/// Per-class union-mask overlap areas for one image. Classes present in
/// neither set are absent from the map.
std::map<ClassId, ClassAreas> class_overlap(const InstanceSet & pred, const InstanceSet & gt) {
    std::map<ClassId, ClassAreas> areas;
    const std::size_t pixels = static_cast<std::size_t>(gt.width) * gt.height;

    std::map<ClassId, std::vector<std::uint8_t>> pred_union;
    std::map<ClassId, std::vector<std::uint8_t>> gt_union;
    for (const Instance & inst : pred.instances) {
        auto & u = pred_union.try_emplace(inst.cls, pixels, 0).first->second;
        for (std::size_t i = 0; i < pixels; ++i) {
            u[i] |= inst.mask.bits[i];
        }
    }
    for (const Instance & inst : gt.instances) {
        auto & u = gt_union.try_emplace(inst.cls, pixels, 0).first->second;
        for (std::size_t i = 0; i < pixels; ++i) {
            u[i] |= inst.mask.bits[i];
        }
    }

    std::set<ClassId> classes;
    for (const auto & [cls, _] : pred_union) {
        classes.insert(cls);
    }
    for (const auto & [cls, _] : gt_union) {
        classes.insert(cls);
    }
    static const std::vector<std::uint8_t> kEmpty;
    for (ClassId cls : classes) {
        const auto pit = pred_union.find(cls);
        const auto git = gt_union.find(cls);
        const auto & pu = pit == pred_union.end() ? kEmpty : pit->second;
        const auto & gu = git == gt_union.end() ? kEmpty : git->second;
        ClassAreas a;
        for (std::size_t i = 0; i < pixels; ++i) {
            const bool vp = !pu.empty() && pu[i];
            const bool vg = !gu.empty() && gu[i];
            a.intersection += vp && vg;
            a.union_ += vp || vg;
            a.pred_area += vp;
            a.gt_area += vg;
        }
        areas[cls] = a;
    }
    return areas;
}

} // namespace

double mean_iou(const InstanceSet & pred, const InstanceSet & gt) {
    if (pred.width != gt.width || pred.height != gt.height) {
        throw ShapeMismatchError("mean_iou: instance sets have different dimensions");
    }
    const auto areas = class_overlap(pred, gt);
    std::set<ClassId> gt_classes;
    for (const Instance & inst : gt.instances) {
        gt_classes.insert(inst.cls);
    }
    if (gt_classes.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (ClassId cls : gt_classes) {
        const ClassAreas & a = areas.at(cls);
        sum += a.union_ == 0 ? 0.0
                             : static_cast<double>(a.intersection) /
                                   static_cast<double>(a.union_);
    }
    return sum / static_cast<double>(gt_classes.size());
}

InstanceSet merge_surrounding(const InstanceSet & set) {
    InstanceSet out = set;
    for (Instance & inst : out.instances) {
        if (inst.cls == ClassId::Road || inst.cls == ClassId::Wall ||
            inst.cls == ClassId::Roof) {
            inst.cls = ClassId::Surrounding;
        }
    }
    return out;
}

EvalReport evaluate_sets(const std::vector<std::pair<InstanceSet, InstanceSet>> & pred_gt,
                         const EvalOptions & options) {
    EvalReport report;
    report.options = options;

    std::map<ClassId, ClassAreas> corpus_areas;
    std::set<ClassId> gt_classes;

    for (const auto & [pred_raw, gt_raw] : pred_gt) {
        const InstanceSet pred =
            options.merge_surrounding ? merge_surrounding(pred_raw) : pred_raw;
        const InstanceSet gt = options.merge_surrounding ? merge_surrounding(gt_raw) : gt_raw;

        const MatchResult matches = match_instances(pred, gt, options.iou_threshold);

        PerImageMetrics image;
        image.image_id = gt.image_id.empty() ? pred.image_id : gt.image_id;
        for (const auto & [cls, counts] : matches.counts) {
            auto & agg = report.per_class[cls];
            agg.tp += counts.tp;
            agg.fp += counts.fp;
            agg.fn += counts.fn;
            image.tp += counts.tp;
            image.fp += counts.fp;
            image.fn += counts.fn;
        }
        image.f1 = f1_score(image.tp, image.fp, image.fn);
        image.miou = mean_iou(pred, gt);
        report.per_image.push_back(std::move(image));

        for (const auto & [cls, areas] : class_overlap(pred, gt)) {
            auto & agg = corpus_areas[cls];
            agg.intersection += areas.intersection;
            agg.union_ += areas.union_;
            agg.pred_area += areas.pred_area;
            agg.gt_area += areas.gt_area;
        }
        for (const Instance & inst : gt.instances) {
            gt_classes.insert(inst.cls);
        }
    }

    double iou_sum = 0.0;
    for (auto & [cls, metrics] : report.per_class) {
        metrics.precision = precision_score(metrics.tp, metrics.fp);
        metrics.recall = recall_score(metrics.tp, metrics.fn);
        metrics.f1 = f1_score(metrics.tp, metrics.fp, metrics.fn);
        const auto it = corpus_areas.find(cls);
        if (it != corpus_areas.end()) {
            const ClassAreas & a = it->second;
            metrics.iou = a.union_ == 0 ? 0.0
                                        : static_cast<double>(a.intersection) /
                                              static_cast<double>(a.union_);
            const std::size_t size_sum = a.pred_area + a.gt_area;
            metrics.pixel_f1 = size_sum == 0
                                   ? 0.0
                                   : 2.0 * static_cast<double>(a.intersection) /
                                         static_cast<double>(size_sum);
        }
        report.tp += metrics.tp;
        report.fp += metrics.fp;
        report.fn += metrics.fn;
        if (gt_classes.contains(cls)) {
            iou_sum += metrics.iou;
        }
    }
    report.precision = precision_score(report.tp, report.fp);
    report.recall = recall_score(report.tp, report.fn);
    report.f1 = f1_score(report.tp, report.fp, report.fn);
    report.miou = gt_classes.empty() ? 0.0 : iou_sum / static_cast<double>(gt_classes.size());
    return report;
}

namespace {

std::map<std::string, std::filesystem::path> index_by_image_id(
    const std::filesystem::path & dir) {
    std::map<std::string, std::filesystem::path> index;
    for (const auto & entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") {
            continue;
        }
        const InstanceSet set = load_instance_set(entry.path());
        index[set.image_id] = entry.path();
    }
    return index;
}

} // namespace

EvalReport evaluate_dirs(const std::filesystem::path & pred_dir,
                         const std::filesystem::path & gt_dir, const EvalOptions & options) {
    const auto pred_index = index_by_image_id(pred_dir);
    const auto gt_index = index_by_image_id(gt_dir);

    std::vector<std::string> skipped;
    std::vector<std::pair<InstanceSet, InstanceSet>> pairs;
    for (const auto & [image_id, gt_path] : gt_index) {
        const auto pit = pred_index.find(image_id);
        if (pit == pred_index.end()) {
            skipped.push_back(image_id);
            continue;
        }
        pairs.emplace_back(load_instance_set(pit->second), load_instance_set(gt_path));
    }
    for (const auto & [image_id, _] : pred_index) {
        if (!gt_index.contains(image_id)) {
            skipped.push_back(image_id);
        }
    }
    std::sort(skipped.begin(), skipped.end());

    EvalReport report = evaluate_sets(pairs, options);
    report.skipped = std::move(skipped);
    return report;
}

std::string report_to_json(const EvalReport & report) {
    json doc;
    doc["config"] = {{"iou_threshold", report.options.iou_threshold},
                     {"merge_surrounding", report.options.merge_surrounding},
                     {"pixel_f1", report.options.pixel_f1}};
    doc["aggregate"] = {{"tp", report.tp},         {"fp", report.fp},
                        {"fn", report.fn},         {"precision", report.precision},
                        {"recall", report.recall}, {"f1", report.f1},
                        {"miou", report.miou}};
    doc["per_class"] = json::object();
    for (const auto & [cls, m] : report.per_class) {
        json entry = {{"tp", m.tp},           {"fp", m.fp},
                      {"fn", m.fn},           {"precision", m.precision},
                      {"recall", m.recall},   {"f1", m.f1},
                      {"iou", m.iou}};
        if (report.options.pixel_f1) {
            entry["pixel_f1"] = m.pixel_f1;
        }
        doc["per_class"][std::string(class_name(cls))] = std::move(entry);
    }
    doc["per_image"] = json::array();
    for (const PerImageMetrics & m : report.per_image) {
        doc["per_image"].push_back({{"image_id", m.image_id},
                                    {"tp", m.tp},
                                    {"fp", m.fp},
                                    {"fn", m.fn},
                                    {"f1", m.f1},
                                    {"miou", m.miou}});
    }
    doc["skipped"] = report.skipped;
    return doc.dump(2);
}

std::string report_to_csv(const EvalReport & report) {
    std::ostringstream out;
    out << "class,tp,fp,fn,precision,recall,f1,iou";
    if (report.options.pixel_f1) {
        out << ",pixel_f1";
    }
    out << '\n';
    for (const auto & [cls, m] : report.per_class) {
        out << class_name(cls) << ',' << m.tp << ',' << m.fp << ',' << m.fn << ','
            << m.precision << ',' << m.recall << ',' << m.f1 << ',' << m.iou;
        if (report.options.pixel_f1) {
            out << ',' << m.pixel_f1;
        }
        out << '\n';
    }
    return out.str();
}

void save_report(const EvalReport & report, const std::filesystem::path & json_path) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
        throw DecodeError("cannot open for writing: " + json_path.string());
    }
    out << report_to_json(report) << '\n';
    std::filesystem::path csv_path = json_path;
    csv_path.replace_extension(".csv");
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) {
        throw DecodeError("cannot open for writing: " + csv_path.string());
    }
    csv << report_to_csv(report);
}

RasterImage render_overlay(const RasterImage & image, const InstanceSet & set) {
    // Fixed palette, one RGB color per class.
    static constexpr std::array<std::array<float, 3>, 7> kPalette = {{
        {0.90f, 0.10f, 0.10f}, // road
        {0.10f, 0.45f, 0.90f}, // wall
        {0.95f, 0.75f, 0.10f}, // roof
        {0.10f, 0.80f, 0.25f}, // people
        {0.70f, 0.20f, 0.85f}, // equipment
        {0.10f, 0.85f, 0.85f}, // corridor
        {0.60f, 0.60f, 0.60f}, // surrounding
    }};
    constexpr float kAlpha = 0.45f;

    RasterImage out(image.width, image.height, 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                out.at(x, y, c) = image.channels == 1 ? image.at(x, y) : image.at(x, y, c);
            }
        }
    }
    for (const Instance & inst : set.instances) {
        const auto & color = kPalette[static_cast<std::size_t>(inst.cls)];
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                if (!inst.mask.get(x, y)) {
                    continue;
                }
                const bool boundary =
                    x == 0 || y == 0 || x == image.width - 1 || y == image.height - 1 ||
                    !inst.mask.get(x - 1, y) || !inst.mask.get(x + 1, y) ||
                    !inst.mask.get(x, y - 1) || !inst.mask.get(x, y + 1);
                const float a = boundary ? 1.0f : kAlpha;
                for (int c = 0; c < 3; ++c) {
                    out.at(x, y, c) = (1.0f - a) * out.at(x, y, c) + a * color[c];
                }
            }
        }
    }
    return out;
}

} // namespace darkseg
