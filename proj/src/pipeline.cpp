#include "darkseg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include <json.hpp>

#include "darkseg/fusion.hpp"
#include "darkseg/image_io.hpp"
#include "darkseg/instance_json.hpp"
#include "darkseg/mock_segment.hpp"
#include "darkseg/rng.hpp"
#include "darkseg/version.hpp"

namespace darkseg {

using nlohmann::json;

namespace {

template <typename T>
void get_if_present(const json & j, const char * key, T & out) {
    if (j.contains(key) && !j.at(key).is_null()) {
        j.at(key).get_to(out);
    }
}

json enhance_to_json(const EnhanceConfig & c) {
    json j{{"eps_floor", c.eps_floor},
           {"smoothing_radius", c.smoothing_radius},
           {"gamma", c.gamma},
           {"median_restore", c.median_restore}};
    j["target_mean"] = c.target_mean ? json(*c.target_mean) : json(nullptr);
    return j;
}

void enhance_from_json(const json & j, EnhanceConfig & c) {
    get_if_present(j, "eps_floor", c.eps_floor);
    get_if_present(j, "smoothing_radius", c.smoothing_radius);
    get_if_present(j, "gamma", c.gamma);
    get_if_present(j, "median_restore", c.median_restore);
    if (j.contains("target_mean") && !j.at("target_mean").is_null()) {
        c.target_mean = j.at("target_mean").get<float>();
    }
}

json degrade_to_json(const DegradeConfig & c) {
    return {{"noise_sigma", c.noise_sigma},
            {"brightness_factor", c.brightness_factor},
            {"contrast_factor", c.contrast_factor}};
}

void degrade_from_json(const json & j, DegradeConfig & c) {
    get_if_present(j, "noise_sigma", c.noise_sigma);
    get_if_present(j, "brightness_factor", c.brightness_factor);
    get_if_present(j, "contrast_factor", c.contrast_factor);
}

json filter_to_json(const FilterConfig & c) {
    return {{"dark_threshold", c.dark_threshold},
            {"blur_threshold", c.blur_threshold},
            {"dup_hash_distance", c.dup_hash_distance}};
}

void filter_from_json(const json & j, FilterConfig & c) {
    get_if_present(j, "dark_threshold", c.dark_threshold);
    get_if_present(j, "blur_threshold", c.blur_threshold);
    get_if_present(j, "dup_hash_distance", c.dup_hash_distance);
}

json fusion_to_json(const FusionConfig & c) {
    json classes = json::array();
    for (ClassId cls : c.grid_rule_classes) {
        classes.push_back(std::string(class_name(cls)));
    }
    return {{"max_features", c.max_features},
            {"fast_threshold", c.fast_threshold},
            {"match_ratio", c.match_ratio},
            {"ransac_iters", c.ransac_iters},
            {"ransac_inlier_px", c.ransac_inlier_px},
            {"min_inlier_ratio", c.min_inlier_ratio},
            {"pair_iou_min", c.pair_iou_min},
            {"keep_unmatched", c.keep_unmatched},
            {"struct_elem", c.struct_elem},
            {"symmetric_warp", c.symmetric_warp},
            {"force_identity", c.force_identity},
            {"grid_rows", c.grid_rows},
            {"grid_cols", c.grid_cols},
            {"grid_row_fraction", c.grid_row_fraction},
            {"grid_rule_classes", classes}};
}

void fusion_from_json(const json & j, FusionConfig & c) {
    get_if_present(j, "max_features", c.max_features);
    get_if_present(j, "fast_threshold", c.fast_threshold);
    get_if_present(j, "match_ratio", c.match_ratio);
    get_if_present(j, "ransac_iters", c.ransac_iters);
    get_if_present(j, "ransac_inlier_px", c.ransac_inlier_px);
    get_if_present(j, "min_inlier_ratio", c.min_inlier_ratio);
    get_if_present(j, "pair_iou_min", c.pair_iou_min);
    get_if_present(j, "keep_unmatched", c.keep_unmatched);
    get_if_present(j, "struct_elem", c.struct_elem);
    get_if_present(j, "symmetric_warp", c.symmetric_warp);
    get_if_present(j, "force_identity", c.force_identity);
    get_if_present(j, "grid_rows", c.grid_rows);
    get_if_present(j, "grid_cols", c.grid_cols);
    get_if_present(j, "grid_row_fraction", c.grid_row_fraction);
    if (j.contains("grid_rule_classes")) {
        c.grid_rule_classes.clear();
        for (const json & name : j.at("grid_rule_classes")) {
            const auto cls = class_from_name(name.get<std::string>());
            if (!cls) {
                throw DecodeError("config: unknown class in grid_rule_classes: " +
                                  name.get<std::string>());
            }
            c.grid_rule_classes.insert(*cls);
        }
    }
}

json loss_to_json(const LossConfig & c) {
    json weights = json::object();
    for (const auto & [cls, w] : c.class_weights) {
        weights[std::string(class_name(cls))] = w;
    }
    return {{"alpha", c.alpha},
            {"gamma_focal", c.gamma_focal},
            {"lambda_box", c.lambda_box},
            {"dice_denominator",
             c.dice_denominator == DiceDenominator::SizeSum ? "size-sum" : "union"},
            {"prob_epsilon", c.prob_epsilon},
            {"class_weights", weights}};
}

void loss_from_json(const json & j, LossConfig & c) {
    get_if_present(j, "alpha", c.alpha);
    get_if_present(j, "gamma_focal", c.gamma_focal);
    get_if_present(j, "lambda_box", c.lambda_box);
    get_if_present(j, "prob_epsilon", c.prob_epsilon);
    if (j.contains("dice_denominator")) {
        const std::string mode = j.at("dice_denominator").get<std::string>();
        if (mode == "size-sum") {
            c.dice_denominator = DiceDenominator::SizeSum;
        } else if (mode == "union") {
            c.dice_denominator = DiceDenominator::UnionArea;
        } else {
            throw DecodeError("config: dice_denominator must be 'size-sum' or 'union'");
        }
    }
    if (j.contains("class_weights")) {
        c.class_weights.clear();
        for (const auto & [name, w] : j.at("class_weights").items()) {
            const auto cls = class_from_name(name);
            if (!cls) {
                throw DecodeError("config: unknown class in class_weights: " + name);
            }
            c.class_weights[*cls] = w.get<double>();
        }
    }
}

json eval_to_json(const EvalOptions & c) {
    return {{"iou_threshold", c.iou_threshold},
            {"merge_surrounding", c.merge_surrounding},
            {"pixel_f1", c.pixel_f1}};
}

void eval_from_json(const json & j, EvalOptions & c) {
    get_if_present(j, "iou_threshold", c.iou_threshold);
    get_if_present(j, "merge_surrounding", c.merge_surrounding);
    get_if_present(j, "pixel_f1", c.pixel_f1);
}

} // namespace

std::string pipeline_config_to_json(const PipelineConfig & cfg) {
    json doc;
    doc["seed"] = cfg.seed;
    doc["workers"] = cfg.workers;
    doc["run_filter"] = cfg.run_filter;
    doc["paths"] = {{"input", cfg.paths.input_dir},
                    {"output", cfg.paths.output_dir},
                    {"pred_a", cfg.paths.pred_a_dir},
                    {"pred_b", cfg.paths.pred_b_dir},
                    {"gt", cfg.paths.gt_dir}};
    doc["enhance"] = enhance_to_json(cfg.enhance);
    doc["degrade"] = degrade_to_json(cfg.degrade);
    doc["filter"] = filter_to_json(cfg.filter);
    doc["fusion"] = fusion_to_json(cfg.fusion);
    doc["loss"] = loss_to_json(cfg.loss);
    doc["eval"] = eval_to_json(cfg.eval);
    doc["mock"] = {{"epsilon_a", cfg.mock.epsilon_a}, {"epsilon_b", cfg.mock.epsilon_b}};
    return doc.dump(2);
}

PipelineConfig pipeline_config_from_json(const std::string & text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception & e) {
        throw DecodeError(std::string("config: invalid JSON: ") + e.what());
    }
    PipelineConfig cfg;
    try {
        get_if_present(doc, "seed", cfg.seed);
        get_if_present(doc, "workers", cfg.workers);
        get_if_present(doc, "run_filter", cfg.run_filter);
        if (doc.contains("paths")) {
            const json & p = doc.at("paths");
            get_if_present(p, "input", cfg.paths.input_dir);
            get_if_present(p, "output", cfg.paths.output_dir);
            get_if_present(p, "pred_a", cfg.paths.pred_a_dir);
            get_if_present(p, "pred_b", cfg.paths.pred_b_dir);
            get_if_present(p, "gt", cfg.paths.gt_dir);
        }
        if (doc.contains("enhance")) {
            enhance_from_json(doc.at("enhance"), cfg.enhance);
        }
        if (doc.contains("degrade")) {
            degrade_from_json(doc.at("degrade"), cfg.degrade);
        }
        if (doc.contains("filter")) {
            filter_from_json(doc.at("filter"), cfg.filter);
        }
        if (doc.contains("fusion")) {
            fusion_from_json(doc.at("fusion"), cfg.fusion);
        }
        if (doc.contains("loss")) {
            loss_from_json(doc.at("loss"), cfg.loss);
        }
        if (doc.contains("eval")) {
            eval_from_json(doc.at("eval"), cfg.eval);
        }
        if (doc.contains("mock")) {
            get_if_present(doc.at("mock"), "epsilon_a", cfg.mock.epsilon_a);
            get_if_present(doc.at("mock"), "epsilon_b", cfg.mock.epsilon_b);
        }
    } catch (const json::exception & e) {
        throw DecodeError(std::string("config: mistyped field: ") + e.what());
    }
    return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DecodeError("cannot open config: " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return pipeline_config_from_json(text);
}

std::string manifest_to_json(const RunManifest & manifest) {
    json doc;
    doc["tool_version"] = manifest.tool_version;
    doc["config_hash"] = manifest.config_hash;
    doc["started_at"] = manifest.started_at;
    doc["finished_at"] = manifest.finished_at;
    doc["images"] = json::array();
    for (const ImageOutcome & o : manifest.images) {
        doc["images"].push_back({{"image_id", o.image_id},
                                 {"enhanced", o.enhanced},
                                 {"fused", o.fused},
                                 {"alignment_fallback", o.alignment_fallback},
                                 {"evaluated", o.evaluated},
                                 {"skipped", o.skipped}});
    }
    return doc.dump(2);
}

namespace {

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Index instance-set JSONs in a directory by their embedded image_id.
std::map<std::string, InstanceSet> load_prediction_dir(const std::filesystem::path & dir) {
    std::map<std::string, InstanceSet> sets;
    if (dir.empty() || !std::filesystem::is_directory(dir)) {
        return sets;
    }
    for (const auto & entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") {
            continue;
        }
        InstanceSet set = load_instance_set(entry.path());
        sets[set.image_id] = std::move(set);
    }
    return sets;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Results land in
/// index order, so aggregation stays deterministic.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)> & fn) {
    const int threads = std::max(1, workers);
    if (threads == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) {
                    return;
                }
                fn(i);
            }
        });
    }
    for (std::thread & t : pool) {
        t.join();
    }
}

} // namespace

RunManifest run_pipeline(const PipelineConfig & cfg) {
    namespace fs = std::filesystem;

    RunManifest manifest;
    manifest.tool_version = kVersion;
    manifest.config_hash = hex64(fnv1a(pipeline_config_to_json(cfg)));
    manifest.started_at = timestamp_now();

    const fs::path input_dir = cfg.paths.input_dir;
    const fs::path output_dir = cfg.paths.output_dir;
    if (!fs::is_directory(input_dir)) {
        throw Error("run: input directory does not exist: " + input_dir.string());
    }
    std::vector<fs::path> inputs;
    for (const auto & entry : fs::directory_iterator(input_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            inputs.push_back(entry.path());
        }
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) {
        throw Error("run: input directory has no .png images: " + input_dir.string());
    }

    fs::create_directories(output_dir / "enhanced");
    fs::create_directories(output_dir / "fused");
    fs::create_directories(output_dir / "overlays");

    const auto gt_sets = load_prediction_dir(cfg.paths.gt_dir);
    const auto pred_a_files = load_prediction_dir(cfg.paths.pred_a_dir);
    const auto pred_b_files = load_prediction_dir(cfg.paths.pred_b_dir);
    const bool mock_a = cfg.paths.pred_a_dir.empty();
    const bool mock_b = cfg.paths.pred_b_dir.empty();
    const std::uint64_t mock_seed_a = mix_seed(cfg.seed, fnv1a("pred-a"));
    const std::uint64_t mock_seed_b = mix_seed(cfg.seed, fnv1a("pred-b"));
    if (mock_a || mock_b) {
        fs::create_directories(output_dir / "pred_a");
        fs::create_directories(output_dir / "pred_b");
    }

    // The duplicate-hash set is order-dependent, so filtering runs
    // sequentially over the sorted inputs before the parallel stages.
    std::vector<ImageOutcome> outcomes(inputs.size());
    std::vector<char> rejected(inputs.size(), 0);
    if (cfg.run_filter) {
        std::vector<std::uint64_t> seen;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            try {
                const RasterImage image = read_image(inputs[i]);
                const FilterVerdict verdict = filter_image(image, cfg.filter, seen);
                if (!verdict.keep) {
                    rejected[i] = 1;
                    std::string reasons;
                    for (RejectReason r : verdict.reasons) {
                        if (!reasons.empty()) {
                            reasons += ",";
                        }
                        reasons += reject_reason_name(r);
                    }
                    outcomes[i].skipped = "filtered: " + reasons;
                }
            } catch (const Error & e) {
                rejected[i] = 1;
                outcomes[i].skipped = e.what();
            }
        }
    }

    struct EvalEntry {
        bool present = false;
        InstanceSet fused;
        InstanceSet gt;
    };
    std::vector<EvalEntry> eval_entries(inputs.size());

    parallel_for(inputs.size(), cfg.workers, [&](std::size_t i) {
        const std::string image_id = inputs[i].stem().string();
        ImageOutcome & outcome = outcomes[i];
        outcome.image_id = image_id;
        if (rejected[i]) {
            return;
        }
        try {
            const RasterImage image = read_image(inputs[i]);
            const RasterImage enhanced = enhance(image, cfg.enhance);
            write_image(enhanced, output_dir / "enhanced" / (image_id + ".png"));
            outcome.enhanced = true;

            const auto git = gt_sets.find(image_id);

            InstanceSet pred_a;
            if (mock_a) {
                if (git == gt_sets.end()) {
                    outcome.skipped = "no ground truth to mock predictions from";
                    return;
                }
                pred_a = mock_segment(git->second, cfg.mock.epsilon_a, mock_seed_a);
                save_instance_set(pred_a, output_dir / "pred_a" / (image_id + ".json"));
            } else {
                const auto it = pred_a_files.find(image_id);
                if (it == pred_a_files.end()) {
                    outcome.skipped = "missing prediction A";
                    return;
                }
                pred_a = it->second;
            }

            InstanceSet pred_b;
            if (mock_b) {
                if (git == gt_sets.end()) {
                    outcome.skipped = "no ground truth to mock predictions from";
                    return;
                }
                pred_b = mock_segment(git->second, cfg.mock.epsilon_b, mock_seed_b);
                save_instance_set(pred_b, output_dir / "pred_b" / (image_id + ".json"));
            } else {
                const auto it = pred_b_files.find(image_id);
                if (it == pred_b_files.end()) {
                    outcome.skipped = "missing prediction B";
                    return;
                }
                pred_b = it->second;
            }

            FusionConfig fusion_cfg = cfg.fusion;
            fusion_cfg.seed = mix_seed(cfg.seed, fnv1a(image_id));
            FusionOutcome fused = fuse_sets(pred_a, pred_b, enhanced, fusion_cfg);
            fused.fused.image_id = image_id;
            outcome.fused = true;
            outcome.alignment_fallback = fused.alignment_fallback;

            save_instance_set(fused.fused, output_dir / "fused" / (image_id + ".json"));
            write_image(render_overlay(enhanced, fused.fused),
                        output_dir / "overlays" / (image_id + ".png"));

            if (git != gt_sets.end()) {
                eval_entries[i].present = true;
                eval_entries[i].fused = std::move(fused.fused);
                eval_entries[i].gt = git->second;
                outcome.evaluated = true;
            }
        } catch (const Error & e) {
            outcome.skipped = e.what();
        }
    });

    std::vector<std::pair<InstanceSet, InstanceSet>> pairs;
    for (EvalEntry & entry : eval_entries) {
        if (entry.present) {
            pairs.emplace_back(std::move(entry.fused), std::move(entry.gt));
        }
    }
    if (!pairs.empty()) {
        const EvalReport report = evaluate_sets(pairs, cfg.eval);
        save_report(report, output_dir / "report.json");
    }

    manifest.images = std::move(outcomes);
    manifest.finished_at = timestamp_now();

    std::ofstream out(output_dir / "manifest.json", std::ios::binary);
    if (!out) {
        throw Error("run: cannot write manifest");
    }
    out << manifest_to_json(manifest) << '\n';
    return manifest;
}

} // namespace darkseg
