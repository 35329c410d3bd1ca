#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "darkseg/dataset.hpp"
#include "darkseg/enhance.hpp"
#include "darkseg/evaluation.hpp"
#include "darkseg/fusion.hpp"
#include "darkseg/image_io.hpp"
#include "darkseg/instance_json.hpp"
#include "darkseg/mock_segment.hpp"
#include "darkseg/pipeline.hpp"
#include "darkseg/rng.hpp"
#include "darkseg/version.hpp"

#include "loss_check.hpp"

namespace fs = std::filesystem;
using namespace darkseg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCheckFailed = 3;

std::vector<fs::path> list_files(const fs::path & dir, const std::string & extension) {
    if (!fs::is_directory(dir)) {
        throw Error("not a directory: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto & entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == extension) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::map<std::string, fs::path> index_jsons_by_image_id(const fs::path & dir) {
    std::map<std::string, fs::path> index;
    for (const fs::path & path : list_files(dir, ".json")) {
        index[load_instance_set(path).image_id] = path;
    }
    return index;
}

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    bool verbose = false;

    PipelineConfig load() const {
        PipelineConfig cfg;
        if (!config_path.empty()) {
            cfg = load_pipeline_config(config_path);
        }
        if (seed) {
            cfg.seed = *seed;
        }
        if (workers) {
            cfg.workers = *workers;
        }
        return cfg;
    }
};

} // namespace

int main(int argc, char ** argv) {
    CLI::App app{"darkseg: low-light instance segmentation toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand name

    GlobalOptions global;
    app.add_option("--config", global.config_path, "Config file (JSON)")->expected(1);
    app.add_option("--seed", global.seed, "Seed governing all stochastic steps");
    app.add_option("--workers", global.workers, "Worker threads for batch stages");
    app.add_flag("--verbose", global.verbose, "Chatty progress output");

    // --- enhance ---
    auto * cmd_enhance = app.add_subcommand("enhance", "Brighten a directory of PNG images");
    std::string enh_input, enh_output;
    std::optional<double> enh_gamma, enh_target_mean;
    std::optional<int> enh_radius;
    cmd_enhance->add_option("--input", enh_input, "Input directory")->required();
    cmd_enhance->add_option("--output", enh_output, "Output directory")->required();
    auto * gamma_opt =
        cmd_enhance->add_option("--gamma", enh_gamma, "Brightening exponent (>= 1 brightens)");
    cmd_enhance
        ->add_option("--target-mean", enh_target_mean,
                     "Solve the exponent for this output illumination mean")
        ->excludes(gamma_opt);
    cmd_enhance->add_option("--radius", enh_radius, "Illumination smoothing radius");

    // --- degrade ---
    auto * cmd_degrade = app.add_subcommand("degrade", "Generate synthetic low-light pairs");
    std::string deg_input, deg_output;
    std::optional<double> deg_sigma, deg_brightness, deg_contrast;
    cmd_degrade->add_option("--input", deg_input, "Input directory")->required();
    cmd_degrade->add_option("--output", deg_output, "Output directory")->required();
    cmd_degrade->add_option("--sigma", deg_sigma, "Gaussian noise std-dev");
    cmd_degrade->add_option("--brightness", deg_brightness, "Brightness multiplier in (0,1]");
    cmd_degrade->add_option("--contrast", deg_contrast, "Contrast multiplier >= 1");

    // --- filter ---
    auto * cmd_filter = app.add_subcommand("filter", "Flag dark, blurred and duplicate frames");
    std::string flt_input, flt_report, flt_move;
    cmd_filter->add_option("--input", flt_input, "Input directory")->required();
    cmd_filter->add_option("--report", flt_report, "Verdict report JSON path")->required();
    cmd_filter->add_option("--move-rejected", flt_move, "Move rejected files here");

    // --- mock-segment ---
    auto * cmd_mock = app.add_subcommand(
        "mock-segment", "Perturb ground-truth sets into synthetic predictions");
    std::string mock_gt, mock_out, mock_stream;
    double mock_epsilon = 0.15;
    cmd_mock->add_option("--gt", mock_gt, "Ground-truth directory (instance-set JSON)")
        ->required();
    cmd_mock->add_option("--out", mock_out, "Output directory")->required();
    cmd_mock->add_option("--epsilon", mock_epsilon, "Perturbation level in [0,1]");
    cmd_mock->add_option("--stream", mock_stream,
                         "Substream tag (e.g. pred-a), mixed into the seed");

    // --- fuse ---
    auto * cmd_fuse = app.add_subcommand("fuse", "Align and fuse two prediction sets");
    std::string fuse_image, fuse_pred_a, fuse_pred_b, fuse_out;
    std::string fuse_image_dir, fuse_pred_a_dir, fuse_pred_b_dir, fuse_out_dir;
    bool fuse_no_align = false, fuse_keep_unmatched = false;
    cmd_fuse->add_option("--image", fuse_image, "Image PNG (single mode)");
    cmd_fuse->add_option("--pred-a", fuse_pred_a, "Prediction A JSON (single mode)");
    cmd_fuse->add_option("--pred-b", fuse_pred_b, "Prediction B JSON (single mode)");
    cmd_fuse->add_option("--out", fuse_out, "Fused output JSON (single mode)");
    cmd_fuse->add_option("--image-dir", fuse_image_dir, "Image directory (batch mode)");
    cmd_fuse->add_option("--pred-a-dir", fuse_pred_a_dir, "Prediction A directory");
    cmd_fuse->add_option("--pred-b-dir", fuse_pred_b_dir, "Prediction B directory");
    cmd_fuse->add_option("--out-dir", fuse_out_dir, "Fused output directory");
    cmd_fuse->add_flag("--no-align", fuse_no_align,
                       "Skip alignment and intersect as-is (ablation)");
    cmd_fuse->add_flag("--keep-unmatched", fuse_keep_unmatched,
                       "Pass unmatched instances through");

    // --- eval ---
    auto * cmd_eval = app.add_subcommand("eval", "Score predictions against ground truth");
    std::string eval_pred, eval_gt, eval_out;
    double eval_iou = 0.5;
    bool eval_merge = false, eval_pixel_f1 = false;
    cmd_eval->add_option("--pred", eval_pred, "Prediction directory")->required();
    cmd_eval->add_option("--gt", eval_gt, "Ground-truth directory")->required();
    cmd_eval->add_option("--out", eval_out, "Report JSON path (CSV written alongside)")
        ->required();
    cmd_eval->add_option("--iou", eval_iou, "Instance match IoU threshold");
    cmd_eval->add_flag("--merge-surrounding", eval_merge,
                       "Merge road/wall/roof into 'surrounding' before scoring");
    cmd_eval->add_flag("--pixel-f1", eval_pixel_f1, "Add per-class pixel-level F1 columns");

    // --- render ---
    auto * cmd_render = app.add_subcommand("render", "Draw mask overlays onto an image");
    std::string render_image, render_pred, render_out;
    cmd_render->add_option("--image", render_image, "Image PNG")->required();
    cmd_render->add_option("--pred", render_pred, "Instance-set JSON")->required();
    cmd_render->add_option("--out", render_out, "Output PNG")->required();

    // --- loss-check ---
    app.add_subcommand("loss-check",
                       "Verify analytic loss gradients against finite differences");

    // --- run ---
    auto * cmd_run = app.add_subcommand("run", "Full pipeline: filter/enhance/fuse/eval");
    std::string run_input, run_output, run_pred_a, run_pred_b, run_gt;
    bool run_filter_flag = false;
    cmd_run->add_option("--input", run_input, "Input image directory");
    cmd_run->add_option("--output", run_output, "Output directory");
    cmd_run->add_option("--pred-a", run_pred_a, "Prediction A directory (else mocked)");
    cmd_run->add_option("--pred-b", run_pred_b, "Prediction B directory (else mocked)");
    cmd_run->add_option("--gt", run_gt, "Ground-truth directory");
    cmd_run->add_flag("--filter", run_filter_flag, "Run the frame filter first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion & e) {
        return app.exit(e);
    } catch (const CLI::ParseError & e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        PipelineConfig cfg = global.load();

        if (app.got_subcommand(cmd_enhance)) {
            if (enh_gamma) {
                cfg.enhance.gamma = static_cast<float>(*enh_gamma);
                cfg.enhance.target_mean.reset();
            }
            if (enh_target_mean) {
                cfg.enhance.target_mean = static_cast<float>(*enh_target_mean);
            }
            if (enh_radius) {
                cfg.enhance.smoothing_radius = *enh_radius;
            }
            fs::create_directories(enh_output);
            for (const fs::path & path : list_files(enh_input, ".png")) {
                const RasterImage out = enhance(read_image(path), cfg.enhance);
                write_image(out, fs::path(enh_output) / path.filename());
                if (global.verbose) {
                    std::printf("enhanced %s\n", path.filename().c_str());
                }
            }
        } else if (app.got_subcommand(cmd_degrade)) {
            if (deg_sigma) {
                cfg.degrade.noise_sigma = static_cast<float>(*deg_sigma);
            }
            if (deg_brightness) {
                cfg.degrade.brightness_factor = static_cast<float>(*deg_brightness);
            }
            if (deg_contrast) {
                cfg.degrade.contrast_factor = static_cast<float>(*deg_contrast);
            }
            fs::create_directories(deg_output);
            for (const fs::path & path : list_files(deg_input, ".png")) {
                DegradeConfig dc = cfg.degrade;
                dc.seed = mix_seed(cfg.seed, fnv1a(path.stem().string()));
                const RasterImage out = degrade(read_image(path), dc);
                write_image(out, fs::path(deg_output) / path.filename());
                if (global.verbose) {
                    std::printf("degraded %s\n", path.filename().c_str());
                }
            }
        } else if (app.got_subcommand(cmd_filter)) {
            std::vector<std::uint64_t> seen;
            nlohmann::json report;
            report["files"] = nlohmann::json::array();
            int kept = 0;
            int dropped = 0;
            if (!flt_move.empty()) {
                fs::create_directories(flt_move);
            }
            for (const fs::path & path : list_files(flt_input, ".png")) {
                const FilterVerdict verdict = filter_image(read_image(path), cfg.filter, seen);
                nlohmann::json entry;
                entry["file"] = path.filename().string();
                entry["keep"] = verdict.keep;
                entry["reasons"] = nlohmann::json::array();
                for (RejectReason r : verdict.reasons) {
                    entry["reasons"].push_back(reject_reason_name(r));
                }
                report["files"].push_back(std::move(entry));
                if (verdict.keep) {
                    ++kept;
                } else {
                    ++dropped;
                    if (!flt_move.empty()) {
                        fs::rename(path, fs::path(flt_move) / path.filename());
                    }
                }
            }
            report["kept"] = kept;
            report["rejected"] = dropped;
            std::ofstream out(flt_report, std::ios::binary);
            if (!out) {
                throw Error("cannot write report: " + flt_report);
            }
            out << report.dump(2) << '\n';
            std::printf("kept %d, rejected %d\n", kept, dropped);
        } else if (app.got_subcommand(cmd_mock)) {
            std::uint64_t seed = cfg.seed;
            if (!mock_stream.empty()) {
                seed = mix_seed(seed, fnv1a(mock_stream));
            }
            fs::create_directories(mock_out);
            for (const fs::path & path : list_files(mock_gt, ".json")) {
                const InstanceSet gt = load_instance_set(path);
                const InstanceSet pred = mock_segment(gt, mock_epsilon, seed);
                save_instance_set(pred, fs::path(mock_out) / path.filename());
            }
        } else if (app.got_subcommand(cmd_fuse)) {
            cfg.fusion.force_identity = cfg.fusion.force_identity || fuse_no_align;
            cfg.fusion.keep_unmatched = cfg.fusion.keep_unmatched || fuse_keep_unmatched;
            const bool single = !fuse_image.empty();
            if (single) {
                if (fuse_pred_a.empty() || fuse_pred_b.empty() || fuse_out.empty()) {
                    std::fprintf(stderr,
                                 "fuse: single mode needs --image --pred-a --pred-b --out\n");
                    return kExitUsage;
                }
                const RasterImage image = read_image(fuse_image);
                const InstanceSet a = load_instance_set(fuse_pred_a);
                const InstanceSet b = load_instance_set(fuse_pred_b);
                FusionConfig fc = cfg.fusion;
                fc.seed = mix_seed(cfg.seed, fnv1a(b.image_id));
                const FusionOutcome outcome = fuse_sets(a, b, image, fc);
                save_instance_set(outcome.fused, fuse_out);
                if (global.verbose && outcome.alignment_fallback) {
                    std::printf("alignment fell back to identity\n");
                }
            } else {
                if (fuse_image_dir.empty() || fuse_pred_a_dir.empty() ||
                    fuse_pred_b_dir.empty() || fuse_out_dir.empty()) {
                    std::fprintf(stderr, "fuse: batch mode needs --image-dir --pred-a-dir "
                                         "--pred-b-dir --out-dir\n");
                    return kExitUsage;
                }
                const auto index_a = index_jsons_by_image_id(fuse_pred_a_dir);
                const auto index_b = index_jsons_by_image_id(fuse_pred_b_dir);
                fs::create_directories(fuse_out_dir);
                for (const fs::path & image_path : list_files(fuse_image_dir, ".png")) {
                    const std::string image_id = image_path.stem().string();
                    const auto ia = index_a.find(image_id);
                    const auto ib = index_b.find(image_id);
                    if (ia == index_a.end() || ib == index_b.end()) {
                        std::fprintf(stderr, "fuse: no prediction pair for %s, skipping\n",
                                     image_id.c_str());
                        continue;
                    }
                    const RasterImage image = read_image(image_path);
                    FusionConfig fc = cfg.fusion;
                    fc.seed = mix_seed(cfg.seed, fnv1a(image_id));
                    const FusionOutcome outcome = fuse_sets(
                        load_instance_set(ia->second), load_instance_set(ib->second), image, fc);
                    save_instance_set(outcome.fused,
                                      fs::path(fuse_out_dir) / (image_id + ".json"));
                }
            }
        } else if (app.got_subcommand(cmd_eval)) {
            EvalOptions options = cfg.eval;
            options.iou_threshold = eval_iou;
            options.merge_surrounding = options.merge_surrounding || eval_merge;
            options.pixel_f1 = options.pixel_f1 || eval_pixel_f1;
            const EvalReport report = evaluate_dirs(eval_pred, eval_gt, options);
            save_report(report, eval_out);
            for (const std::string & id : report.skipped) {
                std::fprintf(stderr, "eval: skipped %s (missing counterpart)\n", id.c_str());
            }
            std::printf("f1 %.4f  miou %.4f  (tp %d fp %d fn %d)\n", report.f1, report.miou,
                        report.tp, report.fp, report.fn);
        } else if (app.got_subcommand(cmd_render)) {
            const RasterImage image = read_image(render_image);
            const InstanceSet pred = load_instance_set(render_pred);
            write_image(render_overlay(image, pred), render_out);
        } else if (app.got_subcommand("loss-check")) {
            if (!cli::run_loss_check(cfg.seed, global.verbose)) {
                return kExitCheckFailed;
            }
        } else if (app.got_subcommand(cmd_run)) {
            if (!run_input.empty()) {
                cfg.paths.input_dir = run_input;
            }
            if (!run_output.empty()) {
                cfg.paths.output_dir = run_output;
            }
            if (!run_pred_a.empty()) {
                cfg.paths.pred_a_dir = run_pred_a;
            }
            if (!run_pred_b.empty()) {
                cfg.paths.pred_b_dir = run_pred_b;
            }
            if (!run_gt.empty()) {
                cfg.paths.gt_dir = run_gt;
            }
            cfg.run_filter = cfg.run_filter || run_filter_flag;
            if (cfg.paths.input_dir.empty() || cfg.paths.output_dir.empty()) {
                std::fprintf(stderr, "run: --input and --output are required "
                                     "(flags or config file)\n");
                return kExitUsage;
            }
            const RunManifest manifest = run_pipeline(cfg);
            int processed = 0;
            int skipped = 0;
            for (const ImageOutcome & o : manifest.images) {
                if (o.skipped.empty()) {
                    ++processed;
                } else {
                    ++skipped;
                    if (global.verbose) {
                        std::printf("skipped %s: %s\n", o.image_id.c_str(), o.skipped.c_str());
                    }
                }
            }
            std::printf("processed %d, skipped %d (manifest: %s)\n", processed, skipped,
                        (fs::path(cfg.paths.output_dir) / "manifest.json").c_str());
        }
    } catch (const Error & e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception & e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitOk;
}
