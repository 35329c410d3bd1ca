#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "darkseg/dataset.hpp"
#include "darkseg/enhance.hpp"
#include "darkseg/evaluation.hpp"
#include "darkseg/fusion_config.hpp"
#include "darkseg/losses.hpp"

namespace darkseg {

struct PipelinePaths {
    std::string input_dir;
    std::string output_dir;
    /// Prediction directories for the two external models. When a directory
    /// is empty/unset and ground truth is available, predictions are
    /// mock-segmented from the ground truth instead.
    std::string pred_a_dir;
    std::string pred_b_dir;
    std::string gt_dir;
};

/// Perturbation levels for mock-generated predictions.
struct MockOptions {
    double epsilon_a = 0.15;
    double epsilon_b = 0.15;
};

/// One document that pins down an entire run. Every CLI flag overrides its
/// corresponding key; the seed governs all stochastic steps through fixed
/// substreams ("pred-a", "pred-b", and the per-image fusion streams).
struct PipelineConfig {
    EnhanceConfig enhance;
    DegradeConfig degrade;
    FilterConfig filter;
    FusionConfig fusion;
    LossConfig loss;
    EvalOptions eval;
    MockOptions mock;
    std::uint64_t seed = 0;
    int workers = 1;
    bool run_filter = false;
    PipelinePaths paths;
};

std::string pipeline_config_to_json(const PipelineConfig & cfg);
/// Accepts partial documents; absent keys keep their defaults.
/// Throws DecodeError on malformed input.
PipelineConfig pipeline_config_from_json(const std::string & text);
PipelineConfig load_pipeline_config(const std::filesystem::path & path);

struct ImageOutcome {
    std::string image_id;
    bool enhanced = false;
    bool fused = false;
    bool alignment_fallback = false;
    bool evaluated = false;
    /// Nonempty when the image was skipped; holds the reason.
    std::string skipped;
};

struct RunManifest {
    std::string tool_version;
    /// FNV-1a hash (hex) of the canonical config JSON.
    std::string config_hash;
    std::string started_at;
    std::string finished_at;
    std::vector<ImageOutcome> images;
};

std::string manifest_to_json(const RunManifest & manifest);

/// Full batch flow: (optional) filter -> enhance -> load or mock the two
/// prediction sets -> fuse -> evaluate -> write report, overlays, fused
/// prediction files and manifest under paths.output_dir. Per-image failures
/// are recorded in the manifest and never abort the batch; an empty input
/// directory is an error. Artifacts other than manifest timestamps are
/// byte-stable for a fixed config and seed.
RunManifest run_pipeline(const PipelineConfig & cfg);

} // namespace darkseg
