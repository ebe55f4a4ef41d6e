#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "vwseg/io.hpp"
#include "vwseg/segment.hpp"
#include "vwseg/tracklet.hpp"

namespace vwseg {

/// All stage parameters plus file paths; every key is validated against its
/// module's preconditions before any stage runs.
struct PipelineConfig {
    struct Paths {
        std::string volume;
        std::string detections;   // input for track / file detector
        std::string centerlines;  // input for segment / refine
        std::string probmap;      // precomputed polar probabilities (file backend)
        std::string phantom_spec;
        std::string ground_truth;
    } paths;

    struct Detect {
        std::string backend = "blob";  // blob | file
        double threshold = 0.6;
        double min_area = 40.0;
        double max_area = 3000.0;
    } detect;

    struct Track {
        double tau_link = 0.3;
        LossWeights loss_weights;
        int max_gap = 5;
        double loss_max = 2.0;
        int k_targets = 2;
        int patch_size = kPatchSize;
        int n_slices = 3;
    } track;

    struct Segment {
        std::string backend = "oracle";  // oracle | file
        double smooth_sigma = 2.0;
        double alpha = 0.1;
        double beta = 0.1;
        double gamma = 1.0;
        int max_iter = 100;
        int window_height = 40;
        int window_stride = 20;
    } segment;

    struct Refine {
        double threshold = 4.0;  // upsampled pixels
        int max_iter = 10;
    } refine;

    struct Report {
        double segconf_floor = 0.5;
    } report;

    uint64_t seed = 0;
    int workers = 1;

    SegmentParams segment_params() const {
        SegmentParams p;
        p.patch_size = track.patch_size;
        p.n_slices = track.n_slices;
        p.window_height = segment.window_height;
        p.window_stride = segment.window_stride;
        p.snake.alpha = segment.alpha;
        p.snake.beta = segment.beta;
        p.snake.gamma = segment.gamma;
        p.snake.max_iter = segment.max_iter;
        return p;
    }

    void validate() const {
        if (detect.backend != "blob" && detect.backend != "file")
            throw std::invalid_argument("config: detect.backend must be 'blob' or 'file'");
        if (!(detect.threshold > 0.0 && detect.threshold < 1.0))
            throw std::invalid_argument("config: detect.threshold must be in (0, 1)");
        if (!(detect.min_area > 0.0 && detect.min_area < detect.max_area))
            throw std::invalid_argument("config: require 0 < detect.min_area < detect.max_area");

        if (!(track.tau_link > 0.0 && track.tau_link < 1.0))
            throw std::invalid_argument("config: track.tau_link must be in (0, 1)");
        if (track.loss_weights.w1 < 0.0 || track.loss_weights.w2 < 0.0 ||
            track.loss_weights.w3 < 0.0)
            throw std::invalid_argument("config: track.loss_weights must be >= 0");
        if (track.max_gap < 0)
            throw std::invalid_argument("config: track.max_gap must be >= 0");
        if (!(track.loss_max >= 0.0))
            throw std::invalid_argument("config: track.loss_max must be >= 0");
        if (track.k_targets < 1)
            throw std::invalid_argument("config: track.k_targets must be >= 1");
        if (track.patch_size != kPatchSize)
            throw std::invalid_argument("config: track.patch_size must be 128");
        if (track.n_slices != 1 && track.n_slices != 3)
            throw std::invalid_argument("config: track.n_slices must be 1 or 3");

        if (segment.backend != "oracle" && segment.backend != "file")
            throw std::invalid_argument("config: segment.backend must be 'oracle' or 'file'");
        if (segment.smooth_sigma < 0.0)
            throw std::invalid_argument("config: segment.smooth_sigma must be >= 0");
        if (segment.alpha < 0.0 || segment.beta < 0.0 || segment.gamma < 0.0)
            throw std::invalid_argument("config: snake weights must be >= 0");
        if (segment.max_iter < 1)
            throw std::invalid_argument("config: segment.max_iter must be >= 1");
        if (segment.window_height < 1 || segment.window_height > kPolarHeight)
            throw std::invalid_argument("config: segment.window_height must be in [1, 180]");
        if (segment.window_stride < 1 || segment.window_stride > segment.window_height)
            throw std::invalid_argument(
                "config: require 1 <= segment.window_stride <= segment.window_height");

        if (!(refine.threshold > 0.0))
            throw std::invalid_argument("config: refine.threshold must be > 0");
        if (refine.max_iter < 1)
            throw std::invalid_argument("config: refine.max_iter must be >= 1");

        if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    }
};

inline PipelineConfig config_from_json(const json& j) {
    PipelineConfig cfg;
    if (j.contains("paths")) {
        const auto& p = j["paths"];
        cfg.paths.volume = p.value("volume", "");
        cfg.paths.detections = p.value("detections", "");
        cfg.paths.centerlines = p.value("centerlines", "");
        cfg.paths.probmap = p.value("probmap", "");
        cfg.paths.phantom_spec = p.value("phantom_spec", "");
        cfg.paths.ground_truth = p.value("ground_truth", "");
    }
    if (j.contains("detect")) {
        const auto& d = j["detect"];
        cfg.detect.backend = d.value("backend", cfg.detect.backend);
        cfg.detect.threshold = d.value("threshold", cfg.detect.threshold);
        cfg.detect.min_area = d.value("min_area", cfg.detect.min_area);
        cfg.detect.max_area = d.value("max_area", cfg.detect.max_area);
    }
    if (j.contains("track")) {
        const auto& t = j["track"];
        cfg.track.tau_link = t.value("tau_link", cfg.track.tau_link);
        if (t.contains("loss_weights")) {
            if (!t["loss_weights"].is_array() || t["loss_weights"].size() != 3)
                throw std::invalid_argument("config: track.loss_weights must be [w1, w2, w3]");
            cfg.track.loss_weights.w1 = t["loss_weights"][0].get<double>();
            cfg.track.loss_weights.w2 = t["loss_weights"][1].get<double>();
            cfg.track.loss_weights.w3 = t["loss_weights"][2].get<double>();
        }
        cfg.track.max_gap = t.value("max_gap", cfg.track.max_gap);
        cfg.track.loss_max = t.value("loss_max", cfg.track.loss_max);
        cfg.track.k_targets = t.value("k_targets", cfg.track.k_targets);
        cfg.track.patch_size = t.value("patch_size", cfg.track.patch_size);
        cfg.track.n_slices = t.value("n_slices", cfg.track.n_slices);
    }
    if (j.contains("segment")) {
        const auto& s = j["segment"];
        cfg.segment.backend = s.value("backend", cfg.segment.backend);
        cfg.segment.smooth_sigma = s.value("smooth_sigma", cfg.segment.smooth_sigma);
        cfg.segment.alpha = s.value("alpha", cfg.segment.alpha);
        cfg.segment.beta = s.value("beta", cfg.segment.beta);
        cfg.segment.gamma = s.value("gamma", cfg.segment.gamma);
        cfg.segment.max_iter = s.value("max_iter", cfg.segment.max_iter);
        cfg.segment.window_height = s.value("window_height", cfg.segment.window_height);
        cfg.segment.window_stride = s.value("window_stride", cfg.segment.window_stride);
    }
    if (j.contains("refine")) {
        const auto& r = j["refine"];
        cfg.refine.threshold = r.value("threshold", cfg.refine.threshold);
        cfg.refine.max_iter = r.value("max_iter", cfg.refine.max_iter);
    }
    if (j.contains("report")) {
        cfg.report.segconf_floor = j["report"].value("segconf_floor", cfg.report.segconf_floor);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
    return cfg;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    return config_from_json(detail::parse_json_file(path));
}

inline json config_to_json(const PipelineConfig& cfg) {
    json j;
    j["paths"] = {{"volume", cfg.paths.volume},
                  {"detections", cfg.paths.detections},
                  {"centerlines", cfg.paths.centerlines},
                  {"probmap", cfg.paths.probmap},
                  {"phantom_spec", cfg.paths.phantom_spec},
                  {"ground_truth", cfg.paths.ground_truth}};
    j["detect"] = {{"backend", cfg.detect.backend},
                   {"threshold", cfg.detect.threshold},
                   {"min_area", cfg.detect.min_area},
                   {"max_area", cfg.detect.max_area}};
    j["track"] = {{"tau_link", cfg.track.tau_link},
                  {"loss_weights",
                   {cfg.track.loss_weights.w1, cfg.track.loss_weights.w2,
                    cfg.track.loss_weights.w3}},
                  {"max_gap", cfg.track.max_gap},
                  {"loss_max", cfg.track.loss_max},
                  {"k_targets", cfg.track.k_targets},
                  {"patch_size", cfg.track.patch_size},
                  {"n_slices", cfg.track.n_slices}};
    j["segment"] = {{"backend", cfg.segment.backend},
                    {"smooth_sigma", cfg.segment.smooth_sigma},
                    {"alpha", cfg.segment.alpha},
                    {"beta", cfg.segment.beta},
                    {"gamma", cfg.segment.gamma},
                    {"max_iter", cfg.segment.max_iter},
                    {"window_height", cfg.segment.window_height},
                    {"window_stride", cfg.segment.window_stride}};
    j["refine"] = {{"threshold", cfg.refine.threshold}, {"max_iter", cfg.refine.max_iter}};
    j["report"] = {{"segconf_floor", cfg.report.segconf_floor}};
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    return j;
}

}  // namespace vwseg
