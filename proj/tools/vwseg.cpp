#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vwseg/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitStageFailure = 2;

void print_eval(const vwseg::EvalOutcome& eval) {
    std::printf("localization:\n");
    std::printf("  mean IoU        %.4f\n", eval.localization.mean_iou);
    std::printf("  missed          %d\n", eval.localization.missed);
    std::printf("  false           %d\n", eval.localization.false_positive);
    std::printf("segmentation:\n");
    std::printf("  mean DSC        %.4f\n", eval.segmentation.mean_dsc);
    if (eval.segmentation.correlation_defined)
        std::printf("  area corr       %.4f\n", eval.segmentation.area_correlation);
    else
        std::printf("  area corr       undefined\n");
    std::printf("  slices          %zu\n", eval.segmentation.per_slice.size());
}

void print_report(const vwseg::RunReport& report) {
    for (const auto& [stage, secs] : report.timings)
        std::printf("stage %-8s %.3f s\n", stage.c_str(), secs);
    for (const auto& w : report.warnings) std::printf("warning: %s\n", w.c_str());
    for (const auto& [key, rows] : report.flags.items())
        std::printf("flag %-16s %zu slice(s)\n", key.c_str(), rows.size());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Artery localization and vessel wall segmentation pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int workers = -1;
    uint64_t seed = 0;
    app.add_option("--config", config_path, "Pipeline config file (JSON)");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--workers", workers, "Worker thread count (overrides config)");
    app.add_option("--seed", seed, "RNG seed (overrides config)");

    for (const char* name : {"phantom", "detect", "track", "segment", "refine", "eval",
                             "pipeline"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    const bool seed_set = app.count("--seed") > 0;

    vwseg::PipelineConfig cfg;
    try {
        if (!config_path.empty()) cfg = vwseg::load_config(config_path);
        if (workers > 0) cfg.workers = workers;
        if (seed_set) cfg.seed = seed;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInputError;
    }

    vwseg::RunReport report;
    try {
        if (command == "phantom") {
            vwseg::stage_phantom(cfg, out_dir, report);
        } else if (command == "detect") {
            vwseg::stage_detect(cfg, out_dir, report);
        } else if (command == "track") {
            vwseg::stage_track(cfg, out_dir, report);
        } else if (command == "segment") {
            vwseg::stage_segment(cfg, out_dir, report);
        } else if (command == "refine") {
            vwseg::stage_refine(cfg, out_dir, report);
        } else if (command == "eval") {
            print_eval(vwseg::stage_eval(cfg, out_dir, report));
        } else {
            report = vwseg::run_pipeline(cfg, out_dir);
        }
    } catch (const vwseg::InputError& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return kExitInputError;
    } catch (const vwseg::IoError& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << command << " failed: " << e.what() << "\n";
        return kExitStageFailure;
    }

    print_report(report);
    return kExitOk;
}
