#pragma once

#include <chrono>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "vwseg/config.hpp"
#include "vwseg/detect.hpp"
#include "vwseg/eval.hpp"
#include "vwseg/io.hpp"
#include "vwseg/phantom.hpp"
#include "vwseg/refine.hpp"
#include "vwseg/segment.hpp"
#include "vwseg/tracklet.hpp"

namespace vwseg {

/// Bad or missing inputs (exit code 1), as opposed to stage failures (2).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

/// Removes the files registered during a failed stage so no partial outputs
/// survive.
class OutputGuard {
public:
    ~OutputGuard() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : files_) std::filesystem::remove(p, ec);
    }
    void track(const std::filesystem::path& p) { files_.push_back(p); }
    void track_raw_pair(const std::filesystem::path& header) {
        files_.push_back(header);
        files_.push_back(payload_path_for(header));
    }
    void commit() { committed_ = true; }

private:
    std::vector<std::filesystem::path> files_;
    bool committed_ = false;
};

inline std::filesystem::path pick_path(const std::string& configured,
                                       const std::filesystem::path& fallback,
                                       const char* what) {
    if (!configured.empty()) return configured;
    if (fallback.empty())
        throw InputError(std::string("missing path for ") + what);
    return fallback;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ground truth codec.
// ---------------------------------------------------------------------------

inline void write_ground_truth(const GroundTruth& gt, const std::filesystem::path& path) {
    json j;
    json boxes = json::array();
    for (const auto& b : gt.boxes) boxes.push_back(box_to_json(b));
    j["boxes"] = std::move(boxes);
    json rings = json::array();
    for (const auto& r : gt.rings) {
        json rj;
        rj["slice"] = r.slice;
        rj["vessel"] = r.vessel;
        rj["branch"] = r.branch;
        rj["center"] = {r.center.x, r.center.y};
        rj["r_lumen"] = r.r_lumen;
        rj["r_outer"] = r.r_outer;
        rings.push_back(std::move(rj));
    }
    j["rings"] = std::move(rings);
    json centerlines = json::array();
    for (const auto& c : gt.centerlines) {
        json cj;
        cj["z_start"] = c.z_start;
        cj["points"] = polygon_to_json(c.points);
        centerlines.push_back(std::move(cj));
    }
    j["centerlines"] = std::move(centerlines);
    detail::write_json_file(path, j);
}

inline GroundTruth read_ground_truth(const std::filesystem::path& path) {
    const json j = detail::parse_json_file(path);
    GroundTruth gt;
    if (!j.contains("boxes") || !j.contains("rings"))
        throw IoError("ground truth " + path.string() + ": missing 'boxes' or 'rings'");
    for (size_t i = 0; i < j["boxes"].size(); ++i)
        gt.boxes.push_back(box_from_json(j["boxes"][i], "gt.boxes[" + std::to_string(i) + "]"));
    for (size_t i = 0; i < j["rings"].size(); ++i) {
        const std::string where = "gt.rings[" + std::to_string(i) + "]";
        const auto& rj = j["rings"][i];
        RingTruth r;
        r.slice = static_cast<int>(detail::require_number(rj, "slice", where));
        r.vessel = static_cast<int>(detail::require_number(rj, "vessel", where));
        r.branch = static_cast<int>(detail::require_number(rj, "branch", where));
        if (!rj.contains("center") || rj["center"].size() != 2)
            throw IoError(where + ": field 'center' must be [x, y]");
        r.center = {rj["center"][0].get<double>(), rj["center"][1].get<double>()};
        r.r_lumen = detail::require_number(rj, "r_lumen", where);
        r.r_outer = detail::require_number(rj, "r_outer", where);
        gt.rings.push_back(r);
    }
    if (j.contains("centerlines")) {
        for (size_t i = 0; i < j["centerlines"].size(); ++i) {
            const std::string where = "gt.centerlines[" + std::to_string(i) + "]";
            Centerline c;
            c.z_start =
                static_cast<int>(detail::require_number(j["centerlines"][i], "z_start", where));
            c.points = polygon_from_json(j["centerlines"][i]["points"], where + ".points");
            gt.centerlines.push_back(std::move(c));
        }
    }
    return gt;
}

/// Pastes a patch-sized binary mask into a full-slice mask at the crop origin.
inline Image2D place_patch_mask(const Image2D& patch, int x0, int y0, int width, int height) {
    Image2D out(width, height, 0.0f);
    for (int y = 0; y < patch.height; ++y) {
        const int vy = y0 + y;
        if (vy < 0 || vy >= height) continue;
        for (int x = 0; x < patch.width; ++x) {
            const int vx = x0 + x;
            if (vx < 0 || vx >= width) continue;
            out.at(vx, vy) = patch.at(x, y);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Run report.
// ---------------------------------------------------------------------------

struct RunReport {
    std::vector<std::pair<std::string, double>> timings;  // stage -> seconds
    std::vector<std::string> warnings;
    json flags = json::object();

    json to_json() const {
        json j;
        json t = json::object();
        for (const auto& [stage, secs] : timings) t[stage] = secs;
        j["timings"] = std::move(t);
        j["warnings"] = warnings;
        j["flags"] = flags;
        return j;
    }
};

class StageTimer {
public:
    StageTimer(RunReport& report, std::string stage)
        : report_(report), stage_(std::move(stage)),
          start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const auto end = std::chrono::steady_clock::now();
        report_.timings.emplace_back(
            stage_, std::chrono::duration<double>(end - start_).count());
    }

private:
    RunReport& report_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// Stages. Each one reads and writes files under out_dir unless the config
// points elsewhere, so downstream stages can be re-run in isolation.
// ---------------------------------------------------------------------------

inline void stage_phantom(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                          RunReport& report) {
    StageTimer timer(report, "phantom");
    if (cfg.paths.phantom_spec.empty())
        throw InputError("phantom: paths.phantom_spec is required");
    PhantomSpec spec = phantom_spec_from_json(detail::parse_json_file(cfg.paths.phantom_spec));
    if (cfg.seed != 0) spec.seed = cfg.seed;

    detail::OutputGuard guard;
    auto [vol, gt] = generate(spec, cfg.workers);
    std::filesystem::create_directories(out_dir);
    guard.track_raw_pair(out_dir / "volume.json");
    write_volume(vol, out_dir / "volume.json");
    guard.track(out_dir / "gt.json");
    write_ground_truth(gt, out_dir / "gt.json");
    guard.commit();
}

inline std::vector<BoundingBox> stage_detect(const PipelineConfig& cfg,
                                             const std::filesystem::path& out_dir,
                                             RunReport& report) {
    StageTimer timer(report, "detect");
    const auto volume_path =
        detail::pick_path(cfg.paths.volume, out_dir / "volume.json", "detect input volume");
    const Volume v = read_volume(volume_path);

    std::vector<BoundingBox> dets;
    if (cfg.detect.backend == "file") {
        if (cfg.paths.detections.empty())
            throw InputError("detect: file backend requires paths.detections");
        dets = file_detector(cfg.paths.detections);
    } else {
        dets = detect_blobs(v, cfg.detect.threshold, cfg.detect.min_area, cfg.detect.max_area,
                            cfg.workers);
    }

    detail::OutputGuard guard;
    std::filesystem::create_directories(out_dir);
    guard.track(out_dir / "detections.json");
    write_detections(dets, out_dir / "detections.json");
    guard.commit();
    return dets;
}

struct TrackOutcome {
    std::vector<Tracklet> targets;
    std::vector<Centerline> centerlines;
};

inline TrackOutcome stage_track(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                                RunReport& report) {
    StageTimer timer(report, "track");
    const auto det_path =
        detail::pick_path(cfg.paths.detections, out_dir / "detections.json", "track detections");
    const std::vector<BoundingBox> dets = read_detections(det_path);

    std::vector<Tracklet> tracklets = build_tracklets(dets, cfg.track.tau_link);
    if (tracklets.empty()) throw InputError("track: no tracklets");
    tracklets = merge_tracklets(std::move(tracklets), cfg.track.loss_weights, cfg.track.max_gap,
                                cfg.track.loss_max);
    TargetSelection sel = select_targets(std::move(tracklets), cfg.track.k_targets);
    if (sel.underfull)
        report.warnings.push_back("track: only " + std::to_string(sel.targets.size()) +
                                  " tracklets available for k_targets=" +
                                  std::to_string(cfg.track.k_targets));

    TrackOutcome out;
    out.targets = std::move(sel.targets);
    std::vector<BoundingBox> refined;
    for (const auto& t : out.targets) {
        out.centerlines.push_back(extract_centerline(t));
        refined.insert(refined.end(), t.boxes.begin(), t.boxes.end());
    }
    std::sort(refined.begin(), refined.end(), [](const BoundingBox& a, const BoundingBox& b) {
        return std::tie(a.slice, a.x, a.y) < std::tie(b.slice, b.x, b.y);
    });

    detail::OutputGuard guard;
    std::filesystem::create_directories(out_dir);
    guard.track(out_dir / "tracklets.json");
    write_tracklets(out.targets, out_dir / "tracklets.json");
    guard.track(out_dir / "refined_detections.json");
    write_detections(refined, out_dir / "refined_detections.json");
    guard.track(out_dir / "centerlines.json");
    write_centerlines(out.centerlines, out_dir / "centerlines.json");
    guard.commit();
    return out;
}

namespace detail {

struct TargetProducts {
    int z_start = 0;
    std::vector<ContourSet> contours;
    std::vector<SliceConfidence> segconf;
    std::vector<ProbabilityMap> probmaps;  // polar, one per slice
    std::vector<Image2D> full_masks;       // restored full-slice masks
};

inline void write_target_products(const std::vector<TargetProducts>& targets,
                                  const Volume& v, const std::filesystem::path& out_dir,
                                  OutputGuard& guard) {
    json manifest = json::array();
    std::vector<ContourSet> combined;
    for (size_t i = 0; i < targets.size(); ++i) {
        const auto& t = targets[i];
        const std::string suffix = std::to_string(i);
        json entry;
        entry["index"] = i;
        entry["z_start"] = t.z_start;
        entry["n_slices"] = t.contours.size();
        manifest.push_back(std::move(entry));

        guard.track(out_dir / ("contours_" + suffix + ".json"));
        write_contours(t.contours, out_dir / ("contours_" + suffix + ".json"));
        guard.track(out_dir / ("segconf_" + suffix + ".json"));
        write_confidences(t.segconf, out_dir / ("segconf_" + suffix + ".json"));
        std::vector<Image2D> prob_f32;
        prob_f32.reserve(t.probmaps.size());
        for (const auto& m : t.probmaps) prob_f32.push_back(to_float_image(m));
        guard.track_raw_pair(out_dir / ("probmap_" + suffix + ".json"));
        write_probmap(prob_f32, out_dir / ("probmap_" + suffix + ".json"));

        Volume masks(v.width, v.height, static_cast<int>(t.full_masks.size()), v.spacing);
        for (size_t z = 0; z < t.full_masks.size(); ++z)
            std::copy(t.full_masks[z].data.begin(), t.full_masks[z].data.end(),
                      masks.voxels.begin() +
                          static_cast<size_t>(z) * v.width * v.height);
        guard.track_raw_pair(out_dir / ("masks_" + suffix + ".json"));
        write_volume(masks, out_dir / ("masks_" + suffix + ".json"));

        combined.insert(combined.end(), t.contours.begin(), t.contours.end());
    }
    guard.track(out_dir / "targets.json");
    write_json_file(out_dir / "targets.json", manifest);
    guard.track(out_dir / "contours.json");
    write_contours(combined, out_dir / "contours.json");
}

inline std::unique_ptr<SegmenterBackend> make_backend(const PipelineConfig& cfg) {
    if (cfg.segment.backend == "oracle")
        return std::make_unique<OracleSegmenter>(cfg.segment.smooth_sigma, cfg.track.n_slices);
    return nullptr;  // file backend handled by the caller
}

/// Contour extraction half of segment_slice, applied to an already-merged
/// probability map.
inline SliceSegmentation contours_from_prob(ProbabilityMap prob, Vec2 center, int z,
                                            int patch_size, const SnakeParams& snake) {
    SliceSegmentation out;
    out.crop.z = z;
    out.crop.x0 = static_cast<int>(std::llround(center.x)) - patch_size / 2;
    out.crop.y0 = static_cast<int>(std::llround(center.y)) - patch_size / 2;
    out.prob = std::move(prob);
    const InitialContours init = init_contours(out.prob);
    out.init_degenerate = init.degenerate;
    out.lumen = snake_refine(init.lumen, out.prob, snake);
    out.outer = snake_refine(init.outer, out.prob, snake);
    out.pairing_fixed = enforce_pairing(out.lumen, out.outer);
    out.polar_mask = wall_mask(out.lumen, out.outer);
    out.segconf = seg_confidence(out.prob, out.polar_mask);
    return out;
}

}  // namespace detail

inline void stage_segment(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                          RunReport& report) {
    StageTimer timer(report, "segment");
    const auto volume_path =
        detail::pick_path(cfg.paths.volume, out_dir / "volume.json", "segment input volume");
    const Volume v = read_volume(volume_path);
    const auto cl_path = detail::pick_path(cfg.paths.centerlines, out_dir / "centerlines.json",
                                           "segment centerlines");
    const std::vector<Centerline> centerlines = read_centerlines(cl_path);
    if (centerlines.empty()) throw InputError("segment: no centerlines");

    const SegmentParams params = cfg.segment_params();
    std::vector<Image2D> file_probs;
    std::unique_ptr<SegmenterBackend> backend = detail::make_backend(cfg);
    if (!backend) {
        if (cfg.paths.probmap.empty())
            throw InputError("segment: file backend requires paths.probmap");
        if (centerlines.size() != 1)
            throw InputError("segment: file backend supports exactly one centerline");
        file_probs = read_probmap(cfg.paths.probmap);
        if (file_probs.size() != centerlines.front().points.size())
            throw InputError("segment: probmap depth does not match centerline length");
    }

    std::vector<detail::TargetProducts> targets(centerlines.size());
    const IdentitySegmenter identity(1);
    for (size_t ti = 0; ti < centerlines.size(); ++ti) {
        const Centerline& c = centerlines[ti];
        if (c.z_start < 0 || c.z_end() >= v.depth)
            throw InputError("segment: centerline exceeds volume slice range");
        const int n = static_cast<int>(c.points.size());
        std::vector<SliceSegmentation> slices(static_cast<size_t>(n));
        parallel_for(n, cfg.workers, [&](int i) {
            const int z = c.z_start + i;
            if (backend) {
                slices[static_cast<size_t>(i)] =
                    segment_slice(v, c.points[static_cast<size_t>(i)], z, *backend, params);
            } else {
                PolarPatch patch;
                patch.planes.push_back(file_probs[static_cast<size_t>(i)]);
                const WindowSet ws =
                    window_split(patch, params.window_height, params.window_stride);
                PredictOutcome pred = predict(identity, ws);
                slices[static_cast<size_t>(i)] = detail::contours_from_prob(
                    std::move(pred.map), c.points[static_cast<size_t>(i)], z,
                    params.patch_size, params.snake);
            }
        });

        detail::TargetProducts& prod = targets[ti];
        prod.z_start = c.z_start;
        for (const auto& s : slices) {
            prod.contours.push_back(restore_cartesian(s.lumen, s.outer, s.crop.x0, s.crop.y0,
                                                      s.crop.z, kUpsampleScale, s.segconf));
            prod.segconf.push_back({s.crop.z, s.segconf});
            prod.probmaps.push_back(s.prob);
            prod.full_masks.push_back(place_patch_mask(restore_mask_to_patch(s.polar_mask),
                                                       s.crop.x0, s.crop.y0, v.width, v.height));
            if (s.segconf < cfg.report.segconf_floor)
                report.flags["low_confidence"].push_back(
                    {{"target", ti}, {"slice", s.crop.z}, {"segconf", s.segconf}});
            if (s.init_degenerate)
                report.flags["degenerate_init"].push_back({{"target", ti}, {"slice", s.crop.z}});
        }
    }

    detail::OutputGuard guard;
    std::filesystem::create_directories(out_dir);
    detail::write_target_products(targets, v, out_dir, guard);
    guard.commit();
}

inline void stage_refine(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                         RunReport& report) {
    StageTimer timer(report, "refine");
    const auto volume_path =
        detail::pick_path(cfg.paths.volume, out_dir / "volume.json", "refine input volume");
    const Volume v = read_volume(volume_path);
    const auto cl_path = detail::pick_path(cfg.paths.centerlines, out_dir / "centerlines.json",
                                           "refine centerlines");
    const std::vector<Centerline> centerlines = read_centerlines(cl_path);
    if (centerlines.empty()) throw InputError("refine: no centerlines");

    std::unique_ptr<SegmenterBackend> backend = detail::make_backend(cfg);
    if (!backend)
        throw InputError("refine: requires the 'oracle' segment backend (file maps are "
                         "tied to fixed centers)");
    const SegmentParams params = cfg.segment_params();
    const RefineParams rp{cfg.refine.threshold, cfg.refine.max_iter};

    std::vector<detail::TargetProducts> targets(centerlines.size());
    std::vector<Centerline> refined;
    json refine_rows = json::array();
    for (size_t ti = 0; ti < centerlines.size(); ++ti) {
        const RefineOutcome outcome =
            refine_centerline(v, centerlines[ti], *backend, params, rp, cfg.workers);
        refined.push_back(outcome.centerline);

        detail::TargetProducts& prod = targets[ti];
        prod.z_start = outcome.centerline.z_start;
        for (const auto& s : outcome.slices) {
            json row;
            row["target"] = ti;
            row["slice"] = s.slice;
            row["rounds"] = s.rounds;
            row["dx"] = s.dx;
            row["dy"] = s.dy;
            row["converged"] = s.converged;
            row["failed"] = s.failed;
            row["clamped"] = s.clamped;
            row["segconf"] = s.seg.segconf;
            refine_rows.push_back(std::move(row));

            if (s.failed) {
                // Keep the per-slice alignment of all product stacks: a failed
                // slice contributes empty contours and zeroed maps.
                report.flags["failed_slices"].push_back({{"target", ti}, {"slice", s.slice}});
                ContourSet empty;
                empty.slice = s.slice;
                prod.contours.push_back(empty);
                prod.segconf.push_back({s.slice, 0.0});
                prod.probmaps.push_back(make_polar_map());
                prod.full_masks.push_back(Image2D(v.width, v.height, 0.0f));
                continue;
            }
            if (!s.converged)
                report.flags["non_converged"].push_back({{"target", ti}, {"slice", s.slice}});
            if (s.seg.segconf < cfg.report.segconf_floor)
                report.flags["low_confidence"].push_back(
                    {{"target", ti}, {"slice", s.slice}, {"segconf", s.seg.segconf}});

            prod.contours.push_back(restore_cartesian(s.seg.lumen, s.seg.outer, s.seg.crop.x0,
                                                      s.seg.crop.y0, s.slice, kUpsampleScale,
                                                      s.seg.segconf));
            prod.segconf.push_back({s.slice, s.seg.segconf});
            prod.probmaps.push_back(s.seg.prob);
            prod.full_masks.push_back(place_patch_mask(restore_mask_to_patch(s.seg.polar_mask),
                                                       s.seg.crop.x0, s.seg.crop.y0, v.width,
                                                       v.height));
        }
    }

    detail::OutputGuard guard;
    std::filesystem::create_directories(out_dir);
    detail::write_target_products(targets, v, out_dir, guard);
    guard.track(out_dir / "centerlines_refined.json");
    write_centerlines(refined, out_dir / "centerlines_refined.json");
    guard.track(out_dir / "refine_report.json");
    detail::write_json_file(out_dir / "refine_report.json", refine_rows);
    guard.commit();
}

struct EvalOutcome {
    LocalizationReport localization;
    SegmentationReport segmentation;
};

inline EvalOutcome stage_eval(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                              RunReport& report) {
    StageTimer timer(report, "eval");
    const auto gt_path =
        detail::pick_path(cfg.paths.ground_truth, out_dir / "gt.json", "eval ground truth");
    const GroundTruth gt = read_ground_truth(gt_path);
    if (gt.boxes.empty()) throw InputError("eval: ground truth has no labeled boxes");

    const std::vector<BoundingBox> dets = read_detections(out_dir / "refined_detections.json");

    EvalOutcome out;
    out.localization = localization_report(dets, gt.boxes);

    // Pair every ground-truth ring with the nearest refined target centerline
    // on its slice and score Dice against that target's restored mask.
    std::filesystem::path cl_path = out_dir / "centerlines_refined.json";
    if (!std::filesystem::exists(cl_path)) cl_path = out_dir / "centerlines.json";
    const std::vector<Centerline> centerlines = read_centerlines(cl_path);
    std::vector<Volume> masks;
    for (size_t i = 0; i < centerlines.size(); ++i)
        masks.push_back(read_volume(out_dir / ("masks_" + std::to_string(i) + ".json")));

    std::vector<SliceDsc> rows;
    for (const auto& ring : gt.rings) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < centerlines.size(); ++i) {
            const Centerline& c = centerlines[i];
            if (ring.slice < c.z_start || ring.slice > c.z_end()) continue;
            const Vec2 p = c.at_slice(ring.slice);
            const double d = std::hypot(p.x - ring.center.x, p.y - ring.center.y);
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<int>(i);
            }
        }
        SliceDsc row;
        row.slice = ring.slice;
        if (best >= 0) {
            const Volume& mv = masks[static_cast<size_t>(best)];
            const Image2D auto_mask = mv.slice(ring.slice - centerlines[best].z_start);
            const Image2D label_mask = gt_wall_mask(ring, mv.width, mv.height);
            row.dsc = dice(auto_mask, label_mask, &row.both_empty);
            row.area_auto = wall_area(auto_mask, mv.spacing[0], mv.spacing[1]);
            row.area_label = wall_area(label_mask, mv.spacing[0], mv.spacing[1]);
        } else if (!masks.empty()) {
            const Volume& mv = masks.front();
            const Image2D label_mask = gt_wall_mask(ring, mv.width, mv.height);
            row.dsc = 0.0;
            row.area_auto = 0.0;
            row.area_label = wall_area(label_mask, mv.spacing[0], mv.spacing[1]);
        }
        rows.push_back(row);
    }
    out.segmentation = segmentation_report(rows);

    detail::OutputGuard guard;
    json j;
    j["localization"] = {{"mean_iou", out.localization.mean_iou},
                         {"missed", out.localization.missed},
                         {"false_positive", out.localization.false_positive}};
    json per_label = json::array();
    for (const auto& m : out.localization.per_label)
        per_label.push_back(
            {{"slice", m.slice}, {"best_iou", m.best_iou}, {"missed", m.missed}});
    j["localization"]["per_label"] = std::move(per_label);
    j["segmentation"] = {{"mean_dsc", out.segmentation.mean_dsc},
                         {"area_correlation", out.segmentation.area_correlation},
                         {"correlation_defined", out.segmentation.correlation_defined}};
    json per_slice = json::array();
    for (const auto& r : out.segmentation.per_slice)
        per_slice.push_back({{"slice", r.slice},
                             {"dsc", r.dsc},
                             {"area_auto", r.area_auto},
                             {"area_label", r.area_label},
                             {"both_empty", r.both_empty}});
    j["segmentation"]["per_slice"] = std::move(per_slice);
    guard.track(out_dir / "eval_report.json");
    detail::write_json_file(out_dir / "eval_report.json", j);
    guard.commit();
    return out;
}

/// detect -> track -> refine (segmentation inside the refinement loop),
/// then the run report.
inline RunReport run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    RunReport report;
    stage_detect(cfg, out_dir, report);
    stage_track(cfg, out_dir, report);
    stage_refine(cfg, out_dir, report);
    detail::write_json_file(out_dir / "run_report.json", report.to_json());
    return report;
}

}  // namespace vwseg
