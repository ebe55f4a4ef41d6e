#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "vwseg/parallel.hpp"
#include "vwseg/types.hpp"

namespace vwseg {

struct BifurcationSpec {
    int z_split = 0;
    double spread = 10.0;  // final half-distance between the two children, pixels
};

struct VesselSpec {
    Vec2 center{80.0, 80.0};
    Vec2 amplitude{0.0, 0.0};  // sinusoidal path amplitude per axis
    double period = 0.0;       // slices per cycle; 0 = straight
    double phase = 0.0;
    double lumen_radius0 = 8.0;  // linear over [z0, z1]
    double lumen_radius1 = 8.0;
    double wall0 = 4.0;
    double wall1 = 4.0;
    int z0 = 0;
    int z1 = 0;
    std::vector<int> dropout_slices;  // vessel invisible there; ground truth kept
    bool distractor = false;          // rendered but excluded from ground truth
    std::optional<BifurcationSpec> bifurcation;

    double lumen_radius(int z) const {
        if (z1 == z0) return lumen_radius0;
        const double u = static_cast<double>(z - z0) / (z1 - z0);
        return lumen_radius0 + u * (lumen_radius1 - lumen_radius0);
    }
    double wall_thickness(int z) const {
        if (z1 == z0) return wall0;
        const double u = static_cast<double>(z - z0) / (z1 - z0);
        return wall0 + u * (wall1 - wall0);
    }
    Vec2 path(int z) const {
        if (period <= 0.0) return center;
        const double arg = 2.0 * std::numbers::pi * (z - z0) / period + phase;
        return {center.x + amplitude.x * std::sin(arg), center.y + amplitude.y * std::cos(arg)};
    }
    bool dropped(int z) const {
        return std::find(dropout_slices.begin(), dropout_slices.end(), z) !=
               dropout_slices.end();
    }
};

struct PhantomSpec {
    int width = 160;
    int height = 160;
    int depth = 40;
    std::array<double, 3> spacing{0.57, 0.57, 2.0};
    double lumen_intensity = 0.1;
    double background_intensity = 0.35;
    double wall_intensity = 0.95;
    double noise_sigma = 0.0;
    uint64_t seed = 0;
    std::vector<VesselSpec> vessels;
};

/// One circular ring cross-section with exact analytic geometry.
struct RingTruth {
    int slice = 0;
    int vessel = 0;
    int branch = 0;  // 0 = parent / first child, 1 = second bifurcation child
    Vec2 center;
    double r_lumen = 0.0;
    double r_outer = 0.0;
};

struct GroundTruth {
    std::vector<BoundingBox> boxes;        // target rings only, dropout slices included
    std::vector<RingTruth> rings;          // one record per target ring per slice
    std::vector<Centerline> centerlines;   // per (target vessel, branch)
};

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Cross-sections of one vessel on one slice: one ring, or two after a split.
inline std::vector<RingTruth> vessel_rings(const VesselSpec& vs, int vessel_idx, int z) {
    std::vector<RingTruth> rings;
    if (z < vs.z0 || z > vs.z1) return rings;
    const Vec2 p = vs.path(z);
    const double rl = vs.lumen_radius(z);
    const double ro = rl + vs.wall_thickness(z);
    if (vs.bifurcation && z >= vs.bifurcation->z_split) {
        const double denom = std::max(1, vs.z1 - vs.bifurcation->z_split);
        const double off = vs.bifurcation->spread * (z - vs.bifurcation->z_split) / denom;
        rings.push_back({z, vessel_idx, 0, {p.x - off, p.y}, rl, ro});
        rings.push_back({z, vessel_idx, 1, {p.x + off, p.y}, rl, ro});
    } else {
        rings.push_back({z, vessel_idx, 0, p, rl, ro});
    }
    return rings;
}

}  // namespace detail

inline void validate_phantom_spec(const PhantomSpec& spec) {
    if (spec.width < 1 || spec.height < 1 || spec.depth < 1)
        throw std::invalid_argument("phantom: dims must be >= 1");
    for (double s : spec.spacing)
        if (!(s > 0.0)) throw std::invalid_argument("phantom: spacing must be > 0");
    if (!(spec.lumen_intensity < spec.background_intensity &&
          spec.background_intensity < spec.wall_intensity))
        throw std::invalid_argument("phantom: intensities must satisfy lumen < background < wall");
    if (spec.noise_sigma < 0.0) throw std::invalid_argument("phantom: noise_sigma must be >= 0");
    for (size_t i = 0; i < spec.vessels.size(); ++i) {
        const VesselSpec& vs = spec.vessels[i];
        if (vs.z0 < 0 || vs.z1 >= spec.depth || vs.z0 > vs.z1)
            throw std::invalid_argument("phantom: vessel z_range outside volume");
        for (int z = vs.z0; z <= vs.z1; ++z) {
            if (!(vs.lumen_radius(z) > 0.0) || !(vs.wall_thickness(z) > 0.0))
                throw std::invalid_argument("phantom: lumen radius and wall must stay > 0");
            for (const auto& ring : detail::vessel_rings(vs, static_cast<int>(i), z)) {
                if (ring.center.x - ring.r_outer < 0.0 ||
                    ring.center.x + ring.r_outer > spec.width ||
                    ring.center.y - ring.r_outer < 0.0 ||
                    ring.center.y + ring.r_outer > spec.height)
                    throw std::invalid_argument(
                        "phantom: vessel cross-section leaves volume bounds");
            }
        }
    }
}

/// Renders anti-aliased ring phantoms with per-slice noise streams and emits
/// exact analytic ground truth. Same seed, same bits.
inline std::pair<Volume, GroundTruth> generate(const PhantomSpec& spec, int workers = 1) {
    validate_phantom_spec(spec);
    Volume vol(spec.width, spec.height, spec.depth, spec.spacing,
               static_cast<float>(spec.background_intensity));

    // Visible rings per slice (dropouts removed), in vessel order.
    std::vector<std::vector<RingTruth>> visible(static_cast<size_t>(spec.depth));
    GroundTruth gt;
    for (size_t vi = 0; vi < spec.vessels.size(); ++vi) {
        const VesselSpec& vs = spec.vessels[vi];
        for (int z = vs.z0; z <= vs.z1; ++z) {
            const auto rings = detail::vessel_rings(vs, static_cast<int>(vi), z);
            if (!vs.dropped(z))
                for (const auto& r : rings) visible[static_cast<size_t>(z)].push_back(r);
            if (vs.distractor) continue;
            for (const auto& r : rings) {
                gt.rings.push_back(r);
                BoundingBox b;
                b.slice = z;
                b.x = r.center.x - r.r_outer;
                b.y = r.center.y - r.r_outer;
                b.w = 2.0 * r.r_outer;
                b.h = 2.0 * r.r_outer;
                b.score = 1.0;
                gt.boxes.push_back(b);
            }
        }
    }

    // One centerline per (target vessel, branch).
    for (size_t vi = 0; vi < spec.vessels.size(); ++vi) {
        const VesselSpec& vs = spec.vessels[vi];
        if (vs.distractor) continue;
        for (int branch = 0; branch < (vs.bifurcation ? 2 : 1); ++branch) {
            Centerline c;
            bool first = true;
            for (int z = vs.z0; z <= vs.z1; ++z) {
                for (const auto& r : detail::vessel_rings(vs, static_cast<int>(vi), z)) {
                    // Branch 1 only exists from the split onward; branch 0 covers
                    // the parent path before it.
                    if (r.branch != branch) continue;
                    if (first) {
                        c.z_start = z;
                        first = false;
                    }
                    c.points.push_back(r.center);
                }
            }
            if (!c.points.empty()) gt.centerlines.push_back(std::move(c));
        }
    }

    const int ss = 4;  // supersampling factor per axis for area-coverage AA
    parallel_for(spec.depth, workers, [&](int z) {
        const auto& rings = visible[static_cast<size_t>(z)];
        if (!rings.empty()) {
            for (int y = 0; y < spec.height; ++y) {
                for (int x = 0; x < spec.width; ++x) {
                    double acc = 0.0;
                    for (int sy = 0; sy < ss; ++sy) {
                        for (int sx = 0; sx < ss; ++sx) {
                            const double px = x + (sx + 0.5) / ss;
                            const double py = y + (sy + 0.5) / ss;
                            double value = spec.background_intensity;
                            for (const auto& r : rings) {
                                const double d = std::hypot(px - r.center.x, py - r.center.y);
                                if (d <= r.r_outer) {
                                    value = d < r.r_lumen ? spec.lumen_intensity
                                                          : spec.wall_intensity;
                                    break;
                                }
                            }
                            acc += value;
                        }
                    }
                    vol.at(x, y, z) = static_cast<float>(acc / (ss * ss));
                }
            }
        }
        if (spec.noise_sigma > 0.0) {
            std::mt19937_64 rng(detail::splitmix64(spec.seed ^ (0x5eedull + z)));
            std::normal_distribution<double> noise(0.0, spec.noise_sigma);
            for (int y = 0; y < spec.height; ++y)
                for (int x = 0; x < spec.width; ++x)
                    vol.at(x, y, z) += static_cast<float>(noise(rng));
        }
    });

    return {std::move(vol), std::move(gt)};
}

/// Analytic annulus indicator over pixel centers, full slice size.
inline Image2D gt_wall_mask(const RingTruth& r, int width, int height) {
    Image2D mask(width, height, 0.0f);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double d = std::hypot(x + 0.5 - r.center.x, y + 0.5 - r.center.y);
            if (d >= r.r_lumen && d <= r.r_outer) mask.at(x, y) = 1.0f;
        }
    }
    return mask;
}

/// Ground-truth circles sampled every 2 degrees, matching the restored
/// contour vertex layout.
inline ContourSet gt_contours(const RingTruth& r) {
    ContourSet c;
    c.slice = r.slice;
    c.confidence = 1.0;
    for (int k = 0; k < kPolarHeight; ++k) {
        const double ang = k * kDegPerThetaRow * std::numbers::pi / 180.0;
        c.lumen.push_back(
            {r.center.x + r.r_lumen * std::cos(ang), r.center.y + r.r_lumen * std::sin(ang)});
        c.outer.push_back(
            {r.center.x + r.r_outer * std::cos(ang), r.center.y + r.r_outer * std::sin(ang)});
    }
    return c;
}

// ---------------------------------------------------------------------------
// JSON spec codec.
// ---------------------------------------------------------------------------

inline PhantomSpec phantom_spec_from_json(const nlohmann::ordered_json& j) {
    PhantomSpec spec;
    spec.width = j.value("width", spec.width);
    spec.height = j.value("height", spec.height);
    spec.depth = j.value("depth", spec.depth);
    if (j.contains("spacing")) {
        if (!j["spacing"].is_array() || j["spacing"].size() != 3)
            throw std::invalid_argument("phantom spec: 'spacing' must be a 3-element array");
        for (int i = 0; i < 3; ++i) spec.spacing[i] = j["spacing"][i].get<double>();
    }
    if (j.contains("intensities")) {
        const auto& in = j["intensities"];
        spec.lumen_intensity = in.value("lumen", spec.lumen_intensity);
        spec.background_intensity = in.value("background", spec.background_intensity);
        spec.wall_intensity = in.value("wall", spec.wall_intensity);
    }
    spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
    spec.seed = j.value("seed", spec.seed);
    if (!j.contains("vessels") || !j["vessels"].is_array() || j["vessels"].empty())
        throw std::invalid_argument("phantom spec: 'vessels' must be a non-empty array");
    for (const auto& vj : j["vessels"]) {
        VesselSpec vs;
        if (!vj.contains("center") || !vj["center"].is_array() || vj["center"].size() != 2)
            throw std::invalid_argument("phantom spec: vessel 'center' must be [x, y]");
        vs.center = {vj["center"][0].get<double>(), vj["center"][1].get<double>()};
        if (vj.contains("amplitude"))
            vs.amplitude = {vj["amplitude"][0].get<double>(), vj["amplitude"][1].get<double>()};
        vs.period = vj.value("period", 0.0);
        vs.phase = vj.value("phase", 0.0);
        if (vj.contains("lumen_radius")) {
            if (vj["lumen_radius"].is_array()) {
                vs.lumen_radius0 = vj["lumen_radius"][0].get<double>();
                vs.lumen_radius1 = vj["lumen_radius"][1].get<double>();
            } else {
                vs.lumen_radius0 = vs.lumen_radius1 = vj["lumen_radius"].get<double>();
            }
        }
        if (vj.contains("wall_thickness")) {
            if (vj["wall_thickness"].is_array()) {
                vs.wall0 = vj["wall_thickness"][0].get<double>();
                vs.wall1 = vj["wall_thickness"][1].get<double>();
            } else {
                vs.wall0 = vs.wall1 = vj["wall_thickness"].get<double>();
            }
        }
        if (vj.contains("z_range")) {
            vs.z0 = vj["z_range"][0].get<int>();
            vs.z1 = vj["z_range"][1].get<int>();
        }
        if (vj.contains("dropout_slices"))
            for (const auto& d : vj["dropout_slices"]) vs.dropout_slices.push_back(d.get<int>());
        vs.distractor = vj.value("distractor", false);
        if (vj.contains("bifurcation") && !vj["bifurcation"].is_null()) {
            BifurcationSpec b;
            b.z_split = vj["bifurcation"].value("z_split", 0);
            b.spread = vj["bifurcation"].value("spread", 10.0);
            vs.bifurcation = b;
        }
        spec.vessels.push_back(std::move(vs));
    }
    return spec;
}

inline nlohmann::ordered_json phantom_spec_to_json(const PhantomSpec& spec) {
    nlohmann::ordered_json j;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["depth"] = spec.depth;
    j["spacing"] = {spec.spacing[0], spec.spacing[1], spec.spacing[2]};
    j["intensities"] = {{"lumen", spec.lumen_intensity},
                        {"background", spec.background_intensity},
                        {"wall", spec.wall_intensity}};
    j["noise_sigma"] = spec.noise_sigma;
    j["seed"] = spec.seed;
    j["vessels"] = nlohmann::ordered_json::array();
    for (const auto& vs : spec.vessels) {
        nlohmann::ordered_json vj;
        vj["center"] = {vs.center.x, vs.center.y};
        vj["amplitude"] = {vs.amplitude.x, vs.amplitude.y};
        vj["period"] = vs.period;
        vj["phase"] = vs.phase;
        vj["lumen_radius"] = {vs.lumen_radius0, vs.lumen_radius1};
        vj["wall_thickness"] = {vs.wall0, vs.wall1};
        vj["z_range"] = {vs.z0, vs.z1};
        vj["dropout_slices"] = vs.dropout_slices;
        vj["distractor"] = vs.distractor;
        if (vs.bifurcation)
            vj["bifurcation"] = {{"z_split", vs.bifurcation->z_split},
                                 {"spread", vs.bifurcation->spread}};
        j["vessels"].push_back(std::move(vj));
    }
    return j;
}

/// Validation suite loosely matching carotid proportions: two target vessels
/// per volume, one small distractor, and a single-slice dropout on most
/// volumes. Placement keeps every other bright structure more than 64
/// original pixels (the polar field of view) from each target center.
inline std::vector<PhantomSpec> default_suite(uint64_t seed = 20240801ULL) {
    std::vector<PhantomSpec> suite;
    for (int i = 0; i < 10; ++i) {
        PhantomSpec spec;
        spec.width = 160;
        spec.height = 160;
        spec.depth = 40;
        spec.spacing = {0.57, 0.57, 2.0};
        spec.noise_sigma = 0.015;
        spec.seed = detail::splitmix64(seed + static_cast<uint64_t>(i));

        VesselSpec left;
        left.center = {36.0 + (i % 2), 78.0 + (i % 5)};
        left.amplitude = {1.5, 5.0 + (i % 3)};
        left.period = 40.0 + 4.0 * (i % 4);
        left.phase = 0.3 * i;
        left.lumen_radius0 = 9.0 + 0.3 * (i % 4);
        left.lumen_radius1 = 12.0;
        left.wall0 = 4.0;
        left.wall1 = 5.5;
        left.z0 = 0;
        left.z1 = 39;
        if (i % 2 == 0) left.dropout_slices = {14 + i};

        VesselSpec right;
        right.center = {125.0 - (i % 2), 82.0 - (i % 5)};
        right.amplitude = {1.5, 6.0 - (i % 3)};
        right.period = 44.0 + 3.0 * (i % 3);
        right.phase = 1.1 + 0.2 * i;
        right.lumen_radius0 = 12.5;
        right.lumen_radius1 = 9.5 + 0.2 * (i % 5);
        right.wall0 = 5.0;
        right.wall1 = 4.0;
        right.z0 = 0;
        right.z1 = 39;
        if (i % 2 == 1) right.dropout_slices = {22 + (i % 6)};

        // Small short vessel; a realistic false positive that top-2 selection
        // must discard. Far enough from both targets to stay out of their
        // polar fields.
        VesselSpec distractor;
        distractor.center = {80.0, 10.0};
        distractor.amplitude = {1.0, 1.0};
        distractor.period = 12.0;
        distractor.lumen_radius0 = 3.5;
        distractor.lumen_radius1 = 3.5;
        distractor.wall0 = 2.5;
        distractor.wall1 = 2.5;
        distractor.z0 = 6 + (i % 4);
        distractor.z1 = distractor.z0 + 5;
        distractor.distractor = true;

        spec.vessels = {left, right, distractor};
        suite.push_back(std::move(spec));
    }
    return suite;
}

}  // namespace vwseg
