// Acceptance suite: one test per criterion, each printing a pass/fail line.

#include <gtest/gtest.h>

#include <chrono>
#include <numbers>
#include <random>

#include "merge_oracle.hpp"
#include "test_util.hpp"
#include "vwseg/pipeline.hpp"

using namespace vwseg;
using vwseg::testing::TempDir;

namespace {

struct CriterionLine {
    int index;
    const char* name;
    ::testing::Test* test;
    ~CriterionLine() {
        std::printf("[criterion %2d] %s: %s\n", index, test->HasFailure() ? "FAIL" : "PASS",
                    name);
    }
};

#define CRITERION(n, text) CriterionLine line_{n, text, this}

Image2D ring_patch(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> center(246.0, 266.0);
    std::uniform_real_distribution<double> lumen(36.0, 140.0);
    std::uniform_real_distribution<double> wall(16.0, 48.0);
    const double cx = center(rng), cy = center(rng);
    const double rl = lumen(rng), ro = rl + wall(rng);
    Image2D img(512, 512, 0.35f);
    for (int y = 0; y < 512; ++y)
        for (int x = 0; x < 512; ++x) {
            const double d = std::hypot(x - cx, y - cy);
            if (d <= ro) img.at(x, y) = d < rl ? 0.1f : 0.95f;
        }
    return img;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TEST(Acceptance, C01_PolarRoundTrip) {
    CRITERION(1, "polar round trip error < 2% of dynamic range, < 5 s");
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    for (int i = 0; i < 20; ++i) {
        const Image2D smooth = vwseg::testing::gaussian_blur(ring_patch(rng), 2.0);
        const Image2D rt = from_polar(to_polar(smooth));
        float lo = smooth.data[0], hi = smooth.data[0];
        for (float v : smooth.data) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double err = 0.0;
        long n = 0;
        for (int y = 0; y < 512; ++y)
            for (int x = 0; x < 512; ++x) {
                if (std::hypot(x - 256.0, y - 256.0) >= 250.0) continue;
                err += std::abs(static_cast<double>(rt.at(x, y)) - smooth.at(x, y));
                ++n;
            }
        EXPECT_LT(err / n, 0.02 * (hi - lo)) << "patch " << i;
    }
    EXPECT_LT(elapsed_seconds(start), 5.0);
}

TEST(Acceptance, C02_PolarSamplingCoordsExact) {
    CRITERION(2, "to_polar sampling coordinates match brute-force polar formula to 1e-9");
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> theta(0.0, 180.0);
    std::uniform_real_distribution<double> rho(0.0, 256.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = theta(rng), r = rho(rng);
        const Vec2 c = polar_sample_coords(t, r);
        const double ang_deg = t * (360.0 / 180.0);
        const double ang = ang_deg * std::numbers::pi / 180.0;
        EXPECT_NEAR(c.x, 256.0 + r * std::cos(ang), 1e-9);
        EXPECT_NEAR(c.y, 256.0 + r * std::sin(ang), 1e-9);
    }
}

TEST(Acceptance, C03_WindowSplitMerge) {
    CRITERION(3, "window split/merge lossless; overlap averaging exact to 1e-12");
    std::mt19937_64 rng(1003);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    for (const int stride : {10, 20, 40}) {
        for (int trial = 0; trial < 5; ++trial) {
            Image2D img = make_polar_image();
            for (float& v : img.data) v = dist(rng);
            PolarPatch p;
            p.planes.push_back(img);
            const WindowSet ws = window_split(p, 40, stride);
            std::vector<Image2D> preds;
            for (const auto& w : ws.windows) preds.push_back(w[0]);
            const ProbabilityMap merged = window_merge(preds, ws.offsets, 40);
            ASSERT_TRUE(merged.same_shape(img));
            for (size_t i = 0; i < merged.data.size(); ++i)
                ASSERT_EQ(merged.data[i], static_cast<double>(img.data[i]))
                    << "stride " << stride << " trial " << trial;
        }
    }
    // Two overlapping constant windows average to their exact mean.
    std::uniform_real_distribution<float> cval(0.0f, 1.0f);
    for (int trial = 0; trial < 20; ++trial) {
        const float a = cval(rng), b = cval(rng);
        const std::vector<Image2D> preds = {Image2D(kPolarWidth, 180, a),
                                            Image2D(kPolarWidth, 180, b)};
        const ProbabilityMap merged = window_merge(preds, {0, 90}, 180);
        const double mean = (static_cast<double>(a) + b) / 2.0;
        for (double v : merged.data) EXPECT_NEAR(v, mean, 1e-12);
    }
}

namespace {

std::vector<Tracklet> random_tracklet_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_tracks(1, 4);
    std::uniform_int_distribution<int> z0_dist(0, 8);
    std::uniform_int_distribution<int> len_dist(1, 4);
    std::uniform_real_distribution<double> pos(0.0, 60.0);
    std::uniform_real_distribution<double> size(8.0, 30.0);
    std::uniform_real_distribution<double> jitter(-2.0, 2.0);
    std::uniform_real_distribution<double> score(0.1, 1.0);
    int total = 0;
    std::vector<Tracklet> ts;
    const int n = n_tracks(rng);
    for (int i = 0; i < n && total < 12; ++i) {
        const int z0 = z0_dist(rng);
        const int len = std::min(len_dist(rng), 12 - total);
        if (len == 0) break;
        const double bx = pos(rng), by = pos(rng), bw = size(rng), bh = size(rng);
        Tracklet t;
        for (int k = 0; k < len; ++k) {
            BoundingBox b;
            b.slice = z0 + k;
            b.x = bx + jitter(rng);
            b.y = by + jitter(rng);
            b.w = bw;
            b.h = bh;
            b.score = score(rng);
            t.boxes.push_back(b);
        }
        ts.push_back(std::move(t));
        total += len;
    }
    return ts;
}

}  // namespace

TEST(Acceptance, C04_TrackletOracleEquivalence) {
    CRITERION(4, "merge_tracklets equals brute-force mutual-minimum enumeration");
    const LossWeights w{0.2, 1.0, 1.0};
    std::mt19937_64 rng(1004);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ts = random_tracklet_instance(rng);
        std::set<std::string> terminals;
        vwseg::testing::oracle_enumerate(ts, w, 5, 2.0, terminals);
        ASSERT_EQ(terminals.size(), 1u) << "trial " << trial;
        const auto merged = merge_tracklets(ts, w, 5, 2.0);
        EXPECT_EQ(vwseg::testing::canonical_form(merged), *terminals.begin())
            << "trial " << trial;

        // Interpolated boxes reproduce the linear arithmetic of their flanks.
        for (const auto& t : merged) {
            for (size_t i = 0; i < t.boxes.size(); ++i) {
                if (!t.boxes[i].interpolated) continue;
                size_t lo = i, hi = i;
                while (t.boxes[lo].interpolated) --lo;
                while (t.boxes[hi].interpolated) ++hi;
                const auto& a = t.boxes[lo];
                const auto& b = t.boxes[hi];
                const double u =
                    static_cast<double>(t.boxes[i].slice - a.slice) / (b.slice - a.slice);
                EXPECT_NEAR(t.boxes[i].cx(), a.cx() + u * (b.cx() - a.cx()), 1e-9);
                EXPECT_NEAR(t.boxes[i].cy(), a.cy() + u * (b.cy() - a.cy()), 1e-9);
                EXPECT_NEAR(t.boxes[i].w, a.w + u * (b.w - a.w), 1e-9);
                EXPECT_NEAR(t.boxes[i].h, a.h + u * (b.h - a.h), 1e-9);
                EXPECT_EQ(t.boxes[i].score, 0.0);
            }
        }
    }
}

namespace {

PhantomSpec two_vessel_spec(uint64_t seed, int depth, int dropout_slice) {
    PhantomSpec spec;
    spec.width = 160;
    spec.height = 160;
    spec.depth = depth;
    spec.spacing = {0.57, 0.57, 2.0};
    spec.noise_sigma = 0.01;
    spec.seed = seed;

    VesselSpec left;
    left.center = {38.0, 80.0};
    left.amplitude = {1.0, 3.0};
    left.period = 24.0;
    left.phase = 0.1 * static_cast<double>(seed % 7);
    left.lumen_radius0 = 9.0;
    left.lumen_radius1 = 12.0;
    left.wall0 = 4.0;
    left.wall1 = 5.0;
    left.z0 = 0;
    left.z1 = depth - 1;
    left.dropout_slices = {dropout_slice};

    VesselSpec right = left;
    right.center = {124.0, 80.0};
    right.phase += 1.3;
    right.lumen_radius0 = 12.0;
    right.lumen_radius1 = 9.5;
    right.dropout_slices = {};

    spec.vessels = {left, right};
    return spec;
}

}  // namespace

TEST(Acceptance, C05_FalseDetectionRemovalAndGapFilling) {
    CRITERION(5, "0 false detections after refinement; 100% of injected gaps filled");
    std::mt19937_64 rng(1005);
    std::uniform_real_distribution<double> stray_x(30.0, 110.0);
    std::uniform_real_distribution<double> stray_y(128.0, 140.0);
    std::uniform_int_distribution<int> stray_slice(0, 11);

    int gaps_filled = 0, total_false = 0, total_missed = 0;
    for (int i = 0; i < 50; ++i) {
        const int dropout = 3 + (i % 6);
        const auto [vol, gt] = generate(two_vessel_spec(2000 + i, 12, dropout));
        auto dets = detect_blobs(vol, 0.6, 40.0, 3000.0);
        // Inject strays with zero overlap with any true vessel box.
        for (int s = 0; s < 3; ++s) {
            BoundingBox stray;
            stray.slice = stray_slice(rng);
            stray.x = stray_x(rng);
            stray.y = stray_y(rng);
            stray.w = 22.0;
            stray.h = 22.0;
            stray.score = 0.9;
            dets.push_back(stray);
        }

        auto tracklets = build_tracklets(dets, 0.3);
        tracklets = merge_tracklets(std::move(tracklets), {0.2, 1.0, 1.0}, 5, 2.0);
        const auto sel = select_targets(std::move(tracklets), 2);
        std::vector<BoundingBox> refined;
        for (const auto& t : sel.targets)
            refined.insert(refined.end(), t.boxes.begin(), t.boxes.end());

        const auto rep = localization_report(refined, gt.boxes);
        total_false += rep.false_positive;
        total_missed += rep.missed;

        // The dropped slice of the left vessel must be covered again.
        bool filled = false;
        for (const auto& label : gt.boxes) {
            if (label.slice != dropout || label.cx() > 80.0) continue;
            for (const auto& b : refined)
                if (b.slice == dropout && iou(b, label) > 0.0) filled = true;
        }
        gaps_filled += filled;
    }
    EXPECT_EQ(total_false, 0);
    EXPECT_EQ(total_missed, 0);
    EXPECT_EQ(gaps_filled, 50);
}

TEST(Acceptance, C06_SegconfExactness) {
    CRITERION(6, "consistent maps give Segconf exactly 1; worked examples to 1e-12");
    std::mt19937_64 rng(1006);
    std::bernoulli_distribution bit(0.25);
    for (int trial = 0; trial < 100; ++trial) {
        Image2D mask(32, 32, 0.0f);
        bool any = false;
        for (float& v : mask.data) {
            v = bit(rng) ? 1.0f : 0.0f;
            any = any || v > 0.0f;
        }
        if (!any) mask.at(3, 3) = 1.0f;
        ProbabilityMap p(32, 32);
        for (size_t i = 0; i < p.data.size(); ++i) p.data[i] = mask.data[i];
        EXPECT_EQ(seg_confidence(p, mask), 1.0);
    }

    // Worked example 1: p = 1 on wall, 0 off wall.
    Image2D mask(kPolarWidth, kPolarHeight, 0.0f);
    for (int t = 0; t < kPolarHeight; ++t)
        for (int r = 60; r <= 90; ++r) mask.at(r, t) = 1.0f;
    ProbabilityMap p(kPolarWidth, kPolarHeight, 0.0);
    for (size_t i = 0; i < mask.data.size(); ++i) p.data[i] = mask.data[i];
    EXPECT_NEAR(seg_confidence(p, mask), 1.0, 1e-12);

    // Worked example 2: p = 0.5 with equal wall and background counts.
    Image2D mask2(10, 2, 0.0f);
    for (int x = 0; x < 10; ++x) mask2.at(x, 0) = 1.0f;
    EXPECT_NEAR(seg_confidence(ProbabilityMap(10, 2, 0.5), mask2), 0.0, 1e-12);

    // Worked example 3: 2x2 hand arithmetic.
    ProbabilityMap p3(2, 2);
    p3.at(0, 0) = 1.0;
    p3.at(1, 0) = 0.5;
    Image2D mask3(2, 2, 0.0f);
    mask3.at(0, 0) = 1.0f;
    EXPECT_NEAR(seg_confidence(p3, mask3), 0.5, 1e-12);
}

TEST(Acceptance, C07_SnakeBehavior) {
    CRITERION(7, "snake energy non-increasing; displaced rows recover band edges");
    std::mt19937_64 rng(1007);
    std::uniform_real_distribution<float> prob(0.0f, 1.0f);
    std::uniform_real_distribution<double> rho0(5.0, 250.0);
    for (int trial = 0; trial < 100; ++trial) {
        ProbabilityMap m = make_polar_map();
        for (double& v : m.data) v = prob(rng);
        PolarContour c;
        c.role = (trial % 2 == 0) ? ContourRole::lumen : ContourRole::outer;
        for (double& r : c.rho) r = rho0(rng);
        SnakeParams params;
        params.max_iter = 20;
        const auto res = snake_refine_traced(c, m, params);
        for (size_t i = 1; i < res.sweep_energies.size(); ++i)
            EXPECT_LE(res.sweep_energies[i], res.sweep_energies[i - 1] + 1e-9)
                << "trial " << trial;
    }

    std::uniform_int_distribution<int> band_lo(40, 120);
    std::uniform_int_distribution<int> row_pick(0, 179);
    for (int trial = 0; trial < 10; ++trial) {
        const int lo = band_lo(rng);
        ProbabilityMap m = make_polar_map(0.0);
        for (int t = 0; t < kPolarHeight; ++t)
            for (int r = lo; r <= lo + 30; ++r) m.at(r, t) = 1.0;
        const auto init = init_contours(m);
        PolarContour displaced = init.lumen;
        displaced.rho[static_cast<size_t>(row_pick(rng))] += 4.0;
        const PolarContour refined = snake_refine(displaced, m, SnakeParams{});
        for (int t = 0; t < kPolarHeight; ++t)
            EXPECT_NEAR(refined.rho[static_cast<size_t>(t)], lo, 1.0)
                << "trial " << trial << " row " << t;

        PolarContour displaced_outer = init.outer;
        displaced_outer.rho[static_cast<size_t>(row_pick(rng))] -= 4.0;
        const PolarContour refined_outer = snake_refine(displaced_outer, m, SnakeParams{});
        for (int t = 0; t < kPolarHeight; ++t)
            EXPECT_NEAR(refined_outer.rho[static_cast<size_t>(t)], lo + 30, 1.0)
                << "trial " << trial << " row " << t;
    }
}

TEST(Acceptance, C08_CenterlineRefinementConvergence) {
    CRITERION(8, ">= 95% of offset slices converge within 3 rounds, < 60 s");
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1008);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(8.0, 14.0);
    std::uniform_real_distribution<double> wall(4.0, 6.0);

    OracleSegmenter backend(2.0, 3);
    SegmentParams params;
    RefineParams rp;
    rp.max_iter = 3;

    int converged = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        PhantomSpec spec;
        spec.width = 128;
        spec.height = 128;
        spec.depth = 3;
        spec.spacing = {0.57, 0.57, 2.0};
        spec.noise_sigma = 0.005;
        spec.seed = 3000 + static_cast<uint64_t>(i);
        VesselSpec vs;
        vs.center = {64.0, 64.0};
        vs.lumen_radius0 = vs.lumen_radius1 = radius(rng);
        vs.wall0 = vs.wall1 = wall(rng);
        vs.z0 = 0;
        vs.z1 = 2;
        spec.vessels = {vs};
        const auto [vol, gt] = generate(spec);

        const double a = angle(rng);
        Centerline c;
        c.z_start = 1;
        c.points = {{64.0 + 8.0 * std::cos(a), 64.0 + 8.0 * std::sin(a)}};
        const auto out = refine_centerline(vol, c, backend, params, rp);
        if (out.slices[0].converged && out.slices[0].rounds <= 3) ++converged;
    }
    EXPECT_GE(converged, 95) << converged << "/100 converged";
    EXPECT_LT(elapsed_seconds(start), 60.0);
}

TEST(Acceptance, C09_EndToEndPhantomFidelity) {
    CRITERION(9, "default suite: mean DSC >= 0.90, mean IoU >= 0.80, < 5 min");
    const auto start = std::chrono::steady_clock::now();
    const auto suite = default_suite();
    double dsc_sum = 0.0;
    long dsc_n = 0;
    double iou_sum = 0.0;
    long iou_n = 0;
    for (size_t i = 0; i < suite.size(); ++i) {
        TempDir dir("acceptance_c9_" + std::to_string(i));
        detail::write_json_file(dir / "spec.json", phantom_spec_to_json(suite[i]));
        PipelineConfig cfg;
        cfg.paths.phantom_spec = (dir / "spec.json").string();
        cfg.paths.volume = (dir / "volume.json").string();
        cfg.paths.ground_truth = (dir / "gt.json").string();
        cfg.workers = 2;
        RunReport report;
        stage_phantom(cfg, dir.path(), report);
        run_pipeline(cfg, dir.path());
        const EvalOutcome eval = stage_eval(cfg, dir.path(), report);
        for (const auto& row : eval.segmentation.per_slice) {
            dsc_sum += row.dsc;
            ++dsc_n;
        }
        for (const auto& label : eval.localization.per_label) {
            iou_sum += label.best_iou;
            ++iou_n;
        }
    }
    const double mean_dsc = dsc_sum / dsc_n;
    const double mean_iou = iou_sum / iou_n;
    std::printf("  suite mean DSC %.4f over %ld rings, mean IoU %.4f over %ld labels\n",
                mean_dsc, dsc_n, mean_iou, iou_n);
    EXPECT_GE(mean_dsc, 0.90);
    EXPECT_GE(mean_iou, 0.80);
    EXPECT_LT(elapsed_seconds(start), 300.0);
}

namespace {

double oracle_iou(const BoundingBox& a, const BoundingBox& b) {
    const double ax1 = a.x + a.w, ay1 = a.y + a.h;
    const double bx1 = b.x + b.w, by1 = b.y + b.h;
    const double iw = std::min(ax1, bx1) - std::max(a.x, b.x);
    const double ih = std::min(ay1, by1) - std::max(a.y, b.y);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    return inter / (a.w * a.h + b.w * b.h - inter);
}

}  // namespace

TEST(Acceptance, C10_MetricOracles) {
    CRITERION(10, "dice/iou/pearson/wall_area match brute force to 1e-9");
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> coord(-20.0, 20.0);
    std::uniform_real_distribution<double> size(0.5, 30.0);
    std::bernoulli_distribution bit(0.4);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::uniform_real_distribution<double> spacing(0.1, 3.0);
    std::uniform_int_distribution<int> dims(1, 12);

    for (int trial = 0; trial < 1000; ++trial) {
        // IoU vs an independently coded rectangle-overlap evaluation.
        BoundingBox a, b;
        a.x = coord(rng);
        a.y = coord(rng);
        a.w = size(rng);
        a.h = size(rng);
        a.score = 0.5;
        b.x = coord(rng);
        b.y = coord(rng);
        b.w = size(rng);
        b.h = size(rng);
        b.score = 0.5;
        EXPECT_NEAR(iou(a, b), oracle_iou(a, b), 1e-9);

        // Dice and wall_area vs direct set counting.
        const int w = dims(rng), h = dims(rng);
        Image2D ma(w, h, 0.0f), mb(w, h, 0.0f);
        long na = 0, nb = 0, inter = 0;
        for (int i = 0; i < w * h; ++i) {
            const bool pa = bit(rng), pb = bit(rng);
            ma.data[static_cast<size_t>(i)] = pa ? 1.0f : 0.0f;
            mb.data[static_cast<size_t>(i)] = pb ? 1.0f : 0.0f;
            na += pa;
            nb += pb;
            inter += pa && pb;
        }
        const double expected_dice =
            (na + nb == 0) ? 1.0 : 2.0 * static_cast<double>(inter) / (na + nb);
        EXPECT_NEAR(dice(ma, mb), expected_dice, 1e-9);
        const double dx = spacing(rng), dy = spacing(rng);
        EXPECT_NEAR(wall_area(ma, dx, dy), static_cast<double>(na) * dx * dy, 1e-9);

        // Pearson vs the textbook formula evaluated directly.
        std::vector<double> xs(6), ys(6);
        for (int i = 0; i < 6; ++i) {
            xs[static_cast<size_t>(i)] = val(rng);
            ys[static_cast<size_t>(i)] = val(rng);
        }
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (int i = 0; i < 6; ++i) {
            sx += xs[static_cast<size_t>(i)];
            sy += ys[static_cast<size_t>(i)];
            sxx += xs[static_cast<size_t>(i)] * xs[static_cast<size_t>(i)];
            syy += ys[static_cast<size_t>(i)] * ys[static_cast<size_t>(i)];
            sxy += xs[static_cast<size_t>(i)] * ys[static_cast<size_t>(i)];
        }
        const double n = 6.0;
        const double denom = std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy);
        if (denom > 1e-9)
            EXPECT_NEAR(pearson(xs, ys), (n * sxy - sx * sy) / denom, 1e-9);
    }

    EXPECT_EQ(pearson({1, 2, 3, 4}, {1, 3, 2, 4}), 0.8);
}

TEST(Acceptance, C11_PipelineDeterminismAcrossWorkerCounts) {
    CRITERION(11, "pipeline outputs byte-identical at worker counts 1 and 8");
    const auto suite = default_suite();
    TempDir dir_a("acceptance_c11_a"), dir_b("acceptance_c11_b");
    for (const auto* dir : {&dir_a, &dir_b}) {
        detail::write_json_file(*dir / "spec.json", phantom_spec_to_json(suite[0]));
    }
    PipelineConfig cfg_a, cfg_b;
    cfg_a.paths.phantom_spec = (dir_a / "spec.json").string();
    cfg_a.paths.volume = (dir_a / "volume.json").string();
    cfg_a.workers = 1;
    cfg_b.paths.phantom_spec = (dir_b / "spec.json").string();
    cfg_b.paths.volume = (dir_b / "volume.json").string();
    cfg_b.workers = 8;

    RunReport ra, rb;
    stage_phantom(cfg_a, dir_a.path(), ra);
    stage_phantom(cfg_b, dir_b.path(), rb);
    run_pipeline(cfg_a, dir_a.path());
    run_pipeline(cfg_b, dir_b.path());

    int compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir_a.path())) {
        const std::string name = entry.path().filename().string();
        if (name == "run_report.json") {
            // Wall-clock timings differ by construction; everything else in
            // the report must match.
            auto ja = detail::parse_json_file(dir_a / name);
            auto jb = detail::parse_json_file(dir_b / name);
            ja.erase("timings");
            jb.erase("timings");
            EXPECT_EQ(ja.dump(), jb.dump());
            continue;
        }
        ASSERT_TRUE(std::filesystem::exists(dir_b / name)) << name;
        EXPECT_EQ(vwseg::testing::read_bytes(dir_a.path() / name),
                  vwseg::testing::read_bytes(dir_b.path() / name))
            << name;
        ++compared;
    }
    EXPECT_GT(compared, 10);
}
