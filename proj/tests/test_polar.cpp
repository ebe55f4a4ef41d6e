#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "test_util.hpp"
#include "vwseg/polar.hpp"

using namespace vwseg;

namespace {

// Independent brute-force bilinear sample, clamped like the production code.
double oracle_bilinear(const Image2D& img, double x, double y) {
    x = std::min(std::max(x, 0.0), static_cast<double>(img.width - 1));
    y = std::min(std::max(y, 0.0), static_cast<double>(img.height - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = x - x0, fy = y - y0;
    return (1 - fx) * (1 - fy) * img.at(x0, y0) + fx * (1 - fy) * img.at(x1, y0) +
           (1 - fx) * fy * img.at(x0, y1) + fx * fy * img.at(x1, y1);
}

Image2D ring_image(int size, double cx, double cy, double r_lumen, double r_outer,
                   float lumen_v, float bg_v, float wall_v) {
    Image2D img(size, size, bg_v);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double d = std::hypot(x - cx, y - cy);
            if (d <= r_outer) img.at(x, y) = d < r_lumen ? lumen_v : wall_v;
        }
    return img;
}

PolarPatch single_plane(Image2D img) {
    PolarPatch p;
    p.planes.push_back(std::move(img));
    return p;
}

}  // namespace

TEST(Upsample4x, PreservesConstants) {
    Image2D img(128, 128, 3.25f);
    const Image2D up = upsample4x(img);
    ASSERT_EQ(up.width, 512);
    ASSERT_EQ(up.height, 512);
    for (float v : up.data) EXPECT_FLOAT_EQ(v, 3.25f);
}

TEST(Upsample4x, LinearRampMatchesClosedForm) {
    Image2D img(128, 128);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x) img.at(x, y) = static_cast<float>(x);
    const Image2D up = upsample4x(img);
    for (int u = 0; u < 512; ++u) {
        const double sx = std::clamp((u + 0.5) / 4.0 - 0.5, 0.0, 127.0);
        EXPECT_NEAR(up.at(u, 200), sx, 1e-4) << "u=" << u;
    }
}

TEST(Upsample4x, SinglebrightPixelTentMass) {
    Image2D img(128, 128, 0.0f);
    img.at(64, 64) = 1.0f;
    const Image2D up = upsample4x(img);
    double mass = 0.0;
    for (float v : up.data) mass += v;
    EXPECT_NEAR(mass, 16.0, 1e-3);
    // Response is confined to the 8-pixel neighborhood of the source.
    EXPECT_EQ(up.at(4 * 64 + 20, 4 * 64), 0.0f);
    EXPECT_GT(up.at(4 * 64 + 1, 4 * 64 + 1), 0.0f);
}

TEST(Upsample4x, MatchesBruteForceOracle) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    Image2D img(128, 128);
    for (float& v : img.data) v = dist(rng);
    const Image2D up = upsample4x(img);
    std::uniform_int_distribution<int> pick(0, 511);
    for (int i = 0; i < 2000; ++i) {
        const int u = pick(rng), v = pick(rng);
        const double sx = (u + 0.5) / 4.0 - 0.5;
        const double sy = (v + 0.5) / 4.0 - 0.5;
        EXPECT_NEAR(up.at(u, v), oracle_bilinear(img, sx, sy), 1e-5);
    }
}

TEST(Upsample4x, WrongSizeIsError) {
    EXPECT_THROW(upsample4x(Image2D(64, 64)), std::invalid_argument);
    EXPECT_THROW(upsample4x(Image2D(128, 127)), std::invalid_argument);
}

TEST(ToPolar, PreservesConstants) {
    const Image2D p = to_polar(Image2D(512, 512, 1.75f));
    for (float v : p.data) EXPECT_FLOAT_EQ(v, 1.75f);
}

TEST(ToPolar, OriginSamplesCenterPixel) {
    Image2D img(512, 512, 0.0f);
    img.at(256, 256) = 7.0f;
    const Image2D p = to_polar(img);
    EXPECT_FLOAT_EQ(p.at(0, 0), 7.0f);  // theta 0, rho 0 -> I[256, 256]
}

TEST(ToPolar, NinetyDegreesSamplesPlusY) {
    Image2D img(512, 512, 0.0f);
    img.at(256, 356) = 5.0f;  // x = 256, y = 356
    const Image2D p = to_polar(img);
    // theta index 45 -> 90 degrees: y = 256 + 100*sin(90) = 356, x = 256.
    EXPECT_FLOAT_EQ(p.at(100, 45), 5.0f);
}

TEST(ToPolar, SamplingCoordsMatchBruteForceFormula) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> theta(0.0, 180.0);
    std::uniform_real_distribution<double> rho(0.0, 256.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = theta(rng), r = rho(rng);
        const Vec2 c = polar_sample_coords(t, r);
        const double ang = t * (360.0 / 180.0) * std::numbers::pi / 180.0;
        EXPECT_NEAR(c.x, 256.0 + r * std::cos(ang), 1e-9);
        EXPECT_NEAR(c.y, 256.0 + r * std::sin(ang), 1e-9);
        EXPECT_GE(c.x, 0.0);
        EXPECT_LE(c.x, 512.0);
    }
}

TEST(ToPolar, BrightCircleBecomesVerticalBand) {
    const Image2D img = ring_image(512, 256.0, 256.0, 77.0, 83.0, 0.0f, 0.0f, 1.0f);
    const Image2D p = to_polar(img);
    for (int t = 0; t < kPolarHeight; ++t) {
        int argmax = 0;
        float best = -1.0f;
        for (int r = 0; r < kPolarWidth; ++r)
            if (p.at(r, t) > best) {
                best = p.at(r, t);
                argmax = r;
            }
        EXPECT_NEAR(argmax, 80, 4) << "theta row " << t;
    }
}

TEST(FromPolar, ConstantBecomesDisk) {
    Image2D polar = make_polar_image(2.5f);
    const Image2D img = from_polar(polar);
    EXPECT_FLOAT_EQ(img.at(256, 256), 2.5f);
    EXPECT_FLOAT_EQ(img.at(256 + 100, 256), 2.5f);
    EXPECT_FLOAT_EQ(img.at(511, 256), 2.5f);  // radius 255, inside
    EXPECT_FLOAT_EQ(img.at(0, 0), 0.0f);      // radius > 256
    EXPECT_FLOAT_EQ(img.at(0, 256), 0.0f);    // radius exactly 256
    EXPECT_FLOAT_EQ(img.at(256, 0), 0.0f);
}

TEST(FromPolar, BandMaskBecomesAnnulus) {
    Image2D polar = make_polar_image(0.0f);
    for (int t = 0; t < kPolarHeight; ++t)
        for (int r = 60; r <= 90; ++r) polar.at(r, t) = 1.0f;
    const Image2D mask = from_polar_binary(polar);
    struct Probe {
        double radius;
        float expected;
    };
    const Probe probes[] = {{0.0, 0.0f}, {40.0, 0.0f}, {75.0, 1.0f}, {110.0, 0.0f},
                            {300.0, 0.0f}};
    for (const auto& probe : probes) {
        for (int deg = 0; deg < 360; deg += 17) {
            const double a = deg * std::numbers::pi / 180.0;
            const int x = static_cast<int>(std::lround(256.0 + probe.radius * std::cos(a)));
            const int y = static_cast<int>(std::lround(256.0 + probe.radius * std::sin(a)));
            if (x < 0 || x >= 512 || y < 0 || y >= 512) continue;
            EXPECT_EQ(mask.at(x, y), probe.expected)
                << "radius " << probe.radius << " deg " << deg;
        }
    }
}

TEST(FromPolar, RoundTripWithinTolerance) {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> center(246.0, 266.0);
    std::uniform_real_distribution<double> rl(40.0, 120.0);
    const Image2D base =
        ring_image(512, center(rng), center(rng), rl(rng), rl(rng) + 30.0, 0.1f, 0.35f, 0.95f);
    const Image2D smooth = vwseg::testing::gaussian_blur(base, 2.0);
    const Image2D rt = from_polar(to_polar(smooth));

    float lo = smooth.data[0], hi = smooth.data[0];
    for (float v : smooth.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double err_sum = 0.0;
    long count = 0;
    for (int y = 0; y < 512; ++y)
        for (int x = 0; x < 512; ++x) {
            if (std::hypot(x - 256.0, y - 256.0) >= 250.0) continue;
            err_sum += std::abs(static_cast<double>(rt.at(x, y)) - smooth.at(x, y));
            ++count;
        }
    const double mean_err = err_sum / count;
    EXPECT_LT(mean_err, 0.02 * (hi - lo));
}

TEST(ToPolar, RotationBecomesCyclicShift) {
    // A ring plus an off-center blob makes the angular content non-trivial.
    Image2D base = ring_image(512, 256.0, 256.0, 70.0, 110.0, 0.1f, 0.35f, 0.95f);
    for (int y = 150; y < 190; ++y)
        for (int x = 280; x < 330; ++x) base.at(x, y) = 0.8f;
    const Image2D smooth = vwseg::testing::gaussian_blur(base, 3.0);

    const int k = 23;  // rotate by 46 degrees
    const double ang = k * kDegPerThetaRow * std::numbers::pi / 180.0;
    Image2D rotated(512, 512);
    for (int y = 0; y < 512; ++y)
        for (int x = 0; x < 512; ++x) {
            const double dx = x - 256.0, dy = y - 256.0;
            const double sx = 256.0 + std::cos(ang) * dx + std::sin(ang) * dy;
            const double sy = 256.0 - std::sin(ang) * dx + std::cos(ang) * dy;
            rotated.at(x, y) = static_cast<float>(oracle_bilinear(smooth, sx, sy));
        }

    const Image2D p = to_polar(smooth);
    const Image2D pr = to_polar(rotated);
    float lo = smooth.data[0], hi = smooth.data[0];
    for (float v : smooth.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double err = 0.0;
    for (int t = 0; t < kPolarHeight; ++t)
        for (int r = 0; r < kPolarWidth; ++r)
            err += std::abs(static_cast<double>(pr.at(r, (t + k) % kPolarHeight)) - p.at(r, t));
    err /= kPolarHeight * kPolarWidth;
    EXPECT_LT(err, 0.02 * (hi - lo));
}

TEST(WindowSplit, Stride20GivesNineWindowsDoubleCoverage) {
    PolarPatch p = single_plane(make_polar_image(1.0f));
    const WindowSet ws = window_split(p, 40, 20);
    ASSERT_EQ(ws.windows.size(), 9u);
    for (size_t i = 0; i < 9; ++i) EXPECT_EQ(ws.offsets[i], static_cast<int>(i) * 20);
    std::vector<int> coverage(kPolarHeight, 0);
    for (int off : ws.offsets)
        for (int row = 0; row < 40; ++row) coverage[(off + row) % kPolarHeight]++;
    for (int c : coverage) EXPECT_EQ(c, 2);
}

TEST(WindowSplit, Stride40WrapsLastWindow) {
    Image2D img = make_polar_image();
    for (int t = 0; t < kPolarHeight; ++t)
        for (int r = 0; r < kPolarWidth; ++r) img.at(r, t) = static_cast<float>(t);
    const WindowSet ws = window_split(single_plane(img), 40, 40);
    ASSERT_EQ(ws.windows.size(), 5u);
    EXPECT_EQ(ws.offsets.back(), 160);
    const Image2D& last = ws.windows.back()[0];
    EXPECT_FLOAT_EQ(last.at(0, 0), 160.0f);
    EXPECT_FLOAT_EQ(last.at(0, 19), 179.0f);
    EXPECT_FLOAT_EQ(last.at(0, 20), 0.0f);  // wrapped to theta row 0
    EXPECT_FLOAT_EQ(last.at(0, 39), 19.0f);
}

TEST(WindowSplit, FullHeightSingleWindowIsWholePatch) {
    Image2D img = make_polar_image();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    for (float& v : img.data) v = dist(rng);
    const WindowSet ws = window_split(single_plane(img), 180, 180);
    ASSERT_EQ(ws.windows.size(), 1u);
    EXPECT_EQ(ws.windows[0][0], img);
}

TEST(WindowSplit, RejectsBadGeometry) {
    PolarPatch p = single_plane(make_polar_image());
    EXPECT_THROW(window_split(p, 40, 0), std::invalid_argument);
    EXPECT_THROW(window_split(p, 40, 41), std::invalid_argument);
    EXPECT_THROW(window_split(p, 181, 20), std::invalid_argument);
}

TEST(WindowMerge, ConstantWindowsStayConstant) {
    PolarPatch p = single_plane(make_polar_image(0.7f));
    const WindowSet ws = window_split(p, 40, 20);
    std::vector<Image2D> preds;
    for (const auto& w : ws.windows) preds.push_back(w[0]);
    const ProbabilityMap merged = window_merge(preds, ws.offsets, 40);
    for (double v : merged.data) EXPECT_DOUBLE_EQ(v, 0.7f);
}

TEST(WindowMerge, OverlapAveragesTwoValues) {
    // Full double coverage from two full-height windows: every pixel becomes
    // the mean of 0.2 and 0.8.
    std::vector<Image2D> preds = {Image2D(kPolarWidth, 180, 0.2f),
                                  Image2D(kPolarWidth, 180, 0.8f)};
    std::vector<int> offsets = {0, 90};
    const ProbabilityMap merged = window_merge(preds, offsets, 180);
    for (double v : merged.data)
        EXPECT_DOUBLE_EQ(v, (static_cast<double>(0.2f) + static_cast<double>(0.8f)) / 2.0);

    // Stride-20 tiling with one hot window: only its rows move toward 0.8.
    std::vector<Image2D> tile(9, Image2D(kPolarWidth, 40, 0.2f));
    tile[0] = Image2D(kPolarWidth, 40, 0.8f);
    std::vector<int> tile_offsets;
    for (int k = 0; k < 9; ++k) tile_offsets.push_back(20 * k);
    const ProbabilityMap m2 = window_merge(tile, tile_offsets, 40);
    const double mean = (static_cast<double>(0.2f) + static_cast<double>(0.8f)) / 2.0;
    EXPECT_DOUBLE_EQ(m2.at(0, 10), mean);  // rows 0..39 overlap the hot window
    EXPECT_DOUBLE_EQ(m2.at(0, 30), mean);
    EXPECT_DOUBLE_EQ(m2.at(0, 50), 0.2f);  // untouched rows
    EXPECT_DOUBLE_EQ(m2.at(0, 170), 0.2f);
}

TEST(WindowMerge, UncoveredRowsAreRejected) {
    std::vector<Image2D> preds = {Image2D(kPolarWidth, 40, 0.2f)};
    std::vector<int> offsets = {0};
    EXPECT_THROW(window_merge(preds, offsets, 40), std::logic_error);
}

TEST(WindowMerge, SplitMergeIsLosslessForAllStrides) {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    for (const int stride : {10, 20, 40}) {
        Image2D img = make_polar_image();
        for (float& v : img.data) v = dist(rng);
        const WindowSet ws = window_split(single_plane(img), 40, stride);
        std::vector<Image2D> preds;
        for (const auto& w : ws.windows) preds.push_back(w[0]);
        const ProbabilityMap merged = window_merge(preds, ws.offsets, 40);
        ASSERT_TRUE(merged.same_shape(img));
        for (size_t i = 0; i < merged.data.size(); ++i)
            ASSERT_EQ(merged.data[i], static_cast<double>(img.data[i]))
                << "stride " << stride << " index " << i;
    }
}

TEST(WindowMerge, RejectsShapeMismatch) {
    std::vector<Image2D> preds = {Image2D(kPolarWidth, 39, 0.0f)};
    std::vector<int> offsets = {0};
    EXPECT_THROW(window_merge(preds, offsets, 40), std::invalid_argument);
    EXPECT_THROW(window_merge({}, {}, 40), std::invalid_argument);
}
