#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "vwseg/types.hpp"

namespace vwseg {

/// Bilinear sample at fractional index coordinates, border-clamped.
inline double bilinear(const Image2D& img, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    const int x0 = std::min(static_cast<int>(x), img.width - 2 >= 0 ? img.width - 2 : 0);
    const int y0 = std::min(static_cast<int>(y), img.height - 2 >= 0 ? img.height - 2 : 0);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
    const double bot = (1.0 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
    return (1.0 - fy) * top + fy * bot;
}

/// 4x bilinear upsampling under the pixel-center convention: output (u, v)
/// samples the input at ((u+0.5)/4 - 0.5, (v+0.5)/4 - 0.5).
inline Image2D upsample4x(const Image2D& img) {
    if (img.width != kPatchSize || img.height != kPatchSize)
        throw std::invalid_argument("upsample4x: input must be 128x128");
    Image2D out(kUpsampledSize, kUpsampledSize);
    for (int v = 0; v < kUpsampledSize; ++v) {
        const double sy = (v + 0.5) / kUpsampleScale - 0.5;
        for (int u = 0; u < kUpsampledSize; ++u) {
            const double sx = (u + 0.5) / kUpsampleScale - 0.5;
            out.at(u, v) = static_cast<float>(bilinear(img, sx, sy));
        }
    }
    return out;
}

/// Cartesian sampling location for polar cell (theta_idx, rho):
/// x = 256 + rho*cos(theta_idx * 2 deg), y = 256 + rho*sin(theta_idx * 2 deg).
inline Vec2 polar_sample_coords(double theta_idx, double rho) {
    const double ang = theta_idx * kDegPerThetaRow * std::numbers::pi / 180.0;
    return {256.0 + rho * std::cos(ang), 256.0 + rho * std::sin(ang)};
}

/// Forward polar transform of a 512x512 image into 180 theta rows x 256 rho
/// columns. Every sample location lies inside the image, so no padding.
inline Image2D to_polar(const Image2D& img) {
    if (img.width != kUpsampledSize || img.height != kUpsampledSize)
        throw std::invalid_argument("to_polar: input must be 512x512");
    Image2D out = make_polar_image();
    for (int t = 0; t < kPolarHeight; ++t) {
        const double ang = t * kDegPerThetaRow * std::numbers::pi / 180.0;
        const double c = std::cos(ang);
        const double s = std::sin(ang);
        for (int r = 0; r < kPolarWidth; ++r) {
            out.at(r, t) = static_cast<float>(bilinear(img, 256.0 + r * c, 256.0 + r * s));
        }
    }
    return out;
}

inline PolarPatch to_polar(const std::vector<Image2D>& planes) {
    PolarPatch p;
    p.planes.reserve(planes.size());
    for (const auto& plane : planes) p.planes.push_back(to_polar(plane));
    return p;
}

namespace detail {

// Bilinear sample of a polar image with theta wraparound and rho clamping.
inline double sample_polar(const Image2D& polar, double theta_idx, double rho) {
    const int t0 = static_cast<int>(std::floor(theta_idx)) % kPolarHeight;
    const int t1 = (t0 + 1) % kPolarHeight;
    const double ft = theta_idx - std::floor(theta_idx);
    rho = std::clamp(rho, 0.0, static_cast<double>(kPolarWidth - 1));
    const int r0 = std::min(static_cast<int>(rho), kPolarWidth - 2);
    const int r1 = r0 + 1;
    const double fr = rho - r0;
    const double a = (1.0 - fr) * polar.at(r0, t0) + fr * polar.at(r1, t0);
    const double b = (1.0 - fr) * polar.at(r0, t1) + fr * polar.at(r1, t1);
    return (1.0 - ft) * a + ft * b;
}

}  // namespace detail

/// Inverse polar transform back to 512x512; pixels at radius >= 256 from the
/// patch center are 0.
inline Image2D from_polar(const Image2D& polar) {
    check_polar_shape(polar, "from_polar");
    Image2D out(kUpsampledSize, kUpsampledSize, 0.0f);
    for (int y = 0; y < kUpsampledSize; ++y) {
        const double dy = y - 256.0;
        for (int x = 0; x < kUpsampledSize; ++x) {
            const double dx = x - 256.0;
            const double rho = std::hypot(dx, dy);
            if (rho >= static_cast<double>(kPolarWidth)) continue;
            double deg = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
            if (deg < 0.0) deg += 360.0;
            const double theta_idx = deg / kDegPerThetaRow;
            out.at(x, y) = static_cast<float>(detail::sample_polar(polar, theta_idx, rho));
        }
    }
    return out;
}

/// Inverse polar transform for a binary mask: sampled values are thresholded
/// at 0.5.
inline Image2D from_polar_binary(const Image2D& polar) {
    Image2D out = from_polar(polar);
    for (float& v : out.data) v = (v >= 0.5f) ? 1.0f : 0.0f;
    return out;
}

struct WindowSet {
    std::vector<std::vector<Image2D>> windows;  // per window: one plane per slice
    std::vector<int> offsets;                   // starting theta row of each window
    int height = 40;
    int stride = 20;
};

/// Cyclic sliding-window split along theta: offsets 0, stride, 2*stride, ...
/// wrapping modulo 180 until every row is covered.
inline WindowSet window_split(const PolarPatch& p, int height, int stride) {
    if (height < 1 || height > kPolarHeight)
        throw std::invalid_argument("window_split: height must be in [1, 180]");
    if (stride < 1 || stride > height)
        throw std::invalid_argument("window_split: require 1 <= stride <= height");
    if (p.planes.empty()) throw std::invalid_argument("window_split: empty patch");
    for (const auto& plane : p.planes) check_polar_shape(plane, "window_split");

    WindowSet ws;
    ws.height = height;
    ws.stride = stride;
    const int n_windows = (kPolarHeight + stride - 1) / stride;
    for (int k = 0; k < n_windows; ++k) {
        const int offset = k * stride;
        std::vector<Image2D> planes;
        planes.reserve(p.planes.size());
        for (const auto& src : p.planes) {
            Image2D win(kPolarWidth, height);
            for (int row = 0; row < height; ++row) {
                const int src_row = (offset + row) % kPolarHeight;
                std::copy_n(src.data.begin() + static_cast<size_t>(src_row) * kPolarWidth,
                            kPolarWidth, win.data.begin() + static_cast<size_t>(row) * kPolarWidth);
            }
            planes.push_back(std::move(win));
        }
        ws.windows.push_back(std::move(planes));
        ws.offsets.push_back(offset);
    }
    return ws;
}

/// Averages per-window predictions into a full-height map; overlapped rows
/// (wrapped coverage included) take the arithmetic mean, kept at double
/// precision so equal inputs merge without rounding drift.
inline ProbabilityMap window_merge(const std::vector<Image2D>& preds,
                                   const std::vector<int>& offsets, int height) {
    if (preds.size() != offsets.size())
        throw std::invalid_argument("window_merge: prediction count does not match offsets");
    if (preds.empty()) throw std::invalid_argument("window_merge: no predictions");
    for (const auto& pred : preds)
        if (pred.width != kPolarWidth || pred.height != height)
            throw std::invalid_argument("window_merge: prediction shape mismatch");

    std::vector<double> sum(static_cast<size_t>(kPolarWidth) * kPolarHeight, 0.0);
    std::vector<int> count(static_cast<size_t>(kPolarWidth) * kPolarHeight, 0);
    for (size_t wi = 0; wi < preds.size(); ++wi) {
        for (int row = 0; row < height; ++row) {
            const int t = (offsets[wi] + row) % kPolarHeight;
            for (int r = 0; r < kPolarWidth; ++r) {
                const size_t idx = static_cast<size_t>(t) * kPolarWidth + r;
                sum[idx] += preds[wi].at(r, row);
                ++count[idx];
            }
        }
    }

    ProbabilityMap out = make_polar_map();
    for (int t = 0; t < kPolarHeight; ++t) {
        for (int r = 0; r < kPolarWidth; ++r) {
            const size_t idx = static_cast<size_t>(t) * kPolarWidth + r;
            if (count[idx] == 0)
                throw std::logic_error("window_merge: uncovered theta row");
            out.at(r, t) = sum[idx] / count[idx];
        }
    }
    return out;
}

}  // namespace vwseg
