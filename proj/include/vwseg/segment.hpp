#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "vwseg/polar.hpp"
#include "vwseg/tracklet.hpp"
#include "vwseg/types.hpp"

namespace vwseg {

/// Maps one polar window (window_height x 256 x n_slices) to a probability
/// image of the same height, deterministically.
class SegmenterBackend {
public:
    virtual ~SegmenterBackend() = default;
    virtual std::string name() const = 0;
    virtual int n_slices() const = 0;
    virtual Image2D run(const std::vector<Image2D>& window_planes) const = 0;
};

namespace detail {

inline Image2D gaussian_smooth_rho(const Image2D& img, double sigma) {
    if (sigma <= 0.0) return img;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<size_t>(2 * radius + 1));
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<size_t>(i + radius)] = std::exp(-0.5 * (i / sigma) * (i / sigma));
        ksum += kernel[static_cast<size_t>(i + radius)];
    }
    for (double& k : kernel) k /= ksum;

    Image2D out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xx = std::clamp(x + i, 0, img.width - 1);
                acc += kernel[static_cast<size_t>(i + radius)] * img.at(xx, y);
            }
            out.at(x, y) = static_cast<float>(acc);
        }
    }
    return out;
}

}  // namespace detail

/// Deterministic reference segmenter: smooths the center plane along rho and
/// min-max normalizes it to [0, 1]; a constant window becomes 0.5 everywhere.
/// Bright-wall inputs thus produce high probability on the wall band.
class OracleSegmenter : public SegmenterBackend {
public:
    OracleSegmenter(double smooth_sigma, int n_slices)
        : sigma_(smooth_sigma), n_slices_(n_slices) {
        if (n_slices != 1 && n_slices != 3)
            throw std::invalid_argument("OracleSegmenter: n_slices must be 1 or 3");
    }

    std::string name() const override { return "oracle"; }
    int n_slices() const override { return n_slices_; }

    Image2D run(const std::vector<Image2D>& planes) const override {
        if (planes.empty()) throw std::invalid_argument("OracleSegmenter: empty window");
        const Image2D center = detail::gaussian_smooth_rho(planes[planes.size() / 2], sigma_);
        float lo = center.data.front(), hi = center.data.front();
        for (float v : center.data) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        Image2D out(center.width, center.height);
        if (hi - lo < 1e-12f) {
            std::fill(out.data.begin(), out.data.end(), 0.5f);
            return out;
        }
        for (size_t i = 0; i < center.data.size(); ++i)
            out.data[i] = (center.data[i] - lo) / (hi - lo);
        return out;
    }

private:
    double sigma_;
    int n_slices_;
};

/// Passes the center plane through unchanged; used to feed precomputed
/// probability maps (e.g. from an external segmenter) into the pipeline.
class IdentitySegmenter : public SegmenterBackend {
public:
    explicit IdentitySegmenter(int n_slices = 1) : n_slices_(n_slices) {}

    std::string name() const override { return "identity"; }
    int n_slices() const override { return n_slices_; }

    Image2D run(const std::vector<Image2D>& planes) const override {
        if (planes.empty()) throw std::invalid_argument("IdentitySegmenter: empty window");
        return planes[planes.size() / 2];
    }

private:
    int n_slices_;
};

struct PredictOutcome {
    ProbabilityMap map;
    int clamped = 0;  // backend outputs outside [0, 1], clamped with a warning count
};

/// Runs the backend window by window and averages overlaps into one map.
inline PredictOutcome predict(const SegmenterBackend& backend, const WindowSet& ws) {
    if (ws.windows.empty()) throw std::invalid_argument("predict: empty window set");
    if (static_cast<int>(ws.windows.front().size()) != backend.n_slices())
        throw std::invalid_argument("predict: backend n_slices does not match window planes");

    PredictOutcome out;
    std::vector<Image2D> preds;
    preds.reserve(ws.windows.size());
    for (const auto& planes : ws.windows) {
        Image2D p = backend.run(planes);
        if (p.width != kPolarWidth || p.height != ws.height)
            throw std::runtime_error("predict: backend returned wrong shape");
        for (float& v : p.data) {
            if (v < 0.0f || v > 1.0f) {
                v = std::clamp(v, 0.0f, 1.0f);
                ++out.clamped;
            }
        }
        preds.push_back(std::move(p));
    }
    out.map = window_merge(preds, ws.offsets, ws.height);
    return out;
}

/// Central-difference gradient of the map along rho, border-replicated.
inline ImageD radial_gradient(const ProbabilityMap& m) {
    check_polar_shape(m, "radial_gradient");
    ImageD g = make_polar_map();
    for (int t = 0; t < kPolarHeight; ++t) {
        for (int r = 0; r < kPolarWidth; ++r) {
            const int rp = std::min(r + 1, kPolarWidth - 1);
            const int rm = std::max(r - 1, 0);
            g.at(r, t) = 0.5 * (m.at(rp, t) - m.at(rm, t));
        }
    }
    return g;
}

struct InitialContours {
    PolarContour lumen;
    PolarContour outer;
    bool degenerate = false;  // flat gradient row or no admissible outer position
};

/// Per theta row: lumen at the maximum radial gradient (ties to smaller rho),
/// outer at the minimum gradient beyond the lumen (ties to larger rho).
inline InitialContours init_contours(const ProbabilityMap& m) {
    const ImageD g = radial_gradient(m);
    InitialContours out;
    out.lumen.role = ContourRole::lumen;
    out.outer.role = ContourRole::outer;
    for (int t = 0; t < kPolarHeight; ++t) {
        int lumen_r = 0;
        double best = g.at(0, t);
        double row_min = g.at(0, t), row_max = g.at(0, t);
        for (int r = 1; r < kPolarWidth; ++r) {
            const double v = g.at(r, t);
            row_min = std::min(row_min, v);
            row_max = std::max(row_max, v);
            if (v > best) {
                best = v;
                lumen_r = r;
            }
        }
        if (row_max == row_min) out.degenerate = true;

        int outer_r = kPolarWidth - 1;
        if (lumen_r >= kPolarWidth - 1) {
            out.degenerate = true;
        } else {
            double worst = g.at(lumen_r + 1, t);
            outer_r = lumen_r + 1;
            for (int r = lumen_r + 2; r < kPolarWidth; ++r) {
                if (g.at(r, t) <= worst) {  // ties take the larger rho
                    worst = g.at(r, t);
                    outer_r = r;
                }
            }
        }
        out.lumen.rho[static_cast<size_t>(t)] = lumen_r;
        out.outer.rho[static_cast<size_t>(t)] = outer_r;
    }
    return out;
}

struct SnakeParams {
    double alpha = 0.1;  // elasticity
    double beta = 0.1;   // stiffness
    double gamma = 1.0;  // image term
    int max_iter = 100;
};

namespace detail {

// Linear interpolation of the gradient row at fractional rho.
inline double sample_gradient(const ImageD& g, int t, double rho) {
    rho = std::clamp(rho, 0.0, static_cast<double>(kPolarWidth - 1));
    const int r0 = std::min(static_cast<int>(rho), kPolarWidth - 2);
    const double fr = rho - r0;
    return (1.0 - fr) * g.at(r0, t) + fr * g.at(r0 + 1, t);
}

inline double external_energy(const ImageD& g, ContourRole role, int t, double rho) {
    const double v = sample_gradient(g, t, rho);
    return role == ContourRole::lumen ? -v : v;
}

// All energy terms that involve rho(t): the two adjacent elasticity terms,
// the three curvature terms touching t, and the external term at t.
inline double local_energy(const std::array<double, kPolarHeight>& rho, const ImageD& g,
                           ContourRole role, const SnakeParams& p, int t, double value) {
    auto at = [&](int idx) -> double {
        const int m = ((idx % kPolarHeight) + kPolarHeight) % kPolarHeight;
        return m == t ? value : rho[static_cast<size_t>(m)];
    };
    double e = 0.0;
    e += p.alpha * (at(t) - at(t - 1)) * (at(t) - at(t - 1));
    e += p.alpha * (at(t + 1) - at(t)) * (at(t + 1) - at(t));
    for (int c = t - 1; c <= t + 1; ++c) {
        const double d2 = at(c + 1) - 2.0 * at(c) + at(c - 1);
        e += p.beta * d2 * d2;
    }
    e += p.gamma * external_energy(g, role, t, value);
    return e;
}

}  // namespace detail

/// Total snake energy of a contour over the given map.
inline double snake_energy(const PolarContour& c, const ProbabilityMap& m, const SnakeParams& p) {
    const ImageD g = radial_gradient(m);
    double e = 0.0;
    for (int t = 0; t < kPolarHeight; ++t) {
        const double cur = c.rho[static_cast<size_t>(t)];
        const double next = c.rho[static_cast<size_t>((t + 1) % kPolarHeight)];
        const double prev = c.rho[static_cast<size_t>((t + kPolarHeight - 1) % kPolarHeight)];
        e += p.alpha * (next - cur) * (next - cur);
        const double d2 = next - 2.0 * cur + prev;
        e += p.beta * d2 * d2;
        e += p.gamma * detail::external_energy(g, c.role, t, cur);
    }
    return e;
}

struct SnakeResult {
    PolarContour contour;
    std::vector<double> sweep_energies;  // total energy after each sweep
    int sweeps = 0;
};

/// Periodic radius-function snake minimized by per-node coordinate search
/// over rho offsets {-1, -0.5, 0, +0.5, +1}; only energy-decreasing moves are
/// accepted, so the energy is non-increasing across sweeps.
inline SnakeResult snake_refine_traced(const PolarContour& c, const ProbabilityMap& m,
                                       const SnakeParams& p) {
    if (p.alpha < 0.0 || p.beta < 0.0 || p.gamma < 0.0)
        throw std::invalid_argument("snake_refine: weights must be >= 0");
    if (p.max_iter < 1) throw std::invalid_argument("snake_refine: max_iter must be >= 1");
    check_polar_shape(m, "snake_refine");

    const ImageD g = radial_gradient(m);
    SnakeResult res;
    res.contour = c;
    auto& rho = res.contour.rho;
    for (double v : rho)
        if (!(v >= 0.0 && v < static_cast<double>(kPolarWidth)))
            throw std::invalid_argument("snake_refine: contour rho out of [0, 256)");

    static constexpr double kOffsets[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (int sweep = 0; sweep < p.max_iter; ++sweep) {
        bool changed = false;
        for (int t = 0; t < kPolarHeight; ++t) {
            const double cur = rho[static_cast<size_t>(t)];
            double best_val = cur;
            double best_e = detail::local_energy(rho, g, c.role, p, t, cur);
            for (double off : kOffsets) {
                if (off == 0.0) continue;
                const double cand = std::clamp(cur + off, 0.0, 255.0);
                if (cand == cur) continue;
                const double e = detail::local_energy(rho, g, c.role, p, t, cand);
                if (e < best_e) {
                    best_e = e;
                    best_val = cand;
                }
            }
            if (best_val != cur) {
                rho[static_cast<size_t>(t)] = best_val;
                changed = true;
            }
        }
        ++res.sweeps;
        res.sweep_energies.push_back(snake_energy(res.contour, m, p));
        if (!changed) break;
    }
    return res;
}

inline PolarContour snake_refine(const PolarContour& c, const ProbabilityMap& m,
                                 const SnakeParams& p) {
    return snake_refine_traced(c, m, p).contour;
}

/// Restores lumen < outer at every theta row; returns true when a lift was
/// needed.
inline bool enforce_pairing(PolarContour& lumen, PolarContour& outer) {
    bool fixed = false;
    for (int t = 0; t < kPolarHeight; ++t) {
        double& lo = lumen.rho[static_cast<size_t>(t)];
        double& hi = outer.rho[static_cast<size_t>(t)];
        if (lo < hi) continue;
        fixed = true;
        if (lo + 1.0 <= 255.0) {
            hi = lo + 1.0;
        } else {
            lo = 254.0;
            hi = 255.0;
        }
    }
    return fixed;
}

/// Ring indicator: mask(theta, rho) = 1 iff lumen(theta) <= rho <= outer(theta).
inline Image2D wall_mask(const PolarContour& lumen, const PolarContour& outer) {
    Image2D mask = make_polar_image();
    for (int t = 0; t < kPolarHeight; ++t) {
        const double lo = lumen.rho[static_cast<size_t>(t)];
        const double hi = outer.rho[static_cast<size_t>(t)];
        for (int r = 0; r < kPolarWidth; ++r)
            if (lo <= r && r <= hi) mask.at(r, t) = 1.0f;
    }
    return mask;
}

/// Signed-mask confidence: the mask is resigned to +1 on the wall and -1 off it, so
/// the score is (sum of wall probabilities - sum of background probabilities)
/// divided by the wall pixel count. Exactly 1 iff the map is the {0,1}
/// indicator of the mask.
inline double seg_confidence(const ProbabilityMap& m, const Image2D& mask) {
    if (!m.same_shape(mask))
        throw std::invalid_argument("seg_confidence: map and mask shapes differ");
    double num = 0.0;
    long wall = 0;
    for (size_t i = 0; i < m.data.size(); ++i) {
        if (mask.data[i] > 0.0f) {
            num += m.data[i];
            ++wall;
        } else {
            num -= m.data[i];
        }
    }
    if (wall == 0) throw std::invalid_argument("seg_confidence: empty mask");
    return num / static_cast<double>(wall);
}

/// Converts paired polar contours into closed 180-vertex polygons in
/// original-volume pixel coordinates.
inline ContourSet restore_cartesian(const PolarContour& lumen, const PolarContour& outer,
                                    int x0, int y0, int z, int scale, double confidence = 0.0) {
    ContourSet out;
    out.slice = z;
    out.confidence = confidence;
    out.lumen.reserve(kPolarHeight);
    out.outer.reserve(kPolarHeight);
    for (int k = 0; k < kPolarHeight; ++k) {
        const double ang = k * kDegPerThetaRow * std::numbers::pi / 180.0;
        const double c = std::cos(ang), s = std::sin(ang);
        const double rl = lumen.rho[static_cast<size_t>(k)];
        const double ro = outer.rho[static_cast<size_t>(k)];
        out.lumen.push_back({(256.0 + rl * c) / scale + x0, (256.0 + rl * s) / scale + y0});
        out.outer.push_back({(256.0 + ro * c) / scale + x0, (256.0 + ro * s) / scale + y0});
    }
    return out;
}

/// Polar wall mask back to a 128x128 patch mask: inverse polar transform,
/// then 4x area-average downsampling thresholded at 0.5.
inline Image2D restore_mask_to_patch(const Image2D& polar_mask) {
    const Image2D up = from_polar_binary(polar_mask);
    Image2D out(kPatchSize, kPatchSize);
    for (int y = 0; y < kPatchSize; ++y) {
        for (int x = 0; x < kPatchSize; ++x) {
            double acc = 0.0;
            for (int dy = 0; dy < kUpsampleScale; ++dy)
                for (int dx = 0; dx < kUpsampleScale; ++dx)
                    acc += up.at(kUpsampleScale * x + dx, kUpsampleScale * y + dy);
            acc /= kUpsampleScale * kUpsampleScale;
            out.at(x, y) = (acc >= 0.5) ? 1.0f : 0.0f;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-slice composition used by the refinement loop and the pipeline.
// ---------------------------------------------------------------------------

struct SegmentParams {
    int patch_size = kPatchSize;
    int n_slices = 3;
    int window_height = 40;
    int window_stride = 20;
    SnakeParams snake;
};

struct SliceSegmentation {
    CartesianPatchStack crop;  // original-resolution planes
    ProbabilityMap prob;
    PolarContour lumen;
    PolarContour outer;
    Image2D polar_mask;
    double segconf = 0.0;
    bool init_degenerate = false;
    bool pairing_fixed = false;
    int clamped = 0;
};

/// Crop -> upsample -> polar -> windowed prediction -> contours -> snake ->
/// wall mask -> confidence, for one slice around one center point.
inline SliceSegmentation segment_slice(const Volume& v, Vec2 center, int z,
                                       const SegmenterBackend& backend,
                                       const SegmentParams& params) {
    SliceSegmentation out;
    out.crop = crop_patch_at(v, center, z, params.patch_size, params.n_slices);

    std::vector<Image2D> upsampled;
    upsampled.reserve(out.crop.planes.size());
    for (const auto& plane : out.crop.planes) upsampled.push_back(upsample4x(plane));
    const PolarPatch polar = to_polar(upsampled);
    const WindowSet ws = window_split(polar, params.window_height, params.window_stride);

    PredictOutcome pred = predict(backend, ws);
    out.clamped = pred.clamped;
    out.prob = std::move(pred.map);

    const InitialContours init = init_contours(out.prob);
    out.init_degenerate = init.degenerate;
    out.lumen = snake_refine(init.lumen, out.prob, params.snake);
    out.outer = snake_refine(init.outer, out.prob, params.snake);
    out.pairing_fixed = enforce_pairing(out.lumen, out.outer);

    out.polar_mask = wall_mask(out.lumen, out.outer);
    out.segconf = seg_confidence(out.prob, out.polar_mask);
    return out;
}

}  // namespace vwseg
