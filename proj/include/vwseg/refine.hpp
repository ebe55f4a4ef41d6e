#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "vwseg/parallel.hpp"
#include "vwseg/segment.hpp"
#include "vwseg/types.hpp"

namespace vwseg {

/// Signed lumen-center offset in upsampled-patch pixels, derived from
/// opposite-radius differences of the segmented lumen boundary.
struct CenterDeviation {
    double dx = 0.0;
    double dy = 0.0;
    int slice = 0;

    bool below(double threshold) const {
        return std::abs(dx) < threshold && std::abs(dy) < threshold;
    }
};

/// dx from the rho difference at 0 and 180 degrees, dy at 90 and 270 degrees
/// (theta index = degrees / 2). Halving turns the radius difference into the
/// center shift that equalizes opposite radii of a circle; for a lumen center
/// displaced by (ex, ey) from the patch center this measures (+ex, +ey).
inline CenterDeviation center_deviation(const PolarContour& lumen) {
    CenterDeviation d;
    d.dx = (lumen.rho[0] - lumen.rho[90]) / 2.0;
    d.dy = (lumen.rho[45] - lumen.rho[135]) / 2.0;
    return d;
}

struct RefineParams {
    double threshold = 4.0;  // upsampled pixels; 4 = one original pixel
    int max_iter = 10;
};

struct SliceRefinement {
    int slice = 0;
    int rounds = 0;
    double dx = 0.0;  // final measured deviation, upsampled pixels
    double dy = 0.0;
    bool converged = false;
    bool clamped = false;  // center shift hit the volume bounds
    bool failed = false;   // segmentation error; center left unchanged
    SliceSegmentation seg;
};

struct RefineOutcome {
    Centerline centerline;
    std::vector<SliceRefinement> slices;
};

namespace detail {

inline SliceRefinement refine_slice(const Volume& v, Vec2 point, int z,
                                    const SegmenterBackend& backend,
                                    const SegmentParams& seg_params, const RefineParams& rp,
                                    Vec2& final_point) {
    SliceRefinement info;
    info.slice = z;
    final_point = point;
    for (int round = 0; round < rp.max_iter; ++round) {
        ++info.rounds;
        try {
            info.seg = segment_slice(v, final_point, z, backend, seg_params);
        } catch (const std::exception&) {
            info.failed = true;
            return info;
        }
        const CenterDeviation d = center_deviation(info.seg.lumen);
        info.dx = d.dx;
        info.dy = d.dy;
        if (d.below(rp.threshold)) {
            info.converged = true;
            return info;
        }
        // Deviation is the lumen-center offset in upsampled pixels; move the
        // centerline point onto it in original pixels.
        Vec2 shifted{final_point.x + d.dx / kUpsampleScale,
                     final_point.y + d.dy / kUpsampleScale};
        const Vec2 clamped{std::clamp(shifted.x, 0.0, static_cast<double>(v.width - 1)),
                           std::clamp(shifted.y, 0.0, static_cast<double>(v.height - 1))};
        if (clamped.x != shifted.x || clamped.y != shifted.y) info.clamped = true;
        final_point = clamped;
    }
    return info;
}

}  // namespace detail

/// Iterates segmentation and re-centering per slice until both deviations
/// fall below the threshold or max_iter rounds elapse. Slices refine
/// independently; final contours come from the last executed round.
inline RefineOutcome refine_centerline(const Volume& v, const Centerline& c,
                                       const SegmenterBackend& backend,
                                       const SegmentParams& seg_params, const RefineParams& rp,
                                       int workers = 1) {
    if (rp.max_iter < 1) throw std::invalid_argument("refine_centerline: max_iter must be >= 1");
    if (c.z_start < 0 || c.z_end() >= v.depth)
        throw std::invalid_argument("refine_centerline: centerline exceeds volume slice range");

    RefineOutcome out;
    out.centerline = c;
    out.slices.resize(c.points.size());
    const int n = static_cast<int>(c.points.size());
    parallel_for(n, workers, [&](int i) {
        const int z = c.z_start + i;
        Vec2 final_point;
        out.slices[static_cast<size_t>(i)] =
            detail::refine_slice(v, c.points[static_cast<size_t>(i)], z, backend, seg_params,
                                 rp, final_point);
        out.centerline.points[static_cast<size_t>(i)] = final_point;
    });
    return out;
}

}  // namespace vwseg
