#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "vwseg/types.hpp"

namespace vwseg {

/// Intersection over union of two boxes; slice indices are ignored.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    return inter / (a.area() + b.area() - inter);
}

struct LossWeights {
    double w1 = 0.2;  // missing-slice count
    double w2 = 1.0;  // non-overlap
    double w3 = 1.0;  // shape change
};

struct ConnectionLoss {
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
    double total = 0.0;
};

/// Cost of joining tracklet a (earlier) to tracklet b (later): gap length,
/// 1 - IoU of the facing boxes, and the symmetric log-ratio of their shapes.
inline ConnectionLoss connection_loss(const Tracklet& a, const Tracklet& b,
                                      const LossWeights& w) {
    if (a.z_end() >= b.z_start())
        throw std::invalid_argument("connection_loss: tracklet a must end before b starts");
    const BoundingBox& last = a.boxes.back();
    const BoundingBox& first = b.boxes.front();
    ConnectionLoss loss;
    loss.l1 = static_cast<double>(b.z_start() - a.z_end() - 1);
    loss.l2 = 1.0 - iou(last, first);
    loss.l3 = std::abs(std::log(first.w / last.w)) + std::abs(std::log(first.h / last.h));
    loss.total = w.w1 * loss.l1 + w.w2 * loss.l2 + w.w3 * loss.l3;
    return loss;
}

/// Greedy slice-by-slice linking: a box on slice z+1 joins the tracklet whose
/// slice-z box has maximal IoU >= tau_link. Conflicts are resolved by IoU,
/// then larger summed tracklet score, then lower tracklet creation index.
inline std::vector<Tracklet> build_tracklets(std::vector<BoundingBox> dets, double tau_link) {
    if (!(tau_link > 0.0 && tau_link < 1.0))
        throw std::invalid_argument("build_tracklets: tau_link must be in (0, 1)");

    std::sort(dets.begin(), dets.end(), [](const BoundingBox& a, const BoundingBox& b) {
        return std::tie(a.slice, a.x, a.y, a.w, a.h, a.score, a.interpolated) <
               std::tie(b.slice, b.x, b.y, b.w, b.h, b.score, b.interpolated);
    });

    std::vector<Tracklet> tracklets;
    std::vector<double> scores;  // running non-interpolated score per tracklet

    size_t i = 0;
    while (i < dets.size()) {
        const int z = dets[i].slice;
        size_t j = i;
        while (j < dets.size() && dets[j].slice == z) ++j;

        // Tracklets whose last box sits on the previous slice.
        std::vector<size_t> active;
        for (size_t t = 0; t < tracklets.size(); ++t)
            if (tracklets[t].z_end() == z - 1) active.push_back(t);

        struct Candidate {
            double iou_val;
            double track_score;
            size_t track_idx;
            size_t box_idx;
        };
        std::vector<Candidate> cands;
        for (size_t bi = i; bi < j; ++bi) {
            for (size_t t : active) {
                const double v = iou(tracklets[t].boxes.back(), dets[bi]);
                if (v >= tau_link) cands.push_back({v, scores[t], t, bi});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.iou_val != b.iou_val) return a.iou_val > b.iou_val;
            if (a.track_score != b.track_score) return a.track_score > b.track_score;
            if (a.track_idx != b.track_idx) return a.track_idx < b.track_idx;
            return a.box_idx < b.box_idx;
        });

        std::vector<bool> box_used(j - i, false);
        std::vector<bool> track_used(tracklets.size(), false);
        for (const auto& c : cands) {
            if (box_used[c.box_idx - i] || track_used[c.track_idx]) continue;
            box_used[c.box_idx - i] = true;
            track_used[c.track_idx] = true;
            tracklets[c.track_idx].boxes.push_back(dets[c.box_idx]);
            if (!dets[c.box_idx].interpolated) scores[c.track_idx] += dets[c.box_idx].score;
        }
        for (size_t bi = i; bi < j; ++bi) {
            if (box_used[bi - i]) continue;
            Tracklet t;
            t.boxes.push_back(dets[bi]);
            tracklets.push_back(std::move(t));
            scores.push_back(dets[bi].interpolated ? 0.0 : dets[bi].score);
        }
        i = j;
    }
    return tracklets;
}

/// Fills every missing slice with a box whose center and shape are linear
/// interpolations of the gap-bounding boxes; such boxes carry score 0.
inline Tracklet interpolate_gaps(const Tracklet& t) {
    if (t.boxes.empty()) throw std::invalid_argument("interpolate_gaps: empty tracklet");
    Tracklet out;
    out.boxes.push_back(t.boxes.front());
    for (size_t i = 1; i < t.boxes.size(); ++i) {
        const BoundingBox& a = t.boxes[i - 1];
        const BoundingBox& b = t.boxes[i];
        for (int z = a.slice + 1; z < b.slice; ++z) {
            const double u = static_cast<double>(z - a.slice) / (b.slice - a.slice);
            BoundingBox m;
            m.slice = z;
            m.w = a.w + u * (b.w - a.w);
            m.h = a.h + u * (b.h - a.h);
            m.x = a.cx() + u * (b.cx() - a.cx()) - m.w / 2.0;
            m.y = a.cy() + u * (b.cy() - a.cy()) - m.h / 2.0;
            m.score = 0.0;
            m.interpolated = true;
            out.boxes.push_back(m);
        }
        out.boxes.push_back(b);
    }
    return out;
}

namespace detail {

struct PartnerChoice {
    double total = std::numeric_limits<double>::infinity();
    int gap = 0;
    const Tracklet* partner = nullptr;
    size_t idx = 0;

    // Loss ties break by smaller gap, then lower slice index; the remaining
    // keys are intrinsic so the choice cannot depend on list order.
    bool better_than(const PartnerChoice& o) const {
        if (!o.partner) return true;
        if (total != o.total) return total < o.total;
        if (gap != o.gap) return gap < o.gap;
        const BoundingBox& a = partner->boxes.front();
        const BoundingBox& b = o.partner->boxes.front();
        const auto ka = std::tie(a.slice, a.x, a.y, a.w, a.h);
        const auto kb = std::tie(b.slice, b.x, b.y, b.w, b.h);
        if (ka != kb) return ka < kb;
        const BoundingBox& la = partner->boxes.back();
        const BoundingBox& lb = o.partner->boxes.back();
        const auto ea = std::tie(la.slice, la.x, la.y, la.w, la.h);
        const auto eb = std::tie(lb.slice, lb.x, lb.y, lb.w, lb.h);
        if (ea != eb) return ea < eb;
        return idx < o.idx;
    }
};

/// One round of mutual-minimum pairing over the admissible ordered pairs.
/// Returns the connected chains as ordered index lists (singletons included).
inline std::vector<std::vector<size_t>> mutual_min_round(const std::vector<Tracklet>& ts,
                                                         const LossWeights& w, int max_gap,
                                                         double loss_max) {
    const size_t n = ts.size();
    std::vector<PartnerChoice> best_succ(n), best_pred(n);
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
            if (a == b || ts[a].z_end() >= ts[b].z_start()) continue;
            const int gap = ts[b].z_start() - ts[a].z_end() - 1;
            if (gap > max_gap) continue;
            const ConnectionLoss loss = connection_loss(ts[a], ts[b], w);
            if (loss.total > loss_max) continue;
            const PartnerChoice as_succ{loss.total, gap, &ts[b], b};
            if (as_succ.better_than(best_succ[a])) best_succ[a] = as_succ;
            const PartnerChoice as_pred{loss.total, gap, &ts[a], a};
            if (as_pred.better_than(best_pred[b])) best_pred[b] = as_pred;
        }
    }

    std::vector<std::optional<size_t>> next(n);
    std::vector<bool> has_pred(n, false);
    for (size_t a = 0; a < n; ++a) {
        if (!best_succ[a].partner) continue;
        const size_t b = best_succ[a].idx;
        if (best_pred[b].partner && best_pred[b].idx == a) {
            next[a] = b;
            has_pred[b] = true;
        }
    }

    std::vector<std::vector<size_t>> chains;
    for (size_t a = 0; a < n; ++a) {
        if (has_pred[a]) continue;
        std::vector<size_t> chain{a};
        size_t cur = a;
        while (next[cur]) {
            cur = *next[cur];
            chain.push_back(cur);
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

}  // namespace detail

/// Repeats mutual-minimum pairing rounds until no admissible pair connects;
/// gaps inside every connected chain are linearly interpolated.
inline std::vector<Tracklet> merge_tracklets(std::vector<Tracklet> ts, const LossWeights& w,
                                             int max_gap, double loss_max) {
    for (const auto& t : ts)
        if (t.boxes.empty()) throw std::invalid_argument("merge_tracklets: empty tracklet");

    std::stable_sort(ts.begin(), ts.end(), [](const Tracklet& a, const Tracklet& b) {
        return std::tie(a.boxes.front().slice, a.boxes.front().x, a.boxes.front().y) <
               std::tie(b.boxes.front().slice, b.boxes.front().x, b.boxes.front().y);
    });

    while (true) {
        const auto chains = detail::mutual_min_round(ts, w, max_gap, loss_max);
        if (chains.size() == ts.size()) break;
        std::vector<Tracklet> merged;
        merged.reserve(chains.size());
        for (const auto& chain : chains) {
            Tracklet t;
            for (size_t idx : chain)
                t.boxes.insert(t.boxes.end(), ts[idx].boxes.begin(), ts[idx].boxes.end());
            merged.push_back(chain.size() > 1 ? interpolate_gaps(t) : std::move(t));
        }
        ts = std::move(merged);
    }
    return ts;
}

struct TargetSelection {
    std::vector<Tracklet> targets;
    bool underfull = false;  // fewer tracklets than requested
};

/// Keeps the k highest-scoring tracklets; every other detection is discarded.
/// Ties break by longer slice span, then lower z_start.
inline TargetSelection select_targets(std::vector<Tracklet> ts, int k) {
    if (k < 1) throw std::invalid_argument("select_targets: k must be >= 1");
    std::stable_sort(ts.begin(), ts.end(), [](const Tracklet& a, const Tracklet& b) {
        const double sa = a.total_score(), sb = b.total_score();
        if (sa != sb) return sa > sb;
        if (a.span() != b.span()) return a.span() > b.span();
        return a.z_start() < b.z_start();
    });
    TargetSelection sel;
    sel.underfull = static_cast<int>(ts.size()) < k;
    const size_t keep = std::min(ts.size(), static_cast<size_t>(k));
    sel.targets.assign(ts.begin(), ts.begin() + static_cast<long>(keep));
    return sel;
}

/// Per-slice box centers of a gap-free tracklet.
inline Centerline extract_centerline(const Tracklet& t) {
    if (t.boxes.empty()) throw std::invalid_argument("extract_centerline: empty tracklet");
    if (!t.contiguous())
        throw std::invalid_argument("extract_centerline: tracklet has gaps, interpolate first");
    Centerline c;
    c.z_start = t.z_start();
    c.points.reserve(t.boxes.size());
    for (const auto& b : t.boxes) c.points.push_back({b.cx(), b.cy()});
    return c;
}

/// Crops one size x size window (zero padded) centered at the rounded point,
/// for slices {z-1, z, z+1} when n_slices = 3 with edge replication.
inline CartesianPatchStack crop_patch_at(const Volume& v, Vec2 point, int z, int size,
                                         int n_slices) {
    if (n_slices != 1 && n_slices != 3)
        throw std::invalid_argument("crop_patch_at: n_slices must be 1 or 3");
    CartesianPatchStack stack;
    stack.z = z;
    stack.x0 = static_cast<int>(std::llround(point.x)) - size / 2;
    stack.y0 = static_cast<int>(std::llround(point.y)) - size / 2;
    const int lo = (n_slices == 3) ? -1 : 0;
    const int hi = (n_slices == 3) ? 1 : 0;
    for (int dz = lo; dz <= hi; ++dz) {
        const int zz = std::clamp(z + dz, 0, v.depth - 1);
        Image2D plane(size, size, 0.0f);
        for (int y = 0; y < size; ++y) {
            const int vy = stack.y0 + y;
            if (vy < 0 || vy >= v.height) continue;
            for (int x = 0; x < size; ++x) {
                const int vx = stack.x0 + x;
                if (vx < 0 || vx >= v.width) continue;
                plane.at(x, y) = v.at(vx, vy, zz);
            }
        }
        stack.planes.push_back(std::move(plane));
    }
    return stack;
}

inline std::vector<CartesianPatchStack> crop_patches(const Volume& v, const Centerline& c,
                                                     int size, int n_slices) {
    if (c.z_start < 0 || c.z_end() >= v.depth)
        throw std::invalid_argument("crop_patches: centerline exceeds volume slice range");
    std::vector<CartesianPatchStack> out;
    out.reserve(c.points.size());
    for (int z = c.z_start; z <= c.z_end(); ++z)
        out.push_back(crop_patch_at(v, c.at_slice(z), z, size, n_slices));
    return out;
}

}  // namespace vwseg
