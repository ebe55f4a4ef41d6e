#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "vwseg/tracklet.hpp"
#include "vwseg/types.hpp"

namespace vwseg {

struct LabelMatch {
    int slice = 0;
    double best_iou = 0.0;
    bool missed = false;  // zero overlap with every same-slice detection
};

struct LocalizationReport {
    double mean_iou = 0.0;  // averaged over labels; unmatched labels count 0
    int missed = 0;
    int false_positive = 0;
    std::vector<LabelMatch> per_label;
};

/// Localization scoring: each label takes the best same-slice
/// IoU; missed and false counts use the strict zero-overlap definition.
inline LocalizationReport localization_report(const std::vector<BoundingBox>& dets,
                                              const std::vector<BoundingBox>& labels) {
    if (labels.empty())
        throw std::invalid_argument("localization_report: empty label set");

    std::map<int, std::vector<const BoundingBox*>> dets_by_slice;
    for (const auto& d : dets) dets_by_slice[d.slice].push_back(&d);

    LocalizationReport rep;
    double iou_sum = 0.0;
    for (const auto& label : labels) {
        LabelMatch m;
        m.slice = label.slice;
        const auto it = dets_by_slice.find(label.slice);
        if (it != dets_by_slice.end())
            for (const BoundingBox* d : it->second)
                m.best_iou = std::max(m.best_iou, iou(label, *d));
        m.missed = (m.best_iou == 0.0);
        if (m.missed) ++rep.missed;
        iou_sum += m.best_iou;
        rep.per_label.push_back(m);
    }
    rep.mean_iou = iou_sum / static_cast<double>(labels.size());

    std::map<int, std::vector<const BoundingBox*>> labels_by_slice;
    for (const auto& l : labels) labels_by_slice[l.slice].push_back(&l);
    for (const auto& d : dets) {
        bool overlaps = false;
        const auto it = labels_by_slice.find(d.slice);
        if (it != labels_by_slice.end())
            for (const BoundingBox* l : it->second)
                if (iou(d, *l) > 0.0) {
                    overlaps = true;
                    break;
                }
        if (!overlaps) ++rep.false_positive;
    }
    return rep;
}

/// Dice similarity coefficient 2|a n b| / (|a| + |b|). Two empty masks score
/// 1; the flag records that degenerate case.
inline double dice(const Image2D& a, const Image2D& b, bool* both_empty = nullptr) {
    if (!a.same_shape(b)) throw std::invalid_argument("dice: mask shapes differ");
    long na = 0, nb = 0, inter = 0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const bool pa = a.data[i] > 0.0f;
        const bool pb = b.data[i] > 0.0f;
        na += pa;
        nb += pb;
        inter += pa && pb;
    }
    if (both_empty) *both_empty = (na + nb == 0);
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

/// Physical wall area: pixel count scaled by in-plane spacing.
inline double wall_area(const Image2D& mask, double dx, double dy) {
    if (!(dx > 0.0 && dy > 0.0)) throw std::invalid_argument("wall_area: spacing must be > 0");
    long ones = 0;
    for (float v : mask.data) ones += v > 0.0f;
    return static_cast<double>(ones) * dx * dy;
}

/// Pearson product-moment correlation coefficient.
inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    if (xs.size() < 2) throw std::invalid_argument("pearson: need at least 2 samples");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: zero variance input");
    return sxy / std::sqrt(sxx * syy);
}

struct SliceDsc {
    int slice = 0;
    double dsc = 0.0;
    double area_auto = 0.0;  // mm^2
    double area_label = 0.0;
    bool both_empty = false;
};

struct SegmentationReport {
    double mean_dsc = 0.0;
    double area_correlation = 0.0;
    bool correlation_defined = false;
    std::vector<SliceDsc> per_slice;
};

/// Aggregates per-slice Dice scores and the Pearson correlation of wall areas
/// between automated and labeled masks. Correlation stays undefined when
/// fewer than two slices exist or either area series is constant.
inline SegmentationReport segmentation_report(const std::vector<SliceDsc>& rows) {
    if (rows.empty()) throw std::invalid_argument("segmentation_report: no slices");
    SegmentationReport rep;
    rep.per_slice = rows;
    double sum = 0.0;
    std::vector<double> a, b;
    for (const auto& r : rows) {
        sum += r.dsc;
        a.push_back(r.area_auto);
        b.push_back(r.area_label);
    }
    rep.mean_dsc = sum / static_cast<double>(rows.size());
    try {
        rep.area_correlation = pearson(a, b);
        rep.correlation_defined = true;
    } catch (const std::invalid_argument&) {
        rep.area_correlation = 0.0;
        rep.correlation_defined = false;
    }
    return rep;
}

}  // namespace vwseg
