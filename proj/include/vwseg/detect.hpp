#pragma once

#include <algorithm>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "vwseg/io.hpp"
#include "vwseg/parallel.hpp"
#include "vwseg/types.hpp"

namespace vwseg {

/// Per-slice box producer. Output must be deterministic for a fixed volume
/// and parameter set; scores only need to be comparable within one volume.
class DetectorBackend {
public:
    virtual ~DetectorBackend() = default;
    virtual std::string name() const = 0;
    virtual std::vector<BoundingBox> detect(const Volume& v, int workers) const = 0;
};

/// Thresholded 8-connected component detection on one slice. The threshold is
/// a fraction of the slice maximum; components outside [min_area, max_area]
/// are dropped. Score is the mean slice-normalized intensity of the component.
inline std::vector<BoundingBox> detect_blobs_slice(const Image2D& img, int slice,
                                                   double threshold, double min_area,
                                                   double max_area) {
    std::vector<BoundingBox> boxes;
    float slice_max = 0.0f;
    for (float v : img.data) slice_max = std::max(slice_max, v);
    if (!(slice_max > 0.0f)) return boxes;

    const float thr = static_cast<float>(threshold) * slice_max;
    const int w = img.width, h = img.height;
    std::vector<int> label(static_cast<size_t>(w) * h, -1);
    std::vector<int> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            if (label[idx] >= 0 || !(img.data[idx] > thr)) continue;

            // Flood fill one component, tracking bounds and intensity sum.
            int min_x = x, max_x = x, min_y = y, max_y = y;
            double sum = 0.0;
            size_t count = 0;
            stack.clear();
            stack.push_back(static_cast<int>(idx));
            label[idx] = 0;
            while (!stack.empty()) {
                const int p = stack.back();
                stack.pop_back();
                const int py = p / w, px = p % w;
                min_x = std::min(min_x, px);
                max_x = std::max(max_x, px);
                min_y = std::min(min_y, py);
                max_y = std::max(max_y, py);
                sum += img.data[static_cast<size_t>(p)];
                ++count;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = px + dx, ny = py + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const size_t nidx = static_cast<size_t>(ny) * w + nx;
                        if (label[nidx] < 0 && img.data[nidx] > thr) {
                            label[nidx] = 0;
                            stack.push_back(static_cast<int>(nidx));
                        }
                    }
                }
            }

            const double area = static_cast<double>(count);
            if (area < min_area || area > max_area) continue;
            BoundingBox b;
            b.slice = slice;
            b.x = min_x;
            b.y = min_y;
            b.w = max_x - min_x + 1;
            b.h = max_y - min_y + 1;
            b.score = std::clamp(sum / (count * static_cast<double>(slice_max)), 0.0, 1.0);
            boxes.push_back(b);
        }
    }

    std::sort(boxes.begin(), boxes.end(), [](const BoundingBox& a, const BoundingBox& b) {
        return std::tie(a.x, a.y, a.w, a.h) < std::tie(b.x, b.y, b.w, b.h);
    });
    return boxes;
}

inline std::vector<BoundingBox> detect_blobs(const Volume& v, double threshold, double min_area,
                                             double max_area, int workers = 1) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("detect_blobs: threshold must be in (0, 1)");
    if (!(min_area > 0.0 && min_area < max_area))
        throw std::invalid_argument("detect_blobs: require 0 < min_area < max_area");

    std::vector<std::vector<BoundingBox>> per_slice(static_cast<size_t>(v.depth));
    parallel_for(v.depth, workers, [&](int z) {
        per_slice[static_cast<size_t>(z)] =
            detect_blobs_slice(v.slice(z), z, threshold, min_area, max_area);
    });

    std::vector<BoundingBox> all;
    for (auto& slice_boxes : per_slice)
        all.insert(all.end(), slice_boxes.begin(), slice_boxes.end());
    return all;
}

class BlobDetector : public DetectorBackend {
public:
    BlobDetector(double threshold, double min_area, double max_area)
        : threshold_(threshold), min_area_(min_area), max_area_(max_area) {}

    std::string name() const override { return "blob"; }

    std::vector<BoundingBox> detect(const Volume& v, int workers) const override {
        return detect_blobs(v, threshold_, min_area_, max_area_, workers);
    }

private:
    double threshold_;
    double min_area_;
    double max_area_;
};

/// Ingestion point for externally produced detections (e.g. a neural detector).
inline std::vector<BoundingBox> file_detector(const std::filesystem::path& path) {
    return read_detections(path);
}

class FileDetector : public DetectorBackend {
public:
    explicit FileDetector(std::filesystem::path path) : path_(std::move(path)) {}

    std::string name() const override { return "file"; }

    std::vector<BoundingBox> detect(const Volume&, int) const override {
        return file_detector(path_);
    }

private:
    std::filesystem::path path_;
};

}  // namespace vwseg
