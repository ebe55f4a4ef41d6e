#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vwseg {

// Polar patch geometry: theta rows of 2 degrees each, rho columns in
// upsampled-patch pixels.
constexpr int kPolarHeight = 180;
constexpr int kPolarWidth = 256;
constexpr int kPatchSize = 128;
constexpr int kUpsampleScale = 4;
constexpr int kUpsampledSize = kPatchSize * kUpsampleScale;
constexpr double kDegPerThetaRow = 360.0 / kPolarHeight;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }

/// Row-major single-plane image. at(x, y) addresses column x of row y.
/// Volumes and masks use the f32 flavor; probability maps keep f64 in memory
/// so overlap averaging is exact, and drop to f32 only in the file format.
template <typename T>
struct BasicImage {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    BasicImage() = default;
    BasicImage(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    T at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    template <typename U>
    bool same_shape(const BasicImage<U>& o) const {
        return width == o.width && height == o.height;
    }
};

using Image2D = BasicImage<float>;
using ImageD = BasicImage<double>;

template <typename T>
inline bool operator==(const BasicImage<T>& a, const BasicImage<T>& b) {
    return a.width == b.width && a.height == b.height && a.data == b.data;
}

inline Image2D to_float_image(const ImageD& src) {
    Image2D out(src.width, src.height);
    for (size_t i = 0; i < src.data.size(); ++i)
        out.data[i] = static_cast<float>(src.data[i]);
    return out;
}

/// Stack of equally spaced slices; voxels row-major within a slice, slices contiguous.
struct Volume {
    int width = 0;
    int height = 0;
    int depth = 0;
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::vector<float> voxels;

    Volume() = default;
    Volume(int w, int h, int d, std::array<double, 3> sp, float fill = 0.0f)
        : width(w), height(h), depth(d), spacing(sp),
          voxels(static_cast<size_t>(w) * h * d, fill) {}

    float& at(int x, int y, int z) {
        return voxels[(static_cast<size_t>(z) * height + y) * width + x];
    }
    float at(int x, int y, int z) const {
        return voxels[(static_cast<size_t>(z) * height + y) * width + x];
    }

    Image2D slice(int z) const {
        Image2D img(width, height);
        const size_t n = static_cast<size_t>(width) * height;
        std::copy_n(voxels.begin() + static_cast<size_t>(z) * n, n, img.data.begin());
        return img;
    }

    void validate() const {
        if (width < 1 || height < 1 || depth < 1)
            throw std::invalid_argument("Volume: width/height/depth must be >= 1");
        for (double s : spacing)
            if (!(s > 0.0)) throw std::invalid_argument("Volume: spacing must be > 0");
        if (voxels.size() != static_cast<size_t>(width) * height * depth)
            throw std::invalid_argument("Volume: voxel count does not match dimensions");
    }
};

/// Axis-aligned detection box; (x, y) is the top-left corner in pixels.
struct BoundingBox {
    int slice = 0;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    double score = 0.0;
    bool interpolated = false;

    double cx() const { return x + w / 2.0; }
    double cy() const { return y + h / 2.0; }
    double area() const { return w * h; }

    void validate() const {
        if (!(w > 0.0) || !(h > 0.0))
            throw std::invalid_argument("BoundingBox: w and h must be > 0");
        if (score < 0.0 || score > 1.0)
            throw std::invalid_argument("BoundingBox: score must be in [0, 1]");
    }
};

inline bool operator==(const BoundingBox& a, const BoundingBox& b) {
    return a.slice == b.slice && a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h &&
           a.score == b.score && a.interpolated == b.interpolated;
}

/// Closed lumen/outer polygons for one slice, in original-volume pixel coordinates.
struct ContourSet {
    int slice = 0;
    std::vector<Vec2> lumen;
    std::vector<Vec2> outer;
    double confidence = 0.0;
};

/// Slice-ordered chain of boxes, at most one box per slice.
struct Tracklet {
    std::vector<BoundingBox> boxes;

    int z_start() const { return boxes.front().slice; }
    int z_end() const { return boxes.back().slice; }
    int span() const { return z_end() - z_start() + 1; }

    // Interpolated boxes carry score 0 and contribute nothing here.
    double total_score() const {
        double s = 0.0;
        for (const auto& b : boxes)
            if (!b.interpolated) s += b.score;
        return s;
    }

    bool contiguous() const {
        for (size_t i = 1; i < boxes.size(); ++i)
            if (boxes[i].slice != boxes[i - 1].slice + 1) return false;
        return true;
    }
};

/// Per-slice lumen-center estimates over a contiguous slice range.
struct Centerline {
    int z_start = 0;
    std::vector<Vec2> points;

    int z_end() const { return z_start + static_cast<int>(points.size()) - 1; }
    Vec2& at_slice(int z) { return points[static_cast<size_t>(z - z_start)]; }
    const Vec2& at_slice(int z) const { return points[static_cast<size_t>(z - z_start)]; }
};

enum class ContourRole { lumen, outer };

/// Star-shaped boundary as radius-per-theta-row, in upsampled-patch pixels.
struct PolarContour {
    std::array<double, kPolarHeight> rho{};
    ContourRole role = ContourRole::lumen;
};

/// Cropped image planes plus the metadata needed to restore volume coordinates.
struct CartesianPatchStack {
    std::vector<Image2D> planes;
    int x0 = 0;
    int y0 = 0;
    int z = 0;
};

/// n_slices planes of kPolarHeight x kPolarWidth; row = theta index, column = rho.
struct PolarPatch {
    std::vector<Image2D> planes;
};

using ProbabilityMap = ImageD;

inline Image2D make_polar_image(float fill = 0.0f) {
    return Image2D(kPolarWidth, kPolarHeight, fill);
}

inline ProbabilityMap make_polar_map(double fill = 0.0) {
    return ProbabilityMap(kPolarWidth, kPolarHeight, fill);
}

template <typename T>
inline void check_polar_shape(const BasicImage<T>& img, const char* what) {
    if (img.width != kPolarWidth || img.height != kPolarHeight)
        throw std::invalid_argument(std::string(what) + ": expected " +
                                    std::to_string(kPolarHeight) + "x" +
                                    std::to_string(kPolarWidth) + " polar image");
}

}  // namespace vwseg
