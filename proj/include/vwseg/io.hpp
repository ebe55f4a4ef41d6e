#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vwseg/types.hpp"

namespace vwseg {

using json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

inline json parse_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError("malformed JSON in " + path.string());
    return j;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline double require_number(const json& j, const char* field, const std::string& where) {
    if (!j.contains(field) || !j[field].is_number())
        throw IoError(where + ": missing or non-numeric field '" + field + "'");
    return j[field].get<double>();
}

inline std::filesystem::path payload_path_for(const std::filesystem::path& header) {
    std::filesystem::path p = header;
    p.replace_extension(".raw");
    return p;
}

// Payload floats are written little-endian byte by byte, independent of host order.
inline void write_f32le(std::ostream& out, const std::vector<float>& values) {
    std::vector<unsigned char> buf(values.size() * 4);
    for (size_t i = 0; i < values.size(); ++i) {
        const uint32_t bits = std::bit_cast<uint32_t>(values[i]);
        buf[4 * i + 0] = static_cast<unsigned char>(bits & 0xFF);
        buf[4 * i + 1] = static_cast<unsigned char>((bits >> 8) & 0xFF);
        buf[4 * i + 2] = static_cast<unsigned char>((bits >> 16) & 0xFF);
        buf[4 * i + 3] = static_cast<unsigned char>((bits >> 24) & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline std::vector<float> read_f32le(const std::filesystem::path& path, size_t expected_count,
                                     const std::string& where) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(where + ": cannot open payload file " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() != expected_count * 4)
        throw IoError(where + ": payload size mismatch, expected " +
                      std::to_string(expected_count * 4) + " bytes, got " +
                      std::to_string(buf.size()));
    std::vector<float> values(expected_count);
    for (size_t i = 0; i < expected_count; ++i) {
        const uint32_t bits = static_cast<uint32_t>(buf[4 * i + 0]) |
                              (static_cast<uint32_t>(buf[4 * i + 1]) << 8) |
                              (static_cast<uint32_t>(buf[4 * i + 2]) << 16) |
                              (static_cast<uint32_t>(buf[4 * i + 3]) << 24);
        values[i] = std::bit_cast<float>(bits);
    }
    return values;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Volume codec: JSON header + separate raw f32le payload named by the header.
// ---------------------------------------------------------------------------

inline void write_volume(const Volume& v, const std::filesystem::path& header_path) {
    v.validate();
    const std::filesystem::path payload = detail::payload_path_for(header_path);
    json header;
    header["width"] = v.width;
    header["height"] = v.height;
    header["depth"] = v.depth;
    header["spacing"] = {v.spacing[0], v.spacing[1], v.spacing[2]};
    header["dtype"] = "f32le";
    header["data"] = payload.filename().string();
    detail::write_json_file(header_path, header);

    std::ofstream out(payload, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write payload file: " + payload.string());
    detail::write_f32le(out, v.voxels);
    if (!out) throw IoError("payload write failed: " + payload.string());
}

inline Volume read_volume(const std::filesystem::path& header_path) {
    const json header = detail::parse_json_file(header_path);
    const std::string where = "volume header " + header_path.string();

    Volume v;
    const double w = detail::require_number(header, "width", where);
    const double h = detail::require_number(header, "height", where);
    const double d = detail::require_number(header, "depth", where);
    if (w < 1 || h < 1 || d < 1 || w != std::floor(w) || h != std::floor(h) || d != std::floor(d))
        throw IoError(where + ": width/height/depth must be positive integers");
    v.width = static_cast<int>(w);
    v.height = static_cast<int>(h);
    v.depth = static_cast<int>(d);

    if (!header.contains("spacing") || !header["spacing"].is_array() ||
        header["spacing"].size() != 3)
        throw IoError(where + ": field 'spacing' must be a 3-element array");
    for (int i = 0; i < 3; ++i) {
        if (!header["spacing"][i].is_number())
            throw IoError(where + ": field 'spacing' must be numeric");
        v.spacing[i] = header["spacing"][i].get<double>();
        if (!(v.spacing[i] > 0.0)) throw IoError(where + ": field 'spacing' must be > 0");
    }

    if (!header.contains("dtype") || header["dtype"] != "f32le")
        throw IoError(where + ": field 'dtype' must be \"f32le\"");

    std::filesystem::path payload;
    if (header.contains("data") && header["data"].is_string())
        payload = header_path.parent_path() / header["data"].get<std::string>();
    else
        payload = detail::payload_path_for(header_path);

    const size_t count = static_cast<size_t>(v.width) * v.height * v.depth;
    v.voxels = detail::read_f32le(payload, count, where);
    return v;
}

// ---------------------------------------------------------------------------
// Detections codec: JSON array of box records.
// ---------------------------------------------------------------------------

inline json box_to_json(const BoundingBox& b) {
    json j;
    j["slice"] = b.slice;
    j["x"] = b.x;
    j["y"] = b.y;
    j["w"] = b.w;
    j["h"] = b.h;
    j["score"] = b.score;
    j["interpolated"] = b.interpolated;
    return j;
}

inline BoundingBox box_from_json(const json& j, const std::string& where) {
    BoundingBox b;
    const double slice = detail::require_number(j, "slice", where);
    if (slice != std::floor(slice)) throw IoError(where + ": field 'slice' must be an integer");
    b.slice = static_cast<int>(slice);
    b.x = detail::require_number(j, "x", where);
    b.y = detail::require_number(j, "y", where);
    b.w = detail::require_number(j, "w", where);
    b.h = detail::require_number(j, "h", where);
    b.score = detail::require_number(j, "score", where);
    if (j.contains("interpolated")) {
        if (!j["interpolated"].is_boolean())
            throw IoError(where + ": field 'interpolated' must be a boolean");
        b.interpolated = j["interpolated"].get<bool>();
    }
    if (!(b.w > 0.0)) throw IoError(where + ": field 'w' must be > 0");
    if (!(b.h > 0.0)) throw IoError(where + ": field 'h' must be > 0");
    if (b.score < 0.0 || b.score > 1.0)
        throw IoError(where + ": field 'score' must be in [0, 1]");
    if (b.interpolated && b.score != 0.0)
        throw IoError(where + ": interpolated boxes must carry score 0");
    return b;
}

inline void write_detections(const std::vector<BoundingBox>& boxes,
                             const std::filesystem::path& path) {
    json arr = json::array();
    for (const auto& b : boxes) arr.push_back(box_to_json(b));
    detail::write_json_file(path, arr);
}

inline std::vector<BoundingBox> read_detections(const std::filesystem::path& path) {
    const json arr = detail::parse_json_file(path);
    if (!arr.is_array()) throw IoError("detections file must hold a JSON array: " + path.string());
    std::vector<BoundingBox> boxes;
    boxes.reserve(arr.size());
    for (size_t i = 0; i < arr.size(); ++i)
        boxes.push_back(box_from_json(arr[i], "detections[" + std::to_string(i) + "]"));
    return boxes;
}

// ---------------------------------------------------------------------------
// Contours codec.
// ---------------------------------------------------------------------------

inline json polygon_to_json(const std::vector<Vec2>& poly) {
    json arr = json::array();
    for (const auto& p : poly) arr.push_back({p.x, p.y});
    return arr;
}

inline std::vector<Vec2> polygon_from_json(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw IoError(where + ": polygon must be an array of [x, y] pairs");
    std::vector<Vec2> poly;
    poly.reserve(arr.size());
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw IoError(where + ": polygon vertex must be a numeric [x, y] pair");
        poly.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return poly;
}

inline void write_contours(const std::vector<ContourSet>& contours,
                           const std::filesystem::path& path) {
    json arr = json::array();
    for (const auto& c : contours) {
        json j;
        j["slice"] = c.slice;
        j["confidence"] = c.confidence;
        j["lumen"] = polygon_to_json(c.lumen);
        j["outer"] = polygon_to_json(c.outer);
        arr.push_back(std::move(j));
    }
    detail::write_json_file(path, arr);
}

inline std::vector<ContourSet> read_contours(const std::filesystem::path& path) {
    const json arr = detail::parse_json_file(path);
    if (!arr.is_array()) throw IoError("contours file must hold a JSON array: " + path.string());
    std::vector<ContourSet> out;
    out.reserve(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "contours[" + std::to_string(i) + "]";
        const json& j = arr[i];
        ContourSet c;
        c.slice = static_cast<int>(detail::require_number(j, "slice", where));
        c.confidence = detail::require_number(j, "confidence", where);
        if (!j.contains("lumen") || !j.contains("outer"))
            throw IoError(where + ": missing field 'lumen' or 'outer'");
        c.lumen = polygon_from_json(j["lumen"], where + ".lumen");
        c.outer = polygon_from_json(j["outer"], where + ".outer");
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Probability map codec: the volume raw format with polar dimensions
// (width = rho = 256, height = theta = 180, depth = windows or slices).
// ---------------------------------------------------------------------------

inline void write_probmap(const std::vector<Image2D>& maps, const std::filesystem::path& path) {
    if (maps.empty()) throw IoError("probmap write: empty stack");
    Volume v(kPolarWidth, kPolarHeight, static_cast<int>(maps.size()), {1.0, 1.0, 1.0});
    for (size_t z = 0; z < maps.size(); ++z) {
        check_polar_shape(maps[z], "probmap write");
        std::copy(maps[z].data.begin(), maps[z].data.end(),
                  v.voxels.begin() + static_cast<size_t>(z) * kPolarWidth * kPolarHeight);
    }
    write_volume(v, path);
}

inline std::vector<Image2D> read_probmap(const std::filesystem::path& path) {
    const Volume v = read_volume(path);
    if (v.width != kPolarWidth || v.height != kPolarHeight)
        throw IoError("probmap " + path.string() + ": dims must be " +
                      std::to_string(kPolarHeight) + "x" + std::to_string(kPolarWidth));
    std::vector<Image2D> maps;
    maps.reserve(static_cast<size_t>(v.depth));
    for (int z = 0; z < v.depth; ++z) maps.push_back(v.slice(z));
    return maps;
}

// ---------------------------------------------------------------------------
// Tracklet / centerline / confidence text formats.
// ---------------------------------------------------------------------------

inline void write_tracklets(const std::vector<Tracklet>& ts, const std::filesystem::path& path) {
    json arr = json::array();
    for (const auto& t : ts) {
        json boxes = json::array();
        for (const auto& b : t.boxes) boxes.push_back(box_to_json(b));
        json j;
        j["total_score"] = t.total_score();
        j["boxes"] = std::move(boxes);
        arr.push_back(std::move(j));
    }
    detail::write_json_file(path, arr);
}

inline std::vector<Tracklet> read_tracklets(const std::filesystem::path& path) {
    const json arr = detail::parse_json_file(path);
    if (!arr.is_array()) throw IoError("tracklets file must hold a JSON array: " + path.string());
    std::vector<Tracklet> out;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "tracklets[" + std::to_string(i) + "]";
        if (!arr[i].contains("boxes") || !arr[i]["boxes"].is_array())
            throw IoError(where + ": missing field 'boxes'");
        Tracklet t;
        for (size_t k = 0; k < arr[i]["boxes"].size(); ++k)
            t.boxes.push_back(
                box_from_json(arr[i]["boxes"][k], where + ".boxes[" + std::to_string(k) + "]"));
        if (t.boxes.empty()) throw IoError(where + ": tracklet has no boxes");
        out.push_back(std::move(t));
    }
    return out;
}

inline void write_centerlines(const std::vector<Centerline>& cs,
                              const std::filesystem::path& path) {
    json arr = json::array();
    for (const auto& c : cs) {
        json j;
        j["z_start"] = c.z_start;
        j["points"] = polygon_to_json(c.points);
        arr.push_back(std::move(j));
    }
    detail::write_json_file(path, arr);
}

inline std::vector<Centerline> read_centerlines(const std::filesystem::path& path) {
    const json arr = detail::parse_json_file(path);
    if (!arr.is_array())
        throw IoError("centerlines file must hold a JSON array: " + path.string());
    std::vector<Centerline> out;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "centerlines[" + std::to_string(i) + "]";
        Centerline c;
        c.z_start = static_cast<int>(detail::require_number(arr[i], "z_start", where));
        if (!arr[i].contains("points"))
            throw IoError(where + ": missing field 'points'");
        c.points = polygon_from_json(arr[i]["points"], where + ".points");
        if (c.points.empty()) throw IoError(where + ": centerline has no points");
        out.push_back(std::move(c));
    }
    return out;
}

struct SliceConfidence {
    int slice = 0;
    double segconf = 0.0;
};

inline void write_confidences(const std::vector<SliceConfidence>& cs,
                              const std::filesystem::path& path) {
    json arr = json::array();
    for (const auto& c : cs) {
        json j;
        j["slice"] = c.slice;
        j["segconf"] = c.segconf;
        arr.push_back(std::move(j));
    }
    detail::write_json_file(path, arr);
}

inline std::vector<SliceConfidence> read_confidences(const std::filesystem::path& path) {
    const json arr = detail::parse_json_file(path);
    if (!arr.is_array())
        throw IoError("confidence file must hold a JSON array: " + path.string());
    std::vector<SliceConfidence> out;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "confidences[" + std::to_string(i) + "]";
        SliceConfidence c;
        c.slice = static_cast<int>(detail::require_number(arr[i], "slice", where));
        c.segconf = detail::require_number(arr[i], "segconf", where);
        out.push_back(c);
    }
    return out;
}

}  // namespace vwseg
