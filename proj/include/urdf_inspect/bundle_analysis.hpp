#pragma once

// Per-bundle analyses: xacro banner detection, mesh inventory, license
// fingerprinting, contact markers, name substrings and model statistics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "urdf_inspect/bundle_scan.hpp"
#include "urdf_inspect/detail/strings.hpp"
#include "urdf_inspect/model.hpp"

namespace urdf_inspect {

// True iff a comment before the root element, starting within the first
// 10 lines, mentions "xacro" (case-insensitive). This is the banner the
// xacro preprocessor writes ("This document was autogenerated by xacro").
inline bool detect_xacro_generated(std::string_view urdf_text) {
    constexpr std::size_t kBannerLines = 10;
    std::size_t i = 0;
    std::size_t line = 1;
    auto skip_space = [&] {
        while (i < urdf_text.size() && detail::is_space(urdf_text[i])) {
            if (urdf_text[i] == '\n') ++line;
            ++i;
        }
    };
    auto advance_to = [&](std::size_t end) {
        for (; i < end; ++i) {
            if (urdf_text[i] == '\n') ++line;
        }
    };
    if (urdf_text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

    while (true) {
        skip_space();
        if (line > kBannerLines) return false;
        auto rest = urdf_text.substr(i);
        if (rest.starts_with("<?")) {
            auto end = urdf_text.find("?>", i + 2);
            if (end == std::string_view::npos) return false;
            advance_to(end + 2);
        } else if (rest.starts_with("<!--")) {
            auto end = urdf_text.find("-->", i + 4);
            if (end == std::string_view::npos) return false;
            if (detail::icontains(urdf_text.substr(i + 4, end - i - 4), "xacro")) return true;
            advance_to(end + 3);
        } else {
            return false;
        }
    }
}

enum class MeshType { stl, dae, obj, other };

inline constexpr std::string_view to_string(MeshType t) noexcept {
    switch (t) {
        case MeshType::stl: return "stl";
        case MeshType::dae: return "dae";
        case MeshType::obj: return "obj";
        case MeshType::other: return "other";
    }
    return "?";
}

inline MeshType mesh_type_of(std::string_view uri) {
    auto ext = detail::extension_of(uri);
    if (ext == "stl") return MeshType::stl;
    if (ext == "dae") return MeshType::dae;
    if (ext == "obj") return MeshType::obj;
    return MeshType::other;
}

struct MeshInventory {
    std::map<MeshType, std::size_t> visual;
    std::map<MeshType, std::size_t> collision;

    [[nodiscard]] bool has_visual_meshes() const noexcept { return !visual.empty(); }
    [[nodiscard]] bool has_collision_meshes() const noexcept { return !collision.empty(); }

    [[nodiscard]] std::set<MeshType> visual_types() const { return keys(visual); }
    [[nodiscard]] std::set<MeshType> collision_types() const { return keys(collision); }

    friend bool operator==(const MeshInventory&, const MeshInventory&) = default;

private:
    static std::set<MeshType> keys(const std::map<MeshType, std::size_t>& m) {
        std::set<MeshType> out;
        for (const auto& [k, v] : m) out.insert(k);
        return out;
    }
};

inline MeshInventory mesh_inventory(const RobotModel& model) {
    MeshInventory inv;
    for (const auto& link : model.links) {
        for (const auto& v : link.visuals) {
            if (const auto* m = std::get_if<Mesh>(&v.geometry)) ++inv.visual[mesh_type_of(m->uri)];
        }
        for (const auto& c : link.collisions) {
            if (const auto* m = std::get_if<Mesh>(&c.geometry)) {
                ++inv.collision[mesh_type_of(m->uri)];
            }
        }
    }
    return inv;
}

// Resolves `package://<pkg>/rest` against the bundle package directory by
// dropping the scheme and package segment; plain relative paths resolve
// against the URDF's directory.
inline fs::path resolve_mesh_uri(std::string_view uri, const fs::path& package_dir,
                                 const fs::path& urdf_dir) {
    constexpr std::string_view package_scheme = "package://";
    constexpr std::string_view file_scheme = "file://";
    if (uri.starts_with(package_scheme)) {
        auto rest = uri.substr(package_scheme.size());
        auto slash = rest.find('/');
        rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash + 1);
        return (package_dir / fs::path(rest)).lexically_normal();
    }
    if (uri.starts_with(file_scheme)) return fs::path(uri.substr(file_scheme.size()));
    return (urdf_dir / fs::path(uri)).lexically_normal();
}

enum class LicenseId { Apache2, BSD3, BSD2, MIT, Unknown };

inline constexpr std::string_view to_string(LicenseId l) noexcept {
    switch (l) {
        case LicenseId::Apache2: return "Apache-2.0";
        case LicenseId::BSD3: return "BSD-3-Clause";
        case LicenseId::BSD2: return "BSD-2-Clause";
        case LicenseId::MIT: return "MIT";
        case LicenseId::Unknown: return "Unknown";
    }
    return "?";
}

// Fingerprints a license text. Whitespace runs and case are ignored.
inline LicenseId classify_license_text(std::string_view text) {
    std::string norm;
    norm.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (detail::is_space(c)) {
            pending_space = !norm.empty();
            continue;
        }
        if (pending_space) norm.push_back(' ');
        pending_space = false;
        norm.push_back(detail::ascii_lower(c));
    }
    auto has = [&norm](std::string_view phrase) { return norm.find(phrase) != std::string::npos; };

    if (has("apache license, version 2.0") || has("apache license version 2.0")) {
        return LicenseId::Apache2;
    }
    if (has("permission is hereby granted, free of charge")) return LicenseId::MIT;
    auto bsd = norm.find("redistribution and use in source and binary forms");
    if (bsd != std::string::npos) {
        if (has("all advertising materials")) return LicenseId::Unknown;  // 4-clause
        auto body = std::string_view(norm).substr(bsd);
        bool third_clause = body.find(" 3. ") != std::string_view::npos ||
                            body.find("endorse or promote") != std::string_view::npos;
        return third_clause ? LicenseId::BSD3 : LicenseId::BSD2;
    }
    return LicenseId::Unknown;
}

namespace detail {

inline bool is_license_file_name(std::string_view name) {
    auto lower = to_lower(name);
    return lower.starts_with("license") || lower.starts_with("licence") ||
           lower.starts_with("copying");
}

inline LicenseId license_in_dir(const fs::path& dir) {
    std::vector<fs::path> candidates;
    std::error_code ec;
    for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
        if (it->is_regular_file(ec) && is_license_file_name(it->path().filename().string())) {
            candidates.push_back(it->path());
        }
    }
    std::sort(candidates.begin(), candidates.end());
    constexpr std::size_t kMaxLicenseBytes = 1u << 20;
    for (const auto& c : candidates) {
        std::string text;
        try {
            text = read_file(c);
        } catch (const IoError&) {
            continue;
        }
        if (text.size() > kMaxLicenseBytes) text.resize(kMaxLicenseBytes);
        if (auto id = classify_license_text(text); id != LicenseId::Unknown) return id;
    }
    return LicenseId::Unknown;
}

}  // namespace detail

// Looks for LICENSE/LICENCE/COPYING files in `bundle_dir`, then in each
// parent up to and including `stop_at` when it is an ancestor.
inline LicenseId detect_license(const fs::path& bundle_dir, const fs::path& stop_at = {}) {
    fs::path dir = bundle_dir.lexically_normal();
    fs::path stop = stop_at.lexically_normal();
    while (true) {
        if (auto id = detail::license_in_dir(dir); id != LicenseId::Unknown) return id;
        if (stop.empty() || dir == stop || !dir.has_parent_path() || dir.parent_path() == dir) break;
        auto rel = dir.lexically_relative(stop);
        if (rel.empty() || *rel.begin() == "..") break;
        dir = dir.parent_path();
    }
    return LicenseId::Unknown;
}

struct ContactMarkers {
    bool author = false;
    bool at_sign = false;
    bool dot_com = false;

    friend bool operator==(const ContactMarkers&, const ContactMarkers&) = default;
};

inline ContactMarkers contact_markers(std::string_view urdf_text) {
    return {detail::icontains(urdf_text, "author"), urdf_text.find('@') != std::string_view::npos,
            detail::icontains(urdf_text, ".com")};
}

// For each term, the number of joints plus links whose name contains it
// (case-insensitive).
inline std::map<std::string, std::size_t> name_substring_stats(
    const RobotModel& model, const std::vector<std::string>& terms) {
    std::map<std::string, std::size_t> out;
    for (const auto& term : terms) {
        std::size_t n = 0;
        for (const auto& l : model.links) n += detail::icontains(l.name, term) ? 1 : 0;
        for (const auto& j : model.joints) n += detail::icontains(j.name, term) ? 1 : 0;
        out[term] = n;
    }
    return out;
}

struct TypeStats {
    std::size_t bundles = 0;
    double mean_links = 0.0;
    double mean_joints = 0.0;
    long avg_links = 0;   // rounded, half away from zero
    long avg_joints = 0;
};

namespace detail {
template <typename T>
const T& deref(const T& v) {
    return v;
}
template <typename T>
const T& deref(const T* v) {
    return *v;
}
}  // namespace detail

// Mean link and joint counts grouped by robot type. `entries` is any range
// of pair-likes (record, model); either side may be a pointer.
template <typename Range>
std::map<std::string, TypeStats> model_stats(const Range& entries) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> totals;
    std::map<std::string, TypeStats> out;
    for (const auto& [record_ref, model_ref] : entries) {
        const BundleRecord& record = detail::deref(record_ref);
        const RobotModel& model = detail::deref(model_ref);
        auto& s = out[record.robot_type];
        auto& t = totals[record.robot_type];
        ++s.bundles;
        t.first += model.links.size();
        t.second += model.joints.size();
    }
    for (auto& [type, s] : out) {
        const auto& t = totals[type];
        s.mean_links = static_cast<double>(t.first) / static_cast<double>(s.bundles);
        s.mean_joints = static_cast<double>(t.second) / static_cast<double>(s.bundles);
        s.avg_links = std::lround(s.mean_links);
        s.avg_joints = std::lround(s.mean_joints);
    }
    return out;
}

}  // namespace urdf_inspect
