#pragma once

// Dataset ingestion: one directory per source holding source-information.json,
// bundles below it described by meta-information.json files.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "urdf_inspect/detail/strings.hpp"

namespace urdf_inspect {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return std::move(ss).str();
}

struct BundleRecord {
    std::string id;
    std::string robot_name;
    std::string robot_type;
    std::string manufacturer;
    std::string variant;
    std::string source_name;
    std::string source_url;
    fs::path urdf_path;  // relative to root_dir
    bool xacro_generated_by_dataset = false;
    bool has_metadata = true;
    fs::path root_dir;  // directory of the describing meta-information.json

    [[nodiscard]] fs::path urdf_file() const { return root_dir / urdf_path; }
};

struct ScanNotice {
    std::string path;  // relative to the corpus root
    std::string message;
};

struct CorpusScan {
    fs::path root;
    std::vector<BundleRecord> records;
    std::vector<ScanNotice> notices;

    [[nodiscard]] std::string relative(const fs::path& p) const {
        return p.lexically_relative(root).generic_string();
    }
};

inline constexpr std::string_view kSourceInfoFile = "source-information.json";
inline constexpr std::string_view kMetaInfoFile = "meta-information.json";

namespace detail {

// Lower-case and drop '-', '_' and spaces so key spellings compare equal.
inline std::string canonical_key(std::string_view key) {
    std::string out;
    for (char c : key) {
        if (c != '-' && c != '_' && c != ' ') out.push_back(ascii_lower(c));
    }
    return out;
}

template <typename Keys>
const nlohmann::json* lookup(const nlohmann::json& obj, const Keys& aliases) {
    if (!obj.is_object()) return nullptr;
    for (auto alias : aliases) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (canonical_key(it.key()) == alias) return &it.value();
        }
    }
    return nullptr;
}

inline const nlohmann::json* lookup(const nlohmann::json& obj,
                                    std::initializer_list<std::string_view> aliases) {
    return lookup<std::initializer_list<std::string_view>>(obj, aliases);
}

inline std::string json_text(const nlohmann::json* v) {
    if (v == nullptr || v->is_null()) return {};
    if (v->is_string()) return v->get<std::string>();
    if (v->is_number_integer()) return std::to_string(v->get<long long>());
    if (v->is_boolean()) return v->get<bool>() ? "true" : "false";
    return v->dump();
}

inline bool json_flag(const nlohmann::json* v) {
    if (v == nullptr) return false;
    if (v->is_boolean()) return v->get<bool>();
    if (v->is_number()) return v->get<double>() != 0.0;
    if (v->is_string()) {
        auto s = to_lower(trim(v->get<std::string>()));
        return s == "true" || s == "yes" || s == "1";
    }
    return false;
}

struct MetaKeys {
    static constexpr std::array<std::string_view, 2> name{"name", "robotname"};
    static constexpr std::array<std::string_view, 2> type{"type", "robottype"};
    static constexpr std::array<std::string_view, 2> manufacturer{"manufacturer", "maker"};
    static constexpr std::array<std::string_view, 5> urdf{
        "urdflocation", "urdffile", "urdfpath", "urdf", "location"};
    static constexpr std::array<std::string_view, 1> id{"id"};
    static constexpr std::array<std::string_view, 2> source_url{"sourceurl", "url"};
    static constexpr std::array<std::string_view, 3> xacro{
        "xacrogenerated", "generatedwithxacro", "xacro"};
    static constexpr std::array<std::string_view, 2> variant{"variant", "urdfvariant"};
};

// Orders numeric ids numerically, everything else lexicographically.
inline bool id_less(const std::string& a, const std::string& b) {
    auto numeric = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
            return c >= '0' && c <= '9';
        });
    };
    if (numeric(a) && numeric(b) && a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

inline bool record_less(const BundleRecord& a, const BundleRecord& b) {
    if (a.source_name != b.source_name) return a.source_name < b.source_name;
    if (a.id != b.id) return id_less(a.id, b.id);
    return a.urdf_file().generic_string() < b.urdf_file().generic_string();
}

// Bundle package directory for a URDF not covered by metadata.
inline fs::path guess_package_dir(const fs::path& urdf_file) {
    fs::path dir = urdf_file.parent_path();
    auto name = to_lower(dir.filename().string());
    if ((name == "urdf" || name == "robots") && dir.has_parent_path()) return dir.parent_path();
    return dir;
}

inline std::vector<fs::path> sorted_walk(const fs::path& dir, CorpusScan& scan) {
    std::vector<fs::path> files;
    std::error_code ec;
    fs::recursive_directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec);
    if (ec) {
        scan.notices.push_back({scan.relative(dir), "cannot walk directory: " + ec.message()});
        return files;
    }
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            scan.notices.push_back({scan.relative(dir), "walk error: " + ec.message()});
            break;
        }
        if (it->is_regular_file(ec)) files.push_back(it->path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

inline std::optional<nlohmann::json> read_json(const fs::path& path, CorpusScan& scan) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        scan.notices.push_back({scan.relative(path), std::string("unreadable JSON: ") + e.what()});
        return std::nullopt;
    }
}

inline void scan_source(const fs::path& source_dir, CorpusScan& scan) {
    std::string source_name = source_dir.filename().string();
    std::string source_url;
    fs::path info_path = source_dir / kSourceInfoFile;
    if (fs::exists(info_path)) {
        if (auto info = read_json(info_path, scan)) {
            if (auto n = json_text(lookup(*info, {"name", "sourcename"})); !n.empty()) {
                source_name = n;
            }
            source_url = json_text(lookup(*info, {"url", "sourceurl"}));
        }
    } else {
        scan.notices.push_back({scan.relative(source_dir), "no source-information.json"});
    }

    auto files = sorted_walk(source_dir, scan);
    std::set<fs::path> described;
    std::set<std::string> ids;
    std::vector<BundleRecord> records;

    for (const auto& file : files) {
        if (file.filename() != kMetaInfoFile) continue;
        auto meta = read_json(file, scan);
        if (!meta) continue;
        std::vector<const nlohmann::json*> entries;
        if (meta->is_array()) {
            for (const auto& e : *meta) entries.push_back(&e);
        } else if (const auto* list = lookup(*meta, {"robots", "urdfs", "bundles"});
                   list != nullptr && list->is_array()) {
            for (const auto& e : *list) entries.push_back(&e);
        } else {
            entries.push_back(&*meta);
        }
        for (const auto* e : entries) {
            BundleRecord r;
            r.root_dir = file.parent_path();
            r.source_name = source_name;
            r.robot_name = json_text(lookup(*e, MetaKeys::name));
            r.robot_type = json_text(lookup(*e, MetaKeys::type));
            r.manufacturer = json_text(lookup(*e, MetaKeys::manufacturer));
            r.id = json_text(lookup(*e, MetaKeys::id));
            r.variant = json_text(lookup(*e, MetaKeys::variant));
            r.xacro_generated_by_dataset = json_flag(lookup(*e, MetaKeys::xacro));
            r.source_url = json_text(lookup(*e, MetaKeys::source_url));
            if (r.source_url.empty()) r.source_url = source_url;
            std::string location = json_text(lookup(*e, MetaKeys::urdf));
            if (location.empty()) {
                scan.notices.push_back({scan.relative(file), "entry has no URDF location"});
                continue;
            }
            r.urdf_path = fs::path(location).lexically_normal();
            std::error_code ec;
            if (!fs::is_regular_file(r.urdf_file(), ec)) {
                scan.notices.push_back(
                    {scan.relative(file), "URDF location '" + location + "' does not exist"});
                continue;
            }
            described.insert(fs::weakly_canonical(r.urdf_file(), ec));
            if (r.id.empty()) r.id = scan.relative(r.urdf_file());
            if (!ids.insert(r.id).second) {
                scan.notices.push_back({scan.relative(file), "duplicate id '" + r.id +
                                                                 "' in source " + source_name});
            }
            records.push_back(std::move(r));
        }
    }

    for (const auto& file : files) {
        if (extension_of(file.string()) != "urdf") continue;
        std::error_code ec;
        if (described.contains(fs::weakly_canonical(file, ec))) continue;
        BundleRecord r;
        r.has_metadata = false;
        r.source_name = source_name;
        r.source_url = source_url;
        r.root_dir = guess_package_dir(file);
        r.urdf_path = file.lexically_relative(r.root_dir);
        r.id = file.lexically_relative(source_dir).generic_string();
        scan.notices.push_back({scan.relative(file), "URDF without meta-information.json"});
        records.push_back(std::move(r));
    }

    for (auto& r : records) scan.records.push_back(std::move(r));
}

}  // namespace detail

// Walks a dataset root. Each immediate subdirectory is a source; a root
// that itself carries source-information.json is treated as one source.
// Only an unreadable root throws; everything else becomes a notice.
inline CorpusScan scan_corpus(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError("corpus root is not a directory: " + root.string());
    CorpusScan scan;
    scan.root = root;

    std::vector<fs::path> sources;
    if (fs::exists(root / kSourceInfoFile)) {
        sources.push_back(root);
    } else {
        fs::directory_iterator it(root, ec);
        if (ec) throw IoError("cannot list corpus root " + root.string() + ": " + ec.message());
        for (const auto& entry : it) {
            if (entry.is_directory(ec)) sources.push_back(entry.path());
        }
        std::sort(sources.begin(), sources.end());
    }
    for (const auto& s : sources) detail::scan_source(s, scan);
    std::stable_sort(scan.records.begin(), scan.records.end(), detail::record_less);
    return scan;
}

// The package directory a bundle's folder layout is judged on: the parent
// of the URDF's `urdf/` or `robots/` folder, else the metadata directory.
inline fs::path bundle_package_dir(const BundleRecord& r) {
    fs::path dir = r.urdf_file().parent_path();
    auto name = detail::to_lower(dir.filename().string());
    if ((name == "urdf" || name == "robots") && dir.has_parent_path()) return dir.parent_path();
    return r.root_dir;
}

enum class StructureClass { A, B, C, D, Other };

inline constexpr std::string_view to_string(StructureClass s) noexcept {
    switch (s) {
        case StructureClass::A: return "A";
        case StructureClass::B: return "B";
        case StructureClass::C: return "C";
        case StructureClass::D: return "D";
        case StructureClass::Other: return "Other";
    }
    return "?";
}

namespace detail {

inline std::optional<fs::path> child_dir_named(const fs::path& dir, std::string_view name) {
    std::error_code ec;
    for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
        if (it->is_directory(ec) && iequals(it->path().filename().string(), name)) {
            return it->path();
        }
    }
    return std::nullopt;
}

// `<urdf_folder>/` holding at least one .urdf file, plus a `meshes/` folder.
inline bool has_bundle_interior(const fs::path& dir, std::string_view urdf_folder) {
    auto urdf_dir = child_dir_named(dir, urdf_folder);
    if (!urdf_dir || !child_dir_named(dir, "meshes")) return false;
    std::error_code ec;
    for (fs::directory_iterator it(*urdf_dir, ec), end; !ec && it != end; it.increment(ec)) {
        if (it->is_regular_file(ec) && extension_of(it->path().string()) == "urdf") return true;
    }
    return false;
}

// `<manufacturer>_<robot>_support`: two non-empty segments before the suffix.
inline bool is_support_name(std::string_view name) {
    constexpr std::string_view suffix = "_support";
    if (!iends_with(name, suffix)) return false;
    auto stem = name.substr(0, name.size() - suffix.size());
    auto sep = stem.find('_');
    return sep != std::string_view::npos && sep > 0 && sep + 1 < stem.size();
}

}  // namespace detail

// Folder-layout class of a bundle directory, checked in the order D, C, B, A.
inline StructureClass classify_structure(const fs::path& bundle_dir) {
    std::string name = bundle_dir.filename().string();
    if (name.empty() || name == ".") name = fs::absolute(bundle_dir).lexically_normal().filename().string();

    if (detail::iends_with(name, "visualization") && detail::has_bundle_interior(bundle_dir, "urdf")) {
        return StructureClass::D;
    }
    if (detail::iends_with(name, "_description") && detail::has_bundle_interior(bundle_dir, "robots")) {
        return StructureClass::C;
    }
    if (detail::is_support_name(name) && detail::has_bundle_interior(bundle_dir, "urdf")) {
        return StructureClass::B;
    }
    if (detail::iends_with(name, "_description") && detail::has_bundle_interior(bundle_dir, "urdf")) {
        return StructureClass::A;
    }
    return StructureClass::Other;
}

}  // namespace urdf_inspect
