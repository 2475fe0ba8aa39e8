#pragma once

// Runs the per-bundle analyses over a scanned corpus and turns the results
// into report tables. Row order is fixed by (source, id, path).

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "urdf_inspect/bundle_analysis.hpp"
#include "urdf_inspect/bundle_scan.hpp"
#include "urdf_inspect/compare.hpp"
#include "urdf_inspect/dedup.hpp"
#include "urdf_inspect/detail/parallel.hpp"
#include "urdf_inspect/kinematics.hpp"
#include "urdf_inspect/model.hpp"
#include "urdf_inspect/report.hpp"
#include "urdf_inspect/validator.hpp"

namespace urdf_inspect {

inline const std::vector<std::string>& default_name_terms() {
    static const std::vector<std::string> terms{"world", "flange"};
    return terms;
}

struct BundleAnalysis {
    BundleRecord record;
    std::string urdf_rel;  // URDF path relative to the corpus root
    std::optional<std::string> read_error;
    std::string raw_text;
    ValidationResult validation;
    std::optional<RobotModel> raw_model;  // parse result even when A-E errors exist
    std::vector<Diagnostic> sanity;
    StructureClass structure = StructureClass::Other;
    bool xacro_banner = false;
    MeshInventory inventory;
    LicenseId license = LicenseId::Unknown;
    ContactMarkers contact;
    std::map<std::string, std::size_t> name_counts;

    [[nodiscard]] bool parsed_ok() const noexcept { return validation.model.has_value(); }
};

struct CorpusAnalysis {
    CorpusScan scan;
    std::vector<BundleAnalysis> bundles;
    std::vector<std::string> sources;  // sorted display names
};

inline fs::path source_dir_of(const CorpusScan& scan, const fs::path& path) {
    auto rel = path.lexically_relative(scan.root);
    if (rel.empty() || *rel.begin() == "..") return scan.root;
    if (fs::exists(scan.root / kSourceInfoFile)) return scan.root;
    return scan.root / *rel.begin();
}

inline BundleAnalysis analyze_bundle(const CorpusScan& scan, const BundleRecord& record) {
    BundleAnalysis a;
    a.record = record;
    a.urdf_rel = scan.relative(record.urdf_file());
    fs::path package = bundle_package_dir(record);
    a.structure = classify_structure(package);
    a.license = detect_license(package, source_dir_of(scan, package));
    try {
        a.raw_text = read_file(record.urdf_file());
    } catch (const IoError&) {
        a.read_error = "cannot read " + a.urdf_rel;
        return a;
    }
    a.validation = validate(a.raw_text);
    if (a.validation.model) a.sanity = kinematic_sanity(*a.validation.model);
    if (auto raw = parse_urdf(a.raw_text)) {
        a.inventory = mesh_inventory(*raw);
        a.name_counts = name_substring_stats(*raw, default_name_terms());
        a.raw_model = std::move(raw).value();
    }
    a.xacro_banner = detect_xacro_generated(a.raw_text);
    a.contact = contact_markers(a.raw_text);
    return a;
}

inline CorpusAnalysis analyze_corpus(const fs::path& root,
                                     std::size_t jobs = detail::default_jobs()) {
    CorpusAnalysis out;
    out.scan = scan_corpus(root);
    out.bundles.resize(out.scan.records.size());
    detail::parallel_for(out.scan.records.size(), jobs, [&](std::size_t i) {
        out.bundles[i] = analyze_bundle(out.scan, out.scan.records[i]);
    });
    std::set<std::string> sources;
    for (const auto& r : out.scan.records) sources.insert(r.source_name);
    out.sources.assign(sources.begin(), sources.end());
    return out;
}

namespace detail {
inline long long as_cell(std::size_t n) { return static_cast<long long>(n); }

inline std::string join_types(const std::set<MeshType>& types) {
    std::string out;
    for (auto t : types) {
        if (!out.empty()) out += ';';
        out += to_string(t);
    }
    return out;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Corpus tables

inline ReportTable overview_table(const CorpusAnalysis& c) {
    ReportTable t("overview", {"source", "bundles", "with_metadata", "parsed_ok"});
    std::size_t total = 0, meta = 0, ok = 0;
    for (const auto& s : c.sources) {
        std::size_t n = 0, m = 0, p = 0;
        for (const auto& b : c.bundles) {
            if (b.record.source_name != s) continue;
            ++n;
            m += b.record.has_metadata ? 1 : 0;
            p += b.parsed_ok() ? 1 : 0;
        }
        t.add_row({s, detail::as_cell(n), detail::as_cell(m), detail::as_cell(p)});
        total += n;
        meta += m;
        ok += p;
    }
    t.add_row({std::string("Total"), detail::as_cell(total), detail::as_cell(meta),
               detail::as_cell(ok)});
    return t;
}

inline ReportTable bundles_table(const CorpusAnalysis& c) {
    ReportTable t("bundles", {"source", "id", "robot", "type", "manufacturer", "urdf", "structure",
                              "xacro_banner", "xacro_by_dataset", "license", "parsed_ok", "links",
                              "joints", "lines"});
    for (const auto& b : c.bundles) {
        const auto& r = b.record;
        long long links = b.raw_model ? detail::as_cell(b.raw_model->links.size()) : -1;
        long long joints = b.raw_model ? detail::as_cell(b.raw_model->joints.size()) : -1;
        t.add_row({r.source_name, r.id, r.robot_name, r.robot_type, r.manufacturer, b.urdf_rel,
                   std::string(to_string(b.structure)), b.xacro_banner, r.xacro_generated_by_dataset,
                   std::string(to_string(b.license)), b.parsed_ok(), links, joints,
                   detail::as_cell(line_count(b.raw_text))});
    }
    return t;
}

inline ReportTable mesh_inventory_table(const CorpusAnalysis& c) {
    constexpr std::array kTypes{MeshType::stl, MeshType::dae, MeshType::obj, MeshType::other};
    std::vector<std::string> cols{"source", "id"};
    for (auto usage : {"visual", "collision"}) {
        for (auto ty : kTypes) cols.push_back(std::string(usage) + "_" + std::string(to_string(ty)));
    }
    ReportTable t("mesh_inventory", cols);
    for (const auto& b : c.bundles) {
        std::vector<Cell> row{b.record.source_name, b.record.id};
        for (const auto* m : {&b.inventory.visual, &b.inventory.collision}) {
            for (auto ty : kTypes) {
                auto it = m->find(ty);
                row.emplace_back(detail::as_cell(it == m->end() ? 0 : it->second));
            }
        }
        t.add_row(std::move(row));
    }
    return t;
}

inline ReportTable structures_table(const CorpusAnalysis& c) {
    constexpr std::array kClasses{StructureClass::A, StructureClass::B, StructureClass::C,
                                  StructureClass::D, StructureClass::Other};
    ReportTable t("structures", {"source", "A", "B", "C", "D", "Other"});
    std::map<StructureClass, std::size_t> totals;
    for (const auto& s : c.sources) {
        std::map<StructureClass, std::size_t> counts;
        for (const auto& b : c.bundles) {
            if (b.record.source_name == s) ++counts[b.structure];
        }
        std::vector<Cell> row{s};
        for (auto k : kClasses) {
            row.emplace_back(detail::as_cell(counts[k]));
            totals[k] += counts[k];
        }
        t.add_row(std::move(row));
    }
    std::vector<Cell> row{std::string("Total")};
    for (auto k : kClasses) row.emplace_back(detail::as_cell(totals[k]));
    t.add_row(std::move(row));
    return t;
}

inline ReportTable xacro_table(const CorpusAnalysis& c) {
    ReportTable t("xacro", {"source", "by_dataset_using_xacro", "by_others_using_xacro",
                            "by_others_without_xacro"});
    std::array<std::size_t, 3> totals{};
    for (const auto& s : c.sources) {
        std::array<std::size_t, 3> n{};
        for (const auto& b : c.bundles) {
            if (b.record.source_name != s) continue;
            if (b.record.xacro_generated_by_dataset) ++n[0];
            else if (b.xacro_banner) ++n[1];
            else ++n[2];
        }
        t.add_row({s, detail::as_cell(n[0]), detail::as_cell(n[1]), detail::as_cell(n[2])});
        for (std::size_t i = 0; i < 3; ++i) totals[i] += n[i];
    }
    t.add_row({std::string("Total"), detail::as_cell(totals[0]), detail::as_cell(totals[1]),
               detail::as_cell(totals[2])});
    return t;
}

inline ReportTable parsing_errors_table(const CorpusAnalysis& c) {
    ReportTable t("parsing_errors", {"code", "files", "sources"});
    constexpr std::array kCodes{DiagnosticCode::A, DiagnosticCode::B, DiagnosticCode::C,
                                DiagnosticCode::D, DiagnosticCode::E, DiagnosticCode::F,
                                DiagnosticCode::W_UNDEFINED_MATERIAL};
    auto row_for = [&](std::string label, auto&& has) {
        std::map<std::string, std::size_t> per_source;
        std::size_t files = 0;
        for (const auto& b : c.bundles) {
            if (!has(b)) continue;
            ++files;
            ++per_source[b.record.source_name];
        }
        std::vector<std::pair<std::string, std::size_t>> ordered(per_source.begin(),
                                                                 per_source.end());
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const auto& x, const auto& y) { return x.second > y.second; });
        std::string sources;
        for (const auto& [s, n] : ordered) {
            if (!sources.empty()) sources += ", ";
            sources += s + " (" + std::to_string(n) + ")";
        }
        t.add_row({std::move(label), detail::as_cell(files), sources});
    };
    for (auto code : kCodes) {
        row_for(std::string(to_string(code)), [code](const BundleAnalysis& b) {
            return std::any_of(b.validation.diagnostics.begin(), b.validation.diagnostics.end(),
                               [code](const Diagnostic& d) { return d.code == code; });
        });
    }
    row_for("failed", [](const BundleAnalysis& b) { return b.validation.has_errors(); });
    return t;
}

inline ReportTable diagnostics_table(
    const std::vector<std::pair<std::string, std::vector<Diagnostic>>>& per_file) {
    ReportTable t("diagnostics", {"file", "severity", "code", "subject", "line", "message"});
    for (const auto& [file, diags] : per_file) {
        for (const auto& d : diags) {
            t.add_row({file, std::string(to_string(d.severity)), std::string(to_string(d.code)),
                       d.subject, detail::as_cell(d.pos.line), d.message});
        }
    }
    return t;
}

inline ReportTable diagnostics_table(const CorpusAnalysis& c) {
    std::vector<std::pair<std::string, std::vector<Diagnostic>>> per_file;
    for (const auto& b : c.bundles) {
        std::vector<Diagnostic> all = b.validation.diagnostics;
        if (b.read_error) {
            all.push_back({Severity::error, DiagnosticCode::F, "file", {}, *b.read_error});
        }
        all.insert(all.end(), b.sanity.begin(), b.sanity.end());
        detail::sort_by_position(all);
        per_file.emplace_back(b.urdf_rel, std::move(all));
    }
    return diagnostics_table(per_file);
}

inline ReportTable mesh_types_table(const CorpusAnalysis& c) {
    constexpr std::array kTypes{MeshType::stl, MeshType::dae, MeshType::obj, MeshType::other};
    ReportTable t("mesh_types",
                  {"source", "usage", "stl", "dae", "obj", "other", "bundle_type_pairs",
                   "bundles_with_meshes"});
    auto add = [&](const std::string& label, bool visual, auto&& include) {
        std::map<MeshType, std::size_t> n;
        std::size_t with = 0, pairs = 0;
        for (const auto& b : c.bundles) {
            if (!include(b)) continue;
            const auto& m = visual ? b.inventory.visual : b.inventory.collision;
            if (!m.empty()) ++with;
            for (const auto& [ty, count] : m) {
                ++n[ty];
                ++pairs;
            }
        }
        std::vector<Cell> row{label, std::string(visual ? "visual" : "collision")};
        for (auto ty : kTypes) row.emplace_back(detail::as_cell(n[ty]));
        row.emplace_back(detail::as_cell(pairs));
        row.emplace_back(detail::as_cell(with));
        t.add_row(std::move(row));
    };
    for (const auto& s : c.sources) {
        for (bool visual : {true, false}) {
            add(s, visual, [&s](const BundleAnalysis& b) { return b.record.source_name == s; });
        }
    }
    for (bool visual : {true, false}) add("Total", visual, [](const BundleAnalysis&) { return true; });
    return t;
}

inline ReportTable licenses_table(const CorpusAnalysis& c) {
    constexpr std::array kIds{LicenseId::Apache2, LicenseId::BSD3, LicenseId::BSD2, LicenseId::MIT,
                              LicenseId::Unknown};
    std::vector<std::string> cols{"source"};
    for (auto id : kIds) cols.emplace_back(to_string(id));
    ReportTable t("licenses", cols);
    std::map<LicenseId, std::size_t> totals;
    for (const auto& s : c.sources) {
        std::map<LicenseId, std::size_t> n;
        for (const auto& b : c.bundles) {
            if (b.record.source_name == s) ++n[b.license];
        }
        std::vector<Cell> row{s};
        for (auto id : kIds) {
            row.emplace_back(detail::as_cell(n[id]));
            totals[id] += n[id];
        }
        t.add_row(std::move(row));
    }
    std::vector<Cell> row{std::string("Total")};
    for (auto id : kIds) row.emplace_back(detail::as_cell(totals[id]));
    t.add_row(std::move(row));
    return t;
}

inline ReportTable contact_table(const CorpusAnalysis& c) {
    ReportTable t("contact", {"source", "author", "at_sign", "dot_com"});
    std::array<std::size_t, 3> totals{};
    for (const auto& s : c.sources) {
        std::array<std::size_t, 3> n{};
        for (const auto& b : c.bundles) {
            if (b.record.source_name != s) continue;
            n[0] += b.contact.author;
            n[1] += b.contact.at_sign;
            n[2] += b.contact.dot_com;
        }
        t.add_row({s, detail::as_cell(n[0]), detail::as_cell(n[1]), detail::as_cell(n[2])});
        for (std::size_t i = 0; i < 3; ++i) totals[i] += n[i];
    }
    t.add_row({std::string("Total"), detail::as_cell(totals[0]), detail::as_cell(totals[1]),
               detail::as_cell(totals[2])});
    return t;
}

inline ReportTable name_stats_table(const CorpusAnalysis& c,
                                    const std::vector<std::string>& terms = default_name_terms()) {
    std::vector<std::string> cols{"source"};
    cols.insert(cols.end(), terms.begin(), terms.end());
    ReportTable t("name_stats", cols);
    for (const auto& s : c.sources) {
        std::vector<Cell> row{s};
        for (const auto& term : terms) {
            std::size_t n = 0;
            for (const auto& b : c.bundles) {
                if (b.record.source_name != s || !b.raw_model) continue;
                n += name_substring_stats(*b.raw_model, {term}).at(term);
            }
            row.emplace_back(detail::as_cell(n));
        }
        t.add_row(std::move(row));
    }
    return t;
}

inline ReportTable model_stats_table(const CorpusAnalysis& c) {
    std::vector<std::pair<BundleRecord, const RobotModel*>> entries;
    for (const auto& b : c.bundles) {
        if (!b.raw_model) continue;
        BundleRecord r = b.record;
        if (r.robot_type.empty()) r.robot_type = "unspecified";
        entries.emplace_back(std::move(r), &*b.raw_model);
    }
    ReportTable t("model_stats", {"type", "bundles", "avg_links", "avg_joints", "mean_links",
                                  "mean_joints"});
    for (const auto& [type, s] : model_stats(entries)) {
        t.add_row({type, detail::as_cell(s.bundles), static_cast<long long>(s.avg_links),
                   static_cast<long long>(s.avg_joints), s.mean_links, s.mean_joints});
    }
    return t;
}

inline ReportTable notices_table(const CorpusAnalysis& c) {
    ReportTable t("notices", {"path", "message"});
    for (const auto& n : c.scan.notices) t.add_row({n.path, n.message});
    return t;
}

// ---------------------------------------------------------------------------
// Multiply defined robots

struct ComparisonOutcome {
    MultiplyDefined group;
    DiscrepancyReport report;
};

inline std::vector<ComparisonOutcome> compare_corpus(const CorpusAnalysis& c,
                                                     const FkCompareOptions& opts,
                                                     std::size_t jobs = detail::default_jobs()) {
    std::map<std::pair<std::string, std::string>, const BundleAnalysis*> by_record;
    for (const auto& b : c.bundles) {
        by_record[{b.record.source_name, b.record.urdf_file().generic_string()}] = &b;
    }
    auto groups = find_multiply_defined(c.scan.records);
    std::vector<ComparisonOutcome> out;
    for (auto& [key, g] : groups) out.push_back({std::move(g), {}});
    detail::parallel_for(out.size(), jobs, [&](std::size_t i) {
        std::vector<GroupMember> members;
        for (const auto& r : out[i].group.bundles) {
            const auto* b = by_record.at({r.source_name, r.urdf_file().generic_string()});
            members.push_back({r, b->validation.model, b->raw_text});
        }
        out[i].report = compare_group(std::move(members), opts);
    });
    return out;
}

namespace detail {
inline std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += sep;
        out += s;
    }
    return out;
}
}  // namespace detail

inline ReportTable discrepancies_table(const std::vector<ComparisonOutcome>& results) {
    ReportTable t("discrepancies", {"robot", "manufacturer", "type", "sources", "variants",
                                    "joints", "links", "cad", "fk", "lines", "any",
                                    "any_excl_lines"});
    for (const auto& r : results) {
        const auto& first = r.group.bundles.front();
        t.add_row({first.robot_name, first.manufacturer, first.robot_type,
                   detail::join(r.report.sources, ";"),
                   detail::as_cell(r.group.variants.size()), r.report.diff_joints,
                   r.report.diff_links, r.report.diff_cad_types,
                   std::string(to_string(r.report.diff_fk)), r.report.diff_lines, r.report.any,
                   r.report.any_excl_lines});
    }
    return t;
}

inline ReportTable discrepancy_summary_table(const std::vector<ComparisonOutcome>& results) {
    std::size_t joints = 0, links = 0, cad = 0, fk = 0, fk_incomparable = 0, lines = 0, any = 0,
                any_excl = 0, bundles = 0;
    for (const auto& r : results) {
        joints += r.report.diff_joints;
        links += r.report.diff_links;
        cad += r.report.diff_cad_types;
        fk += r.report.diff_fk == FkFlag::different;
        fk_incomparable += r.report.diff_fk == FkFlag::incomparable;
        lines += r.report.diff_lines;
        any += r.report.any;
        any_excl += r.report.any_excl_lines;
        bundles += r.group.bundles.size();
    }
    ReportTable t("discrepancy_summary", {"feature", "robots"});
    t.add_row({std::string("multiply defined robots"), detail::as_cell(results.size())});
    t.add_row({std::string("bundles in groups"), detail::as_cell(bundles)});
    t.add_row({std::string("number of joints"), detail::as_cell(joints)});
    t.add_row({std::string("number of links"), detail::as_cell(links)});
    t.add_row({std::string("CAD file type"), detail::as_cell(cad)});
    t.add_row({std::string("forward kinematics"), detail::as_cell(fk)});
    t.add_row({std::string("forward kinematics incomparable"), detail::as_cell(fk_incomparable)});
    t.add_row({std::string("number of lines"), detail::as_cell(lines)});
    t.add_row({std::string("any"), detail::as_cell(any)});
    t.add_row({std::string("any excl. lines"), detail::as_cell(any_excl)});
    return t;
}

inline ReportTable fk_detail_table(const std::vector<ComparisonOutcome>& results) {
    ReportTable t("fk_detail", {"robot", "bundle_a", "bundle_b", "fk", "worst_translation",
                                "worst_rotation", "note"});
    for (const auto& r : results) {
        for (const auto& p : r.report.pairs) {
            t.add_row({r.group.bundles.front().robot_name, p.a, p.b, std::string(to_string(p.fk)),
                       p.worst_translation, p.worst_rotation, p.note});
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Identical files

struct CorpusDuplicates {
    DedupResult result;
    std::map<fs::path, std::string> source_of;  // file -> source display name
};

inline CorpusDuplicates find_corpus_duplicates(const CorpusScan& scan,
                                               std::size_t jobs = detail::default_jobs()) {
    std::map<fs::path, std::string> source_names;  // source dir -> display name
    for (const auto& r : scan.records) source_names[source_dir_of(scan, r.root_dir)] = r.source_name;

    CorpusDuplicates out;
    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(scan.root, fs::directory_options::skip_permission_denied,
                                             ec),
         end;
         !ec && it != end; it.increment(ec)) {
        if (!it->is_regular_file(ec)) continue;
        auto name = it->path().filename().string();
        if (name == kMetaInfoFile || name == kSourceInfoFile) continue;
        files.push_back(it->path());
        auto dir = source_dir_of(scan, it->path());
        auto sn = source_names.find(dir);
        out.source_of[it->path()] = sn != source_names.end() ? sn->second : dir.filename().string();
    }
    out.result = find_duplicates(std::move(files), jobs);
    return out;
}

inline ReportTable duplicates_table(const CorpusScan& scan, const CorpusDuplicates& d) {
    ReportTable t("duplicates", {"group_id", "source", "path", "extension", "size", "digest"});
    for (std::size_t g = 0; g < d.result.groups.size(); ++g) {
        const auto& group = d.result.groups[g];
        for (const auto& m : group.members) {
            t.add_row({detail::as_cell(g + 1), d.source_of.at(m), scan.relative(m),
                       detail::extension_of(m.string()), detail::as_cell(group.size), group.digest});
        }
    }
    return t;
}

// Per source and extension: files belonging to a group that spans at least
// two sources.
inline ReportTable duplicates_by_source_table(const CorpusDuplicates& d) {
    const std::vector<std::string> exts{"urdf", "stl", "dae", "obj"};
    std::map<std::string, std::map<std::string, std::size_t>> counts;
    std::set<std::string> sources;
    for (const auto& [file, source] : d.source_of) sources.insert(source);
    for (const auto& g : d.result.groups) {
        std::set<std::string> spanned;
        for (const auto& m : g.members) spanned.insert(d.source_of.at(m));
        if (spanned.size() < 2) continue;
        for (const auto& m : g.members) ++counts[d.source_of.at(m)][detail::extension_of(m.string())];
    }
    std::vector<std::string> cols{"source"};
    for (const auto& e : exts) cols.push_back("." + e);
    ReportTable t("duplicates_by_source", cols);
    for (const auto& s : sources) {
        std::vector<Cell> row{s};
        for (const auto& e : exts) row.emplace_back(detail::as_cell(counts[s][e]));
        t.add_row(std::move(row));
    }
    return t;
}

inline ReportTable file_errors_table(const CorpusScan& scan, const CorpusDuplicates& d) {
    ReportTable t("file_errors", {"path", "message"});
    for (const auto& e : d.result.errors) {
        t.add_row({scan.relative(e.path), std::string("unreadable file")});
    }
    return t;
}

}  // namespace urdf_inspect
