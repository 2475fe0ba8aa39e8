#pragma once

// Command-line front end.
//
//   urdf-inspect validate <file|dir>   per-file diagnostics     (exit 1 on errors)
//   urdf-inspect inspect  <file>       joints, links, mesh types
//   urdf-inspect scan     <root>       every corpus table
//   urdf-inspect compare  <root>       multiply defined robots
//   urdf-inspect dupes    <root>       identical files
//   urdf-inspect stats    <root>       model/name/contact/license tables
//
// Exit codes: 0 ok, 1 validation errors, 2 usage, 3 I/O failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "urdf_inspect/corpus.hpp"

namespace urdf_inspect {

enum ExitCode : int { kExitOk = 0, kExitValidationErrors = 1, kExitUsage = 2, kExitIo = 3 };

struct CliOptions {
    Format format = Format::csv;
    std::optional<fs::path> out_dir;
    FkCompareOptions fk;
};

namespace detail {

inline void write_tables(const std::vector<ReportTable>& tables, const CliOptions& opts,
                         std::ostream& out) {
    if (opts.out_dir) {
        for (const auto& t : tables) emit_to_dir(t, opts.format, *opts.out_dir);
        return;
    }
    if (tables.size() == 1) {
        emit(tables.front(), opts.format, out);
        return;
    }
    if (opts.format == Format::json) {
        auto doc = nlohmann::ordered_json::object();
        for (const auto& t : tables) doc[t.name()] = nlohmann::ordered_json::parse(to_json(t));
        out << doc.dump(2) << '\n';
    } else {
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i > 0) out << '\n';
            out << "# " << tables[i].name() << '\n' << to_csv(tables[i]);
        }
    }
    out.flush();
    if (!out) throw IoError("failed writing to output");
}

inline std::vector<fs::path> urdf_files_under(const fs::path& dir) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec),
         end;
         !ec && it != end; it.increment(ec)) {
        if (it->is_regular_file(ec) && extension_of(it->path().string()) == "urdf") {
            files.push_back(it->path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

inline int cmd_validate(const fs::path& target, const CliOptions& opts, std::ostream& out) {
    std::error_code ec;
    std::vector<std::pair<std::string, fs::path>> files;
    if (fs::is_directory(target, ec)) {
        for (const auto& f : urdf_files_under(target)) {
            files.emplace_back(f.lexically_relative(target).generic_string(), f);
        }
    } else if (fs::is_regular_file(target, ec)) {
        files.emplace_back(target.filename().generic_string(), target);
    } else {
        throw IoError("no such file or directory: " + target.string());
    }

    bool any_error = false;
    std::vector<std::pair<std::string, std::vector<Diagnostic>>> per_file;
    for (const auto& [label, path] : files) {
        auto result = validate(read_file(path));
        auto diags = result.diagnostics;
        if (result.model) {
            auto sanity = kinematic_sanity(*result.model);
            diags.insert(diags.end(), sanity.begin(), sanity.end());
            sort_by_position(diags);
        }
        any_error = any_error || result.has_errors();
        per_file.emplace_back(label, std::move(diags));
    }
    write_tables({diagnostics_table(per_file)}, opts, out);
    return any_error ? kExitValidationErrors : kExitOk;
}

inline int cmd_inspect(const fs::path& file, const CliOptions& opts, std::ostream& out) {
    std::error_code ec;
    if (!fs::is_regular_file(file, ec)) throw IoError("no such file: " + file.string());
    std::string text = read_file(file);
    std::string label = file.filename().generic_string();
    auto result = validate(text);
    auto parsed = parse_urdf(text);
    if (!parsed) {
        write_tables({diagnostics_table({{label, result.diagnostics}})}, opts, out);
        return kExitValidationErrors;
    }
    const RobotModel& m = *parsed;
    auto inv = mesh_inventory(m);

    std::vector<std::string> link_names, joint_names;
    for (const auto& l : m.links) link_names.push_back(l.name);
    for (const auto& j : m.joints) joint_names.push_back(j.name);

    ReportTable info("model_info", {"file", "robot", "links", "joints", "link_names",
                                    "joint_names", "visual_mesh_types", "collision_mesh_types",
                                    "lines", "xacro_banner"});
    info.add_row({label, m.name, as_cell(m.links.size()), as_cell(m.joints.size()),
                  join(link_names, ";"), join(joint_names, ";"), join_types(inv.visual_types()),
                  join_types(inv.collision_types()), as_cell(m.source_line_count),
                  detect_xacro_generated(text)});

    ReportTable joints("joints", {"name", "type", "parent", "child"});
    for (const auto& j : m.joints) {
        joints.add_row({j.name, std::string(to_string(j.kind)), j.parent, j.child});
    }
    ReportTable links("links", {"name", "visuals", "collisions", "has_inertial"});
    for (const auto& l : m.links) {
        links.add_row({l.name, as_cell(l.visuals.size()), as_cell(l.collisions.size()),
                       l.inertial.has_value()});
    }
    auto diags = result.diagnostics;
    write_tables({info, joints, links, diagnostics_table({{label, diags}})}, opts, out);
    return result.has_errors() ? kExitValidationErrors : kExitOk;
}

inline std::vector<ReportTable> stats_tables(const CorpusAnalysis& c) {
    return {model_stats_table(c), name_stats_table(c), contact_table(c), licenses_table(c)};
}

inline std::vector<ReportTable> compare_tables(const CorpusAnalysis& c, const CliOptions& opts) {
    auto results = compare_corpus(c, opts.fk);
    return {discrepancies_table(results), discrepancy_summary_table(results),
            fk_detail_table(results)};
}

inline std::vector<ReportTable> dupes_tables(const CorpusScan& scan) {
    auto d = find_corpus_duplicates(scan);
    return {duplicates_table(scan, d), duplicates_by_source_table(d), file_errors_table(scan, d)};
}

}  // namespace detail

// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"URDF parsing, validation and corpus analysis", "urdf-inspect"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "csv";
    std::string out_dir;
    CliOptions opts;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", out_dir, "Write one file per table into this directory");
    app.add_option("--fk-samples", opts.fk.samples, "Configurations sampled per FK comparison")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--fk-tol", opts.fk.tol, "FK equality tolerance (m, rad)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", opts.fk.seed, "Seed for FK configuration sampling")
        ->capture_default_str();

    std::string path;
    auto* validate_cmd = app.add_subcommand("validate", "Validate a URDF file or every URDF under a directory");
    validate_cmd->add_option("path", path, "URDF file or directory")->required();
    auto* inspect_cmd = app.add_subcommand("inspect", "Model information for one URDF file");
    inspect_cmd->add_option("file", path, "URDF file")->required();
    auto* scan_cmd = app.add_subcommand("scan", "All corpus tables for a dataset root");
    scan_cmd->add_option("root", path, "Dataset root")->required();
    auto* compare_cmd = app.add_subcommand("compare", "Compare multiply defined robots");
    compare_cmd->add_option("root", path, "Dataset root")->required();
    auto* dupes_cmd = app.add_subcommand("dupes", "Identical files across the dataset");
    dupes_cmd->add_option("root", path, "Dataset root")->required();
    auto* stats_cmd = app.add_subcommand("stats", "Model, name, contact and license statistics");
    stats_cmd->add_option("root", path, "Dataset root")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    opts.format = format == "json" ? Format::json : Format::csv;
    if (!out_dir.empty()) opts.out_dir = fs::path(out_dir);

    try {
        if (validate_cmd->parsed()) return detail::cmd_validate(path, opts, out);
        if (inspect_cmd->parsed()) return detail::cmd_inspect(path, opts, out);

        if (dupes_cmd->parsed()) {
            auto scan = scan_corpus(path);
            detail::write_tables(detail::dupes_tables(scan), opts, out);
            return kExitOk;
        }
        auto corpus = analyze_corpus(path);
        std::vector<ReportTable> tables;
        if (scan_cmd->parsed()) {
            tables = {overview_table(corpus),   bundles_table(corpus),
                      mesh_inventory_table(corpus), structures_table(corpus),
                      xacro_table(corpus),      parsing_errors_table(corpus),
                      diagnostics_table(corpus), mesh_types_table(corpus),
                      notices_table(corpus)};
            for (auto& t : detail::stats_tables(corpus)) tables.push_back(std::move(t));
            for (auto& t : detail::compare_tables(corpus, opts)) tables.push_back(std::move(t));
            for (auto& t : detail::dupes_tables(corpus.scan)) tables.push_back(std::move(t));
        } else if (compare_cmd->parsed()) {
            tables = detail::compare_tables(corpus, opts);
        } else {
            tables = detail::stats_tables(corpus);
        }
        detail::write_tables(tables, opts, out);
        return kExitOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace urdf_inspect
