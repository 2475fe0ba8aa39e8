#pragma once

// Accept/reject classification emulating the ROS URDF parser.
//
// Error classes:
//   A  revolute/prismatic joint without usable limits (effort and velocity)
//   B  no <link> elements
//   C  non-unique link name
//   D  robot has no name
//   E  joint parent (or child) names no declared link
//   F  XML or model parsing failed
// Warnings: undefined visual material; tree-shape findings from
// kinematic_sanity.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urdf_inspect/model.hpp"

namespace urdf_inspect {

enum class Severity { error, warning };

enum class DiagnosticCode { A, B, C, D, E, F, W_UNDEFINED_MATERIAL, W_OTHER };

inline constexpr std::string_view to_string(Severity s) noexcept {
    return s == Severity::error ? "error" : "warning";
}

inline constexpr std::string_view to_string(DiagnosticCode c) noexcept {
    switch (c) {
        case DiagnosticCode::A: return "A";
        case DiagnosticCode::B: return "B";
        case DiagnosticCode::C: return "C";
        case DiagnosticCode::D: return "D";
        case DiagnosticCode::E: return "E";
        case DiagnosticCode::F: return "F";
        case DiagnosticCode::W_UNDEFINED_MATERIAL: return "W_UNDEFINED_MATERIAL";
        case DiagnosticCode::W_OTHER: return "W_OTHER";
    }
    return "?";
}

inline constexpr bool is_error_code(DiagnosticCode c) noexcept {
    return c != DiagnosticCode::W_UNDEFINED_MATERIAL && c != DiagnosticCode::W_OTHER;
}

struct Diagnostic {
    Severity severity = Severity::error;
    DiagnosticCode code = DiagnosticCode::F;
    std::string subject;
    SourcePos pos;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ValidationResult {
    std::optional<RobotModel> model;
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool has_errors() const noexcept {
        return std::any_of(diagnostics.begin(), diagnostics.end(),
                           [](const Diagnostic& d) { return d.severity == Severity::error; });
    }

    [[nodiscard]] std::set<DiagnosticCode> error_codes() const {
        std::set<DiagnosticCode> out;
        for (const auto& d : diagnostics) {
            if (d.severity == Severity::error) out.insert(d.code);
        }
        return out;
    }
};

namespace detail {

inline Diagnostic make_error(DiagnosticCode code, std::string subject, SourcePos pos,
                             std::string message) {
    return {Severity::error, code, std::move(subject), pos, std::move(message)};
}

inline Diagnostic make_warning(DiagnosticCode code, std::string subject, SourcePos pos,
                               std::string message) {
    return {Severity::warning, code, std::move(subject), pos, std::move(message)};
}

inline void sort_by_position(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.pos < b.pos; });
}

inline void check_joint_limits(const Joint& j, std::vector<Diagnostic>& out) {
    if (j.kind != JointKind::revolute && j.kind != JointKind::prismatic) return;
    std::string kind(to_string(j.kind));
    if (!j.limit) {
        out.push_back(make_error(DiagnosticCode::A, j.name, j.pos,
                                 kind + " joint '" + j.name + "' has no <limit>"));
        return;
    }
    std::vector<std::string> missing;
    if (!j.limit->effort) missing.emplace_back("effort");
    if (!j.limit->velocity) missing.emplace_back("velocity");
    if (!missing.empty()) {
        std::string what = missing.size() == 2 ? "effort and velocity" : missing.front();
        out.push_back(make_error(DiagnosticCode::A, j.name, j.pos,
                                 kind + " joint '" + j.name + "' limit lacks " + what));
        return;
    }
    if (j.limit->lower && j.limit->upper && *j.limit->lower > *j.limit->upper) {
        out.push_back(make_error(DiagnosticCode::A, j.name, j.pos,
                                 "joint '" + j.name + "' has lower limit above upper limit"));
    }
}

}  // namespace detail

// Classifies one URDF document. The model is returned only when no
// error-severity diagnostic was found; diagnostics are ordered by position.
inline ValidationResult validate(std::string_view xml_text) {
    using detail::make_error;
    ValidationResult result;

    auto parsed = parse_urdf(xml_text);
    if (!parsed) {
        const auto& f = parsed.error();
        result.diagnostics.push_back(make_error(
            DiagnosticCode::F,
            "line " + std::to_string(f.pos.line) + ", column " + std::to_string(f.pos.column),
            f.pos, f.message));
        return result;
    }
    const RobotModel& model = *parsed;
    auto& diags = result.diagnostics;

    if (std::string_view(detail::trim(model.name)).empty()) {
        diags.push_back(make_error(DiagnosticCode::D, "robot", model.pos,
                                   "no name given for the robot"));
    }
    if (model.links.empty()) {
        diags.push_back(make_error(DiagnosticCode::B, "robot", model.pos,
                                   "no link elements found in URDF file"));
    }

    std::set<std::string_view> seen_links;
    for (const auto& l : model.links) {
        if (!seen_links.insert(l.name).second) {
            diags.push_back(make_error(DiagnosticCode::C, l.name, l.pos,
                                       "link '" + l.name + "' is not unique"));
        }
    }

    for (const auto& j : model.joints) {
        detail::check_joint_limits(j, diags);
        if (j.parent.empty() || !seen_links.contains(j.parent)) {
            diags.push_back(make_error(
                DiagnosticCode::E, j.name, j.pos,
                j.parent.empty() ? "joint '" + j.name + "' has no parent link"
                                 : "parent link '" + j.parent + "' of joint '" + j.name +
                                       "' not found"));
        }
        if (j.child.empty() || !seen_links.contains(j.child)) {
            diags.push_back(make_error(
                DiagnosticCode::E, j.name, j.pos,
                j.child.empty() ? "joint '" + j.name + "' has no child link"
                                : "child link '" + j.child + "' of joint '" + j.name +
                                      "' not found"));
        }
    }

    std::set<std::string_view> defined_materials;
    for (const auto& m : model.materials) defined_materials.insert(m.name);
    for (const auto& l : model.links) {
        for (const auto& v : l.visuals) {
            if (v.material_name && !defined_materials.contains(*v.material_name)) {
                diags.push_back(detail::make_warning(
                    DiagnosticCode::W_UNDEFINED_MATERIAL, *v.material_name, v.pos,
                    "material '" + *v.material_name + "' of link '" + l.name +
                        "' is undefined"));
            }
        }
    }

    detail::sort_by_position(diags);
    if (!result.has_errors()) result.model = std::move(parsed).value();
    return result;
}

// Tree-shape warnings (multiple roots, cycles, multiple parents,
// unreachable links). Never produces errors.
inline std::vector<Diagnostic> kinematic_sanity(const RobotModel& model) {
    using detail::make_warning;
    std::vector<Diagnostic> out;

    std::map<std::string_view, std::size_t> link_index;
    for (std::size_t i = 0; i < model.links.size(); ++i) {
        link_index.emplace(model.links[i].name, i);
    }
    const std::size_t n = model.links.size();
    std::vector<std::vector<std::pair<std::size_t, const Joint*>>> edges(n);
    std::vector<std::size_t> parent_count(n, 0);
    for (const auto& j : model.joints) {
        auto p = link_index.find(j.parent);
        auto c = link_index.find(j.child);
        if (p == link_index.end() || c == link_index.end()) continue;
        edges[p->second].emplace_back(c->second, &j);
        if (++parent_count[c->second] == 2) {
            out.push_back(make_warning(DiagnosticCode::W_OTHER, j.child, j.pos,
                                       "link '" + j.child + "' has more than one parent joint"));
        }
    }

    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) {
        if (parent_count[i] == 0) roots.push_back(i);
    }

    // Iterative three-color DFS; every back edge closes a cycle.
    enum class Color { white, grey, black };
    std::vector<Color> color(n, Color::white);
    for (std::size_t start = 0; start < n; ++start) {
        if (color[start] != Color::white) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
        color[start] = Color::grey;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < edges[node].size()) {
                auto [child, joint] = edges[node][next++];
                if (color[child] == Color::grey) {
                    out.push_back(make_warning(DiagnosticCode::W_OTHER, joint->name, joint->pos,
                                               "joint '" + joint->name +
                                                   "' closes a kinematic cycle"));
                } else if (color[child] == Color::white) {
                    color[child] = Color::grey;
                    stack.emplace_back(child, 0);
                }
            } else {
                color[node] = Color::black;
                stack.pop_back();
            }
        }
    }

    if (roots.size() > 1) {
        std::string names;
        for (auto r : roots) {
            if (!names.empty()) names += ", ";
            names += "'" + model.links[r].name + "'";
        }
        out.push_back(make_warning(DiagnosticCode::W_OTHER, "robot", model.pos,
                                   std::to_string(roots.size()) + " root links: " + names));
    } else if (roots.size() == 1) {
        std::vector<bool> reached(n, false);
        std::vector<std::size_t> todo{roots.front()};
        reached[roots.front()] = true;
        while (!todo.empty()) {
            auto cur = todo.back();
            todo.pop_back();
            for (auto [child, joint] : edges[cur]) {
                if (!reached[child]) {
                    reached[child] = true;
                    todo.push_back(child);
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!reached[i]) {
                out.push_back(make_warning(
                    DiagnosticCode::W_OTHER, model.links[i].name, model.links[i].pos,
                    "link '" + model.links[i].name + "' is unreachable from root '" +
                        model.links[roots.front()].name + "'"));
            }
        }
    }

    detail::sort_by_position(out);
    return out;
}

}  // namespace urdf_inspect
