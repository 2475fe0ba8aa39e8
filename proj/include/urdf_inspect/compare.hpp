#pragma once

// Multiply defined robots: the same (manufacturer, robot) provided by two or
// more sources, and the feature discrepancies between their bundles.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urdf_inspect/bundle_analysis.hpp"
#include "urdf_inspect/bundle_scan.hpp"
#include "urdf_inspect/kinematics.hpp"
#include "urdf_inspect/model.hpp"

namespace urdf_inspect {

struct RobotKey {
    std::string manufacturer;
    std::string robot;

    friend bool operator==(const RobotKey&, const RobotKey&) = default;
    friend auto operator<=>(const RobotKey&, const RobotKey&) = default;
};

namespace detail {
inline std::string alnum_lower(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(ascii_lower(c));
    }
    return out;
}
}  // namespace detail

// Lower-cased alphanumerics of the metadata manufacturer and robot name,
// with the record's variant suffix removed from the name.
inline RobotKey robot_key(const BundleRecord& r) {
    std::string name = detail::alnum_lower(r.robot_name);
    std::string variant = detail::alnum_lower(r.variant);
    if (!variant.empty() && name.size() > variant.size() && name.ends_with(variant)) {
        name.resize(name.size() - variant.size());
    }
    return {detail::alnum_lower(r.manufacturer), std::move(name)};
}

struct MultiplyDefined {
    RobotKey key;
    // One bundle per source, ordered by source.
    std::vector<BundleRecord> bundles;
    // Further bundles of the same robot within a source; not paired.
    std::vector<BundleRecord> variants;
};

// Groups records by robot key; keeps keys present in at least two sources.
inline std::map<RobotKey, MultiplyDefined> find_multiply_defined(
    const std::vector<BundleRecord>& records) {
    std::map<RobotKey, std::map<std::string, std::vector<BundleRecord>>> by_key;
    for (const auto& r : records) {
        auto key = robot_key(r);
        if (key.robot.empty()) continue;
        by_key[key][r.source_name].push_back(r);
    }

    std::map<RobotKey, MultiplyDefined> out;
    for (auto& [key, by_source] : by_key) {
        if (by_source.size() < 2) continue;
        MultiplyDefined group{key, {}, {}};
        for (auto& [source, recs] : by_source) {
            std::stable_sort(recs.begin(), recs.end(), detail::record_less);
            // Prefer the record that is not a named variant.
            auto primary = std::find_if(recs.begin(), recs.end(),
                                        [](const BundleRecord& r) { return r.variant.empty(); });
            if (primary == recs.end()) primary = recs.begin();
            group.bundles.push_back(*primary);
            for (auto it = recs.begin(); it != recs.end(); ++it) {
                if (it != primary) group.variants.push_back(*it);
            }
        }
        out.emplace(key, std::move(group));
    }
    return out;
}

enum class FkFlag { same, different, incomparable };

inline constexpr std::string_view to_string(FkFlag f) noexcept {
    switch (f) {
        case FkFlag::same: return "false";
        case FkFlag::different: return "true";
        case FkFlag::incomparable: return "incomparable";
    }
    return "?";
}

struct GroupMember {
    BundleRecord record;
    std::optional<RobotModel> model;  // empty when the URDF failed validation
    std::string raw_text;
};

struct PairComparison {
    std::string a;  // "<source>/<id>"
    std::string b;
    FkFlag fk = FkFlag::same;
    std::string note;  // incomparability reason, when any
    double worst_translation = 0.0;
    double worst_rotation = 0.0;
};

struct DiscrepancyReport {
    RobotKey key;
    std::vector<std::string> sources;
    bool diff_joints = false;
    bool diff_links = false;
    bool diff_cad_types = false;
    FkFlag diff_fk = FkFlag::same;
    bool diff_lines = false;
    bool any = false;
    bool any_excl_lines = false;
    std::vector<PairComparison> pairs;
    std::vector<std::string> unparseable;
};

namespace detail {

inline std::string member_label(const BundleRecord& r) { return r.source_name + "/" + r.id; }

inline PairComparison compare_fk(const GroupMember& a, const GroupMember& b,
                                 const FkCompareOptions& opts) {
    PairComparison pc{member_label(a.record), member_label(b.record), FkFlag::same, {}, 0.0, 0.0};
    if (!a.model || !b.model) {
        pc.fk = FkFlag::incomparable;
        pc.note = "unparseable member";
        return pc;
    }
    auto ta = build_tree(*a.model);
    auto tb = build_tree(*b.model);
    if (!ta || !tb) {
        pc.fk = FkFlag::incomparable;
        pc.note = "tree error: " + std::string(to_string((!ta ? ta.error() : tb.error()).kind));
        return pc;
    }
    auto cmp = fk_equivalent(*ta, *a.model, *tb, *b.model, opts);
    if (!cmp) {
        pc.fk = FkFlag::incomparable;
        pc.note = std::string(to_string(cmp.error().kind)) + ": " + cmp.error().detail;
        return pc;
    }
    pc.fk = cmp->equal ? FkFlag::same : FkFlag::different;
    pc.worst_translation = cmp->worst_translation;
    pc.worst_rotation = cmp->worst_rotation;
    return pc;
}

}  // namespace detail

// Pairwise comparison over every bundle pair; a flag is set iff some pair
// differs. Invariant under permutation of `members`.
inline DiscrepancyReport compare_group(std::vector<GroupMember> members,
                                       const FkCompareOptions& opts = {}) {
    std::stable_sort(members.begin(), members.end(), [](const auto& x, const auto& y) {
        return detail::record_less(x.record, y.record);
    });
    DiscrepancyReport rep;
    if (!members.empty()) rep.key = robot_key(members.front().record);
    std::set<std::string> sources;
    for (const auto& m : members) {
        sources.insert(m.record.source_name);
        if (!m.model) rep.unparseable.push_back(detail::member_label(m.record));
    }
    rep.sources.assign(sources.begin(), sources.end());

    std::vector<std::optional<MeshInventory>> inventories;
    std::vector<std::size_t> lines;
    for (const auto& m : members) {
        inventories.push_back(m.model ? std::optional(mesh_inventory(*m.model)) : std::nullopt);
        lines.push_back(line_count(m.raw_text));
    }

    bool any_fk_incomparable = false;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            const auto& a = members[i];
            const auto& b = members[j];
            if (lines[i] != lines[j]) rep.diff_lines = true;
            if (a.model && b.model) {
                if (a.model->joints.size() != b.model->joints.size()) rep.diff_joints = true;
                if (a.model->links.size() != b.model->links.size()) rep.diff_links = true;
                if (inventories[i]->visual_types() != inventories[j]->visual_types() ||
                    inventories[i]->collision_types() != inventories[j]->collision_types()) {
                    rep.diff_cad_types = true;
                }
            }
            auto pc = detail::compare_fk(a, b, opts);
            if (pc.fk == FkFlag::different) rep.diff_fk = FkFlag::different;
            if (pc.fk == FkFlag::incomparable) any_fk_incomparable = true;
            rep.pairs.push_back(std::move(pc));
        }
    }
    if (rep.diff_fk != FkFlag::different && any_fk_incomparable) rep.diff_fk = FkFlag::incomparable;

    rep.any_excl_lines = rep.diff_joints || rep.diff_links || rep.diff_cad_types ||
                         rep.diff_fk == FkFlag::different;
    rep.any = rep.any_excl_lines || rep.diff_lines;
    return rep;
}

}  // namespace urdf_inspect
