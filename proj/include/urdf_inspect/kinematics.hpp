#pragma once

// Kinematic tree construction and forward kinematics over a RobotModel.
//
// Frames compose as  child = parent * origin(joint) * motion(joint, q)
// with origin rpy applied as fixed-axis X-Y-Z, i.e. R = Rz(yaw) Ry(pitch) Rx(roll).

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "urdf_inspect/model.hpp"
#include "urdf_inspect/result.hpp"

namespace urdf_inspect {

// Rigid-body transform. `rotation` stays orthonormal with det +1.
struct Transform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static Transform identity() { return {}; }

    Transform operator*(const Transform& rhs) const {
        return {rotation * rhs.rotation, rotation * rhs.translation + translation};
    }
};

inline Eigen::Matrix3d rpy_to_matrix(const Vec3& rpy) {
    return (Eigen::AngleAxisd(rpy[2], Eigen::Vector3d::UnitZ()) *
            Eigen::AngleAxisd(rpy[1], Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(rpy[0], Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
}

inline Transform to_transform(const Pose& p) {
    return {rpy_to_matrix(p.rpy), Eigen::Vector3d(p.xyz[0], p.xyz[1], p.xyz[2])};
}

// Angle in [0, pi] of the rotation R. Uses atan2 to stay accurate near 0.
inline double rotation_angle(const Eigen::Matrix3d& r) {
    Eigen::Vector3d skew(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
    double c = (r.trace() - 1.0) / 2.0;
    return std::atan2(skew.norm() / 2.0, c);
}

inline double rotation_distance(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
    return rotation_angle(a.transpose() * b);
}

struct TreeEdge {
    std::size_t joint_index = 0;  // into RobotModel::joints
    std::string child;
};

struct KinematicTree {
    std::string root;
    std::map<std::string, std::vector<TreeEdge>, std::less<>> children;
    // Non-fixed joints in document order; defines the JointConfig layout.
    std::vector<std::size_t> actuated;
    // Per joint (indexed like RobotModel::joints); normalized for moving joints.
    std::vector<Eigen::Vector3d> unit_axes;
    // Links in depth-first order from the root, children in document order.
    std::vector<std::string> preorder;

    [[nodiscard]] const std::vector<TreeEdge>& children_of(std::string_view link) const {
        static const std::vector<TreeEdge> none;
        auto it = children.find(link);
        return it == children.end() ? none : it->second;
    }

    // Links without children, in tree-position order.
    [[nodiscard]] std::vector<std::string> leaves() const {
        std::vector<std::string> out;
        for (const auto& l : preorder) {
            if (children_of(l).empty()) out.push_back(l);
        }
        return out;
    }
};

struct TreeError {
    enum class Kind { multiple_roots, cycle, disconnected, multiple_parents, zero_axis };
    Kind kind = Kind::cycle;
    std::string detail;
};

inline constexpr std::string_view to_string(TreeError::Kind k) noexcept {
    switch (k) {
        case TreeError::Kind::multiple_roots: return "multiple_roots";
        case TreeError::Kind::cycle: return "cycle";
        case TreeError::Kind::disconnected: return "disconnected";
        case TreeError::Kind::multiple_parents: return "multiple_parents";
        case TreeError::Kind::zero_axis: return "zero_axis";
    }
    return "?";
}

inline Result<KinematicTree, TreeError> build_tree(const RobotModel& model) {
    using Kind = TreeError::Kind;
    std::map<std::string_view, bool> has_parent;
    for (const auto& l : model.links) has_parent.emplace(l.name, false);

    KinematicTree tree;
    tree.unit_axes.resize(model.joints.size(), Eigen::Vector3d::UnitX());
    for (std::size_t i = 0; i < model.joints.size(); ++i) {
        const Joint& j = model.joints[i];
        auto parent = has_parent.find(j.parent);
        auto child = has_parent.find(j.child);
        if (parent == has_parent.end() || child == has_parent.end()) {
            return TreeError{Kind::disconnected,
                             "joint '" + j.name + "' references an undeclared link"};
        }
        if (child->second) {
            return TreeError{Kind::multiple_parents, "link '" + j.child + "' has two parents"};
        }
        child->second = true;
        tree.children[j.parent].push_back({i, j.child});

        Eigen::Vector3d axis(j.axis[0], j.axis[1], j.axis[2]);
        if (j.moves_along_axis() || j.kind == JointKind::planar) {
            double norm = axis.norm();
            if (!(norm > 1e-12)) {
                return TreeError{Kind::zero_axis, "joint '" + j.name + "' has a zero axis"};
            }
            axis /= norm;
        }
        tree.unit_axes[i] = axis;
        if (j.kind != JointKind::fixed) tree.actuated.push_back(i);
    }

    std::vector<std::string_view> roots;
    for (const auto& l : model.links) {
        if (!has_parent.at(l.name)) roots.push_back(l.name);
    }
    if (roots.empty()) {
        return TreeError{Kind::cycle, "every link has a parent"};
    }
    if (roots.size() > 1) {
        return TreeError{Kind::multiple_roots, std::to_string(roots.size()) + " root links"};
    }
    tree.root = std::string(roots.front());

    std::vector<std::string_view> stack{tree.root};
    while (!stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        tree.preorder.emplace_back(cur);
        const auto& kids = tree.children_of(cur);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(it->child);
    }
    if (tree.preorder.size() != has_parent.size()) {
        // leftovers hang off a cycle
        return TreeError{Kind::cycle, std::to_string(has_parent.size() - tree.preorder.size()) +
                                          " links lie on a cycle detached from the root"};
    }
    return tree;
}

// Joint values aligned with KinematicTree::actuated (rad or m).
struct JointConfig {
    std::vector<double> values;
};

inline JointConfig zero_config(const KinematicTree& tree) {
    return {std::vector<double>(tree.actuated.size(), 0.0)};
}

using FrameMap = std::map<std::string, Transform, std::less<>>;

struct FkError {
    enum class Kind { unsupported_joint, config_size_mismatch };
    Kind kind = Kind::unsupported_joint;
    std::string detail;
};

inline Transform joint_motion(JointKind kind, const Eigen::Vector3d& unit_axis, double q) {
    Transform t;
    if (kind == JointKind::revolute || kind == JointKind::continuous) {
        t.rotation = Eigen::AngleAxisd(q, unit_axis).toRotationMatrix();
    } else if (kind == JointKind::prismatic) {
        t.translation = q * unit_axis;
    }
    return t;
}

inline Result<FrameMap, FkError> forward_kinematics(const KinematicTree& tree,
                                                    const RobotModel& model,
                                                    const JointConfig& q) {
    if (q.values.size() != tree.actuated.size()) {
        return FkError{FkError::Kind::config_size_mismatch,
                       "expected " + std::to_string(tree.actuated.size()) + " joint values, got " +
                           std::to_string(q.values.size())};
    }
    std::vector<double> value_of(model.joints.size(), 0.0);
    for (std::size_t k = 0; k < tree.actuated.size(); ++k) value_of[tree.actuated[k]] = q.values[k];

    FrameMap frames;
    frames.emplace(tree.root, Transform::identity());
    for (const auto& link : tree.preorder) {
        const Transform& parent_frame = frames.at(link);
        for (const auto& edge : tree.children_of(link)) {
            const Joint& j = model.joints[edge.joint_index];
            if (j.kind == JointKind::floating || j.kind == JointKind::planar) {
                return FkError{FkError::Kind::unsupported_joint,
                               std::string(to_string(j.kind)) + " joint '" + j.name + "'"};
            }
            frames.emplace(edge.child,
                           parent_frame * to_transform(j.origin) *
                               joint_motion(j.kind, tree.unit_axes[edge.joint_index],
                                            value_of[edge.joint_index]));
        }
    }
    return frames;
}

struct FkCompareOptions {
    std::size_t samples = 16;
    std::uint64_t seed = 0;
    double tol = 1e-6;  // meters, and radians for the rotation metric
};

struct FkSample {
    std::vector<double> q;
    double translation_deviation = 0.0;
    double rotation_deviation = 0.0;
};

struct FkComparison {
    bool equal = true;
    double worst_deviation = 0.0;  // max of the two metrics below
    double worst_translation = 0.0;
    double worst_rotation = 0.0;
    std::vector<FkSample> samples;
};

struct Incomparable {
    enum class Kind { joint_count, joint_kinds, leaf_count, unsupported_joint };
    Kind kind = Kind::joint_count;
    std::string detail;
};

inline constexpr std::string_view to_string(Incomparable::Kind k) noexcept {
    switch (k) {
        case Incomparable::Kind::joint_count: return "joint_count";
        case Incomparable::Kind::joint_kinds: return "joint_kinds";
        case Incomparable::Kind::leaf_count: return "leaf_count";
        case Incomparable::Kind::unsupported_joint: return "unsupported_joint";
    }
    return "?";
}

namespace detail {

enum class MotionClass { rotational, translational, unsupported };

inline MotionClass motion_class(JointKind k) {
    switch (k) {
        case JointKind::revolute:
        case JointKind::continuous: return MotionClass::rotational;
        case JointKind::prismatic: return MotionClass::translational;
        default: return MotionClass::unsupported;
    }
}

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

inline std::optional<Range> declared_range(const Joint& j) {
    if (j.kind == JointKind::continuous || !j.limit || !j.limit->lower || !j.limit->upper) {
        return std::nullopt;
    }
    return Range{*j.limit->lower, *j.limit->upper};
}

// Sampling range for a paired joint; symmetric in (a, b).
inline Range sampling_range(const Joint& a, const Joint& b) {
    auto ra = declared_range(a);
    auto rb = declared_range(b);
    if (ra && rb) {
        Range r{std::max(ra->lo, rb->lo), std::min(ra->hi, rb->hi)};
        if (r.lo > r.hi) r.lo = r.hi = (r.lo + r.hi) / 2.0;
        return r;
    }
    if (ra) return *ra;
    if (rb) return *rb;
    if (motion_class(a.kind) == MotionClass::translational) return {-1.0, 1.0};
    return {-std::numbers::pi, std::numbers::pi};
}

}  // namespace detail

// Samples configurations (the first one is the zero configuration clamped
// into range), pairs actuated joints and leaf links by position and reports
// the largest frame deviation. Symmetric in the two models.
inline Result<FkComparison, Incomparable> fk_equivalent(const KinematicTree& tree_a,
                                                        const RobotModel& model_a,
                                                        const KinematicTree& tree_b,
                                                        const RobotModel& model_b,
                                                        const FkCompareOptions& opts = {}) {
    using Kind = Incomparable::Kind;
    if (!(opts.tol > 0.0)) throw std::invalid_argument("fk_equivalent: tol must be positive");
    if (opts.samples == 0) throw std::invalid_argument("fk_equivalent: samples must be >= 1");

    for (const auto* m : {&model_a, &model_b}) {
        for (const auto& j : m->joints) {
            if (j.kind == JointKind::floating || j.kind == JointKind::planar) {
                return Incomparable{Kind::unsupported_joint, std::string(to_string(j.kind)) +
                                                                 " joint '" + j.name + "'"};
            }
        }
    }
    const std::size_t dof = tree_a.actuated.size();
    if (dof != tree_b.actuated.size()) {
        return Incomparable{Kind::joint_count, std::to_string(dof) + " vs " +
                                                   std::to_string(tree_b.actuated.size()) +
                                                   " actuated joints"};
    }
    std::vector<detail::Range> ranges;
    for (std::size_t k = 0; k < dof; ++k) {
        const Joint& ja = model_a.joints[tree_a.actuated[k]];
        const Joint& jb = model_b.joints[tree_b.actuated[k]];
        if (detail::motion_class(ja.kind) != detail::motion_class(jb.kind)) {
            return Incomparable{Kind::joint_kinds, "actuated joint " + std::to_string(k) + ": " +
                                                       std::string(to_string(ja.kind)) + " vs " +
                                                       std::string(to_string(jb.kind))};
        }
        ranges.push_back(detail::sampling_range(ja, jb));
    }
    const auto leaves_a = tree_a.leaves();
    const auto leaves_b = tree_b.leaves();
    if (leaves_a.size() != leaves_b.size()) {
        return Incomparable{Kind::leaf_count, std::to_string(leaves_a.size()) + " vs " +
                                                  std::to_string(leaves_b.size()) + " leaf links"};
    }

    std::mt19937_64 rng(opts.seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    FkComparison cmp;
    for (std::size_t s = 0; s < opts.samples; ++s) {
        FkSample sample;
        sample.q.resize(dof);
        for (std::size_t k = 0; k < dof; ++k) {
            const auto& r = ranges[k];
            sample.q[k] = s == 0 ? std::clamp(0.0, r.lo, r.hi) : r.lo + (r.hi - r.lo) * unit();
        }
        auto fa = forward_kinematics(tree_a, model_a, {sample.q});
        auto fb = forward_kinematics(tree_b, model_b, {sample.q});
        if (!fa || !fb) {
            return Incomparable{Kind::unsupported_joint,
                                (!fa ? fa.error() : fb.error()).detail};
        }
        for (std::size_t i = 0; i < leaves_a.size(); ++i) {
            const Transform& ta = fa->at(leaves_a[i]);
            const Transform& tb = fb->at(leaves_b[i]);
            sample.translation_deviation = std::max(sample.translation_deviation,
                                                    (ta.translation - tb.translation).norm());
            sample.rotation_deviation =
                std::max(sample.rotation_deviation, rotation_distance(ta.rotation, tb.rotation));
        }
        cmp.worst_translation = std::max(cmp.worst_translation, sample.translation_deviation);
        cmp.worst_rotation = std::max(cmp.worst_rotation, sample.rotation_deviation);
        cmp.samples.push_back(std::move(sample));
    }
    cmp.worst_deviation = std::max(cmp.worst_translation, cmp.worst_rotation);
    cmp.equal = cmp.worst_translation <= opts.tol && cmp.worst_rotation <= opts.tol;
    return cmp;
}

}  // namespace urdf_inspect
