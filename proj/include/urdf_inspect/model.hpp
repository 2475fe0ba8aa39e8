#pragma once

// Typed in-memory URDF robot model and the XML-to-model parser.
// Structural problems (names, duplicates, limits, dangling links) are kept in
// the model for the validator; unrepresentable values give a ParseFailure.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "urdf_inspect/detail/strings.hpp"
#include "urdf_inspect/detail/xml_dom.hpp"
#include "urdf_inspect/result.hpp"

namespace urdf_inspect {

using Vec3 = std::array<double, 3>;

struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
    friend auto operator<=>(const SourcePos&, const SourcePos&) = default;
};

// xyz in meters, rpy in radians (roll, pitch, yaw).
struct Pose {
    Vec3 xyz{0.0, 0.0, 0.0};
    Vec3 rpy{0.0, 0.0, 0.0};

    friend bool operator==(const Pose&, const Pose&) = default;
};

struct Box {
    Vec3 size{};
    friend bool operator==(const Box&, const Box&) = default;
};
struct Cylinder {
    double radius = 0.0;
    double length = 0.0;
    friend bool operator==(const Cylinder&, const Cylinder&) = default;
};
struct Sphere {
    double radius = 0.0;
    friend bool operator==(const Sphere&, const Sphere&) = default;
};
struct Mesh {
    std::string uri;
    Vec3 scale{1.0, 1.0, 1.0};
    friend bool operator==(const Mesh&, const Mesh&) = default;
};

using Geometry = std::variant<Box, Cylinder, Sphere, Mesh>;

struct Inertial {
    Pose origin;
    double mass = 0.0;
    // ixx, ixy, ixz, iyy, iyz, izz
    std::array<double, 6> inertia{};

    friend bool operator==(const Inertial&, const Inertial&) = default;
};

struct Visual {
    Pose origin;
    Geometry geometry;
    std::optional<std::string> material_name;
    SourcePos pos;

    friend bool operator==(const Visual&, const Visual&) = default;
};

struct Collision {
    Pose origin;
    Geometry geometry;
    SourcePos pos;

    friend bool operator==(const Collision&, const Collision&) = default;
};

struct Link {
    std::string name;
    std::optional<Inertial> inertial;
    std::vector<Visual> visuals;
    std::vector<Collision> collisions;
    SourcePos pos;

    friend bool operator==(const Link&, const Link&) = default;
};

enum class JointKind { revolute, continuous, prismatic, fixed, floating, planar };

inline constexpr std::string_view to_string(JointKind k) noexcept {
    switch (k) {
        case JointKind::revolute: return "revolute";
        case JointKind::continuous: return "continuous";
        case JointKind::prismatic: return "prismatic";
        case JointKind::fixed: return "fixed";
        case JointKind::floating: return "floating";
        case JointKind::planar: return "planar";
    }
    return "unknown";
}

inline std::optional<JointKind> joint_kind_from_string(std::string_view s) noexcept {
    for (auto k : {JointKind::revolute, JointKind::continuous, JointKind::prismatic,
                   JointKind::fixed, JointKind::floating, JointKind::planar}) {
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

struct JointLimit {
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<double> effort;
    std::optional<double> velocity;

    friend bool operator==(const JointLimit&, const JointLimit&) = default;
};

struct Joint {
    std::string name;
    JointKind kind = JointKind::fixed;
    std::string parent;
    std::string child;
    Pose origin;
    Vec3 axis{1.0, 0.0, 0.0};
    std::optional<JointLimit> limit;
    SourcePos pos;

    // Whether the joint has a single scalar degree of freedom along `axis`.
    [[nodiscard]] bool moves_along_axis() const noexcept {
        return kind == JointKind::revolute || kind == JointKind::continuous ||
               kind == JointKind::prismatic;
    }

    friend bool operator==(const Joint&, const Joint&) = default;
};

struct Material {
    std::string name;
    std::optional<std::array<double, 4>> rgba;
    std::optional<std::string> texture;
    SourcePos pos;

    friend bool operator==(const Material&, const Material&) = default;
};

// Something skipped while parsing (unknown element, vendor extension).
struct Notice {
    SourcePos pos;
    std::string message;

    friend bool operator==(const Notice&, const Notice&) = default;
};

struct RobotModel {
    std::string name;  // empty when the attribute is missing
    SourcePos pos;
    std::vector<Link> links;
    std::vector<Joint> joints;
    std::vector<Material> materials;
    std::vector<Notice> notices;
    std::size_t source_line_count = 0;

    [[nodiscard]] const Link* find_link(std::string_view link_name) const {
        for (const auto& l : links) {
            if (l.name == link_name) return &l;
        }
        return nullptr;
    }
    [[nodiscard]] const Joint* find_joint(std::string_view joint_name) const {
        for (const auto& j : joints) {
            if (j.name == joint_name) return &j;
        }
        return nullptr;
    }

    friend bool operator==(const RobotModel&, const RobotModel&) = default;
};

// Always error class F in the validator taxonomy.
struct ParseFailure {
    enum class Reason { malformed_xml, not_a_robot, invalid_value, unknown_joint_type };

    static constexpr char code = 'F';
    Reason reason = Reason::malformed_xml;
    std::string message;
    SourcePos pos;
};

// Number of lines; LF, CRLF and lone CR all end a line, and a trailing
// partial line counts as one.
inline std::size_t line_count(std::string_view raw_text) noexcept {
    std::size_t lines = 0;
    for (std::size_t i = 0; i < raw_text.size(); ++i) {
        char c = raw_text[i];
        if (c == '\n') {
            ++lines;
        } else if (c == '\r') {
            ++lines;
            if (i + 1 < raw_text.size() && raw_text[i + 1] == '\n') ++i;
        }
    }
    if (!raw_text.empty() && raw_text.back() != '\n' && raw_text.back() != '\r') ++lines;
    return lines;
}

namespace detail {

class UrdfBuilder {
public:
    struct Failure {
        ParseFailure failure;
    };

    RobotModel build(const XmlElement& root) {
        if (root.name != "robot") {
            fail(ParseFailure::Reason::not_a_robot,
                 "root element is <" + root.name + ">, expected <robot>", root);
        }
        RobotModel model;
        model.pos = pos_of(root);
        if (const auto* n = root.attribute("name")) model.name = *n;

        for (const auto& el : root.children) {
            if (el.name == "link") {
                model.links.push_back(parse_link(el, model));
            } else if (el.name == "joint") {
                model.joints.push_back(parse_joint(el, model));
            } else if (el.name == "material") {
                model.materials.push_back(parse_material(el));
            } else if (el.name == "transmission" || el.name == "gazebo") {
                // Known ROS extensions, not part of the kinematic model.
            } else {
                note(model, el, "ignored element <" + el.name + "> under <robot>");
            }
        }
        return model;
    }

private:
    [[noreturn]] static void fail(ParseFailure::Reason reason, std::string message,
                                  const XmlElement& at) {
        throw Failure{ParseFailure{reason, std::move(message), pos_of(at)}};
    }

    static SourcePos pos_of(const XmlElement& el) { return {el.line, el.column}; }

    static void note(RobotModel& model, const XmlElement& el, std::string message) {
        model.notices.push_back({pos_of(el), std::move(message)});
    }

    template <std::size_t N>
    static std::array<double, N> parse_vector(const XmlElement& el, std::string_view attr,
                                              const std::string& text) {
        auto tokens = split_ws(text);
        if (tokens.size() != N) {
            fail(ParseFailure::Reason::invalid_value,
                 "<" + el.name + "> attribute '" + std::string(attr) + "' needs " +
                     std::to_string(N) + " numbers, got " + std::to_string(tokens.size()) +
                     " in \"" + text + "\"",
                 el);
        }
        std::array<double, N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            auto v = parse_double(tokens[i]);
            if (!v) {
                fail(ParseFailure::Reason::invalid_value,
                     "<" + el.name + "> attribute '" + std::string(attr) +
                         "' has non-numeric component \"" + std::string(tokens[i]) + "\"",
                     el);
            }
            out[i] = *v;
        }
        return out;
    }

    template <std::size_t N>
    static std::optional<std::array<double, N>> optional_vector(const XmlElement& el,
                                                                std::string_view attr) {
        const auto* text = el.attribute(attr);
        if (text == nullptr) return std::nullopt;
        return parse_vector<N>(el, attr, *text);
    }

    static std::optional<double> optional_scalar(const XmlElement& el, std::string_view attr) {
        const auto* text = el.attribute(attr);
        if (text == nullptr) return std::nullopt;
        auto v = parse_double(trim(*text));
        if (!v) {
            fail(ParseFailure::Reason::invalid_value,
                 "<" + el.name + "> attribute '" + std::string(attr) + "' is not a number: \"" +
                     *text + "\"",
                 el);
        }
        return v;
    }

    static double required_scalar(const XmlElement& el, std::string_view attr) {
        auto v = optional_scalar(el, attr);
        if (!v) {
            fail(ParseFailure::Reason::invalid_value,
                 "<" + el.name + "> is missing attribute '" + std::string(attr) + "'", el);
        }
        return *v;
    }

    static double positive(double v, const XmlElement& el, std::string_view what) {
        if (!(v > 0.0)) {
            fail(ParseFailure::Reason::invalid_value,
                 "<" + el.name + "> " + std::string(what) + " must be positive", el);
        }
        return v;
    }

    static Pose parse_origin(const XmlElement* el) {
        Pose p;
        if (el == nullptr) return p;
        if (auto xyz = optional_vector<3>(*el, "xyz")) p.xyz = *xyz;
        if (auto rpy = optional_vector<3>(*el, "rpy")) p.rpy = *rpy;
        return p;
    }

    static Geometry parse_geometry(const XmlElement* el, const XmlElement& owner) {
        if (el == nullptr) {
            fail(ParseFailure::Reason::invalid_value, "<" + owner.name + "> has no <geometry>",
                 owner);
        }
        for (const auto& shape : el->children) {
            if (shape.name == "box") {
                const auto* size = shape.attribute("size");
                if (size == nullptr) {
                    fail(ParseFailure::Reason::invalid_value, "<box> is missing 'size'", shape);
                }
                Box b{parse_vector<3>(shape, "size", *size)};
                for (double s : b.size) positive(s, shape, "side length");
                return b;
            }
            if (shape.name == "cylinder") {
                Cylinder c;
                c.radius = positive(required_scalar(shape, "radius"), shape, "radius");
                c.length = positive(required_scalar(shape, "length"), shape, "length");
                return c;
            }
            if (shape.name == "sphere") {
                return Sphere{positive(required_scalar(shape, "radius"), shape, "radius")};
            }
            if (shape.name == "mesh") {
                const auto* uri = shape.attribute("filename");
                if (uri == nullptr || trim(*uri).empty()) {
                    fail(ParseFailure::Reason::invalid_value, "<mesh> has no filename", shape);
                }
                Mesh m;
                m.uri = std::string(trim(*uri));
                if (auto scale = optional_vector<3>(shape, "scale")) m.scale = *scale;
                return m;
            }
        }
        fail(ParseFailure::Reason::invalid_value,
             "<geometry> contains no box, cylinder, sphere or mesh", *el);
    }

    static Material parse_material(const XmlElement& el) {
        Material m;
        if (const auto* n = el.attribute("name")) m.name = *n;
        m.pos = pos_of(el);
        if (const auto* color = el.first_child("color")) {
            m.rgba = optional_vector<4>(*color, "rgba");
            if (!m.rgba) {
                fail(ParseFailure::Reason::invalid_value, "<color> is missing 'rgba'", *color);
            }
        }
        if (const auto* tex = el.first_child("texture")) {
            if (const auto* f = tex->attribute("filename")) m.texture = *f;
        }
        return m;
    }

    static const std::string& required_name(const XmlElement& el) {
        const auto* n = el.attribute("name");
        if (n == nullptr || n->empty()) {
            fail(ParseFailure::Reason::invalid_value, "<" + el.name + "> has no name", el);
        }
        return *n;
    }

    Link parse_link(const XmlElement& el, RobotModel& model) {
        Link link;
        link.name = required_name(el);
        link.pos = pos_of(el);
        for (const auto& c : el.children) {
            if (c.name == "inertial") {
                link.inertial = parse_inertial(c);
            } else if (c.name == "visual") {
                Visual v;
                v.pos = pos_of(c);
                v.origin = parse_origin(c.first_child("origin"));
                v.geometry = parse_geometry(c.first_child("geometry"), c);
                if (const auto* mat = c.first_child("material")) {
                    if (const auto* n = mat->attribute("name"); n != nullptr && !n->empty()) {
                        v.material_name = *n;
                    }
                    if (mat->first_child("color") != nullptr ||
                        mat->first_child("texture") != nullptr) {
                        Material def = parse_material(*mat);
                        if (!def.name.empty()) model.materials.push_back(std::move(def));
                    }
                }
                link.visuals.push_back(std::move(v));
            } else if (c.name == "collision") {
                Collision col;
                col.pos = pos_of(c);
                col.origin = parse_origin(c.first_child("origin"));
                col.geometry = parse_geometry(c.first_child("geometry"), c);
                link.collisions.push_back(std::move(col));
            } else {
                note(model, c, "ignored element <" + c.name + "> in link '" + link.name + "'");
            }
        }
        return link;
    }

    static Inertial parse_inertial(const XmlElement& el) {
        Inertial in;
        in.origin = parse_origin(el.first_child("origin"));
        const auto* mass = el.first_child("mass");
        if (mass == nullptr) {
            fail(ParseFailure::Reason::invalid_value, "<inertial> has no <mass>", el);
        }
        in.mass = required_scalar(*mass, "value");
        if (in.mass < 0.0) {
            fail(ParseFailure::Reason::invalid_value, "<mass> must not be negative", *mass);
        }
        const auto* inertia = el.first_child("inertia");
        if (inertia == nullptr) {
            fail(ParseFailure::Reason::invalid_value, "<inertial> has no <inertia>", el);
        }
        constexpr std::array<std::string_view, 6> keys{"ixx", "ixy", "ixz", "iyy", "iyz", "izz"};
        for (std::size_t i = 0; i < keys.size(); ++i) {
            in.inertia[i] = required_scalar(*inertia, keys[i]);
        }
        return in;
    }

    Joint parse_joint(const XmlElement& el, RobotModel& model) {
        Joint j;
        j.name = required_name(el);
        j.pos = pos_of(el);
        const auto* type = el.attribute("type");
        if (type == nullptr) {
            fail(ParseFailure::Reason::unknown_joint_type, "joint '" + j.name + "' has no type",
                 el);
        }
        auto kind = joint_kind_from_string(*type);
        if (!kind) {
            fail(ParseFailure::Reason::unknown_joint_type,
                 "joint '" + j.name + "' has unknown type \"" + *type + "\"", el);
        }
        j.kind = *kind;
        for (const auto& c : el.children) {
            if (c.name == "parent") {
                if (const auto* l = c.attribute("link")) j.parent = *l;
            } else if (c.name == "child") {
                if (const auto* l = c.attribute("link")) j.child = *l;
            } else if (c.name == "origin") {
                j.origin = parse_origin(&c);
            } else if (c.name == "axis") {
                if (auto xyz = optional_vector<3>(c, "xyz")) j.axis = *xyz;
            } else if (c.name == "limit") {
                JointLimit lim;
                lim.lower = optional_scalar(c, "lower");
                lim.upper = optional_scalar(c, "upper");
                lim.effort = optional_scalar(c, "effort");
                lim.velocity = optional_scalar(c, "velocity");
                j.limit = lim;
            } else if (c.name == "dynamics" || c.name == "calibration" || c.name == "mimic" ||
                       c.name == "safety_controller") {
                // Recognized but outside the model.
            } else {
                note(model, c, "ignored element <" + c.name + "> in joint '" + j.name + "'");
            }
        }
        return j;
    }
};

}  // namespace detail

// Parses URDF XML text. Never throws on malformed input; every failure is
// reported as a ParseFailure (class F).
inline Result<RobotModel, ParseFailure> parse_urdf(std::string_view xml_text) {
    auto dom = detail::parse_xml(xml_text);
    if (!dom) {
        const auto& e = dom.error();
        return ParseFailure{ParseFailure::Reason::malformed_xml, "XML parsing failed: " + e.message,
                            SourcePos{e.line, e.column}};
    }
    try {
        RobotModel model = detail::UrdfBuilder{}.build(*dom);
        model.source_line_count = line_count(xml_text);
        return model;
    } catch (detail::UrdfBuilder::Failure& f) {
        return std::move(f.failure);
    }
}

}  // namespace urdf_inspect
