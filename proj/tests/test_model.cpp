#include <gtest/gtest.h>

#include <random>
#include <string>

#include "oracles.hpp"
#include "test_support.hpp"
#include "urdf_inspect/model.hpp"

using namespace urdf_inspect;
using testing_support::fixtures;

TEST(ParseUrdf, Planar2DofModel) {
    auto r = parse_urdf(oracle::slurp(fixtures() / "planar_2dof.urdf"));
    ASSERT_TRUE(r.ok()) << r.error().message;
    const RobotModel& m = *r;
    EXPECT_EQ(m.name, "2 DOF planar robot");
    ASSERT_EQ(m.links.size(), 3u);
    ASSERT_EQ(m.joints.size(), 2u);

    const Link* base = m.find_link("base link");
    ASSERT_NE(base, nullptr);
    ASSERT_EQ(base->visuals.size(), 1u);
    const auto* box = std::get_if<Box>(&base->visuals[0].geometry);
    ASSERT_NE(box, nullptr);
    EXPECT_EQ(box->size, (Vec3{0.5, 0.5, 0.5}));
    EXPECT_EQ(base->visuals[0].origin.xyz, (Vec3{0, 0, 0.25}));

    const Joint* j1 = m.find_joint("joint 1");
    ASSERT_NE(j1, nullptr);
    EXPECT_EQ(j1->kind, JointKind::continuous);
    EXPECT_EQ(j1->parent, "base link");
    EXPECT_EQ(j1->child, "link 1");
    EXPECT_EQ(j1->axis, (Vec3{0, 1, 0}));
    EXPECT_EQ(j1->origin.xyz, (Vec3{0, 0, 0.5}));
}

TEST(ParseUrdf, SourcePositionsAreOneBased) {
    auto r = parse_urdf("<robot name=\"r\">\n  <link name=\"a\"/>\n</robot>");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r->pos, (SourcePos{1, 1}));
    EXPECT_EQ(r->links[0].pos, (SourcePos{2, 3}));
}

TEST(ParseUrdf, DefaultsForOmittedElements) {
    auto r = parse_urdf(R"(<robot name="r"><link name="a"/><link name="b"/>
        <joint name="j" type="revolute"><parent link="a"/><child link="b"/></joint></robot>)");
    ASSERT_TRUE(r.ok());
    const Joint& j = r->joints[0];
    EXPECT_EQ(j.axis, (Vec3{1, 0, 0}));
    EXPECT_EQ(j.origin, Pose{});
    EXPECT_FALSE(j.limit.has_value());
}

TEST(ParseUrdf, LimitAttributesIndividuallyOptional) {
    auto r = parse_urdf(R"(<robot name="r"><link name="a"/><link name="b"/>
        <joint name="j" type="revolute"><parent link="a"/><child link="b"/>
        <limit upper="1.5" effort="3"/></joint></robot>)");
    ASSERT_TRUE(r.ok());
    ASSERT_TRUE(r->joints[0].limit);
    const auto& lim = *r->joints[0].limit;
    EXPECT_FALSE(lim.lower);
    EXPECT_EQ(lim.upper, 1.5);
    EXPECT_EQ(lim.effort, 3.0);
    EXPECT_FALSE(lim.velocity);
}

TEST(ParseUrdf, MeshScaleAndUri) {
    auto r = parse_urdf(R"(<robot name="r"><link name="a"><collision><geometry>
        <mesh filename=" package://p/m.STL " scale="2 2 2"/></geometry></collision></link></robot>)");
    ASSERT_TRUE(r.ok());
    const auto& mesh = std::get<Mesh>(r->links[0].collisions[0].geometry);
    EXPECT_EQ(mesh.uri, "package://p/m.STL");
    EXPECT_EQ(mesh.scale, (Vec3{2, 2, 2}));
}

TEST(ParseUrdf, InlineMaterialDefinitionIsRecorded) {
    auto r = parse_urdf(R"(<robot name="r"><link name="a"><visual><geometry><sphere radius="1"/>
        </geometry><material name="red"><color rgba="1 0 0 1"/></material></visual></link></robot>)");
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r->materials.size(), 1u);
    EXPECT_EQ(r->materials[0].name, "red");
    EXPECT_EQ(r->links[0].visuals[0].material_name, "red");
}

TEST(ParseUrdf, UnknownElementsBecomeNotices) {
    auto r = parse_urdf(R"(<robot name="r"><link name="a"><foo/></link><gazebo/><bar/></robot>)");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r->notices.size(), 2u);
}

struct FailureCase {
    const char* label;
    const char* xml;
    ParseFailure::Reason reason;
};

class ParseFailures : public ::testing::TestWithParam<FailureCase> {};

TEST_P(ParseFailures, Rejected) {
    auto r = parse_urdf(GetParam().xml);
    ASSERT_FALSE(r.ok()) << GetParam().label;
    EXPECT_EQ(r.error().reason, GetParam().reason) << r.error().message;
}

INSTANTIATE_TEST_SUITE_P(
    Cases, ParseFailures,
    ::testing::Values(
        FailureCase{"empty", "", ParseFailure::Reason::malformed_xml},
        FailureCase{"unclosed", "<robot name=\"r\"><link name=\"a\">", ParseFailure::Reason::malformed_xml},
        FailureCase{"latin1", "<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?><robot name=\"r\"/>",
                    ParseFailure::Reason::malformed_xml},
        FailureCase{"root", "<model/>", ParseFailure::Reason::not_a_robot},
        FailureCase{"type", "<robot name=\"r\"><joint name=\"j\" type=\"ball\"/></robot>",
                    ParseFailure::Reason::unknown_joint_type},
        FailureCase{"no type", "<robot name=\"r\"><joint name=\"j\"/></robot>",
                    ParseFailure::Reason::unknown_joint_type},
        FailureCase{"rpy arity", "<robot name=\"r\"><joint name=\"j\" type=\"fixed\"><origin rpy=\"1 2 3 4\"/></joint></robot>",
                    ParseFailure::Reason::invalid_value},
        FailureCase{"axis text", "<robot name=\"r\"><joint name=\"j\" type=\"fixed\"><axis xyz=\"0 one 0\"/></joint></robot>",
                    ParseFailure::Reason::invalid_value},
        FailureCase{"limit text", "<robot name=\"r\"><joint name=\"j\" type=\"fixed\"><limit effort=\"x\"/></joint></robot>",
                    ParseFailure::Reason::invalid_value},
        FailureCase{"negative radius", "<robot name=\"r\"><link name=\"a\"><visual><geometry><sphere radius=\"-1\"/></geometry></visual></link></robot>",
                    ParseFailure::Reason::invalid_value},
        FailureCase{"no geometry", "<robot name=\"r\"><link name=\"a\"><visual/></link></robot>",
                    ParseFailure::Reason::invalid_value},
        FailureCase{"empty mesh", "<robot name=\"r\"><link name=\"a\"><visual><geometry><mesh filename=\"\"/></geometry></visual></link></robot>",
                    ParseFailure::Reason::invalid_value},
        FailureCase{"link name", "<robot name=\"r\"><link/></robot>", ParseFailure::Reason::invalid_value},
        FailureCase{"inertia", "<robot name=\"r\"><link name=\"a\"><inertial><mass value=\"1\"/></inertial></link></robot>",
                    ParseFailure::Reason::invalid_value},
        FailureCase{"nan", "<robot name=\"r\"><link name=\"a\"><visual><geometry><sphere radius=\"nan\"/></geometry></visual></link></robot>",
                    ParseFailure::Reason::invalid_value}));

TEST(ParseUrdf, DeepNestingRejected) {
    std::string xml = "<robot name=\"r\">";
    for (int i = 0; i < 400; ++i) xml += "<x>";
    for (int i = 0; i < 400; ++i) xml += "</x>";
    xml += "</robot>";
    EXPECT_FALSE(parse_urdf(xml).ok());
}

TEST(LineCount, Examples) {
    EXPECT_EQ(line_count(""), 0u);
    EXPECT_EQ(line_count("a"), 1u);
    EXPECT_EQ(line_count("a\n"), 1u);
    EXPECT_EQ(line_count("a\r\nb"), 2u);
    EXPECT_EQ(line_count("a\rb\r"), 2u);
    EXPECT_EQ(line_count("\n\n"), 2u);
}

TEST(LineCount, MatchesSplittingOracle) {
    std::mt19937_64 rng(7);
    const char alphabet[] = {'a', ' ', '\n', '\r', 'x'};
    for (int trial = 0; trial < 2000; ++trial) {
        std::string s(rng() % 40, ' ');
        for (auto& c : s) c = alphabet[rng() % 5];
        EXPECT_EQ(line_count(s), oracle::count_lines(s)) << trial;
    }
}

TEST(ParseUrdf, NeverThrowsOnMutatedInput) {
    std::string base = oracle::slurp(fixtures() / "planar_2dof.urdf");
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 3000; ++trial) {
        std::string s = base;
        int edits = 1 + static_cast<int>(rng() % 6);
        for (int e = 0; e < edits && !s.empty(); ++e) {
            std::size_t at = rng() % s.size();
            switch (rng() % 3) {
                case 0: s[at] = static_cast<char>(rng() % 256); break;
                case 1: s.erase(at, 1 + rng() % 8); break;
                default: s.insert(at, std::string(1 + rng() % 3, "<>\"/= 0"[rng() % 7])); break;
            }
        }
        EXPECT_NO_THROW({
            auto r = parse_urdf(s);
            if (r) {
                EXPECT_EQ(r->source_line_count, line_count(s));
            }
        });
    }
}

TEST(ParseUrdf, Deterministic) {
    std::string text = oracle::slurp(fixtures() / "planar_2dof.urdf");
    auto a = parse_urdf(text);
    auto b = parse_urdf(text);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(*a, *b);
}
