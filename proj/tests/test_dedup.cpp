#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "test_support.hpp"
#include "urdf_inspect/dedup.hpp"

using namespace urdf_inspect;
using testing_support::TempDir;
namespace fs = std::filesystem;

namespace {

std::set<std::set<fs::path>> as_sets(const DedupResult& r) {
    std::set<std::set<fs::path>> out;
    for (const auto& g : r.groups) out.insert({g.members.begin(), g.members.end()});
    return out;
}

}  // namespace

TEST(Normalize, StripsBlanksAndUnifiesLineEnds) {
    EXPECT_EQ(normalize("a b\tc\n", true), "abc\r\n");
    EXPECT_EQ(normalize("x\r\ny\rz\n", true), "x\r\ny\r\nz\r\n");
    EXPECT_EQ(normalize("a b\n", false), "a b\n");
    EXPECT_EQ(normalize("", true), "");
}

TEST(Normalize, Idempotent) {
    std::mt19937_64 rng(9);
    const char alphabet[] = {'a', ' ', '\t', '\n', '\r'};
    for (int t = 0; t < 500; ++t) {
        std::string s(rng() % 30, 'a');
        for (auto& c : s) c = alphabet[rng() % 5];
        auto once = normalize(s, true);
        EXPECT_EQ(normalize(once, true), once);
    }
}

TEST(TextDetection, ExtensionsAndAsciiStl) {
    EXPECT_TRUE(is_text_file("a/b.URDF", ""));
    EXPECT_TRUE(is_text_file("a/b.dae", ""));
    EXPECT_FALSE(is_text_file("a/b.png", "solid"));
    EXPECT_TRUE(is_text_file("m.stl", "solid cube\nfacet"));
    EXPECT_FALSE(is_text_file("m.stl", std::string("solid\0cube", 10)));
    EXPECT_FALSE(is_text_file("m.stl", "binary header"));
}

TEST(Md5, StandardVectors) {
    EXPECT_EQ(md5_hex(""), "d41d8cd98f00b204e9800998ecf8427e");
    EXPECT_EQ(md5_hex("abc"), "900150983cd24fb0d6963f7d28e17f72");
}

TEST(FindDuplicates, TwinsAndNearMisses) {
    TempDir d("dedup");
    auto lf = d.write("a/x.urdf", "<robot name=\"r\">\n  <link name=\"a\"/>\n</robot>\n");
    auto crlf = d.write("b/x.urdf", "<robot name=\"r\">\r\n<link name=\"a\"/>\r\n</robot>\r\n");
    auto padded = d.write("c/x.urdf", "<robot  name=\"r\">\n\t<link name=\"a\"/>  \n</robot>\n");
    auto onebyte = d.write("d/x.urdf", "<robot name=\"q\">\n  <link name=\"a\"/>\n</robot>\n");
    auto bin1 = d.write("a/m.stl", std::string("\0\1\2 \3", 5));
    auto bin2 = d.write("b/m.stl", std::string("\0\1\2 \3", 5));
    auto bin3 = d.write("c/m.stl", std::string("\0\1\2\3", 4));
    auto r = find_duplicates({onebyte, padded, crlf, lf, bin1, bin2, bin3});
    EXPECT_TRUE(r.errors.empty());
    std::set<std::set<fs::path>> want{{lf, crlf, padded}, {bin1, bin2}};
    EXPECT_EQ(as_sets(r), want);
    ASSERT_EQ(r.groups.size(), 2u);
    EXPECT_GE(r.groups[0].size, r.groups[1].size);
    EXPECT_EQ(r.groups[0].digest, md5_hex(normalized_content(lf)));
}

TEST(FindDuplicates, MissingFileIsReportedNotFatal) {
    TempDir d("missing");
    auto a = d.write("a.txt", "same");
    auto b = d.write("b.txt", "same");
    auto r = find_duplicates({a, b, d.path() / "ghost.txt"});
    EXPECT_EQ(r.groups.size(), 1u);
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].path, d.path() / "ghost.txt");
}

TEST(FindDuplicates, MatchesBruteForceAndIgnoresOrderAndJobs) {
    TempDir d("oracle");
    std::mt19937_64 rng(17);
    std::vector<fs::path> files;
    const std::vector<std::string> exts{".urdf", ".stl", ".dae", ".bin"};
    for (int i = 0; i < 120; ++i) {
        std::string body;
        int variant = static_cast<int>(rng() % 12);
        for (int k = 0; k < 3; ++k) body += "line " + std::to_string(variant + k) + (rng() % 2 ? "\r\n" : "\n");
        if (rng() % 3 == 0) body = "  " + body;
        files.push_back(d.write("f" + std::to_string(i) + exts[rng() % exts.size()], body));
    }
    auto want = oracle::duplicate_groups(files);
    auto got = find_duplicates(files, 4);
    EXPECT_EQ(as_sets(got), want);

    auto shuffled = files;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto again = find_duplicates(shuffled, 1);
    ASSERT_EQ(again.groups.size(), got.groups.size());
    for (std::size_t i = 0; i < got.groups.size(); ++i) {
        EXPECT_EQ(again.groups[i].members, got.groups[i].members);
        EXPECT_EQ(again.groups[i].digest, got.groups[i].digest);
    }
}

TEST(FindDuplicates, DuplicateInputPathsCollapse) {
    TempDir d("same");
    auto a = d.write("a.txt", "x");
    EXPECT_TRUE(find_duplicates({a, a}).groups.empty());
}
