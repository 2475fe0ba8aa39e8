// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus_builder.hpp"
#include "oracles.hpp"
#include "test_support.hpp"
#include "urdf_inspect/cli.hpp"
#include "urdf_inspect/urdf_inspect.hpp"

using namespace urdf_inspect;
using testing_support::TempDir;
using testing_support::fixtures;
using testing_support::seconds;
namespace fs = std::filesystem;

namespace tol {
constexpr double planar_exact = 1e-12;
constexpr double fk_oracle = 1e-9;
constexpr double taxonomy_seconds = 1.0;
constexpr double fk_seconds = 5.0;
constexpr double dedup_seconds = 5.0;
constexpr double dataset_seconds = 60.0;
constexpr double dataset_relative = 0.05;
}  // namespace tol

namespace {

enum class Outcome { pass, fail, skip };

struct Check {
    Outcome outcome = Outcome::pass;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && outcome != Outcome::skip) {
            outcome = Outcome::fail;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

int cli(std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "urdf-inspect");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    return code;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// 1 -------------------------------------------------------------------------
Check error_taxonomy() {
    Check c;
    std::map<std::string, int> per_class;
    int tp = 0, fp = 0, fn = 0, clean_errors = 0;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(fixtures() / "taxonomy")) files.push_back(e.path());
    std::sort(files.begin(), files.end());

    double t = seconds([&] {
        for (const auto& f : files) {
            auto stem = f.stem().string();
            bool clean = stem.rfind("clean", 0) == 0;
            std::string seeded = clean ? "" : stem.substr(0, 1);
            ++per_class[clean ? "clean" : seeded];
            auto codes = validate(oracle::slurp(f)).error_codes();
            std::set<std::string> got;
            for (auto code : codes) got.insert(std::string(to_string(code)));
            if (clean) {
                clean_errors += static_cast<int>(got.size());
                fp += static_cast<int>(got.size());
            } else {
                if (got.contains(seeded)) ++tp; else ++fn;
                fp += static_cast<int>(got.size()) - (got.contains(seeded) ? 1 : 0);
            }
        }
    });
    for (auto cls : {"A", "B", "C", "D", "E", "F"}) {
        c.require(per_class[cls] >= 3, std::string("fewer than 3 files of class ") + cls);
    }
    c.require(per_class["clean"] >= 5, "fewer than 5 clean files");
    c.require(fp == 0 && fn == 0, "precision/recall below 100%");
    c.require(t < tol::taxonomy_seconds, "runtime " + fmt("%.3f", t) + " s");

    int exit_mismatch = 0;
    for (const auto& f : files) {
        bool clean = f.stem().string().rfind("clean", 0) == 0;
        if (cli({"validate", f.string()}) != (clean ? kExitOk : kExitValidationErrors)) ++exit_mismatch;
    }
    c.require(exit_mismatch == 0, std::to_string(exit_mismatch) + " exit-code mismatches");
    if (c.outcome == Outcome::pass) {
        c.detail = std::to_string(files.size()) + " files, " + std::to_string(tp) +
                   " true positives, 0 false, clean errors " + std::to_string(clean_errors) +
                   ", " + fmt("%.3f", t) + " s";
    }
    return c;
}

// 2 -------------------------------------------------------------------------
Check planar_2dof() {
    Check c;
    auto m = parse_urdf(oracle::slurp(fixtures() / "planar_2dof.urdf"));
    c.require(m.ok(), "parse failed");
    if (!m) return c;
    c.require(m->name == "2 DOF planar robot", "robot name");
    const Link* base = m->find_link("base link");
    c.require(base && base->visuals.size() == 1, "base link visual");
    if (base && base->visuals.size() == 1) {
        const auto* box = std::get_if<Box>(&base->visuals[0].geometry);
        c.require(box && box->size == Vec3{0.5, 0.5, 0.5}, "box size");
        c.require(base->visuals[0].origin.xyz == Vec3{0, 0, 0.25}, "visual origin");
    }
    const Joint* j = m->find_joint("joint 1");
    c.require(j && j->kind == JointKind::continuous && j->axis == Vec3{0, 1, 0} &&
                  j->origin.xyz == Vec3{0, 0, 0.5} && j->parent == "base link" &&
                  j->child == "link 1",
              "joint 1");
    c.require(validate(oracle::slurp(fixtures() / "planar_2dof.urdf")).diagnostics.empty(),
              "diagnostics not empty");
    auto tree = build_tree(*m);
    c.require(tree.ok(), "tree");
    if (!tree) return c;
    auto frames = forward_kinematics(*tree, *m, zero_config(*tree));
    c.require(frames.ok(), "fk");
    if (!frames) return c;
    const auto& f = frames->at("link 1");
    double dt = (f.translation - Eigen::Vector3d(0, 0, 0.5)).cwiseAbs().maxCoeff();
    double dr = (f.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    c.require(dt <= tol::planar_exact && dr <= tol::planar_exact, "link 1 frame");
    if (c.outcome == Outcome::pass) {
        c.detail = "link 1 at (0,0,0.5), max deviation " + fmt("%.1e", std::max(dt, dr));
    }
    return c;
}

// 3 -------------------------------------------------------------------------
Check fk_oracle() {
    Check c;
    double worst_t = 0.0, worst_r = 0.0;
    int failures = 0;
    double t = seconds([&] {
        std::mt19937_64 rng(20240601);
        for (int trial = 0; trial < 100; ++trial) {
            auto chain = oracle::random_chain(rng, 8);
            auto m = parse_urdf(chain.urdf);
            if (!m) { ++failures; continue; }
            auto tree = build_tree(*m);
            if (!tree) { ++failures; continue; }
            std::uniform_real_distribution<double> qd(-3, 3);
            JointConfig q;
            std::map<std::string, double> qmap;
            for (const auto& name : chain.moving) {
                q.values.push_back(qd(rng));
                qmap[name] = q.values.back();
            }
            auto frames = forward_kinematics(*tree, *m, q);
            if (!frames) { ++failures; continue; }
            for (const auto& [link, want] : oracle::fk("l0", chain.joints, qmap)) {
                const auto& got = frames->at(link);
                oracle::Mat4 g = oracle::identity();
                double dt = 0.0;
                for (int i = 0; i < 3; ++i) {
                    for (int k = 0; k < 3; ++k) g[i][k] = got.rotation(i, k);
                    dt += (got.translation(i) - want[i][3]) * (got.translation(i) - want[i][3]);
                }
                worst_t = std::max(worst_t, std::sqrt(dt));
                worst_r = std::max(worst_r, oracle::rotation_gap(g, want));
            }
        }
    });
    c.require(failures == 0, std::to_string(failures) + " chains failed to load");
    c.require(worst_t <= tol::fk_oracle, "translation " + fmt("%.2e", worst_t));
    c.require(worst_r <= tol::fk_oracle, "rotation " + fmt("%.2e", worst_r));
    c.require(t < tol::fk_seconds, "runtime " + fmt("%.3f", t) + " s");
    if (c.outcome == Outcome::pass) {
        c.detail = "100 chains, worst translation " + fmt("%.1e", worst_t) + " m, rotation " +
                   fmt("%.1e", worst_r) + " rad, " + fmt("%.3f", t) + " s";
    }
    return c;
}

// 4 -------------------------------------------------------------------------
std::vector<fs::path> build_dedup_tree(const TempDir& d) {
    std::mt19937_64 rng(4242);
    std::vector<fs::path> files;
    auto text_body = [&](int i) {
        std::string s;
        int lines = 2 + static_cast<int>(rng() % 6);
        for (int l = 0; l < lines; ++l) {
            s += "<e id=\"" + std::to_string(i) + "\" v=\"" + std::to_string(rng() % 1000) + "\"/>\n";
        }
        return s;
    };
    auto crlf = [](const std::string& s) {
        std::string o;
        for (char ch : s) {
            if (ch == '\n') o += "\r\n"; else o += ch;
        }
        return o;
    };
    auto padded = [](const std::string& s) {
        std::string o;
        for (char ch : s) {
            o += ch;
            if (ch == '"' || ch == '>') o += " \t";
        }
        return "  " + o;
    };
    const std::vector<std::string> text_ext{".urdf", ".dae", ".obj", ".xacro"};
    for (int i = 0; i < 40; ++i) {
        std::string ext = text_ext[i % text_ext.size()];
        std::string body = text_body(i);
        std::string dir = "s" + std::to_string(i % 3) + "/pkg" + std::to_string(i) + "/";
        files.push_back(d.write(dir + "lf" + ext, body));
        files.push_back(d.write(dir + "crlf" + ext, crlf(body)));
        files.push_back(d.write(dir + "pad" + ext, padded(body)));
        std::string off = body;
        off[off.size() / 2] = off[off.size() / 2] == 'x' ? 'y' : 'x';
        files.push_back(d.write(dir + "onebyte" + ext, off));
    }
    for (int i = 0; i < 20; ++i) {
        std::string stl = testing_support::binary_stl(static_cast<unsigned char>(i));
        int copies = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < copies; ++k) {
            files.push_back(d.write("bin/s" + std::to_string(k) + "/m" + std::to_string(i) + ".stl", stl));
        }
        std::string padded_bin = stl + " ";
        files.push_back(d.write("bin/pad/m" + std::to_string(i) + ".stl", padded_bin));
    }
    for (int i = 0; i < 10; ++i) {
        std::string ascii = "solid s" + std::to_string(i) + "\nfacet normal 0 0 1\nendsolid\n";
        files.push_back(d.write("ascii/a/m" + std::to_string(i) + ".stl", ascii));
        files.push_back(d.write("ascii/b/m" + std::to_string(i) + ".stl", crlf(ascii)));
    }
    return files;
}

Check dedup_oracle() {
    Check c;
    TempDir d("accept_dedup");
    auto files = build_dedup_tree(d);
    DedupResult got;
    double t = seconds([&] { got = find_duplicates(files); });
    auto want = oracle::duplicate_groups(files);
    std::set<std::set<fs::path>> have;
    for (const auto& g : got.groups) have.insert({g.members.begin(), g.members.end()});
    c.require(files.size() >= 200, "only " + std::to_string(files.size()) + " files");
    c.require(got.errors.empty(), "read errors");
    c.require(have == want, "groups differ from brute force (" + std::to_string(have.size()) +
                                " vs " + std::to_string(want.size()) + ")");
    c.require(t < tol::dedup_seconds, "runtime " + fmt("%.3f", t) + " s");
    if (c.outcome == Outcome::pass) {
        c.detail = std::to_string(files.size()) + " files, " + std::to_string(have.size()) +
                   " groups identical to brute force, " + fmt("%.3f", t) + " s";
    }
    return c;
}

// 5 -------------------------------------------------------------------------
Check structures() {
    Check c;
    TempDir d("accept_struct");
    auto bundle = [&](const std::string& name, const std::string& folder, bool urdf, bool meshes) {
        d.mkdir(name + "/" + folder);
        if (urdf) d.write(name + "/" + folder + "/robot.urdf", "<robot name=\"r\"/>");
        if (meshes) d.mkdir(name + "/meshes");
    };
    const std::vector<std::pair<std::string, StructureClass>> cases{
        {"abb_irb2400_description", StructureClass::A},
        {"fanuc_m10ia_support", StructureClass::B},
        {"pr2_description", StructureClass::C},
        {"baxter_visualization", StructureClass::D},
        {"ur_description_old", StructureClass::Other},
        {"kuka_support", StructureClass::Other},
        {"nomesh_description", StructureClass::Other},
        {"empty_description", StructureClass::Other},
        {"thing_visualization", StructureClass::Other},
        {"both_description", StructureClass::C},
    };
    bundle("abb_irb2400_description", "urdf", true, true);
    bundle("fanuc_m10ia_support", "urdf", true, true);
    bundle("pr2_description", "robots", true, true);
    bundle("baxter_visualization", "urdf", true, true);
    bundle("ur_description_old", "urdf", true, true);      // suffix not at the end
    bundle("kuka_support", "urdf", true, true);            // one name segment
    bundle("nomesh_description", "urdf", true, false);     // no meshes/
    bundle("empty_description", "urdf", false, true);      // urdf/ without .urdf
    bundle("thing_visualization", "robots", true, true);   // wrong folder for D
    bundle("both_description", "urdf", true, true);
    bundle("both_description", "robots", true, true);      // qualifies for C and A

    for (const auto& [name, want] : cases) {
        auto got = classify_structure(d.path() / name);
        c.require(got == want, name + " -> " + std::string(to_string(got)));
    }
    if (c.outcome == Outcome::pass) {
        c.detail = "A, B, C, D, 5 near misses as Other, C preferred over A";
    }
    return c;
}

// 6 -------------------------------------------------------------------------
GroupMember member(const std::string& source, const std::string& text) {
    BundleRecord r;
    r.source_name = source;
    r.id = "1";
    r.manufacturer = "acme";
    r.robot_name = "arm";
    r.urdf_path = "arm.urdf";
    return {r, validate(text).model, text};
}

Check flag_algebra() {
    Check c;
    std::mt19937_64 rng(606);
    const std::string arm = testing_support::kArmUrdf;
    int reports = 0, violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<GroupMember> members;
        int n = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) {
            std::string s = arm;
            if (rng() % 2) s += std::string(rng() % 3, '\n');
            if (rng() % 4 == 0) s.replace(s.find("base.dae"), 8, "base.obj");
            if (rng() % 4 == 0) s.replace(s.find("0 0 0.3"), 7, "0 0 0.7");
            if (rng() % 5 == 0) s.replace(s.find("<link name=\"world\"/>"), 20, "");
            if (rng() % 5 == 0) {
                s.replace(s.find("<joint name=\"world_joint\""),
                          std::string("<joint name=\"world_joint\" type=\"fixed\"><parent link=\"world\"/>"
                                      "<child link=\"base\"/></joint>").size(),
                          "");
            }
            if (rng() % 8 == 0) s = "<robot name=\"arm\"><link";
            members.push_back(member("s" + std::to_string(i), s));
        }
        FkCompareOptions opts;
        opts.samples = 4;
        auto r = compare_group(members, opts);
        bool fk = r.diff_fk == FkFlag::different;
        bool four = r.diff_joints || r.diff_links || r.diff_cad_types || fk;
        if (r.any_excl_lines != four || r.any != (four || r.diff_lines)) ++violations;
        ++reports;
    }
    c.require(violations == 0, std::to_string(violations) + " reports violate the OR identities");

    auto twin = compare_group({member("a", arm), member("b", arm + "\n\n\n")});
    bool lines_only = twin.diff_lines && !twin.diff_joints && !twin.diff_links &&
                      !twin.diff_cad_types && twin.diff_fk == FkFlag::same && twin.any &&
                      !twin.any_excl_lines;
    c.require(lines_only, "trailing-blank-line twin is not lines-only");
    c.require(oracle::count_lines(arm) != oracle::count_lines(arm + "\n\n\n"), "oracle line counts equal");
    if (c.outcome == Outcome::pass) {
        c.detail = std::to_string(reports) + " random reports consistent; blank-line twin sets lines only";
    }
    return c;
}

// 7 -------------------------------------------------------------------------
bool within(double got, double want) {
    return std::abs(got - want) <= tol::dataset_relative * want;
}

Check full_dataset() {
    Check c;
    const char* root = std::getenv("URDF_DATASET_ROOT");
    if (root == nullptr || !fs::is_directory(root)) {
        c.outcome = Outcome::skip;
        c.detail = "URDF_DATASET_ROOT not set; published dataset not available";
        return c;
    }
    CorpusAnalysis corpus;
    double t = seconds([&] { corpus = analyze_corpus(root); });

    std::map<std::string, std::size_t> per_source;
    std::size_t visual_pairs = 0, collision_pairs = 0, failing = 0, flange = 0;
    std::map<StructureClass, std::size_t> structures;
    for (const auto& b : corpus.bundles) {
        ++per_source[b.record.source_name];
        visual_pairs += b.inventory.visual_types().size();
        collision_pairs += b.inventory.collision_types().size();
        ++structures[b.structure];
        if (b.validation.has_errors() || b.read_error) ++failing;
        if (b.record.source_name == "ros-industrial" && b.name_counts.contains("flange")) {
            flange += b.name_counts.at("flange");
        }
    }
    c.require(corpus.bundles.size() == 322, "bundles " + std::to_string(corpus.bundles.size()));
    const std::map<std::string, std::size_t> want_sources{
        {"ros-industrial", 108}, {"matlab", 52}, {"robotics-toolbox", 44},
        {"drake", 16},           {"oems", 35},   {"random", 67}};
    for (const auto& [s, n] : want_sources) {
        c.require(per_source[s] == n, s + " " + std::to_string(per_source[s]));
    }
    c.require(visual_pairs == 341, "visual " + std::to_string(visual_pairs));
    c.require(collision_pairs == 278, "collision " + std::to_string(collision_pairs));
    const std::vector<std::pair<StructureClass, double>> want_structures{
        {StructureClass::A, 42}, {StructureClass::B, 60}, {StructureClass::C, 6}, {StructureClass::D, 8}};
    for (const auto& [k, n] : want_structures) {
        c.require(within(static_cast<double>(structures[k]), n),
                  "structure " + std::string(to_string(k)) + " " + std::to_string(structures[k]));
    }
    c.require(within(static_cast<double>(flange), 204), "flange " + std::to_string(flange));
    c.require(failing >= 10, "failing files " + std::to_string(failing));
    c.require(t < tol::dataset_seconds, "runtime " + fmt("%.1f", t) + " s");
    if (c.outcome == Outcome::pass) c.detail = "dataset totals reproduced in " + fmt("%.1f", t) + " s";
    return c;
}

// 8 -------------------------------------------------------------------------
Check determinism() {
    Check c;
    TempDir d("accept_det");
    TempDir outputs("accept_det_out");
    testing_support::build_corpus(d);
    auto out1 = outputs.path() / "run1";
    auto out2 = outputs.path() / "run2";
    int differing = 0;
    std::size_t compared = 0;
    for (auto fmt_name : {"csv", "json"}) {
        c.require(cli({"--format", fmt_name, "--out", out1.string(), "scan", d.path().string()}) == 0, "first scan");
        c.require(cli({"--format", fmt_name, "--out", out2.string(), "scan", d.path().string()}) == 0, "second scan");
    }
    for (const auto& e : fs::directory_iterator(out1)) {
        ++compared;
        auto other = out2 / e.path().filename();
        if (!fs::exists(other) || oracle::slurp(e.path()) != oracle::slurp(other)) ++differing;
    }
    c.require(compared >= 38, "only " + std::to_string(compared) + " report files");
    c.require(differing == 0, std::to_string(differing) + " files differ");
    if (c.outcome == Outcome::pass) {
        c.detail = std::to_string(compared) + " report files byte-identical across two scans";
    }
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"1 error taxonomy", error_taxonomy},
        {"2 planar 2-DoF reproduction", planar_2dof},
        {"3 fk oracle equivalence", fk_oracle},
        {"4 dedup oracle equivalence", dedup_oracle},
        {"5 structure classifier totality", structures},
        {"6 discrepancy flag algebra", flag_algebra},
        {"7 full dataset (optional)", full_dataset},
        {"8 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check c;
        try {
            c = run();
        } catch (const std::exception& e) {
            c.outcome = Outcome::fail;
            c.detail = std::string("exception: ") + e.what();
        }
        const char* tag = c.outcome == Outcome::pass ? "PASS" : c.outcome == Outcome::skip ? "SKIP" : "FAIL";
        if (c.outcome == Outcome::fail && name.rfind("7 ", 0) != 0) ++failed;
        std::printf("%s  [%s] %s\n", tag, name.c_str(), c.detail.c_str());
    }
    return failed == 0 ? 0 : 1;
}
