#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "gerbelab/cli/commands.hpp"
#include "gerbelab/cli/io.hpp"
#include "gerbelab/cli/report.hpp"
#include "gerbelab/error.hpp"

using namespace gerbelab;
using namespace gerbelab::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kData = GERBELAB_DATA_DIR;

std::string data(const char* name) { return (kData / name).string(); }

std::optional<Errc> code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

/// Parses `text` as a file of the given kind and runs its reader.
void read_any(const std::string& text, const fs::path& origin) {
  io::Document doc = io::parse(text, origin);
  io::Inputs inputs;
  if (doc.kind == "nerve") {
    io::read_nerve(doc.body, origin.parent_path(), inputs);
  } else if (doc.kind == "system") {
    io::read_system(doc, inputs);
  } else if (doc.kind == "transition") {
    io::read_transition(doc, inputs);
  } else if (doc.kind == "extension") {
    io::read_extension(doc);
  } else if (doc.kind == "loop") {
    io::read_loop(doc);
  } else if (doc.kind == "bundle") {
    io::read_bundle(doc);
  }
}

}  // namespace

TEST_CASE("fnv1a digests") {
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::hex_digest(io::fnv1a("foobar")) == "85944171f73967e8");
}

TEST_CASE("report rendering") {
  Report r("gerbelab test");
  r.put("count", 3);
  r.put("value", -0.0);
  r.begin("group");
  r.put("name", "x");
  r.table("rows", {"K", "v"}, {{1, 0.5}, {10, "n/a"}});
  r.end();
  r.verdict("check", true);
  const std::string text = r.text();
  CHECK(contains(text, "value: 0.000000e+00\n"));
  CHECK(contains(text, "  name: x\n"));
  CHECK(contains(text, "     K             v\n"));
  CHECK(contains(text, "    10           n/a\n"));
  CHECK(contains(text, "status: PASS\n"));
  const auto json = nlohmann::json::parse(r.json());
  CHECK(json["group"]["rows"][0]["v"] == 0.5);
  CHECK(json["check"]["result"] == "PASS");
  r.verdict("other", false, "why");
  CHECK_FALSE(r.passed());
  CHECK(contains(r.text(), "other: FAIL (why)"));
}

TEST_CASE("cohomology command") {
  Options opt;
  Report rp2 = cmd_cohomology("c", opt, data("rp2_mod2.system.json"), std::nullopt);
  const std::string t = rp2.text();
  CHECK(contains(t, "H^0:\n    group: dim 1"));
  CHECK(contains(t, "H^1:\n    group: dim 1"));
  CHECK(contains(t, "H^2:\n    group: dim 1"));
  CHECK(rp2.passed());

  Report mob = cmd_cohomology("c", opt, data("mobius_circle.system.json"), 1);
  CHECK(contains(mob.text(), "group: free 0, torsion [2]"));
  Report m0 = cmd_cohomology("c", opt, data("mobius_circle.system.json"), 0);
  CHECK(contains(m0.text(), "group: 0\n"));

  Report empty = cmd_cohomology("c", opt, data("empty.system.json"), 3);
  CHECK(contains(empty.text(), "H^3:\n    group: 0\n"));

  CHECK(code_of([&] { cmd_cohomology("c", opt, data("rp2_mod2.system.json"), 7); }) == Errc::DegreeOverflow);
}

TEST_CASE("obstruction command") {
  Options opt;
  Report rp2 = cmd_obstruction("o", opt, data("rp2_z2.transition.json"), data("z2_z4_z2.extension.json"), std::nullopt);
  CHECK(contains(rp2.text(), "class: NONTRIVIAL (order 2)"));
  CHECK(contains(rp2.text(), "certificate: PASS"));
  CHECK(rp2.passed());

  Report sphere =
      cmd_obstruction("o", opt, data("sphere_z2.transition.json"), data("z2_z4_z2.extension.json"), std::nullopt);
  CHECK(contains(sphere.text(), "class: TRIVIAL"));
  CHECK(contains(sphere.text(), "strict lift: PASS"));

  Report split = cmd_obstruction("o", opt, data("rp2_z2.transition.json"), data("split_z2.extension.json"), std::nullopt);
  CHECK(contains(split.text(), "cocycle: [0, 0, 0, 0, 0, 0, 0, 0, 0, 0]"));
  CHECK(contains(split.text(), "nonzero entries: 0"));

  // other lifts change the cocycle but not the class
  Report lifted = cmd_obstruction("o", opt, data("rp2_z2.transition.json"), data("z2_z4_z2.extension.json"),
                                  data("rp2_z2.lifts.json"));
  CHECK(contains(lifted.text(), "class: NONTRIVIAL (order 2)"));
  CHECK(lifted.text() != rp2.text());

  Report broken =
      cmd_obstruction("o", opt, data("rp2_broken.transition.json"), data("z2_z4_z2.extension.json"), std::nullopt);
  CHECK_FALSE(broken.passed());
  CHECK(contains(broken.text(), "transition cocycle: FAIL (triangle [1, 3, 5]"));

  CHECK(code_of([&] {
          cmd_obstruction("o", opt, data("sphere_z2.transition.json"), data("z2_z4_z2.extension.json"),
                          data("rp2_z2.lifts.json"));
        }) == Errc::LiftMismatch);
}

TEST_CASE("schwinger command") {
  Options opt;
  SchwingerArgs args;
  args.loop_paths = {data("z_e.loop.json"), data("zinv_f.loop.json")};
  Report tr = cmd_schwinger("s", opt, args);
  // -tr(EF) with E = [[1, 2], [0, i]], F = [[1/2, 0], [3, -1]]
  CHECK(contains(tr.text(), "trace re: -6.500000e+00\ntrace im: 1.000000e+00"));
  CHECK(tr.passed());

  args.loop_paths = {data("constant.loop.json"), data("constant.loop.json")};
  CHECK(contains(cmd_schwinger("s", opt, args).text(), "residue re: 0.000000e+00\nresidue im: 0.000000e+00"));

  for (auto mode : {SchwingerMode::Identity, SchwingerMode::Jacobi, SchwingerMode::Defect, SchwingerMode::Curvature}) {
    SchwingerArgs a;
    a.mode = mode;
    Report r = cmd_schwinger("s", opt, a);
    CHECK(r.passed());
  }

  SchwingerArgs small;
  small.band = 4;
  Options k2;
  k2.truncation = 2;
  CHECK(code_of([&] { cmd_schwinger("s", k2, small); }) == Errc::TruncationTooSmall);
  CHECK(exit_code(Errc::TruncationTooSmall) == kExitViolation);
  small.allow_small = true;
  CHECK(cmd_schwinger("s", k2, small).passed());

  SchwingerArgs too_many;
  too_many.mode = SchwingerMode::Defect;
  too_many.loop_paths = {data("z_e.loop.json"), data("z_e.loop.json")};
  CHECK(code_of([&] { cmd_schwinger("s", opt, too_many); }) == Errc::Parse);
}

TEST_CASE("chern command") {
  Options opt;
  opt.grid = 101;
  Report trivial = cmd_chern("c", opt, data("sphere_trivial.bundle.json"));
  CHECK(contains(trivial.text(), "chern: 0.000\nnearest: 0"));
  CHECK(trivial.passed());

  opt.grid.reset();
  Report one = cmd_chern("c", opt, data("sphere_degree1.bundle.json"));
  CHECK(contains(one.text(), "chern: 1.000\nnearest: 1"));
  CHECK(one.passed());

  Report bad = cmd_chern("c", opt, data("sphere_corrupted.bundle.json"));
  CHECK_FALSE(bad.passed());
  CHECK(contains(bad.text(), "gauge law: FAIL (factor"));
  CHECK(contains(bad.text(), "at chart"));
}

TEST_CASE("exit code mapping") {
  for (Errc c : {Errc::Parse, Errc::ShapeMismatch, Errc::InvalidGroup, Errc::InvalidTwist, Errc::DegenerateSimplex,
                 Errc::VertexOutOfRange, Errc::DimensionTooLarge, Errc::DegreeOverflow, Errc::UnsupportedCoefficient,
                 Errc::GridTooCoarse, Errc::NotClosedSurface, Errc::PointOutsideCharts, Errc::LiftMismatch})
    CHECK(exit_code(c) == kExitInvalidInput);
  for (Errc c : {Errc::NotACocycle, Errc::NotU1Cocycle, Errc::LiftNotIntegral, Errc::ValueNotInKernel,
                 Errc::CocycleIdentityViolated, Errc::TruncationTooSmall})
    CHECK(exit_code(c) == kExitViolation);
}

TEST_CASE("validation errors in problem files") {
  const fs::path here = kData / "inline.json";
  auto code = [&](const std::string& text) { return code_of([&] { read_any(text, here); }); };
  CHECK(code(R"({"kind": "nerve"})") == Errc::Parse);
  CHECK(code(R"({"kind": "nerve", "version": "2", "vertices": 1, "maximal": []})") == Errc::Parse);
  CHECK(code(R"({"kind": "nerve", "version": "1", "vertices": 3, "maximal": [[0, 0]]})") == Errc::DegenerateSimplex);
  CHECK(code(R"({"kind": "nerve", "version": "1", "vertices": 2, "maximal": [[0, 5]]})") == Errc::VertexOutOfRange);
  CHECK(code(R"({"kind": "nerve", "version": "1", "vertices": 6, "maximal": [[0, 1, 2, 3, 4, 5]]})") ==
        Errc::DimensionTooLarge);
  CHECK(code(R"({"kind": "system", "version": "1", "nerve": {"named": "circle"},
                 "coefficients": {"ring": "Z/n", "modulus": 1}})") == Errc::InvalidGroup);
  CHECK(code(R"({"kind": "system", "version": "1", "nerve": {"named": "circle"},
                 "coefficients": {"ring": "Q"}})") == Errc::Parse);
  CHECK(code(R"({"kind": "system", "version": "1", "nerve": {"named": "sphere2"}, "coefficients": {"ring": "Z"},
                 "negative_edges": [[0, 1]]})") == Errc::InvalidTwist);
  CHECK(code(R"({"kind": "transition", "version": "1", "nerve": {"named": "circle"}, "group": {"cyclic": 2},
                 "edges": [{"edge": [0, 1], "g": 5}]})") == Errc::InvalidGroup);
  CHECK(code(R"({"kind": "transition", "version": "1", "nerve": {"named": "circle"}, "group": {"cyclic": 2},
                 "edges": [{"edge": [0, 1], "g": 1, "eps": 0}]})") == Errc::InvalidTwist);
  CHECK(code(R"({"kind": "transition", "version": "1", "nerve": {"named": "circle"},
                 "group": {"table": [[0, 1], [0, 1]]}, "edges": []})") == Errc::InvalidGroup);
  CHECK(code(R"({"kind": "extension", "version": "1", "hat": {"cyclic": 4}, "base": {"cyclic": 2},
                 "projection": [0, 1, 0], "kernel": [0, 2], "section": [0, 1]})") == Errc::ShapeMismatch);
  CHECK(code(R"({"kind": "loop", "version": "1", "size": 2,
                 "coefficients": [{"mode": 0, "entries": [1, 2, 3]}]})") == Errc::ShapeMismatch);
  CHECK(code(R"({"kind": "loop", "version": "1", "size": 1, "skew_hermitian": true,
                 "coefficients": [{"mode": 0, "entries": [1]}]})") == Errc::ShapeMismatch);
  CHECK(code(R"({"kind": "bundle", "version": "1", "base": "torus"})") == Errc::Parse);
  CHECK(code(R"({"kind": "bundle", "version": "1", "base": "sphere", "grid": 2})") == Errc::GridTooCoarse);
  CHECK(code(R"({"kind": "bundle", "version": "1", "base": "sphere", "clutching": {"degree": 1000}})") ==
        Errc::DegreeOverflow);
  CHECK(code(R"({"kind": "bundle", "version": "1", "base": "sphere",
                 "perturbations": [{"chart": 1, "point": [0.1, 0.0], "phase": 1}]})") == Errc::PointOutsideCharts);
  CHECK_FALSE(code(R"({"kind": "transition", "version": "1", "nerve": {"named": "circle"}, "group": {"cyclic": 3},
                       "edges": [{"edge": [1, 0], "g": 1}]})"));
}

TEST_CASE("descending edges store the inverse") {
  const std::string text = R"({"kind": "transition", "version": "1", "nerve": {"named": "circle"},
                               "group": {"cyclic": 3}, "edges": [{"edge": [1, 0], "g": 1}]})";
  io::Document doc = io::parse(text, kData / "inline.json");
  io::Inputs inputs;
  TransitionData td = io::read_transition(doc, inputs);
  CHECK(td.g[0] == 2);
}

TEST_CASE("malformed input never escapes as anything but a library error") {
  std::mt19937_64 rng(2024);
  int files = 0, mutations = 0;
  for (const auto& entry : fs::directory_iterator(kData)) {
    if (entry.path().extension() != ".json") continue;
    const std::string original = slurp(entry.path());
    ++files;
    for (int t = 0; t < 150; ++t) {
      std::string text = original;
      std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
      const int kind = static_cast<int>(rng() % 4);
      if (kind == 0) {
        text.resize(pos(rng));
      } else if (kind == 1) {
        text[pos(rng)] = "{}[]:,\"0-9ae. "[rng() % 14];
      } else if (kind == 2) {
        text.erase(pos(rng), 1 + rng() % 8);
      } else {
        // swap a number for an extreme or wrongly typed value
        const std::size_t p = text.find_first_of("0123456789", pos(rng));
        if (p == std::string::npos) continue;
        static const char* repl[] = {"-1", "1e308", "99999999999", "\"x\"", "null", "[]", "2.5", "true"};
        text.replace(p, 1, repl[rng() % 8]);
      }
      ++mutations;
      try {
        read_any(text, entry.path());
      } catch (const Error&) {
      }
    }
  }
  CHECK(files >= 15);
  CHECK(mutations > 1000);
}
