#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "penta/cli.hpp"
#include "penta/io.hpp"

using namespace penta;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  int c = cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

fs::path tmp(const std::string& name) {
  auto d = fs::temp_directory_path() / "penta_cli_test";
  fs::create_directories(d);
  return d / name;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

AssociatorPair trivial_pair(int N, int D) {
  AssociatorPair p;
  p.N = N;
  p.D = D;
  p.mu = 0;
  p.g = Series::one(alphabet_f2(), D);
  p.h = Series::one(alphabet_fn1(N), D);
  p.provenance = "imported";
  return p;
}

}  // namespace

TEST_CASE("series documents") {
  Series s(alphabet_fn1(2), 3);
  s.add({0, 1}, Q(1, 24));
  s.add({2}, Q(-3, 7));
  auto p = tmp("series.json");
  io::write_file(p, io::series_to_json(s));
  CHECK(io::roundtrip(p));
  CHECK(io::series_from_json(io::read_file(p)) == s);
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("\"1/24\"") != std::string::npos);

  auto j = io::series_to_json(s);
  j["terms"][0]["word"][1] = "B7";
  try {
    io::series_from_json(j);
    FAIL("unknown letter accepted");
  } catch (const io::ParseError& e) {
    CHECK(e.where == "/terms/0/word/1");
  }
  j = io::series_to_json(s);
  j["terms"][1]["coeff"] = "1/0";
  CHECK_THROWS_AS(io::series_from_json(j), io::ParseError);
  CHECK_THROWS_AS(io::parse_text("{\"a\": "), io::ParseError);
}

TEST_CASE("pair documents keep their metadata") {
  SolverConfig cfg;
  cfg.N = 2;
  cfg.D = 3;
  cfg.mu = Q(1, 2);
  cfg.imposed = {Eq::Pentagon, Eq::Hexagons, Eq::MixedPentagon};
  AssociatorPair a = solve_degreewise(cfg);
  auto p = tmp("pair.json");
  io::write_file(p, io::pair_to_json(a));
  CHECK(io::roundtrip(p));
  AssociatorPair b = io::pair_from_json(io::read_file(p));
  CHECK(b.g == a.g);
  CHECK(b.h == a.h);
  CHECK(b.mu == Q(1, 2));
  CHECK(b.imposed == a.imposed);
  CHECK(b.provenance == "solver");
  CHECK(b.D == 3);
}

TEST_CASE("bar tensor documents") {
  auto j = io::parse_text(
      R"({"space": "M05N-xy", "N": 2, "terms": [{"word": ["dx@1","dy@0"], "coeff": "1"}]})");
  BarTensor b = io::bar_from_json(j);
  CHECK(b == BarTensor::word(Space::M05N_xy, 2, {"dx@1", "dy@0"}));
  auto p = tmp("bar.json");
  io::write_file(p, io::bar_to_json(build_l_twovar(parse_index("1;1@2"), parse_index("2;0@2"))));
  CHECK(io::roundtrip(p));
  j["terms"][0]["word"][0] = "dq";
  CHECK_THROWS_AS(io::bar_from_json(j), io::ParseError);
}

TEST_CASE("mlv verb") {
  auto r = run({"mlv", "--index", "2;0@1", "--digits", "12"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1.644934066848 ± ") != std::string::npos);
  CHECK(run({"mlv", "--index", "1;0@1"}).code == 2);
  CHECK(run({"mlv", "--index", "nonsense"}).code == 2);
}

TEST_CASE("check verb") {
  auto p = tmp("one.json");
  io::write_file(p, io::pair_to_json(trivial_pair(2, 3)));
  CHECK(run({"check", "--eq", "mixed-pentagon", "--input", p.string()}).code == 0);
  CHECK(run({"check", "--eq", "pentagon", "--eq", "distribution", "--input", p.string()}).code == 0);
  // exp(A) fails the pentagon
  AssociatorPair bad = trivial_pair(1, 2);
  bad.g.add({0}, 1);
  io::write_file(p, io::pair_to_json(bad));
  CHECK(run({"check", "--eq", "pentagon", "--input", p.string()}).code == 1);
  write_text(p, "{\"schema\": \"penta/1\"}");
  auto r = run({"check", "--eq", "pentagon", "--input", p.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("/kind") != std::string::npos);
  CHECK(run({"check", "--eq", "pentagon"}).code == 2);
}

TEST_CASE("verify-theorem1 verb") {
  auto r = run({"verify-theorem1", "--N", "1", "--mu", "1", "--D", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS  double_shuffle  residual by weight 1:0 2:0 3:0 4:0 5:0") != std::string::npos);
  CHECK(r.err.find("degree 5") != std::string::npos);
  // deterministic JSON
  auto a = run({"--json", "verify-theorem1", "--N", "2", "--D", "3"});
  auto b = run({"--json", "verify-theorem1", "--N", "2", "--D", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto j = io::parse_text(a.out);
  CHECK(j["schema"] == "penta/1");
  CHECK(j["options"]["D"] == 3);
  CHECK(j["cache"]["keys"].size() == 2);
  CHECK(run({"verify-theorem1", "--eq", "octagon"}).code == 2);
  CHECK(run({"verify-theorem1", "--N", "0"}).code == 2);
  CHECK(run({"verify-theorem1", "--mu", "x"}).code == 2);
}

TEST_CASE("verify-theorem2 verb") {
  auto r = run({"verify-theorem2", "--N", "1", "--D", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1/24") != std::string::npos);
}

TEST_CASE("solve writes a pair") {
  auto p = tmp("solved.json");
  auto r = run({"solve", "--N", "2", "--D", "3", "--eq", "pentagon", "--eq", "hexagons", "--eq",
                "mixed_pentagon", "--output", p.string()});
  CHECK(r.code == 0);
  CHECK(io::roundtrip(p));
  CHECK(run({"check", "--eq", "mixed-pentagon", "--input", p.string()}).code == 0);
  CHECK(run({"lemmas", "--N", "2", "--D", "3", "--which", "4", "--which", "6", "--input", p.string()}).code == 0);
}

TEST_CASE("lemmas, barcheck and phikz verbs") {
  CHECK(run({"lemmas", "--N", "1", "--D", "3", "--count", "2"}).code == 0);
  auto b = run({"barcheck", "--N", "2", "--W", "3"});
  CHECK(b.code == 0);
  CHECK(b.out.find("mixed roots included") != std::string::npos);
  auto k = run({"phikz", "--N", "2", "--weight", "3"});
  CHECK(k.code == 0);
  CHECK(k.out.find("(tol 1.00e-05)") != std::string::npos);
  CHECK(run({"phikz", "--N", "1", "--weight", "3", "--tol", "1e-30"}).code == 1);
  CHECK(run({"nosuchverb"}).code == 2);
}
