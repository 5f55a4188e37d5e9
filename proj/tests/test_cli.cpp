#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "krspec/cli.hpp"
#include "support.hpp"

using testsupport::fixture;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = krs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

bool has_line(const std::string& text, const std::string& line) {
  auto ls = lines_of(text);
  return std::find(ls.begin(), ls.end(), line) != ls.end();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("spectrum on the Rayleigh fixture") {
  Result r = run({"spectrum", fixture("rayleigh_d123.scx"), "--k", "3"});
  REQUIRE(r.code == 0);
  CHECK(has_line(r.out, "# tol 0"));
  CHECK(has_line(r.out, "1 1"));
  CHECK(has_line(r.out, "2 2"));
  CHECK(has_line(r.out, "3 3"));
  CHECK(has_line(r.out, "cross_check pass"));
  CHECK(r.out.find("\nwitness ") != std::string::npos);
}

TEST_CASE("spectrum reports inf for unreached k") {
  Result r = run({"spectrum", fixture("torus.scx")});
  REQUIRE(r.code == 0);
  CHECK(has_line(r.out, "3 inf"));
}

TEST_CASE("verify the RP2 witness on the Dyck fixture") {
  Result r = run({"verify", fixture("dyck.scx"), fixture("rp2_witness.cert")});
  REQUIRE(r.code == 0);
  CHECK(has_line(r.out, "contained pass"));
  CHECK(has_line(r.out, "verdict pass"));
}

TEST_CASE("significance with bracketing certificates") {
  Result r = run({"significance", fixture("dyck.scx"), "--lower", fixture("dyck_witness.cert"), "--upper",
                  fixture("rp2_witness.cert")});
  REQUIRE(r.code == 0);
  CHECK(has_line(r.out, "certified 2 0"));
  CHECK(has_line(r.out, "certificate degree_obstruction 1"));
  CHECK(has_line(r.out, "certificate obstruction holds between 0 1"));
  Result half = run({"significance", fixture("dyck.scx"), "--lower", fixture("dyck_witness.cert")});
  CHECK(half.code == 2);
}

TEST_CASE("persistence and kr2 reports") {
  Result p = run({"persistence", fixture("rp2.scx")});
  REQUIRE(p.code == 0);
  CHECK(has_line(p.out, "# betti 1 1 1 0"));
  CHECK(has_line(p.out, "2 0 inf"));
  Result k = run({"kr2", fixture("rp1.scx")});
  REQUIRE(k.code == 0);
  CHECK(has_line(k.out, "kr2 0.9"));
  CHECK(has_line(k.out, "witness 4"));
}

TEST_CASE("cheeger modes") {
  Result b = run({"cheeger", fixture("c4.graph"), "--brute"});
  REQUIRE(b.code == 0);
  CHECK(has_line(b.out, "h1 4"));
  Result c = run({"cheeger", fixture("bridged.graph"), "--compare"});
  CHECK(has_line(c.out, "equal 1"));
  Result f = run({"cheeger", fixture("c4.graph"), "--bound", fixture("c4_u.fn")});
  CHECK(has_line(f.out, "energy 8"));
  CHECK(run({"cheeger", fixture("c4.graph")}).code == 2);
  CHECK(run({"cheeger", fixture("c4.graph"), "--brute", "--compare"}).code == 2);
}

TEST_CASE("exit statuses") {
  Result missing = run({"spectrum", "missing.scx"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("file not found") != std::string::npos);
  CHECK(missing.out.empty());
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"spectrum", fixture("rp2.scx"), "--k", "9"}).code == 2);
  CHECK(run({"spectrum", fixture("rp2.scx"), "--tol", "abc"}).code == 2);
  CHECK(run({"kr2", fixture("torus.scx")}).code == 0);
  CHECK(run({"gen", "dyck", "--R", "2", "-o", "unused.scx"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("reports are deterministic and inputs untouched") {
  const std::string input = fixture("dyck.scx");
  const std::string before = slurp(input);
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"spectrum", input}, {"persistence", input}, {"significance", input}, {"kr2", input}}) {
    Result a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  CHECK(slurp(input) == before);
}

TEST_CASE("json renders the same data as text") {
  Result text = run({"spectrum", fixture("rp1.scx")});
  Result json = run({"spectrum", fixture("rp1.scx"), "--json"});
  REQUIRE(json.code == 0);
  auto j = nlohmann::json::parse(json.out);
  CHECK(has_line(text.out, "# tol " + j["tol"].get<std::string>()));
  CHECK(has_line(text.out, "kr_min " + j["kr_min"].get<std::string>()));
  CHECK(has_line(text.out, "kr_max " + j["kr_max"].get<std::string>()));
  for (const auto& v : j["values"]) CHECK(has_line(text.out, std::to_string(v["k"].get<int>()) + " " + v["value"].get<std::string>()));
  CHECK(has_line(text.out, "kr2 " + j["kr2"].get<std::string>()));
  CHECK(has_line(text.out, "witness " + std::to_string(j["witness"].size())));
  for (const auto& e : j["witness"])
    CHECK(has_line(text.out, "edge " + std::to_string(e["a"].get<int>()) + " " + std::to_string(e["b"].get<int>()) + " " +
                                 std::to_string(e["w"].get<int>())));

  Result pt = run({"persistence", fixture("rp1.scx")});
  auto pj = nlohmann::json::parse(run({"persistence", fixture("rp1.scx"), "--json"}).out);
  std::size_t bar_lines = 0;
  for (const auto& line : lines_of(pt.out)) bar_lines += line.rfind("#", 0) == 0 ? 0 : 1;
  CHECK(bar_lines == pj["bars"].size());
  for (const auto& b : pj["bars"])
    CHECK(has_line(pt.out, std::to_string(b["p"].get<int>()) + " " + b["birth"].get<std::string>() + " " +
                               b["death"].get<std::string>()));

  auto cj = nlohmann::json::parse(run({"cheeger", fixture("k3.graph"), "--brute", "--json"}).out);
  Result ct = run({"cheeger", fixture("k3.graph"), "--brute"});
  CHECK(has_line(ct.out, "h1 " + cj["h1"].get<std::string>()));

  auto vj = nlohmann::json::parse(run({"verify", fixture("dyck.scx"), fixture("rp2_witness.cert"), "--json"}).out);
  CHECK(vj["passed"].get<bool>());
  CHECK(vj["contained"].get<bool>());
}

TEST_CASE("gen writes the same bytes as the corpus") {
  auto dir = std::filesystem::temp_directory_path() / "krspec_cli_gen";
  std::filesystem::remove_all(dir);
  Result r = run({"gen", "rp", "--n", "1", "--values", "0.2,0.4,0.5,0.9", "-o", (dir / "rp1.scx").string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "rp1.scx") == slurp(fixture("rp1.scx")));
  Result d = run({"gen", "dyck", "-o", (dir / "dyck.scx").string()});
  REQUIRE(d.code == 0);
  CHECK(slurp(dir / "rp2_witness.cert") == slurp(fixture("rp2_witness.cert")));
  CHECK(has_line(d.out, "r_level 1"));
  std::filesystem::remove_all(dir);
  Result s = run({"gen", "rp", "--n", "2"});
  CHECK(s.out == slurp(fixture("rp2.scx")));
}
