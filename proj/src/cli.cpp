#include "krspec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "krspec/cheeger.hpp"
#include "krspec/significance.hpp"
#include "krspec/spaces.hpp"
#include "krspec/spectrum.hpp"
#include "krspec/symcx.hpp"
#include "krspec/z2algebra.hpp"

namespace krs::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// A failure caused by the command line rather than the input data.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  if (!fs::exists(path)) throw std::runtime_error("file not found: " + path);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

Rational parse_arg(const std::string& flag, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<Rational> parse_list(const std::string& flag, const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_arg(flag, item));
  return out;
}

std::string value_text(const std::optional<Rational>& v) { return v ? to_string(*v) : "inf"; }

Json witness_json(const std::vector<WitnessEdge>& edges) {
  Json arr = Json::array();
  for (const auto& e : edges) arr.push_back(Json{{"a", e.a}, {"b", e.b}, {"w", e.w ? 1 : 0}});
  return arr;
}

void write_witness(std::ostream& out, const std::vector<WitnessEdge>& edges) {
  out << "witness " << edges.size() << "\n";
  for (const auto& e : edges) out << "edge " << e.a << " " << e.b << " " << (e.w ? 1 : 0) << "\n";
}

Json class_json(const SurfaceClass& s) {
  return Json{{"chi", s.euler_characteristic}, {"orientable", s.orientable}, {"genus", s.genus}};
}

std::string pass(bool ok) { return ok ? "pass" : "fail"; }

Json verdict_json(const SurfaceCertificate& cert, const CertificateVerdict& v) {
  Json j;
  j["level"] = to_string(cert.level);
  j["claimed"] = class_json(cert.claimed_class);
  j["contained"] = v.contained;
  j["class_matches"] = v.class_matches;
  j["observed"] = v.observed_class ? class_json(*v.observed_class) : Json(nullptr);
  j["classification_error"] = v.classification_error;
  j["claims_essential"] = cert.claims_essential;
  j["essential"] = v.essential;
  j["essential_matches"] = v.essential_matches;
  j["passed"] = v.passed();
  return j;
}

void write_verdict(std::ostream& out, const std::string& prefix, const SurfaceCertificate& cert,
                   const CertificateVerdict& v) {
  out << prefix << "level " << to_string(cert.level) << "\n";
  out << prefix << "claimed " << describe(cert.claimed_class) << "\n";
  out << prefix << "contained " << pass(v.contained) << "\n";
  out << prefix << "class " << pass(v.class_matches) << " observed "
      << (v.observed_class ? describe(*v.observed_class) : "none: " + v.classification_error) << "\n";
  out << prefix << "essential " << pass(v.essential_matches) << " observed " << (v.essential ? 1 : 0)
      << " claimed " << (cert.claims_essential ? 1 : 0) << "\n";
  out << prefix << "verdict " << pass(v.passed()) << "\n";
}

SurfaceCertificate load_certificate(const std::string& path, const SymmetricComplex& c) {
  auto in = open_input(path);
  return read_certificate(in, c, path);
}

WeightedGraph load_graph(const std::string& path) {
  auto in = open_input(path);
  return read_graph(in, path);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string subset_text(const VertexSet& s) {
  std::string out;
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (s[v]) out += (out.empty() ? "" : " ") + std::to_string(v);
  }
  return out;
}

Json subset_json(const VertexSet& s) {
  Json arr = Json::array();
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (s[v]) arr.push_back(v);
  }
  return arr;
}

// ------------------------------------------------------------ commands

struct Options {
  // shared
  std::string input;
  std::string second;
  bool json = false;
  std::string tol = "0";
  // spectrum
  std::size_t k = 0;
  // significance
  std::string lower;
  std::string upper;
  // cheeger
  bool brute = false;
  std::string bound;
  bool compare = false;
  // gen
  std::string output;
  int n = 2;
  std::string constant;
  std::string values;
  std::string matrix;
  int level = 3;
  std::string r = "1";
  std::string big_r = "4";
  int mesh = kMinDyckMesh;
  std::string mode = "combinatorial";
  int size = 4;
};

std::string cmd_spectrum(const Options& o) {
  SymmetricComplex c = load_scx(o.input);
  Rational tol = parse_arg("--tol", o.tol);
  if (tol < 0) throw UsageError("--tol must be nonnegative");
  const std::size_t limit = static_cast<std::size_t>(c.dimension()) + 1;
  if (o.k > limit) throw UsageError("--k " + std::to_string(o.k) + " exceeds dimension + 1 = " + std::to_string(limit));
  SpectrumReport r = index_spectrum(c, o.k);

  auto close = [&](const std::optional<Rational>& a, const std::optional<Rational>& b) {
    if (!a || !b) return a.has_value() == b.has_value();
    Rational d = *a - *b;
    return (d < 0 ? Rational(-d) : d) <= tol;
  };
  std::optional<Rational> kr2_value;
  if (r.kr2) kr2_value = r.kr2->level;
  bool ok = close(r.index_values.empty() ? std::optional<Rational>() : r.index_values[0], r.kr_min) &&
            (r.index_values.size() < 2 || close(r.index_values[1], kr2_value));

  std::ostringstream out;
  if (o.json) {
    Json j;
    j["command"] = "spectrum";
    j["tol"] = to_string(tol);
    j["kr_min"] = to_string(r.kr_min);
    j["kr_max"] = to_string(r.kr_max);
    j["caveat"] = "index values are upper bounds for kr_k";
    Json values = Json::array();
    for (std::size_t k = 0; k < r.index_values.size(); ++k)
      values.push_back(Json{{"k", k + 1}, {"value", value_text(r.index_values[k])}});
    j["values"] = values;
    j["kr2"] = value_text(kr2_value);
    j["witness"] = witness_json(r.kr2 ? r.kr2->edges : std::vector<WitnessEdge>{});
    j["cross_check"] = ok;
    out << j.dump(2) << "\n";
  } else {
    out << "# spectrum\n";
    out << "# tol " << to_string(tol) << "\n";
    out << "kr_min " << to_string(r.kr_min) << "\n";
    out << "kr_max " << to_string(r.kr_max) << "\n";
    out << "caveat index values are upper bounds for kr_k\n";
    for (std::size_t k = 0; k < r.index_values.size(); ++k) out << k + 1 << " " << value_text(r.index_values[k]) << "\n";
    out << "kr2 " << value_text(kr2_value) << "\n";
    write_witness(out, r.kr2 ? r.kr2->edges : std::vector<WitnessEdge>{});
    out << "cross_check " << pass(ok) << "\n";
  }
  return out.str();
}

std::string cmd_kr2(const Options& o) {
  SymmetricComplex c = load_scx(o.input);
  OddCycle cycle = kr2_sweep(c);
  std::ostringstream out;
  if (o.json) {
    Json j{{"command", "kr2"}, {"kr2", to_string(cycle.level)}, {"witness", witness_json(cycle.edges)}};
    out << j.dump(2) << "\n";
  } else {
    out << "# kr2\n";
    out << "kr2 " << to_string(cycle.level) << "\n";
    write_witness(out, cycle.edges);
  }
  return out.str();
}

std::string cmd_persistence(const Options& o) {
  SymmetricComplex c = load_scx(o.input);
  PersistenceDiagram d = persistence(c);
  std::ostringstream out;
  if (o.json) {
    Json bars = Json::array();
    for (const auto& b : d.bars())
      bars.push_back(Json{{"p", b.dimension}, {"birth", to_string(b.birth)}, {"death", value_text(b.death)}});
    Json j{{"command", "persistence"}, {"betti", d.total_betti()}, {"bars", bars}};
    out << j.dump(2) << "\n";
  } else {
    out << "# persistence\n# betti";
    for (auto b : d.total_betti()) out << " " << b;
    out << "\n";
    write_diagram(out, d);
  }
  return out.str();
}

std::string cmd_significance(const Options& o) {
  if (o.lower.empty() != o.upper.empty()) throw UsageError("--lower and --upper must be given together");
  SymmetricComplex c = load_scx(o.input);
  std::optional<SurfaceCertificate> lower;
  std::optional<SurfaceCertificate> upper;
  if (!o.lower.empty()) {
    lower = load_certificate(o.lower, c);
    upper = load_certificate(o.upper, c);
  }
  SignificanceReport r = significance_report(persistence(c));
  if (lower) r.obstruction = obstruction_between(c, *lower, *upper);

  std::ostringstream out;
  if (o.json) {
    Json j;
    j["command"] = "significance";
    Json cand = Json::array();
    for (const auto& t : r.candidates) cand.push_back(to_string(t));
    j["candidate"] = cand;
    Json cert = Json::array();
    for (const auto& v : r.certified) cert.push_back(Json{{"p", v.dimension}, {"level", to_string(v.level)}});
    j["certified"] = cert;
    if (r.obstruction) {
      const auto& ob = *r.obstruction;
      j["certificate"] = Json{{"lower", verdict_json(*lower, ob.lower)},
                              {"upper", verdict_json(*upper, ob.upper)},
                              {"degree_obstruction", ob.degree_obstruction},
                              {"holds", ob.holds}};
    }
    out << j.dump(2) << "\n";
  } else {
    out << "# significance\n";
    for (const auto& t : r.candidates) out << to_string(Provenance::Candidate) << " " << to_string(t) << "\n";
    for (const auto& v : r.certified)
      out << to_string(Provenance::Certified) << " " << v.dimension << " " << to_string(v.level) << "\n";
    if (r.obstruction) {
      const auto& ob = *r.obstruction;
      const std::string tag = to_string(Provenance::Certificate);
      write_verdict(out, tag + " lower ", *lower, ob.lower);
      write_verdict(out, tag + " upper ", *upper, ob.upper);
      out << tag << " degree_obstruction " << (ob.degree_obstruction ? 1 : 0) << "\n";
      out << tag << " obstruction " << (ob.holds ? "holds" : "fails") << " between " << to_string(ob.lower_level)
          << " " << to_string(ob.upper_level) << "\n";
    }
  }
  return out.str();
}

std::string cmd_verify(const Options& o) {
  SymmetricComplex c = load_scx(o.input);
  SurfaceCertificate cert = load_certificate(o.second, c);
  CertificateVerdict v = verify_surface_certificate(c, cert);
  std::ostringstream out;
  if (o.json) {
    Json j{{"command", "verify"}};
    j.update(verdict_json(cert, v));
    out << j.dump(2) << "\n";
  } else {
    out << "# verify\n";
    write_verdict(out, "", cert, v);
  }
  return out.str();
}

std::string cmd_cheeger(const Options& o) {
  const int modes = (o.brute ? 1 : 0) + (o.bound.empty() ? 0 : 1) + (o.compare ? 1 : 0);
  if (modes != 1) throw UsageError("cheeger needs exactly one of --brute, --bound <fn-file>, --compare");
  WeightedGraph g = load_graph(o.input);
  // Every input is read as an exact rational, so reports carry tolerance 0.
  const std::string tol = "0";
  std::ostringstream out;
  Json j{{"command", "cheeger"}, {"tol", tol}};
  std::ostringstream text;
  if (o.brute) {
    CutResult r = cheeger_brute(g);
    j["mode"] = "brute";
    j["h1"] = to_string(r.value);
    j["subset"] = subset_json(r.subset);
    text << "mode brute\nh1 " << to_string(r.value) << "\nsubset " << subset_text(r.subset) << "\n";
  } else if (o.compare) {
    CutResult brute = cheeger_brute(g);
    CutResult ind = indicator_minimum(g);
    j["mode"] = "compare";
    j["brute"] = to_string(brute.value);
    j["indicator"] = to_string(ind.value);
    j["equal"] = brute.value == ind.value;
    text << "mode compare\nbrute " << to_string(brute.value) << "\nindicator " << to_string(ind.value) << "\nequal "
         << (brute.value == ind.value ? 1 : 0) << "\n";
  } else {
    auto in = open_input(o.bound);
    GraphFunction u = read_function(in, g.vertex_count(), o.bound);
    FunctionBound b = cheeger_function_bound(g, u);
    j["mode"] = "bound";
    j["energy"] = to_string(b.energy);
    j["median_l1"] = to_string(b.median_l1);
    j["rounded"] = to_string(b.rounded.value);
    j["subset"] = subset_json(b.rounded.subset);
    text << "mode bound\nenergy " << to_string(b.energy) << "\nmedian_l1 " << to_string(b.median_l1) << "\nrounded "
         << to_string(b.rounded.value) << "\nsubset " << subset_text(b.rounded.subset) << "\n";
  }
  if (o.json) {
    out << j.dump(2) << "\n";
  } else {
    out << "# cheeger\n# tol " << tol << "\n" << text.str();
  }
  return out.str();
}

VertexFunction vertex_function(const Options& o) {
  if (!o.constant.empty() && !o.values.empty()) throw UsageError("--constant and --values are exclusive");
  if (!o.values.empty()) return VertexFunction::per_vertex(parse_list("--values", o.values));
  return VertexFunction::constant_value(o.constant.empty() ? Rational(0) : parse_arg("--constant", o.constant));
}

std::string scx_text(const SymmetricComplex& c) {
  std::ostringstream s;
  write_scx(s, c);
  return s.str();
}

/// Writes to --output when given, else returns the text for stdout.
std::string emit(const Options& o, const std::string& text) {
  if (o.output.empty()) return text;
  write_file(o.output, text);
  return "wrote " + o.output + "\n";
}

std::string cmd_gen_rp(const Options& o) {
  if (o.n < 1 || o.n > 3) throw UsageError("--n must be 1, 2 or 3");
  VertexFunction f = vertex_function(o);
  return emit(o, scx_text(gen_rp(o.n, f)));
}

std::string cmd_gen_torus(const Options& o) {
  return emit(o, scx_text(gen_torus(o.size, vertex_function(o))));
}

std::string cmd_gen_rayleigh(const Options& o) {
  if (o.level < 0 || o.level > 6) throw UsageError("--level must be in 0..6");
  std::vector<Rational> entries = parse_list("--matrix", o.matrix);
  if (entries.size() != 9) throw UsageError("--matrix needs 9 comma-separated entries (row major)");
  Matrix3 a{};
  for (std::size_t i = 0; i < 9; ++i) a[i / 3][i % 3] = to_double(entries[i]);
  return emit(o, scx_text(gen_rayleigh(a, o.level)));
}

std::string cmd_gen_dyck(const Options& o) {
  DyckParams p;
  p.r = parse_arg("--r", o.r);
  p.R = parse_arg("--R", o.big_r);
  p.mesh = o.mesh;
  if (o.mode == "combinatorial") {
    p.mode = DyckMode::Combinatorial;
  } else if (o.mode == "metric") {
    p.mode = DyckMode::Metric;
  } else {
    throw UsageError("--mode must be combinatorial or metric");
  }
  if (o.output.empty()) throw UsageError("gen dyck needs --output (witness files are written next to it)");
  DyckFixture d = gen_dyck(p);
  fs::path dir = fs::path(o.output).parent_path();
  std::ostringstream dyck_cert;
  write_certificate(dyck_cert, d.dyck_certificate());
  std::ostringstream rp2_cert;
  write_certificate(rp2_cert, d.rp2_certificate());
  write_file(o.output, scx_text(d.complex));
  write_file(dir / "dyck_witness.cert", dyck_cert.str());
  write_file(dir / "rp2_witness.cert", rp2_cert.str());
  std::ostringstream out;
  out << "wrote " << o.output << "\n";
  out << "wrote " << (dir / "dyck_witness.cert").string() << "\n";
  out << "wrote " << (dir / "rp2_witness.cert").string() << "\n";
  out << "r_level " << to_string(d.r_level) << "\nf_max " << to_string(d.f_max) << "\n";
  return out.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Min-max spectra of functions on triangulated projective spaces", "krspec"};
  app.require_subcommand(1);
  Options o;
  std::string (*action)(const Options&) = nullptr;

  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "Machine-readable report"); };

  auto* spectrum = app.add_subcommand("spectrum", "Index spectrum iv_1..iv_k with the kr2 witness");
  spectrum->add_option("input", o.input, "SCX file")->required();
  spectrum->add_option("--k", o.k, "Largest k (default dimension + 1)");
  spectrum->add_option("--tol", o.tol, "Tolerance for the iv_1/kr_min and iv_2/kr2 cross-check")->capture_default_str();
  add_json(spectrum);
  spectrum->callback([&] { action = cmd_spectrum; });

  auto* kr2 = app.add_subcommand("kr2", "Odd-holonomy sweep for the second value");
  kr2->add_option("input", o.input, "SCX file")->required();
  add_json(kr2);
  kr2->callback([&] { action = cmd_kr2; });

  auto* pers = app.add_subcommand("persistence", "GF(2) persistence bars of the lower-star filtration");
  pers->add_option("input", o.input, "SCX file")->required();
  add_json(pers);
  pers->callback([&] { action = cmd_persistence; });

  auto* sig = app.add_subcommand("significance", "Candidate and certified significant values");
  sig->add_option("input", o.input, "SCX file")->required();
  sig->add_option("--lower", o.lower, "Certificate of the surface at the lower level");
  sig->add_option("--upper", o.upper, "Certificate of the surface at the upper level");
  add_json(sig);
  sig->callback([&] { action = cmd_significance; });

  auto* verify = app.add_subcommand("verify", "Check a surface certificate against a complex");
  verify->add_option("input", o.input, "SCX file")->required();
  verify->add_option("certificate", o.second, "Certificate file")->required();
  add_json(verify);
  verify->callback([&] { action = cmd_verify; });

  auto* cheeger = app.add_subcommand("cheeger", "Cheeger constant of a weighted graph");
  cheeger->add_option("input", o.input, "Graph file")->required();
  cheeger->add_flag("--brute", o.brute, "Exact minimum over vertex subsets");
  cheeger->add_option("--bound", o.bound, "Function file: energy bound and co-area rounding");
  cheeger->add_flag("--compare", o.compare, "Compare the subset and indicator-function minima");
  add_json(cheeger);
  cheeger->callback([&] { action = cmd_cheeger; });

  auto* gen = app.add_subcommand("gen", "Generate fixture complexes");
  gen->require_subcommand(1);
  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Output SCX path (default stdout)"); };
  auto add_function = [&](CLI::App* sub) {
    sub->add_option("--constant", o.constant, "Constant vertex value");
    sub->add_option("--values", o.values, "Comma-separated vertex values");
  };

  auto* rp = gen->add_subcommand("rp", "Real projective space RP^n");
  rp->add_option("--n", o.n, "Dimension 1, 2 or 3")->capture_default_str();
  add_function(rp);
  add_output(rp);
  rp->callback([&] { action = cmd_gen_rp; });

  auto* torus = gen->add_subcommand("torus", "Grid torus with a coordinate-circle cover");
  torus->add_option("--size", o.size, "Grid size")->capture_default_str();
  add_function(torus);
  add_output(torus);
  torus->callback([&] { action = cmd_gen_torus; });

  auto* rayleigh = gen->add_subcommand("rayleigh", "Rayleigh quotient of a symmetric 3x3 matrix on RP^2");
  rayleigh->add_option("--matrix", o.matrix, "Nine entries, row major")->required();
  rayleigh->add_option("--level", o.level, "Icosphere subdivision level 0..6")->capture_default_str();
  add_output(rayleigh);
  rayleigh->callback([&] { action = cmd_gen_rayleigh; });

  auto* dyck = gen->add_subcommand("dyck", "RP^3 containing Dyck's surface and an RP^2 at level r");
  dyck->add_option("--r", o.r, "Level of the RP^2 witness")->capture_default_str();
  dyck->add_option("--R", o.big_r, "Top level, must exceed 3r")->capture_default_str();
  dyck->add_option("--mesh", o.mesh, "Cube half-width of the cover")->capture_default_str();
  dyck->add_option("--mode", o.mode, "combinatorial or metric")->capture_default_str();
  add_output(dyck);
  dyck->callback([&] { action = cmd_gen_dyck; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests arrive here as CallForHelp from the sub-app.
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::string report = action(o);
    out << report << std::flush;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace krs::cli
