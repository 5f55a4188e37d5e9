#include "krspec/significance.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace krs {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Candidate: return "candidate";
    case Provenance::Certified: return "certified";
    case Provenance::Certificate: return "certificate";
  }
  return "?";
}

SurfaceClass SurfaceClass::from(int euler_characteristic, bool orientable) {
  if (euler_characteristic > 2 || (orientable && euler_characteristic % 2 != 0) ||
      (!orientable && euler_characteristic > 1)) {
    throw std::invalid_argument("no closed surface has chi=" + std::to_string(euler_characteristic) +
                                (orientable ? " and is orientable" : " and is non-orientable"));
  }
  SurfaceClass s;
  s.euler_characteristic = euler_characteristic;
  s.orientable = orientable;
  s.genus = orientable ? (2 - euler_characteristic) / 2 : 2 - euler_characteristic;
  return s;
}

std::string describe(const SurfaceClass& s) {
  return "chi=" + std::to_string(s.euler_characteristic) + (s.orientable ? " orientable" : " non-orientable") +
         " genus=" + std::to_string(s.genus);
}

std::vector<Rational> homology_critical_values(const PersistenceDiagram& d) {
  std::vector<Rational> out;
  for (const Bar& bar : d.bars()) {
    out.push_back(bar.birth);
    if (bar.death) out.push_back(*bar.death);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<CertifiedValue> certified_weak_significant(const PersistenceDiagram& d) {
  std::vector<CertifiedValue> out;
  for (const Bar& bar : d.bars()) {
    if (!bar.essential()) continue;
    CertifiedValue v{bar.dimension, bar.birth};
    if (out.empty() || !(out.back() == v)) out.push_back(std::move(v));
  }
  return out;
}

SurfaceClass classify_surface(const SubcomplexRef& sub) {
  const SymmetricComplex& c = sub.parent();
  if (sub.is_empty()) throw SurfaceError("not a surface: empty witness");
  if (sub.dimension() != 2) throw SurfaceError("not pure 2-dimensional: witness has dimension " +
                                               std::to_string(sub.dimension()));

  auto in_sub_cofaces = [&](SimplexIndex s) {
    std::vector<SimplexIndex> out;
    for (SimplexIndex t : c.cofaces(s)) {
      if (sub.contains(t)) out.push_back(t);
    }
    return out;
  };

  const auto vertices = sub.of_dimension(0);
  const auto edges = sub.of_dimension(1);
  const auto triangles = sub.of_dimension(2);

  for (SimplexIndex e : edges) {
    std::size_t n = in_sub_cofaces(e).size();
    if (n == 0) throw SurfaceError("not pure 2-dimensional: edge " + c.describe(e) + " lies in no triangle");
    if (n != 2)
      throw SurfaceError("not closed: edge " + c.describe(e) + " lies in " + std::to_string(n) + " triangles");
  }

  // Vertex links: the edges opposite v in its triangles must form one cycle.
  for (SimplexIndex vs : vertices) {
    VertexIndex v = c.simplex(vs)[0];
    std::map<VertexIndex, std::vector<VertexIndex>> link;
    for (SimplexIndex e : in_sub_cofaces(vs)) {
      for (SimplexIndex t : in_sub_cofaces(e)) {
        const Simplex& tri = c.simplex(t);
        std::vector<VertexIndex> opposite;
        for (VertexIndex u : tri.vertices()) {
          if (u != v) opposite.push_back(u);
        }
        link[opposite[0]].push_back(opposite[1]);
        link[opposite[1]].push_back(opposite[0]);
      }
    }
    if (link.empty()) throw SurfaceError("not pure 2-dimensional: vertex " + c.describe(vs) + " lies in no triangle");
    // Each link edge was seen twice (once from each of its two endpoints' edges).
    for (auto& [u, nbrs] : link) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      if (nbrs.size() != 2)
        throw SurfaceError("not a manifold: link of vertex " + c.describe(vs) + " is not a single cycle");
    }
    std::set<VertexIndex> reached{link.begin()->first};
    std::deque<VertexIndex> queue{link.begin()->first};
    while (!queue.empty()) {
      VertexIndex u = queue.front();
      queue.pop_front();
      for (VertexIndex x : link[u]) {
        if (reached.insert(x).second) queue.push_back(x);
      }
    }
    if (reached.size() != link.size())
      throw SurfaceError("not a manifold: link of vertex " + c.describe(vs) + " is not a single cycle");
  }

  // Coherent orientation by propagation across shared edges. Triangle t with
  // orientation o induces sign o * (-1)^i on the facet dropping vertex i.
  std::map<SimplexIndex, int> orientation;
  auto facet_sign = [&](SimplexIndex t, SimplexIndex e) {
    auto faces = c.boundary(t);
    for (std::size_t i = 0; i < faces.size(); ++i) {
      if (faces[i] == e) return i % 2 == 0 ? 1 : -1;
    }
    return 0;
  };
  bool orientable = true;
  std::deque<SimplexIndex> queue{triangles.front()};
  orientation[triangles.front()] = 1;
  while (!queue.empty()) {
    SimplexIndex t = queue.front();
    queue.pop_front();
    for (SimplexIndex e : c.boundary(t)) {
      for (SimplexIndex u : in_sub_cofaces(e)) {
        if (u == t) continue;
        int required = -orientation[t] * facet_sign(t, e) * facet_sign(u, e);
        auto [it, fresh] = orientation.emplace(u, required);
        if (fresh) {
          queue.push_back(u);
        } else if (it->second != required) {
          orientable = false;
        }
      }
    }
  }
  if (orientation.size() != triangles.size()) throw SurfaceError("not connected");

  int chi = static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) + static_cast<int>(triangles.size());
  return SurfaceClass::from(chi, orientable);
}

CertificateVerdict verify_surface_certificate(const SymmetricComplex& c, const SurfaceCertificate& cert) {
  const SubcomplexRef& witness = cert.witness;
  if (&witness.parent() != &c) throw std::invalid_argument("witness refers to a different complex");
  if (!witness.is_closed()) throw std::invalid_argument("witness is not face-closed");

  CertificateVerdict verdict;
  verdict.contained = std::all_of(witness.members().begin(), witness.members().end(),
                                  [&](SimplexIndex s) { return c.entry_value(s) <= cert.level; });
  try {
    verdict.observed_class = classify_surface(witness);
    verdict.class_matches = *verdict.observed_class == cert.claimed_class;
  } catch (const SurfaceError& e) {
    verdict.classification_error = e.what();
  }

  // The 2-chain of all witness triangles is nonzero in H_2(c) iff it is not
  // in the image of the 3-boundary.
  SubcomplexRef whole = SubcomplexRef::whole(c);
  auto [tb, te] = c.dimension_range(2);
  Z2Column chain;
  for (SimplexIndex t : witness.of_dimension(2)) chain.push_back(t - tb);
  bool is_cycle = true;
  {
    std::vector<std::uint8_t> parity(c.simplex_count(), 0);
    for (SimplexIndex t : witness.of_dimension(2)) {
      for (SimplexIndex e : c.boundary(t)) parity[e] ^= 1;
    }
    is_cycle = std::none_of(parity.begin(), parity.end(), [](std::uint8_t b) { return b != 0; });
  }
  verdict.essential = is_cycle && !chain.empty() && !in_column_span(boundary_matrix(whole, 3), chain);
  verdict.essential_matches = verdict.essential == cert.claims_essential;
  (void)te;
  return verdict;
}

bool degree_obstruction(const SurfaceClass& source, const SurfaceClass& target) {
  return target.nonorientable_scale() > source.nonorientable_scale();
}

ObstructionVerdict obstruction_between(const SymmetricComplex& c, const SurfaceCertificate& lower,
                                       const SurfaceCertificate& upper) {
  ObstructionVerdict v;
  v.lower = verify_surface_certificate(c, lower);
  v.upper = verify_surface_certificate(c, upper);
  v.lower_level = lower.level;
  v.upper_level = upper.level;
  v.degree_obstruction = degree_obstruction(upper.claimed_class, lower.claimed_class);
  v.holds = v.lower.passed() && v.upper.passed() && lower.level < upper.level && v.degree_obstruction;
  return v;
}

SignificanceReport significance_report(const PersistenceDiagram& d) {
  SignificanceReport r;
  r.candidates = homology_critical_values(d);
  r.certified = certified_weak_significant(d);
  return r;
}

// ------------------------------------------------------ certificate files

namespace {

[[noreturn]] void cert_fail(const std::string& source, std::size_t line, const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

bool parse_flag(const std::string& token, const std::string& source, std::size_t line) {
  if (token == "1" || token == "true") return true;
  if (token == "0" || token == "false") return false;
  cert_fail(source, line, "expected 0 or 1, got '" + token + "'");
}

}  // namespace

SurfaceCertificate read_certificate(std::istream& in, const SymmetricComplex& c, const std::string& source) {
  std::optional<Rational> level;
  std::optional<int> chi;
  std::optional<bool> orientable;
  std::optional<bool> essential;
  std::vector<SimplexIndex> triangles;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto once = [&](bool already) {
      if (already) cert_fail(source, line_no, "duplicate '" + kw + "' line");
      if (tok.size() != 2) cert_fail(source, line_no, "expected '" + kw + " <value>'");
    };
    if (kw == "level") {
      once(level.has_value());
      try {
        level = parse_rational(tok[1]);
      } catch (const std::invalid_argument& e) {
        cert_fail(source, line_no, e.what());
      }
    } else if (kw == "chi") {
      once(chi.has_value());
      try {
        chi = std::stoi(tok[1]);
      } catch (const std::exception&) {
        cert_fail(source, line_no, "invalid chi '" + tok[1] + "'");
      }
    } else if (kw == "orientable") {
      once(orientable.has_value());
      orientable = parse_flag(tok[1], source, line_no);
    } else if (kw == "essential") {
      once(essential.has_value());
      essential = parse_flag(tok[1], source, line_no);
    } else if (kw == "dim") {
      if (tok.size() != 2 || tok[1] != "2") cert_fail(source, line_no, "witness must be 2-dimensional");
    } else if (kw == "s") {
      if (tok.size() != 4) cert_fail(source, line_no, "witness simplices must be triangles");
      std::vector<VertexIndex> vs;
      for (std::size_t i = 1; i < 4; ++i) {
        VertexId id = 0;
        try {
          id = static_cast<VertexId>(std::stoul(tok[i]));
        } catch (const std::exception&) {
          cert_fail(source, line_no, "invalid vertex id '" + tok[i] + "'");
        }
        auto v = c.find_vertex(id);
        if (!v) cert_fail(source, line_no, "unknown vertex " + tok[i]);
        vs.push_back(*v);
      }
      SimplexIndex t = kNoSimplex;
      try {
        t = c.find(Simplex(vs));
      } catch (const std::invalid_argument& e) {
        cert_fail(source, line_no, e.what());
      }
      if (t == kNoSimplex) cert_fail(source, line_no, "triangle not in complex");
      triangles.push_back(t);
    } else {
      cert_fail(source, line_no, "unknown record '" + kw + "'");
    }
  }
  if (!level || !chi || !orientable || !essential)
    throw ParseError(source + ": certificate needs level, chi, orientable and essential lines");
  if (triangles.empty()) throw ParseError(source + ": certificate has an empty witness");

  SurfaceCertificate cert;
  cert.witness = SubcomplexRef::closure(c, triangles);
  cert.level = *level;
  try {
    cert.claimed_class = SurfaceClass::from(*chi, *orientable);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source + ": " + e.what());
  }
  cert.claims_essential = *essential;
  return cert;
}

void write_certificate(std::ostream& out, const SurfaceCertificate& cert) {
  const SymmetricComplex& c = cert.witness.parent();
  out << "# krspec surface certificate\n";
  out << "level " << to_string(cert.level) << "\n";
  out << "chi " << cert.claimed_class.euler_characteristic << "\n";
  out << "orientable " << (cert.claimed_class.orientable ? 1 : 0) << "\n";
  out << "essential " << (cert.claims_essential ? 1 : 0) << "\n";
  for (SimplexIndex t : cert.witness.of_dimension(2)) {
    const Simplex& s = c.simplex(t);
    out << "s " << c.vertex_id(s[0]) << " " << c.vertex_id(s[1]) << " " << c.vertex_id(s[2]) << "\n";
  }
}

}  // namespace krs
