#include <doctest.h>

#include <fstream>
#include <sstream>

#include "krspec/significance.hpp"
#include "krspec/spectrum.hpp"
#include "support.hpp"

using namespace krs;
using testsupport::load;

namespace {

const SurfaceClass kRP2 = SurfaceClass::from(1, false);
const SurfaceClass kDyck = SurfaceClass::from(-1, false);
const SurfaceClass kSphere = SurfaceClass::from(2, true);
const SurfaceClass kTorus = SurfaceClass::from(0, true);

/// Largest distance from any value of `a` to the nearest value of `b`.
Rational one_sided(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational worst = 0;
  for (const auto& x : a) {
    std::optional<Rational> best;
    for (const auto& y : b) {
      Rational d = x > y ? Rational(x - y) : Rational(y - x);
      if (!best || d < *best) best = d;
    }
    if (best && *best > worst) worst = *best;
  }
  return worst;
}

std::vector<Rational> certified_levels(const PersistenceDiagram& d, int p) {
  std::vector<Rational> out;
  for (const auto& v : certified_weak_significant(d)) {
    if (v.dimension == p) out.push_back(v.level);
  }
  return out;
}

}  // namespace

TEST_CASE("surface classes") {
  CHECK(kRP2.genus == 1);
  CHECK(kDyck.genus == 3);
  CHECK(kTorus.genus == 1);
  CHECK(kTorus.nonorientable_scale() == 2);
  CHECK_THROWS_AS(SurfaceClass::from(3, true), std::invalid_argument);
  CHECK_THROWS_AS(SurfaceClass::from(1, true), std::invalid_argument);
  CHECK_THROWS_AS(SurfaceClass::from(2, false), std::invalid_argument);
}

TEST_CASE("critical values and certified values on small fixtures") {
  PersistenceDiagram rp2 = persistence(load("rp2.scx"));
  CHECK(homology_critical_values(rp2) == std::vector<Rational>{0});
  CHECK(certified_weak_significant(rp2) ==
        std::vector<CertifiedValue>{{0, Rational(0)}, {1, Rational(0)}, {2, Rational(0)}});

  SymmetricComplex rp1 = load("rp1.scx");
  PersistenceDiagram circle = persistence(rp1);
  for (const auto& t : homology_critical_values(circle))
    CHECK(std::find(rp1.levels().begin(), rp1.levels().end(), t) != rp1.levels().end());
  CHECK(certified_weak_significant(circle) ==
        std::vector<CertifiedValue>{{0, parse_rational("0.2")}, {1, parse_rational("0.9")}});

  auto ray = homology_critical_values(persistence(load("rayleigh_d123.scx")));
  for (int e : {1, 2, 3}) CHECK(std::find(ray.begin(), ray.end(), Rational(e)) != ray.end());
}

TEST_CASE("classify the bundled surfaces") {
  CHECK(classify_surface(SubcomplexRef::whole(load("rp2.scx"))) == kRP2);
  CHECK(classify_surface(SubcomplexRef::whole(load("torus.scx"))) == kTorus);
  SymmetricComplex rp3 = load("rp3.scx");
  SimplexIndex tet = rp3.dimension_range(3).first;
  std::vector<SimplexIndex> faces(rp3.boundary(tet).begin(), rp3.boundary(tet).end());
  CHECK(classify_surface(SubcomplexRef::closure(rp3, faces)) == kSphere);
}

TEST_CASE("classification is invariant under subdivision") {
  for (const char* name : {"rp2.scx", "torus.scx"}) {
    SymmetricComplex c = load(name);
    SymmetricComplex sd = subdivide(c);
    CHECK(classify_surface(SubcomplexRef::whole(sd)) == classify_surface(SubcomplexRef::whole(c)));
  }
}

TEST_CASE("classification names the failed condition") {
  SymmetricComplex disc = SymmetricComplex::from_maximal({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, {});
  CHECK_THROWS_WITH_AS(classify_surface(SubcomplexRef::whole(disc)), doctest::Contains("not closed"), SurfaceError);

  // Two tetrahedron boundaries glued at a vertex: closed, but not a manifold.
  std::vector<VertexSpec> vs;
  for (VertexId v = 0; v < 7; ++v) vs.push_back({v, 0});
  SymmetricComplex pinched = SymmetricComplex::from_maximal(
      vs, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {3, 4, 5}, {3, 4, 6}, {3, 5, 6}, {4, 5, 6}}, {});
  CHECK_THROWS_WITH_AS(classify_surface(SubcomplexRef::whole(pinched)), doctest::Contains("link"), SurfaceError);

  // Two disjoint spheres.
  for (VertexId v = 7; v < 8; ++v) vs.push_back({v, 0});
  SymmetricComplex apart = SymmetricComplex::from_maximal(
      vs, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {4, 5, 6}, {4, 5, 7}, {4, 6, 7}, {5, 6, 7}}, {});
  CHECK_THROWS_WITH_AS(classify_surface(SubcomplexRef::whole(apart)), doctest::Contains("not connected"), SurfaceError);

  SymmetricComplex rp3 = load("rp3.scx");
  CHECK_THROWS_WITH_AS(classify_surface(SubcomplexRef::whole(rp3)), doctest::Contains("2-dimensional"), SurfaceError);
}

TEST_CASE("certificate verification on the Dyck fixture") {
  SymmetricComplex c = load("dyck.scx");
  std::ifstream rp2_file(testsupport::fixture("rp2_witness.cert"));
  SurfaceCertificate rp2 = read_certificate(rp2_file, c);
  CHECK(rp2.level == 1);
  CertificateVerdict ok = verify_surface_certificate(c, rp2);
  CHECK(ok.contained);
  CHECK(ok.class_matches);
  CHECK(ok.essential);
  CHECK(ok.passed());

  SurfaceCertificate below = rp2;
  below.level = Rational(99, 100);
  CertificateVerdict v = verify_surface_certificate(c, below);
  CHECK_FALSE(v.contained);
  CHECK(v.class_matches);
  CHECK_FALSE(v.passed());

  std::ifstream dyck_file(testsupport::fixture("dyck_witness.cert"));
  SurfaceCertificate dyck = read_certificate(dyck_file, c);
  CHECK(verify_surface_certificate(c, dyck).passed());
  CHECK(verify_surface_certificate(c, dyck).observed_class == kDyck);

  ObstructionVerdict ob = obstruction_between(c, dyck, rp2);
  CHECK(ob.degree_obstruction);
  CHECK(ob.holds);
  CHECK(ob.lower_level == 0);
  CHECK(ob.upper_level == 1);
  // Reversed roles carry no obstruction.
  CHECK_FALSE(obstruction_between(c, rp2, dyck).holds);
}

TEST_CASE("a tetrahedron boundary classifies as a sphere but is not essential") {
  SymmetricComplex rp3 = load("rp3.scx");
  SimplexIndex tet = rp3.dimension_range(3).first;
  std::vector<SimplexIndex> faces(rp3.boundary(tet).begin(), rp3.boundary(tet).end());
  SurfaceCertificate cert{SubcomplexRef::closure(rp3, faces), rp3.entry_value(tet), kSphere, true};
  CertificateVerdict v = verify_surface_certificate(rp3, cert);
  CHECK(v.contained);
  CHECK(v.class_matches);
  CHECK_FALSE(v.essential);
  CHECK_FALSE(v.essential_matches);
  cert.claims_essential = false;
  CHECK(verify_surface_certificate(rp3, cert).passed());
}

TEST_CASE("verification rejects witnesses that are not face-closed") {
  SymmetricComplex rp2 = load("rp2.scx");
  auto [tb, te] = rp2.dimension_range(2);
  SurfaceCertificate cert{SubcomplexRef(rp2, {tb}), Rational(0), kRP2, true};
  CHECK_THROWS_AS(verify_surface_certificate(rp2, cert), std::invalid_argument);
  (void)te;
}

TEST_CASE("degree obstruction examples") {
  CHECK(degree_obstruction(kRP2, kDyck));
  CHECK_FALSE(degree_obstruction(kRP2, kRP2));
  CHECK_FALSE(degree_obstruction(kDyck, kRP2));
  CHECK(degree_obstruction(kSphere, kTorus));
  CHECK_FALSE(degree_obstruction(kTorus, SurfaceClass::from(0, false)));
}

TEST_CASE("certificate files round trip and report bad lines") {
  SymmetricComplex c = load("dyck.scx");
  std::ifstream f(testsupport::fixture("rp2_witness.cert"));
  SurfaceCertificate cert = read_certificate(f, c);
  std::ostringstream out;
  write_certificate(out, cert);
  std::istringstream in(out.str());
  SurfaceCertificate back = read_certificate(in, c);
  CHECK(back.witness == cert.witness);
  CHECK(back.level == cert.level);
  CHECK(back.claimed_class == cert.claimed_class);
  CHECK(back.claims_essential == cert.claims_essential);

  std::istringstream bad("level 1\nchi 1\norientable 0\nessential 1\ns 0 1 99999\n");
  CHECK_THROWS_WITH_AS(read_certificate(bad, c, "w.cert"), doctest::Contains("w.cert:5:"), ParseError);
}

TEST_CASE("Dyck fixture: no certified value strictly between 0 and the top level") {
  SymmetricComplex c = load("dyck.scx");
  PersistenceDiagram d = persistence(c);
  const Rational top = c.levels().back();
  for (const auto& v : certified_weak_significant(d)) CHECK((v.level == 0 || v.level == top));
}

TEST_CASE("detector outputs are levels of the complex and covered by the screen") {
  for (const char* name : {"rp1.scx", "rp2.scx", "rayleigh_d123.scx", "dyck.scx"}) {
    SymmetricComplex c = load(name);
    PersistenceDiagram d = persistence(c);
    auto crit = homology_critical_values(d);
    SpectrumReport s = index_spectrum(c);
    for (const auto& t : crit) CHECK(std::binary_search(c.levels().begin(), c.levels().end(), t));
    for (const auto& v : certified_weak_significant(d)) {
      bool in_crit = std::binary_search(crit.begin(), crit.end(), v.level);
      bool in_sweep = std::find(s.index_values.begin(), s.index_values.end(), std::optional<Rational>(v.level)) !=
                      s.index_values.end();
      CHECK((in_crit || in_sweep));
    }
  }
}

TEST_CASE("certified levels move by at most the perturbation size") {
  const Rational delta(1, 20);
  for (const char* name : {"rp1.scx", "rp2.scx", "rayleigh_d123.scx"}) {
    SymmetricComplex c = load(name);
    PersistenceDiagram before = persistence(c);
    for (int trial = 0; trial < 5; ++trial) {
      PersistenceDiagram after = persistence(c.with_values(testsupport::perturbed_values(c, delta)));
      for (int p = 0; p <= 2; ++p) {
        auto a = certified_levels(before, p), b = certified_levels(after, p);
        CHECK(one_sided(a, b) <= delta);
        CHECK(one_sided(b, a) <= delta);
        auto ea = before.essential_births(p), eb = after.essential_births(p);
        REQUIRE(ea.size() == eb.size());
        for (std::size_t i = 0; i < ea.size(); ++i) CHECK(Rational(ea[i] > eb[i] ? Rational(ea[i] - eb[i]) : Rational(eb[i] - ea[i])) <= delta);
      }
    }
  }
}

TEST_CASE("nothing is certified strictly between the first two values on the fixtures") {
  for (const char* name : {"rp1.scx", "rp2.scx", "rp3.scx", "torus.scx", "rayleigh_d123.scx", "dyck.scx"}) {
    SymmetricComplex c = load(name);
    SpectrumReport s = index_spectrum(c);
    REQUIRE(s.index_values.size() >= 2);
    REQUIRE(s.index_values[1]);
    for (const auto& v : certified_weak_significant(persistence(c)))
      CHECK_FALSE((v.level > *s.index_values[0] && v.level < *s.index_values[1]));
  }
}
