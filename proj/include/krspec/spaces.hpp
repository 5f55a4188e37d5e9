#ifndef KRSPEC_SPACES_HPP
#define KRSPEC_SPACES_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "krspec/rational.hpp"
#include "krspec/significance.hpp"
#include "krspec/symcx.hpp"

namespace krs {

/// A free Z/2-complex given upstairs: maximal simplices on cover vertices,
/// a fixed-point-free involution, and an even vertex function.
struct CoverComplex {
  std::size_t vertex_count = 0;
  std::vector<std::vector<std::uint32_t>> maximal;
  std::vector<std::uint32_t> antipode;
  std::vector<Rational> values;
};

struct Quotient {
  SymmetricComplex complex;
  /// Quotient vertex id of every cover vertex.
  std::vector<VertexId> vertex_of;
};

/// Divide out the involution. Orbits are numbered by their smaller member;
/// w(e) = 1 iff the lift of e starting at one representative ends at the
/// other representative's antipode. Throws std::invalid_argument when the
/// quotient is not a simplicial complex covered twice (mesh too coarse) or
/// the values are not even.
Quotient antipodal_quotient(const CoverComplex& cover);

/// Vertex function for gen_rp: a constant or one value per vertex.
struct VertexFunction {
  std::optional<Rational> constant;
  std::vector<Rational> values;

  static VertexFunction constant_value(Rational c) { return {std::move(c), {}}; }
  static VertexFunction per_vertex(std::vector<Rational> v) { return {std::nullopt, std::move(v)}; }
};

/// Number of vertices gen_rp(n, ...) produces for a per-vertex list
/// (RP^1 takes the list length, at least 3).
std::size_t rp_vertex_count(int n);

/// RP^1: a cycle (3 vertices for constants, else one per value).
/// RP^2: the 6-vertex quotient of the icosahedron.
/// RP^3: quotient of the Freudenthal-triangulated boundary of [-1,1]^4.
SymmetricComplex gen_rp(int n, const VertexFunction& f);

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Icosphere of the given subdivision level (0..6) modulo x ~ -x with
/// f([x]) = x'Ax / x'x rounded to 12 decimals.
SymmetricComplex gen_rayleigh(const Matrix3& a, int level);

/// Unit-vector coordinates of the icosphere vertices used by gen_rayleigh,
/// one per quotient vertex id.
std::vector<std::array<double, 3>> rayleigh_vertex_positions(int level);

enum class DyckMode { Combinatorial, Metric };

struct DyckParams {
  Rational r{1};
  Rational R{4};
  /// Half-width of the 4-cube whose boundary is the double cover.
  int mesh = 4;
  DyckMode mode = DyckMode::Combinatorial;
};

inline constexpr int kMinDyckMesh = 4;

using Triangle = std::array<VertexId, 3>;

/// RP^3 = S^3/(x ~ -x) containing Dyck's surface (RP^2 with a handle) at
/// level 0 and the equatorial RP^2, which enters at r_level.
struct DyckFixture {
  SymmetricComplex complex;
  std::vector<Triangle> dyck_triangles;
  std::vector<Triangle> rp2_triangles;
  Rational r_level;
  Rational f_max;

  SubcomplexRef dyck_witness() const;
  SubcomplexRef rp2_witness() const;
  /// Level 0, chi = -1, non-orientable, essential.
  SurfaceCertificate dyck_certificate() const;
  /// Level r_level (or `level`), chi = 1, non-orientable, essential.
  SurfaceCertificate rp2_certificate(std::optional<Rational> level = std::nullopt) const;
};

/// Combinatorial mode: Dyck vertices at 0, the two equatorial disc centres
/// at r, everything else at R. Metric mode: Euclidean distance (grid spacing
/// r) to the lifted surface in the cover. Throws if R <= 3r or mesh < 4.
DyckFixture gen_dyck(const DyckParams& params);

/// Triangulated torus on a size x size grid with w the class of one
/// coordinate circle (its double cover unwraps that direction).
SymmetricComplex gen_torus(int size, const VertexFunction& f);

/// Read and validate an SCX file; "file not found" if it does not exist.
SymmetricComplex load_scx(const std::filesystem::path& path);

}  // namespace krs

#endif  // KRSPEC_SPACES_HPP
