#include "krspec/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace krs {

// ------------------------------------------------------------- quotient

Quotient antipodal_quotient(const CoverComplex& cover) {
  const std::size_t n = cover.vertex_count;
  if (cover.antipode.size() != n || cover.values.size() != n)
    throw std::invalid_argument("cover: antipode/value arrays must have one entry per vertex");
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t a = cover.antipode[v];
    if (a >= n || a == v || cover.antipode[a] != v) throw std::invalid_argument("cover: involution is not free");
    if (cover.values[v] != cover.values[a]) throw std::invalid_argument("cover: vertex function is not even");
  }

  Quotient q;
  q.vertex_of.assign(n, 0);
  std::vector<std::uint32_t> representative;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (v < cover.antipode[v]) {
      q.vertex_of[v] = static_cast<VertexId>(representative.size());
      q.vertex_of[cover.antipode[v]] = q.vertex_of[v];
      representative.push_back(v);
    }
  }

  // Every face of every cover simplex, and how many lifts each image has.
  std::set<std::vector<std::uint32_t>> cover_faces;
  for (auto top : cover.maximal) {
    std::sort(top.begin(), top.end());
    const unsigned k = static_cast<unsigned>(top.size());
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<std::uint32_t> face;
      for (unsigned i = 0; i < k; ++i) {
        if (mask & (1u << i)) face.push_back(top[i]);
      }
      cover_faces.insert(std::move(face));
    }
  }
  std::map<std::vector<VertexId>, int> lifts;
  for (const auto& face : cover_faces) {
    std::vector<VertexId> image;
    for (auto v : face) image.push_back(q.vertex_of[v]);
    std::sort(image.begin(), image.end());
    if (std::adjacent_find(image.begin(), image.end()) != image.end())
      throw std::invalid_argument("cover too coarse: a simplex contains two antipodal vertices");
    ++lifts[image];
  }
  for (const auto& [image, count] : lifts) {
    if (count != 2) throw std::invalid_argument("cover too coarse: quotient simplex with " + std::to_string(count) + " lifts");
  }

  std::vector<std::vector<VertexId>> maximal;
  std::set<std::vector<VertexId>> seen;
  for (auto top : cover.maximal) {
    std::vector<VertexId> image;
    for (auto v : top) image.push_back(q.vertex_of[v]);
    std::sort(image.begin(), image.end());
    if (seen.insert(image).second) maximal.push_back(std::move(image));
  }

  std::vector<CocycleEntry> cocycle;
  for (const auto& [image, count] : lifts) {
    if (image.size() != 2) continue;
    std::vector<std::uint32_t> lift{representative[image[0]], representative[image[1]]};
    std::sort(lift.begin(), lift.end());
    if (!cover_faces.count(lift)) cocycle.push_back({image[0], image[1], true});
  }

  std::vector<VertexSpec> vertices;
  for (VertexId id = 0; id < representative.size(); ++id) vertices.push_back({id, cover.values[representative[id]]});
  q.complex = SymmetricComplex::from_maximal(std::move(vertices), maximal, cocycle);
  return q;
}

// ------------------------------------------------------------ geometry

namespace {

using Point4 = std::array<int, 4>;

/// Boundary of [-N,N]^4 with the Freudenthal triangulation on every facet.
struct CubeSphere {
  int half_width = 0;
  std::vector<Point4> points;
  std::map<Point4, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> tetrahedra;

  std::uint32_t at(const Point4& p) const { return index.at(p); }
  std::uint32_t antipode(std::uint32_t v) const {
    Point4 p = points[v];
    for (int& x : p) x = -x;
    return index.at(p);
  }
};

CubeSphere make_cube_sphere(int n) {
  CubeSphere s;
  s.half_width = n;
  for (int a = -n; a <= n; ++a)
    for (int b = -n; b <= n; ++b)
      for (int c = -n; c <= n; ++c)
        for (int d = -n; d <= n; ++d) {
          Point4 p{a, b, c, d};
          if (std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}) != n) continue;
          s.index.emplace(p, static_cast<std::uint32_t>(s.points.size()));
          s.points.push_back(p);
        }

  for (int axis = 0; axis < 4; ++axis) {
    for (int sign : {-1, 1}) {
      std::array<int, 3> free{};
      for (int i = 0, k = 0; i < 4; ++i) {
        if (i != axis) free[k++] = i;
      }
      for (int a = -n; a < n; ++a)
        for (int b = -n; b < n; ++b)
          for (int c = -n; c < n; ++c) {
            Point4 base{};
            base[axis] = sign * n;
            base[free[0]] = a;
            base[free[1]] = b;
            base[free[2]] = c;
            std::array<int, 3> perm = free;
            do {
              std::vector<std::uint32_t> tet{s.at(base)};
              Point4 p = base;
              for (int ax : perm) {
                ++p[ax];
                tet.push_back(s.at(p));
              }
              s.tetrahedra.push_back(std::move(tet));
            } while (std::next_permutation(perm.begin(), perm.end()));
          }
    }
  }
  return s;
}

struct Icosphere {
  std::vector<std::array<double, 3>> points;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<std::uint32_t> antipode;
};

Icosphere make_icosphere(int level) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Icosphere s;
  s.points = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
              {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
              {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  s.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  s.antipode = {3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8};
  for (auto& p : s.points) {
    double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (double& x : p) x /= len;
  }

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    auto mid = [&](std::uint32_t a, std::uint32_t b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      std::array<double, 3> m{};
      for (int i = 0; i < 3; ++i) m[i] = s.points[a][i] + s.points[b][i];
      double len = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
      for (double& x : m) x /= len;
      auto id = static_cast<std::uint32_t>(s.points.size());
      s.points.push_back(m);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<std::uint32_t, 3>> next;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> created;  // midpoint -> its edge
    for (const auto& t : s.triangles) {
      std::uint32_t ab = mid(t[0], t[1]);
      std::uint32_t bc = mid(t[1], t[2]);
      std::uint32_t ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    // The midpoint of an edge is antipodal to the midpoint of the antipodal edge.
    std::vector<std::uint32_t> antipode(s.points.size());
    std::copy(s.antipode.begin(), s.antipode.end(), antipode.begin());
    for (const auto& [edge, id] : midpoint) {
      auto opposite = std::minmax(s.antipode[edge.first], s.antipode[edge.second]);
      antipode[id] = midpoint.at(opposite);
    }
    s.antipode = std::move(antipode);
    s.triangles = std::move(next);
  }
  return s;
}

std::vector<Rational> expand_values(const VertexFunction& f, std::size_t count, const char* what) {
  if (f.constant) return std::vector<Rational>(count, *f.constant);
  if (f.values.size() != count) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(count) + " vertex values, got " +
                                std::to_string(f.values.size()));
  }
  return f.values;
}

/// Lift quotient values back to a cover (vertex_of computed beforehand).
Quotient quotient_with_values(CoverComplex cover, const VertexFunction& f, const char* what) {
  // Orbit numbering does not depend on values; compute it with zeros first.
  cover.values.assign(cover.vertex_count, Rational(0));
  Quotient shape = antipodal_quotient(cover);
  std::vector<Rational> values = expand_values(f, shape.complex.vertex_count(), what);
  return {shape.complex.with_values(values), shape.vertex_of};
}

CoverComplex polygon_cover(std::size_t m) {
  CoverComplex cover;
  cover.vertex_count = 2 * m;
  for (std::uint32_t i = 0; i < 2 * m; ++i) {
    cover.maximal.push_back({i, static_cast<std::uint32_t>((i + 1) % (2 * m))});
    cover.antipode.push_back(static_cast<std::uint32_t>((i + m) % (2 * m)));
  }
  return cover;
}

CoverComplex icosphere_cover(const Icosphere& s) {
  CoverComplex cover;
  cover.vertex_count = s.points.size();
  cover.antipode = s.antipode;
  for (const auto& t : s.triangles) cover.maximal.push_back({t[0], t[1], t[2]});
  return cover;
}

CoverComplex cube_sphere_cover(const CubeSphere& s) {
  CoverComplex cover;
  cover.vertex_count = s.points.size();
  cover.maximal = s.tetrahedra;
  for (std::uint32_t v = 0; v < s.points.size(); ++v) cover.antipode.push_back(s.antipode(v));
  return cover;
}

}  // namespace

std::size_t rp_vertex_count(int n) {
  switch (n) {
    case 1: return 3;
    case 2: return 6;
    case 3: return (81 - 1) / 2;
    default: throw std::invalid_argument("gen_rp: n must be 1, 2 or 3");
  }
}

SymmetricComplex gen_rp(int n, const VertexFunction& f) {
  switch (n) {
    case 1: {
      std::size_t m = f.constant ? 3 : f.values.size();
      if (m < 3) throw std::invalid_argument("gen_rp(1): need at least 3 vertex values");
      return quotient_with_values(polygon_cover(m), f, "gen_rp(1)").complex;
    }
    case 2:
      return quotient_with_values(icosphere_cover(make_icosphere(0)), f, "gen_rp(2)").complex;
    case 3:
      return quotient_with_values(cube_sphere_cover(make_cube_sphere(1)), f, "gen_rp(3)").complex;
    default:
      throw std::invalid_argument("gen_rp: n must be 1, 2 or 3");
  }
}

SymmetricComplex gen_rayleigh(const Matrix3& a, int level) {
  if (level < 0 || level > 6) throw std::invalid_argument("gen_rayleigh: level must be in 0..6");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (!std::isfinite(a[i][j])) throw std::invalid_argument("gen_rayleigh: non-finite matrix entry");
      if (a[i][j] != a[j][i]) throw std::invalid_argument("gen_rayleigh: matrix is not symmetric");
    }
  Icosphere s = make_icosphere(level);
  CoverComplex cover = icosphere_cover(s);
  for (const auto& x : s.points) {
    double num = 0;
    double den = 0;
    for (int i = 0; i < 3; ++i) {
      den += x[i] * x[i];
      for (int j = 0; j < 3; ++j) num += x[i] * a[i][j] * x[j];
    }
    cover.values.push_back(round_decimal(num / den, 12));
  }
  // Antipodal points give bitwise-equal quotients up to rounding of the
  // normalisation; use the smaller orbit member's value for both.
  for (std::uint32_t v = 0; v < cover.vertex_count; ++v) {
    std::uint32_t w = cover.antipode[v];
    if (v < w) cover.values[w] = cover.values[v];
  }
  return antipodal_quotient(cover).complex;
}

std::vector<std::array<double, 3>> rayleigh_vertex_positions(int level) {
  if (level < 0 || level > 6) throw std::invalid_argument("gen_rayleigh: level must be in 0..6");
  Icosphere s = make_icosphere(level);
  std::vector<std::array<double, 3>> out;
  for (std::uint32_t v = 0; v < s.points.size(); ++v) {
    if (v < s.antipode[v]) out.push_back(s.points[v]);
  }
  return out;
}

// ---------------------------------------------------------------- Dyck

namespace {

/// Unit square spanned at `base` by coordinate axes p < q.
struct Square {
  Point4 base;
  int p;
  int q;
  auto operator<=>(const Square&) const = default;
};

Square antipodal(const Square& s) {
  Square out = s;
  for (int i = 0; i < 4; ++i) out.base[i] = -s.base[i];
  out.base[s.p] -= 1;
  out.base[s.q] -= 1;
  return out;
}

std::array<Point4, 4> corners(const Square& s) {
  Point4 a = s.base, b = s.base, c = s.base, d = s.base;
  ++b[s.p];
  ++c[s.q];
  ++d[s.p];
  ++d[s.q];
  return {a, b, c, d};
}

/// Squared Euclidean distance from an integer point to a unit square.
long squared_distance(const Point4& x, const Square& s) {
  long total = 0;
  for (int i = 0; i < 4; ++i) {
    long lo = s.base[i];
    long hi = (i == s.p || i == s.q) ? lo + 1 : lo;
    long d = x[i] < lo ? lo - x[i] : (x[i] > hi ? x[i] - hi : 0);
    total += d * d;
  }
  return total;
}

std::vector<Triangle> quotient_triangles(const std::set<Square>& squares, const CubeSphere& sphere,
                                         const std::vector<VertexId>& vertex_of) {
  std::set<Triangle> out;
  for (const Square& s : squares) {
    auto [a, b, c, d] = corners(s);
    for (const auto& tri : {std::array<Point4, 3>{a, b, d}, std::array<Point4, 3>{a, c, d}}) {
      Triangle t{};
      for (int i = 0; i < 3; ++i) t[i] = vertex_of[sphere.at(tri[i])];
      std::sort(t.begin(), t.end());
      out.insert(t);
    }
  }
  return {out.begin(), out.end()};
}

SubcomplexRef witness_of(const SymmetricComplex& c, const std::vector<Triangle>& triangles) {
  std::vector<SimplexIndex> generators;
  for (const Triangle& t : triangles) {
    std::vector<VertexIndex> vs;
    for (VertexId id : t) vs.push_back(*c.find_vertex(id));
    SimplexIndex s = c.find(Simplex(vs));
    if (s == kNoSimplex) throw std::logic_error("witness triangle missing from complex");
    generators.push_back(s);
  }
  return SubcomplexRef::closure(c, generators);
}

}  // namespace

SubcomplexRef DyckFixture::dyck_witness() const { return witness_of(complex, dyck_triangles); }
SubcomplexRef DyckFixture::rp2_witness() const { return witness_of(complex, rp2_triangles); }

SurfaceCertificate DyckFixture::dyck_certificate() const {
  return {dyck_witness(), Rational(0), SurfaceClass::from(-1, false), true};
}

SurfaceCertificate DyckFixture::rp2_certificate(std::optional<Rational> level) const {
  return {rp2_witness(), level.value_or(r_level), SurfaceClass::from(1, false), true};
}

DyckFixture gen_dyck(const DyckParams& params) {
  if (params.r <= 0) throw std::invalid_argument("gen_dyck: r must be positive");
  if (params.R <= 3 * params.r) throw std::invalid_argument("gen_dyck: R must exceed 3r");
  if (params.mesh < kMinDyckMesh)
    throw std::invalid_argument("gen_dyck: mesh too coarse (half-width " + std::to_string(params.mesh) +
                                " < " + std::to_string(kMinDyckMesh) + "), the handle degenerates");
  const int n = params.mesh;
  CubeSphere sphere = make_cube_sphere(n);

  // Equatorial sphere {x4 = 0} of the cover: squares in the facets |x_i| = n, i < 3.
  std::set<Square> equator;
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {-1, 1}) {
      int p = axis == 0 ? 1 : 0;
      int q = axis == 2 ? 1 : 2;
      for (int a = -n; a < n; ++a)
        for (int b = -n; b < n; ++b) {
          Point4 base{};
          base[axis] = sign * n;
          base[p] = a;
          base[q] = b;
          base[3] = 0;
          equator.insert({base, p, q});
        }
    }
  }

  // Handle in the facet x1 = n, local axes (u, v, h) = (x2, x3, x4): two
  // 2x2 columns of height 1 joined by a bridge at height 1..2. The boundary
  // of this solid minus its two floor patches is the tube of the handle.
  constexpr int kU = -3;
  constexpr int kV = -1;
  std::map<Square, int> face_count;
  auto add_cube = [&](int u, int v, int h) {
    Point4 lo{n, u, v, h};
    for (int ax = 1; ax < 4; ++ax) {
      int p = ax == 1 ? 2 : 1;
      int q = ax == 3 ? 2 : 3;
      for (int off : {0, 1}) {
        Point4 base = lo;
        base[ax] += off;
        ++face_count[{base, p, q}];
      }
    }
  };
  for (int v = kV; v < kV + 2; ++v) {
    for (int u = kU; u < kU + 2; ++u) add_cube(u, v, 0);
    for (int u = kU + 3; u < kU + 5; ++u) add_cube(u, v, 0);
    for (int u = kU; u < kU + 5; ++u) add_cube(u, v, 1);
  }
  std::set<Square> floor;
  std::set<Square> tube;
  for (const auto& [sq, count] : face_count) {
    if (count != 1) continue;
    bool on_floor = sq.p == 1 && sq.q == 2 && sq.base[3] == 0;
    (on_floor ? floor : tube).insert(sq);
  }

  std::set<Square> dyck;
  for (const Square& s : equator) {
    if (!floor.count(s) && !floor.count(antipodal(s))) dyck.insert(s);
  }
  for (const Square& s : tube) {
    dyck.insert(s);
    dyck.insert(antipodal(s));
  }

  std::set<std::uint32_t> dyck_points;
  std::set<std::uint32_t> equator_points;
  for (const Square& s : dyck)
    for (const auto& p : corners(s)) dyck_points.insert(sphere.at(p));
  for (const Square& s : equator)
    for (const auto& p : corners(s)) equator_points.insert(sphere.at(p));

  CoverComplex cover = cube_sphere_cover(sphere);
  DyckFixture fixture;
  fixture.r_level = params.r;
  if (params.mode == DyckMode::Combinatorial) {
    for (std::uint32_t v = 0; v < cover.vertex_count; ++v) {
      if (dyck_points.count(v)) {
        cover.values.emplace_back(0);
      } else if (equator_points.count(v)) {
        cover.values.push_back(params.r);
      } else {
        cover.values.push_back(params.R);
      }
    }
  } else {
    std::vector<Square> surface(dyck.begin(), dyck.end());
    for (std::uint32_t v = 0; v < cover.vertex_count; ++v) {
      long best = std::numeric_limits<long>::max();
      for (const Square& s : surface) best = std::min(best, squared_distance(sphere.points[v], s));
      long root = std::lround(std::sqrt(static_cast<double>(best)));
      if (root * root == best) {
        cover.values.push_back(params.r * root);
      } else {
        cover.values.push_back(round_decimal(to_double(params.r) * std::sqrt(static_cast<double>(best)), 12));
      }
    }
    // The equatorial disc centres sit at distance exactly one grid step.
    fixture.r_level = params.r;
  }

  Quotient q = antipodal_quotient(cover);
  fixture.complex = std::move(q.complex);
  fixture.f_max = fixture.complex.levels().back();
  fixture.dyck_triangles = quotient_triangles(dyck, sphere, q.vertex_of);
  fixture.rp2_triangles = quotient_triangles(equator, sphere, q.vertex_of);
  return fixture;
}

SymmetricComplex gen_torus(int size, const VertexFunction& f) {
  if (size < 3) throw std::invalid_argument("gen_torus: size must be at least 3");
  const auto n = static_cast<VertexId>(size);
  auto id = [n](VertexId i, VertexId j) { return (i % n) * n + (j % n); };
  std::vector<std::vector<VertexId>> triangles;
  std::vector<CocycleEntry> cocycle;
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = 0; j < n; ++j) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
      if (i == n - 1) {
        // Edges crossing the seam i = n-1 -> 0.
        cocycle.push_back({id(i, j), id(i + 1, j), true});
        cocycle.push_back({id(i, j), id(i + 1, j + 1), true});
      }
    }
  }
  std::vector<Rational> values = expand_values(f, n * n, "gen_torus");
  std::vector<VertexSpec> vertices;
  for (VertexId v = 0; v < n * n; ++v) vertices.push_back({v, values[v]});
  return SymmetricComplex::from_maximal(std::move(vertices), triangles, cocycle);
}

SymmetricComplex load_scx(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("file not found: " + path.string());
  return read_scx(in, path.string());
}

}  // namespace krs
