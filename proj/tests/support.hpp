// Shared helpers for the test suites: fixture loading, seeded randomness and
// dense GF(2) oracles that share no code with the library's sparse routines.
#ifndef KRSPEC_TESTS_SUPPORT_HPP
#define KRSPEC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "krspec/spaces.hpp"
#include "krspec/symcx.hpp"

namespace testsupport {

inline std::string fixture(const std::string& name) { return std::string(KRSPEC_FIXTURES) + "/" + name; }

inline krs::SymmetricComplex load(const std::string& name) { return krs::load_scx(fixture(name)); }

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

/// Random rational with denominator `den` in [lo, hi].
inline krs::Rational random_rational(long lo, long hi, long den = 100) {
  std::uniform_int_distribution<long> d(lo * den, hi * den);
  return krs::Rational(d(rng()), den);
}

/// Dense GF(2) row space rank by Gaussian elimination on bool rows.
inline std::size_t dense_rank(std::vector<std::vector<bool>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot][c]) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r][c]) {
        for (std::size_t k = c; k < cols; ++k) rows[r][k] = rows[r][k] != rows[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

/// Simplices of the subcomplex given as sorted vertex lists, grouped by dim.
using Faces = std::vector<std::vector<std::vector<krs::VertexIndex>>>;

inline Faces faces_of(const krs::SubcomplexRef& sub) {
  Faces out(5);
  for (krs::SimplexIndex s : sub.members()) {
    const auto& simplex = sub.parent().simplex(s);
    out[simplex.size() - 1].emplace_back(simplex.vertices().begin(), simplex.vertices().end());
  }
  for (auto& group : out) std::sort(group.begin(), group.end());
  return out;
}

/// Dense boundary matrix from p-simplices to (p-1)-simplices, one row per
/// p-simplex.
inline std::vector<std::vector<bool>> dense_boundary(const Faces& f, int p) {
  std::vector<std::vector<bool>> rows;
  if (p <= 0) return rows;
  for (const auto& s : f[p]) {
    std::vector<bool> row(f[p - 1].size(), false);
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      auto face = s;
      face.erase(face.begin() + static_cast<long>(drop));
      auto it = std::lower_bound(f[p - 1].begin(), f[p - 1].end(), face);
      row[static_cast<std::size_t>(it - f[p - 1].begin())] = true;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::size_t dense_betti(const krs::SubcomplexRef& sub, int p) {
  Faces f = faces_of(sub);
  if (p < 0 || p > 3) return 0;
  std::size_t n = f[p].size();
  std::size_t rank_p = dense_rank(dense_boundary(f, p));
  std::size_t rank_up = dense_rank(dense_boundary(f, p + 1));
  return n - rank_p - rank_up;
}

/// Whether [w]^p is nonzero on `sub`, by a dense solve of delta x = w^p in
/// the transposed system. p = 0 asks for nonemptiness.
inline bool dense_cup_nonzero(const krs::SubcomplexRef& sub, int p) {
  const auto& c = sub.parent();
  Faces f = faces_of(sub);
  if (p == 0) return !f[0].empty();
  if (p > 3 || f[p].empty()) return false;
  // w^p on [v0..vp] = product of w(v_i v_{i+1}).
  std::vector<bool> z(f[p].size());
  for (std::size_t i = 0; i < f[p].size(); ++i) {
    bool on = true;
    for (int k = 0; k < p; ++k) on = on && c.cocycle(f[p][i][k], f[p][i][k + 1]);
    z[i] = on;
  }
  if (std::none_of(z.begin(), z.end(), [](bool b) { return b; })) return false;
  // delta has the boundary rows as columns; z is a coboundary iff appending
  // it to the row space of boundary-transpose does not raise the rank.
  auto rows = dense_boundary(f, p);  // rows: p-simplices, cols: (p-1)-simplices
  std::vector<std::vector<bool>> cols(f[p - 1].size(), std::vector<bool>(f[p].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) cols[j][i] = rows[i][j];
  std::size_t before = dense_rank(cols);
  cols.push_back(z);
  return dense_rank(cols) > before;
}

inline std::size_t dense_index(const krs::SubcomplexRef& sub) {
  if (sub.is_empty()) return 0;
  std::size_t best = 0;
  for (int p = 1; p <= 3; ++p) {
    if (dense_cup_nonzero(sub, p)) best = static_cast<std::size_t>(p);
  }
  return best + 1;
}

/// Subcomplex of simplices all of whose vertices have value <= t.
inline krs::SubcomplexRef brute_sublevel(const krs::SymmetricComplex& c, const krs::Rational& t) {
  std::vector<krs::SimplexIndex> members;
  for (krs::SimplexIndex s = 0; s < c.simplex_count(); ++s) {
    bool in = true;
    for (auto v : c.simplex(s).vertices()) in = in && c.value(v) <= t;
    if (in) members.push_back(s);
  }
  return krs::SubcomplexRef(c, members);
}

/// Values perturbed by a random amount in [-delta, delta] (multiples of delta/den).
inline std::vector<krs::Rational> perturbed_values(const krs::SymmetricComplex& c, const krs::Rational& delta,
                                                   long den = 8) {
  std::uniform_int_distribution<long> d(-den, den);
  std::vector<krs::Rational> out;
  for (krs::VertexIndex v = 0; v < c.vertex_count(); ++v) out.push_back(c.value(v) + delta * krs::Rational(d(rng()), den));
  return out;
}

}  // namespace testsupport

#endif  // KRSPEC_TESTS_SUPPORT_HPP
