#ifndef KRSPEC_Z2ALGEBRA_HPP
#define KRSPEC_Z2ALGEBRA_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "krspec/rational.hpp"
#include "krspec/symcx.hpp"

namespace krs {

/// Sparse GF(2) vector: strictly increasing row indices.
using Z2Column = std::vector<std::uint32_t>;

/// target += source over GF(2).
void add_into(Z2Column& target, const Z2Column& source);

/// Column-sparse GF(2) matrix.
class BitMatrix {
 public:
  BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  const Z2Column& column(std::size_t j) const { return columns_[j]; }
  /// Sorts and cancels repeated entries (pairs vanish mod 2).
  void set_column(std::size_t j, Z2Column entries);

 private:
  std::size_t rows_;
  std::vector<Z2Column> columns_;
};

/// Incremental Gaussian elimination keyed on the largest row index of each
/// stored column. Used both for ranks and for "is z in the column span".
class ColumnReducer {
 public:
  explicit ColumnReducer(std::size_t rows) : pivot_of_row_(rows, kNone) {}

  /// Reduces `column` against stored pivots and keeps the remainder if it is
  /// nonzero. Returns true when the column was independent.
  bool insert(Z2Column column);
  /// Remainder of `column` after reduction; empty iff it lies in the span.
  Z2Column reduce(Z2Column column) const;
  std::size_t rank() const { return stored_.size(); }

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> pivot_of_row_;
  std::vector<Z2Column> stored_;
};

std::size_t rank(const BitMatrix& m);
bool in_column_span(const BitMatrix& m, const Z2Column& target);

/// Boundary matrix of a subcomplex in dimension p: columns are its
/// p-simplices, rows its (p-1)-simplices, both in storage order.
BitMatrix boundary_matrix(const SubcomplexRef& sub, int p);

/// dim H_p(sub; GF(2)).
std::size_t betti(const SubcomplexRef& sub, int p);

/// A GF(2) cochain on the parent complex: the set of p-simplices where it is 1.
struct CochainClass {
  int degree = 1;
  std::vector<SimplexIndex> support;  // sorted parent simplex indices
};

/// The covering class [w] read from the complex's cocycle.
CochainClass covering_class(const SymmetricComplex& c);

/// p-fold cup power of a 1-cochain restricted to `sub`, via the ordered
/// simplex (front/back face) formula: w^p([v0..vp]) = prod w(v_i v_{i+1}).
CochainClass cup_power(const SubcomplexRef& sub, const CochainClass& w, int p);

/// Whether the cochain z (restricted to sub) equals delta x for some x on sub.
bool is_coboundary(const SubcomplexRef& sub, const CochainClass& z);

/// [w]^p != 0 in H^p(sub; GF(2)). p = 0 answers "sub is nonempty".
bool cup_power_nonzero(const SubcomplexRef& sub, const CochainClass& w, int p);

struct Bar {
  int dimension = 0;
  Rational birth;
  std::optional<Rational> death;  // nullopt: essential
  bool essential() const { return !death.has_value(); }
};

/// Persistence of the lower-star filtration. Bars of zero length are dropped,
/// so every stored bar is alive on a nonempty interval [birth, death).
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  PersistenceDiagram(std::vector<Bar> bars, std::vector<std::size_t> total_betti);

  /// Sorted by (dimension, birth, death) with essential bars last.
  const std::vector<Bar>& bars() const { return bars_; }
  /// Betti numbers of the whole complex, indices 0..3.
  const std::vector<std::size_t>& total_betti() const { return total_betti_; }

  /// Number of bars with birth <= t < death in dimension p.
  std::size_t alive_count(int p, const Rational& t) const;
  std::vector<Rational> essential_births(int p) const;

 private:
  std::vector<Bar> bars_;
  std::vector<std::size_t> total_betti_;
};

/// Standard column reduction with clearing over filtration_order(c).
PersistenceDiagram persistence(const SymmetricComplex& c);

/// Rank of H_p(sublevel(t)) -> H_p(whole): essential bars born at or before t.
std::size_t essential_rank_at(const PersistenceDiagram& d, int p, const Rational& t);

/// One line per bar, "p birth death", `inf` for essential bars.
void write_diagram(std::ostream& out, const PersistenceDiagram& d);

}  // namespace krs

#endif  // KRSPEC_Z2ALGEBRA_HPP
