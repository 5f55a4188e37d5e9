#include "krspec/z2algebra.hpp"

#include <algorithm>
#include <ostream>

namespace krs {

void add_into(Z2Column& target, const Z2Column& source) {
  Z2Column out;
  out.reserve(target.size() + source.size());
  auto a = target.begin();
  auto b = source.begin();
  while (a != target.end() && b != source.end()) {
    if (*a < *b) {
      out.push_back(*a++);
    } else if (*b < *a) {
      out.push_back(*b++);
    } else {
      ++a;
      ++b;
    }
  }
  out.insert(out.end(), a, target.end());
  out.insert(out.end(), b, source.end());
  target.swap(out);
}

void BitMatrix::set_column(std::size_t j, Z2Column entries) {
  std::sort(entries.begin(), entries.end());
  Z2Column cleaned;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t k = i;
    while (k < entries.size() && entries[k] == entries[i]) ++k;
    if ((k - i) % 2 == 1) cleaned.push_back(entries[i]);
    i = k;
  }
  columns_[j] = std::move(cleaned);
}

Z2Column ColumnReducer::reduce(Z2Column column) const {
  while (!column.empty()) {
    std::uint32_t pivot = pivot_of_row_[column.back()];
    if (pivot == kNone) break;
    add_into(column, stored_[pivot]);
  }
  return column;
}

bool ColumnReducer::insert(Z2Column column) {
  column = reduce(std::move(column));
  if (column.empty()) return false;
  pivot_of_row_[column.back()] = static_cast<std::uint32_t>(stored_.size());
  stored_.push_back(std::move(column));
  return true;
}

std::size_t rank(const BitMatrix& m) {
  ColumnReducer reducer(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) reducer.insert(m.column(j));
  return reducer.rank();
}

bool in_column_span(const BitMatrix& m, const Z2Column& target) {
  ColumnReducer reducer(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) reducer.insert(m.column(j));
  return reducer.reduce(target).empty();
}

namespace {

/// Local row numbering of the p-simplices of `sub`.
std::vector<std::uint32_t> local_index(const SubcomplexRef& sub, const std::vector<SimplexIndex>& cells) {
  std::vector<std::uint32_t> local(sub.parent().simplex_count(), ~std::uint32_t{0});
  for (std::uint32_t i = 0; i < cells.size(); ++i) local[cells[i]] = i;
  return local;
}

}  // namespace

BitMatrix boundary_matrix(const SubcomplexRef& sub, int p) {
  const auto& c = sub.parent();
  auto cols = sub.of_dimension(p);
  auto rows = sub.of_dimension(p - 1);
  BitMatrix m(rows.size(), cols.size());
  if (p <= 0) return m;
  auto local = local_index(sub, rows);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    Z2Column col;
    for (SimplexIndex f : c.boundary(cols[j])) col.push_back(local[f]);
    m.set_column(j, std::move(col));
  }
  return m;
}

std::size_t betti(const SubcomplexRef& sub, int p) {
  if (p < 0) return 0;
  std::size_t cells = sub.count(p);
  if (cells == 0) return 0;
  std::size_t rank_in = p > 0 ? rank(boundary_matrix(sub, p)) : 0;
  std::size_t rank_out = rank(boundary_matrix(sub, p + 1));
  return cells - rank_in - rank_out;
}

CochainClass covering_class(const SymmetricComplex& c) {
  CochainClass w;
  w.degree = 1;
  auto [b, e] = c.dimension_range(1);
  for (SimplexIndex s = b; s < e; ++s) {
    if (c.cocycle(s)) w.support.push_back(s);
  }
  return w;
}

CochainClass cup_power(const SubcomplexRef& sub, const CochainClass& w, int p) {
  CochainClass out;
  out.degree = p;
  const auto& c = sub.parent();
  if (p == 0) {
    out.support = sub.of_dimension(0);
    return out;
  }
  std::vector<std::uint8_t> on(c.simplex_count(), 0);
  for (SimplexIndex s : w.support) on[s] = 1;
  for (SimplexIndex s : sub.of_dimension(p)) {
    const Simplex& simplex = c.simplex(s);
    bool value = true;
    for (std::size_t i = 0; i + 1 < simplex.size() && value; ++i) {
      SimplexIndex e = c.find(Simplex{simplex[i], simplex[i + 1]});
      value = e != kNoSimplex && on[e];
    }
    if (value) out.support.push_back(s);
  }
  return out;
}

bool is_coboundary(const SubcomplexRef& sub, const CochainClass& z) {
  const auto& c = sub.parent();
  const int p = z.degree;
  auto targets = sub.of_dimension(p);
  auto local = local_index(sub, targets);
  Z2Column rhs;
  for (SimplexIndex s : z.support) {
    if (sub.contains(s)) rhs.push_back(local[s]);
  }
  std::sort(rhs.begin(), rhs.end());
  if (rhs.empty()) return true;
  if (p == 0) return false;

  // Columns of delta: for each (p-1)-simplex of sub, its p-cofaces in sub.
  ColumnReducer reducer(targets.size());
  for (SimplexIndex f : sub.of_dimension(p - 1)) {
    Z2Column col;
    for (SimplexIndex s : c.cofaces(f)) {
      if (sub.contains(s)) col.push_back(local[s]);
    }
    std::sort(col.begin(), col.end());
    reducer.insert(std::move(col));
  }
  return reducer.reduce(std::move(rhs)).empty();
}

bool cup_power_nonzero(const SubcomplexRef& sub, const CochainClass& w, int p) {
  if (p < 0) return false;
  if (p == 0) return !sub.is_empty();
  if (p > sub.dimension()) return false;
  CochainClass z = cup_power(sub, w, p);
  return !is_coboundary(sub, z);
}

// ----------------------------------------------------------- persistence

PersistenceDiagram::PersistenceDiagram(std::vector<Bar> bars, std::vector<std::size_t> total_betti)
    : bars_(std::move(bars)), total_betti_(std::move(total_betti)) {
  std::sort(bars_.begin(), bars_.end(), [](const Bar& a, const Bar& b) {
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.essential() || b.essential()) return !a.essential() && b.essential();
    return *a.death < *b.death;
  });
}

std::size_t PersistenceDiagram::alive_count(int p, const Rational& t) const {
  std::size_t n = 0;
  for (const Bar& bar : bars_) {
    if (bar.dimension == p && bar.birth <= t && (bar.essential() || t < *bar.death)) ++n;
  }
  return n;
}

std::vector<Rational> PersistenceDiagram::essential_births(int p) const {
  std::vector<Rational> out;
  for (const Bar& bar : bars_) {
    if (bar.dimension == p && bar.essential()) out.push_back(bar.birth);
  }
  return out;
}

PersistenceDiagram persistence(const SymmetricComplex& c) {
  const FiltrationOrder f = filtration_order(c);
  const std::size_t n = f.order.size();
  std::vector<Z2Column> columns(n);
  std::vector<std::uint8_t> cleared(n, 0);
  std::vector<std::uint32_t> paired_with(n, ~std::uint32_t{0});
  std::vector<std::uint32_t> pivot_owner(n, ~std::uint32_t{0});

  // Clearing: reduce the highest dimension first; every pivot row found there
  // is a negative column one dimension down and needs no reduction.
  for (int p = c.dimension(); p >= 1; --p) {
    std::fill(pivot_owner.begin(), pivot_owner.end(), ~std::uint32_t{0});
    for (std::uint32_t j = 0; j < n; ++j) {
      SimplexIndex s = f.order[j];
      if (c.simplex(s).dimension() != p || cleared[j]) continue;
      Z2Column col;
      for (SimplexIndex face : c.boundary(s)) col.push_back(f.position[face]);
      std::sort(col.begin(), col.end());
      while (!col.empty() && pivot_owner[col.back()] != ~std::uint32_t{0}) {
        add_into(col, columns[pivot_owner[col.back()]]);
      }
      if (col.empty()) continue;
      std::uint32_t low = col.back();
      pivot_owner[low] = j;
      paired_with[low] = j;
      paired_with[j] = low;
      cleared[low] = 1;
      columns[j] = std::move(col);
    }
  }

  std::vector<Bar> bars;
  std::vector<std::size_t> total(kMaxDimension + 1, 0);
  for (std::uint32_t j = 0; j < n; ++j) {
    SimplexIndex s = f.order[j];
    int p = c.simplex(s).dimension();
    std::uint32_t partner = paired_with[j];
    if (partner == ~std::uint32_t{0}) {
      ++total[p];
      bars.push_back({p, c.entry_value(s), std::nullopt});
    } else if (partner > j) {
      // j creates, partner destroys.
      SimplexIndex killer = f.order[partner];
      if (c.entry_level(killer) != c.entry_level(s))
        bars.push_back({p, c.entry_value(s), c.entry_value(killer)});
    }
  }
  return PersistenceDiagram(std::move(bars), std::move(total));
}

std::size_t essential_rank_at(const PersistenceDiagram& d, int p, const Rational& t) {
  std::size_t n = 0;
  for (const Bar& bar : d.bars()) {
    if (bar.dimension == p && bar.essential() && bar.birth <= t) ++n;
  }
  return n;
}

void write_diagram(std::ostream& out, const PersistenceDiagram& d) {
  for (const Bar& bar : d.bars()) {
    out << bar.dimension << " " << to_string(bar.birth) << " "
        << (bar.essential() ? std::string("inf") : to_string(*bar.death)) << "\n";
  }
}

}  // namespace krs
