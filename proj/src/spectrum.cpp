#include "krspec/spectrum.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace krs {

ParityUnionFind::ParityUnionFind(std::size_t n) : parent_(n), offset_(n, 0), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::pair<std::size_t, bool> ParityUnionFind::find(std::size_t x) {
  // Two passes: locate the root, then compress with accumulated parities.
  std::size_t root = x;
  bool parity = false;
  while (parent_[root] != root) {
    parity ^= offset_[root] != 0;
    root = parent_[root];
  }
  bool remaining = parity;
  while (parent_[x] != root && parent_[x] != x) {
    std::size_t next = parent_[x];
    bool step = offset_[x] != 0;
    parent_[x] = root;
    offset_[x] = remaining;
    remaining ^= step;
    x = next;
  }
  return {root, parity};
}

ParityUnionFind::Outcome ParityUnionFind::unite(std::size_t x, std::size_t y, bool parity) {
  auto [rx, px] = find(x);
  auto [ry, py] = find(y);
  if (rx == ry) return (px ^ py) == parity ? Outcome::EvenCycle : Outcome::OddCycle;
  if (rank_[rx] < rank_[ry]) {
    std::swap(rx, ry);
    std::swap(px, py);
  }
  parent_[ry] = rx;
  offset_[ry] = px ^ py ^ parity;
  if (rank_[rx] == rank_[ry]) ++rank_[rx];
  return Outcome::Merged;
}

std::pair<Rational, Rational> kr_extremes(const SymmetricComplex& c) {
  if (c.vertex_count() == 0) throw std::invalid_argument("empty complex");
  return {c.levels().front(), c.levels().back()};
}

OddCycle kr2_sweep(const SymmetricComplex& c) {
  const FiltrationOrder order = filtration_order(c);
  ParityUnionFind sets(c.vertex_count());
  // Spanning forest of the merges, used to close the witness cycle.
  std::vector<std::vector<std::pair<VertexIndex, SimplexIndex>>> forest(c.vertex_count());

  for (SimplexIndex s : order.order) {
    const Simplex& edge = c.simplex(s);
    if (edge.dimension() != 1) continue;
    bool w = c.cocycle(s);
    auto outcome = sets.unite(edge[0], edge[1], w);
    if (outcome == ParityUnionFind::Outcome::Merged) {
      forest[edge[0]].emplace_back(edge[1], s);
      forest[edge[1]].emplace_back(edge[0], s);
      continue;
    }
    if (outcome == ParityUnionFind::Outcome::EvenCycle) continue;

    // Tree path from edge[1] back to edge[0], then the closing edge.
    std::vector<SimplexIndex> via(c.vertex_count(), kNoSimplex);
    std::vector<VertexIndex> prev(c.vertex_count(), 0);
    std::vector<std::uint8_t> seen(c.vertex_count(), 0);
    std::deque<VertexIndex> queue{edge[0]};
    seen[edge[0]] = 1;
    while (!queue.empty() && !seen[edge[1]]) {
      VertexIndex v = queue.front();
      queue.pop_front();
      for (auto [u, e] : forest[v]) {
        if (seen[u]) continue;
        seen[u] = 1;
        prev[u] = v;
        via[u] = e;
        queue.push_back(u);
      }
    }
    OddCycle cycle;
    cycle.level = c.entry_value(s);
    auto push = [&](SimplexIndex e) {
      const Simplex& es = c.simplex(e);
      cycle.edges.push_back({c.vertex_id(es[0]), c.vertex_id(es[1]), c.cocycle(e)});
    };
    push(s);
    for (VertexIndex v = edge[1]; v != edge[0]; v = prev[v]) push(via[v]);
    return cycle;
  }
  throw TrivialCoverError("no cycle with odd w-holonomy: the double cover is trivial");
}

std::size_t index_of(const SubcomplexRef& sub, const CochainClass& w) {
  if (sub.is_empty()) return 0;
  std::size_t index = 1;
  // Powers of a class that vanish once stay zero, so stop at the first zero.
  for (int p = 1; p <= sub.dimension(); ++p) {
    if (!cup_power_nonzero(sub, w, p)) break;
    index = static_cast<std::size_t>(p) + 1;
  }
  return index;
}

SpectrumReport index_spectrum(const SymmetricComplex& c, std::size_t k_max) {
  SpectrumReport report;
  std::tie(report.kr_min, report.kr_max) = kr_extremes(c);
  if (k_max == 0) k_max = static_cast<std::size_t>(c.dimension() + 1);

  try {
    report.kr2 = kr2_sweep(c);
  } catch (const TrivialCoverError&) {
    report.kr2.reset();
  }

  const CochainClass w = covering_class(c);
  const LevelIndex level_count = static_cast<LevelIndex>(c.levels().size());
  std::vector<std::optional<std::size_t>> cache(level_count);
  auto index_at = [&](LevelIndex level) {
    if (!cache[level]) cache[level] = index_of(sublevel_at(c, level), w);
    return *cache[level];
  };

  // The index is monotone along the sublevel sequence, so each threshold is
  // found by bisection; later k start where the previous one stopped.
  LevelIndex lo = 0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (index_at(level_count - 1) < k) {
      report.index_values.emplace_back(std::nullopt);
      continue;
    }
    LevelIndex a = lo;
    LevelIndex b = level_count - 1;
    while (a < b) {
      LevelIndex mid = a + (b - a) / 2;
      if (index_at(mid) >= k) {
        b = mid;
      } else {
        a = mid + 1;
      }
    }
    report.index_values.emplace_back(c.levels()[a]);
    lo = a;
  }

  bool first_ok = !report.index_values.empty() && report.index_values[0] == report.kr_min;
  bool second_ok = true;
  if (report.index_values.size() >= 2) {
    const auto& iv2 = report.index_values[1];
    second_ok = report.kr2 ? (iv2 && *iv2 == report.kr2->level) : !iv2.has_value();
  }
  report.cross_check_ok = first_ok && second_ok;
  return report;
}

}  // namespace krs
