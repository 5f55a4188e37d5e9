#include "krspec/cheeger.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "krspec/symcx.hpp"

namespace krs {

namespace {

const Rational kHalf(1, 2);

Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

}  // namespace

WeightedGraph::WeightedGraph(std::vector<Rational> measure, std::vector<Edge> edges)
    : measure_(std::move(measure)), edges_(std::move(edges)) {
  const std::size_t n = measure_.size();
  if (n == 0) throw std::invalid_argument("graph has no vertices");
  Rational total = 0;
  for (const auto& m : measure_) {
    if (m <= 0) throw std::invalid_argument("vertex measures must be positive");
    total += m;
  }
  if (total != 1) throw std::invalid_argument("vertex measures sum to " + to_string(total) + ", not 1");

  std::vector<std::vector<std::size_t>> adj(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges_) {
    if (e.u >= n || e.v >= n) throw std::invalid_argument("edge names a missing vertex");
    if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    if (e.weight <= 0) throw std::invalid_argument("edge weights must be positive");
    if (!seen.insert(std::minmax(e.u, e.v)).second)
      throw std::invalid_argument("duplicate edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> reached(n, false);
  std::deque<std::size_t> queue{0};
  reached[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t u : adj[v]) {
      if (!reached[u]) {
        reached[u] = true;
        ++count;
        queue.push_back(u);
      }
    }
  }
  if (count != n) throw std::invalid_argument("graph is not connected");
}

WeightedGraph WeightedGraph::uniform(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<Edge> es;
  for (auto [u, v] : edges) es.push_back({u, v, Rational(1)});
  return WeightedGraph(std::vector<Rational>(n, Rational(1, static_cast<long>(n))), std::move(es));
}

bool GraphFunction::is_constant() const {
  return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

namespace {

void check_size(const WeightedGraph& g, const GraphFunction& u) {
  if (u.size() != g.vertex_count()) throw std::invalid_argument("function size does not match graph");
}

Rational measure_where(const WeightedGraph& g, const GraphFunction& u, auto&& predicate) {
  Rational total = 0;
  for (std::size_t v = 0; v < u.size(); ++v) {
    if (predicate(u[v])) total += g.measure(v);
  }
  return total;
}

GraphFunction shifted(const GraphFunction& u, const Rational& c) {
  GraphFunction out = u;
  for (auto& x : out.values) x += c;
  return out;
}

GraphFunction scaled(const GraphFunction& u, const Rational& s) {
  GraphFunction out = u;
  for (auto& x : out.values) x *= s;
  return out;
}

}  // namespace

Rational tv(const WeightedGraph& g, const GraphFunction& u) {
  check_size(g, u);
  Rational total = 0;
  for (const auto& e : g.edges()) total += e.weight * abs_value(u[e.u] - u[e.v]);
  return total;
}

Rational l1_norm(const WeightedGraph& g, const GraphFunction& u) {
  check_size(g, u);
  Rational total = 0;
  for (std::size_t v = 0; v < u.size(); ++v) total += g.measure(v) * abs_value(u[v]);
  return total;
}

Rational energy(const WeightedGraph& g, const GraphFunction& u) {
  Rational norm = l1_norm(g, u);
  if (norm == 0) throw std::invalid_argument("energy of the zero function");
  return tv(g, u) / norm;
}

std::pair<Rational, Rational> median_interval(const WeightedGraph& g, const GraphFunction& u) {
  check_size(g, u);
  std::vector<Rational> sorted = u.values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  // Both bounds are attained at values of u: mu{u <= c} only jumps there.
  std::optional<Rational> lo;
  for (const auto& c : sorted) {
    if (measure_where(g, u, [&](const Rational& x) { return x <= c; }) >= kHalf) {
      lo = c;
      break;
    }
  }
  std::optional<Rational> hi;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (measure_where(g, u, [&](const Rational& x) { return x >= *it; }) >= kHalf) {
      hi = *it;
      break;
    }
  }
  return {*lo, *hi};
}

bool is_median(const WeightedGraph& g, const GraphFunction& u, const Rational& m) {
  return measure_where(g, u, [&](const Rational& x) { return x <= m; }) >= kHalf &&
         measure_where(g, u, [&](const Rational& x) { return x >= m; }) >= kHalf;
}

Rational set_ratio(const WeightedGraph& g, const VertexSet& subset) {
  if (subset.size() != g.vertex_count()) throw std::invalid_argument("subset size does not match graph");
  Rational inside = 0;
  for (std::size_t v = 0; v < subset.size(); ++v) {
    if (subset[v]) inside += g.measure(v);
  }
  if (inside == 0 || inside == 1) throw std::invalid_argument("subset must be nonempty and proper");
  Rational cut = 0;
  for (const auto& e : g.edges()) {
    if (subset[e.u] != subset[e.v]) cut += e.weight;
  }
  return cut / std::min(inside, Rational(1 - inside));
}

namespace {

using boost::multiprecision::mpz_int;

mpz_int lcm_of_denominators(const auto& values) {
  mpz_int l = 1;
  for (const Rational& x : values) {
    mpz_int d = denominator(x);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  return l;
}

/// Subset with vertex n-1 on the outside; returns the smaller-measure side.
VertexSet side_of(std::uint64_t mask, std::size_t n, const WeightedGraph& g) {
  VertexSet subset(n, false);
  Rational inside = 0;
  for (std::size_t v = 0; v + 1 < n; ++v) {
    if (mask >> v & 1u) {
      subset[v] = true;
      inside += g.measure(v);
    }
  }
  if (inside > kHalf) subset.flip();
  return subset;
}

}  // namespace

CutResult cheeger_brute(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kBruteForceLimit)
    throw std::invalid_argument("cheeger_brute: " + std::to_string(n) + " vertices exceeds the limit of " +
                                std::to_string(kBruteForceLimit));
  if (n < 2) throw std::invalid_argument("cheeger_brute: need at least two vertices");

  // Scale weights and measures to integers; the ratio changes by a common
  // positive factor, so comparisons stay exact.
  std::vector<Rational> weights;
  for (const auto& e : g.edges()) weights.push_back(e.weight);
  mpz_int weight_scale = lcm_of_denominators(weights);
  mpz_int measure_scale = lcm_of_denominators(g.measures());
  const mpz_int limit = mpz_int(1) << 60;

  std::vector<std::int64_t> w_int;
  mpz_int w_total = 0;
  for (const auto& w : weights) {
    mpz_int x = numerator(w) * (weight_scale / denominator(w));
    w_total += x;
    w_int.push_back(x.convert_to<std::int64_t>());
  }
  std::vector<std::int64_t> m_int;
  for (const auto& m : g.measures()) m_int.push_back((numerator(m) * (measure_scale / denominator(m))).convert_to<std::int64_t>());
  const bool fits = w_total < limit && measure_scale < limit;

  std::uint64_t best_mask = 0;
  std::optional<Rational> best_rational;
  __int128 best_cut = 0;
  __int128 best_measure = 1;
  bool have_best = false;
  const std::int64_t total_measure = fits ? measure_scale.convert_to<std::int64_t>() : 0;

  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    if (fits) {
      std::int64_t inside = 0;
      for (std::size_t v = 0; v + 1 < n; ++v) {
        if (mask >> v & 1u) inside += m_int[v];
      }
      std::int64_t cut = 0;
      for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        bool a = e.u + 1 < n && (mask >> e.u & 1u);
        bool b = e.v + 1 < n && (mask >> e.v & 1u);
        if (a != b) cut += w_int[i];
      }
      std::int64_t smaller = std::min(inside, total_measure - inside);
      // cut / smaller < best_cut / best_measure
      if (!have_best || static_cast<__int128>(cut) * best_measure < best_cut * static_cast<__int128>(smaller)) {
        best_cut = cut;
        best_measure = smaller;
        best_mask = mask;
        have_best = true;
      }
    } else {
      Rational r = set_ratio(g, side_of(mask, n, g));
      if (!best_rational || r < *best_rational) {
        best_rational = r;
        best_mask = mask;
      }
    }
  }

  CutResult result;
  result.subset = side_of(best_mask, n, g);
  result.value = set_ratio(g, result.subset);
  return result;
}

CutResult indicator_minimum(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kBruteForceLimit) throw std::invalid_argument("indicator_minimum: too many vertices");
  std::optional<CutResult> best;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    GraphFunction u;
    Rational inside = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask >> v & 1u) inside += g.measure(v);
    }
    for (std::size_t v = 0; v < n; ++v) u.values.push_back((mask >> v & 1u) ? Rational(1 / inside) : Rational(0));
    if (!is_median(g, u, Rational(0))) continue;
    Rational value = tv(g, u);
    if (!best || value < best->value) {
      VertexSet subset(n);
      for (std::size_t v = 0; v < n; ++v) subset[v] = mask >> v & 1u;
      best = CutResult{value, subset};
    }
  }
  return *best;
}

FunctionBound cheeger_function_bound(const WeightedGraph& g, const GraphFunction& u) {
  check_size(g, u);
  if (u.is_constant()) throw std::invalid_argument("cheeger_function_bound: u is constant");
  FunctionBound bound;
  auto [lo, hi] = median_interval(g, u);
  bound.median_l1 = l1_norm(g, shifted(u, Rational(-lo)));
  bound.energy = tv(g, u) / bound.median_l1;

  std::vector<Rational> levels = u.values;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::optional<CutResult> best;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    VertexSet above(u.size());
    for (std::size_t v = 0; v < u.size(); ++v) above[v] = u[v] > levels[i];
    Rational r = set_ratio(g, above);
    if (!best || r < best->value) best = CutResult{r, above};
  }
  bound.rounded = *best;
  return bound;
}

FunctionPath tan_loop(const WeightedGraph& g, const GraphFunction& u, std::size_t samples) {
  check_size(g, u);
  if (l1_norm(g, u) != 1) throw std::invalid_argument("tan_loop: u must have unit L1 norm");
  if (!is_median(g, u, Rational(0))) throw std::invalid_argument("tan_loop: median precondition violated (0 is not a median of u)");
  if (samples < 3) samples = 3;
  if (samples % 2 == 0) ++samples;  // keeps c = 0 on the grid

  Rational reach = 0;
  for (const auto& x : u.values) reach = std::max(reach, abs_value(x));
  reach = 2 * reach + 1;

  const std::size_t n = u.size();
  FunctionPath path;
  path.push_back(GraphFunction{std::vector<Rational>(n, Rational(-1))});
  const auto steps = static_cast<long>(samples - 1);
  for (long i = 0; i <= steps; ++i) {
    Rational c = -reach + 2 * reach * Rational(i, steps);
    GraphFunction f = shifted(u, c);
    path.push_back(scaled(f, Rational(1 / l1_norm(g, f))));
  }
  path.push_back(GraphFunction{std::vector<Rational>(n, Rational(1))});
  return path;
}

MedianExtraction path_median_extract(const WeightedGraph& g, const FunctionPath& path) {
  if (path.empty()) throw std::invalid_argument("path_median_extract: empty path");
  auto below = [&](const GraphFunction& f) {
    return measure_where(g, f, [](const Rational& x) { return x <= 0; }) >= kHalf;
  };
  MedianExtraction out;
  out.negated = !below(path.front());
  FunctionPath flipped;
  const FunctionPath* p = &path;
  if (out.negated) {
    for (const auto& f : path) flipped.push_back(scaled(f, Rational(-1)));
    p = &flipped;
  }
  for (std::size_t i = 0; i < p->size(); ++i) {
    check_size(g, (*p)[i]);
    if (below((*p)[i])) out.index = i;
  }
  out.zero_is_median = is_median(g, (*p)[out.index], Rational(0));
  return out;
}

// ------------------------------------------------------------------- I/O

namespace {

[[noreturn]] void graph_fail(const std::string& source, std::size_t line, const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

std::size_t parse_index(const std::string& token, const std::string& source, std::size_t line) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos || token.size() > 9)
    graph_fail(source, line, "invalid vertex index '" + token + "'");
  return std::stoul(token);
}

Rational parse_value(const std::string& token, const std::string& source, std::size_t line) {
  try {
    return parse_rational(token);
  } catch (const std::invalid_argument& e) {
    graph_fail(source, line, e.what());
  }
}

std::vector<std::vector<std::string>> tokenize(std::istream& in, std::vector<std::size_t>& lines) {
  std::vector<std::vector<std::string>> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    out.push_back(std::move(tok));
    lines.push_back(line_no);
  }
  return out;
}

}  // namespace

WeightedGraph read_graph(std::istream& in, const std::string& source) {
  std::vector<std::size_t> lines;
  auto records = tokenize(in, lines);
  std::optional<std::size_t> count;
  std::map<std::size_t, Rational> measures;
  std::vector<WeightedGraph::Edge> edges;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& tok = records[r];
    const std::size_t line = lines[r];
    if (tok[0] == "n") {
      if (count) graph_fail(source, line, "duplicate 'n' line");
      if (tok.size() != 2) graph_fail(source, line, "expected 'n <count>'");
      count = parse_index(tok[1], source, line);
    } else if (tok[0] == "m") {
      if (tok.size() != 3) graph_fail(source, line, "expected 'm <v> <measure>'");
      std::size_t v = parse_index(tok[1], source, line);
      if (!measures.emplace(v, parse_value(tok[2], source, line)).second)
        graph_fail(source, line, "duplicate measure for vertex " + tok[1]);
    } else if (tok[0] == "e") {
      if (tok.size() != 4) graph_fail(source, line, "expected 'e <u> <v> <weight>'");
      edges.push_back({parse_index(tok[1], source, line), parse_index(tok[2], source, line),
                       parse_value(tok[3], source, line)});
    } else {
      graph_fail(source, line, "unknown record '" + tok[0] + "'");
    }
  }
  if (!count) throw ParseError(source + ": missing 'n <count>' line");
  std::vector<Rational> m;
  for (std::size_t v = 0; v < *count; ++v) {
    auto it = measures.find(v);
    if (it == measures.end()) throw ParseError(source + ": no measure for vertex " + std::to_string(v));
    m.push_back(it->second);
  }
  if (measures.size() != *count) throw ParseError(source + ": measure given for a vertex beyond n");
  try {
    return WeightedGraph(std::move(m), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source + ": " + e.what());
  }
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << "n " << g.vertex_count() << "\n";
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out << "m " << v << " " << to_string(g.measure(v)) << "\n";
  for (const auto& e : g.edges()) out << "e " << e.u << " " << e.v << " " << to_string(e.weight) << "\n";
}

GraphFunction read_function(std::istream& in, std::size_t vertex_count, const std::string& source) {
  std::vector<std::size_t> lines;
  auto records = tokenize(in, lines);
  std::map<std::size_t, Rational> values;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& tok = records[r];
    if (tok[0] != "u" || tok.size() != 3) graph_fail(source, lines[r], "expected 'u <v> <value>'");
    std::size_t v = parse_index(tok[1], source, lines[r]);
    if (v >= vertex_count) graph_fail(source, lines[r], "vertex " + tok[1] + " outside the graph");
    if (!values.emplace(v, parse_value(tok[2], source, lines[r])).second)
      graph_fail(source, lines[r], "duplicate value for vertex " + tok[1]);
  }
  if (values.size() != vertex_count)
    throw ParseError(source + ": expected " + std::to_string(vertex_count) + " values, got " + std::to_string(values.size()));
  GraphFunction u;
  for (auto& [v, x] : values) u.values.push_back(x);
  return u;
}

void write_function(std::ostream& out, const GraphFunction& u) {
  for (std::size_t v = 0; v < u.size(); ++v) out << "u " << v << " " << to_string(u[v]) << "\n";
}

}  // namespace krs
