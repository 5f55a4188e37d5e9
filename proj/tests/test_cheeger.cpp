#include <doctest.h>

#include <fstream>
#include <sstream>

#include "krspec/cheeger.hpp"
#include "support.hpp"

using namespace krs;
using testsupport::rng;

namespace {

WeightedGraph load_graph(const std::string& name) {
  std::ifstream in(testsupport::fixture(name));
  return read_graph(in, name);
}

GraphFunction fn(std::initializer_list<Rational> v) { return GraphFunction{std::vector<Rational>(v)}; }

WeightedGraph c4() { return load_graph("c4.graph"); }

/// Random connected graph: a random spanning tree plus extra edges, with
/// random rational measures and weights.
WeightedGraph random_graph(std::size_t n) {
  std::uniform_int_distribution<long> w(1, 9);
  std::vector<WeightedGraph::Edge> edges;
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t v = 1; v < n; ++v) {
    std::size_t u = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng());
    edges.push_back({u, v, Rational(w(rng()), w(rng()))});
    used.insert({u, v});
  }
  std::bernoulli_distribution extra(0.3);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!used.count({a, b}) && extra(rng())) edges.push_back({a, b, Rational(w(rng()), w(rng()))});
    }
  }
  std::vector<Rational> m;
  Rational total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    m.push_back(Rational(w(rng())));
    total += m.back();
  }
  for (auto& x : m) x /= total;
  return WeightedGraph(m, edges);
}

/// Random non-constant function with 0 as a median and unit L1 norm.
GraphFunction random_median_zero(const WeightedGraph& g) {
  std::uniform_int_distribution<long> d(-6, 6);
  for (;;) {
    GraphFunction u;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) u.values.push_back(Rational(d(rng()), 3));
    if (u.is_constant()) continue;
    auto [lo, hi] = median_interval(g, u);
    Rational shift = lo;
    for (auto& x : u.values) x -= shift;
    Rational norm = l1_norm(g, u);
    if (norm == 0) continue;
    for (auto& x : u.values) x /= norm;
    return u;
  }
}

Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational deviation(const WeightedGraph& g, const GraphFunction& u, const Rational& c) {
  Rational s = 0;
  for (std::size_t v = 0; v < u.size(); ++v) s += g.measure(v) * abs_value(u[v] - c);
  return s;
}

/// Independent enumeration of all nonempty proper subsets.
Rational oracle_h1(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::optional<Rational> best;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    Rational in = 0, cut = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask >> v & 1) in += g.measure(v);
    }
    for (const auto& e : g.edges()) {
      if ((mask >> e.u & 1) != (mask >> e.v & 1)) cut += e.weight;
    }
    Rational r = cut / std::min(in, Rational(1 - in));
    if (!best || r < *best) best = r;
  }
  return *best;
}

/// tv(u) / min_c sum m|u - c|; the minimum of a convex piecewise-linear
/// function is attained at a breakpoint, i.e. at a value of u.
Rational energy_about_median(const WeightedGraph& g, const GraphFunction& u) {
  std::optional<Rational> best;
  for (const auto& c : u.values) {
    Rational d = deviation(g, u, c);
    if (!best || d < *best) best = d;
  }
  return tv(g, u) / *best;
}

}  // namespace

TEST_CASE("graph validation") {
  using E = WeightedGraph::Edge;
  std::vector<Rational> half{Rational(1, 2), Rational(1, 2)};
  CHECK_NOTHROW(WeightedGraph(half, {E{0, 1, 1}}));
  CHECK_THROWS_WITH(WeightedGraph(half, {}), doctest::Contains("not connected"));
  CHECK_THROWS_WITH(WeightedGraph(half, {E{0, 0, 1}, E{0, 1, 1}}), doctest::Contains("self-loop"));
  CHECK_THROWS(WeightedGraph(half, {E{0, 1, 0}}));
  CHECK_THROWS(WeightedGraph({Rational(1, 2), Rational(1, 3)}, {E{0, 1, 1}}));
  CHECK_THROWS(WeightedGraph({Rational(3, 2), Rational(-1, 2)}, {E{0, 1, 1}}));
}

TEST_CASE("total variation examples") {
  WeightedGraph g = c4();
  CHECK(tv(g, fn({3, 3, 3, 3})) == 0);
  CHECK(tv(g, fn({2, -2, 0, 0})) == 8);
  CHECK(tv(load_graph("k3.graph"), fn({1, 0, 0})) == 2);
}

TEST_CASE("median interval examples") {
  WeightedGraph g({Rational(1, 2), Rational(1, 4), Rational(1, 4)}, {{0, 1, 1}, {1, 2, 1}});
  CHECK(median_interval(g, fn({-1, 2, 3})) == std::pair<Rational, Rational>{-1, 2});
  CHECK(median_interval(g, fn({7, 7, 7})) == std::pair<Rational, Rational>{7, 7});
  WeightedGraph two({Rational(1, 2), Rational(1, 2)}, {{0, 1, 1}});
  CHECK(median_interval(two, fn({0, 1})) == std::pair<Rational, Rational>{0, 1});
}

TEST_CASE("Cheeger constants of the corpus graphs") {
  CutResult a = cheeger_brute(c4());
  CHECK(a.value == 4);
  CHECK(std::count(a.subset.begin(), a.subset.end(), true) == 2);
  CHECK(set_ratio(c4(), a.subset) == 4);

  CutResult b = cheeger_brute(load_graph("k3.graph"));
  CHECK(b.value == 6);
  CHECK(std::count(b.subset.begin(), b.subset.end(), true) == 1);

  CutResult c = cheeger_brute(load_graph("bridged.graph"));
  CHECK(c.value == 2);
  CHECK(std::count(c.subset.begin(), c.subset.end(), true) == 3);
}

TEST_CASE("brute force refuses large graphs") {
  std::vector<std::pair<std::size_t, std::size_t>> path;
  for (std::size_t v = 0; v + 1 < 25; ++v) path.push_back({v, v + 1});
  CHECK_THROWS_AS(cheeger_brute(WeightedGraph::uniform(25, path)), std::invalid_argument);
}

TEST_CASE("brute force and indicator minimum agree with an independent enumeration") {
  for (int trial = 0; trial < 40; ++trial) {
    WeightedGraph g = random_graph(2 + trial % 8);
    Rational h = oracle_h1(g);
    CutResult brute = cheeger_brute(g);
    CHECK(brute.value == h);
    CHECK(set_ratio(g, brute.subset) == h);
    CutResult ind = indicator_minimum(g);
    CHECK(ind.value == h);
  }
}

TEST_CASE("function bound examples") {
  WeightedGraph g = c4();
  FunctionBound pair = cheeger_function_bound(g, fn({2, 2, 0, 0}));
  CHECK(pair.energy == 4);
  CHECK(pair.rounded.value == 4);
  CHECK(pair.rounded.subset == VertexSet{true, true, false, false});

  FunctionBound u = cheeger_function_bound(g, fn({2, -2, 0, 0}));
  CHECK(u.energy == 8);
  CHECK(u.median_l1 == 1);
  CHECK(u.rounded.value <= 8);

  WeightedGraph k3 = load_graph("k3.graph");
  CutResult best = cheeger_brute(k3);
  GraphFunction split;
  for (bool in : best.subset) split.values.push_back(in ? Rational(1) : Rational(-1));
  CHECK(cheeger_function_bound(k3, split).energy == best.value);

  CHECK_THROWS_AS(cheeger_function_bound(g, fn({1, 1, 1, 1})), std::invalid_argument);
}

TEST_CASE("random functions: lower bound, co-area rounding, median minimization") {
  for (int trial = 0; trial < 60; ++trial) {
    WeightedGraph g = random_graph(3 + trial % 6);
    Rational h = cheeger_brute(g).value;
    GraphFunction u = random_median_zero(g);
    CHECK(l1_norm(g, u) == 1);
    CHECK(is_median(g, u, Rational(0)));
    CHECK(tv(g, u) >= h);
    FunctionBound b = cheeger_function_bound(g, u);
    CHECK(b.rounded.value <= b.energy);
    CHECK(b.rounded.value >= h);

    // Grid scan of c -> sum m|u - c|: minimal exactly on the median interval.
    auto [lo, hi] = median_interval(g, u);
    Rational best = deviation(g, u, lo);
    CHECK(deviation(g, u, hi) == best);
    CHECK(deviation(g, u, (lo + hi) / 2) == best);
    for (int i = -40; i <= 40; ++i) {
      Rational c(i, 10);
      Rational d = deviation(g, u, c);
      CHECK(d >= best);
      if (c < lo || c > hi) CHECK(d > best);
      else CHECK(d == best);
    }
  }
}

TEST_CASE("non-constant and median-zero characterizations give the same constant") {
  for (int trial = 0; trial < 40; ++trial) {
    WeightedGraph g = random_graph(2 + trial % 7);
    CutResult best = cheeger_brute(g);
    std::uniform_int_distribution<long> d(-12, 12);
    std::optional<Rational> smallest;
    for (int k = 0; k < 30; ++k) {
      GraphFunction u;
      for (std::size_t v = 0; v < g.vertex_count(); ++v) u.values.push_back(Rational(d(testsupport::rng()), 3));
      if (u.is_constant()) continue;
      // Shifting to a median and scaling gives a median-zero unit function
      // with the same energy.
      Rational e = energy_about_median(g, u);
      GraphFunction w = u;
      Rational m = median_interval(g, u).first;
      for (auto& x : w.values) x -= m;
      Rational norm = l1_norm(g, w);
      for (auto& x : w.values) x /= norm;
      CHECK(is_median(g, w, Rational(0)));
      CHECK(tv(g, w) == e);
      CHECK(e >= best.value);
      if (!smallest || e < *smallest) smallest = e;
    }
    // The indicator of the optimal set is non-constant and attains h1.
    GraphFunction ind;
    for (bool in : best.subset) ind.values.push_back(in ? Rational(1) : Rational(0));
    CHECK(energy_about_median(g, ind) == best.value);
  }
}

TEST_CASE("tan loop stays below the total variation and extracts a median") {
  WeightedGraph g = c4();
  FunctionPath path = tan_loop(g, fn({Rational(2), Rational(-2), 0, 0}), 21);
  REQUIRE(path.size() >= 3);
  CHECK(path.front().values == std::vector<Rational>(4, Rational(-1)));
  CHECK(path.back().values == std::vector<Rational>(4, Rational(1)));
  for (const auto& f : path) {
    CHECK(l1_norm(g, f) == 1);
    CHECK(tv(g, f) <= 8);
  }
  MedianExtraction m = path_median_extract(g, path);
  CHECK(m.zero_is_median);
  CHECK(path[m.index].values == std::vector<Rational>{2, -2, 0, 0});

  FunctionPath pair = tan_loop(g, fn({2, 2, 0, 0}), 8);
  for (const auto& f : pair) CHECK(tv(g, f) <= 4);

  CHECK_THROWS_WITH(tan_loop(g, fn({Rational(4, 3), Rational(4, 3), Rational(4, 3), 0}), 9), doctest::Contains("median"));
}

TEST_CASE("median extraction on hand-made paths") {
  WeightedGraph g = c4();
  FunctionPath zero(3, fn({0, 0, 0, 0}));
  MedianExtraction a = path_median_extract(g, zero);
  CHECK(a.index == 2);
  CHECK(a.zero_is_median);

  FunctionPath jump{fn({-1, -1, -1, -1}), fn({1, 1, 1, 1})};
  MedianExtraction b = path_median_extract(g, jump);
  CHECK(b.index == 0);
  CHECK_FALSE(b.zero_is_median);

  FunctionPath flipped{fn({1, 1, 1, 1}), fn({-1, -1, -1, -1})};
  CHECK(path_median_extract(g, flipped).negated);
  CHECK_THROWS(path_median_extract(g, FunctionPath{}));
}

TEST_CASE("tan loops of random functions always yield a median") {
  for (int trial = 0; trial < 40; ++trial) {
    WeightedGraph g = random_graph(3 + trial % 5);
    GraphFunction u = random_median_zero(g);
    FunctionPath path = tan_loop(g, u, 5 + 2 * (trial % 4));
    Rational t = tv(g, u);
    for (const auto& f : path) CHECK(tv(g, f) / l1_norm(g, f) <= t);
    CHECK(path_median_extract(g, path).zero_is_median);
  }
}

TEST_CASE("graph and function files") {
  WeightedGraph g = load_graph("bridged.graph");
  std::ostringstream out;
  write_graph(out, g);
  std::istringstream in(out.str());
  WeightedGraph back = read_graph(in);
  CHECK(back.measures() == g.measures());
  CHECK(back.edges().size() == g.edges().size());

  std::istringstream missing("n 2\nm 0 1/2\ne 0 1 1\n");
  CHECK_THROWS_WITH_AS(read_graph(missing, "g"), doctest::Contains("no measure for vertex 1"), ParseError);
  std::istringstream bad("n 2\nm 0 1/2\nm 1 x\n");
  CHECK_THROWS_WITH_AS(read_graph(bad, "g"), doctest::Contains("g:3:"), ParseError);

  GraphFunction u = fn({Rational(1, 3), -2, Rational(5, 4), 0});
  std::ostringstream fo;
  write_function(fo, u);
  std::istringstream fi(fo.str());
  CHECK(read_function(fi, 4).values == u.values);
  std::istringstream short_fn("u 0 1\n");
  CHECK_THROWS(read_function(short_fn, 2));
}
