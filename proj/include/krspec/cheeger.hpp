#ifndef KRSPEC_CHEEGER_HPP
#define KRSPEC_CHEEGER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "krspec/rational.hpp"

namespace krs {

/// Connected graph with positive vertex measures summing to one and
/// positive edge weights. All quantities are exact rationals.
class WeightedGraph {
 public:
  struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    Rational weight;
  };

  /// Throws std::invalid_argument if a measure or weight is not positive,
  /// measures do not sum to 1, an edge is a self-loop or names a missing
  /// vertex, or the graph is disconnected.
  WeightedGraph(std::vector<Rational> measure, std::vector<Edge> edges);

  std::size_t vertex_count() const { return measure_.size(); }
  const Rational& measure(std::size_t v) const { return measure_[v]; }
  const std::vector<Rational>& measures() const { return measure_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Unit weights and uniform measure.
  static WeightedGraph uniform(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

 private:
  std::vector<Rational> measure_;
  std::vector<Edge> edges_;
};

struct GraphFunction {
  std::vector<Rational> values;

  std::size_t size() const { return values.size(); }
  const Rational& operator[](std::size_t v) const { return values[v]; }
  bool is_constant() const;
};

/// Discrete curve of functions (the lift of a loop in projective space).
using FunctionPath = std::vector<GraphFunction>;

/// Vertex subset as a membership mask.
using VertexSet = std::vector<bool>;

/// sum_e w_e |u_i - u_j|.
Rational tv(const WeightedGraph& g, const GraphFunction& u);

/// sum_v m_v |u_v|.
Rational l1_norm(const WeightedGraph& g, const GraphFunction& u);

/// Normalised energy TV(u) / ||u||_1; zero for the zero function's class is
/// not defined, so u must be nonzero.
Rational energy(const WeightedGraph& g, const GraphFunction& u);

/// [lo, hi] = all m with mu{u <= m} >= 1/2 and mu{u >= m} >= 1/2.
std::pair<Rational, Rational> median_interval(const WeightedGraph& g, const GraphFunction& u);

bool is_median(const WeightedGraph& g, const GraphFunction& u, const Rational& m);

/// cut(A) / min(m(A), m(A^c)) for a nonempty proper subset.
Rational set_ratio(const WeightedGraph& g, const VertexSet& subset);

struct CutResult {
  Rational value;
  VertexSet subset;
};

inline constexpr std::size_t kBruteForceLimit = 24;

/// Exact minimum of set_ratio over all nonempty proper subsets. Throws
/// std::invalid_argument beyond kBruteForceLimit vertices.
CutResult cheeger_brute(const WeightedGraph& g);

/// Minimum of tv(u) over scaled indicators u = 1_A / m(A) that have median 0
/// and unit norm; an independent route to the Cheeger constant.
CutResult indicator_minimum(const WeightedGraph& g);

struct FunctionBound {
  Rational energy;       // tv(u) / min_c ||u - c||_1
  Rational median_l1;    // min_c ||u - c||_1, attained at any median
  CutResult rounded;     // best super-level set {u > t}
};

/// Throws std::invalid_argument for constant u.
FunctionBound cheeger_function_bound(const WeightedGraph& g, const GraphFunction& u);

/// The loop [c + u] for constants c on a grid from -C to C (C well beyond
/// max |u|), closed by the constant functions -1 and +1 at the ends. Every
/// member is scaled to unit L1 norm. Requires ||u||_1 = 1 and 0 a median.
FunctionPath tan_loop(const WeightedGraph& g, const GraphFunction& u, std::size_t samples);

struct MedianExtraction {
  std::size_t index = 0;
  /// 0 is a median of path[index]. Always true for continuous paths; a
  /// coarse discrete path may fail and is reported as such.
  bool zero_is_median = false;
  /// The path was negated to meet mu{path[0] <= 0} >= 1/2.
  bool negated = false;
};

/// Largest index s with mu{path[s] <= 0} >= 1/2. Throws on an empty path.
MedianExtraction path_median_extract(const WeightedGraph& g, const FunctionPath& path);

/// Graph format: `n <count>`, `m <v> <measure>`, `e <u> <v> <weight>`.
WeightedGraph read_graph(std::istream& in, const std::string& source = "<graph>");
void write_graph(std::ostream& out, const WeightedGraph& g);

/// Function format: `u <v> <value>`, one line per vertex.
GraphFunction read_function(std::istream& in, std::size_t vertex_count, const std::string& source = "<function>");
void write_function(std::ostream& out, const GraphFunction& u);

}  // namespace krs

#endif  // KRSPEC_CHEEGER_HPP
