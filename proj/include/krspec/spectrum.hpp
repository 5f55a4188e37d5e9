#ifndef KRSPEC_SPECTRUM_HPP
#define KRSPEC_SPECTRUM_HPP

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "krspec/rational.hpp"
#include "krspec/symcx.hpp"
#include "krspec/z2algebra.hpp"

namespace krs {

/// Raised when an operation needs a nontrivial double cover and the cocycle
/// has no odd cycle.
class TrivialCoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Disjoint sets where every element stores its GF(2) offset to the root.
/// Joining two elements already in one set either agrees with the stored
/// offsets (an even cycle) or not (an odd cycle).
class ParityUnionFind {
 public:
  enum class Outcome { Merged, EvenCycle, OddCycle };

  explicit ParityUnionFind(std::size_t n);

  /// Root of x and the parity of the path from x to it.
  std::pair<std::size_t, bool> find(std::size_t x);
  /// Record that x and y differ by `parity`.
  Outcome unite(std::size_t x, std::size_t y, bool parity);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> offset_;
  std::vector<std::uint32_t> rank_;
};

struct WitnessEdge {
  VertexId a = 0;
  VertexId b = 0;
  bool w = false;
};

struct OddCycle {
  Rational level;
  /// Closed edge path in the quotient; the w-values sum to 1.
  std::vector<WitnessEdge> edges;
};

struct SpectrumReport {
  Rational kr_min;
  Rational kr_max;
  std::optional<OddCycle> kr2;
  /// iv_k for k = 1..k_max; nullopt means the index never reaches k.
  std::vector<std::optional<Rational>> index_values;
  /// iv_k bounds kr_k from above (cohomological index <= genus). Always set.
  bool index_is_upper_bound = true;
  /// iv_1 == kr_min and iv_2 == kr2 (both unreached when the cover is trivial).
  bool cross_check_ok = false;
};

/// (min f, max f). Throws std::invalid_argument on an empty complex.
std::pair<Rational, Rational> kr_extremes(const SymmetricComplex& c);

/// Least level at which the sublevel 1-skeleton has a cycle of odd
/// w-holonomy, with one such cycle. Throws TrivialCoverError if none exists.
OddCycle kr2_sweep(const SymmetricComplex& c);

/// 0 for the empty subcomplex, else 1 + max{p : [w]^p != 0 on sub}.
std::size_t index_of(const SubcomplexRef& sub, const CochainClass& w);

/// For k = 1..k_max the least level t with index_of(sublevel(t)) >= k.
/// k_max = 0 selects dimension + 1.
SpectrumReport index_spectrum(const SymmetricComplex& c, std::size_t k_max = 0);

}  // namespace krs

#endif  // KRSPEC_SPECTRUM_HPP
