#ifndef KRSPEC_SYMCX_HPP
#define KRSPEC_SYMCX_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "krspec/rational.hpp"

namespace krs {

using VertexId = std::uint32_t;     // id as written in input files
using VertexIndex = std::uint32_t;  // position in ascending-id order
using SimplexIndex = std::uint32_t;
using LevelIndex = std::uint32_t;   // rank among the distinct vertex values

inline constexpr SimplexIndex kNoSimplex = ~SimplexIndex{0};
inline constexpr int kMaxDimension = 3;

/// Error raised for malformed input files. The message carries the line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sorted set of at most four vertex indices. Ordered by dimension first,
/// then lexicographically, which is the order simplices are stored in.
class Simplex {
 public:
  Simplex() = default;
  Simplex(std::initializer_list<VertexIndex> vertices);
  explicit Simplex(std::span<const VertexIndex> vertices);

  int dimension() const { return static_cast<int>(size_) - 1; }
  std::size_t size() const { return size_; }
  VertexIndex operator[](std::size_t i) const { return vertices_[i]; }
  std::span<const VertexIndex> vertices() const { return {vertices_.data(), size_}; }
  bool contains(VertexIndex v) const;

  /// Face obtained by dropping the i-th vertex.
  Simplex facet(std::size_t i) const;

  std::strong_ordering operator<=>(const Simplex& other) const;
  bool operator==(const Simplex& other) const = default;

 private:
  std::array<VertexIndex, 4> vertices_{};
  std::uint8_t size_ = 0;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

struct VertexSpec {
  VertexId id = 0;
  Rational value;
};

struct CocycleEntry {
  VertexId a = 0;
  VertexId b = 0;
  bool value = false;
};

/// A finite quotient simplicial complex presenting a free Z/2-space through
/// a GF(2) edge labelling w (the covering cocycle), together with a vertex
/// function f. The double cover itself is never built.
///
/// Construction accepts arbitrary simplex lists (possibly not face-closed or
/// with duplicates) so that `validate` can report problems; every other
/// operation expects a complex that validates cleanly.
///
/// Immutable after construction.
class SymmetricComplex {
 public:
  SymmetricComplex() = default;

  /// Throws std::invalid_argument for structural errors that cannot be
  /// represented at all: duplicate vertex ids, simplices naming unknown
  /// vertices or repeating a vertex, dimension above 3, cocycle entries that
  /// do not name an edge of the complex.
  SymmetricComplex(std::vector<VertexSpec> vertices,
                   const std::vector<std::vector<VertexId>>& simplices,
                   const std::vector<CocycleEntry>& cocycle,
                   int declared_dimension = -1);

  /// Same, but `maximal` lists generating simplices whose faces are implied.
  static SymmetricComplex from_maximal(std::vector<VertexSpec> vertices,
                                       const std::vector<std::vector<VertexId>>& maximal,
                                       const std::vector<CocycleEntry>& cocycle,
                                       int declared_dimension = -1);

  std::size_t vertex_count() const { return ids_.size(); }
  VertexId vertex_id(VertexIndex v) const { return ids_[v]; }
  const Rational& value(VertexIndex v) const { return values_[v]; }
  std::optional<VertexIndex> find_vertex(VertexId id) const;

  std::size_t simplex_count() const { return simplices_.size(); }
  const Simplex& simplex(SimplexIndex s) const { return simplices_[s]; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  SimplexIndex find(const Simplex& s) const;
  /// Simplex indices of dimension p form a contiguous range.
  std::pair<SimplexIndex, SimplexIndex> dimension_range(int p) const;
  std::size_t count(int p) const;

  /// Largest dimension present, -1 if empty.
  int dimension() const { return dimension_; }
  int declared_dimension() const { return declared_dimension_; }

  /// Covering cocycle value on an edge (false for non-edges).
  bool cocycle(SimplexIndex edge) const { return cocycle_[edge] != 0; }
  bool cocycle(VertexIndex a, VertexIndex b) const;

  /// Indices of the codimension-one faces, kNoSimplex where a face is absent.
  std::span<const SimplexIndex> boundary(SimplexIndex s) const;
  std::span<const SimplexIndex> cofaces(SimplexIndex s) const;

  /// Distinct vertex values in increasing order.
  const std::vector<Rational>& levels() const { return levels_; }
  LevelIndex vertex_level(VertexIndex v) const { return vertex_level_[v]; }
  /// Lower-star entry: the largest level among the simplex's vertices.
  LevelIndex entry_level(SimplexIndex s) const { return entry_level_[s]; }
  const Rational& entry_value(SimplexIndex s) const { return levels_[entry_level_[s]]; }

  /// Simplices listed more than once at construction (kept once).
  const std::vector<Simplex>& duplicates() const { return duplicates_; }

  /// Human-readable "{3,5,7}" using file vertex ids.
  std::string describe(const Simplex& s) const;
  std::string describe(SimplexIndex s) const { return describe(simplices_[s]); }

  /// Copy with vertex values replaced (same ids, simplices and cocycle).
  SymmetricComplex with_values(const std::vector<Rational>& values) const;

 private:
  void build_indices();

  std::vector<VertexId> ids_;
  std::vector<Rational> values_;
  std::vector<Simplex> simplices_;
  std::unordered_map<Simplex, SimplexIndex, SimplexHash> index_;
  std::array<SimplexIndex, kMaxDimension + 2> dim_begin_{};
  std::vector<std::uint8_t> cocycle_;
  std::vector<SimplexIndex> boundary_;  // 4 slots per simplex
  std::vector<SimplexIndex> coface_offsets_;
  std::vector<SimplexIndex> cofaces_;
  std::vector<Rational> levels_;
  std::vector<LevelIndex> vertex_level_;
  std::vector<LevelIndex> entry_level_;
  std::vector<Simplex> duplicates_;
  int dimension_ = -1;
  int declared_dimension_ = -1;
};

/// A face-closed subset of the simplices of a parent complex. Holds a pointer
/// to the parent, which must outlive the reference.
class SubcomplexRef {
 public:
  SubcomplexRef() = default;
  /// Members are sorted and deduplicated; no closure is applied.
  SubcomplexRef(const SymmetricComplex& parent, std::vector<SimplexIndex> members);

  static SubcomplexRef empty(const SymmetricComplex& parent);
  static SubcomplexRef whole(const SymmetricComplex& parent);
  /// Smallest face-closed subcomplex containing the given simplices.
  static SubcomplexRef closure(const SymmetricComplex& parent, std::span<const SimplexIndex> generators);

  const SymmetricComplex& parent() const { return *parent_; }
  std::span<const SimplexIndex> members() const { return members_; }
  bool contains(SimplexIndex s) const { return mask_[s] != 0; }
  bool is_empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  std::size_t count(int p) const;
  std::vector<SimplexIndex> of_dimension(int p) const;
  int dimension() const;

  bool is_closed() const;
  bool is_subset_of(const SubcomplexRef& other) const;
  SubcomplexRef united_with(const SubcomplexRef& other) const;

  bool operator==(const SubcomplexRef& other) const {
    return parent_ == other.parent_ && members_ == other.members_;
  }

 private:
  const SymmetricComplex* parent_ = nullptr;
  std::vector<SimplexIndex> members_;
  std::vector<std::uint8_t> mask_;
};

/// Total order on simplices used for persistence: by entry level, then
/// dimension, then vertex ids. Faces always precede cofaces.
struct FiltrationOrder {
  std::vector<SimplexIndex> order;
  std::vector<std::uint32_t> position;  // inverse of `order`
};

FiltrationOrder filtration_order(const SymmetricComplex& c);

struct Violation {
  enum class Kind { FaceClosure, Cocycle, Duplicate, Dimension };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const SymmetricComplex& c);

/// All simplices whose entry value is at most t.
SubcomplexRef sublevel(const SymmetricComplex& c, const Rational& t);
/// Same, addressed by level rank.
SubcomplexRef sublevel_at(const SymmetricComplex& c, LevelIndex level);

/// Barycentric subdivision. New vertex ids enumerate the old simplices in
/// storage order; each gets the entry value of its simplex. The cocycle is
/// pulled back so every cycle keeps its w-holonomy.
SymmetricComplex subdivide(const SymmetricComplex& c);

/// SCX reader/writer. The reader validates and throws ParseError (with a
/// line number) or std::runtime_error listing violations.
SymmetricComplex read_scx(std::istream& in, const std::string& source = "<input>");
void write_scx(std::ostream& out, const SymmetricComplex& c);

}  // namespace krs

#endif  // KRSPEC_SYMCX_HPP
