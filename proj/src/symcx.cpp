#include "krspec/symcx.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace krs {

// ---------------------------------------------------------------- Simplex

Simplex::Simplex(std::initializer_list<VertexIndex> vertices)
    : Simplex(std::span<const VertexIndex>(vertices.begin(), vertices.size())) {}

Simplex::Simplex(std::span<const VertexIndex> vertices) {
  if (vertices.empty() || vertices.size() > 4)
    throw std::invalid_argument("simplex must have between 1 and 4 vertices");
  vertices_.fill(~VertexIndex{0});
  std::copy(vertices.begin(), vertices.end(), vertices_.begin());
  size_ = static_cast<std::uint8_t>(vertices.size());
  std::sort(vertices_.begin(), vertices_.begin() + size_);
  if (std::adjacent_find(vertices_.begin(), vertices_.begin() + size_) != vertices_.begin() + size_)
    throw std::invalid_argument("simplex repeats a vertex");
}

bool Simplex::contains(VertexIndex v) const {
  return std::binary_search(vertices_.begin(), vertices_.begin() + size_, v);
}

Simplex Simplex::facet(std::size_t i) const {
  Simplex out;
  out.vertices_.fill(~VertexIndex{0});
  std::size_t k = 0;
  for (std::size_t j = 0; j < size_; ++j) {
    if (j != i) out.vertices_[k++] = vertices_[j];
  }
  out.size_ = static_cast<std::uint8_t>(k);
  return out;
}

std::strong_ordering Simplex::operator<=>(const Simplex& other) const {
  if (auto c = size_ <=> other.size_; c != 0) return c;
  for (std::size_t i = 0; i < size_; ++i) {
    if (auto c = vertices_[i] <=> other.vertices_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  std::size_t h = s.size();
  for (VertexIndex v : s.vertices()) h = h * 0x9E3779B97F4A7C15ull + v + (h >> 29);
  return h;
}

// ------------------------------------------------------ SymmetricComplex

namespace {

std::vector<VertexIndex> to_indices(const std::vector<VertexId>& ids,
                                    const std::vector<VertexId>& sorted_ids) {
  std::vector<VertexIndex> out;
  out.reserve(ids.size());
  for (VertexId id : ids) {
    auto it = std::lower_bound(sorted_ids.begin(), sorted_ids.end(), id);
    if (it == sorted_ids.end() || *it != id)
      throw std::invalid_argument("simplex names unknown vertex " + std::to_string(id));
    out.push_back(static_cast<VertexIndex>(it - sorted_ids.begin()));
  }
  return out;
}

}  // namespace

SymmetricComplex::SymmetricComplex(std::vector<VertexSpec> vertices,
                                   const std::vector<std::vector<VertexId>>& simplices,
                                   const std::vector<CocycleEntry>& cocycle,
                                   int declared_dimension) {
  std::sort(vertices.begin(), vertices.end(),
            [](const VertexSpec& a, const VertexSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i].id == vertices[i - 1].id)
      throw std::invalid_argument("duplicate vertex id " + std::to_string(vertices[i].id));
  }
  ids_.reserve(vertices.size());
  values_.reserve(vertices.size());
  for (auto& v : vertices) {
    ids_.push_back(v.id);
    values_.push_back(std::move(v.value));
  }

  std::set<Simplex> unique;
  for (VertexIndex v = 0; v < ids_.size(); ++v) unique.insert(Simplex{v});
  for (const auto& raw : simplices) {
    Simplex s(to_indices(raw, ids_));
    if (s.dimension() == 0) continue;
    if (!unique.insert(s).second) duplicates_.push_back(s);
  }
  simplices_.assign(unique.begin(), unique.end());
  build_indices();

  cocycle_.assign(simplices_.size(), 0);
  std::vector<std::int8_t> seen(simplices_.size(), -1);
  for (const auto& entry : cocycle) {
    auto ab = to_indices({entry.a, entry.b}, ids_);
    if (ab[0] == ab[1]) throw std::invalid_argument("cocycle entry on a loop");
    SimplexIndex e = find(Simplex{ab[0], ab[1]});
    if (e == kNoSimplex)
      throw std::invalid_argument("cocycle entry on non-edge {" + std::to_string(entry.a) + "," +
                                  std::to_string(entry.b) + "}");
    if (seen[e] >= 0 && seen[e] != static_cast<std::int8_t>(entry.value))
      throw std::invalid_argument("conflicting cocycle entries on " + describe(e));
    seen[e] = static_cast<std::int8_t>(entry.value);
    cocycle_[e] = entry.value ? 1 : 0;
  }
  declared_dimension_ = declared_dimension < 0 ? dimension_ : declared_dimension;
}

SymmetricComplex SymmetricComplex::from_maximal(std::vector<VertexSpec> vertices,
                                                const std::vector<std::vector<VertexId>>& maximal,
                                                const std::vector<CocycleEntry>& cocycle,
                                                int declared_dimension) {
  std::set<std::vector<VertexId>> all;
  for (auto top : maximal) {
    std::sort(top.begin(), top.end());
    if (top.empty() || top.size() > 4)
      throw std::invalid_argument("simplex must have between 1 and 4 vertices");
    const unsigned n = static_cast<unsigned>(top.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<VertexId> face;
      for (unsigned i = 0; i < n; ++i) {
        if (mask & (1u << i)) face.push_back(top[i]);
      }
      all.insert(std::move(face));
    }
  }
  return SymmetricComplex(std::move(vertices), {all.begin(), all.end()}, cocycle, declared_dimension);
}

void SymmetricComplex::build_indices() {
  index_.clear();
  index_.reserve(simplices_.size() * 2);
  for (SimplexIndex i = 0; i < simplices_.size(); ++i) index_.emplace(simplices_[i], i);

  dimension_ = simplices_.empty() ? -1 : simplices_.back().dimension();
  for (int p = 0; p <= kMaxDimension + 1; ++p) {
    auto it = std::lower_bound(simplices_.begin(), simplices_.end(), p,
                               [](const Simplex& s, int dim) { return s.dimension() < dim; });
    dim_begin_[p] = static_cast<SimplexIndex>(it - simplices_.begin());
  }

  boundary_.assign(simplices_.size() * 4, kNoSimplex);
  std::vector<SimplexIndex> degree(simplices_.size(), 0);
  for (SimplexIndex i = 0; i < simplices_.size(); ++i) {
    const Simplex& s = simplices_[i];
    if (s.dimension() == 0) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      SimplexIndex f = find(s.facet(j));
      boundary_[4 * i + j] = f;
      if (f != kNoSimplex) ++degree[f];
    }
  }
  coface_offsets_.assign(simplices_.size() + 1, 0);
  for (SimplexIndex i = 0; i < simplices_.size(); ++i) coface_offsets_[i + 1] = coface_offsets_[i] + degree[i];
  cofaces_.assign(coface_offsets_.back(), kNoSimplex);
  std::vector<SimplexIndex> fill(coface_offsets_.begin(), coface_offsets_.end() - 1);
  for (SimplexIndex i = 0; i < simplices_.size(); ++i) {
    for (SimplexIndex f : boundary(i)) {
      if (f != kNoSimplex) cofaces_[fill[f]++] = i;
    }
  }

  levels_ = values_;
  std::sort(levels_.begin(), levels_.end());
  levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
  vertex_level_.resize(values_.size());
  for (VertexIndex v = 0; v < values_.size(); ++v) {
    vertex_level_[v] = static_cast<LevelIndex>(
        std::lower_bound(levels_.begin(), levels_.end(), values_[v]) - levels_.begin());
  }
  entry_level_.resize(simplices_.size());
  for (SimplexIndex i = 0; i < simplices_.size(); ++i) {
    LevelIndex level = 0;
    for (VertexIndex v : simplices_[i].vertices()) level = std::max(level, vertex_level_[v]);
    entry_level_[i] = level;
  }
}

std::optional<VertexIndex> SymmetricComplex::find_vertex(VertexId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<VertexIndex>(it - ids_.begin());
}

SimplexIndex SymmetricComplex::find(const Simplex& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? kNoSimplex : it->second;
}

std::pair<SimplexIndex, SimplexIndex> SymmetricComplex::dimension_range(int p) const {
  if (p < 0 || p > kMaxDimension) return {0, 0};
  return {dim_begin_[p], dim_begin_[p + 1]};
}

std::size_t SymmetricComplex::count(int p) const {
  auto [b, e] = dimension_range(p);
  return e - b;
}

bool SymmetricComplex::cocycle(VertexIndex a, VertexIndex b) const {
  if (a == b) return false;
  SimplexIndex e = find(Simplex{a, b});
  return e != kNoSimplex && cocycle_[e] != 0;
}

std::span<const SimplexIndex> SymmetricComplex::boundary(SimplexIndex s) const {
  std::size_t n = simplices_[s].dimension() == 0 ? 0 : simplices_[s].size();
  return {boundary_.data() + 4 * std::size_t{s}, n};
}

std::span<const SimplexIndex> SymmetricComplex::cofaces(SimplexIndex s) const {
  return {cofaces_.data() + coface_offsets_[s], coface_offsets_[s + 1] - coface_offsets_[s]};
}

std::string SymmetricComplex::describe(const Simplex& s) const {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids_[s[i]]);
  }
  return out + "}";
}

SymmetricComplex SymmetricComplex::with_values(const std::vector<Rational>& values) const {
  if (values.size() != values_.size()) throw std::invalid_argument("value count mismatch");
  SymmetricComplex out = *this;
  out.values_ = values;
  out.build_indices();
  return out;
}

// --------------------------------------------------------- SubcomplexRef

SubcomplexRef::SubcomplexRef(const SymmetricComplex& parent, std::vector<SimplexIndex> members)
    : parent_(&parent), members_(std::move(members)), mask_(parent.simplex_count(), 0) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (SimplexIndex s : members_) {
    if (s >= parent.simplex_count()) throw std::out_of_range("simplex index outside parent");
    mask_[s] = 1;
  }
}

SubcomplexRef SubcomplexRef::empty(const SymmetricComplex& parent) { return SubcomplexRef(parent, {}); }

SubcomplexRef SubcomplexRef::whole(const SymmetricComplex& parent) {
  std::vector<SimplexIndex> all(parent.simplex_count());
  std::iota(all.begin(), all.end(), SimplexIndex{0});
  return SubcomplexRef(parent, std::move(all));
}

SubcomplexRef SubcomplexRef::closure(const SymmetricComplex& parent,
                                     std::span<const SimplexIndex> generators) {
  std::vector<std::uint8_t> in(parent.simplex_count(), 0);
  std::vector<SimplexIndex> stack(generators.begin(), generators.end());
  std::vector<SimplexIndex> members;
  while (!stack.empty()) {
    SimplexIndex s = stack.back();
    stack.pop_back();
    if (in[s]) continue;
    in[s] = 1;
    members.push_back(s);
    for (SimplexIndex f : parent.boundary(s)) {
      if (f == kNoSimplex) throw std::invalid_argument("face of " + parent.describe(s) + " missing from complex");
      stack.push_back(f);
    }
  }
  return SubcomplexRef(parent, std::move(members));
}

std::size_t SubcomplexRef::count(int p) const {
  auto [b, e] = parent_->dimension_range(p);
  return static_cast<std::size_t>(std::lower_bound(members_.begin(), members_.end(), e) -
                                  std::lower_bound(members_.begin(), members_.end(), b));
}

std::vector<SimplexIndex> SubcomplexRef::of_dimension(int p) const {
  auto [b, e] = parent_->dimension_range(p);
  return {std::lower_bound(members_.begin(), members_.end(), b),
          std::lower_bound(members_.begin(), members_.end(), e)};
}

int SubcomplexRef::dimension() const {
  return members_.empty() ? -1 : parent_->simplex(members_.back()).dimension();
}

bool SubcomplexRef::is_closed() const {
  for (SimplexIndex s : members_) {
    for (SimplexIndex f : parent_->boundary(s)) {
      if (f == kNoSimplex || !mask_[f]) return false;
    }
  }
  return true;
}

bool SubcomplexRef::is_subset_of(const SubcomplexRef& other) const {
  return std::all_of(members_.begin(), members_.end(), [&](SimplexIndex s) { return other.contains(s); });
}

SubcomplexRef SubcomplexRef::united_with(const SubcomplexRef& other) const {
  std::vector<SimplexIndex> merged;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(merged));
  return SubcomplexRef(*parent_, std::move(merged));
}

// ------------------------------------------------------------ operations

FiltrationOrder filtration_order(const SymmetricComplex& c) {
  FiltrationOrder f;
  f.order.resize(c.simplex_count());
  std::iota(f.order.begin(), f.order.end(), SimplexIndex{0});
  // Storage order already sorts by (dimension, vertices); a stable sort on
  // entry level yields (entry, dimension, vertices).
  std::stable_sort(f.order.begin(), f.order.end(),
                   [&](SimplexIndex a, SimplexIndex b) { return c.entry_level(a) < c.entry_level(b); });
  f.position.resize(f.order.size());
  for (std::uint32_t i = 0; i < f.order.size(); ++i) f.position[f.order[i]] = i;
  return f;
}

ValidationReport validate(const SymmetricComplex& c) {
  ValidationReport report;
  for (const Simplex& s : c.duplicates()) {
    report.violations.push_back({Violation::Kind::Duplicate, "duplicate simplex " + c.describe(s)});
  }
  for (SimplexIndex i = 0; i < c.simplex_count(); ++i) {
    const Simplex& s = c.simplex(i);
    auto faces = c.boundary(i);
    for (std::size_t j = 0; j < faces.size(); ++j) {
      if (faces[j] == kNoSimplex) {
        report.violations.push_back({Violation::Kind::FaceClosure, "simplex " + c.describe(s) +
                                                                       " is missing face " +
                                                                       c.describe(s.facet(j))});
      }
    }
    if (s.dimension() == 2) {
      bool sum = c.cocycle(s[0], s[1]) ^ c.cocycle(s[1], s[2]) ^ c.cocycle(s[0], s[2]);
      if (sum) {
        report.violations.push_back(
            {Violation::Kind::Cocycle, "cocycle condition fails on triangle " + c.describe(s)});
      }
    }
  }
  if (c.declared_dimension() != c.dimension()) {
    report.violations.push_back({Violation::Kind::Dimension,
                                 "declared dimension " + std::to_string(c.declared_dimension()) +
                                     " but complex has dimension " + std::to_string(c.dimension())});
  }
  return report;
}

SubcomplexRef sublevel_at(const SymmetricComplex& c, LevelIndex level) {
  std::vector<SimplexIndex> members;
  for (SimplexIndex s = 0; s < c.simplex_count(); ++s) {
    if (c.entry_level(s) <= level) members.push_back(s);
  }
  return SubcomplexRef(c, std::move(members));
}

SubcomplexRef sublevel(const SymmetricComplex& c, const Rational& t) {
  const auto& levels = c.levels();
  auto it = std::upper_bound(levels.begin(), levels.end(), t);
  if (it == levels.begin()) return SubcomplexRef::empty(c);
  return sublevel_at(c, static_cast<LevelIndex>(it - levels.begin() - 1));
}

SymmetricComplex subdivide(const SymmetricComplex& c) {
  if (c.dimension() > kMaxDimension) throw std::invalid_argument("dimension > 3 unsupported");

  std::vector<VertexSpec> vertices;
  vertices.reserve(c.simplex_count());
  for (SimplexIndex s = 0; s < c.simplex_count(); ++s) vertices.push_back({s, c.entry_value(s)});

  // Each barycentre is placed on the sheet of its simplex's first vertex; an
  // edge between nested simplices then carries w of the edge joining their
  // first vertices, which lies in the larger simplex.
  std::vector<std::vector<VertexId>> flags;
  std::set<std::pair<VertexId, VertexId>> odd_edges;
  for (SimplexIndex top = 0; top < c.simplex_count(); ++top) {
    if (!c.cofaces(top).empty()) continue;
    const Simplex& t = c.simplex(top);
    std::vector<VertexIndex> perm(t.vertices().begin(), t.vertices().end());
    do {
      std::vector<VertexId> chain;
      std::vector<VertexIndex> prefix;
      for (VertexIndex v : perm) {
        prefix.push_back(v);
        chain.push_back(c.find(Simplex(prefix)));
      }
      for (std::size_t i = 0; i < chain.size(); ++i) {
        for (std::size_t j = i + 1; j < chain.size(); ++j) {
          VertexIndex a = c.simplex(chain[i])[0];
          VertexIndex b = c.simplex(chain[j])[0];
          if (c.cocycle(a, b)) odd_edges.insert(std::minmax(chain[i], chain[j]));
        }
      }
      flags.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  std::vector<CocycleEntry> cocycle;
  cocycle.reserve(odd_edges.size());
  for (auto [a, b] : odd_edges) cocycle.push_back({a, b, true});
  return SymmetricComplex::from_maximal(std::move(vertices), flags, cocycle, c.declared_dimension());
}

// ------------------------------------------------------------------- SCX

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

VertexId parse_id(const std::string& token, const std::string& source, std::size_t line) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos || token.size() > 9)
    parse_fail(source, line, "invalid vertex id '" + token + "'");
  return static_cast<VertexId>(std::stoul(token));
}

}  // namespace

SymmetricComplex read_scx(std::istream& in, const std::string& source) {
  std::vector<VertexSpec> vertices;
  std::map<VertexId, std::size_t> vertex_line;
  std::vector<std::vector<VertexId>> maximal;
  std::map<std::vector<VertexId>, std::size_t> simplex_line;
  struct PendingW {
    CocycleEntry entry;
    std::size_t line;
  };
  std::vector<PendingW> weights;
  std::set<std::pair<VertexId, VertexId>> weight_seen;
  int declared = -1;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    const std::string& kw = tok[0];
    if (kw == "dim") {
      if (tok.size() != 2) parse_fail(source, line_no, "expected 'dim D'");
      if (declared >= 0) parse_fail(source, line_no, "duplicate dim declaration");
      if (tok[1].size() != 1 || tok[1][0] < '0' || tok[1][0] > '3')
        parse_fail(source, line_no, "dimension must be 0..3");
      declared = tok[1][0] - '0';
    } else if (kw == "v") {
      if (tok.size() != 3) parse_fail(source, line_no, "expected 'v <id> <value>'");
      VertexId id = parse_id(tok[1], source, line_no);
      if (!vertex_line.emplace(id, line_no).second)
        parse_fail(source, line_no, "duplicate vertex " + tok[1]);
      try {
        vertices.push_back({id, parse_rational(tok[2])});
      } catch (const std::invalid_argument& e) {
        parse_fail(source, line_no, e.what());
      }
    } else if (kw == "s") {
      if (tok.size() < 2 || tok.size() > 5) parse_fail(source, line_no, "simplex needs 1 to 4 vertex ids");
      std::vector<VertexId> ids;
      for (std::size_t i = 1; i < tok.size(); ++i) ids.push_back(parse_id(tok[i], source, line_no));
      std::sort(ids.begin(), ids.end());
      if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        parse_fail(source, line_no, "simplex repeats a vertex");
      if (!simplex_line.emplace(ids, line_no).second) parse_fail(source, line_no, "duplicate simplex");
      maximal.push_back(std::move(ids));
    } else if (kw == "w") {
      if (tok.size() != 4 || (tok[3] != "0" && tok[3] != "1"))
        parse_fail(source, line_no, "expected 'w <id> <id> <0|1>'");
      VertexId a = parse_id(tok[1], source, line_no);
      VertexId b = parse_id(tok[2], source, line_no);
      if (!weight_seen.insert(std::minmax(a, b)).second)
        parse_fail(source, line_no, "duplicate cocycle entry");
      weights.push_back({{a, b, tok[3] == "1"}, line_no});
    } else {
      parse_fail(source, line_no, "unknown record '" + kw + "'");
    }
  }

  if (vertices.empty()) throw ParseError(source + ": no vertices");
  for (const auto& [ids, line] : simplex_line) {
    for (VertexId id : ids) {
      if (!vertex_line.count(id)) parse_fail(source, line, "simplex names undeclared vertex " + std::to_string(id));
    }
  }

  // Edge set implied by the maximal simplices, for checking `w` lines.
  std::set<std::pair<VertexId, VertexId>> edges;
  for (const auto& s : maximal) {
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) edges.emplace(s[i], s[j]);
  }
  std::vector<CocycleEntry> cocycle;
  for (const auto& w : weights) {
    if (!edges.count(std::minmax(w.entry.a, w.entry.b)))
      parse_fail(source, w.line, "cocycle entry on non-edge {" + std::to_string(w.entry.a) + "," +
                                     std::to_string(w.entry.b) + "}");
    cocycle.push_back(w.entry);
  }

  SymmetricComplex c = SymmetricComplex::from_maximal(std::move(vertices), maximal, cocycle, declared);
  ValidationReport report = validate(c);
  if (!report.ok()) {
    std::string msg = source + ": invalid complex";
    for (const auto& v : report.violations) msg += "\n  " + v.message;
    throw std::runtime_error(msg);
  }
  return c;
}

void write_scx(std::ostream& out, const SymmetricComplex& c) {
  out << "# krspec SCX\n";
  out << "dim " << c.declared_dimension() << "\n";
  for (VertexIndex v = 0; v < c.vertex_count(); ++v) out << "v " << c.vertex_id(v) << " " << to_string(c.value(v)) << "\n";
  for (SimplexIndex s = 0; s < c.simplex_count(); ++s) {
    if (c.simplex(s).dimension() == 0 || !c.cofaces(s).empty()) continue;
    out << "s";
    for (VertexIndex v : c.simplex(s).vertices()) out << " " << c.vertex_id(v);
    out << "\n";
  }
  auto [eb, ee] = c.dimension_range(1);
  for (SimplexIndex e = eb; e < ee; ++e) {
    if (!c.cocycle(e)) continue;
    const Simplex& s = c.simplex(e);
    out << "w " << c.vertex_id(s[0]) << " " << c.vertex_id(s[1]) << " 1\n";
  }
}

}  // namespace krs
