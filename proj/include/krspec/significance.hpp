#ifndef KRSPEC_SIGNIFICANCE_HPP
#define KRSPEC_SIGNIFICANCE_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "krspec/rational.hpp"
#include "krspec/symcx.hpp"
#include "krspec/z2algebra.hpp"

namespace krs {

/// Evidence strength of a reported value. Candidates are necessary
/// conditions only; certified values and certificates are sufficient.
enum class Provenance { Candidate, Certified, Certificate };
const char* to_string(Provenance p);

struct CertifiedValue {
  int dimension = 0;
  Rational level;
  bool operator==(const CertifiedValue&) const = default;
};

/// Closed surface type. `genus` is the orientable genus (2 - chi) / 2 for
/// orientable surfaces and the non-orientable genus 2 - chi otherwise.
struct SurfaceClass {
  int euler_characteristic = 2;
  bool orientable = true;
  int genus = 0;

  static SurfaceClass from(int euler_characteristic, bool orientable);
  /// Position on the non-orientable scale: orientable genus g counts as 2g.
  int nonorientable_scale() const { return orientable ? 2 * genus : genus; }
  bool operator==(const SurfaceClass&) const = default;
};

std::string describe(const SurfaceClass& s);

/// The input is not a closed connected surface; the message names the
/// failing condition.
class SurfaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SurfaceCertificate {
  SubcomplexRef witness;  // pure 2-dimensional
  Rational level;
  SurfaceClass claimed_class;
  bool claims_essential = false;
};

struct CertificateVerdict {
  bool contained = false;
  bool class_matches = false;
  std::optional<SurfaceClass> observed_class;
  std::string classification_error;
  /// The witness 2-cycle is not a boundary in the whole complex.
  bool essential = false;
  bool essential_matches = false;

  bool passed() const { return contained && class_matches && essential_matches; }
};

struct ObstructionVerdict {
  CertificateVerdict lower;
  CertificateVerdict upper;
  bool degree_obstruction = false;
  /// Both certificates verified, the upper level is above the lower one and
  /// the upper surface cannot be mapped with mod-2 degree one onto the lower.
  bool holds = false;
  Rational lower_level;
  Rational upper_level;
};

struct SignificanceReport {
  std::vector<Rational> candidates;          // Provenance::Candidate
  std::vector<CertifiedValue> certified;     // Provenance::Certified
  std::optional<ObstructionVerdict> obstruction;  // Provenance::Certificate
};

/// Sorted distinct levels where a bar of positive length is born or dies.
std::vector<Rational> homology_critical_values(const PersistenceDiagram& d);

/// Every (p, t) where essential_rank_at(d, p, .) jumps, i.e. the births of
/// essential bars. Sorted by (p, t), one entry per distinct level.
std::vector<CertifiedValue> certified_weak_significant(const PersistenceDiagram& d);

/// Classify a pure 2-dimensional closed connected surface. Throws
/// SurfaceError naming the failed condition.
SurfaceClass classify_surface(const SubcomplexRef& sub);

/// Checks containment in sublevel(level), classification, and essentiality
/// independently. Throws std::invalid_argument if the witness is not
/// face-closed.
CertificateVerdict verify_surface_certificate(const SymmetricComplex& c, const SurfaceCertificate& cert);

/// True iff target's non-orientable genus strictly exceeds source's, which
/// rules out a map of mod-2 degree one from source onto target.
bool degree_obstruction(const SurfaceClass& source, const SurfaceClass& target);

/// Combine a lower certificate (the surface the small sublevel retracts to)
/// with an upper one (a surface present at the larger level).
ObstructionVerdict obstruction_between(const SymmetricComplex& c, const SurfaceCertificate& lower,
                                       const SurfaceCertificate& upper);

SignificanceReport significance_report(const PersistenceDiagram& d);

/// Certificate files: `level`, `chi`, `orientable`, `essential` header lines
/// followed by `s a b c` triangles naming vertex ids of `c`.
SurfaceCertificate read_certificate(std::istream& in, const SymmetricComplex& c,
                                    const std::string& source = "<certificate>");
void write_certificate(std::ostream& out, const SurfaceCertificate& cert);

}  // namespace krs

#endif  // KRSPEC_SIGNIFICANCE_HPP
