#ifndef OTLIMITS_FIXTURES_HPP
#define OTLIMITS_FIXTURES_HPP

#include <optional>
#include <string>
#include <vector>

#include "otlimits/measures.hpp"
#include "otlimits/semidiscrete.hpp"

namespace otl {

/// Structural properties of an instance's dual face.
struct FaceFlags {
  bool unique = false;
  bool exists_trivial_f = false;
  bool exists_trivial_g = false;
  bool all_trivial_f = false;
  bool all_trivial_g = false;
  bool bitrivial = false;

  bool operator==(const FaceFlags&) const = default;
};

FaceFlags compute_flags(const Vector& mu, const Vector& nu, const CostMatrix& cost);

struct Fixture {
  std::string name;
  std::string description;
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  std::optional<CostSpec> spec;  // absent for explicit matrices
  CostMatrix cost;
  FaceFlags expected;
};

struct SemidiscreteFixture {
  std::string name;
  std::string description;
  DiscreteMeasure mu;
  DensityMeasure1D nu;
  CostSpec spec;
};

/// Built-in instances. Loading a discrete fixture recomputes its face flags
/// and throws SolverError if they differ from the recorded ones.
class FixtureLibrary {
 public:
  static std::vector<std::string> names();
  static bool is_semidiscrete(const std::string& name);
  static Fixture discrete(const std::string& name);
  static SemidiscreteFixture semidiscrete(const std::string& name);
  /// Build without the flag check (used to compute flags in the first place).
  static Fixture discrete_unchecked(const std::string& name);
};

}  // namespace otl

#endif  // OTLIMITS_FIXTURES_HPP
