#ifndef OTLIMITS_DUAL_FACE_HPP
#define OTLIMITS_DUAL_FACE_HPP

#include <utility>
#include <vector>

#include "otlimits/measures.hpp"
#include "otlimits/ot_core.hpp"

namespace otl {

/// Which potential a query is about: f on the source points (weighted by
/// mu) or g on the target points (weighted by nu).
enum class Side { source, target };

/// The set of all optimal dual pairs, as the polytope
///
///   f_i + g_j <= C_ij                 for all (i, j)
///   f_i + g_j  = C_ij                 on the support of one optimal plan
///   -box <= f <= box,  -box <= g <= 0
///
/// Every optimal dual pair is tight on the support of every optimal plan, so
/// the set does not depend on which plan supplied `tight_set`.
struct DualFace {
  CostMatrix cost;
  std::vector<std::pair<Index, Index>> tight_set;
  double ot_value = 0.0;
  double box_bound = 0.0;
  Vector mu;
  Vector nu;
  Vector reference_f;  // normalised solver dual, a member of the face
  Vector reference_g;
};

struct FaceOptimum {
  double value = 0.0;
  Vector f;
  Vector g;
};

/// Builds the face from a verified solution. Throws InfeasibleFace when the
/// solution's duality gap or its normalised dual is inconsistent with the
/// face it defines.
DualFace build_face(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                    const TransportSolution& solution);
DualFace build_face(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const CostMatrix& cost, const TransportSolution& solution);

/// max z.f + w.g over the face, attained at a vertex. The objective must be
/// blind to the shift (f + a, g - a), i.e. sum(z) = sum(w) up to rounding.
/// `box` overrides the face's box bound.
FaceOptimum sup_linear(const DualFace& face, const Vector& z, const Vector& w);
FaceOptimum sup_linear(const DualFace& face, const Vector& z, const Vector& w,
                       double box);

/// max z.f + w.g over the epsilon-relaxed face, where the tight-set
/// equalities are replaced by mu.f + nu.g >= ot_value - epsilon. Solved
/// through the Lagrangian dual in the multiplier of the relaxed constraint:
/// a convex piecewise-linear function of one variable, minimised by
/// cutting planes whose cuts come from box-only face LPs.
double sup_linear_epsilon(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                          double ot_value, double epsilon, const Vector& z,
                          const Vector& w);

/// Range of the potential difference (atom - reference) over the face, where
/// the reference is the first support atom of the chosen side.
struct DifferenceRange {
  Index atom = 0;
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

struct DifferenceRanges {
  Index reference = 0;
  std::vector<DifferenceRange> ranges;  // one per support atom other than the reference
  std::vector<FaceOptimum> witnesses;   // the optimal vertices met on the way
};

DifferenceRanges difference_ranges(const DualFace& face, Side side = Side::source);

inline constexpr double kFaceTolerance = 1e-8;

/// True iff every potential difference between support atoms is pinned down
/// by the face: f is unique up to an additive constant on the support.
bool uniqueness_test(const DualFace& face, Side side = Side::source);

/// min over the face of (max - min) of the potential on the support of the
/// chosen side; zero iff the face holds a potential constant there.
double min_potential_range(const DualFace& face, Side side = Side::source);

/// Distinct face vertices found by the difference LPs plus the reference
/// dual; a cheap lower bound on the vertex count.
std::vector<FaceOptimum> probe_vertices(const DualFace& face);

struct FaceSummary {
  double ot_value = 0.0;
  std::vector<std::pair<Index, Index>> tight_set;
  std::size_t n_probe_vertices = 0;
  bool unique = false;
};

FaceSummary summarize(const DualFace& face);

}  // namespace otl

#endif  // OTLIMITS_DUAL_FACE_HPP
