#ifndef OTLIMITS_DEGENERACY_HPP
#define OTLIMITS_DEGENERACY_HPP

#include <vector>

#include "otlimits/dual_face.hpp"
#include "otlimits/measures.hpp"

namespace otl {

/// Comparison of OT(mu, nu) with the cost of sending every target atom to a
/// nearest source support atom.
struct ProjectionReport {
  double projected_value = 0.0;  // sum_j nu_j min_{i in supp mu} C_ij
  double ot_value = 0.0;
  bool is_projected = false;     // equality within 1e-9 (1 + sup c)
  std::vector<Index> gamma_set;  // union of nearest source atoms over supp nu, ascending
};

/// Entries within this margin of a row/column minimum count as minimisers.
double argmin_tolerance(const CostMatrix& cost);

ProjectionReport projected_measure_test(const Vector& mu, const Vector& nu,
                                        const CostMatrix& cost, double ot_value);

/// Pushforward of nu under y_j -> argmin_{i in target} C_ij (smallest index on
/// ties), as a measure on the points of `x_points`.
DiscreteMeasure c_projection(const DiscreteMeasure& nu, const std::vector<Index>& target,
                             const DiscreteMeasure& x_points, const CostMatrix& cost);

/// Every member of the face is constant on the support of the chosen side.
bool all_trivial_test(const DualFace& face, Side side = Side::source);

/// Some optimal potential is constant on supp(mu); decided by the projection
/// identity.
bool exists_trivial_test(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                         double ot_value);

/// Same question answered directly on the face by the minimum-range LP.
bool exists_trivial_on_face(const DualFace& face, Side side = Side::source);

/// all_trivial on both sides. When true the cost must be constant on the
/// tight set; a violation throws SolverError.
bool bitrivial_check(const DualFace& face);

}  // namespace otl

#endif  // OTLIMITS_DEGENERACY_HPP
