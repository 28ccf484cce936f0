#ifndef OTLIMITS_OT_CORE_HPP
#define OTLIMITS_OT_CORE_HPP

#include <Eigen/Dense>

#include <limits>
#include <utility>
#include <vector>

#include "otlimits/measures.hpp"

namespace otl {

/// Plan entries above this mass count as support of the plan.
inline constexpr double kSupportThreshold = 1e-10;

/// Optimal value, a basic optimal plan, and one dual pair normalised into
/// the bounded c-concave class (max g = 0, g = f^c).
struct TransportSolution {
  double value = 0.0;
  Matrix plan;
  Vector dual_f;
  Vector dual_g;
};

struct DualPair {
  Vector f;
  Vector g;
};

/// Residuals of the optimality conditions of a TransportSolution.
struct SolutionDiagnostics {
  double marginal_error = 0.0;       // max |row/col sum - weight|
  double min_plan_entry = 0.0;
  double dual_infeasibility = 0.0;   // max (f_i + g_j - C_ij)^+
  double slackness_violation = 0.0;  // max |f_i + g_j - C_ij| over plan support
  double gap = 0.0;                  // primal - dual
};

/// Exact transport between the weight vectors of `mu` (rows of C) and `nu`
/// (columns of C) by network simplex on the bipartite graph, started from
/// the north-west corner basis.
TransportSolution solve_discrete_ot(const DiscreteMeasure& mu,
                                    const DiscreteMeasure& nu,
                                    const CostMatrix& cost);
TransportSolution solve_discrete_ot(const Vector& mu, const Vector& nu,
                                    const CostMatrix& cost);

enum class Direction { x_to_y, y_to_x };

/// c-conjugate on finite sets: x_to_y gives g_j = min_i (C_ij - f_i),
/// y_to_x gives f_i = min_j (C_ij - g_j).
template <typename DerivedF, typename DerivedC>
Eigen::Matrix<typename DerivedF::Scalar, Eigen::Dynamic, 1> c_transform(
    const Eigen::MatrixBase<DerivedF>& potential,
    const Eigen::MatrixBase<DerivedC>& cost, Direction direction) {
  using Scalar = typename DerivedF::Scalar;
  if (direction == Direction::x_to_y) {
    if (potential.size() != cost.rows()) {
      throw InvalidInput("c_transform: potential length does not match cost rows");
    }
    return (cost.derived().colwise() - potential.derived().col(0))
        .colwise()
        .minCoeff()
        .transpose()
        .template cast<Scalar>();
  }
  if (potential.size() != cost.cols()) {
    throw InvalidInput("c_transform: potential length does not match cost columns");
  }
  return (cost.derived().rowwise() - potential.derived().col(0).transpose())
      .rowwise()
      .minCoeff()
      .template cast<Scalar>();
}

template <typename DerivedF>
Vector c_transform(const Eigen::MatrixBase<DerivedF>& potential,
                   const CostMatrix& cost, Direction direction) {
  return c_transform(potential, cost.values(), direction);
}

/// g <- f^c, f <- g^c, then shift so that max g = 0. Throws InvalidInput if
/// the input pair violates f_i + g_j <= C_ij by more than 1e-9 (1 + sup c).
DualPair normalize_to_fc(const Vector& f, const Vector& g, const CostMatrix& cost);

double dual_objective(const Vector& f, const Vector& g, const Vector& mu,
                      const Vector& nu);

/// <plan, C> - (mu.f + nu.g).
double duality_gap(const TransportSolution& solution, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu, const CostMatrix& cost);

SolutionDiagnostics diagnose(const TransportSolution& solution, const Vector& mu,
                             const Vector& nu, const CostMatrix& cost);

/// Cells of `plan` with mass above `tau`, row-major order.
std::vector<std::pair<Index, Index>> plan_support(const Matrix& plan,
                                                  double tau = kSupportThreshold);

/// Independent oracle: minimum cost over all basic feasible solutions of the
/// transportation polytope, found by enumerating every candidate basis of
/// |X| + |Y| - 1 cells. Only for |X| + |Y| <= 10.
double brute_force_ot(const Vector& mu, const Vector& nu, const CostMatrix& cost);

}  // namespace otl

#endif  // OTLIMITS_OT_CORE_HPP
