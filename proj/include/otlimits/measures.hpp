#ifndef OTLIMITS_MEASURES_HPP
#define OTLIMITS_MEASURES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "otlimits/error.hpp"

namespace otl {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kWeightSumTolerance = 1e-12;

/// Finitely supported probability measure. Points carry integer labels and,
/// optionally, coordinates (one row per point). Immutable once built.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<std::int64_t> ids, std::optional<Matrix> coords,
                  Vector weights);

  /// Points 0..n-1 without coordinates.
  static DiscreteMeasure labeled(Vector weights);
  /// Points 0..n-1 with the given coordinates (rows).
  static DiscreteMeasure with_coords(Matrix coords, Vector weights);
  /// Points on the real line.
  static DiscreteMeasure on_line(const std::vector<double>& xs,
                                 const std::vector<double>& weights);

  /// Same points, new weights (validated).
  DiscreteMeasure reweighted(Vector weights) const;

  Index size() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  double weight(Index i) const { return weights_(i); }
  const std::vector<std::int64_t>& ids() const { return ids_; }
  bool has_coords() const { return coords_.has_value(); }
  const Matrix& coords() const;
  Index dimension() const { return coords_ ? coords_->cols() : 0; }

 private:
  std::vector<std::int64_t> ids_;
  std::optional<Matrix> coords_;
  Vector weights_;
};

/// Indices with strictly positive mass, ascending.
std::vector<Index> support(const DiscreteMeasure& measure);

struct ExplicitMatrix {
  Matrix values;
};
/// c(x, y) = |x - y|^p, Euclidean norm.
struct PowerDistance {
  double p;
};
/// c(x, y) = min(|x - y|^p, threshold).
struct ThresholdedPower {
  double p;
  double threshold;
};

class CostSpec {
 public:
  using Kind = std::variant<ExplicitMatrix, PowerDistance, ThresholdedPower>;

  explicit CostSpec(Kind kind);

  static CostSpec power(double p) { return CostSpec(PowerDistance{p}); }
  static CostSpec thresholded(double p, double threshold) {
    return CostSpec(ThresholdedPower{p, threshold});
  }
  static CostSpec explicit_matrix(Matrix values) {
    return CostSpec(ExplicitMatrix{std::move(values)});
  }

  const Kind& kind() const { return kind_; }
  bool is_parametric() const {
    return !std::holds_alternative<ExplicitMatrix>(kind_);
  }

  /// Parametric evaluation on a pair of coordinate vectors.
  template <typename DerivedX, typename DerivedY>
  double evaluate(const Eigen::MatrixBase<DerivedX>& x,
                  const Eigen::MatrixBase<DerivedY>& y) const {
    const double dist = (x - y).norm();
    if (const auto* pd = std::get_if<PowerDistance>(&kind_)) {
      return power_of(dist, pd->p);
    }
    if (const auto* tp = std::get_if<ThresholdedPower>(&kind_)) {
      return std::min(power_of(dist, tp->p), tp->threshold);
    }
    throw InvalidInput("explicit cost matrices have no pointwise evaluation");
  }

  /// Evaluation for scalar (1-D) points.
  double evaluate(double x, double y) const {
    Eigen::Matrix<double, 1, 1> a(x), b(y);
    return evaluate(a, b);
  }

 private:
  static double power_of(double dist, double p) {
    if (p == 1.0) return dist;
    if (p == 2.0) return dist * dist;
    return std::pow(dist, p);
  }

  Kind kind_;
};

/// Cost evaluated on two point sets. Rows index the source points, columns
/// the target points. sup_bound is the largest entry of this instance.
class CostMatrix {
 public:
  explicit CostMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  double sup_bound() const { return sup_bound_; }

  CostMatrix transposed() const { return CostMatrix(values_.transpose()); }
  CostMatrix scaled(double factor) const { return CostMatrix(values_ * factor); }

 private:
  Matrix values_;
  double sup_bound_ = 0.0;
};

CostMatrix cost_matrix(const CostSpec& spec, const DiscreteMeasure& x_points,
                       const DiscreteMeasure& y_points);
CostMatrix cost_matrix(const CostSpec& spec, const Matrix& x_coords,
                       const Matrix& y_coords);

/// Sum of square roots of cell masses (Borisov-Dudley-Durst sum).
template <typename Derived>
double bdd_sum(const Eigen::DenseBase<Derived>& weights) {
  if ((weights.derived().array() < 0).any()) {
    throw InvalidInput("bdd_sum: negative weight");
  }
  return weights.derived().array().sqrt().sum();
}

/// Axis-aligned box sampled on a uniform grid, `points_per_axis` per axis.
struct ProbeGrid {
  Vector lower;
  Vector upper;
  int points_per_axis = 0;

  Index dimension() const { return lower.size(); }
  double spacing(Index axis) const {
    return (upper(axis) - lower(axis)) / (points_per_axis - 1);
  }
  /// All grid points, one per row, last axis fastest.
  Matrix points() const;
};

/// Probe-grid regularity diagnostics. Both constants are lower bounds on the
/// true ones since only grid pairs are examined.
struct RegularityReport {
  double holder_alpha = 1.0;
  double holder_constant = 0.0;
  std::optional<double> semiconcavity_lambda;
  ProbeGrid cell;
};

/// Empirical (alpha, L)-Hoelder constant of a parametric cost over pairs of
/// grid points: max |dc| / (|dx|^alpha + |dy|^alpha). Also reports the
/// smallest grid-consistent semi-concavity modulus when every axis has at
/// least three probes.
RegularityReport holder_estimate(const CostSpec& spec, const ProbeGrid& grid,
                                 double alpha);

/// True iff every centered second difference of c(., y) - lambda |.|^2 along
/// the grid axes is <= 1e-8 (1 + sup c). Targets y range over the same grid.
bool semiconcavity_check(const CostSpec& spec, const ProbeGrid& grid,
                         double lambda);

}  // namespace otl

#endif  // OTLIMITS_MEASURES_HPP
