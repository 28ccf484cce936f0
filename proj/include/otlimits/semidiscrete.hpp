#ifndef OTLIMITS_SEMIDISCRETE_HPP
#define OTLIMITS_SEMIDISCRETE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "otlimits/inference.hpp"
#include "otlimits/measures.hpp"

namespace otl {

/// Probability density on [lower, upper] that is constant between
/// breakpoints, discretised into `nodes` equal bins. Bin masses are exact
/// integrals of the density.
class DensityMeasure1D {
 public:
  static DensityMeasure1D uniform(double lower, double upper, int nodes = 10000);
  /// breakpoints b_0 < ... < b_K, values v_0..v_{K-1} >= 0 (densities).
  static DensityMeasure1D piecewise_constant(std::vector<double> breakpoints,
                                             std::vector<double> values, int nodes = 10000);

  double lower() const { return breaks_.front(); }
  double upper() const { return breaks_.back(); }
  int nodes() const { return nodes_; }
  double spacing() const { return (upper() - lower()) / nodes_; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  bool is_uniform() const { return values_.size() == 1; }
  /// Density strictly positive on the whole interval.
  bool connected_support() const;

  double cdf(double t) const;
  /// Bin midpoints and bin masses.
  const Vector& node_points() const { return points_; }
  const Vector& node_weights() const { return masses_; }

  DensityMeasure1D with_nodes(int nodes) const {
    return DensityMeasure1D(breaks_, values_, nodes);
  }

 private:
  DensityMeasure1D(std::vector<double> breaks, std::vector<double> values, int nodes);

  std::vector<double> breaks_;
  std::vector<double> values_;
  int nodes_;
  Vector points_;
  Vector masses_;
};

/// Dual state of the semi-discrete problem: potential f on the atoms, the
/// owning atom of every quadrature node (argmin of c(x_i, y) - f_i at the
/// node, smallest index on ties) and the dual objective.
struct SemiDualState {
  Vector f;
  std::vector<Index> cells;
  Vector cell_mass;  // nu mass of each atom's cell, boundary bins split
  double objective = 0.0;
  double residual = 0.0;  // max_i |mu_i - cell_mass_i|
  int iterations = 0;
  std::vector<double> objective_history;  // accepted steps
};

struct SemidiscreteOptions {
  double tolerance = 1e-7;
  int max_iterations = 20000;
  std::optional<Vector> warm_start;
};

/// Concave dual ascent f <- f + eta (mu - cell masses) with backtracking.
/// Inside each bin the functions c(x_i, .) - f_i are replaced by their
/// secant-slope lines through the midpoint value, so cell masses vary
/// continuously with f and the residual tolerance is reachable.
SemiDualState solve_semidiscrete(const DiscreteMeasure& mu, const DensityMeasure1D& nu,
                                 const CostSpec& cost,
                                 const SemidiscreteOptions& options = {});

/// Replications of sqrt(n) (OT(mu_hat_n, nu) - OT(mu, nu)) with mu resampled
/// on its support, compared with N(0, Var_mu[f]) for the population
/// potential f.
ExperimentReport semidiscrete_clt_experiment(const DiscreteMeasure& mu,
                                             const DensityMeasure1D& nu,
                                             const CostSpec& cost, std::size_t n,
                                             std::size_t reps, std::uint64_t seed,
                                             int jobs = 1);

}  // namespace otl

#endif  // OTLIMITS_SEMIDISCRETE_HPP
