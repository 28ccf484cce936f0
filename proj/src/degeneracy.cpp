#include "otlimits/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otl {

double argmin_tolerance(const CostMatrix& cost) { return 1e-12 * (1.0 + cost.sup_bound()); }

ProjectionReport projected_measure_test(const Vector& mu, const Vector& nu,
                                        const CostMatrix& cost, double ot_value) {
  if (mu.size() != cost.rows() || nu.size() != cost.cols()) {
    throw InvalidInput("projected_measure_test: sizes do not match the cost");
  }
  std::vector<Index> source;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu(i) > 0.0) source.push_back(i);
  }
  if (source.empty()) throw InvalidInput("projected_measure_test: empty source support");

  const double tie = argmin_tolerance(cost);
  std::vector<char> in_gamma(static_cast<std::size_t>(mu.size()), 0);
  ProjectionReport report;
  report.ot_value = ot_value;
  for (Index j = 0; j < nu.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (Index i : source) best = std::min(best, cost(i, j));
    report.projected_value += nu(j) * best;
    if (nu(j) <= 0.0) continue;
    for (Index i : source) {
      if (cost(i, j) <= best + tie) in_gamma[static_cast<std::size_t>(i)] = 1;
    }
  }
  for (Index i = 0; i < mu.size(); ++i) {
    if (in_gamma[static_cast<std::size_t>(i)]) report.gamma_set.push_back(i);
  }
  report.is_projected =
      std::abs(ot_value - report.projected_value) <= 1e-9 * (1.0 + cost.sup_bound());
  return report;
}

DiscreteMeasure c_projection(const DiscreteMeasure& nu, const std::vector<Index>& target,
                             const DiscreteMeasure& x_points, const CostMatrix& cost) {
  if (target.empty()) throw InvalidInput("c_projection: empty target set");
  if (cost.rows() != x_points.size() || cost.cols() != nu.size()) {
    throw InvalidInput("c_projection: sizes do not match the cost");
  }
  for (Index i : target) {
    if (i < 0 || i >= x_points.size()) throw InvalidInput("c_projection: target index out of range");
  }
  std::vector<Index> sorted = target;
  std::sort(sorted.begin(), sorted.end());
  const double tie = argmin_tolerance(cost);
  Vector pushed = Vector::Zero(x_points.size());
  for (Index j = 0; j < nu.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (Index i : sorted) best = std::min(best, cost(i, j));
    const auto hit = std::find_if(sorted.begin(), sorted.end(),
                                  [&](Index i) { return cost(i, j) <= best + tie; });
    pushed(*hit) += nu.weight(j);
  }
  // absorb the rounding of the sum so the result passes weight validation exactly
  return x_points.reweighted(pushed / pushed.sum());
}

bool all_trivial_test(const DualFace& face, Side side) {
  // |f_k - f_ref| <= tol / 2 on the whole face bounds every pairwise difference by tol
  const auto ranges = difference_ranges(face, side);
  return std::all_of(ranges.ranges.begin(), ranges.ranges.end(), [](const DifferenceRange& r) {
    return r.upper <= 0.5 * kFaceTolerance && -r.lower <= 0.5 * kFaceTolerance;
  });
}

bool exists_trivial_test(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                         double ot_value) {
  return projected_measure_test(mu, nu, cost, ot_value).is_projected;
}

bool exists_trivial_on_face(const DualFace& face, Side side) {
  return min_potential_range(face, side) <= kFaceTolerance;
}

bool bitrivial_check(const DualFace& face) {
  if (!all_trivial_test(face, Side::source) || !all_trivial_test(face, Side::target)) {
    return false;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [i, j] : face.tight_set) {
    lo = std::min(lo, face.cost(i, j));
    hi = std::max(hi, face.cost(i, j));
  }
  if (!face.tight_set.empty() && hi - lo > kFaceTolerance) {
    throw SolverError("bitrivial_check: trivial on both sides but the cost varies on the plan support");
  }
  return true;
}

}  // namespace otl
