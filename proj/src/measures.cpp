#include "otlimits/measures.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

namespace otl {

DiscreteMeasure::DiscreteMeasure(std::vector<std::int64_t> ids,
                                 std::optional<Matrix> coords, Vector weights)
    : ids_(std::move(ids)), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (weights_.size() == 0) {
    throw InvalidInput("measure has no points");
  }
  if (static_cast<Index>(ids_.size()) != weights_.size()) {
    throw InvalidInput("measure: " + std::to_string(ids_.size()) + " ids but " +
                       std::to_string(weights_.size()) + " weights");
  }
  if (!weights_.allFinite() || (weights_.array() < 0.0).any()) {
    throw InvalidInput("measure: weights must be finite and non-negative");
  }
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw InvalidInput("measure: weights sum to " + std::to_string(total) +
                       ", expected 1");
  }
  std::unordered_set<std::int64_t> seen;
  for (auto id : ids_) {
    if (!seen.insert(id).second) {
      throw InvalidInput("measure: duplicate point id " + std::to_string(id));
    }
  }
  if (coords_) {
    if (coords_->rows() != weights_.size()) {
      throw InvalidInput("measure: coordinate rows do not match point count");
    }
    if (!coords_->allFinite()) {
      throw InvalidInput("measure: non-finite coordinate");
    }
  }
}

namespace {

std::vector<std::int64_t> iota_ids(Index n) {
  std::vector<std::int64_t> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::labeled(Vector weights) {
  auto ids = iota_ids(weights.size());
  return DiscreteMeasure(std::move(ids), std::nullopt, std::move(weights));
}

DiscreteMeasure DiscreteMeasure::with_coords(Matrix coords, Vector weights) {
  auto ids = iota_ids(weights.size());
  return DiscreteMeasure(std::move(ids), std::move(coords), std::move(weights));
}

DiscreteMeasure DiscreteMeasure::on_line(const std::vector<double>& xs,
                                         const std::vector<double>& weights) {
  if (xs.size() != weights.size()) {
    throw InvalidInput("on_line: coordinate and weight counts differ");
  }
  const auto n = static_cast<Index>(xs.size());
  Matrix coords = Eigen::Map<const Vector>(xs.data(), n);
  Vector w = Eigen::Map<const Vector>(weights.data(), n);
  return with_coords(std::move(coords), std::move(w));
}

DiscreteMeasure DiscreteMeasure::reweighted(Vector weights) const {
  if (weights.size() != size()) {
    throw InvalidInput("reweighted: weight count does not match point count");
  }
  return DiscreteMeasure(ids_, coords_, std::move(weights));
}

const Matrix& DiscreteMeasure::coords() const {
  if (!coords_) throw InvalidInput("measure has no coordinates");
  return *coords_;
}

std::vector<Index> support(const DiscreteMeasure& measure) {
  std::vector<Index> idx;
  for (Index i = 0; i < measure.size(); ++i) {
    if (measure.weight(i) > 0.0) idx.push_back(i);
  }
  return idx;
}

CostSpec::CostSpec(Kind kind) : kind_(std::move(kind)) {
  if (const auto* pd = std::get_if<PowerDistance>(&kind_)) {
    if (!(pd->p >= 0.5) || !std::isfinite(pd->p)) {
      throw InvalidInput("power cost: exponent must be >= 1/2");
    }
  } else if (const auto* tp = std::get_if<ThresholdedPower>(&kind_)) {
    if (!(tp->p >= 0.5) || !std::isfinite(tp->p)) {
      throw InvalidInput("thresholded cost: exponent must be >= 1/2");
    }
    if (!(tp->threshold > 0.0) || !std::isfinite(tp->threshold)) {
      throw InvalidInput("thresholded cost: threshold must be > 0");
    }
  } else {
    const auto& m = std::get<ExplicitMatrix>(kind_).values;
    if (!m.allFinite()) throw InvalidInput("cost matrix: non-finite entry");
    if ((m.array() < 0.0).any()) throw InvalidInput("cost matrix: negative entry");
  }
}

CostMatrix::CostMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.size() == 0) throw InvalidInput("cost matrix is empty");
  if (!values_.allFinite()) throw InvalidInput("cost matrix: non-finite entry");
  if ((values_.array() < 0.0).any()) {
    throw InvalidInput("cost matrix: negative entry");
  }
  sup_bound_ = values_.maxCoeff();
}

CostMatrix cost_matrix(const CostSpec& spec, const Matrix& x_coords,
                       const Matrix& y_coords) {
  if (!spec.is_parametric()) {
    const auto& m = std::get<ExplicitMatrix>(spec.kind()).values;
    if (m.rows() != x_coords.rows() || m.cols() != y_coords.rows()) {
      throw InvalidInput("cost matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", point sets are " +
                         std::to_string(x_coords.rows()) + "x" +
                         std::to_string(y_coords.rows()));
    }
    return CostMatrix(m);
  }
  if (x_coords.cols() != y_coords.cols()) {
    throw InvalidInput("cost_matrix: coordinate dimensions differ");
  }
  Matrix c(x_coords.rows(), y_coords.rows());
  for (Index i = 0; i < x_coords.rows(); ++i) {
    for (Index j = 0; j < y_coords.rows(); ++j) {
      c(i, j) = spec.evaluate(x_coords.row(i), y_coords.row(j));
    }
  }
  return CostMatrix(std::move(c));
}

CostMatrix cost_matrix(const CostSpec& spec, const DiscreteMeasure& x_points,
                       const DiscreteMeasure& y_points) {
  if (!spec.is_parametric()) {
    const auto& m = std::get<ExplicitMatrix>(spec.kind()).values;
    if (m.rows() != x_points.size() || m.cols() != y_points.size()) {
      throw InvalidInput("cost matrix dimensions do not match the point sets");
    }
    return CostMatrix(m);
  }
  if (!x_points.has_coords() || !y_points.has_coords()) {
    throw InvalidInput("parametric cost needs point coordinates");
  }
  return cost_matrix(spec, x_points.coords(), y_points.coords());
}

Matrix ProbeGrid::points() const {
  const Index d = dimension();
  Index total = 1;
  for (Index k = 0; k < d; ++k) total *= points_per_axis;
  Matrix pts(total, d);
  std::vector<int> counter(static_cast<std::size_t>(d), 0);
  for (Index r = 0; r < total; ++r) {
    for (Index k = 0; k < d; ++k) {
      pts(r, k) = lower(k) + counter[static_cast<std::size_t>(k)] * spacing(k);
    }
    for (Index k = d - 1; k >= 0; --k) {
      if (++counter[static_cast<std::size_t>(k)] < points_per_axis) break;
      counter[static_cast<std::size_t>(k)] = 0;
    }
  }
  return pts;
}

namespace {

void check_grid(const CostSpec& spec, const ProbeGrid& grid, int min_points) {
  if (!spec.is_parametric()) {
    throw InvalidInput("regularity probes need a parametric cost");
  }
  if (grid.dimension() == 0 || grid.upper.size() != grid.dimension()) {
    throw InvalidInput("probe grid: bounds missing or of different dimension");
  }
  if (grid.points_per_axis < min_points) {
    throw InvalidInput("probe grid: need at least " + std::to_string(min_points) +
                       " points per axis");
  }
  if (((grid.upper - grid.lower).array() <= 0.0).any()) {
    throw InvalidInput("probe grid: degenerate cell");
  }
}

// Visits every centered second difference of c(., y) along each grid axis,
// together with the matching second difference of |x|^2.
template <typename Visit>
void for_each_second_difference(const CostSpec& spec, const ProbeGrid& grid,
                                Visit&& visit) {
  const Matrix pts = grid.points();
  const Index d = grid.dimension();
  const int g = grid.points_per_axis;
  // stride of axis k in the row-major enumeration of points()
  std::vector<Index> stride(static_cast<std::size_t>(d), 1);
  for (Index k = d - 2; k >= 0; --k) {
    stride[static_cast<std::size_t>(k)] = stride[static_cast<std::size_t>(k + 1)] * g;
  }
  for (Index yi = 0; yi < pts.rows(); ++yi) {
    for (Index xi = 0; xi < pts.rows(); ++xi) {
      for (Index k = 0; k < d; ++k) {
        const Index s = stride[static_cast<std::size_t>(k)];
        const Index pos = (xi / s) % g;
        if (pos == 0 || pos == g - 1) continue;
        const double c0 = spec.evaluate(pts.row(xi), pts.row(yi));
        const double cm = spec.evaluate(pts.row(xi - s), pts.row(yi));
        const double cp = spec.evaluate(pts.row(xi + s), pts.row(yi));
        const double h = grid.spacing(k);
        visit(cp - 2.0 * c0 + cm, 2.0 * h * h, std::max({c0, cm, cp}));
      }
    }
  }
}

}  // namespace

RegularityReport holder_estimate(const CostSpec& spec, const ProbeGrid& grid,
                                 double alpha) {
  check_grid(spec, grid, 2);
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidInput("holder_estimate: alpha must lie in (0, 1]");
  }
  const Matrix pts = grid.points();
  const Index n = pts.rows();
  Matrix c(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) c(i, j) = spec.evaluate(pts.row(i), pts.row(j));
  }
  Vector dist_pow(n * n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      dist_pow(a * n + b) = std::pow((pts.row(a) - pts.row(b)).norm(), alpha);
    }
  }
  double best = 0.0;
  // pairs (x, y), (x', y')
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      for (Index xp = 0; xp < n; ++xp) {
        const double dx = dist_pow(x * n + xp);
        for (Index yp = 0; yp < n; ++yp) {
          const double denom = dx + dist_pow(y * n + yp);
          if (denom <= 0.0) continue;
          best = std::max(best, std::abs(c(x, y) - c(xp, yp)) / denom);
        }
      }
    }
  }

  RegularityReport report;
  report.holder_alpha = alpha;
  report.holder_constant = best;
  report.cell = grid;
  if (grid.points_per_axis >= 3) {
    double lam = 0.0;
    for_each_second_difference(spec, grid, [&](double d2, double quad, double) {
      lam = std::max(lam, d2 / quad);
    });
    report.semiconcavity_lambda = lam;
  }
  return report;
}

bool semiconcavity_check(const CostSpec& spec, const ProbeGrid& grid,
                         double lambda) {
  check_grid(spec, grid, 3);
  double sup_cost = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for_each_second_difference(spec, grid, [&](double d2, double quad, double cmax) {
    worst = std::max(worst, d2 - lambda * quad);
    sup_cost = std::max(sup_cost, cmax);
  });
  return worst <= 1e-8 * (1.0 + sup_cost);
}

}  // namespace otl
