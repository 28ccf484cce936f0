#include "otlimits/ot_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otlimits/network_simplex.hpp"

namespace otl {

namespace {

void check_dimensions(const Vector& mu, const Vector& nu, const CostMatrix& cost) {
  if (cost.rows() != mu.size() || cost.cols() != nu.size()) {
    throw InvalidInput("transport: cost is " + std::to_string(cost.rows()) + "x" +
                       std::to_string(cost.cols()) + " but measures have " +
                       std::to_string(mu.size()) + " and " +
                       std::to_string(nu.size()) + " points");
  }
}

// North-west corner rule; returns the n + m - 1 basic cells as arc ids i*m + j.
std::vector<int> north_west_corner(const Vector& mu, const Vector& nu) {
  const auto n = static_cast<int>(mu.size());
  const auto m = static_cast<int>(nu.size());
  std::vector<int> tree;
  tree.reserve(static_cast<std::size_t>(n + m - 1));
  int i = 0;
  int j = 0;
  double row_left = mu(0);
  double col_left = nu(0);
  for (;;) {
    tree.push_back(i * m + j);
    if (i == n - 1 && j == m - 1) break;
    if (i == n - 1) {
      ++j;
      col_left = nu(j);
    } else if (j == m - 1) {
      ++i;
      row_left = mu(i);
    } else if (row_left < col_left) {
      col_left -= row_left;
      ++i;
      row_left = mu(i);
    } else {
      row_left -= col_left;
      ++j;
      col_left = nu(j);
    }
  }
  return tree;
}

}  // namespace

TransportSolution solve_discrete_ot(const Vector& mu, const Vector& nu,
                                    const CostMatrix& cost) {
  check_dimensions(mu, nu, cost);
  const auto n = static_cast<int>(mu.size());
  const auto m = static_cast<int>(nu.size());

  std::vector<FlowArc> arcs;
  arcs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) arcs.push_back({i, n + j, cost(i, j)});
  }
  Vector supply(n + m);
  supply.head(n) = mu;
  supply.tail(m) = -nu;

  const NetworkSimplex simplex(n + m, std::move(arcs), supply);
  const auto tree = north_west_corner(mu, nu);
  const FlowSolution flow = simplex.solve(tree);

  TransportSolution out;
  out.plan = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                            Eigen::RowMajor>>(flow.flow.data(), n, m);
  out.value = (out.plan.array() * cost.values().array()).sum();
  const Vector f = flow.potential.head(n);
  const Vector g = -flow.potential.tail(m);
  auto normalized = normalize_to_fc(f, g, cost);
  out.dual_f = std::move(normalized.f);
  out.dual_g = std::move(normalized.g);
  return out;
}

TransportSolution solve_discrete_ot(const DiscreteMeasure& mu,
                                    const DiscreteMeasure& nu,
                                    const CostMatrix& cost) {
  return solve_discrete_ot(mu.weights(), nu.weights(), cost);
}

DualPair normalize_to_fc(const Vector& f, const Vector& g, const CostMatrix& cost) {
  if (f.size() != cost.rows() || g.size() != cost.cols()) {
    throw InvalidInput("normalize_to_fc: potential sizes do not match the cost");
  }
  const double tol = 1e-9 * (1.0 + cost.sup_bound());
  const Matrix slack = cost.values() - (f.replicate(1, g.size()) +
                                        g.transpose().replicate(f.size(), 1));
  if (slack.minCoeff() < -tol) {
    throw InvalidInput("normalize_to_fc: input pair is not dual feasible");
  }
  Vector g1 = c_transform(f, cost, Direction::x_to_y);
  Vector f1 = c_transform(g1, cost, Direction::y_to_x);
  const double shift = g1.maxCoeff();
  return {f1.array() + shift, g1.array() - shift};
}

double dual_objective(const Vector& f, const Vector& g, const Vector& mu,
                      const Vector& nu) {
  return mu.dot(f) + nu.dot(g);
}

double duality_gap(const TransportSolution& solution, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu, const CostMatrix& cost) {
  const double primal = (solution.plan.array() * cost.values().array()).sum();
  return primal - dual_objective(solution.dual_f, solution.dual_g, mu.weights(),
                                 nu.weights());
}

SolutionDiagnostics diagnose(const TransportSolution& solution, const Vector& mu,
                             const Vector& nu, const CostMatrix& cost) {
  check_dimensions(mu, nu, cost);
  SolutionDiagnostics d;
  const Matrix& plan = solution.plan;
  d.marginal_error = std::max((plan.rowwise().sum() - mu).cwiseAbs().maxCoeff(),
                              (plan.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff());
  d.min_plan_entry = plan.minCoeff();
  const Matrix excess = solution.dual_f.replicate(1, nu.size()) +
                        solution.dual_g.transpose().replicate(mu.size(), 1) -
                        cost.values();
  d.dual_infeasibility = std::max(0.0, excess.maxCoeff());
  for (Index i = 0; i < plan.rows(); ++i) {
    for (Index j = 0; j < plan.cols(); ++j) {
      if (plan(i, j) > kSupportThreshold) {
        d.slackness_violation = std::max(d.slackness_violation, std::abs(excess(i, j)));
      }
    }
  }
  d.gap = (plan.array() * cost.values().array()).sum() -
          dual_objective(solution.dual_f, solution.dual_g, mu, nu);
  return d;
}

std::vector<std::pair<Index, Index>> plan_support(const Matrix& plan, double tau) {
  std::vector<std::pair<Index, Index>> cells;
  for (Index i = 0; i < plan.rows(); ++i) {
    for (Index j = 0; j < plan.cols(); ++j) {
      if (plan(i, j) > tau) cells.emplace_back(i, j);
    }
  }
  return cells;
}

double brute_force_ot(const Vector& mu, const Vector& nu, const CostMatrix& cost) {
  check_dimensions(mu, nu, cost);
  const Index n = mu.size();
  const Index m = nu.size();
  if (n + m > 10) {
    throw InvalidInput("brute_force_ot: instance too large (|X| + |Y| > 10)");
  }
  const Index cells = n * m;
  const Index basis_size = n + m - 1;

  // Marginal constraints with the last column constraint dropped (redundant).
  Matrix full(n + m - 1, cells);
  full.setZero();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      full(i, i * m + j) = 1.0;
      if (j < m - 1) full(n + j, i * m + j) = 1.0;
    }
  }
  Vector rhs(n + m - 1);
  rhs.head(n) = mu;
  rhs.tail(m - 1) = nu.head(m - 1);

  std::vector<char> pick(static_cast<std::size_t>(cells), 0);
  std::fill(pick.begin(), pick.begin() + basis_size, 1);
  double best = std::numeric_limits<double>::infinity();
  Matrix a(basis_size, basis_size);
  std::vector<Index> chosen(static_cast<std::size_t>(basis_size));
  do {
    Index k = 0;
    for (Index c = 0; c < cells; ++c) {
      if (pick[static_cast<std::size_t>(c)]) {
        a.col(k) = full.col(c);
        chosen[static_cast<std::size_t>(k)] = c;
        ++k;
      }
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (lu.rank() < basis_size) continue;
    const Vector x = lu.solve(rhs);
    if (x.minCoeff() < -1e-12) continue;
    double value = 0.0;
    for (Index t = 0; t < basis_size; ++t) {
      const Index c = chosen[static_cast<std::size_t>(t)];
      value += x(t) * cost(c / m, c % m);
    }
    best = std::min(best, value);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace otl
