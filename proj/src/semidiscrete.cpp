#include "otlimits/semidiscrete.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "otlimits/limit_law.hpp"

namespace otl {

DensityMeasure1D::DensityMeasure1D(std::vector<double> breaks, std::vector<double> values,
                                   int nodes)
    : breaks_(std::move(breaks)), values_(std::move(values)), nodes_(nodes) {
  if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size()) {
    throw InvalidInput("density: need K + 1 breakpoints for K density values");
  }
  if (nodes_ < 1) throw InvalidInput("density: quadrature needs at least one node");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(breaks_[k]) || !std::isfinite(breaks_[k + 1]) ||
        !(breaks_[k + 1] > breaks_[k])) {
      throw InvalidInput("density: breakpoints must be finite and strictly increasing");
    }
    if (!std::isfinite(values_[k]) || values_[k] < 0.0) {
      throw InvalidInput("density: values must be finite and non-negative");
    }
  }
  const double h = spacing();
  points_.resize(nodes_);
  masses_.resize(nodes_);
  double prev = 0.0;
  for (int k = 0; k < nodes_; ++k) {
    points_(k) = lower() + (k + 0.5) * h;
    const double right = k + 1 == nodes_ ? upper() : lower() + (k + 1) * h;
    const double next = cdf(right);
    masses_(k) = next - prev;
    prev = next;
  }
  if (std::abs(masses_.sum() - 1.0) > 1e-10) {
    throw InvalidInput("density: integrates to " + std::to_string(masses_.sum()) +
                       ", expected 1");
  }
}

DensityMeasure1D DensityMeasure1D::uniform(double lower, double upper, int nodes) {
  if (!(upper > lower)) throw InvalidInput("uniform density: empty interval");
  return DensityMeasure1D({lower, upper}, {1.0 / (upper - lower)}, nodes);
}

DensityMeasure1D DensityMeasure1D::piecewise_constant(std::vector<double> breakpoints,
                                                      std::vector<double> values, int nodes) {
  return DensityMeasure1D(std::move(breakpoints), std::move(values), nodes);
}

bool DensityMeasure1D::connected_support() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

double DensityMeasure1D::cdf(double t) const {
  if (t <= lower()) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double right = std::min(t, breaks_[k + 1]);
    acc += values_[k] * (right - breaks_[k]);
    if (t <= breaks_[k + 1]) break;
  }
  return acc;
}

namespace {

struct Evaluation {
  double objective = 0.0;
  Vector cell_mass;
  // d(cell_mass)/df as a graph Laplacian: each boundary point between cells
  // i and j adds density / |slope_i - slope_j| to (i, i), (j, j) and
  // subtracts it from (i, j), (j, i)
  Matrix mass_jacobian;
};

// Cost tables: value at each bin midpoint and secant slope across each bin.
class SemidiscreteProblem {
 public:
  SemidiscreteProblem(const Vector& atoms, const DensityMeasure1D& nu, const CostSpec& cost)
      : atoms_(atoms.size()), bins_(nu.nodes()), h_(nu.spacing()) {
    mid_.resize(atoms_, bins_);
    slope_.resize(atoms_, bins_);
    density_ = nu.node_weights() / h_;
    for (Index i = 0; i < atoms_; ++i) {
      double left = cost.evaluate(atoms(i), nu.lower());
      sup_ = std::max(sup_, left);
      for (Index k = 0; k < bins_; ++k) {
        const double right = cost.evaluate(atoms(i), nu.lower() + static_cast<double>(k + 1) * h_);
        mid_(i, k) = cost.evaluate(atoms(i), nu.node_points()(k));
        slope_(i, k) = (right - left) / h_;
        sup_ = std::max({sup_, right, mid_(i, k)});
        left = right;
      }
    }
  }

  double sup_cost() const { return sup_; }

  // Dual objective and cell masses with the lower envelope of the per-bin
  // lines integrated exactly.
  Evaluation evaluate(const Vector& mu, const Vector& f) const {
    Evaluation ev{mu.dot(f), Vector::Zero(atoms_), Matrix::Zero(atoms_, atoms_)};
    const double half = 0.5 * h_;
    for (Index k = 0; k < bins_; ++k) {
      const double dens = density_(k);
      if (dens <= 0.0) continue;
      auto line_at = [&](Index i, double u) { return mid_(i, k) - f(i) + slope_(i, k) * u; };
      double u = -half;
      Index cur = 0;
      for (Index i = 1; i < atoms_; ++i) {
        const double a = line_at(i, u);
        const double b = line_at(cur, u);
        if (a < b || (a == b && slope_(i, k) < slope_(cur, k))) cur = i;
      }
      while (u < half) {
        double stop = half;
        Index next = -1;
        for (Index j = 0; j < atoms_; ++j) {
          const double ds = slope_(cur, k) - slope_(j, k);
          if (ds <= 0.0) continue;
          const double t = (line_at(j, 0.0) - line_at(cur, 0.0)) / ds;
          const bool earlier = t < stop || (next >= 0 && t == stop && ds > slope_(cur, k) - slope_(next, k));
          if (t > u && earlier) {
            stop = t;
            next = j;
          }
        }
        const double a = line_at(cur, 0.0);
        const double s = slope_(cur, k);
        ev.cell_mass(cur) += dens * (stop - u);
        ev.objective += dens * (a * (stop - u) + 0.5 * s * (stop * stop - u * u));
        u = stop;
        if (next < 0) break;
        const double w = dens / (slope_(cur, k) - slope_(next, k));
        ev.mass_jacobian(cur, cur) += w;
        ev.mass_jacobian(next, next) += w;
        ev.mass_jacobian(cur, next) -= w;
        ev.mass_jacobian(next, cur) -= w;
        cur = next;
      }
    }
    return ev;
  }

  std::vector<Index> cells(const Vector& f) const {
    std::vector<Index> owner(static_cast<std::size_t>(bins_));
    for (Index k = 0; k < bins_; ++k) {
      Index best = 0;
      for (Index i = 1; i < atoms_; ++i) {
        if (mid_(i, k) - f(i) < mid_(best, k) - f(best)) best = i;
      }
      owner[static_cast<std::size_t>(k)] = best;
    }
    return owner;
  }

 private:
  Index atoms_;
  Index bins_;
  double h_;
  Matrix mid_;
  Matrix slope_;
  Vector density_;
  double sup_ = 0.0;
};

Vector atom_positions(const DiscreteMeasure& mu) {
  if (!mu.has_coords() || mu.dimension() != 1) {
    throw InvalidInput("semidiscrete: atoms need one-dimensional coordinates");
  }
  return mu.coords().col(0);
}

// Newton direction for the ascent: solves J d = mu - mass on the atoms that
// own mass, with the heaviest one pinned to remove the constant shift. Empty
// when some atom with positive weight has an empty cell or the system is
// singular.
std::optional<Vector> newton_direction(const Vector& mu, const Evaluation& ev) {
  std::vector<Index> active;
  Index pin = -1;
  for (Index i = 0; i < mu.size(); ++i) {
    if (ev.cell_mass(i) <= 0.0) {
      if (mu(i) > 0.0) return std::nullopt;
      continue;
    }
    if (pin < 0 || ev.cell_mass(i) > ev.cell_mass(pin)) pin = i;
    active.push_back(i);
  }
  std::erase(active, pin);
  Vector dir = Vector::Zero(mu.size());
  if (active.empty()) return dir;
  const auto k = static_cast<Index>(active.size());
  Matrix jac(k, k);
  Vector rhs(k);
  for (Index a = 0; a < k; ++a) {
    rhs(a) = mu(active[static_cast<std::size_t>(a)]) - ev.cell_mass(active[static_cast<std::size_t>(a)]);
    for (Index b = 0; b < k; ++b) {
      jac(a, b) = ev.mass_jacobian(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
    }
  }
  const Eigen::LDLT<Matrix> ldlt(jac);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * ldlt.vectorD().maxCoeff()) {
    return std::nullopt;
  }
  const Vector sol = ldlt.solve(rhs);
  if (!sol.allFinite()) return std::nullopt;
  for (Index a = 0; a < k; ++a) dir(active[static_cast<std::size_t>(a)]) = sol(a);
  return dir;
}

SemiDualState solve_with(const SemidiscreteProblem& problem, const Vector& mu,
                         const SemidiscreteOptions& options) {
  SemiDualState state;
  state.f = options.warm_start ? *options.warm_start : Vector::Zero(mu.size());
  if (state.f.size() != mu.size()) {
    throw InvalidInput("semidiscrete: warm start has the wrong length");
  }
  Evaluation ev = problem.evaluate(mu, state.f);
  state.objective_history.push_back(ev.objective);
  const double eta_max = problem.sup_cost() > 0.0 ? problem.sup_cost() : 1.0;
  double eta = eta_max;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  auto accepts = [&](const Evaluation& next) {
    return next.objective >= ev.objective - 64.0 * kEps * (1.0 + std::abs(ev.objective));
  };
  auto residual_of = [&](const Evaluation& e) { return (mu - e.cell_mass).cwiseAbs().maxCoeff(); };
  double residual = residual_of(ev);
  int it = 0;
  for (; it < options.max_iterations && residual > options.tolerance; ++it) {
    // damped Newton first: accept the longest halving of the step that keeps
    // the objective and shrinks the residual
    bool moved = false;
    if (const auto dir = newton_direction(mu, ev)) {
      for (double tau = 1.0; tau > 1e-6; tau *= 0.5) {
        Evaluation next = problem.evaluate(mu, state.f + tau * *dir);
        if (accepts(next) && residual_of(next) < residual) {
          state.f += tau * *dir;
          ev = std::move(next);
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      const Vector step = mu - ev.cell_mass;
      for (;;) {
        const Vector trial = state.f + eta * step;
        Evaluation next = problem.evaluate(mu, trial);
        if (accepts(next)) {
          state.f = trial;
          ev = std::move(next);
          eta = std::min(eta_max, 1.5 * eta);
          break;
        }
        eta *= 0.5;
        if (eta < 1e-14 * eta_max) {
          throw NonConvergence("semidiscrete: step size collapsed", residual);
        }
      }
    }
    state.objective_history.push_back(ev.objective);
    residual = residual_of(ev);
  }
  if (residual > options.tolerance) {
    throw NonConvergence("semidiscrete: no convergence after " + std::to_string(it) +
                             " iterations (residual " + std::to_string(residual) + ")",
                         residual);
  }
  state.cells = problem.cells(state.f);
  std::vector<char> owns(static_cast<std::size_t>(mu.size()), 0);
  for (Index c : state.cells) owns[static_cast<std::size_t>(c)] = 1;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu(i) > 0.0 && !owns[static_cast<std::size_t>(i)]) {
      throw QuadratureUnderflow("semidiscrete: atom " + std::to_string(i) +
                                " owns no quadrature node; increase the node count");
    }
  }
  state.cell_mass = ev.cell_mass;
  state.objective = ev.objective;
  state.residual = residual;
  state.iterations = it;
  return state;
}

}  // namespace

SemiDualState solve_semidiscrete(const DiscreteMeasure& mu, const DensityMeasure1D& nu,
                                 const CostSpec& cost, const SemidiscreteOptions& options) {
  if (!cost.is_parametric()) {
    throw InvalidInput("semidiscrete: the cost must be a parametric cost");
  }
  const SemidiscreteProblem problem(atom_positions(mu), nu, cost);
  return solve_with(problem, mu.weights(), options);
}

ExperimentReport semidiscrete_clt_experiment(const DiscreteMeasure& mu,
                                             const DensityMeasure1D& nu,
                                             const CostSpec& cost, std::size_t n,
                                             std::size_t reps, std::uint64_t seed, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  if (!nu.connected_support()) {
    throw InvalidInput("semidiscrete CLT: the density must be positive on its whole interval");
  }
  if (n == 0 || reps == 0) throw InvalidInput("semidiscrete CLT: n and reps must be positive");
  if (!cost.is_parametric()) throw InvalidInput("semidiscrete: the cost must be parametric");
  const SemidiscreteProblem problem(atom_positions(mu), nu, cost);
  const SemiDualState population = solve_with(problem, mu.weights(), {});

  ExperimentReport report;
  report.mode = "semidiscrete_one_sample_mu";
  report.n = n;
  report.reps = reps;
  report.seed = seed;
  report.population_value = population.objective;
  report.limit_variance = normal_limit_params(population.f, mu.weights());
  const double snap = 1e-12 * (1.0 + problem.sup_cost());
  const double root_n = std::sqrt(static_cast<double>(n));
  SemidiscreteOptions warm;
  warm.warm_start = population.f;
  report.statistic_samples = run_replications(
      reps, jobs,
      [&](std::size_t i) {
        Rng rng = make_stream(seed, "semidiscrete-clt", i);
        const Vector mu_hat = empirical_weights(mu.weights(), n, rng);
        const double diff = solve_with(problem, mu_hat, warm).objective - population.objective;
        return std::abs(diff) <= snap ? 0.0 : root_n * diff;
      },
      report.failures);
  report.quantiles = summarize_samples(report.statistic_samples);
  const double variance = *report.limit_variance;
  report.limit_reference = "normal(0, " + std::to_string(variance) + ")";
  report.ks_distance = ks_distance(report.statistic_samples,
                                   [variance](double x) { return normal_cdf(x, variance); });
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace otl
