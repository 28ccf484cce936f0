#include "otlimits/dual_face.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otlimits/network_simplex.hpp"

namespace otl {

namespace {

// Face LP as min-cost flow. Node 0 is a root whose potential is pinned to 0,
// X atoms follow, then Y atoms, then any auxiliary nodes. With p the node
// potentials, f_i = p(x_i) and g_j = -p(y_j); arc (u -> v, cost c) encodes
// p_u - p_v <= c.
class FaceGraph {
 public:
  FaceGraph(const Matrix& cost, const std::vector<std::pair<Index, Index>>* tight,
            double box, int aux_nodes)
      : n_(static_cast<int>(cost.rows())),
        m_(static_cast<int>(cost.cols())),
        nodes_(1 + n_ + m_ + aux_nodes),
        up_(static_cast<std::size_t>(nodes_), -1),
        down_(static_cast<std::size_t>(nodes_), -1) {
    for (int i = 0; i < n_; ++i) add_root_pair(x(i), box, box);  // |f_i| <= box
    for (int j = 0; j < m_; ++j) add_root_pair(y(j), box, 0.0);  // -box <= g_j <= 0
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) arcs_.push_back({x(i), y(j), cost(i, j)});
    }
    if (tight != nullptr) {
      for (const auto& [i, j] : *tight) {
        arcs_.push_back({y(static_cast<int>(j)), x(static_cast<int>(i)), -cost(i, j)});
      }
    }
  }

  int x(Index i) const { return 1 + static_cast<int>(i); }
  int y(Index j) const { return 1 + n_ + static_cast<int>(j); }
  int aux(int k) const { return 1 + n_ + m_ + k; }
  int num_nodes() const { return nodes_; }

  // Arcs v -> root (cost up_cost) and root -> v (cost down_cost).
  void add_root_pair(int v, double up_cost, double down_cost) {
    up_[static_cast<std::size_t>(v)] = static_cast<int>(arcs_.size());
    arcs_.push_back({v, 0, up_cost});
    down_[static_cast<std::size_t>(v)] = static_cast<int>(arcs_.size());
    arcs_.push_back({0, v, down_cost});
  }

  void add_arc(int tail, int head, double cost) { arcs_.push_back({tail, head, cost}); }

  // Star around the root is always primal feasible.
  FlowSolution solve(const Vector& supply) const {
    std::vector<int> tree;
    tree.reserve(static_cast<std::size_t>(nodes_ - 1));
    for (int v = 1; v < nodes_; ++v) {
      tree.push_back(supply(v) >= 0.0 ? up_[static_cast<std::size_t>(v)]
                                      : down_[static_cast<std::size_t>(v)]);
    }
    return NetworkSimplex(nodes_, arcs_, supply).solve(tree);
  }

  Vector supply_for(const Vector& z, const Vector& w) const {
    Vector b = Vector::Zero(nodes_);
    b.segment(1, n_) = z;
    b.segment(1 + n_, m_) = -w;
    b(0) = -b.sum();
    return b;
  }

  FaceOptimum read(const FlowSolution& sol, const Vector& z, const Vector& w) const {
    FaceOptimum out;
    out.f = sol.potential.segment(1, n_);
    out.g = -sol.potential.segment(1 + n_, m_);
    out.value = z.dot(out.f) + w.dot(out.g);
    return out;
  }

 private:
  int n_;
  int m_;
  int nodes_;
  std::vector<FlowArc> arcs_;
  std::vector<int> up_;
  std::vector<int> down_;
};

void check_objective(const DualFace& face, const Vector& z, const Vector& w) {
  if (z.size() != face.cost.rows() || w.size() != face.cost.cols()) {
    throw InvalidInput("sup_linear: objective sizes do not match the face");
  }
  if (!z.allFinite() || !w.allFinite()) {
    throw InvalidInput("sup_linear: non-finite objective");
  }
  const double scale = 1.0 + z.lpNorm<1>() + w.lpNorm<1>();
  if (std::abs(z.sum() - w.sum()) > 1e-9 * scale) {
    throw InvalidInput("sup_linear: objective is not invariant under the shift (f + a, g - a)");
  }
}

std::vector<Index> positive_atoms(const Vector& weights) {
  std::vector<Index> idx;
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights(i) > 0.0) idx.push_back(i);
  }
  return idx;
}

bool same_vertex(const FaceOptimum& a, const FaceOptimum& b, double tol) {
  return (a.f - b.f).cwiseAbs().maxCoeff() <= tol && (a.g - b.g).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

DualFace build_face(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                    const TransportSolution& solution) {
  if (mu.size() != cost.rows() || nu.size() != cost.cols() ||
      solution.plan.rows() != cost.rows() || solution.plan.cols() != cost.cols() ||
      solution.dual_f.size() != cost.rows() || solution.dual_g.size() != cost.cols()) {
    throw InvalidInput("build_face: solution, measures and cost disagree in size");
  }
  const double box = cost.sup_bound();
  const double tol = 1e-9 * (1.0 + box);
  const auto diag = diagnose(solution, mu, nu, cost);
  if (std::abs(diag.gap) > tol || diag.marginal_error > 1e-10) {
    throw InfeasibleFace("build_face: solution is not certified optimal (gap " +
                         std::to_string(diag.gap) + ")");
  }

  DualFace face{cost, plan_support(solution.plan), solution.value, box, mu, nu,
                solution.dual_f, solution.dual_g};

  const Vector& f = face.reference_f;
  const Vector& g = face.reference_g;
  bool ok = f.cwiseAbs().maxCoeff() <= box + tol && g.maxCoeff() <= tol &&
            g.minCoeff() >= -box - tol && diag.dual_infeasibility <= tol;
  for (const auto& [i, j] : face.tight_set) {
    ok = ok && std::abs(f(i) + g(j) - cost(i, j)) <= tol;
  }
  if (!ok) {
    throw InfeasibleFace("build_face: normalised dual is not a member of the face");
  }
  return face;
}

DualFace build_face(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const CostMatrix& cost, const TransportSolution& solution) {
  return build_face(mu.weights(), nu.weights(), cost, solution);
}

FaceOptimum sup_linear(const DualFace& face, const Vector& z, const Vector& w,
                       double box) {
  check_objective(face, z, w);
  if (!(box >= 0.0) || !std::isfinite(box)) {
    throw InvalidInput("sup_linear: box bound must be finite and non-negative");
  }
  const FaceGraph graph(face.cost.values(), &face.tight_set, box, 0);
  try {
    return graph.read(graph.solve(graph.supply_for(z, w)), z, w);
  } catch (const SolverError& e) {
    throw InfeasibleFace(std::string("sup_linear: ") + e.what());
  }
}

FaceOptimum sup_linear(const DualFace& face, const Vector& z, const Vector& w) {
  return sup_linear(face, z, w, face.box_bound);
}

double sup_linear_epsilon(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                          double ot_value, double epsilon, const Vector& z,
                          const Vector& w) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInput("sup_linear_epsilon: epsilon must be finite and >= 0");
  }
  if (mu.size() != cost.rows() || nu.size() != cost.cols() || z.size() != mu.size() ||
      w.size() != nu.size()) {
    throw InvalidInput("sup_linear_epsilon: sizes do not match the cost");
  }
  const double box = cost.sup_bound();
  const FaceGraph graph(cost.values(), nullptr, box, 0);
  const double gap_tol = 1e-12 * (1.0 + box);
  const double value_tol = 1e-10 * (1.0 + box) * (1.0 + z.lpNorm<1>() + w.lpNorm<1>());

  struct Cut {
    double lambda;
    double value;
    double slope;
  };
  // h(lambda) = max over the box-only polytope of (z + lambda mu).f + (w + lambda nu).g
  //             - lambda (ot_value - epsilon), evaluated through its maximiser.
  auto cut_at = [&](double lambda) {
    const Vector zl = z + lambda * mu;
    const Vector wl = w + lambda * nu;
    const FaceOptimum opt = graph.read(graph.solve(graph.supply_for(zl, wl)), zl, wl);
    double excess = mu.dot(opt.f) + nu.dot(opt.g) - ot_value;
    if (std::abs(excess) <= gap_tol) excess = 0.0;
    const double slope = excess + epsilon;
    return Cut{lambda, z.dot(opt.f) + w.dot(opt.g) + lambda * slope, slope};
  };

  Cut lo = cut_at(0.0);
  if (lo.slope >= -gap_tol) return lo.value;
  Cut hi{};
  for (double lambda = 1.0;; lambda *= 4.0) {
    if (lambda > 1e16) {
      throw NonConvergence("sup_linear_epsilon: multiplier bracket not found", lo.slope);
    }
    hi = cut_at(lambda);
    if (hi.slope >= -gap_tol) break;
    lo = hi;
  }

  double residual = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    double x = (hi.value - lo.value - hi.slope * hi.lambda + lo.slope * lo.lambda) /
               (lo.slope - hi.slope);
    x = std::clamp(x, lo.lambda, hi.lambda);
    const double model = lo.value + lo.slope * (x - lo.lambda);
    const Cut mid = cut_at(x);
    residual = mid.value - model;
    if (residual <= value_tol) return std::min({mid.value, lo.value, hi.value});
    if (mid.slope >= -gap_tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw NonConvergence("sup_linear_epsilon: cutting planes did not close", residual);
}

DifferenceRanges difference_ranges(const DualFace& face, Side side) {
  const Vector& weights = side == Side::source ? face.mu : face.nu;
  const auto atoms = positive_atoms(weights);
  DifferenceRanges out;
  if (atoms.empty()) return out;
  out.reference = atoms.front();
  const Vector zero_f = Vector::Zero(face.cost.rows());
  const Vector zero_g = Vector::Zero(face.cost.cols());
  for (std::size_t t = 1; t < atoms.size(); ++t) {
    Vector dir = Vector::Zero(weights.size());
    dir(atoms[t]) = 1.0;
    dir(out.reference) = -1.0;
    FaceOptimum up;
    FaceOptimum down;
    if (side == Side::source) {
      up = sup_linear(face, dir, zero_g);
      down = sup_linear(face, -dir, zero_g);
    } else {
      up = sup_linear(face, zero_f, dir);
      down = sup_linear(face, zero_f, -dir);
    }
    out.ranges.push_back({atoms[t], -down.value, up.value});
    out.witnesses.push_back(std::move(up));
    out.witnesses.push_back(std::move(down));
  }
  return out;
}

bool uniqueness_test(const DualFace& face, Side side) {
  const auto ranges = difference_ranges(face, side);
  return std::all_of(ranges.ranges.begin(), ranges.ranges.end(),
                     [](const DifferenceRange& r) { return r.width() <= kFaceTolerance; });
}

double min_potential_range(const DualFace& face, Side side) {
  const Vector& weights = side == Side::source ? face.mu : face.nu;
  const auto atoms = positive_atoms(weights);
  FaceGraph graph(face.cost.values(), &face.tight_set, face.box_bound, 2);
  // s = p(low), t = p(high); maximise s - t subject to s <= p_v <= t on the
  // support. The range of g equals the range of p on Y nodes.
  const int low = graph.aux(0);
  const int high = graph.aux(1);
  graph.add_root_pair(low, face.box_bound, face.box_bound);
  graph.add_root_pair(high, face.box_bound, face.box_bound);
  for (Index a : atoms) {
    const int v = side == Side::source ? graph.x(a) : graph.y(a);
    graph.add_arc(v, high, 0.0);
    graph.add_arc(low, v, 0.0);
  }
  Vector supply = Vector::Zero(graph.num_nodes());
  supply(low) = 1.0;
  supply(high) = -1.0;
  try {
    const FlowSolution sol = graph.solve(supply);
    return std::max(0.0, sol.potential(high) - sol.potential(low));
  } catch (const SolverError& e) {
    throw InfeasibleFace(std::string("min_potential_range: ") + e.what());
  }
}

std::vector<FaceOptimum> probe_vertices(const DualFace& face) {
  std::vector<FaceOptimum> found;
  found.push_back({dual_objective(face.reference_f, face.reference_g, face.mu, face.nu),
                   face.reference_f, face.reference_g});
  const double tol = 1e-9 * (1.0 + face.box_bound);
  for (Side side : {Side::source, Side::target}) {
    for (auto& v : difference_ranges(face, side).witnesses) {
      const bool seen = std::any_of(found.begin(), found.end(), [&](const FaceOptimum& o) {
        return same_vertex(o, v, tol);
      });
      if (!seen) found.push_back(std::move(v));
    }
  }
  return found;
}

FaceSummary summarize(const DualFace& face) {
  return {face.ot_value, face.tight_set, probe_vertices(face).size(), uniqueness_test(face)};
}

}  // namespace otl
