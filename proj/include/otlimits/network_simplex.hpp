#ifndef OTLIMITS_NETWORK_SIMPLEX_HPP
#define OTLIMITS_NETWORK_SIMPLEX_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace otl {

/// Uncapacitated arc `tail -> head` with linear cost.
struct FlowArc {
  int tail;
  int head;
  double cost;
};

/// Result of a min-cost flow solve. Potentials satisfy
/// p[tail] - p[head] <= cost + tolerance on every arc, with equality on the
/// final spanning-tree basis, and p[0] = 0.
struct FlowSolution {
  Eigen::VectorXd flow;
  Eigen::VectorXd potential;
  std::vector<int> basis;
  double cost = 0.0;
  std::size_t pivots = 0;
  std::size_t degenerate_pivots = 0;
};

/// Primal network simplex for
///
///   min sum_a cost_a x_a  s.t.  out(v) - in(v) = supply_v,  x >= 0,
///
/// started from a caller-supplied feasible spanning tree. Pricing is Dantzig
/// (most negative reduced cost) until a run of degenerate pivots, after which
/// Bland's rule (smallest eligible arc index, smallest-index leaving arc among
/// ties) takes over until the next non-degenerate pivot.
class NetworkSimplex {
 public:
  NetworkSimplex(int num_nodes, std::vector<FlowArc> arcs,
                 Eigen::VectorXd supply);

  /// `tree` holds num_nodes - 1 arc indices spanning all nodes whose tree
  /// flows are non-negative. Throws SolverError on an infeasible start,
  /// unboundedness or pivot-limit exhaustion.
  FlowSolution solve(std::span<const int> tree) const;

  int num_nodes() const { return num_nodes_; }
  const std::vector<FlowArc>& arcs() const { return arcs_; }

 private:
  int num_nodes_;
  std::vector<FlowArc> arcs_;
  Eigen::VectorXd supply_;
  double cost_scale_ = 1.0;
  double supply_scale_ = 1.0;
};

}  // namespace otl

#endif  // OTLIMITS_NETWORK_SIMPLEX_HPP
