#include "otlimits/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "otlimits/error.hpp"

namespace otl {

NetworkSimplex::NetworkSimplex(int num_nodes, std::vector<FlowArc> arcs,
                               Eigen::VectorXd supply)
    : num_nodes_(num_nodes), arcs_(std::move(arcs)), supply_(std::move(supply)) {
  if (num_nodes_ < 1 || supply_.size() != num_nodes_) {
    throw InvalidInput("network simplex: supply size does not match node count");
  }
  double cmax = 0.0;
  for (const auto& a : arcs_) {
    if (a.tail < 0 || a.tail >= num_nodes_ || a.head < 0 || a.head >= num_nodes_ ||
        a.tail == a.head) {
      throw InvalidInput("network simplex: arc endpoint out of range");
    }
    if (!std::isfinite(a.cost)) {
      throw InvalidInput("network simplex: non-finite arc cost");
    }
    cmax = std::max(cmax, std::abs(a.cost));
  }
  cost_scale_ = 1.0 + cmax;
  supply_scale_ = 1.0 + supply_.cwiseAbs().maxCoeff();
}

namespace {

void erase_arc(std::vector<int>& list, int arc) {
  auto it = std::find(list.begin(), list.end(), arc);
  if (it != list.end()) {
    *it = list.back();
    list.pop_back();
  }
}

}  // namespace

FlowSolution NetworkSimplex::solve(std::span<const int> tree) const {
  const int n_nodes = num_nodes_;
  const auto n_arcs = static_cast<int>(arcs_.size());
  if (static_cast<int>(tree.size()) != n_nodes - 1) {
    throw SolverError("network simplex: initial tree needs " +
                      std::to_string(n_nodes - 1) + " arcs");
  }

  std::vector<char> in_tree(static_cast<std::size_t>(n_arcs), 0);
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_nodes));
  for (int a : tree) {
    if (a < 0 || a >= n_arcs || in_tree[static_cast<std::size_t>(a)]) {
      throw SolverError("network simplex: invalid or repeated tree arc");
    }
    in_tree[static_cast<std::size_t>(a)] = 1;
    adj[static_cast<std::size_t>(arcs_[static_cast<std::size_t>(a)].tail)].push_back(a);
    adj[static_cast<std::size_t>(arcs_[static_cast<std::size_t>(a)].head)].push_back(a);
  }

  const double flow_tol = 1e-14 * supply_scale_;
  const double rc_tol = 1e-11 * cost_scale_;

  // Tree flows by leaf elimination.
  Eigen::VectorXd flow = Eigen::VectorXd::Zero(n_arcs);
  {
    Eigen::VectorXd residual = supply_;
    std::vector<int> degree(static_cast<std::size_t>(n_nodes));
    std::vector<char> used(static_cast<std::size_t>(n_arcs), 0);
    std::vector<int> leaves;
    for (int v = 0; v < n_nodes; ++v) {
      degree[static_cast<std::size_t>(v)] = static_cast<int>(adj[static_cast<std::size_t>(v)].size());
      if (degree[static_cast<std::size_t>(v)] == 1) leaves.push_back(v);
    }
    int assigned = 0;
    while (!leaves.empty()) {
      const int v = leaves.back();
      leaves.pop_back();
      if (degree[static_cast<std::size_t>(v)] != 1) continue;
      int arc = -1;
      for (int a : adj[static_cast<std::size_t>(v)]) {
        if (!used[static_cast<std::size_t>(a)]) {
          arc = a;
          break;
        }
      }
      const FlowArc& fa = arcs_[static_cast<std::size_t>(arc)];
      const int u = fa.tail == v ? fa.head : fa.tail;
      double x;
      if (fa.tail == v) {
        x = residual(v);
        residual(u) += x;
      } else {
        x = -residual(v);
        residual(u) -= x;
      }
      residual(v) = 0.0;
      if (x < -1e-9 * supply_scale_) {
        throw SolverError("network simplex: initial tree is not primal feasible");
      }
      flow(arc) = std::max(0.0, x);
      used[static_cast<std::size_t>(arc)] = 1;
      ++assigned;
      --degree[static_cast<std::size_t>(v)];
      if (--degree[static_cast<std::size_t>(u)] == 1) leaves.push_back(u);
    }
    if (assigned != n_nodes - 1) {
      throw SolverError("network simplex: initial arcs do not form a spanning tree");
    }
    if (residual.cwiseAbs().maxCoeff() > 1e-9 * supply_scale_) {
      throw SolverError("network simplex: supplies are not balanced");
    }
  }

  std::vector<int> parent(static_cast<std::size_t>(n_nodes));
  std::vector<int> parent_arc(static_cast<std::size_t>(n_nodes));
  std::vector<int> depth(static_cast<std::size_t>(n_nodes));
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(n_nodes));
  Eigen::VectorXd pot(n_nodes);

  auto rebuild = [&] {
    queue.clear();
    std::fill(depth.begin(), depth.end(), -1);
    queue.push_back(0);
    depth[0] = 0;
    parent[0] = -1;
    parent_arc[0] = -1;
    pot(0) = 0.0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int x = queue[head];
      for (int a : adj[static_cast<std::size_t>(x)]) {
        const FlowArc& fa = arcs_[static_cast<std::size_t>(a)];
        const int y = fa.tail == x ? fa.head : fa.tail;
        if (depth[static_cast<std::size_t>(y)] >= 0) continue;
        depth[static_cast<std::size_t>(y)] = depth[static_cast<std::size_t>(x)] + 1;
        parent[static_cast<std::size_t>(y)] = x;
        parent_arc[static_cast<std::size_t>(y)] = a;
        // zero reduced cost on tree arcs: p[tail] - p[head] = cost
        pot(y) = fa.tail == x ? pot(x) - fa.cost : pot(x) + fa.cost;
        queue.push_back(y);
      }
    }
  };

  FlowSolution out;
  const std::size_t max_pivots =
      100 * (static_cast<std::size_t>(n_arcs) + static_cast<std::size_t>(n_nodes)) + 1000;
  std::size_t streak = 0;
  bool bland = false;
  std::vector<std::pair<int, bool>> cycle;

  for (;;) {
    rebuild();

    int enter = -1;
    double best = -rc_tol;
    for (int a = 0; a < n_arcs; ++a) {
      if (in_tree[static_cast<std::size_t>(a)]) continue;
      const FlowArc& fa = arcs_[static_cast<std::size_t>(a)];
      const double rc = fa.cost - pot(fa.tail) + pot(fa.head);
      if (rc < -rc_tol) {
        if (bland) {
          enter = a;
          break;
        }
        if (rc < best) {
          best = rc;
          enter = a;
        }
      }
    }
    if (enter < 0) break;

    // Cycle: enter (u -> v), then the tree path v -> lca -> u.
    const FlowArc& fe = arcs_[static_cast<std::size_t>(enter)];
    cycle.clear();
    int a_side = fe.head;
    int b_side = fe.tail;
    while (a_side != b_side) {
      if (depth[static_cast<std::size_t>(a_side)] >= depth[static_cast<std::size_t>(b_side)]) {
        const int arc = parent_arc[static_cast<std::size_t>(a_side)];
        cycle.emplace_back(arc, arcs_[static_cast<std::size_t>(arc)].tail == a_side);
        a_side = parent[static_cast<std::size_t>(a_side)];
      } else {
        const int arc = parent_arc[static_cast<std::size_t>(b_side)];
        cycle.emplace_back(arc, arcs_[static_cast<std::size_t>(arc)].head == b_side);
        b_side = parent[static_cast<std::size_t>(b_side)];
      }
    }

    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (const auto& [arc, forward] : cycle) {
      if (forward) continue;
      const double x = flow(arc);
      if (x < theta || (x == theta && arc < leave)) {
        theta = x;
        leave = arc;
      }
    }
    if (leave < 0) {
      throw SolverError("network simplex: problem is unbounded");
    }

    flow(enter) += theta;
    for (const auto& [arc, forward] : cycle) {
      if (forward) {
        flow(arc) += theta;
      } else {
        flow(arc) = std::max(0.0, flow(arc) - theta);
      }
    }
    flow(leave) = 0.0;

    if (theta <= flow_tol) {
      ++out.degenerate_pivots;
      if (++streak > static_cast<std::size_t>(n_nodes)) bland = true;
    } else {
      streak = 0;
      bland = false;
    }

    const FlowArc& fl = arcs_[static_cast<std::size_t>(leave)];
    in_tree[static_cast<std::size_t>(leave)] = 0;
    erase_arc(adj[static_cast<std::size_t>(fl.tail)], leave);
    erase_arc(adj[static_cast<std::size_t>(fl.head)], leave);
    in_tree[static_cast<std::size_t>(enter)] = 1;
    adj[static_cast<std::size_t>(fe.tail)].push_back(enter);
    adj[static_cast<std::size_t>(fe.head)].push_back(enter);

    if (++out.pivots > max_pivots) {
      throw SolverError("network simplex: pivot limit exceeded");
    }
  }

  out.flow = std::move(flow);
  out.potential = pot;
  out.cost = 0.0;
  for (int a = 0; a < n_arcs; ++a) {
    out.cost += arcs_[static_cast<std::size_t>(a)].cost * out.flow(a);
    if (in_tree[static_cast<std::size_t>(a)]) out.basis.push_back(a);
  }
  return out;
}

}  // namespace otl
