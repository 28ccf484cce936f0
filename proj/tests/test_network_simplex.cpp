#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <vector>

#include "otlimits/error.hpp"
#include "otlimits/network_simplex.hpp"

namespace {

using otl::FlowArc;
using otl::NetworkSimplex;

// Bellman-Ford distances from node 0.
std::vector<double> shortest_paths(int n, const std::vector<FlowArc>& arcs) {
  std::vector<double> d(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  d[0] = 0.0;
  for (int it = 0; it < n; ++it) {
    for (const auto& a : arcs) {
      if (d[a.tail] + a.cost < d[a.head]) d[a.head] = d[a.tail] + a.cost;
    }
  }
  return d;
}

TEST(NetworkSimplex, ShortestPathMatchesBellmanFord) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> cost(0.0, 5.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 6;
    std::vector<FlowArc> arcs;
    // star from the source so the initial tree is feasible
    for (int v = 1; v < n; ++v) arcs.push_back({0, v, 10.0 + cost(rng)});
    for (int u = 0; u < n; ++u) {
      for (int v = 1; v < n; ++v) {
        if (u != v && cost(rng) < 2.5) arcs.push_back({u, v, cost(rng)});
      }
    }
    const int target = 1 + rep % (n - 1);
    Eigen::VectorXd supply = Eigen::VectorXd::Zero(n);
    supply(0) = 1.0;
    supply(target) = -1.0;
    std::vector<int> tree{0, 1, 2, 3, 4};
    const auto sol = NetworkSimplex(n, arcs, supply).solve(tree);
    EXPECT_NEAR(sol.cost, shortest_paths(n, arcs)[target], 1e-12);
    // reduced costs are non-negative at the optimum
    for (const auto& a : arcs) {
      EXPECT_GE(a.cost - sol.potential(a.tail) + sol.potential(a.head), -1e-10);
    }
    EXPECT_EQ(sol.basis.size(), static_cast<std::size_t>(n - 1));
  }
}

TEST(NetworkSimplex, RejectsBadTrees) {
  std::vector<FlowArc> arcs{{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}};
  Eigen::VectorXd supply(3);
  supply << 1, 0, -1;
  NetworkSimplex ns(3, arcs, supply);
  std::vector<int> short_tree{0};
  EXPECT_THROW(ns.solve(short_tree), otl::SolverError);
  std::vector<int> repeated{0, 0};
  EXPECT_THROW(ns.solve(repeated), otl::SolverError);
  // arcs 1 and 2 route 2 -> 0 against the supply: negative flow
  std::vector<int> infeasible{2, 1};
  EXPECT_THROW(ns.solve(infeasible), otl::SolverError);
}

TEST(NetworkSimplex, DetectsUnboundedCycle) {
  std::vector<FlowArc> arcs{{0, 1, 1.0}, {1, 2, -3.0}, {2, 1, 1.0}};
  Eigen::VectorXd supply(3);
  supply << 1, -1, 0;
  std::vector<int> tree{0, 1};
  EXPECT_THROW(NetworkSimplex(3, arcs, supply).solve(tree), otl::SolverError);
}

TEST(NetworkSimplex, RejectsMalformedArcs) {
  Eigen::VectorXd supply = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(NetworkSimplex(2, {{0, 0, 1.0}}, supply), otl::InvalidInput);
  EXPECT_THROW(NetworkSimplex(2, {{0, 2, 1.0}}, supply), otl::InvalidInput);
  EXPECT_THROW(NetworkSimplex(2, {{0, 1, std::nan("")}}, supply), otl::InvalidInput);
  EXPECT_THROW(NetworkSimplex(3, {{0, 1, 1.0}}, supply), otl::InvalidInput);
}

}  // namespace
