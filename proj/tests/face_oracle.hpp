#ifndef OTLIMITS_TESTS_FACE_ORACLE_HPP
#define OTLIMITS_TESTS_FACE_ORACLE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Vertices of
//   f_i + g_j <= C_ij, f_i + g_j = C_ij on `tight`, |f| <= box, -box <= g <= 0
// found by solving every square system of active constraints. Variables are
// stacked as (f, g). Only for very small instances.
inline std::vector<VectorXd> face_vertices(const MatrixXd& c,
                                           const std::vector<std::pair<Index, Index>>& tight,
                                           double box) {
  const Index n = c.rows();
  const Index m = c.cols();
  const Index dim = n + m;
  std::vector<VectorXd> rows;
  std::vector<double> rhs;
  auto row = [&](Index a, double sa, Index b, double sb) {
    VectorXd r = VectorXd::Zero(dim);
    r(a) += sa;
    if (b >= 0) r(b) += sb;
    return r;
  };
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      rows.push_back(row(i, 1, n + j, 1));
      rhs.push_back(c(i, j));
    }
  }
  for (Index i = 0; i < n; ++i) {
    rows.push_back(row(i, 1, -1, 0));
    rhs.push_back(box);
    rows.push_back(row(i, -1, -1, 0));
    rhs.push_back(box);
  }
  for (Index j = 0; j < m; ++j) {
    rows.push_back(row(n + j, 1, -1, 0));
    rhs.push_back(0.0);
    rows.push_back(row(n + j, -1, -1, 0));
    rhs.push_back(box);
  }
  const auto n_ineq = static_cast<Index>(rows.size());
  MatrixXd eq(static_cast<Index>(tight.size()), dim);
  VectorXd eq_rhs(static_cast<Index>(tight.size()));
  for (std::size_t t = 0; t < tight.size(); ++t) {
    eq.row(static_cast<Index>(t)) = row(tight[t].first, 1, n + tight[t].second, 1).transpose();
    eq_rhs(static_cast<Index>(t)) = c(tight[t].first, tight[t].second);
  }
  const Index eq_rank = tight.empty() ? 0 : Eigen::FullPivLU<MatrixXd>(eq).rank();
  const Index pick = dim - eq_rank;

  std::vector<VectorXd> vertices;
  std::vector<char> mask(static_cast<std::size_t>(n_ineq), 0);
  std::fill(mask.begin(), mask.begin() + pick, 1);
  do {
    MatrixXd a(eq.rows() + pick, dim);
    VectorXd b(eq.rows() + pick);
    a.topRows(eq.rows()) = eq;
    b.head(eq.rows()) = eq_rhs;
    Index k = eq.rows();
    for (Index r = 0; r < n_ineq; ++r) {
      if (mask[static_cast<std::size_t>(r)]) {
        a.row(k) = rows[static_cast<std::size_t>(r)].transpose();
        b(k) = rhs[static_cast<std::size_t>(r)];
        ++k;
      }
    }
    Eigen::FullPivLU<MatrixXd> lu(a);
    if (lu.rank() < dim) continue;
    const VectorXd v = lu.solve(b);
    if ((a * v - b).cwiseAbs().maxCoeff() > 1e-9) continue;
    bool feasible = true;
    for (Index r = 0; r < n_ineq && feasible; ++r) {
      feasible = rows[static_cast<std::size_t>(r)].dot(v) <= rhs[static_cast<std::size_t>(r)] + 1e-10;
    }
    if (!feasible) continue;
    const bool seen = std::any_of(vertices.begin(), vertices.end(), [&](const VectorXd& u) {
      return (u - v).cwiseAbs().maxCoeff() < 1e-9;
    });
    if (!seen) vertices.push_back(v);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return vertices;
}

inline double max_over(const std::vector<VectorXd>& vertices, const VectorXd& z,
                       const VectorXd& w) {
  VectorXd obj(z.size() + w.size());
  obj << z, w;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) best = std::max(best, obj.dot(v));
  return best;
}

}  // namespace oracle

#endif  // OTLIMITS_TESTS_FACE_ORACLE_HPP
