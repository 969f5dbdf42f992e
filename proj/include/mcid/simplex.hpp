#pragma once

// Dense tableau simplex for  max c^T y  s.t.  A y <= b, y >= 0  with b >= 0,
// so the slack basis is feasible and no phase one is needed.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "mcid/errors.hpp"

namespace mcid {

struct SimplexResult {
  Eigen::VectorXd y;      // primal solution
  Eigen::VectorXd duals;  // one multiplier per row of A
  double objective = 0.0;
  long iterations = 0;
};

struct SimplexOptions {
  long max_iterations = 200000;
  double tolerance = 1e-11;
  int degenerate_switch = 50;  // consecutive degenerate pivots before Bland's rule
};

inline SimplexResult simplex_max(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                                 const SimplexOptions& opt = {}) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m || c.size() != n) throw Error(Errc::shape_mismatch, "simplex: inconsistent dimensions");
  if ((b.array() < 0.0).any()) throw Error(Errc::bad_args, "simplex: right-hand side must be nonnegative");

  // rows 0..m-1 constraints, row m objective; columns 0..n-1 structural,
  // n..n+m-1 slack, n+m right-hand side
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, m).setIdentity();
  t.topRightCorner(m, 1) = b;
  t.bottomLeftCorner(1, n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  const double tol = opt.tolerance;
  int degenerate_run = 0;
  long it = 0;
  for (; it < opt.max_iterations; ++it) {
    const bool bland = degenerate_run >= opt.degenerate_switch;
    Eigen::Index enter = -1;
    double best = -tol;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      const double rc = t(m, j);
      if (rc < best) {
        enter = j;
        if (bland) break;
        best = rc;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double aij = t(i, enter);
      if (aij <= tol) continue;
      const double r = t(i, n + m) / aij;
      if (r < ratio - 1e-14 ||
          (r <= ratio + 1e-14 && leave >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        ratio = r;
        leave = i;
      }
    }
    if (leave < 0) throw Error(Errc::infeasible, "simplex: objective unbounded");
    degenerate_run = ratio <= tol ? degenerate_run + 1 : 0;

    const double piv = t(leave, enter);
    t.row(leave) /= piv;
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  if (it >= opt.max_iterations) throw Error(Errc::solver_stall, "simplex: iteration cap reached");

  SimplexResult r;
  r.iterations = it;
  r.y = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = basis[static_cast<std::size_t>(i)];
    if (j < n) r.y(j) = t(i, n + m);
  }
  r.duals = t.block(m, n, 1, m).transpose();
  r.objective = t(m, n + m);
  return r;
}

}  // namespace mcid
