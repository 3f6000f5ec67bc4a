/*
 Copyright 2026 The distddp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "distddp/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace distddp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rows in the form n' v >= c.
struct RowSet {
  Matrix N;  // n x m, one column per row
  Vector c;
  std::vector<bool> is_bound;
};

RowSet gather_rows(const QpProblem& qp) {
  const auto n = qp.H.rows();
  std::vector<Vector> cols;
  std::vector<double> rhs;
  std::vector<bool> bound;
  for (Eigen::Index r = 0; r < qp.A.rows(); ++r) {
    cols.push_back(-qp.A.row(r).transpose());
    rhs.push_back(-qp.b(r));
    bound.push_back(false);
  }
  for (Eigen::Index i = 0; i < qp.lower.size(); ++i) {
    if (std::isfinite(qp.upper(i))) {
      Vector e = Vector::Zero(n);
      e(i) = -1.0;
      cols.push_back(e);
      rhs.push_back(-qp.upper(i));
      bound.push_back(true);
    }
    if (std::isfinite(qp.lower(i))) {
      Vector e = Vector::Zero(n);
      e(i) = 1.0;
      cols.push_back(e);
      rhs.push_back(qp.lower(i));
      bound.push_back(true);
    }
  }
  RowSet rs;
  rs.N.resize(n, static_cast<Eigen::Index>(cols.size()));
  rs.c.resize(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    rs.N.col(j) = cols[j];
    rs.c(j) = rhs[j];
  }
  rs.is_bound = std::move(bound);
  return rs;
}

void check(const QpProblem& qp) {
  const auto n = qp.H.rows();
  if (qp.H.cols() != n || qp.g.size() != n) throw std::invalid_argument("QP objective sizes differ");
  if (qp.A.rows() > 0 && qp.A.cols() != n) throw std::invalid_argument("QP row width is wrong");
  if (qp.A.rows() != qp.b.size()) throw std::invalid_argument("QP rows and bounds differ in count");
  if (qp.lower.size() != qp.upper.size() || (qp.lower.size() != 0 && qp.lower.size() != n))
    throw std::invalid_argument("QP variable bounds have the wrong size");
  for (Eigen::Index i = 0; i < qp.lower.size(); ++i)
    if (qp.lower(i) > qp.upper(i)) throw std::invalid_argument("QP lower bound exceeds upper");
}

struct DualResult {
  Vector v;
  bool feasible = true;
  int iterations = 0;
};

DualResult goldfarb_idnani(const Matrix& G, const Vector& a, const RowSet& rows, double tol) {
  const auto n = G.rows();
  const auto m = rows.N.cols();
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("QP Hessian is not positive definite");
  const Matrix Ginv = llt.solve(Matrix::Identity(n, n));

  DualResult out;
  out.v = -Ginv * a;
  std::vector<Eigen::Index> active;
  std::vector<double> u;
  const int max_iter = static_cast<int>(10 * (m + n) + 50);

  auto scale = [&](Eigen::Index j) { return tol * (1.0 + std::abs(rows.c(j)) + rows.N.col(j).norm()); };

  while (out.iterations < max_iter) {
    // Most violated inactive row, measured relative to its norm.
    Eigen::Index p = -1;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (std::find(active.begin(), active.end(), j) != active.end()) continue;
      const double s = rows.N.col(j).dot(out.v) - rows.c(j);
      if (s < -scale(j) && s / rows.N.col(j).norm() < worst) {
        worst = s / rows.N.col(j).norm();
        p = j;
      }
    }
    if (p < 0) return out;

    const Vector np = rows.N.col(p);
    double up = 0.0;
    while (true) {
      ++out.iterations;
      if (out.iterations > max_iter) break;
      const auto q = static_cast<Eigen::Index>(active.size());
      Vector z;
      Vector r(q);
      if (q == 0) {
        z = Ginv * np;
      } else {
        Matrix Na(n, q);
        for (Eigen::Index i = 0; i < q; ++i) Na.col(i) = rows.N.col(active[i]);
        const Matrix GN = Ginv * Na;
        const Matrix S = Na.transpose() * GN;
        Eigen::LDLT<Matrix> ldlt(S);
        r = ldlt.solve(GN.transpose() * np);
        z = Ginv * np - GN * r;
      }

      double t1 = kInf;
      Eigen::Index drop = -1;
      for (Eigen::Index i = 0; i < q; ++i) {
        if (r(i) > 1e-14 && u[i] / r(i) < t1) {
          t1 = u[i] / r(i);
          drop = i;
        }
      }
      const double zn = z.dot(np);
      const double t2 =
          zn > 1e-14 * np.squaredNorm() ? -(np.dot(out.v) - rows.c(p)) / zn : kInf;

      if (!std::isfinite(t1) && !std::isfinite(t2)) {
        out.feasible = false;
        return out;
      }
      if (!std::isfinite(t2)) {
        // Dual step only: the new row is linearly dependent on the active set.
        for (Eigen::Index i = 0; i < q; ++i) u[i] -= t1 * r(i);
        up += t1;
        active.erase(active.begin() + drop);
        u.erase(u.begin() + drop);
        continue;
      }
      const double t = std::min(t1, t2);
      out.v += t * z;
      for (Eigen::Index i = 0; i < q; ++i) u[i] -= t * r(i);
      up += t;
      if (t2 <= t1) {
        active.push_back(p);
        u.push_back(up);
        break;
      }
      active.erase(active.begin() + drop);
      u.erase(u.begin() + drop);
    }
  }
  out.feasible = false;
  return out;
}

double row_violation(const QpProblem& qp, const Vector& v) {
  if (qp.A.rows() == 0) return 0.0;
  return std::max(0.0, (qp.A * v - qp.b).maxCoeff());
}

void clamp_bounds(const QpProblem& qp, Vector& v) {
  for (Eigen::Index i = 0; i < qp.lower.size(); ++i) v(i) = std::clamp(v(i), qp.lower(i), qp.upper(i));
}

}  // namespace

QpResult solve_qp(const QpProblem& qp, double tolerance) {
  check(qp);
  QpResult out;
  const RowSet rows = gather_rows(qp);
  DualResult d = goldfarb_idnani(qp.H, qp.g, rows, tolerance);
  out.iterations = d.iterations;
  if (d.feasible) {
    out.v = std::move(d.v);
    clamp_bounds(qp, out.v);
    out.violation = row_violation(qp, out.v);
    return out;
  }

  // Conflicting rows: append a slack t >= 0 that relaxes every general row,
  // min ... + W t + t^2/2, keeping the variable bounds hard.
  const auto n = qp.H.rows();
  const double weight = 1e6 * (1.0 + qp.H.diagonal().cwiseAbs().maxCoeff());
  QpProblem relaxed;
  relaxed.H = Matrix::Zero(n + 1, n + 1);
  relaxed.H.topLeftCorner(n, n) = qp.H;
  relaxed.H(n, n) = 1.0;
  relaxed.g = Vector::Zero(n + 1);
  relaxed.g.head(n) = qp.g;
  relaxed.g(n) = weight;
  relaxed.A = Matrix::Zero(qp.A.rows(), n + 1);
  relaxed.A.leftCols(n) = qp.A;
  relaxed.A.col(n).setConstant(-1.0);
  relaxed.b = qp.b;
  relaxed.lower = Vector::Constant(n + 1, -kInf);
  relaxed.upper = Vector::Constant(n + 1, kInf);
  if (qp.lower.size() == n) {
    relaxed.lower.head(n) = qp.lower;
    relaxed.upper.head(n) = qp.upper;
  }
  relaxed.lower(n) = 0.0;
  const RowSet rrows = gather_rows(relaxed);
  DualResult r = goldfarb_idnani(relaxed.H, relaxed.g, rrows, tolerance);
  out.v = r.v.head(n);
  clamp_bounds(qp, out.v);
  out.feasible = false;
  out.iterations += r.iterations;
  out.violation = row_violation(qp, out.v);
  return out;
}

}  // namespace distddp
