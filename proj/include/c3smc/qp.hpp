// Copyright 2026 The c3smc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense active-set solver for small strictly convex QPs
//
//   minimize    1/2 x^T H x + g^T x,   H diagonal and positive
//   subject to  a_j^T x >= b_j,        j = 0 .. m-1
//
// The iteration is the dual method of Goldfarb and Idnani: start at the
// unconstrained minimum and repeatedly add the most violated row, dropping
// rows whose multipliers would turn negative. Dual feasibility holds
// throughout, so the first primal-feasible iterate is optimal and an empty
// primal-feasible region is detected when a violated row is a nonpositive
// combination of the active ones.

#ifndef C3SMC__QP_HPP_
#define C3SMC__QP_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "c3smc/error.hpp"

namespace c3smc
{

inline constexpr int kMaxQpRows = 32;
inline constexpr int kMaxQpIterations = 200;

/// a^T x >= b
struct QpRow
{
  Eigen::VectorXd a;
  double b{0.0};
};

struct QpProblem
{
  Eigen::VectorXd h_diag;
  Eigen::VectorXd g;
  std::vector<QpRow> rows;

  int dim() const {return static_cast<int>(h_diag.size());}
};

enum class QpStatus
{
  kOptimal,
  kInfeasible,
  kDegenerateFallback,
};

inline const char * to_string(QpStatus status)
{
  switch (status) {
    case QpStatus::kOptimal:
      return "optimal";
    case QpStatus::kInfeasible:
      return "infeasible";
    case QpStatus::kDegenerateFallback:
      return "degenerate_fallback";
  }
  return "?";
}

struct KktResiduals
{
  double stationarity{0.0};     // |H x + g - sum mu_j a_j|_inf
  double primal{0.0};           // max_j max(0, b_j - a_j^T x)
  double complementarity{0.0};  // max_j |mu_j (a_j^T x - b_j)|
};

struct QpSolution
{
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // one per row, zero when inactive
  std::vector<int> active_set;  // ascending row indices
  KktResiduals kkt;
  QpStatus status{QpStatus::kInfeasible};
  int iterations{0};
  double objective{0.0};
};

inline void validate(const QpProblem & p)
{
  const int n = p.dim();
  if (n == 0 || p.g.size() != n) {
    throw Error(ErrorKind::kInvalidInput, "qp: H and g dimensions disagree");
  }
  if (!(p.h_diag.array() > 0.0).all() || !p.h_diag.allFinite() || !p.g.allFinite()) {
    throw Error(ErrorKind::kInvalidInput, "qp: H must be positive definite and finite");
  }
  if (static_cast<int>(p.rows.size()) > kMaxQpRows) {
    throw Error(ErrorKind::kInvalidInput, "qp: at most 32 rows are supported");
  }
  for (const auto & row : p.rows) {
    if (row.a.size() != n || !row.a.allFinite() || !std::isfinite(row.b)) {
      throw Error(ErrorKind::kInvalidInput, "qp: malformed constraint row");
    }
  }
}

inline double objective(const QpProblem & p, const Eigen::VectorXd & x)
{
  return 0.5 * x.dot(p.h_diag.cwiseProduct(x)) + p.g.dot(x);
}

inline KktResiduals kkt_residuals(
  const QpProblem & p, const Eigen::VectorXd & x, const Eigen::VectorXd & mu)
{
  KktResiduals r;
  Eigen::VectorXd grad = p.h_diag.cwiseProduct(x) + p.g;
  for (std::size_t j = 0; j < p.rows.size(); ++j) {
    const double slack = p.rows[j].a.dot(x) - p.rows[j].b;
    grad -= mu(j) * p.rows[j].a;
    r.primal = std::max(r.primal, -slack);
    r.complementarity = std::max(r.complementarity, std::abs(mu(j) * slack));
  }
  r.stationarity = grad.size() > 0 ? grad.lpNorm<Eigen::Infinity>() : 0.0;
  return r;
}

inline KktResiduals kkt_residuals(const QpProblem & p, const QpSolution & sol)
{
  return kkt_residuals(p, sol.x, sol.multipliers);
}

namespace detail
{

inline double feasibility_tol(const QpRow & row)
{
  return 1e-12 * std::max(1.0, std::abs(row.b));
}

inline Eigen::MatrixXd active_normals(const QpProblem & p, std::span<const int> active)
{
  Eigen::MatrixXd n(p.dim(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t i = 0; i < active.size(); ++i) {
    n.col(static_cast<Eigen::Index>(i)) = p.rows[active[i]].a;
  }
  return n;
}

/// Minimizer with the rows in `active` held as equalities. Returns false if
/// the active normals are linearly dependent.
inline bool solve_on_active(
  const QpProblem & p, std::span<const int> active, Eigen::VectorXd & x, Eigen::VectorXd & mu)
{
  const Eigen::VectorXd h_inv = p.h_diag.cwiseInverse();
  if (active.empty()) {
    x = -h_inv.cwiseProduct(p.g);
    mu.resize(0);
    return true;
  }
  const Eigen::MatrixXd n = active_normals(p, active);
  const Eigen::MatrixXd scaled = h_inv.asDiagonal() * n;
  const Eigen::MatrixXd gram = n.transpose() * scaled;
  Eigen::VectorXd b(static_cast<Eigen::Index>(active.size()));
  for (std::size_t i = 0; i < active.size(); ++i) {
    b(static_cast<Eigen::Index>(i)) = p.rows[active[i]].b;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
    ldlt.vectorD().minCoeff() <= 1e-13 * std::max(1.0, ldlt.vectorD().maxCoeff()))
  {
    return false;
  }
  mu = ldlt.solve(b + scaled.transpose() * p.g);
  x = h_inv.cwiseProduct(n * mu - p.g);
  // Large multipliers (heavy slack weights) cost digits in N mu - g; two
  // refinement passes put x back on the active rows.
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd residual = b - n.transpose() * x;
    const Eigen::VectorXd dmu = ldlt.solve(residual);
    mu += dmu;
    x += h_inv.cwiseProduct(n * dmu);
  }
  return x.allFinite() && mu.allFinite();
}

}  // namespace detail

/// Holds the previous active set so consecutive, similar problems (one per
/// control step) can be solved in one linear solve. One instance per run.
class ActiveSetSolver
{
public:
  QpSolution solve(const QpProblem & p)
  {
    validate(p);
    QpSolution sol = solve_impl(p);
    sol.kkt = kkt_residuals(p, sol);
    sol.objective = objective(p, sol.x);
    if (sol.status == QpStatus::kOptimal &&
      (sol.kkt.stationarity > 1e-8 || sol.kkt.complementarity > 1e-8 || sol.kkt.primal > 1e-9))
    {
      sol.status = QpStatus::kDegenerateFallback;
    }
    if (sol.status == QpStatus::kOptimal) {
      warm_ = sol.active_set;
    } else {
      warm_.clear();
    }
    return sol;
  }

  void reset() {warm_.clear();}

  const std::vector<int> & warm_set() const {return warm_;}

private:
  QpSolution solve_impl(const QpProblem & p)
  {
    const int m = static_cast<int>(p.rows.size());
    QpSolution sol;
    sol.multipliers = Eigen::VectorXd::Zero(m);
    sol.x = -p.h_diag.cwiseInverse().cwiseProduct(p.g);
    if (most_violated(p, sol.x, {}) < 0) {
      sol.status = QpStatus::kOptimal;
      return sol;
    }
    if (try_warm(p, sol)) {
      return sol;
    }
    return dual_active_set(p);
  }

  // -1 when every row outside `active` is satisfied. Ties go to the lowest index.
  static int most_violated(
    const QpProblem & p, const Eigen::VectorXd & x, std::span<const int> active)
  {
    int worst_index = -1;
    double worst = 0.0;
    for (int j = 0; j < static_cast<int>(p.rows.size()); ++j) {
      if (std::find(active.begin(), active.end(), j) != active.end()) {
        continue;
      }
      const double s = p.rows[j].a.dot(x) - p.rows[j].b;
      if (s < -detail::feasibility_tol(p.rows[j]) && s < worst) {
        worst = s;
        worst_index = j;
      }
    }
    return worst_index;
  }

  bool try_warm(const QpProblem & p, QpSolution & sol) const
  {
    const int m = static_cast<int>(p.rows.size());
    if (warm_.empty() || static_cast<int>(warm_.size()) > p.dim()) {
      return false;
    }
    if (std::any_of(warm_.begin(), warm_.end(), [m](int j) {return j >= m;})) {
      return false;
    }
    Eigen::VectorXd x;
    Eigen::VectorXd mu;
    if (!detail::solve_on_active(p, warm_, x, mu) || (mu.array() < 0.0).any()) {
      return false;
    }
    for (int j = 0; j < m; ++j) {
      if (p.rows[j].a.dot(x) - p.rows[j].b < -detail::feasibility_tol(p.rows[j])) {
        return false;
      }
    }
    sol.x = x;
    sol.multipliers.setZero();
    for (std::size_t i = 0; i < warm_.size(); ++i) {
      sol.multipliers(warm_[i]) = mu(static_cast<Eigen::Index>(i));
    }
    sol.active_set = warm_;
    sol.status = QpStatus::kOptimal;
    return true;
  }

  static QpSolution dual_active_set(const QpProblem & p)
  {
    const int m = static_cast<int>(p.rows.size());
    const Eigen::VectorXd h_inv = p.h_diag.cwiseInverse();

    QpSolution sol;
    sol.multipliers = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd x = -h_inv.cwiseProduct(p.g);
    std::vector<int> active;
    std::vector<double> u;  // multipliers of `active`, same order
    int iterations = 0;

    auto finish = [&](QpStatus status) {
        sol.status = status;
        sol.iterations = iterations;
        sol.x = x;
        std::vector<int> order = active;
        std::sort(order.begin(), order.end());
        // Recompute on the final active set for full accuracy.
        Eigen::VectorXd xp;
        Eigen::VectorXd mup;
        if (status == QpStatus::kOptimal && detail::solve_on_active(p, order, xp, mup) &&
          (mup.array() >= -1e-10).all() && most_violated(p, xp, {}) < 0)
        {
          sol.x = xp;
          for (std::size_t i = 0; i < order.size(); ++i) {
            sol.multipliers(order[i]) = std::max(0.0, mup(static_cast<Eigen::Index>(i)));
          }
        } else {
          for (std::size_t i = 0; i < active.size(); ++i) {
            sol.multipliers(active[i]) = u[i];
          }
        }
        sol.active_set = order;
        return sol;
      };

    for (;;) {
      const int add = most_violated(p, x, active);
      if (add < 0) {
        return finish(QpStatus::kOptimal);
      }
      const Eigen::VectorXd & np = p.rows[add].a;
      std::vector<double> uplus = u;
      uplus.push_back(0.0);

      for (;;) {
        if (++iterations > kMaxQpIterations) {
          return finish(QpStatus::kDegenerateFallback);
        }
        const auto q = static_cast<Eigen::Index>(active.size());
        Eigen::VectorXd r(q);
        Eigen::VectorXd z;
        if (q > 0) {
          const Eigen::MatrixXd nmat = detail::active_normals(p, active);
          const Eigen::MatrixXd scaled = h_inv.asDiagonal() * nmat;
          const Eigen::MatrixXd gram = nmat.transpose() * scaled;
          r = gram.ldlt().solve(scaled.transpose() * np);
          z = h_inv.cwiseProduct(np - nmat * r);
        } else {
          z = h_inv.cwiseProduct(np);
        }
        const double znp = z.dot(np);
        const double zero_tol = 1e-14 * np.dot(h_inv.cwiseProduct(np));

        // Largest dual step keeping active multipliers nonnegative.
        double t_dual = std::numeric_limits<double>::infinity();
        int drop = -1;
        for (Eigen::Index i = 0; i < q; ++i) {
          if (r(i) > 0.0) {
            const double ratio = uplus[static_cast<std::size_t>(i)] / r(i);
            if (ratio < t_dual ||
              (ratio == t_dual && active[static_cast<std::size_t>(i)] < active[static_cast<std::size_t>(drop)]))
            {
              t_dual = ratio;
              drop = static_cast<int>(i);
            }
          }
        }

        auto step_duals = [&](double t) {
            for (Eigen::Index i = 0; i < q; ++i) {
              uplus[static_cast<std::size_t>(i)] -= t * r(i);
            }
            uplus.back() += t;
          };
        auto drop_row = [&]() {
            active.erase(active.begin() + drop);
            uplus.erase(uplus.begin() + drop);
          };

        if (znp <= zero_tol) {
          // The new normal lies in the span of the active ones.
          if (drop < 0) {
            return finish(QpStatus::kInfeasible);
          }
          step_duals(t_dual);
          drop_row();
          continue;
        }

        const double t_primal = (p.rows[add].b - np.dot(x)) / znp;
        if (t_primal <= t_dual) {
          x += t_primal * z;
          step_duals(t_primal);
          active.push_back(add);
          u = uplus;
          break;
        }
        x += t_dual * z;
        step_duals(t_dual);
        drop_row();
      }
    }
  }

  std::vector<int> warm_;
};

/// Cold-start solve.
inline QpSolution solve(const QpProblem & p)
{
  ActiveSetSolver solver;
  return solver.solve(p);
}

}  // namespace c3smc

#endif  // C3SMC__QP_HPP_
