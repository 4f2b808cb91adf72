// Copyright 2026 The Gridshade Authors
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

#include "gridshade/lp.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "gridshade/errors.h"
#include "gridshade/milp.h"

namespace gridshade {

int LpProblem::AddVariable(double lo, double hi, double c) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_variables() - 1;
}

void LpProblem::AddRow(std::vector<Term> terms, RowSense sense, double rhs) {
  rows.push_back(LpRow{std::move(terms), sense, rhs});
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "?";
}

namespace {

using Index = std::size_t;

// Reduced problem after removing fixed columns and turning singleton rows
// into bounds.
struct Presolved {
  bool infeasible = false;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> fixed;
  std::vector<int> columns;    // original index of each kept column
  std::vector<int> column_of;  // original -> kept index, -1 if fixed
  std::vector<int> rows;       // kept original rows
  std::vector<double> row_rhs; // rhs of kept rows after substitution
};

Presolved Presolve(const LpProblem& p, double tol) {
  const int n = p.num_variables();
  Presolved ps;
  ps.lower = p.lower;
  ps.upper = p.upper;
  ps.fixed.assign(static_cast<Index>(n), false);
  std::vector<bool> row_alive(p.rows.size(), true);

  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      const auto uv = static_cast<Index>(v);
      if (ps.fixed[uv]) continue;
      if (ps.lower[uv] > ps.upper[uv] + tol * (1.0 + std::abs(ps.upper[uv]))) {
        ps.infeasible = true;
        return ps;
      }
      if (ps.upper[uv] - ps.lower[uv] <= 1e-12) {
        ps.upper[uv] = ps.lower[uv];
        ps.fixed[uv] = true;
        changed = true;
      }
    }
    for (Index r = 0; r < p.rows.size(); ++r) {
      if (!row_alive[r]) continue;
      const LpRow& row = p.rows[r];
      double rhs = row.rhs;
      int live_var = -1;
      bool several = false;
      for (const Term& t : row.terms) {
        if (t.coef == 0.0) continue;
        const auto uv = static_cast<Index>(t.var);
        if (ps.fixed[uv]) {
          rhs -= t.coef * ps.lower[uv];
        } else if (live_var < 0 || live_var == t.var) {
          live_var = t.var;
        } else {
          several = true;
        }
      }
      if (several) continue;
      if (live_var < 0) {
        const double slack = tol * (1.0 + std::abs(row.rhs));
        const bool ok =
            (row.sense == RowSense::kLessEqual && rhs >= -slack) ||
            (row.sense == RowSense::kGreaterEqual && rhs <= slack) ||
            (row.sense == RowSense::kEqual && std::abs(rhs) <= slack);
        if (!ok) {
          ps.infeasible = true;
          return ps;
        }
        row_alive[r] = false;
        changed = true;
        continue;
      }
      double coef = 0.0;
      for (const Term& t : row.terms) {
        if (t.var == live_var) coef += t.coef;
      }
      if (std::abs(coef) < 1e-12) continue;
      const double bound = rhs / coef;
      RowSense sense = row.sense;
      if (coef < 0.0 && sense != RowSense::kEqual) {
        sense = sense == RowSense::kLessEqual ? RowSense::kGreaterEqual
                                              : RowSense::kLessEqual;
      }
      const auto uv = static_cast<Index>(live_var);
      if (sense != RowSense::kGreaterEqual) {
        ps.upper[uv] = std::min(ps.upper[uv], bound);
      }
      if (sense != RowSense::kLessEqual) {
        ps.lower[uv] = std::max(ps.lower[uv], bound);
      }
      if (ps.lower[uv] > ps.upper[uv] &&
          ps.lower[uv] - ps.upper[uv] <= tol * (1.0 + std::abs(bound))) {
        ps.upper[uv] = ps.lower[uv];
      }
      row_alive[r] = false;
      changed = true;
    }
  }

  ps.column_of.assign(static_cast<Index>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (!ps.fixed[static_cast<Index>(v)]) {
      ps.column_of[static_cast<Index>(v)] = static_cast<int>(ps.columns.size());
      ps.columns.push_back(v);
    }
  }
  for (Index r = 0; r < p.rows.size(); ++r) {
    if (!row_alive[r]) continue;
    double rhs = p.rows[r].rhs;
    for (const Term& t : p.rows[r].terms) {
      if (ps.fixed[static_cast<Index>(t.var)]) {
        rhs -= t.coef * ps.lower[static_cast<Index>(t.var)];
      }
    }
    ps.rows.push_back(static_cast<int>(r));
    ps.row_rhs.push_back(rhs);
  }
  return ps;
}

// Dense bounded-variable simplex over  A x = b,  lo <= x <= hi, where A
// already contains one slack or artificial column per row forming the
// starting basis.
class DenseSimplex {
 public:
  DenseSimplex(int rows, int cols, std::vector<double> a, std::vector<double> b,
               std::vector<double> lo, std::vector<double> hi,
               const LpOptions& options)
      : m_(rows),
        n_(cols),
        a_(std::move(a)),
        b_(std::move(b)),
        lo_(std::move(lo)),
        hi_(std::move(hi)),
        options_(options),
        x_(lo_),
        position_(static_cast<Index>(cols), -1) {}

  // Installs the starting basis: start_column[r] has A(r, c) = +-1 and no
  // other nonzero. Nonbasic columns sit at their lower bound.
  void Start(const std::vector<int>& start_column);

  // Optimizes `cost` from the current basis.
  LpStatus Optimize(const std::vector<double>& cost);

  void Refactor();
  double MaxPrimalViolation() const;
  // Pivots basic columns listed in `drop` out of the basis where a
  // replacement column outside `drop` exists. Values do not change.
  void PivotOut(const std::vector<bool>& drop);
  void SetBounds(int col, double lo, double hi) {
    lo_[static_cast<Index>(col)] = lo;
    hi_[static_cast<Index>(col)] = hi;
    if (position_[static_cast<Index>(col)] < 0) {
      x_[static_cast<Index>(col)] = lo;
    }
  }

  const std::vector<double>& x() const { return x_; }
  int iterations() const { return iterations_; }

 private:
  double& T(int r, int c) {
    return t_[static_cast<Index>(r) * static_cast<Index>(n_) +
              static_cast<Index>(c)];
  }
  double A(int r, int c) const {
    return a_[static_cast<Index>(r) * static_cast<Index>(n_) +
              static_cast<Index>(c)];
  }
  double* Row(int r) {
    return &t_[static_cast<Index>(r) * static_cast<Index>(n_)];
  }
  int Basic(int r) const { return basis_[static_cast<Index>(r)]; }

  void ComputeReducedCosts(const std::vector<double>& cost);
  void Pivot(int row, int col);

  int m_;
  int n_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  LpOptions options_;

  std::vector<double> t_;
  std::vector<double> x_;
  std::vector<double> d_;
  std::vector<int> basis_;
  std::vector<int> position_;
  int iterations_ = 0;
  int since_refactor_ = 0;
};

void DenseSimplex::Start(const std::vector<int>& start_column) {
  basis_ = start_column;
  t_ = a_;
  for (int r = 0; r < m_; ++r) {
    const int col = Basic(r);
    position_[static_cast<Index>(col)] = r;
    const double s = A(r, col);
    if (s != 1.0) {
      double* row = Row(r);
      for (int c = 0; c < n_; ++c) row[c] /= s;
    }
  }
  for (int r = 0; r < m_; ++r) {
    double value = b_[static_cast<Index>(r)];
    for (int c = 0; c < n_; ++c) {
      if (position_[static_cast<Index>(c)] < 0) {
        value -= A(r, c) * x_[static_cast<Index>(c)];
      }
    }
    x_[static_cast<Index>(Basic(r))] = value / A(r, Basic(r));
  }
}

void DenseSimplex::Pivot(int row, int col) {
  double* prow = Row(row);
  const double piv = prow[col];
  for (int c = 0; c < n_; ++c) prow[c] /= piv;
  prow[col] = 1.0;
  for (int r = 0; r < m_; ++r) {
    if (r == row) continue;
    double* rr = Row(r);
    const double f = rr[col];
    if (f == 0.0) continue;
    for (int c = 0; c < n_; ++c) rr[c] -= f * prow[c];
    rr[col] = 0.0;
  }
  const double f = d_[static_cast<Index>(col)];
  if (f != 0.0) {
    for (int c = 0; c < n_; ++c) d_[static_cast<Index>(c)] -= f * prow[c];
    d_[static_cast<Index>(col)] = 0.0;
  }
  position_[static_cast<Index>(Basic(row))] = -1;
  basis_[static_cast<Index>(row)] = col;
  position_[static_cast<Index>(col)] = row;
  ++since_refactor_;
}

void DenseSimplex::Refactor() {
  // Solve B [T | xB] = [A | b - A_N x_N] by Gauss-Jordan elimination with
  // partial pivoting; row k of the result belongs to basis_[k].
  const int w = m_ + n_ + 1;
  std::vector<double> aug(static_cast<Index>(m_) * static_cast<Index>(w), 0.0);
  auto at = [&](int r, int c) -> double& {
    return aug[static_cast<Index>(r) * static_cast<Index>(w) +
               static_cast<Index>(c)];
  };
  for (int r = 0; r < m_; ++r) {
    double rhs = b_[static_cast<Index>(r)];
    for (int c = 0; c < n_; ++c) {
      const double v = A(r, c);
      at(r, m_ + c) = v;
      if (v != 0.0 && position_[static_cast<Index>(c)] < 0) {
        rhs -= v * x_[static_cast<Index>(c)];
      }
    }
    for (int k = 0; k < m_; ++k) at(r, k) = A(r, Basic(k));
    at(r, w - 1) = rhs;
  }
  for (int k = 0; k < m_; ++k) {
    int best = k;
    for (int r = k + 1; r < m_; ++r) {
      if (std::abs(at(r, k)) > std::abs(at(best, k))) best = r;
    }
    if (std::abs(at(best, k)) < 1e-12) {
      throw SolverError("simplex basis became singular during refactorization");
    }
    if (best != k) {
      for (int c = 0; c < w; ++c) std::swap(at(k, c), at(best, c));
    }
    const double piv = at(k, k);
    for (int c = k; c < w; ++c) at(k, c) /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == k) continue;
      const double f = at(r, k);
      if (f == 0.0) continue;
      for (int c = k; c < w; ++c) at(r, c) -= f * at(k, c);
    }
  }
  for (int r = 0; r < m_; ++r) {
    double* row = Row(r);
    for (int c = 0; c < n_; ++c) {
      const double v = at(r, m_ + c);
      row[c] = std::abs(v) < 1e-14 ? 0.0 : v;
    }
    for (int k = 0; k < m_; ++k) row[Basic(k)] = k == r ? 1.0 : 0.0;
    x_[static_cast<Index>(Basic(r))] = at(r, w - 1);
  }
  since_refactor_ = 0;
}

void DenseSimplex::ComputeReducedCosts(const std::vector<double>& cost) {
  d_ = cost;
  for (int r = 0; r < m_; ++r) {
    const double cb = cost[static_cast<Index>(Basic(r))];
    if (cb == 0.0) continue;
    const double* row = Row(r);
    for (int c = 0; c < n_; ++c) d_[static_cast<Index>(c)] -= cb * row[c];
  }
  for (int r = 0; r < m_; ++r) d_[static_cast<Index>(Basic(r))] = 0.0;
}

double DenseSimplex::MaxPrimalViolation() const {
  double worst = 0.0;
  for (int r = 0; r < m_; ++r) {
    const auto c = static_cast<Index>(Basic(r));
    const double scale = 1.0 + std::abs(x_[c]);
    worst = std::max(worst, (lo_[c] - x_[c]) / scale);
    if (hi_[c] != kInfinity) worst = std::max(worst, (x_[c] - hi_[c]) / scale);
  }
  return worst;
}

void DenseSimplex::PivotOut(const std::vector<bool>& drop) {
  for (int r = 0; r < m_; ++r) {
    if (!drop[static_cast<Index>(Basic(r))]) continue;
    int best = -1;
    double best_mag = 1e-7;
    const double* row = Row(r);
    for (int c = 0; c < n_; ++c) {
      if (drop[static_cast<Index>(c)] || position_[static_cast<Index>(c)] >= 0) {
        continue;
      }
      if (std::abs(row[c]) > best_mag) {
        best_mag = std::abs(row[c]);
        best = c;
      }
    }
    if (best < 0) continue;  // redundant row; the column stays basic at zero
    // Degenerate exchange: the entering column keeps its bound value and
    // the leaving one is (numerically) zero.
    const int leaving = Basic(r);
    d_.assign(static_cast<Index>(n_), 0.0);
    Pivot(r, best);
    x_[static_cast<Index>(leaving)] = 0.0;
  }
}

LpStatus DenseSimplex::Optimize(const std::vector<double>& cost) {
  ComputeReducedCosts(cost);
  int degenerate_run = 0;
  bool bland = false;
  while (true) {
    if (iterations_ >= options_.max_iterations) {
      throw SolverError("simplex iteration limit reached");
    }
    if (since_refactor_ >= options_.refactor_interval) {
      Refactor();
      ComputeReducedCosts(cost);
    }

    int q = -1;
    double best = 0.0;
    for (int c = 0; c < n_; ++c) {
      const auto uc = static_cast<Index>(c);
      if (position_[uc] >= 0 || hi_[uc] <= lo_[uc]) continue;
      const bool at_upper = x_[uc] >= hi_[uc];
      const double dj = d_[uc];
      double gain = 0.0;
      if (!at_upper && dj < -options_.dual_tol) gain = -dj;
      if (at_upper && dj > options_.dual_tol) gain = dj;
      if (gain <= 0.0) continue;
      if (bland) {
        q = c;
        break;
      }
      if (gain > best) {
        best = gain;
        q = c;
      }
    }
    if (q < 0) return LpStatus::kOptimal;

    const auto uq = static_cast<Index>(q);
    const double sigma = x_[uq] >= hi_[uq] ? -1.0 : 1.0;

    double step = hi_[uq] - lo_[uq];
    int leave = -1;
    double leave_alpha = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double alpha = sigma * T(r, q);
      if (std::abs(alpha) <= options_.pivot_tol) continue;
      const auto ub = static_cast<Index>(Basic(r));
      double limit;
      if (alpha > 0.0) {
        limit = (x_[ub] - lo_[ub]) / alpha;
      } else {
        if (hi_[ub] == kInfinity) continue;
        limit = (hi_[ub] - x_[ub]) / -alpha;
      }
      limit = std::max(0.0, limit);
      bool take;
      if (limit < step - 1e-12) {
        take = true;
      } else if (limit <= step + 1e-12) {
        if (leave < 0) {
          take = step != kInfinity;
        } else {
          take = bland ? Basic(r) < Basic(leave)
                       : std::abs(alpha) > std::abs(leave_alpha);
        }
      } else {
        take = false;
      }
      if (take) {
        step = limit;
        leave = r;
        leave_alpha = alpha;
      }
    }
    if (step == kInfinity) return LpStatus::kUnbounded;

    ++iterations_;
    if (step <= 1e-12) {
      if (++degenerate_run > 50) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    if (step > 0.0) {
      x_[uq] += sigma * step;
      for (int r = 0; r < m_; ++r) {
        const double t = T(r, q);
        if (t != 0.0) x_[static_cast<Index>(Basic(r))] -= sigma * step * t;
      }
    }
    if (leave < 0) {
      x_[uq] = sigma > 0 ? hi_[uq] : lo_[uq];
      continue;
    }
    const auto ul = static_cast<Index>(Basic(leave));
    x_[ul] = leave_alpha > 0.0 ? lo_[ul] : hi_[ul];
    Pivot(leave, q);
  }
}

}  // namespace

LpResult SolveLp(const LpProblem& problem, const LpOptions& options) {
  const int n_orig = problem.num_variables();
  if (static_cast<int>(problem.lower.size()) != n_orig ||
      static_cast<int>(problem.upper.size()) != n_orig) {
    throw std::invalid_argument("LP bound vectors do not match cost vector");
  }
  for (int v = 0; v < n_orig; ++v) {
    if (!std::isfinite(problem.lower[static_cast<Index>(v)])) {
      throw std::invalid_argument("LP variables need finite lower bounds");
    }
  }

  LpResult result;
  const Presolved ps = Presolve(problem, options.primal_tol);
  if (ps.infeasible) {
    result.status = LpStatus::kInfeasible;
    return result;
  }

  const int n = static_cast<int>(ps.columns.size());
  const int m = static_cast<int>(ps.rows.size());

  // Column layout: structural | one slack per inequality row | artificials.
  std::vector<int> slack_of(static_cast<Index>(m), -1);
  int cols = n;
  for (int r = 0; r < m; ++r) {
    if (problem.rows[static_cast<Index>(ps.rows[static_cast<Index>(r)])].sense !=
        RowSense::kEqual) {
      slack_of[static_cast<Index>(r)] = cols++;
    }
  }

  // Residuals with every structural column at its lower bound decide which
  // rows can start from their slack.
  std::vector<double> residual(ps.row_rhs);
  for (int r = 0; r < m; ++r) {
    for (const Term& t :
         problem.rows[static_cast<Index>(ps.rows[static_cast<Index>(r)])].terms) {
      const int c = ps.column_of[static_cast<Index>(t.var)];
      if (c >= 0) {
        residual[static_cast<Index>(r)] -=
            t.coef * ps.lower[static_cast<Index>(t.var)];
      }
    }
  }
  std::vector<int> artificial_of(static_cast<Index>(m), -1);
  for (int r = 0; r < m; ++r) {
    const RowSense sense =
        problem.rows[static_cast<Index>(ps.rows[static_cast<Index>(r)])].sense;
    const double res = residual[static_cast<Index>(r)];
    const bool slack_ok = (sense == RowSense::kLessEqual && res >= 0.0) ||
                          (sense == RowSense::kGreaterEqual && res <= 0.0);
    if (!slack_ok) artificial_of[static_cast<Index>(r)] = cols++;
  }

  std::vector<double> a(static_cast<Index>(m) * static_cast<Index>(cols), 0.0);
  std::vector<double> lo(static_cast<Index>(cols), 0.0);
  std::vector<double> hi(static_cast<Index>(cols), kInfinity);
  auto at = [&](int r, int c) -> double& {
    return a[static_cast<Index>(r) * static_cast<Index>(cols) +
             static_cast<Index>(c)];
  };
  std::vector<int> start(static_cast<Index>(m), -1);
  for (int r = 0; r < m; ++r) {
    const LpRow& row =
        problem.rows[static_cast<Index>(ps.rows[static_cast<Index>(r)])];
    for (const Term& t : row.terms) {
      const int c = ps.column_of[static_cast<Index>(t.var)];
      if (c >= 0) at(r, c) += t.coef;
    }
    const int slack = slack_of[static_cast<Index>(r)];
    if (slack >= 0) {
      at(r, slack) = row.sense == RowSense::kLessEqual ? 1.0 : -1.0;
      start[static_cast<Index>(r)] = slack;
    }
    const int art = artificial_of[static_cast<Index>(r)];
    if (art >= 0) {
      at(r, art) = residual[static_cast<Index>(r)] >= 0.0 ? 1.0 : -1.0;
      start[static_cast<Index>(r)] = art;
    }
  }
  for (int c = 0; c < n; ++c) {
    lo[static_cast<Index>(c)] = ps.lower[static_cast<Index>(ps.columns[static_cast<Index>(c)])];
    hi[static_cast<Index>(c)] = ps.upper[static_cast<Index>(ps.columns[static_cast<Index>(c)])];
  }

  std::vector<bool> is_artificial(static_cast<Index>(cols), false);
  bool any_artificial = false;
  for (int r = 0; r < m; ++r) {
    const int art = artificial_of[static_cast<Index>(r)];
    if (art >= 0) {
      is_artificial[static_cast<Index>(art)] = true;
      any_artificial = true;
    }
  }

  double rhs_scale = 1.0;
  for (double v : ps.row_rhs) rhs_scale = std::max(rhs_scale, std::abs(v));

  DenseSimplex simplex(m, cols, std::move(a), ps.row_rhs, lo, hi, options);
  simplex.Start(start);

  if (any_artificial) {
    std::vector<double> phase1(static_cast<Index>(cols), 0.0);
    for (int c = 0; c < cols; ++c) {
      if (is_artificial[static_cast<Index>(c)]) phase1[static_cast<Index>(c)] = 1.0;
    }
    simplex.Optimize(phase1);
    simplex.Refactor();
    double infeasibility = 0.0;
    for (int c = 0; c < cols; ++c) {
      if (is_artificial[static_cast<Index>(c)]) {
        infeasibility += std::abs(simplex.x()[static_cast<Index>(c)]);
      }
    }
    if (infeasibility > 1e-7 * rhs_scale) {
      result.status = LpStatus::kInfeasible;
      result.iterations = simplex.iterations();
      return result;
    }
    simplex.PivotOut(is_artificial);
    for (int c = 0; c < cols; ++c) {
      if (is_artificial[static_cast<Index>(c)]) simplex.SetBounds(c, 0.0, 0.0);
    }
    simplex.Refactor();
  }

  std::vector<double> phase2(static_cast<Index>(cols), 0.0);
  for (int c = 0; c < n; ++c) {
    phase2[static_cast<Index>(c)] =
        problem.cost[static_cast<Index>(ps.columns[static_cast<Index>(c)])];
  }
  LpStatus status = LpStatus::kOptimal;
  for (int attempt = 0;; ++attempt) {
    status = simplex.Optimize(phase2);
    if (status != LpStatus::kOptimal) break;
    simplex.Refactor();
    if (simplex.MaxPrimalViolation() <= 1e-7) break;
    if (attempt == 2) {
      throw SolverError("simplex could not restore primal feasibility after "
                        "refactorization");
    }
  }
  result.status = status;
  result.iterations = simplex.iterations();
  if (status != LpStatus::kOptimal) return result;

  result.values.assign(static_cast<Index>(n_orig), 0.0);
  for (int v = 0; v < n_orig; ++v) {
    const auto uv = static_cast<Index>(v);
    const int c = ps.column_of[uv];
    double value = c >= 0 ? simplex.x()[static_cast<Index>(c)] : ps.lower[uv];
    value = std::clamp(value, problem.lower[uv],
                       std::max(problem.lower[uv], problem.upper[uv]));
    result.values[uv] = value;
  }
  result.objective = 0.0;
  for (int v = 0; v < n_orig; ++v) {
    result.objective += problem.cost[static_cast<Index>(v)] *
                        result.values[static_cast<Index>(v)];
  }
  return result;
}

LpProblem Relaxation(const MilpInstance& instance) {
  LpProblem lp;
  for (const Variable& v : instance.variables()) {
    lp.AddVariable(v.lower, v.upper, v.cost);
  }
  for (const Constraint& c : instance.constraints()) {
    lp.AddRow(c.terms, c.sense, c.rhs);
  }
  return lp;
}

}  // namespace gridshade
