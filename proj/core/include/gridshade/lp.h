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

#ifndef GRIDSHADE_LP_H_
#define GRIDSHADE_LP_H_

#include <limits>
#include <vector>

#include "gridshade/linear.h"

namespace gridshade {

class MilpInstance;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LpRow {
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

// minimize cost . x  subject to rows, lower <= x <= upper.
// Lower bounds must be finite; upper bounds may be infinite.
struct LpProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int num_variables() const { return static_cast<int>(cost.size()); }
  int AddVariable(double lo, double hi, double c);
  void AddRow(std::vector<Term> terms, RowSense sense, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;
  double objective = 0.0;
  int iterations = 0;
};

struct LpOptions {
  int max_iterations = 100000;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Pivots between full recomputations of the tableau from the original
  // matrix.
  int refactor_interval = 100;
};

// Bounded-variable two-phase primal simplex on a dense tableau, with a light
// presolve (fixed columns, empty and singleton rows). Dantzig pricing, Bland's
// rule after a run of degenerate pivots. Throws SolverError when the final
// basis fails verification after refactorization retries.
LpResult SolveLp(const LpProblem& problem, const LpOptions& options = {});

// Continuous relaxation of the instance (integrality dropped).
LpProblem Relaxation(const MilpInstance& instance);

}  // namespace gridshade

#endif  // GRIDSHADE_LP_H_
