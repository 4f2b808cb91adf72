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

#ifndef GRIDSHADE_ERRORS_H_
#define GRIDSHADE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace gridshade {

// Malformed or inconsistent user input: topology, scenario, CLI arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The optimizer could not produce a usable answer (numerical breakdown,
// infeasible slot, exhausted limits without an incumbent).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model invariant was broken by a computed quantity, e.g. a battery
// withdrawal exceeding the residual energy.
class FeasibilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An enumeration exceeded its configured size budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gridshade

#endif  // GRIDSHADE_ERRORS_H_
