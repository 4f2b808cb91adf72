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

#ifndef GRIDSHADE_LINEAR_H_
#define GRIDSHADE_LINEAR_H_

namespace gridshade {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// One nonzero coefficient of a sparse row.
struct Term {
  int var = 0;
  double coef = 0.0;
};

}  // namespace gridshade

#endif  // GRIDSHADE_LINEAR_H_
