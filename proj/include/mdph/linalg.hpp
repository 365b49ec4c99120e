// Copyright 2026-present the mdph project
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

#pragma once

#include <vector>

namespace mdph {

/// Solve A x = b for dense row-major A (n x n) by LU with partial pivoting.
/// A and b are taken by value; returns x. Throws Error("SingularMatrix")
/// when a pivot collapses.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n);

}  // namespace mdph
