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

#include "mdph/linalg.hpp"

#include <cmath>
#include <utility>

#include "mdph/error.hpp"
#include "mdph/kernels.hpp"

namespace mdph {

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::fabs(a[static_cast<std::size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::fabs(a[static_cast<std::size_t>(r) * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-300) throw Error("SingularMatrix", "pivot " + std::to_string(col) + " is zero");
    if (pivot != col) {
      for (int c = col; c < n; ++c)
        std::swap(a[static_cast<std::size_t>(col) * n + c], a[static_cast<std::size_t>(pivot) * n + c]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a[static_cast<std::size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r) * n + col] * inv;
      if (f == 0.0) continue;
      kernels::axpy(&a[static_cast<std::size_t>(r) * n + col], -f,
                    &a[static_cast<std::size_t>(col) * n + col], static_cast<std::size_t>(n - col));
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    if (r + 1 < n)
      acc -= kernels::dot(&a[static_cast<std::size_t>(r) * n + r + 1], &x[r + 1],
                          static_cast<std::size_t>(n - r - 1));
    x[r] = acc / a[static_cast<std::size_t>(r) * n + r];
  }
  return x;
}

}  // namespace mdph
