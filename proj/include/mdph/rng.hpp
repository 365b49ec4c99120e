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

#include <cstdint>
#include <span>
#include <vector>

namespace mdph {

/// Counter-based pseudo-random generator (splitmix64 core). A stream is
/// fully determined by its 64-bit key; substreams are derived with fork(),
/// so a draw at (seed, step) can be replayed without replaying history.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key), counter_(0) {}

  /// Derive an independent stream keyed by (this stream, salt).
  Rng fork(std::uint64_t salt) const { return Rng(mix(key_, salt)); }

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double next_double();

  /// Uniform integer in [0, bound).
  std::uint32_t next_below(std::uint32_t bound);

  /// Standard normal (Box-Muller; one value per call, no caching so the
  /// stream position stays a pure function of the draw count).
  double next_normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang, with the Ahrens boost for
  /// shape < 1.
  double next_gamma(double shape);

  double next_beta(double a, double b);

  /// Student's t with nu degrees of freedom.
  double next_student_t(double nu);

  /// Dirichlet over `alphas.size()` components.
  std::vector<double> next_dirichlet(std::span<const double> alphas);

  /// Sample an index from an (unnormalized is fine) weight vector.
  int next_categorical(std::span<const double> weights);

  /// Key combiner usable for building stream keys from (seed, step, salt).
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace mdph
