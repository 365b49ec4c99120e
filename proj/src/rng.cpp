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

#include "mdph/rng.hpp"

#include <cmath>
#include <numbers>

namespace mdph {

namespace {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (0x9E3779B97F4A7C15ULL + b));
}

std::uint64_t Rng::next_u64() { return splitmix64(key_ + 0xA0761D6478BD642FULL * ++counter_); }

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint32_t Rng::next_below(std::uint32_t bound) {
  return static_cast<std::uint32_t>(next_double() * bound);
}

double Rng::next_normal() {
  double u1 = next_double();
  double u2 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::next_gamma(double shape) {
  if (shape < 1.0) {
    // Ahrens-Dieter boost: Gamma(a) = Gamma(a+1) * U^{1/a}.
    double u = next_double();
    while (u <= 0.0) u = next_double();
    return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = next_normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = next_double();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::next_beta(double a, double b) {
  const double x = next_gamma(a);
  const double y = next_gamma(b);
  if (x + y == 0.0) return 0.5;
  return x / (x + y);
}

double Rng::next_student_t(double nu) {
  const double z = next_normal();
  const double chi2 = 2.0 * next_gamma(nu / 2.0);
  return z / std::sqrt(chi2 / nu);
}

std::vector<double> Rng::next_dirichlet(std::span<const double> alphas) {
  std::vector<double> out(alphas.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    out[i] = next_gamma(alphas[i]);
    total += out[i];
  }
  if (total <= 0.0) {
    const double u = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v = u;
    return out;
  }
  for (auto& v : out) v /= total;
  return out;
}

int Rng::next_categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = next_double() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace mdph
