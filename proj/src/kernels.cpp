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

#include "mdph/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace mdph::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mix2(double* out, const double* a, double wa, const double* b, double wb, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = wa * a[i] + wb * b[i];
}

void weighted_moments(const double* w, const double* v, std::size_t n, double* m1, double* m2) {
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wv = w[i] * v[i];
    s1 += wv;
    s2 += wv * v[i];
  }
  *m1 = s1;
  *m2 = s2;
}

double tv_distance(const double* p, const double* q, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(p[i] - q[i]);
  return 0.5 * acc;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace scalar

namespace {

constexpr Ops kScalarOps = {
    scalar::dot,    scalar::sum,         scalar::axpy,         scalar::mix2,
    scalar::weighted_moments, scalar::tv_distance, scalar::max_abs_diff, "scalar",
};

#if defined(MDPH_HAVE_AVX2_TU)
constexpr Ops kAvx2Ops = {
    avx2::dot,    avx2::sum,         avx2::axpy,         avx2::mix2,
    avx2::weighted_moments, avx2::tv_distance, avx2::max_abs_diff, "avx2",
};
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Ops& resolve() {
  const char* pref = std::getenv("MDPH_SIMD");
  if (pref != nullptr && std::strcmp(pref, "scalar") == 0) return kScalarOps;
#if defined(MDPH_HAVE_AVX2_TU)
  if (pref != nullptr && std::strcmp(pref, "avx2") == 0) return kAvx2Ops;
  if (cpu_has_avx2()) return kAvx2Ops;
#else
  (void)cpu_has_avx2;
#endif
  return kScalarOps;
}

}  // namespace

const Ops& active() {
  static const Ops& ops = resolve();
  return ops;
}

std::string active_name() { return active().name; }

}  // namespace mdph::kernels
