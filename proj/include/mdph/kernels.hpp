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

#include <cstddef>
#include <string>

// Double-precision inner loops shared by the planners and the hardness
// measures. Every operation has a scalar reference implementation and may
// have SIMD variants; the active set is chosen once at startup from CPU
// capabilities (override with MDPH_SIMD=scalar|avx2|auto).

namespace mdph::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
// out = wa*a + wb*b
void mix2(double* out, const double* a, double wa, const double* b, double wb, std::size_t n);
// First and second weighted moments: m1 = sum w*v, m2 = sum w*v*v.
void weighted_moments(const double* w, const double* v, std::size_t n, double* m1, double* m2);
// 0.5 * sum |p - q|
double tv_distance(const double* p, const double* q, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);

}  // namespace scalar

#if defined(MDPH_HAVE_AVX2_TU)
namespace avx2 {

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
void mix2(double* out, const double* a, double wa, const double* b, double wb, std::size_t n);
void weighted_moments(const double* w, const double* v, std::size_t n, double* m1, double* m2);
double tv_distance(const double* p, const double* q, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);

}  // namespace avx2
#endif

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double*, double, const double*, std::size_t);
  void (*mix2)(double*, const double*, double, const double*, double, std::size_t);
  void (*weighted_moments)(const double*, const double*, std::size_t, double*, double*);
  double (*tv_distance)(const double*, const double*, std::size_t);
  double (*max_abs_diff)(const double*, const double*, std::size_t);
  const char* name;
};

/// Active implementation set (resolved on first use).
const Ops& active();

/// Name of the active set ("scalar" or "avx2").
std::string active_name();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double sum(const double* a, std::size_t n) { return active().sum(a, n); }
inline void axpy(double* y, double alpha, const double* x, std::size_t n) {
  active().axpy(y, alpha, x, n);
}
inline void mix2(double* out, const double* a, double wa, const double* b, double wb,
                 std::size_t n) {
  active().mix2(out, a, wa, b, wb, n);
}
inline void weighted_moments(const double* w, const double* v, std::size_t n, double* m1,
                             double* m2) {
  active().weighted_moments(w, v, n, m1, m2);
}
/// Weighted variance of v under (normalized) weights w.
inline double weighted_variance(const double* w, const double* v, std::size_t n) {
  double m1 = 0.0, m2 = 0.0;
  weighted_moments(w, v, n, &m1, &m2);
  double var = m2 - m1 * m1;
  return var > 0.0 ? var : 0.0;
}
inline double tv_distance(const double* p, const double* q, std::size_t n) {
  return active().tv_distance(p, q, n);
}
inline double max_abs_diff(const double* a, const double* b, std::size_t n) {
  return active().max_abs_diff(a, b, n);
}

}  // namespace mdph::kernels
