// tcr/logmath.h
//
// Copyright 2026  TCR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCR_LOGMATH_H_
#define TCR_LOGMATH_H_

#include <cmath>
#include <limits>
#include <span>

namespace tcr {

// Log-domain zero. Absorbs in LogAdd, annihilates in (log-space) products.
constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline bool IsLogZero(double x) { return x == kLogZero; }

// log(exp(a) + exp(b)), safe for either or both arguments being kLogZero.
inline double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (IsLogZero(a)) return kLogZero;  // both are log-zero
  double diff = b - a;                // <= 0, may be -inf
  return a + std::log1p(std::exp(diff));
}

// log(sum_i exp(x_i)); kLogZero for an empty span.
inline double LogSumExp(std::span<const double> xs) {
  double max = kLogZero;
  for (double x : xs) max = std::max(max, x);
  if (IsLogZero(max)) return kLogZero;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - max);
  return max + std::log(sum);
}

// log(1 - exp(x)) for x <= 0. Returns kLogZero at x == 0.
inline double Log1mExp(double x) {
  if (x >= 0.0) return kLogZero;
  // Split at -ln 2 for accuracy (Maechler 2012).
  if (x > -0.6931471805599453) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

}  // namespace tcr

#endif  // TCR_LOGMATH_H_
