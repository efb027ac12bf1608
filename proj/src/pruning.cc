// tcr/pruning.cc
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

#include "tcr/pruning.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcr/logmath.h"

namespace tcr {

namespace {

// Per-cell posterior mass alpha*beta/Z; the normalizer only shifts scores.
std::vector<double> CellMass(const LatticeTables& tables) {
  const int T = tables.T, U = tables.U;
  std::vector<double> mass(static_cast<size_t>(T) * (U + 1), 0.0);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      double m = tables.Alpha(t, u) + tables.Beta(t, u) - tables.log_prob_total;
      if (!IsLogZero(m) && !std::isnan(m)) mass[t * (U + 1) + u] = std::exp(m);
    }
  }
  return mass;
}

// Width-1 band maximizing covered mass: non-decreasing starts, pinned to
// u=0 at the first step and u=U at the last.
PruneBand BestUnitBand(const std::vector<double>& mass, int T, int U) {
  const int n_starts = U + 1;
  constexpr double kBad = -1.0;
  std::vector<double> f(static_cast<size_t>(T) * n_starts, kBad);
  std::vector<int> from(static_cast<size_t>(T) * n_starts, 0);
  f[0] = mass[0];
  for (int t = 1; t < T; ++t) {
    double best_prev = kBad;
    int best_s = 0;
    for (int s = 0; s < n_starts; ++s) {
      double prev = f[(t - 1) * n_starts + s];
      if (prev > best_prev) {  // strict: ties keep the smallest start
        best_prev = prev;
        best_s = s;
      }
      if (best_prev == kBad) continue;
      f[t * n_starts + s] = best_prev + mass[t * (U + 1) + s];
      from[t * n_starts + s] = best_s;
    }
  }
  PruneBand band;
  band.width = 1;
  band.lower.assign(T, 0);
  band.lower[T - 1] = U;
  for (int t = T - 1; t > 0; --t) {
    band.lower[t - 1] = from[t * n_starts + band.lower[t]];
  }
  return band;
}

// Widens the band by one row, either below (start-1) or above (start kept),
// choosing per step to maximize the newly covered mass while keeping starts
// non-decreasing. The result contains every cell of the input band, which
// is what makes BandedLoss non-increasing in the width.
PruneBand WidenByOne(const PruneBand& band, const std::vector<double>& mass,
                     int U) {
  const int T = static_cast<int>(band.lower.size());
  const int w = band.width;
  constexpr double kBad = -std::numeric_limits<double>::infinity();
  // Choice d=1 extends below, d=0 above. When adjacent steps share a start,
  // (d_t=0, d_{t+1}=1) would break monotonicity and is disallowed.
  auto gain = [&](int t, int d) {
    int lo = band.lower[t];
    if (d == 1) return lo > 0 ? mass[t * (U + 1) + (lo - 1)] : kBad;
    return lo + w <= U ? mass[t * (U + 1) + (lo + w)] : kBad;
  };
  std::vector<double> f(static_cast<size_t>(T) * 2, kBad);
  std::vector<int8_t> from(static_cast<size_t>(T) * 2, 0);
  f[0] = gain(0, 0);
  f[1] = gain(0, 1);
  for (int t = 1; t < T; ++t) {
    for (int d = 0; d < 2; ++d) {
      double g = gain(t, d);
      if (g == kBad) continue;
      double best = kBad;
      int8_t best_d = 0;
      for (int dp = 1; dp >= 0; --dp) {  // ties prefer extending below
        if (band.lower[t] == band.lower[t - 1] && dp == 0 && d == 1) continue;
        double prev = f[(t - 1) * 2 + dp];
        if (prev > best) {
          best = prev;
          best_d = static_cast<int8_t>(dp);
        }
      }
      if (best == kBad) continue;
      f[t * 2 + d] = best + g;
      from[t * 2 + d] = best_d;
    }
  }
  PruneBand wide;
  wide.width = w + 1;
  wide.lower.assign(T, 0);
  int d = f[(T - 1) * 2 + 1] >= f[(T - 1) * 2 + 0] ? 1 : 0;
  for (int t = T - 1; t >= 0; --t) {
    wide.lower[t] = band.lower[t] - d;
    if (t > 0) d = from[t * 2 + d];
  }
  return wide;
}

}  // namespace

PruneBand SelectBand(const LatticeTables& tables, int u_r) {
  if (u_r < 1) throw std::invalid_argument("band width must be >= 1");
  const int T = tables.T, U = tables.U;
  // T=1 needs the whole column to cover both endpoints.
  const int width = T == 1 ? U + 1 : std::min(u_r, U + 1);
  if (width == U + 1) return FullBand(T, U);

  // Bands are nested across widths: the width-1 optimum is grown one row at
  // a time. Widening never drops a cell, so covered alignment mass (and the
  // banded loss) is monotone in u_r by construction.
  std::vector<double> mass = CellMass(tables);
  PruneBand band = BestUnitBand(mass, T, U);
  while (band.width < width) band = WidenByOne(band, mass, U);
  return band;
}

double BandedLoss(const EmissionLattice& lattice, const TargetSeq& target,
                  const PruneBand& band) {
  return TransducerLoss(lattice, target, &band);
}

LatticeTables ComputeTablesBanded(const EmissionLattice& lattice,
                                  const TargetSeq& target,
                                  const PruneBand& band) {
  return ComputeTables(lattice, target, &band);
}

}  // namespace tcr
