// tcr/lattice.cc
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

#include "tcr/lattice.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tcr/logmath.h"

namespace tcr {

namespace {

inline bool InBand(const PruneBand* band, int t, int u) {
  return band == nullptr || band->Contains(t, u);
}

void CheckBand(const PruneBand* band, int T, int U) {
  if (band == nullptr) return;
  if (static_cast<int>(band->lower.size()) != T) {
    throw std::invalid_argument("band length does not match lattice T");
  }
  if (band->width < 1) throw std::invalid_argument("band width must be >= 1");
  for (int t = 0; t < T; ++t) {
    int lo = band->lower[t];
    if (lo < 0 || lo + band->width > U + 1) {
      throw std::invalid_argument("band start out of range");
    }
    if (t > 0 && lo < band->lower[t - 1]) {
      throw std::invalid_argument("band start must be non-decreasing in t");
    }
  }
  if (!band->Contains(0, 0) || !band->Contains(T - 1, U)) {
    throw std::invalid_argument("band must cover (0,0) and (T-1,U)");
  }
}

}  // namespace

PruneBand FullBand(int T, int U) {
  PruneBand band;
  band.width = U + 1;
  band.lower.assign(T, 0);
  return band;
}

void CheckLatticeTarget(const EmissionLattice& lattice,
                        const TargetSeq& target) {
  if (lattice.T < 1 || lattice.U < 0 || lattice.V < 1) {
    throw std::invalid_argument("lattice dims must satisfy T>=1, U>=0, V>=1");
  }
  if (lattice.logp.size() !=
      static_cast<size_t>(lattice.T) * (lattice.U + 1) * (lattice.V + 1)) {
    throw std::invalid_argument("lattice storage does not match (T,U+1,V+1)");
  }
  if (static_cast<int>(target.size()) != lattice.U) {
    throw std::invalid_argument("target length does not match lattice U");
  }
  for (int tok : target) {
    if (tok < 1 || tok > lattice.V) {
      throw std::invalid_argument("target token outside 1..V");
    }
  }
}

double MaxCellNormError(const EmissionLattice& lattice) {
  double worst = 0.0;
  const int V1 = lattice.V + 1;
  for (size_t cell = 0; cell < lattice.CellCount(); ++cell) {
    std::span<const double> row(&lattice.logp[cell * V1], V1);
    worst = std::max(worst, std::fabs(LogSumExp(row)));
  }
  return worst;
}

std::vector<double> ForwardPass(const EmissionLattice& lattice,
                                const TargetSeq& target,
                                const PruneBand* band) {
  CheckLatticeTarget(lattice, target);
  CheckBand(band, lattice.T, lattice.U);
  const int T = lattice.T, U = lattice.U, W = U + 1;
  std::vector<double> alpha(static_cast<size_t>(T) * W, kLogZero);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      if (!InBand(band, t, u)) continue;
      double a = kLogZero;
      if (t == 0 && u == 0) {
        a = 0.0;
      } else {
        if (t > 0 && InBand(band, t - 1, u)) {
          a = LogAdd(a, alpha[(t - 1) * W + u] + lattice.At(t - 1, u, kBlank));
        }
        if (u > 0 && InBand(band, t, u - 1)) {
          a = LogAdd(a,
                     alpha[t * W + (u - 1)] + lattice.At(t, u - 1, target[u - 1]));
        }
      }
      alpha[t * W + u] = a;
    }
  }
  return alpha;
}

std::vector<double> BackwardPass(const EmissionLattice& lattice,
                                 const TargetSeq& target,
                                 const PruneBand* band) {
  CheckLatticeTarget(lattice, target);
  CheckBand(band, lattice.T, lattice.U);
  const int T = lattice.T, U = lattice.U, W = U + 1;
  std::vector<double> beta(static_cast<size_t>(T) * W, kLogZero);
  for (int t = T - 1; t >= 0; --t) {
    for (int u = U; u >= 0; --u) {
      if (!InBand(band, t, u)) continue;
      double b = kLogZero;
      if (t == T - 1 && u == U) {
        b = lattice.At(t, u, kBlank);
      } else {
        if (t + 1 < T && InBand(band, t + 1, u)) {
          b = LogAdd(b, beta[(t + 1) * W + u] + lattice.At(t, u, kBlank));
        }
        if (u < U && InBand(band, t, u + 1)) {
          b = LogAdd(b, beta[t * W + (u + 1)] + lattice.At(t, u, target[u]));
        }
      }
      beta[t * W + u] = b;
    }
  }
  return beta;
}

LatticeTables ComputeTables(const EmissionLattice& lattice,
                            const TargetSeq& target, const PruneBand* band) {
  LatticeTables tables;
  tables.T = lattice.T;
  tables.U = lattice.U;
  tables.log_alpha = ForwardPass(lattice, target, band);
  tables.log_beta = BackwardPass(lattice, target, band);
  tables.log_prob_total = tables.Alpha(lattice.T - 1, lattice.U) +
                          lattice.At(lattice.T - 1, lattice.U, kBlank);
  return tables;
}

double TransducerLoss(const EmissionLattice& lattice, const TargetSeq& target,
                      const PruneBand* band) {
  std::vector<double> alpha = ForwardPass(lattice, target, band);
  double total = alpha[(lattice.T - 1) * (lattice.U + 1) + lattice.U] +
                 lattice.At(lattice.T - 1, lattice.U, kBlank);
  return -total;
}

std::vector<double> LossGrad(const EmissionLattice& lattice,
                             const TargetSeq& target,
                             const LatticeTables& tables) {
  CheckLatticeTarget(lattice, target);
  if (IsLogZero(tables.log_prob_total)) {
    throw std::domain_error("gradient undefined: Pr(y|x) = 0");
  }
  const int T = lattice.T, U = lattice.U, V1 = lattice.V + 1;
  std::vector<double> grad(lattice.logp.size(), 0.0);
  const double log_z = tables.log_prob_total;
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      double a = tables.Alpha(t, u);
      if (IsLogZero(a)) continue;
      size_t base = (static_cast<size_t>(t) * (U + 1) + u) * V1;
      // Blank transition: continuation is beta(t+1,u), or 1 for the
      // terminal blank at (T-1,U).
      double beta_blank = kLogZero;
      if (t == T - 1 && u == U) {
        beta_blank = 0.0;
      } else if (t + 1 < T) {
        beta_blank = tables.Beta(t + 1, u);
      }
      if (!IsLogZero(beta_blank)) {
        double lw = a + lattice.At(t, u, kBlank) + beta_blank - log_z;
        grad[base + kBlank] = -std::exp(lw);
      }
      // Emit transition for the aligned next token.
      if (u < U) {
        double beta_emit = tables.Beta(t, u + 1);
        if (!IsLogZero(beta_emit)) {
          double lw = a + lattice.At(t, u, target[u]) + beta_emit - log_z;
          grad[base + target[u]] = -std::exp(lw);
        }
      }
    }
  }
  return grad;
}

std::vector<double> LossGrad(const EmissionLattice& lattice,
                             const TargetSeq& target) {
  return LossGrad(lattice, target, ComputeTables(lattice, target));
}

OccupancyMaps Occupancies(const EmissionLattice& lattice,
                          const TargetSeq& target,
                          const LatticeTables& tables) {
  CheckLatticeTarget(lattice, target);
  if (IsLogZero(tables.log_prob_total)) {
    throw std::domain_error("occupancies undefined: Pr(y|x) = 0");
  }
  const int T = lattice.T, U = lattice.U;
  const double log_z = tables.log_prob_total;
  OccupancyMaps occ;
  occ.T = T;
  occ.U = U;
  occ.w_nonblank.assign(static_cast<size_t>(T) * U, 0.0);
  occ.w_blank.assign(static_cast<size_t>(T) * (U + 1), 0.0);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      double a = tables.Alpha(t, u);
      if (IsLogZero(a)) continue;
      if (u < U && !IsLogZero(tables.Beta(t, u + 1))) {
        double lw = a + tables.Beta(t, u + 1) + lattice.At(t, u, target[u]) - log_z;
        occ.w_nonblank[t * U + u] = std::exp(lw);
      }
      double beta_blank = kLogZero;
      if (t == T - 1 && u == U) {
        beta_blank = 0.0;
      } else if (t + 1 < T) {
        beta_blank = tables.Beta(t + 1, u);
      }
      if (!IsLogZero(beta_blank)) {
        double lw = a + beta_blank + lattice.At(t, u, kBlank) - log_z;
        occ.w_blank[t * (U + 1) + u] = std::exp(lw);
      }
    }
  }
  for (double w : occ.w_nonblank) occ.norm_nonblank += w;
  for (double w : occ.w_blank) occ.norm_blank += w;
  if (occ.norm_nonblank > 0.0) {
    for (double& w : occ.w_nonblank) w /= occ.norm_nonblank;
  }
  if (occ.norm_blank > 0.0) {
    for (double& w : occ.w_blank) w /= occ.norm_blank;
  }
  return occ;
}

double AntidiagonalCheck(const LatticeTables& tables) {
  const int T = tables.T, U = tables.U;
  double worst = 0.0;
  for (int n = 0; n <= T - 1 + U; ++n) {
    double lse = kLogZero;
    bool any = false;
    for (int t = std::max(0, n - U); t <= std::min(T - 1, n); ++t) {
      int u = n - t;
      double m = tables.Alpha(t, u) + tables.Beta(t, u);
      if (!IsLogZero(m)) any = true;
      lse = LogAdd(lse, m);
    }
    if (!any) continue;  // diagonal entirely outside the reachable band
    worst = std::max(worst, std::fabs(lse - tables.log_prob_total));
  }
  return worst;
}

std::vector<std::pair<int, int>> ViterbiAlignment(
    const EmissionLattice& lattice, const TargetSeq& target,
    const PruneBand* band) {
  CheckLatticeTarget(lattice, target);
  CheckBand(band, lattice.T, lattice.U);
  const int T = lattice.T, U = lattice.U, W = U + 1;
  std::vector<double> score(static_cast<size_t>(T) * W, kLogZero);
  // back[t*W+u]: 0 = arrived by blank from (t-1,u), 1 = arrived by emit
  // from (t,u-1). Ties prefer the emit arrival, which keeps the path on
  // low u as long as possible, i.e. blanks are taken first.
  std::vector<int8_t> back(static_cast<size_t>(T) * W, -1);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      if (!InBand(band, t, u)) continue;
      if (t == 0 && u == 0) {
        score[0] = 0.0;
        continue;
      }
      double via_blank = kLogZero, via_emit = kLogZero;
      if (t > 0 && InBand(band, t - 1, u)) {
        via_blank = score[(t - 1) * W + u] + lattice.At(t - 1, u, kBlank);
      }
      if (u > 0 && InBand(band, t, u - 1)) {
        via_emit = score[t * W + (u - 1)] + lattice.At(t, u - 1, target[u - 1]);
      }
      if (IsLogZero(via_blank) && IsLogZero(via_emit)) continue;
      if (via_emit >= via_blank) {
        score[t * W + u] = via_emit;
        back[t * W + u] = 1;
      } else {
        score[t * W + u] = via_blank;
        back[t * W + u] = 0;
      }
    }
  }
  std::vector<std::pair<int, int>> path;
  int t = T - 1, u = U;
  if (IsLogZero(score[t * W + u]) && !(t == 0 && u == 0)) {
    throw std::domain_error("no alignment with nonzero probability");
  }
  while (true) {
    path.emplace_back(t, u);
    if (t == 0 && u == 0) break;
    if (back[t * W + u] == 1) {
      --u;
    } else {
      --t;
    }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace tcr
