// tests/oracles.cc
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

#include "oracles.h"

#include <cmath>
#include <map>
#include <stdexcept>

#include "tcr/logmath.h"

namespace tcr::oracle {

std::vector<Moves> EnumerateAlignments(int T, int U) {
  std::vector<Moves> out;
  Moves cur;
  std::function<void(int, int)> rec = [&](int blanks, int emits) {
    if (blanks == T - 1 && emits == U) {
      out.push_back(cur);
      return;
    }
    if (blanks < T - 1) {
      cur.push_back('B');
      rec(blanks + 1, emits);
      cur.pop_back();
    }
    if (emits < U) {
      cur.push_back('E');
      rec(blanks, emits + 1);
      cur.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

double AlignmentProb(const EmissionLattice& lattice, const TargetSeq& target,
                     const Moves& moves) {
  int t = 0, u = 0;
  double p = 1.0;
  for (char m : moves) {
    if (m == 'B') {
      p *= std::exp(lattice.At(t, u, kBlank));
      ++t;
    } else {
      p *= std::exp(lattice.At(t, u, target[u]));
      ++u;
    }
  }
  p *= std::exp(lattice.At(lattice.T - 1, lattice.U, kBlank));
  return p;
}

double TotalProbBruteForce(const EmissionLattice& lattice,
                           const TargetSeq& target) {
  double total = 0.0;
  for (const Moves& m : EnumerateAlignments(lattice.T, lattice.U)) {
    total += AlignmentProb(lattice, target, m);
  }
  return total;
}

double TotalProbBruteForceBanded(const EmissionLattice& lattice,
                                 const TargetSeq& target,
                                 const PruneBand& band) {
  double total = 0.0;
  for (const Moves& moves : EnumerateAlignments(lattice.T, lattice.U)) {
    int t = 0, u = 0;
    bool inside = band.Contains(0, 0);
    for (char m : moves) {
      if (m == 'B') ++t; else ++u;
      if (!band.Contains(t, u)) {
        inside = false;
        break;
      }
    }
    if (inside) total += AlignmentProb(lattice, target, moves);
  }
  return total;
}

PosteriorCounts CountTransitionPosteriors(const EmissionLattice& lattice,
                                          const TargetSeq& target) {
  const int T = lattice.T, U = lattice.U;
  PosteriorCounts counts;
  counts.emit.assign(static_cast<size_t>(T) * U, 0.0);
  counts.blank.assign(static_cast<size_t>(T) * (U + 1), 0.0);
  double total = 0.0;
  for (const Moves& moves : EnumerateAlignments(T, U)) {
    double p = AlignmentProb(lattice, target, moves);
    total += p;
    int t = 0, u = 0;
    for (char m : moves) {
      if (m == 'B') {
        counts.blank[t * (U + 1) + u] += p;
        ++t;
      } else {
        counts.emit[t * U + u] += p;
        ++u;
      }
    }
    counts.blank[(T - 1) * (U + 1) + U] += p;  // final blank
  }
  if (total <= 0.0) throw std::domain_error("oracle: zero total probability");
  for (double& c : counts.emit) c /= total;
  for (double& c : counts.blank) c /= total;
  return counts;
}

double AlphaBruteForce(const EmissionLattice& lattice, const TargetSeq& target,
                       int t, int u) {
  // Prefixes reaching (t, u): t blanks and u emits in any order.
  double total = 0.0;
  for (const Moves& moves : EnumerateAlignments(t + 1, u)) {
    int ct = 0, cu = 0;
    double p = 1.0;
    for (char m : moves) {
      if (m == 'B') {
        p *= std::exp(lattice.At(ct, cu, kBlank));
        ++ct;
      } else {
        p *= std::exp(lattice.At(ct, cu, target[cu]));
        ++cu;
      }
    }
    total += p;
  }
  return total;
}

namespace {

EmissionLattice PerturbCellRenorm(const EmissionLattice& lattice, int t, int u,
                                  int k, double eps) {
  EmissionLattice out = lattice;
  out.At(t, u, k) += eps;
  std::vector<double> row(out.V + 1);
  for (int m = 0; m <= out.V; ++m) row[m] = out.At(t, u, m);
  double lse = LogSumExp(row);
  for (int m = 0; m <= out.V; ++m) out.At(t, u, m) -= lse;
  return out;
}

}  // namespace

double FiniteDiffCellRenorm(
    const EmissionLattice& lattice, int t, int u, int k, double eps,
    const std::function<double(const EmissionLattice&)>& loss) {
  double up = loss(PerturbCellRenorm(lattice, t, u, k, eps));
  double down = loss(PerturbCellRenorm(lattice, t, u, k, -eps));
  return (up - down) / (2.0 * eps);
}

double ProjectCellGrad(const EmissionLattice& lattice,
                       const std::vector<double>& grad, int t, int u, int k) {
  const int V1 = lattice.V + 1;
  size_t base = (static_cast<size_t>(t) * (lattice.U + 1) + u) * V1;
  double cell_sum = 0.0;
  for (int m = 0; m < V1; ++m) cell_sum += grad[base + m];
  return grad[base + k] - std::exp(lattice.At(t, u, k)) * cell_sum;
}

EmissionLattice RandomLattice(int T, int U, int V, Rng& rng, double scale) {
  EmissionLattice lattice(T, U, V);
  std::vector<double> row(V + 1);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      for (int k = 0; k <= V; ++k) row[k] = scale * rng.Normal();
      double lse = LogSumExp(row);
      for (int k = 0; k <= V; ++k) {
        lattice.At(t, u, k) = std::min(row[k] - lse, 0.0);
      }
    }
  }
  return lattice;
}

TargetSeq RandomTarget(int U, int V, Rng& rng) {
  TargetSeq target(U);
  for (int& tok : target) tok = static_cast<int>(rng.UniformInt(1, V));
  return target;
}

double BernoulliKl(double p, double q) {
  double kl = 0.0;
  if (p > 0.0) kl += p * std::log(p / q);
  if (p < 1.0) kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return kl;
}

double CellKl(const EmissionLattice& a, const EmissionLattice& b, int t,
              int u) {
  double kl = 0.0;
  for (int k = 0; k <= a.V; ++k) {
    double la = a.At(t, u, k);
    if (IsLogZero(la)) continue;
    kl += std::exp(la) * (la - b.At(t, u, k));
  }
  return kl;
}

int EditDistanceRecursive(const std::vector<int>& a,
                          const std::vector<int>& b) {
  std::map<std::pair<int, int>, int> memo;
  std::function<int(int, int)> rec = [&](int i, int j) -> int {
    if (i == 0) return j;
    if (j == 0) return i;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    int best = rec(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
    best = std::min(best, rec(i - 1, j) + 1);
    best = std::min(best, rec(i, j - 1) + 1);
    memo[{i, j}] = best;
    return best;
  };
  return rec(static_cast<int>(a.size()), static_cast<int>(b.size()));
}

}  // namespace tcr::oracle
