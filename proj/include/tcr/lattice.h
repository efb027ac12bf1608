// tcr/lattice.h
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
//
// Log-domain forward-backward over the transducer alignment lattice.
//
// The lattice is a T x (U+1) grid of states (t, u): input step t (0-based
// here, 1-based in most derivations) after emitting the first u target
// tokens. Each state carries a normalized log-probability distribution over
// the vocabulary plus the blank token. A horizontal move consumes one input
// step (blank emission); a vertical move emits the next target token. A full
// alignment runs from (0, 0) to (T-1, U) and terminates with a final blank.

#ifndef TCR_LATTICE_H_
#define TCR_LATTICE_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tcr {

// Token id 0 is the blank; vocabulary tokens are 1..V.
constexpr int kBlank = 0;

// Target token sequence, values in 1..V. The implicit y_0 is the
// begin-of-sentence marker and never appears here.
using TargetSeq = std::vector<int>;

// Joiner output: per-cell normalized log-probability distributions,
// shape (T, U+1, V+1), entry 0 of each cell is the blank.
struct EmissionLattice {
  int T = 0;
  int U = 0;
  int V = 0;
  std::vector<double> logp;  // row-major (t, u, k)

  EmissionLattice() = default;
  EmissionLattice(int t, int u, int v)
      : T(t), U(u), V(v), logp(static_cast<size_t>(t) * (u + 1) * (v + 1)) {}

  double& At(int t, int u, int k) {
    return logp[(static_cast<size_t>(t) * (U + 1) + u) * (V + 1) + k];
  }
  double At(int t, int u, int k) const {
    return logp[(static_cast<size_t>(t) * (U + 1) + u) * (V + 1) + k];
  }
  size_t CellCount() const { return static_cast<size_t>(T) * (U + 1); }
};

// Forward/backward tables in log domain, shape (T, U+1) each.
// alpha(t,u): log-probability of emitting y_{1..u} by step t.
// beta(t,u): log-probability of completing y_{u+1..U} plus the final blank.
struct LatticeTables {
  int T = 0;
  int U = 0;
  std::vector<double> log_alpha;
  std::vector<double> log_beta;
  double log_prob_total = 0.0;  // ln Pr(y|x) = alpha(T-1,U) + logp(T-1,U,blank)

  double Alpha(int t, int u) const { return log_alpha[t * (U + 1) + u]; }
  double Beta(int t, int u) const { return log_beta[t * (U + 1) + u]; }
};

// Normalized transition occupancies. w_nonblank (T, U) weights the emit
// transition (t,u)->(t,u+1); w_blank (T, U+1) weights the blank transition
// (t,u)->(t+1,u), including the terminal blank at (T-1, U). Each map sums to
// one; norm_* carry the pre-normalization group sums.
struct OccupancyMaps {
  int T = 0;
  int U = 0;
  std::vector<double> w_nonblank;
  std::vector<double> w_blank;
  double norm_nonblank = 0.0;
  double norm_blank = 0.0;

  double Nonblank(int t, int u) const { return w_nonblank[t * U + u]; }
  double Blank(int t, int u) const { return w_blank[t * (U + 1) + u]; }
};

// Monotone per-step band restricting lattice work to `width` target
// positions per time step: cells (t, u) with lower[t] <= u < lower[t]+width.
// lower is non-decreasing; a valid band always covers (0,0) and (T-1,U).
struct PruneBand {
  int width = 0;
  std::vector<int> lower;  // size T

  bool Contains(int t, int u) const {
    return u >= lower[t] && u < lower[t] + width;
  }
};

// Band covering the whole lattice.
PruneBand FullBand(int T, int U);

// Throws std::invalid_argument on inconsistent shapes or token range.
void CheckLatticeTarget(const EmissionLattice& lattice, const TargetSeq& target);

// Max over cells of |logsumexp(cell) - 0|; 0 for a well-formed lattice.
double MaxCellNormError(const EmissionLattice& lattice);

// Forward recursion: alpha(t,u) = alpha(t-1,u)*blank(t-1,u)
//                               + alpha(t,u-1)*y(t,u-1), alpha(0,0) = 1.
// Out-of-band (or unreachable) cells hold kLogZero. `band` may be null.
std::vector<double> ForwardPass(const EmissionLattice& lattice,
                                const TargetSeq& target,
                                const PruneBand* band = nullptr);

// Backward recursion: beta(t,u) = beta(t+1,u)*blank(t,u)
//                               + beta(t,u+1)*y(t,u), beta(T-1,U) = blank(T-1,U).
std::vector<double> BackwardPass(const EmissionLattice& lattice,
                                 const TargetSeq& target,
                                 const PruneBand* band = nullptr);

// Runs both passes; log_prob_total = alpha(T-1,U) + logp(T-1,U,blank).
LatticeTables ComputeTables(const EmissionLattice& lattice,
                            const TargetSeq& target,
                            const PruneBand* band = nullptr);

// -ln Pr(y|x); +inf when no alignment has nonzero probability.
double TransducerLoss(const EmissionLattice& lattice, const TargetSeq& target,
                      const PruneBand* band = nullptr);

// d(-ln Pr)/d logp, shape (T, U+1, V+1), treating each cell's log-probs as
// free variables. Entry (t,u,k) is the negative unnormalized occupancy of
// that transition; zero for k not in {blank, y_{u+1}}.
// Throws std::domain_error when the loss is infinite.
std::vector<double> LossGrad(const EmissionLattice& lattice,
                             const TargetSeq& target,
                             const LatticeTables& tables);
std::vector<double> LossGrad(const EmissionLattice& lattice,
                             const TargetSeq& target);

// Transition occupancies from precomputed tables, normalized per group.
// The per-cell normalizer is Z = Pr(y|x); the constant cancels in the
// group renormalization. Throws std::domain_error when Pr(y|x) = 0.
OccupancyMaps Occupancies(const EmissionLattice& lattice,
                          const TargetSeq& target,
                          const LatticeTables& tables);

// Max over antidiagonals t+u = n of
// |logsumexp_{cells} (alpha+beta) - log_prob_total|, restricted to cells
// with finite mass. Every alignment crosses each antidiagonal exactly once,
// so each per-diagonal sum recovers the total sequence probability.
double AntidiagonalCheck(const LatticeTables& tables);

// Max-product alignment from (0,0) to (T-1,U) as the visited cell sequence.
// Score ties prefer taking the blank (horizontal) transition earlier.
// Out-of-band cells are excluded when `band` is given.
std::vector<std::pair<int, int>> ViterbiAlignment(
    const EmissionLattice& lattice, const TargetSeq& target,
    const PruneBand* band = nullptr);

}  // namespace tcr

#endif  // TCR_LATTICE_H_
