// tests/oracles.h
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
// Brute-force reference implementations used only by tests. Everything here
// enumerates alignments explicitly or applies finite differences; nothing
// shares code with the forward-backward implementation it checks.

#ifndef TCR_TESTS_ORACLES_H_
#define TCR_TESTS_ORACLES_H_

#include <functional>
#include <vector>

#include "tcr/lattice.h"
#include "tcr/rng.h"

namespace tcr::oracle {

// One alignment as its move string: 'B' consumes an input step (blank),
// 'E' emits the next target token. A complete alignment has T-1 B's and
// U E's, in any order, plus the implicit final blank at (T-1, U).
using Moves = std::vector<char>;

// All C(T-1+U, U) monotone alignments for the given dims.
std::vector<Moves> EnumerateAlignments(int T, int U);

// Probability (linear domain) of one alignment, including the final blank.
double AlignmentProb(const EmissionLattice& lattice, const TargetSeq& target,
                     const Moves& moves);

// Sum of all alignment probabilities = Pr(y|x).
double TotalProbBruteForce(const EmissionLattice& lattice,
                           const TargetSeq& target);

// As above but only counting alignments whose every visited cell lies in
// the band.
double TotalProbBruteForceBanded(const EmissionLattice& lattice,
                                 const TargetSeq& target,
                                 const PruneBand& band);

// Posterior transition counts: for each cell, the total probability of
// alignments taking the emit transition (resp. the blank transition) out of
// it, divided by Pr(y|x). These are the raw occupancies, counted per path.
struct PosteriorCounts {
  std::vector<double> emit;   // (T, U)
  std::vector<double> blank;  // (T, U+1), includes the final blank
};
PosteriorCounts CountTransitionPosteriors(const EmissionLattice& lattice,
                                          const TargetSeq& target);

// Brute-force alpha: sum over monotone prefixes reaching (t, u).
double AlphaBruteForce(const EmissionLattice& lattice, const TargetSeq& target,
                       int t, int u);

// Central finite difference of `loss` under perturbing logp[t,u,k] by +/-eps
// with the cell renormalized, i.e. the projected directional derivative.
double FiniteDiffCellRenorm(
    const EmissionLattice& lattice, int t, int u, int k, double eps,
    const std::function<double(const EmissionLattice&)>& loss);

// Projects a free-variable lattice gradient onto the cell-renormalized
// perturbation direction for entry (t,u,k): g_k - p_k * sum_m g_m.
double ProjectCellGrad(const EmissionLattice& lattice,
                       const std::vector<double>& grad, int t, int u, int k);

// Random normalized lattice via log-softmax of N(0, scale^2) logits.
EmissionLattice RandomLattice(int T, int U, int V, Rng& rng,
                              double scale = 2.0);

// Random target of length U over 1..V.
TargetSeq RandomTarget(int U, int V, Rng& rng);

// Plain two-outcome KL divergence KL((p,1-p) || (q,1-q)).
double BernoulliKl(double p, double q);

// Plain full-vocabulary KL divergence between two cells of two lattices.
double CellKl(const EmissionLattice& a, const EmissionLattice& b, int t, int u);

// Levenshtein distance by naive memoized recursion.
int EditDistanceRecursive(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace tcr::oracle

#endif  // TCR_TESTS_ORACLES_H_
