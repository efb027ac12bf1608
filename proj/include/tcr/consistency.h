// tcr/consistency.h
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
// Consistency losses between two views of one example. The main loss
// weights per-cell KL divergences by the view's normalized transition
// occupancies, so only cells near plausible alignments contribute. The
// remaining variants (full joint, top-k selection, best path, compressed
// probability) are unweighted means of per-cell KLs over different cell
// sets and exist for comparison runs.
//
// Direction convention: a call with (lat_i, lat_j) scores KL(p_i || p_j)
// using view i's occupancies/selection; training symmetrizes by summing
// both directions. Occupancy weights are constants with respect to
// gradients; gradients flow only through the KL terms of both lattices.

#ifndef TCR_CONSISTENCY_H_
#define TCR_CONSISTENCY_H_

#include <string>
#include <vector>

#include "tcr/lattice.h"

namespace tcr {

enum class Variant {
  kBaseline,        // no consistency term
  kTcr,             // occupancy-weighted KL
  kFullJoint,       // unweighted mean KL over the region
  kThresholdTopk,   // top-k cells per step by emission probability
  kBestOnePath,     // mean KL along the Viterbi alignment
  kCompressedProb,  // 3-class (target/blank/other) KL
  kEncoderMse,      // encoder-output MSE; lives in the model module
};

// One of {token_bernoulli, full_vocab}: per-cell KL over the named token's
// two-outcome distribution, or over the whole vocabulary.
enum class KlMode { kTokenBernoulli, kFullVocab };

Variant ParseVariant(const std::string& name);
std::string VariantName(Variant v);
KlMode ParseKlMode(const std::string& name);
std::string KlModeName(KlMode m);

struct TcrConfig {
  double lambda = 0.1;
  double beta_nonblank = 1.0;
  double beta_blank = 1.0;
  double clamp = 5e-3;
  Variant variant = Variant::kTcr;
  KlMode kl_mode = KlMode::kTokenBernoulli;
  int topk_blank = 2;
  int topk_nonblank = 2;

  void Validate() const;  // throws std::invalid_argument
};

struct ConsistencyResult {
  double d_c = 0.0;           // min(d_c_raw, clamp)
  double d_c_raw = 0.0;
  double nonblank_part = 0.0;  // beta-weighted group contributions; they
  double blank_part = 0.0;     // sum to d_c_raw
  int cells_used = 0;          // cells with nonzero contribution weight
};

// Occupancy-weighted consistency loss for the direction i -> j:
//   beta_nonblank * sum_w_nonblank(t,u) KL + beta_blank * sum_w_blank(t,u) KL
// with view i's normalized occupancies as weights. The result is clamped at
// cfg.clamp. When grad_i/grad_j are given, d(d_c)/d logp is accumulated into
// them, with zero contribution when the raw value exceeded the clamp.
ConsistencyResult TcrLoss(const EmissionLattice& lat_i,
                          const EmissionLattice& lat_j,
                          const OccupancyMaps& occ_i, const TargetSeq& target,
                          const TcrConfig& cfg,
                          std::vector<double>* grad_i = nullptr,
                          std::vector<double>* grad_j = nullptr);

// d_c(i|j) + d_c(j|i), each direction weighted by its own view's
// occupancies and clamped individually.
double SymmetricTcr(const EmissionLattice& lat_a, const EmissionLattice& lat_b,
                    const OccupancyMaps& occ_a, const OccupancyMaps& occ_b,
                    const TargetSeq& target, const TcrConfig& cfg,
                    std::vector<double>* grad_a = nullptr,
                    std::vector<double>* grad_b = nullptr);

// Unweighted mean full-vocabulary KL(p_i || p_j) over the region (the band
// when given, the whole lattice otherwise).
double FullJointLoss(const EmissionLattice& lat_i, const EmissionLattice& lat_j,
                     const PruneBand* band = nullptr,
                     std::vector<double>* grad_i = nullptr,
                     std::vector<double>* grad_j = nullptr);

// Mean full-vocabulary KL over cells selected per step t on view i: the
// k_nonblank cells with the highest aligned-token emission probability and
// the k_blank cells with the highest blank probability (union).
double ThresholdTopkLoss(const EmissionLattice& lat_i,
                         const EmissionLattice& lat_j, const TargetSeq& target,
                         int k_blank, int k_nonblank,
                         const PruneBand* band = nullptr,
                         std::vector<double>* grad_i = nullptr,
                         std::vector<double>* grad_j = nullptr);

// Mean full-vocabulary KL over the cells of view i's Viterbi alignment.
double BestOnePathLoss(const EmissionLattice& lat_i,
                       const EmissionLattice& lat_j, const TargetSeq& target,
                       const PruneBand* band = nullptr,
                       std::vector<double>* grad_i = nullptr,
                       std::vector<double>* grad_j = nullptr);

// Mean 3-class KL over the region; classes are the aligned next token (none
// at u = U), the blank, and the remaining mass.
double CompressedProbLoss(const EmissionLattice& lat_i,
                          const EmissionLattice& lat_j,
                          const TargetSeq& target,
                          const PruneBand* band = nullptr,
                          std::vector<double>* grad_i = nullptr,
                          std::vector<double>* grad_j = nullptr);

}  // namespace tcr

#endif  // TCR_CONSISTENCY_H_
