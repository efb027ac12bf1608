// tcr/consistency.cc
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

#include "tcr/consistency.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tcr/logmath.h"

namespace tcr {

Variant ParseVariant(const std::string& name) {
  if (name == "baseline") return Variant::kBaseline;
  if (name == "tcr") return Variant::kTcr;
  if (name == "full_joint") return Variant::kFullJoint;
  if (name == "threshold_topk") return Variant::kThresholdTopk;
  if (name == "best_one_path") return Variant::kBestOnePath;
  if (name == "compressed_prob") return Variant::kCompressedProb;
  if (name == "encoder_mse") return Variant::kEncoderMse;
  throw std::invalid_argument("unknown variant: " + name);
}

std::string VariantName(Variant v) {
  switch (v) {
    case Variant::kBaseline: return "baseline";
    case Variant::kTcr: return "tcr";
    case Variant::kFullJoint: return "full_joint";
    case Variant::kThresholdTopk: return "threshold_topk";
    case Variant::kBestOnePath: return "best_one_path";
    case Variant::kCompressedProb: return "compressed_prob";
    case Variant::kEncoderMse: return "encoder_mse";
  }
  return "?";
}

KlMode ParseKlMode(const std::string& name) {
  if (name == "token_bernoulli") return KlMode::kTokenBernoulli;
  if (name == "full_vocab") return KlMode::kFullVocab;
  throw std::invalid_argument("unknown kl_mode: " + name);
}

std::string KlModeName(KlMode m) {
  return m == KlMode::kTokenBernoulli ? "token_bernoulli" : "full_vocab";
}

void TcrConfig::Validate() const {
  if (clamp <= 0.0) throw std::invalid_argument("clamp must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (topk_blank < 1 || topk_nonblank < 1) {
    throw std::invalid_argument("topk counts must be >= 1");
  }
}

namespace {

void CheckSameShape(const EmissionLattice& a, const EmissionLattice& b) {
  if (a.T != b.T || a.U != b.U || a.V != b.V) {
    throw std::invalid_argument("view lattices differ in shape");
  }
}

size_t CellBase(const EmissionLattice& lat, int t, int u) {
  return (static_cast<size_t>(t) * (lat.U + 1) + u) * (lat.V + 1);
}

// Full-vocabulary KL(p_i || p_j) at one cell. Gradients are accumulated
// scaled by `w`; they are meaningless if the returned value is infinite
// (the caller discards them via the clamp in that case).
double CellKlFull(const EmissionLattice& lat_i, const EmissionLattice& lat_j,
                  int t, int u, double w, std::vector<double>* grad_i,
                  std::vector<double>* grad_j) {
  double kl = 0.0;
  size_t base = CellBase(lat_i, t, u);
  for (int k = 0; k <= lat_i.V; ++k) {
    double a = lat_i.logp[base + k];
    if (IsLogZero(a)) continue;  // zero mass, zero contribution and gradient
    double b = lat_j.logp[base + k];
    double p = std::exp(a);
    kl += p * (a - b);
    if (grad_i) (*grad_i)[base + k] += w * p * (a - b + 1.0);
    if (grad_j) (*grad_j)[base + k] -= w * p;
  }
  return kl;
}

// Two-outcome KL between the named token's probability in the two views.
double CellKlBernoulli(const EmissionLattice& lat_i,
                       const EmissionLattice& lat_j, int t, int u, int k,
                       double w, std::vector<double>* grad_i,
                       std::vector<double>* grad_j) {
  size_t idx = CellBase(lat_i, t, u) + k;
  double la = lat_i.logp[idx], lb = lat_j.logp[idx];
  double p = std::exp(la), q = std::exp(lb);
  double kl = 0.0;
  if (p > 0.0) kl += p * (la - lb);
  if (p < 1.0) kl += (1.0 - p) * (Log1mExp(la) - Log1mExp(lb));
  if (grad_i || grad_j) {
    // Floor the complement logs away from 0 so gradients stay finite at
    // p or q == 1; the value above is reported unfloored.
    double fla = std::min(la, -1e-12), flb = std::min(lb, -1e-12);
    double comp = Log1mExp(fla) - Log1mExp(flb);
    if (grad_i) (*grad_i)[idx] += w * p * ((la - lb) - comp);
    if (grad_j) {
      (*grad_j)[idx] += w * (-p + std::exp(flb + Log1mExp(fla) - Log1mExp(flb)));
    }
  }
  return kl;
}

// 3-class KL: aligned next token (class empty at u = U), blank, remainder.
double CellKlCompressed(const EmissionLattice& lat_i,
                        const EmissionLattice& lat_j, const TargetSeq& target,
                        int t, int u, double w, std::vector<double>* grad_i,
                        std::vector<double>* grad_j) {
  const int V = lat_i.V;
  const int target_k = u < static_cast<int>(target.size()) ? target[u] : -1;
  size_t base = CellBase(lat_i, t, u);
  auto class_logp = [&](const EmissionLattice& lat, int cls) {
    // cls: 0 = blank, 1 = target, 2 = other
    if (cls == 0) return lat.logp[base + kBlank];
    if (cls == 1) return target_k > 0 ? lat.logp[base + target_k] : kLogZero;
    double lse = kLogZero;
    for (int k = 1; k <= V; ++k) {
      if (k == target_k) continue;
      lse = LogAdd(lse, lat.logp[base + k]);
    }
    return lse;
  };
  double kl = 0.0;
  double li[3], lj[3];
  for (int cls = 0; cls < 3; ++cls) {
    li[cls] = class_logp(lat_i, cls);
    lj[cls] = class_logp(lat_j, cls);
    if (!IsLogZero(li[cls])) kl += std::exp(li[cls]) * (li[cls] - lj[cls]);
  }
  if (grad_i || grad_j) {
    for (int k = 0; k <= V; ++k) {
      int cls = k == kBlank ? 0 : (k == target_k ? 1 : 2);
      double a = lat_i.logp[base + k], b = lat_j.logp[base + k];
      double ratio = li[cls] - lj[cls];
      if (grad_i && !IsLogZero(a)) {
        (*grad_i)[base + k] += w * std::exp(a) * (ratio + 1.0);
      }
      if (grad_j && !IsLogZero(b) && !IsLogZero(li[cls])) {
        (*grad_j)[base + k] -= w * std::exp(b + ratio);
      }
    }
  }
  return kl;
}

// Mean of per-cell full KL over an explicit cell list.
double MeanKlOverCells(const EmissionLattice& lat_i,
                       const EmissionLattice& lat_j,
                       const std::vector<std::pair<int, int>>& cells,
                       std::vector<double>* grad_i,
                       std::vector<double>* grad_j) {
  if (cells.empty()) return 0.0;
  double sum = 0.0;
  const double w = 1.0 / static_cast<double>(cells.size());
  for (auto [t, u] : cells) {
    sum += CellKlFull(lat_i, lat_j, t, u, w, grad_i, grad_j);
  }
  return sum / static_cast<double>(cells.size());
}

std::vector<std::pair<int, int>> RegionCells(const EmissionLattice& lat,
                                             const PruneBand* band) {
  std::vector<std::pair<int, int>> cells;
  for (int t = 0; t < lat.T; ++t) {
    for (int u = 0; u <= lat.U; ++u) {
      if (band == nullptr || band->Contains(t, u)) cells.emplace_back(t, u);
    }
  }
  return cells;
}

}  // namespace

ConsistencyResult TcrLoss(const EmissionLattice& lat_i,
                          const EmissionLattice& lat_j,
                          const OccupancyMaps& occ_i, const TargetSeq& target,
                          const TcrConfig& cfg, std::vector<double>* grad_i,
                          std::vector<double>* grad_j) {
  CheckSameShape(lat_i, lat_j);
  CheckLatticeTarget(lat_i, target);
  cfg.Validate();
  if (occ_i.T != lat_i.T || occ_i.U != lat_i.U) {
    throw std::invalid_argument("occupancy maps do not match the lattice");
  }
  const int T = lat_i.T, U = lat_i.U;
  const bool full = cfg.kl_mode == KlMode::kFullVocab;

  // Accumulate into temporaries so a clamped result contributes no gradient.
  std::vector<double> gi, gj;
  std::vector<double>* pgi = nullptr;
  std::vector<double>* pgj = nullptr;
  if (grad_i || grad_j) {
    gi.assign(lat_i.logp.size(), 0.0);
    gj.assign(lat_j.logp.size(), 0.0);
    pgi = &gi;
    pgj = &gj;
  }

  ConsistencyResult res;
  std::vector<bool> used(static_cast<size_t>(T) * (U + 1), false);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u < U; ++u) {
      double w = occ_i.Nonblank(t, u);
      if (w <= 0.0) continue;
      used[t * (U + 1) + u] = true;
      double scaled = cfg.beta_nonblank * w;
      double kl = full ? CellKlFull(lat_i, lat_j, t, u, scaled, pgi, pgj)
                       : CellKlBernoulli(lat_i, lat_j, t, u, target[u], scaled,
                                         pgi, pgj);
      res.nonblank_part += scaled * kl;
    }
    for (int u = 0; u <= U; ++u) {
      double w = occ_i.Blank(t, u);
      if (w <= 0.0) continue;
      used[t * (U + 1) + u] = true;
      double scaled = cfg.beta_blank * w;
      double kl = full ? CellKlFull(lat_i, lat_j, t, u, scaled, pgi, pgj)
                       : CellKlBernoulli(lat_i, lat_j, t, u, kBlank, scaled,
                                         pgi, pgj);
      res.blank_part += scaled * kl;
    }
  }
  for (bool b : used) res.cells_used += b ? 1 : 0;
  res.d_c_raw = res.nonblank_part + res.blank_part;
  res.d_c = std::min(res.d_c_raw, cfg.clamp);
  if (res.d_c_raw <= cfg.clamp && (grad_i || grad_j)) {
    if (grad_i) {
      for (size_t n = 0; n < gi.size(); ++n) (*grad_i)[n] += gi[n];
    }
    if (grad_j) {
      for (size_t n = 0; n < gj.size(); ++n) (*grad_j)[n] += gj[n];
    }
  }
  return res;
}

double SymmetricTcr(const EmissionLattice& lat_a, const EmissionLattice& lat_b,
                    const OccupancyMaps& occ_a, const OccupancyMaps& occ_b,
                    const TargetSeq& target, const TcrConfig& cfg,
                    std::vector<double>* grad_a, std::vector<double>* grad_b) {
  ConsistencyResult ab = TcrLoss(lat_a, lat_b, occ_a, target, cfg, grad_a, grad_b);
  ConsistencyResult ba = TcrLoss(lat_b, lat_a, occ_b, target, cfg, grad_b, grad_a);
  return ab.d_c + ba.d_c;
}

double FullJointLoss(const EmissionLattice& lat_i, const EmissionLattice& lat_j,
                     const PruneBand* band, std::vector<double>* grad_i,
                     std::vector<double>* grad_j) {
  CheckSameShape(lat_i, lat_j);
  return MeanKlOverCells(lat_i, lat_j, RegionCells(lat_i, band), grad_i, grad_j);
}

double ThresholdTopkLoss(const EmissionLattice& lat_i,
                         const EmissionLattice& lat_j, const TargetSeq& target,
                         int k_blank, int k_nonblank, const PruneBand* band,
                         std::vector<double>* grad_i,
                         std::vector<double>* grad_j) {
  CheckSameShape(lat_i, lat_j);
  CheckLatticeTarget(lat_i, target);
  if (k_blank < 1 || k_nonblank < 1) {
    throw std::invalid_argument("top-k counts must be >= 1");
  }
  if (k_blank > lat_i.U + 1 || k_nonblank > lat_i.U + 1) {
    throw std::invalid_argument("top-k counts must be <= U+1");
  }
  const int T = lat_i.T, U = lat_i.U;
  std::vector<std::pair<int, int>> cells;
  std::vector<std::pair<double, int>> ranked;  // (-logp, u): sort ascending
  std::vector<bool> pick(U + 1);
  for (int t = 0; t < T; ++t) {
    std::fill(pick.begin(), pick.end(), false);
    // Highest aligned-token emission probabilities y(t,u), u < U.
    ranked.clear();
    for (int u = 0; u < U; ++u) {
      if (band && !band->Contains(t, u)) continue;
      ranked.emplace_back(-lat_i.At(t, u, target[u]), u);
    }
    std::sort(ranked.begin(), ranked.end());
    for (int n = 0; n < std::min<int>(k_nonblank, ranked.size()); ++n) {
      pick[ranked[n].second] = true;
    }
    // Highest blank probabilities over u <= U.
    ranked.clear();
    for (int u = 0; u <= U; ++u) {
      if (band && !band->Contains(t, u)) continue;
      ranked.emplace_back(-lat_i.At(t, u, kBlank), u);
    }
    std::sort(ranked.begin(), ranked.end());
    for (int n = 0; n < std::min<int>(k_blank, ranked.size()); ++n) {
      pick[ranked[n].second] = true;
    }
    for (int u = 0; u <= U; ++u) {
      if (pick[u]) cells.emplace_back(t, u);
    }
  }
  return MeanKlOverCells(lat_i, lat_j, cells, grad_i, grad_j);
}

double BestOnePathLoss(const EmissionLattice& lat_i,
                       const EmissionLattice& lat_j, const TargetSeq& target,
                       const PruneBand* band, std::vector<double>* grad_i,
                       std::vector<double>* grad_j) {
  CheckSameShape(lat_i, lat_j);
  auto path = ViterbiAlignment(lat_i, target, band);
  return MeanKlOverCells(lat_i, lat_j, path, grad_i, grad_j);
}

double CompressedProbLoss(const EmissionLattice& lat_i,
                          const EmissionLattice& lat_j,
                          const TargetSeq& target, const PruneBand* band,
                          std::vector<double>* grad_i,
                          std::vector<double>* grad_j) {
  CheckSameShape(lat_i, lat_j);
  CheckLatticeTarget(lat_i, target);
  auto cells = RegionCells(lat_i, band);
  if (cells.empty()) return 0.0;
  double sum = 0.0;
  const double w = 1.0 / static_cast<double>(cells.size());
  for (auto [t, u] : cells) {
    sum += CellKlCompressed(lat_i, lat_j, target, t, u, w, grad_i, grad_j);
  }
  return sum / static_cast<double>(cells.size());
}

}  // namespace tcr
