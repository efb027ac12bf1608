// tcr/views.h
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
// Stochastic views of a training example: time/frequency masking of the
// input features plus per-view dropout seeds. Two views of the same
// example differ only in masking and dropout.

#ifndef TCR_VIEWS_H_
#define TCR_VIEWS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tcr/rng.h"

namespace tcr {

struct FeatureSeq {
  int T = 0;  // frame count
  int F = 0;  // feature dim
  std::vector<double> frames;  // row-major (T, F)
  std::string id;

  FeatureSeq() = default;
  FeatureSeq(int t, int f) : T(t), F(f), frames(static_cast<size_t>(t) * f) {}
  double& At(int t, int f) { return frames[static_cast<size_t>(t) * F + f]; }
  double At(int t, int f) const { return frames[static_cast<size_t>(t) * F + f]; }
};

struct AugmentSpec {
  int n_time_masks = 2;
  double time_mask_frac = 0.1;  // max mask width as a fraction of T
  int n_freq_masks = 2;
  int freq_mask_width = 4;      // max mask width in feature bins
  uint64_t seed = 0;
  bool zero_fill = false;       // fill with 0 instead of the utterance mean

  void Validate() const;  // throws std::invalid_argument
};

struct ViewPair {
  FeatureSeq view_a;
  FeatureSeq view_b;
  uint64_t dropout_seed_a = 0;
  uint64_t dropout_seed_b = 0;
};

// Masks up to n_time_masks random time spans (each at most
// time_mask_frac * T frames) and n_freq_masks feature bands, filling with
// the per-utterance mean (or zero). Deterministic given spec.seed; widths
// exceeding the dimensions are clipped, never errors.
FeatureSeq SpecAugment(const FeatureSeq& x, const AugmentSpec& spec);

// Two independent masking draws plus two distinct dropout seeds, all
// derived from `rng`.
ViewPair MakeViewPair(const FeatureSeq& x, const AugmentSpec& spec, Rng& rng);

// Default frequency-mask width for a feature dim: scaled from the common
// 27-of-80 filterbank setting.
int DefaultFreqMaskWidth(int feat_dim);

}  // namespace tcr

#endif  // TCR_VIEWS_H_
