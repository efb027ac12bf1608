// tcr/views.cc
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

#include "tcr/views.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tcr {

void AugmentSpec::Validate() const {
  if (n_time_masks < 0 || n_freq_masks < 0) {
    throw std::invalid_argument("mask counts must be >= 0");
  }
  if (time_mask_frac < 0.0 || freq_mask_width < 0) {
    throw std::invalid_argument("mask widths must be >= 0");
  }
  // Masks may never cover the entire axis, even if they all land disjoint.
  if (n_time_masks > 0 && n_time_masks * time_mask_frac >= 1.0) {
    throw std::invalid_argument("time masks could cover the whole sequence");
  }
}

int DefaultFreqMaskWidth(int feat_dim) {
  return std::max(1, static_cast<int>(std::lround(27.0 / 80.0 * feat_dim)));
}

FeatureSeq SpecAugment(const FeatureSeq& x, const AugmentSpec& spec) {
  spec.Validate();
  if (x.T < 1 || x.F < 1) throw std::invalid_argument("empty feature seq");
  FeatureSeq out = x;
  double fill = 0.0;
  if (!spec.zero_fill) {
    for (double v : x.frames) fill += v;
    fill /= static_cast<double>(x.frames.size());
  }
  Rng rng(spec.seed);
  // Time masks: width drawn in [0, max_w], start in [0, T - w].
  int max_w = std::min(static_cast<int>(spec.time_mask_frac * x.T), x.T - 1);
  for (int i = 0; i < spec.n_time_masks; ++i) {
    int w = static_cast<int>(rng.UniformInt(0, std::max(0, max_w)));
    int t0 = static_cast<int>(rng.UniformInt(0, x.T - w));
    for (int t = t0; t < t0 + w; ++t) {
      for (int f = 0; f < x.F; ++f) out.At(t, f) = fill;
    }
  }
  // Frequency masks have exact width (clipped to keep one bin visible);
  // time masks above draw their width up to the cap.
  int w_f = std::min(spec.freq_mask_width, x.F - 1);
  for (int i = 0; i < spec.n_freq_masks; ++i) {
    int w = w_f;
    int f0 = static_cast<int>(rng.UniformInt(0, x.F - w));
    for (int t = 0; t < x.T; ++t) {
      for (int f = f0; f < f0 + w; ++f) out.At(t, f) = fill;
    }
  }
  return out;
}

ViewPair MakeViewPair(const FeatureSeq& x, const AugmentSpec& spec, Rng& rng) {
  ViewPair pair;
  AugmentSpec spec_a = spec;
  AugmentSpec spec_b = spec;
  spec_a.seed = rng.NextU64();
  spec_b.seed = rng.NextU64();
  pair.view_a = SpecAugment(x, spec_a);
  pair.view_b = SpecAugment(x, spec_b);
  pair.dropout_seed_a = rng.NextU64();
  do {
    pair.dropout_seed_b = rng.NextU64();
  } while (pair.dropout_seed_b == pair.dropout_seed_a);
  return pair;
}

}  // namespace tcr
