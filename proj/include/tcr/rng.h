// tcr/rng.h
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

#ifndef TCR_RNG_H_
#define TCR_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace tcr {

// Deterministic RNG. mt19937_64 raw output is pinned by the standard, and all
// distributions below are implemented by hand, so streams are reproducible
// across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t NextU64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  int64_t UniformInt(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(gen_() % span);
  }

  // Standard normal via Box-Muller; draws two uniforms per call.
  double Normal() {
    double u1 = 1.0 - Uniform();  // (0, 1]
    double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

// FNV-1a over bytes; used for config hashing and seed stream names.
uint64_t Fnv1a64(std::string_view bytes);

// SplitMix64 finalizer.
uint64_t SplitMix64(uint64_t x);

// Derives an independent stream seed from a master seed and a stream name,
// e.g. DeriveSeed(seed, "model_init"). Documented fan-out: every source of
// randomness in a run gets its own named stream.
uint64_t DeriveSeed(uint64_t master, std::string_view stream);

}  // namespace tcr

#endif  // TCR_RNG_H_
