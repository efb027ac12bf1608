// tcr/pruning.h
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
// Monotone-band pruning. The band keeps `u_r` target positions per input
// step; lattice work outside the band is skipped (cells held at log-zero).

#ifndef TCR_PRUNING_H_
#define TCR_PRUNING_H_

#include "tcr/lattice.h"

namespace tcr {

// Chooses the non-decreasing band of width u_r maximizing covered posterior
// mass (per-cell alpha*beta), by dynamic programming over band starts.
// Endpoints (0,0) and (T-1,U) are always covered. u_r > U+1 saturates to the
// full lattice.
PruneBand SelectBand(const LatticeTables& tables, int u_r);

// Transducer loss restricted to the band: alignments leaving the band are
// dropped, so the result is >= the full-lattice loss. A full-width band
// reproduces the unrestricted loss exactly.
double BandedLoss(const EmissionLattice& lattice, const TargetSeq& target,
                  const PruneBand& band);

// Forward-backward tables restricted to the band.
LatticeTables ComputeTablesBanded(const EmissionLattice& lattice,
                                  const TargetSeq& target,
                                  const PruneBand& band);

}  // namespace tcr

#endif  // TCR_PRUNING_H_
