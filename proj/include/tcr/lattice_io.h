// tcr/lattice_io.h
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
// Text form of an emission lattice, used for golden files and dumps:
//
//   line 1:          T U V
//   following lines: t u logp_0 ... logp_V      (row-major, 0-based t/u)
//
// Values are printed with 17 significant digits so doubles round-trip
// exactly; -inf is legal and spelled "-inf".

#ifndef TCR_LATTICE_IO_H_
#define TCR_LATTICE_IO_H_

#include <iosfwd>
#include <string>

#include "tcr/lattice.h"

namespace tcr {

void WriteLattice(std::ostream& os, const EmissionLattice& lattice);
EmissionLattice ReadLattice(std::istream& is);

void SaveLattice(const std::string& path, const EmissionLattice& lattice);
EmissionLattice LoadLattice(const std::string& path);

}  // namespace tcr

#endif  // TCR_LATTICE_IO_H_
