// tcr/lattice_io.cc
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

#include "tcr/lattice_io.h"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tcr {

void WriteLattice(std::ostream& os, const EmissionLattice& lattice) {
  os << lattice.T << ' ' << lattice.U << ' ' << lattice.V << '\n';
  os << std::setprecision(17);
  for (int t = 0; t < lattice.T; ++t) {
    for (int u = 0; u <= lattice.U; ++u) {
      os << t << ' ' << u;
      for (int k = 0; k <= lattice.V; ++k) os << ' ' << lattice.At(t, u, k);
      os << '\n';
    }
  }
}

EmissionLattice ReadLattice(std::istream& is) {
  int T, U, V;
  if (!(is >> T >> U >> V)) {
    throw std::runtime_error("lattice text: bad header");
  }
  if (T < 1 || U < 0 || V < 1) {
    throw std::runtime_error("lattice text: invalid dims");
  }
  EmissionLattice lattice(T, U, V);
  for (int i = 0; i < T * (U + 1); ++i) {
    int t, u;
    if (!(is >> t >> u) || t < 0 || t >= T || u < 0 || u > U) {
      throw std::runtime_error("lattice text: bad cell index");
    }
    for (int k = 0; k <= V; ++k) {
      std::string tok;
      if (!(is >> tok)) throw std::runtime_error("lattice text: short row");
      lattice.At(t, u, k) = std::strtod(tok.c_str(), nullptr);
    }
  }
  return lattice;
}

void SaveLattice(const std::string& path, const EmissionLattice& lattice) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  WriteLattice(os, lattice);
  if (!os) throw std::runtime_error("write failed: " + path);
}

EmissionLattice LoadLattice(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for read: " + path);
  return ReadLattice(is);
}

}  // namespace tcr
