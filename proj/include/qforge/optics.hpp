// Copyright 2026 The qforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <variant>
#include <vector>

#include "qforge/fock.hpp"

namespace qforge::optics {

using fock::cplx;
using fock::StateVector;

// Two-mode beam splitter defined by its Heisenberg action on annihilation
// operators:
//   U^dag a_k U = t a_k + r a_l,   U^dag a_l U = -conj(r) a_k + conj(t) a_l.
// On kets this fixes the creation-operator transport
//   U adag_k U^dag = t adag_k - conj(r) adag_l,
//   U adag_l U^dag = r adag_k + conj(t) adag_l,
// which is the convention every operation here follows.
struct BeamSplitter {
  cplx t;
  cplx r;
  int mode_a;
  int mode_b;

  BeamSplitter(cplx t_in, cplx r_in, int a, int b);
  // |t|^2 + |r|^2 = 1 within this tolerance, checked at construction.
  static constexpr double kUnitarityTol = 1e-12;
};

// Degenerate one-mode splitter with t = exp(i theta): |n> -> exp(i n theta)|n>.
struct PhaseShift {
  int mode;
  double theta;
};

// Coherent displacement a -> a + epsilon, applied exactly on the truncated
// single-mode space as exp(eps adag - conj(eps) a).
struct Displacement {
  int mode;
  cplx epsilon;
};

using Element = std::variant<BeamSplitter, PhaseShift, Displacement>;

struct Circuit {
  std::vector<Element> elements;

  void push(Element e) { elements.push_back(std::move(e)); }
  void append(const Circuit& other);
  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }

  // Element-wise inverse in reverse order; undoes this circuit exactly.
  Circuit inverted() const;
  // Largest mode index referenced, or -1 for an empty circuit.
  int max_mode() const;
};

StateVector apply_beamsplitter(const StateVector& state, const BeamSplitter& bs);
StateVector apply_phaseshift(const StateVector& state, const PhaseShift& ps);
StateVector apply_displacement(const StateVector& state, const Displacement& d);
StateVector apply_element(const StateVector& state, const Element& e);
StateVector apply_circuit(const StateVector& state, const Circuit& circuit);

// Beam-splitter chain that spreads a photon in `source_mode` with equal
// weight 1/sqrt(n) over the n output modes [source_mode, ancillas...],
// using coefficients (sqrt((l-1)/l), -1/sqrt(l)) down the chain.
// Requires exactly n-1 ancilla modes.
Circuit equal_splitter(int n, int source_mode, const std::vector<int>& ancilla_modes);

}  // namespace qforge::optics
