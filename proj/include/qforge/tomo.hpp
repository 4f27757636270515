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

#include <cstdint>
#include <optional>
#include <vector>

#include "qforge/fock.hpp"

namespace qforge::tomo {

using fock::cplx;
using fock::DensityMatrix;
using fock::StateVector;

// Quadrature convention (used everywhere, including data files):
//   x = (a + adag)/sqrt(2), hbar = 1, vacuum variance 1/2.

// Pure-loss (amplitude damping) channel of transmissivity eta per mode,
// the beam-splitter-with-vacuum dilation in Kraus form.
struct LossChannel {
  double eta = 1.0;

  void validate() const;
};

DensityMatrix apply_loss(const DensityMatrix& rho, double eta);

struct QuadratureSample {
  double theta1 = 0.0;  // local-oscillator phases, [0, 2 pi)
  double theta2 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

struct PhaseStrategy {
  enum class Kind { UniformRandom, FixedGrid };
  Kind kind = Kind::UniformRandom;
  // FixedGrid: phases cycle over grid_size^2 combinations of j pi/grid_size.
  int grid_size = 12;
};

// Draws two-mode quadrature samples from the exact distribution
// <x1 theta1, x2 theta2| rho |...>; deterministic per seed.
std::vector<QuadratureSample> sample_homodyne(const DensityMatrix& rho,
                                              long long shots,
                                              const PhaseStrategy& strategy,
                                              std::uint64_t seed);

class EmptySamplesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TomoResult {
  DensityMatrix rho;
  int iterations = 0;
  std::vector<double> log_likelihood;  // one entry per iteration
  std::vector<double> photon_number_dist;
  std::optional<double> subspace_fidelity;  // filled by qutrit diagnostics
};

struct MleOptions {
  int max_iterations = 300;
  double tolerance = 1e-9;   // relative log-likelihood gain stop
  double bin_width = 0.05;   // quadrature binning of the POVM
};

// Iterative expectation-maximization style fixed point (R rho R, normalized
// each step) over bin-integrated projector POVMs. The log-likelihood is
// non-decreasing: a diluted step replaces any vanilla step that fails to
// improve it.
TomoResult mle_reconstruct(const std::vector<QuadratureSample>& samples,
                           int cutoff, const MleOptions& options = {});

struct QutritReport {
  // Renormalized 3x3 block on {|20>, |11>, |02>}, row-major.
  std::vector<cplx> block;
  double block_weight = 0.0;      // population of the two-photon subspace
  double subspace_fidelity = 0.0; // against the renormalized target block
  std::vector<double> photon_number_dist;
};

// Two-photon-subspace diagnostics of a two-mode state against a pure qutrit
// target (coefficients of |20>, |11>, |02>).
QutritReport qutrit_diagnostics(const DensityMatrix& rho,
                                const std::vector<cplx>& target_qutrit);

}  // namespace qforge::tomo
