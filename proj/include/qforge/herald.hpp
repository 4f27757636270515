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

#include <optional>
#include <vector>

#include "qforge/factor.hpp"
#include "qforge/fock.hpp"
#include "qforge/optics.hpp"

namespace qforge::herald {

using fock::cplx;
using fock::DensityMatrix;
using fock::StateVector;

// One two-mode squeezed source: sqrt(1-q^2) sum_k q^k |k,k> up to the
// per-source pair cutoff.
struct SourceSpec {
  double q = 0.1;
  int cutoff = 4;

  void validate() const;
};

enum class DetectorKind { PNR, Threshold };

struct DetectorModel {
  DetectorKind kind = DetectorKind::PNR;
  // Required counts per heralding mode, in circuit mode order (idler block).
  // PNR entries are exact counts; threshold entries are click (>=1) flags.
  std::vector<int> pattern;

  int total() const;
};

struct HeraldOutcome {
  // Exactly one is set: `pure` for PNR conditioning, `mixed` for threshold.
  std::optional<StateVector> pure;
  std::optional<DensityMatrix> mixed;
  double success_probability = 0.0;
  double purity = 1.0;
  double fidelity_to_target = 0.0;
  bool truncation_flag = false;
};

// Normalized truncated two-mode squeezed vacuum (signal mode 0, idler mode 1)
// in the (1-q^2) convention; flags truncation when the dropped tail mass
// q^(2(cutoff+1)) exceeds 1e-12.
StateVector two_mode_squeezed(double q, int cutoff);

// Closed-form heralded output for the exact one-photon-per-pair pattern:
// state proportional to prod_k (t_k adag_1 + r_k adag_2)|00>, success
// probability (1-q^2)^2 q^(2n) n^(-n) * |prod|^2.
HeraldOutcome heralded_state_analytic(const factor::FactorPlan& plan, double q);

// Declarative heralding circuit. Mode layout:
//   0, 1            signal 1, signal 2
//   2, 3            idler 1, idler 2
//   4 .. n+2        idler-1 ancillas
//   n+3 .. 2n+1     idler-2 ancillas
// Mixing splitter k joins the k-th output of each equal-splitting network;
// detectors sit on all 2n idler-block modes.
struct CircuitSpec {
  factor::FactorPlan plan;
  SourceSpec source;
  DetectorModel detector;

  int n() const { return plan.n(); }
  int mode_count() const { return 2 + 2 * plan.n(); }
  std::vector<int> idler1_ancillas() const;
  std::vector<int> idler2_ancillas() const;
  // Mixing splitter k (1-based) acts on this mode pair.
  std::pair<int, int> mixing_modes(int k) const;
  // Equal splitters on both idler arms followed by the n mixing splitters.
  optics::Circuit idler_circuit() const;

  void validate() const;
};

// Detector pattern (1,0,1,0,...): one photon at the first output of every
// mixing splitter, vacuum elsewhere.
DetectorModel standard_pattern(int n, DetectorKind kind = DetectorKind::PNR);

CircuitSpec build_herald_circuit(const factor::FactorPlan& plan, double q,
                                 const DetectorModel& detector, int cutoff);

// Full truncated simulation: tensored sources and ancilla vacua, idler
// circuit, then detector conditioning. PNR projects on the exact pattern
// (pure signal state); threshold sums over every consistent idler outcome
// (mixed signal state).
HeraldOutcome simulate_herald(const CircuitSpec& spec);

// Diagnostics for the four-photon one-photon-loss code
// |0_L> = (|40>+|04>)/sqrt2, |1_L> = |22>.
struct LossCodeReport {
  // Largest |<a_m 0_L | a_m 1_L>| (normalized), m = 1, 2.
  double single_loss_codeword_overlap = 0.0;
  // Largest normalized cross inner product between the mode-1 and mode-2
  // single-loss error spaces {|30>,|12>} vs {|03>,|21>}.
  double cross_error_space_overlap = 0.0;
  // <a_m i_L | a_m j_L> = scale * delta_ij; the common scale is the mean
  // photon number per mode (2), and the deviation from that form.
  double common_scale_mode1 = 0.0;
  double common_scale_mode2 = 0.0;
  double common_scale_deviation = 0.0;
  // Largest normalized overlap between distinct two-photon-loss error
  // spaces; nonzero, which is what limits the code to one loss.
  double two_loss_overlap = 0.0;
  // Overlap of the damaged logical state with the ideal correction for
  // random (alpha, beta): fidelity of a_m(alpha|0_L>+beta|1_L>) with
  // alpha a_m|0_L> + beta a_m|1_L> renormalized (1 when information is intact).
  double logical_information_fidelity = 0.0;
};

LossCodeReport code_loss_check(cplx alpha, cplx beta);

// NOON-state success probability from the general heralded amplitude
// (n^(-n) scaling), reported next to the alternative N^(-N/2) scaling some
// closed-form treatments quote; the two disagree for every N >= 2 and the
// discrepancy is surfaced rather than resolved.
struct NoonProbabilityReport {
  int N = 0;
  double q = 0.0;
  double probability = 0.0;            // (1-q^2)^2 q^(2N) (2 N!/2^N) N^(-N)
  double alt_scaling_value = 0.0;      // (1-q^2)^2 q^(2N) (2 N!/2^N) N^(-N/2)
  bool scaling_discrepancy = false;    // true whenever the two differ
};

NoonProbabilityReport noon_success_probability(int N, double q);

}  // namespace qforge::herald
