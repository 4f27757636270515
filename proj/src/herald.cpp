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

#include "qforge/herald.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qforge::herald {

using fock::Occupation;

void SourceSpec::validate() const {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("squeezing parameter must be in (0, 1)");
  if (cutoff < 0) throw std::invalid_argument("source cutoff must be >= 0");
}

int DetectorModel::total() const {
  int sum = 0;
  for (int c : pattern) sum += c;
  return sum;
}

StateVector two_mode_squeezed(double q, int cutoff) {
  SourceSpec{q, cutoff}.validate();
  StateVector s(2, 2 * cutoff);
  const double scale = std::sqrt(1.0 - q * q);
  double amp = scale;
  for (int k = 0; k <= cutoff; ++k) {
    s.add_term(Occupation{k, k}, cplx(amp, 0.0));
    amp *= q;
  }
  if (std::pow(q, 2 * (cutoff + 1)) > 1e-12) s.mark_truncated();
  return s;
}

HeraldOutcome heralded_state_analytic(const factor::FactorPlan& plan, double q) {
  if (plan.n() < 1) throw std::invalid_argument("plan must have >= 1 factor");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("squeezing parameter must be in (0, 1)");
  plan.validate();
  const int n = plan.n();

  const auto amps = factor::expand_amplitudes(plan.factors);
  StateVector psi(2, n);
  double weight = 0.0;
  for (int k = 0; k <= n; ++k) {
    psi.add_term(Occupation{n - k, k}, amps[static_cast<size_t>(k)]);
    weight += std::norm(amps[static_cast<size_t>(k)]);
  }

  HeraldOutcome outcome;
  const double vacuum_factor = (1.0 - q * q) * (1.0 - q * q);
  outcome.success_probability =
      vacuum_factor * std::pow(q, 2 * n) * std::pow(static_cast<double>(n), -n) * weight;
  outcome.pure = psi.normalized().canonicalized();
  outcome.purity = 1.0;
  outcome.fidelity_to_target =
      fock::fidelity(*outcome.pure, factor::expand_plan(plan).to_state());
  outcome.truncation_flag = false;
  return outcome;
}

std::vector<int> CircuitSpec::idler1_ancillas() const {
  std::vector<int> modes;
  for (int l = 1; l < plan.n(); ++l) modes.push_back(3 + l);
  return modes;
}

std::vector<int> CircuitSpec::idler2_ancillas() const {
  std::vector<int> modes;
  for (int l = 1; l < plan.n(); ++l) modes.push_back(plan.n() + 2 + l);
  return modes;
}

std::pair<int, int> CircuitSpec::mixing_modes(int k) const {
  if (k == 1) return {2, 3};
  return {2 + k, plan.n() + 1 + k};
}

optics::Circuit CircuitSpec::idler_circuit() const {
  optics::Circuit circuit;
  circuit.append(optics::equal_splitter(plan.n(), 2, idler1_ancillas()));
  circuit.append(optics::equal_splitter(plan.n(), 3, idler2_ancillas()));
  for (int k = 1; k <= plan.n(); ++k) {
    const auto [a, b] = mixing_modes(k);
    const auto& f = plan.factors[static_cast<size_t>(k) - 1];
    circuit.push(optics::BeamSplitter(f.t, f.r, a, b));
  }
  return circuit;
}

void CircuitSpec::validate() const {
  plan.validate();
  source.validate();
  if (plan.n() < 1) throw std::invalid_argument("plan must have >= 1 factor");
  if (detector.pattern.size() != static_cast<size_t>(2 * plan.n()))
    throw std::invalid_argument("detector pattern must cover the idler block");
  for (int c : detector.pattern)
    if (c < 0) throw std::invalid_argument("negative detector count");
  if (source.cutoff < 1)
    throw std::invalid_argument("source cutoff too small for heralding");
}

DetectorModel standard_pattern(int n, DetectorKind kind) {
  if (n < 1) throw std::invalid_argument("pattern requires n >= 1");
  DetectorModel detector;
  detector.kind = kind;
  detector.pattern.assign(static_cast<size_t>(2 * n), 0);
  detector.pattern[0] = 1;  // idler 1
  for (int l = 1; l < n; ++l)
    detector.pattern[static_cast<size_t>(1 + l)] = 1;  // idler-1 ancillas
  return detector;
}

CircuitSpec build_herald_circuit(const factor::FactorPlan& plan, double q,
                                 const DetectorModel& detector, int cutoff) {
  CircuitSpec spec{plan, SourceSpec{q, cutoff}, detector};
  if (cutoff < plan.n())
    throw std::invalid_argument(
        "source cutoff below the target photon number cannot herald");
  spec.validate();
  return spec;
}

namespace {

// Signal occupations live on modes (0, 1); the idler block starts at mode 2.
Occupation signal_part(const Occupation& occ) {
  return Occupation{occ[0], occ[1]};
}

bool idler_matches_exact(const Occupation& occ, const std::vector<int>& pattern) {
  for (size_t i = 0; i < pattern.size(); ++i)
    if (occ[static_cast<int>(i) + 2] != pattern[i]) return false;
  return true;
}

bool idler_matches_threshold(const Occupation& occ, const std::vector<int>& pattern) {
  for (size_t i = 0; i < pattern.size(); ++i) {
    const int count = occ[static_cast<int>(i) + 2];
    if (pattern[i] >= 1 ? count < 1 : count != 0) return false;
  }
  return true;
}

}  // namespace

HeraldOutcome simulate_herald(const CircuitSpec& spec) {
  spec.validate();
  const int n = spec.n();
  const int c = spec.source.cutoff;
  const double q = spec.source.q;
  const int modes = spec.mode_count();

  // Joint input: two normalized squeezed sources and ancilla vacua.
  StateVector joint(modes, 4 * c);
  {
    std::vector<int> occ(static_cast<size_t>(modes), 0);
    const double vacuum_factor = 1.0 - q * q;
    for (int n1 = 0; n1 <= c; ++n1) {
      for (int n2 = 0; n2 <= c; ++n2) {
        occ[0] = n1;
        occ[2] = n1;
        occ[1] = n2;
        occ[3] = n2;
        joint.add_term(Occupation(occ),
                       cplx(vacuum_factor * std::pow(q, n1 + n2), 0.0));
      }
    }
  }

  joint = optics::apply_circuit(joint, spec.idler_circuit());

  HeraldOutcome outcome;
  const auto target = factor::expand_plan(spec.plan).to_state();
  const int signal_cutoff = 2 * c;

  if (spec.detector.kind == DetectorKind::PNR) {
    StateVector heralded(2, signal_cutoff);
    for (const auto& [occ, amp] : joint.terms()) {
      if (idler_matches_exact(occ, spec.detector.pattern))
        heralded.add_term(signal_part(occ), amp);
    }
    outcome.success_probability = heralded.norm_sq();
    if (outcome.success_probability > 0.0)
      outcome.pure = heralded.normalized().canonicalized();
    else
      outcome.pure = heralded;
    outcome.purity = 1.0;
    outcome.fidelity_to_target =
        outcome.success_probability > 0.0 ? fock::fidelity(*outcome.pure, target) : 0.0;
    // The exact pattern picks the total-photon sector equal to its count;
    // the truncated tail only matters when that sector is itself clipped.
    outcome.truncation_flag = spec.detector.total() > c;
  } else {
    std::unordered_map<Occupation, StateVector, fock::OccupationHash> groups;
    for (const auto& [occ, amp] : joint.terms()) {
      if (!idler_matches_threshold(occ, spec.detector.pattern)) continue;
      std::vector<int> idler(static_cast<size_t>(modes) - 2);
      for (int m = 2; m < modes; ++m) idler[static_cast<size_t>(m) - 2] = occ[m];
      auto [it, inserted] = groups.try_emplace(Occupation(idler),
                                               StateVector(2, signal_cutoff));
      it->second.add_term(signal_part(occ), amp);
    }
    DensityMatrix rho(2, signal_cutoff);
    double probability = 0.0;
    for (const auto& [idler, psi] : groups) {
      probability += psi.norm_sq();
      rho.add_outer(psi);
    }
    outcome.success_probability = probability;
    if (probability > 0.0) {
      rho = rho.normalized();
      outcome.purity = rho.purity();
      outcome.fidelity_to_target = rho.fidelity_pure(target);
    }
    outcome.mixed = rho;
    // Discarded source tail that could still satisfy the click pattern.
    const double tail = 2.0 * std::pow(q, 2 * (c + 1));
    outcome.truncation_flag =
        probability > 0.0 && tail > 1e-10 * probability;
  }
  return outcome;
}

LossCodeReport code_loss_check(cplx alpha, cplx beta) {
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (norm == 0.0) throw std::invalid_argument("zero logical amplitudes");
  alpha /= norm;
  beta /= norm;

  const int cutoff = 4;
  StateVector zero_l(2, cutoff);
  zero_l.add_term(Occupation{4, 0}, cplx(1.0 / std::sqrt(2.0), 0.0));
  zero_l.add_term(Occupation{0, 4}, cplx(1.0 / std::sqrt(2.0), 0.0));
  StateVector one_l = StateVector::basis(Occupation{2, 2}, cutoff);

  auto normalized_overlap = [](const StateVector& a, const StateVector& b) {
    return std::abs(fock::inner_product(a, b)) / (a.norm() * b.norm());
  };

  LossCodeReport report;

  // Single-loss images per mode.
  std::vector<std::vector<StateVector>> images;  // [mode][codeword]
  for (int mode = 0; mode < 2; ++mode)
    images.push_back({fock::apply_annihilation(zero_l, mode),
                      fock::apply_annihilation(one_l, mode)});

  report.single_loss_codeword_overlap =
      std::max(normalized_overlap(images[0][0], images[0][1]),
               normalized_overlap(images[1][0], images[1][1]));

  for (const auto& x : images[0])
    for (const auto& y : images[1])
      report.cross_error_space_overlap =
          std::max(report.cross_error_space_overlap, normalized_overlap(x, y));

  report.common_scale_mode1 =
      fock::inner_product(images[0][0], images[0][0]).real();
  report.common_scale_mode2 =
      fock::inner_product(images[1][0], images[1][0]).real();
  double deviation = 0.0;
  for (int mode = 0; mode < 2; ++mode) {
    const double scale = mode == 0 ? report.common_scale_mode1 : report.common_scale_mode2;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const cplx g = fock::inner_product(images[static_cast<size_t>(mode)][static_cast<size_t>(i)],
                                           images[static_cast<size_t>(mode)][static_cast<size_t>(j)]);
        const cplx expected = i == j ? cplx(scale, 0.0) : cplx(0.0, 0.0);
        deviation = std::max(deviation, std::abs(g - expected));
      }
  }
  report.common_scale_deviation = deviation;

  // Damaged logical state keeps (alpha, beta): compare a_m(alpha,beta
  // encoding) with the same superposition of damaged codewords.
  StateVector logical(2, cutoff);
  for (const auto& [occ, amp] : zero_l.terms()) logical.add_term(occ, alpha * amp);
  for (const auto& [occ, amp] : one_l.terms()) logical.add_term(occ, beta * amp);
  double info_fidelity = 1.0;
  for (int mode = 0; mode < 2; ++mode) {
    auto damaged = fock::apply_annihilation(logical, mode);
    StateVector expected(2, cutoff);
    for (const auto& [occ, amp] : images[static_cast<size_t>(mode)][0].terms())
      expected.add_term(occ, alpha * amp);
    for (const auto& [occ, amp] : images[static_cast<size_t>(mode)][1].terms())
      expected.add_term(occ, beta * amp);
    info_fidelity = std::min(info_fidelity, fock::fidelity(damaged, expected));
  }
  report.logical_information_fidelity = info_fidelity;

  // Two-photon losses: distinct loss operators produce overlapping spaces.
  std::vector<std::vector<StateVector>> two_loss;
  const std::vector<std::pair<int, int>> ops{{0, 0}, {0, 1}, {1, 1}};
  for (const auto& [m1, m2] : ops) {
    two_loss.push_back(
        {fock::apply_annihilation(fock::apply_annihilation(zero_l, m1), m2),
         fock::apply_annihilation(fock::apply_annihilation(one_l, m1), m2)});
  }
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j)
      for (const auto& x : two_loss[i])
        for (const auto& y : two_loss[j])
          if (x.norm() > 0.0 && y.norm() > 0.0)
            report.two_loss_overlap =
                std::max(report.two_loss_overlap, normalized_overlap(x, y));
  return report;
}

NoonProbabilityReport noon_success_probability(int N, double q) {
  if (N < 1) throw std::invalid_argument("NOON order must be >= 1");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("squeezing parameter must be in (0, 1)");
  NoonProbabilityReport report;
  report.N = N;
  report.q = q;
  const double vacuum_factor = (1.0 - q * q) * (1.0 - q * q);
  const double weight = 2.0 * fock::factorial(N) / std::pow(2.0, N);
  report.probability = vacuum_factor * std::pow(q, 2 * N) * weight *
                       std::pow(static_cast<double>(N), -N);
  report.alt_scaling_value = vacuum_factor * std::pow(q, 2 * N) * weight *
                             std::pow(static_cast<double>(N), -0.5 * N);
  report.scaling_discrepancy = N >= 2;
  return report;
}

}  // namespace qforge::herald
