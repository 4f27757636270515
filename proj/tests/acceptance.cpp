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
//
// Acceptance suite: every release-gating check, one line of output each.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qforge/factor.hpp"
#include "qforge/fock.hpp"
#include "qforge/herald.hpp"
#include "qforge/optics.hpp"
#include "qforge/rng.hpp"
#include "qforge/sample.hpp"
#include "qforge/tomo.hpp"

using namespace qforge;
using factor::Factor;
using factor::FactorPlan;
using factor::TargetState;
using fock::cplx;
using fock::Occupation;
using fock::StateVector;

namespace {

struct Gate {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* pattern, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), pattern, value);
  return buffer;
}

TargetState random_target(SplitMix64& rng, int n, bool allow_leading_zero) {
  std::vector<cplx> amps(static_cast<size_t>(n) + 1);
  for (auto& c : amps) c = rng.next_complex_gaussian();
  if (allow_leading_zero && rng.next_double() < 0.25) {
    amps[0] = cplx(0.0, 0.0);
    if (n >= 2 && rng.next_double() < 0.5) amps[1] = cplx(0.0, 0.0);
  }
  return TargetState::from_amplitudes(std::move(amps));
}

FactorPlan balanced_qutrit_plan() {
  const double a = 1.0 / std::sqrt(3.0);
  return factor::design_plan(TargetState::from_amplitudes({a, a, a}));
}

double target_fidelity(const TargetState& a, const TargetState& b) {
  cplx overlap(0.0, 0.0);
  for (size_t k = 0; k < a.coeffs.size(); ++k)
    overlap += std::conj(a.coeffs[k]) * b.coeffs[k];
  return std::norm(overlap);
}

// Independent route for ||prod_k (t_k adag1 + r_k adag2)|00>||^2: fock ladder
// operators only, no polynomial expansion.
double product_norm_sq_ladder(const std::vector<Factor>& factors) {
  const int n = static_cast<int>(factors.size());
  StateVector state = StateVector::vacuum(2, n);
  for (const auto& f : factors) {
    auto left = fock::apply_creation(state, 0).scaled(f.t);
    auto right = fock::apply_creation(state, 1).scaled(f.r);
    StateVector next(2, n);
    for (const auto& [occ, amp] : left.terms()) next.add_term(occ, amp);
    for (const auto& [occ, amp] : right.terms()) next.add_term(occ, amp);
    state = next;
  }
  return state.norm_sq();
}

// ---------------------------------------------------------------------------

Gate criterion1_appendix_probability() {
  Gate gate;
  auto plan = balanced_qutrit_plan();
  for (double q : {0.05, 0.1, 0.2}) {
    const double expected = 0.375 * std::pow(q, 4) * std::pow(1.0 - q * q, 2);
    const double got = herald::heralded_state_analytic(plan, q).success_probability;
    gate.require(std::abs(got - expected) <= 1e-12 * expected,
                 "analytic probability off at q=" + fmt("%g", q));
  }
  sample::SampleConfig config;
  config.q = 0.1;
  config.shots = 1000000;
  config.seed = 1;
  auto report = sample_events(plan, config);
  gate.require(report.analytic_rate >= report.wilson_low &&
                   report.analytic_rate <= report.wilson_high,
               "analytic rate outside the Wilson interval");
  gate.note("rel err <= 1e-12 at q in {0.05,0.1,0.2}; MC " +
            std::to_string(report.successes) + "/1e6 heralds, interval [" +
            fmt("%.3e", report.wilson_low) + ", " + fmt("%.3e", report.wilson_high) +
            "] covers " + fmt("%.3e", report.analytic_rate));
  return gate;
}

Gate criterion2_analytic_vs_circuit() {
  Gate gate;
  SplitMix64 rng(20260810);
  double worst_fidelity_gap = 0.0;
  double worst_probability_gap = 0.0;
  int count = 0;
  for (int n = 1; n <= 4; ++n) {
    const int plans = n <= 2 ? 13 : 12;
    for (int trial = 0; trial < plans; ++trial, ++count) {
      auto plan = factor::design_plan(random_target(rng, n, false));
      auto analytic = herald::heralded_state_analytic(plan, 0.1);
      auto sim = herald::simulate_herald(herald::build_herald_circuit(
          plan, 0.1, herald::standard_pattern(n), n + 3));
      worst_fidelity_gap = std::max(
          worst_fidelity_gap, 1.0 - fock::fidelity(*sim.pure, *analytic.pure));
      worst_probability_gap = std::max(
          worst_probability_gap,
          std::abs(sim.success_probability - analytic.success_probability) /
              analytic.success_probability);
    }
  }
  gate.require(worst_fidelity_gap <= 1e-10, "fidelity gap above 1e-10");
  gate.require(worst_probability_gap <= 1e-10, "probability gap above 1e-10");
  gate.note(std::to_string(count) + " plans, worst fidelity gap " +
            fmt("%.2e", worst_fidelity_gap) + ", worst probability rel diff " +
            fmt("%.2e", worst_probability_gap));
  return gate;
}

Gate criterion3_roundtrip() {
  Gate gate;
  SplitMix64 rng(3);
  double worst = 0.0;
  int leading_zero_cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 8);
    auto target = random_target(rng, n, true);
    if (std::abs(target.coeffs[0]) == 0.0) ++leading_zero_cases;
    auto plan = factor::design_plan(target);
    worst = std::max(worst, 1.0 - target_fidelity(expand_plan(plan), target));
  }
  gate.require(worst <= 1e-9, "roundtrip fidelity below 1 - 1e-9");
  gate.note("200 targets (" + std::to_string(leading_zero_cases) +
            " with leading zeros), worst fidelity deficit " + fmt("%.2e", worst));
  return gate;
}

Gate criterion4_noon() {
  Gate gate;
  std::string scalings;
  for (int N : {2, 3, 4, 5}) {
    auto plan = factor::noon_plan(N);
    std::vector<cplx> amps(static_cast<size_t>(N) + 1, cplx(0.0, 0.0));
    amps.front() = amps.back() = cplx(1.0 / std::sqrt(2.0), 0.0);
    const double fidelity = target_fidelity(expand_plan(plan), TargetState{N, amps});
    gate.require(fidelity >= 1.0 - 1e-10,
                 "NOON-" + std::to_string(N) + " expansion off");
    auto report = herald::noon_success_probability(N, 0.1);
    gate.require(report.scaling_discrepancy,
                 "scaling discrepancy not flagged for N=" + std::to_string(N));
    scalings += " N=" + std::to_string(N) + ": P=" + fmt("%.3e", report.probability) +
                " (alt N^(-N/2) scaling " + fmt("%.3e", report.alt_scaling_value) + ")";
  }
  gate.note("general-amplitude n^(-n) probabilities vs the N^(-N/2) closed-form "
            "variant differ for every N >= 2 (flagged):" + scalings);
  return gate;
}

Gate criterion5_bias_factor() {
  Gate gate;
  const cplx t(0.8, 0.0), r(0.0, 0.6);
  const cplx t_perp = -std::conj(r), r_perp = std::conj(t);
  auto parallel_plan = FactorPlan{{Factor{t, r}, Factor{t, r}}, cplx(1.0, 0.0)};
  auto orthogonal_plan =
      FactorPlan{{Factor{t, r}, Factor{t_perp, r_perp}}, cplx(1.0, 0.0)};

  const double exact_ratio =
      herald::heralded_state_analytic(parallel_plan, 0.05).success_probability /
      herald::heralded_state_analytic(orthogonal_plan, 0.05).success_probability;
  gate.require(std::abs(exact_ratio - 2.0) <= 1e-12, "exact weight ratio not 2");

  sample::SampleConfig config;
  config.q = 0.05;
  config.shots = 1000000;
  config.seed = 2;
  config.condition_total = 2;
  const double mc_ratio =
      sample_events(parallel_plan, config).empirical_rate /
      sample_events(orthogonal_plan, config).empirical_rate;
  gate.require(mc_ratio >= 1.9 && mc_ratio <= 2.1,
               "MC ratio " + fmt("%.3f", mc_ratio) + " outside [1.9, 2.1]");

  double worst_weight_err = 0.0;
  for (int k = 0; k <= 3; ++k) {
    std::vector<Factor> factors;
    for (int i = 0; i < 3 - k; ++i) factors.push_back(Factor{t, r});
    for (int i = 0; i < k; ++i) factors.push_back(Factor{t_perp, r_perp});
    const double weight = product_norm_sq_ladder(factors);
    const double expected = fock::factorial(3 - k) * fock::factorial(k);
    worst_weight_err =
        std::max(worst_weight_err, std::abs(weight - expected) / expected);
  }
  gate.require(worst_weight_err <= 1e-10, "(n-k)!k! weights off");
  gate.note("exact ratio 2 (err " + fmt("%.1e", std::abs(exact_ratio - 2.0)) +
            "), MC ratio " + fmt("%.4f", mc_ratio) +
            ", n=3 repeated-factor weights within " + fmt("%.1e", worst_weight_err));
  return gate;
}

Gate criterion6_loss_code() {
  Gate gate;
  SplitMix64 rng(6);
  double worst_single = 0.0, worst_cross = 0.0, min_two_loss = 1.0,
         worst_plan_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    cplx alpha = rng.next_complex_gaussian();
    cplx beta = rng.next_complex_gaussian();
    const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    alpha /= norm;
    beta /= norm;
    if (std::abs(alpha) < 0.05 || std::abs(beta) < 0.05) {
      --trial;  // stay in the closed form's domain
      continue;
    }
    auto report = herald::code_loss_check(alpha, beta);
    worst_single = std::max(worst_single, report.single_loss_codeword_overlap);
    worst_cross = std::max(worst_cross, report.cross_error_space_overlap);
    min_two_loss = std::min(min_two_loss, report.two_loss_overlap);

    auto closed = expand_plan(factor::loss_code_plan(alpha, beta));
    auto generic = expand_plan(factor::design_plan(factor::loss_code_target(alpha, beta)));
    worst_plan_gap =
        std::max(worst_plan_gap, 1.0 - target_fidelity(closed, generic));
  }
  gate.require(worst_single <= 1e-12, "single-loss images not orthogonal");
  gate.require(worst_cross <= 1e-12, "error spaces not orthogonal");
  gate.require(min_two_loss > 0.1, "two-loss overlap not observed");
  gate.require(worst_plan_gap <= 1e-9, "closed form disagrees with pipeline");

  // q^8/256 prefactor at q = 0.1, against a ladder-operator norm oracle.
  const double q = 0.1;
  auto plan = factor::loss_code_plan(cplx(0.6, 0.0), cplx(0.8, 0.0));
  const double p = herald::heralded_state_analytic(plan, q).success_probability;
  const double prefactor = std::pow(q, 8) / 256.0 * std::pow(1.0 - q * q, 2);
  const double weight_expected = product_norm_sq_ladder(plan.factors);
  gate.require(std::abs(p / prefactor - weight_expected) <= 1e-9 * weight_expected,
               "q^8/256 prefactor structure violated");
  gate.note("20 random (alpha,beta): single-loss overlap <= " +
            fmt("%.1e", worst_single) + ", cross-space <= " + fmt("%.1e", worst_cross) +
            ", two-loss overlap >= " + fmt("%.2f", min_two_loss) +
            ", closed-vs-generic fidelity gap <= " + fmt("%.1e", worst_plan_gap) +
            "; P/(q^8/256 (1-q^2)^2) matches the ladder norm to " +
            fmt("%.1e", std::abs(p / prefactor - weight_expected) / weight_expected));
  return gate;
}

Gate criterion7_threshold_purity() {
  Gate gate;
  auto plan = balanced_qutrit_plan();
  std::string impurities;
  for (double q : {0.01, 0.05}) {
    auto outcome = herald::simulate_herald(herald::build_herald_circuit(
        plan, q, herald::standard_pattern(2, herald::DetectorKind::Threshold), 5));
    const double impurity = 1.0 - outcome.purity;
    gate.require(impurity <= 10.0 * q * q,
                 "impurity above 10 q^2 at q=" + fmt("%g", q));
    impurities += " q=" + fmt("%g", q) + ": 1-purity=" + fmt("%.2e", impurity) +
                  " (bound " + fmt("%.1e", 10.0 * q * q) + ")";
  }
  gate.note("threshold mixedness of order q^2:" + impurities);
  return gate;
}

Gate criterion8_multimode_obstruction() {
  Gate gate;
  // Appendix-style three-mode product state, via ladder operators.
  auto apply_form = [](const StateVector& s, std::vector<cplx> form) {
    StateVector out(s.modes(), s.cutoff());
    for (int m = 0; m < s.modes(); ++m) {
      if (form[static_cast<size_t>(m)] == cplx(0.0, 0.0)) continue;
      auto part = fock::apply_creation(s, m).scaled(form[static_cast<size_t>(m)]);
      for (const auto& [occ, amp] : part.terms()) out.add_term(occ, amp);
    }
    return out;
  };
  auto state = StateVector::vacuum(3, 3);
  state = apply_form(state, {cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(-1.0, 0.0)});
  state = apply_form(state, {cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)});
  state = apply_form(state, {cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)});
  state = state.scaled(cplx(1.0 / (2.0 * std::sqrt(3.0)), 0.0));

  factor::MultivariateTarget factorable;
  factorable.modes = 3;
  factorable.total_photons = 3;
  for (const auto& [occ, amp] : state.terms()) factorable.coeffs[occ] = amp;
  const double factorable_residual =
      factor::multivariate_factor_fit(factorable).residual;
  gate.require(factorable_residual <= 1e-8,
               "factorizable three-mode state not recovered");

  SplitMix64 rng(8);
  std::vector<double> residuals;
  for (int trial = 0; trial < 20; ++trial) {
    factor::MultivariateTarget target;
    target.modes = 3;
    target.total_photons = 2;
    double norm_sq = 0.0;
    std::vector<std::pair<Occupation, cplx>> entries;
    for (const auto& occ : fock::enumerate_basis(3, 2)) {
      if (occ.total() != 2) continue;
      const cplx c = rng.next_complex_gaussian();
      entries.emplace_back(occ, c);
      norm_sq += std::norm(c);
    }
    for (auto& [occ, c] : entries) target.coeffs[occ] = c / std::sqrt(norm_sq);
    residuals.push_back(factor::multivariate_factor_fit(target).residual);
  }
  std::sort(residuals.begin(), residuals.end());
  const double median = 0.5 * (residuals[9] + residuals[10]);
  gate.require(median > 1e-3, "median residual too small");
  gate.note("factorizable example residual " + fmt("%.2e", factorable_residual) +
            "; 20 generic n=2, m=3 targets: best-of-32-starts residual median " +
            fmt("%.3f", median) + " (heuristic fit: evidence of obstruction, not proof)");
  return gate;
}

Gate criterion9_tomography() {
  Gate gate;
  const double a = 1.0 / std::sqrt(3.0);
  const std::vector<cplx> qutrit{cplx(a, 0.0), cplx(a, 0.0), cplx(a, 0.0)};
  const int cutoff = 4;
  StateVector psi(2, cutoff);
  psi.add_term(Occupation{2, 0}, qutrit[0]);
  psi.add_term(Occupation{1, 1}, qutrit[1]);
  psi.add_term(Occupation{0, 2}, qutrit[2]);
  auto truth = tomo::apply_loss(fock::DensityMatrix::from_pure(psi), 0.7);

  const double analytic_population = truth.photon_number_distribution()[2];
  gate.require(std::abs(analytic_population - 0.49) <= 1e-12,
               "analytic two-photon population not eta^2");

  auto samples = tomo::sample_homodyne(truth, 100000, tomo::PhaseStrategy{}, 9);
  tomo::MleOptions options;
  options.max_iterations = 250;
  auto result = tomo::mle_reconstruct(samples, cutoff, options);
  const auto diag = tomo::qutrit_diagnostics(result.rho, qutrit);
  const double population = diag.photon_number_dist[2];
  gate.require(std::abs(population - 0.49) <= 0.03,
               "reconstructed population " + fmt("%.4f", population) +
                   " outside 0.49 +- 0.03");
  gate.require(diag.subspace_fidelity >= 0.97,
               "subspace fidelity " + fmt("%.4f", diag.subspace_fidelity) +
                   " below 0.97");
  gate.note("analytic population 0.49 (inside the reported 45-50% band); MLE on "
            "1e5 samples: population " + fmt("%.4f", population) +
            ", qutrit-subspace fidelity " + fmt("%.4f", diag.subspace_fidelity) +
            " after " + std::to_string(result.iterations) + " iterations");
  return gate;
}

Gate criterion10_property_suites() {
  Gate gate;
  SplitMix64 rng(10);

  // fock: adjointness and commutator identities.
  double worst_adjoint = 0.0, worst_commutator = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    StateVector phi(3, 9), psi(3, 9);
    for (int t = 0; t < 6; ++t) {
      std::vector<int> occ{static_cast<int>(rng.next_u64() % 3),
                           static_cast<int>(rng.next_u64() % 3),
                           static_cast<int>(rng.next_u64() % 3)};
      phi.add_term(Occupation(occ), rng.next_complex_gaussian());
      std::vector<int> occ2{static_cast<int>(rng.next_u64() % 3),
                            static_cast<int>(rng.next_u64() % 3),
                            static_cast<int>(rng.next_u64() % 3)};
      psi.add_term(Occupation(occ2), rng.next_complex_gaussian());
    }
    for (int mode = 0; mode < 3; ++mode) {
      worst_adjoint = std::max(
          worst_adjoint,
          std::abs(fock::inner_product(phi, fock::apply_creation(psi, mode)) -
                   fock::inner_product(fock::apply_annihilation(phi, mode), psi)));
      auto lhs = fock::apply_annihilation(fock::apply_creation(psi, mode), mode);
      auto rhs = fock::apply_creation(fock::apply_annihilation(psi, mode), mode);
      for (const auto& [occ, amp] : psi.terms())
        worst_commutator = std::max(
            worst_commutator,
            std::abs(lhs.amplitude(occ) - rhs.amplitude(occ) - amp));
    }
  }
  gate.require(worst_adjoint <= 1e-12, "adjointness violated");
  gate.require(worst_commutator <= 1e-12, "commutator identity violated");

  // optics: unitarity and photon-number conservation on random circuits.
  double worst_norm = 0.0, worst_distribution = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    StateVector s(3, 8);
    for (int t = 0; t < 5; ++t) {
      std::vector<int> occ{static_cast<int>(rng.next_u64() % 3),
                           static_cast<int>(rng.next_u64() % 3),
                           static_cast<int>(rng.next_u64() % 2)};
      s.add_term(Occupation(occ), rng.next_complex_gaussian());
    }
    s = s.normalized();
    optics::Circuit circuit;
    for (int e = 0; e < 4; ++e) {
      const double angle = rng.next_double() * 1.5707963;
      const int a = static_cast<int>(rng.next_u64() % 3);
      circuit.push(optics::BeamSplitter(
          std::polar(std::cos(angle), rng.next_double() * 6.28),
          std::polar(std::sin(angle), rng.next_double() * 6.28), a, (a + 1) % 3));
    }
    auto out = optics::apply_circuit(s, circuit);
    worst_norm = std::max(worst_norm, std::abs(out.norm() - 1.0));
    auto din = s.total_photon_distribution();
    auto dout = out.total_photon_distribution();
    for (size_t i = 0; i < din.size(); ++i)
      worst_distribution = std::max(worst_distribution, std::abs(din[i] - dout[i]));
  }
  gate.require(worst_norm <= 1e-10, "circuit norm drift");
  gate.require(worst_distribution <= 1e-12, "photon distribution not conserved");

  // tomo: MLE log-likelihood monotonicity.
  auto lossy = tomo::apply_loss(
      fock::DensityMatrix::from_pure(StateVector::basis(Occupation{1, 0}, 2)), 0.8);
  auto samples = tomo::sample_homodyne(lossy, 3000, tomo::PhaseStrategy{}, 11);
  tomo::MleOptions options;
  options.max_iterations = 80;
  auto mle = tomo::mle_reconstruct(samples, 2, options);
  bool monotone = true;
  for (size_t i = 1; i < mle.log_likelihood.size(); ++i)
    monotone = monotone &&
               mle.log_likelihood[i] >= mle.log_likelihood[i - 1] - 1e-9;
  gate.require(monotone, "MLE log-likelihood decreased");

  // sample: determinism per seed.
  sample::SampleConfig config;
  config.q = 0.2;
  config.shots = 50000;
  config.seed = 77;
  auto r1 = sample_events(balanced_qutrit_plan(), config);
  auto r2 = sample_events(balanced_qutrit_plan(), config);
  gate.require(r1.successes == r2.successes &&
                   r1.empirical_rate == r2.empirical_rate &&
                   r1.wilson_low == r2.wilson_low &&
                   r1.wilson_high == r2.wilson_high &&
                   r1.analytic_rate == r2.analytic_rate,
               "Monte Carlo not deterministic per seed");

  gate.note("adjointness <= " + fmt("%.1e", worst_adjoint) + ", commutator <= " +
            fmt("%.1e", worst_commutator) + ", unitarity <= " + fmt("%.1e", worst_norm) +
            ", photon conservation <= " + fmt("%.1e", worst_distribution) +
            ", MLE monotone over " + std::to_string(mle.log_likelihood.size()) +
            " iterations, MC deterministic");
  return gate;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Gate()> run;
  };
  const std::vector<Entry> criteria{
      {1, "appendix two-photon success probability", criterion1_appendix_probability},
      {2, "analytic vs circuit-simulation herald oracle", criterion2_analytic_vs_circuit},
      {3, "factorization roundtrip", criterion3_roundtrip},
      {4, "NOON pipeline and probability scaling report", criterion4_noon},
      {5, "heralding bias factor", criterion5_bias_factor},
      {6, "one-photon-loss code", criterion6_loss_code},
      {7, "threshold-detector purity", criterion7_threshold_purity},
      {8, "multimode factorization obstruction", criterion8_multimode_obstruction},
      {9, "loss + homodyne tomography analogue", criterion9_tomography},
      {10, "property suites", criterion10_property_suites},
  };

  int failures = 0;
  for (const auto& entry : criteria) {
    Gate gate;
    try {
      gate = entry.run();
    } catch (const std::exception& e) {
      gate.pass = false;
      gate.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d (%s): %s\n", gate.pass ? "PASS" : "FAIL",
                entry.id, entry.name, gate.detail.c_str());
    std::fflush(stdout);
    if (!gate.pass) ++failures;
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
