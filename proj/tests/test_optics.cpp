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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qforge/fock.hpp"
#include "qforge/optics.hpp"
#include "qforge/rng.hpp"

using namespace qforge;
using namespace qforge::fock;
using namespace qforge::optics;

namespace {

// Oracle: build U|n_a, n_b> by transporting each creation operator through
// the splitter,
//   adag_a -> t adag_a - conj(r) adag_b,  adag_b -> r adag_a + conj(t) adag_b,
// using only fock ladder operations. Independent of the matrix-element path
// in apply_beamsplitter.
StateVector splitter_oracle(const StateVector& state, const BeamSplitter& bs) {
  StateVector out(state.modes(), state.cutoff());
  for (const auto& [occ, amp] : state.terms()) {
    auto base = occ.with(bs.mode_a, 0).with(bs.mode_b, 0);
    StateVector term = StateVector::basis(base, state.cutoff());
    term = term.scaled(amp / (sqrt_factorial(occ[bs.mode_a]) *
                              sqrt_factorial(occ[bs.mode_b])));
    for (int i = 0; i < occ[bs.mode_a]; ++i) {
      auto a_part = apply_creation(term, bs.mode_a).scaled(bs.t);
      auto b_part = apply_creation(term, bs.mode_b).scaled(-std::conj(bs.r));
      StateVector next(state.modes(), state.cutoff());
      for (const auto& [o, v] : a_part.terms()) next.add_term(o, v);
      for (const auto& [o, v] : b_part.terms()) next.add_term(o, v);
      term = next;
    }
    for (int j = 0; j < occ[bs.mode_b]; ++j) {
      auto a_part = apply_creation(term, bs.mode_a).scaled(bs.r);
      auto b_part = apply_creation(term, bs.mode_b).scaled(std::conj(bs.t));
      StateVector next(state.modes(), state.cutoff());
      for (const auto& [o, v] : a_part.terms()) next.add_term(o, v);
      for (const auto& [o, v] : b_part.terms()) next.add_term(o, v);
      term = next;
    }
    for (const auto& [o, v] : term.terms()) out.add_term(o, v);
  }
  return out;
}

StateVector random_state(SplitMix64& rng, int modes, int cutoff, int n_terms,
                         int max_total) {
  StateVector s(modes, cutoff);
  for (int t = 0; t < n_terms; ++t) {
    std::vector<int> occ(static_cast<size_t>(modes), 0);
    int budget = max_total;
    for (int m = 0; m < modes; ++m) {
      const int n = static_cast<int>(rng.next_u64() % (budget + 1));
      occ[static_cast<size_t>(m)] = n;
      budget -= n;
    }
    s.add_term(Occupation(occ), rng.next_complex_gaussian());
  }
  if (s.norm() == 0.0) s.add_term(Occupation::zeros(modes), cplx(1.0, 0.0));
  return s.normalized();
}

BeamSplitter random_splitter(SplitMix64& rng, int a, int b) {
  const double angle = rng.next_double() * 1.5707963267948966;
  const double phase_t = rng.next_double() * 6.283185307179586;
  const double phase_r = rng.next_double() * 6.283185307179586;
  return BeamSplitter(std::polar(std::cos(angle), phase_t),
                      std::polar(std::sin(angle), phase_r), a, b);
}

double state_distance(const StateVector& a, const StateVector& b) {
  double max_diff = 0.0;
  for (const auto& [occ, amp] : a.terms())
    max_diff = std::max(max_diff, std::abs(amp - b.amplitude(occ)));
  for (const auto& [occ, amp] : b.terms())
    max_diff = std::max(max_diff, std::abs(amp - a.amplitude(occ)));
  return max_diff;
}

}  // namespace

TEST_CASE("vacuum is invariant under any beam splitter") {
  SplitMix64 rng(3);
  auto vac = StateVector::vacuum(2, 4);
  for (int trial = 0; trial < 5; ++trial) {
    auto out = apply_beamsplitter(vac, random_splitter(rng, 0, 1));
    CHECK(std::abs(out.amplitude(Occupation{0, 0}) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(out.term_count() == 1);
  }
}

TEST_CASE("identity splitter (t=1, r=0) leaves states unchanged") {
  SplitMix64 rng(5);
  auto s = random_state(rng, 2, 6, 5, 5);
  auto out = apply_beamsplitter(s, BeamSplitter(cplx(1.0, 0.0), cplx(0.0, 0.0), 0, 1));
  CHECK(state_distance(s, out) < 1e-14);
}

TEST_CASE("50:50 splitter on |1,1> gives (|20> - |02>)/sqrt2") {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto s = StateVector::basis(Occupation{1, 1}, 4);
  BeamSplitter bs(cplx(inv_sqrt2, 0.0), cplx(inv_sqrt2, 0.0), 0, 1);
  auto out = apply_beamsplitter(s, bs);
  CHECK(std::abs(out.amplitude(Occupation{2, 0}) - cplx(inv_sqrt2, 0.0)) < 1e-14);
  CHECK(std::abs(out.amplitude(Occupation{0, 2}) + cplx(inv_sqrt2, 0.0)) < 1e-14);
  CHECK(std::abs(out.amplitude(Occupation{1, 1})) < 1e-14);
  // Cross-check against the operator-transport oracle.
  CHECK(state_distance(out, splitter_oracle(s, bs)) < 1e-14);
}

TEST_CASE("beam splitter agrees with operator-transport oracle on random states") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    auto s = random_state(rng, 3, 7, 5, 6);
    auto bs = random_splitter(rng, trial % 2 == 0 ? 0 : 1, 2);
    CHECK(state_distance(apply_beamsplitter(s, bs), splitter_oracle(s, bs)) <
          1e-12);
  }
}

TEST_CASE("beam splitter error paths") {
  auto s = StateVector::vacuum(2, 2);
  CHECK_THROWS_AS(BeamSplitter(cplx(1.0, 0.0), cplx(0.0, 0.0), 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(BeamSplitter(cplx(0.9, 0.0), cplx(0.1, 0.0), 0, 1),
                  std::invalid_argument);
  BeamSplitter ok(cplx(1.0, 0.0), cplx(0.0, 0.0), 0, 5);
  CHECK_THROWS_AS(apply_beamsplitter(s, ok), std::out_of_range);
}

TEST_CASE("photon number conservation and unitarity on random circuits") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    auto s = random_state(rng, 3, 8, 6, 6);
    Circuit circuit;
    circuit.push(random_splitter(rng, 0, 1));
    circuit.push(PhaseShift{1, rng.next_double() * 6.28});
    circuit.push(random_splitter(rng, 1, 2));
    circuit.push(random_splitter(rng, 0, 2));
    auto out = apply_circuit(s, circuit);
    CHECK_FALSE(out.truncated());
    CHECK(out.norm() == doctest::Approx(s.norm()).epsilon(1e-10));
    auto dist_in = s.total_photon_distribution();
    auto dist_out = out.total_photon_distribution();
    for (size_t n = 0; n < dist_in.size(); ++n)
      CHECK(dist_out[n] == doctest::Approx(dist_in[n]).epsilon(1e-12));
  }
}

TEST_CASE("circuit followed by its inverse is the identity") {
  SplitMix64 rng(31);
  // Low occupation keeps displacement leakage below the tail tolerance, so
  // every element stays unitary on the truncated space.
  auto s = random_state(rng, 3, 8, 5, 3);
  Circuit circuit;
  circuit.push(random_splitter(rng, 0, 1));
  circuit.push(PhaseShift{2, 1.1});
  circuit.push(random_splitter(rng, 1, 2));
  circuit.push(Displacement{0, cplx(0.02, -0.008)});
  auto forward = apply_circuit(s, circuit);
  CHECK_FALSE(forward.truncated());
  auto roundtrip = apply_circuit(forward, circuit.inverted());
  CHECK(state_distance(s, roundtrip) < 1e-10);
}

TEST_CASE("two-element circuit equals sequential application bitwise") {
  SplitMix64 rng(37);
  auto s = random_state(rng, 2, 6, 4, 5);
  auto bs1 = random_splitter(rng, 0, 1);
  auto bs2 = random_splitter(rng, 0, 1);
  Circuit circuit;
  circuit.push(bs1);
  circuit.push(bs2);
  auto composed = apply_circuit(s, circuit);
  auto sequential = apply_beamsplitter(apply_beamsplitter(s, bs1), bs2);
  REQUIRE(composed.term_count() == sequential.term_count());
  for (const auto& [occ, amp] : composed.terms()) {
    const cplx other = sequential.amplitude(occ);
    CHECK(amp.real() == other.real());
    CHECK(amp.imag() == other.imag());
  }
}

TEST_CASE("empty circuit is the identity") {
  SplitMix64 rng(41);
  auto s = random_state(rng, 2, 4, 3, 3);
  CHECK(state_distance(s, apply_circuit(s, Circuit{})) == 0.0);
}

TEST_CASE("phase shift multiplies by exp(i n theta)") {
  StateVector s(1, 3);
  s.add_term(Occupation{0}, cplx(0.5, 0.0));
  s.add_term(Occupation{2}, cplx(0.5, 0.0));
  auto out = apply_phaseshift(s, PhaseShift{0, 0.7});
  CHECK(std::abs(out.amplitude(Occupation{0}) - cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(out.amplitude(Occupation{2}) -
                 cplx(0.5, 0.0) * std::polar(1.0, 1.4)) < 1e-15);
}

TEST_CASE("displacement basics") {
  SUBCASE("epsilon = 0 is the identity") {
    SplitMix64 rng(43);
    auto s = random_state(rng, 2, 5, 4, 4);
    auto out = apply_displacement(s, Displacement{0, cplx(0.0, 0.0)});
    CHECK(state_distance(s, out) < 1e-13);
    CHECK_FALSE(out.truncated());
  }
  SUBCASE("vacuum displaces to coherent-state amplitudes") {
    const cplx eps(0.1, 0.0);
    auto out = apply_displacement(StateVector::vacuum(1, 8),
                                  Displacement{0, eps});
    const double gauss = std::exp(-0.5 * std::norm(eps));
    for (int n = 0; n <= 8; ++n) {
      const cplx expected = gauss * std::pow(eps, n) / sqrt_factorial(n);
      CHECK(std::abs(out.amplitude(Occupation{n}) - expected) < 1e-10);
    }
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("mean photon number after displacing vacuum is |eps|^2") {
    const cplx eps(0.07, 0.0714);
    auto out = apply_displacement(StateVector::vacuum(1, 8),
                                  Displacement{0, eps});
    double mean = 0.0;
    for (const auto& [occ, amp] : out.terms()) mean += occ.total() * std::norm(amp);
    CHECK(std::abs(mean - std::norm(eps)) < 1e-8);
  }
  SUBCASE("tight cutoff raises the truncation flag") {
    auto s = StateVector::basis(Occupation{2}, 2);
    auto out = apply_displacement(s, Displacement{0, cplx(0.3, 0.0)});
    CHECK(out.truncated());
  }
}

TEST_CASE("equal splitter spreads a single photon uniformly") {
  SUBCASE("n = 1 is the empty circuit") {
    CHECK(equal_splitter(1, 0, {}).empty());
  }
  SUBCASE("n = 2 is the single (1/sqrt2, -1/sqrt2) splitter") {
    auto circuit = equal_splitter(2, 0, {1});
    REQUIRE(circuit.size() == 1);
    const auto& bs = std::get<BeamSplitter>(circuit.elements[0]);
    CHECK(std::abs(bs.t - cplx(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
    CHECK(std::abs(bs.r + cplx(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  }
  SUBCASE("wrong ancilla count throws") {
    CHECK_THROWS_AS(equal_splitter(3, 0, {1}), std::invalid_argument);
  }
  for (int n = 2; n <= 5; ++n) {
    CAPTURE(n);
    std::vector<int> ancillas;
    for (int m = 1; m < n; ++m) ancillas.push_back(m);
    auto circuit = equal_splitter(n, 0, ancillas);
    auto photon = StateVector::basis(
        Occupation(std::vector<int>(static_cast<size_t>(n), 0)).with(0, 1), n);
    auto out = apply_circuit(photon, circuit);
    CHECK(out.term_count() == static_cast<size_t>(n));
    const double expected = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m) {
      auto occ = Occupation(std::vector<int>(static_cast<size_t>(n), 0)).with(m, 1);
      CHECK(std::norm(out.amplitude(occ)) ==
            doctest::Approx(1.0 / n).epsilon(1e-12));
      // This chain ordering leaves every output on the +1/sqrt(n) phase.
      CHECK(std::abs(out.amplitude(occ) - cplx(expected, 0.0)) < 1e-12);
    }
  }
}
