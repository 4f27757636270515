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

#include "qforge/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace qforge::optics {

using fock::Occupation;

BeamSplitter::BeamSplitter(cplx t_in, cplx r_in, int a, int b)
    : t(t_in), r(r_in), mode_a(a), mode_b(b) {
  if (a == b) throw std::invalid_argument("beam splitter modes must differ");
  if (a < 0 || b < 0) throw std::invalid_argument("negative mode index");
  const double deviation = std::abs(std::norm(t) + std::norm(r) - 1.0);
  if (deviation > kUnitarityTol)
    throw std::invalid_argument("beam splitter coefficients not normalized");
}

void Circuit::append(const Circuit& other) {
  elements.insert(elements.end(), other.elements.begin(), other.elements.end());
}

Circuit Circuit::inverted() const {
  Circuit inv;
  inv.elements.reserve(elements.size());
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
    if (const auto* bs = std::get_if<BeamSplitter>(&*it)) {
      inv.push(BeamSplitter(std::conj(bs->t), -bs->r, bs->mode_a, bs->mode_b));
    } else if (const auto* ps = std::get_if<PhaseShift>(&*it)) {
      inv.push(PhaseShift{ps->mode, -ps->theta});
    } else {
      const auto& d = std::get<Displacement>(*it);
      inv.push(Displacement{d.mode, -d.epsilon});
    }
  }
  return inv;
}

int Circuit::max_mode() const {
  int max_mode = -1;
  for (const auto& e : elements) {
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
      max_mode = std::max({max_mode, bs->mode_a, bs->mode_b});
    } else if (const auto* ps = std::get_if<PhaseShift>(&e)) {
      max_mode = std::max(max_mode, ps->mode);
    } else {
      max_mode = std::max(max_mode, std::get<Displacement>(e).mode);
    }
  }
  return max_mode;
}

StateVector apply_beamsplitter(const StateVector& state, const BeamSplitter& bs) {
  if (bs.mode_a >= state.modes() || bs.mode_b >= state.modes())
    throw std::out_of_range("beam splitter mode index out of range");

  const cplx t = bs.t;
  const cplx r = bs.r;
  const cplx minus_r_conj = -std::conj(bs.r);
  const cplx t_conj = std::conj(bs.t);

  StateVector out(state.modes(), state.cutoff());
  if (state.truncated()) out.mark_truncated();

  // Powers are bounded by the cutoff; precomputed per input term below.
  for (const auto& [occ, amp] : state.terms()) {
    const int na = occ[bs.mode_a];
    const int nb = occ[bs.mode_b];
    if (na == 0 && nb == 0) {
      out.add_term(occ, amp);
      continue;
    }
    const double inv_sqrt_in =
        1.0 / (fock::sqrt_factorial(na) * fock::sqrt_factorial(nb));
    // (t adag_a - conj(r) adag_b)^na (r adag_a + conj(t) adag_b)^nb expanded
    // over (i, j) photons sent to mode a from each factor.
    std::vector<cplx> t_pows(static_cast<size_t>(na) + 1),
        mrc_pows(static_cast<size_t>(na) + 1),
        r_pows(static_cast<size_t>(nb) + 1),
        tc_pows(static_cast<size_t>(nb) + 1);
    t_pows[0] = mrc_pows[0] = r_pows[0] = tc_pows[0] = cplx(1.0, 0.0);
    for (int i = 1; i <= na; ++i) {
      t_pows[static_cast<size_t>(i)] = t_pows[static_cast<size_t>(i) - 1] * t;
      mrc_pows[static_cast<size_t>(i)] =
          mrc_pows[static_cast<size_t>(i) - 1] * minus_r_conj;
    }
    for (int j = 1; j <= nb; ++j) {
      r_pows[static_cast<size_t>(j)] = r_pows[static_cast<size_t>(j) - 1] * r;
      tc_pows[static_cast<size_t>(j)] =
          tc_pows[static_cast<size_t>(j) - 1] * t_conj;
    }
    for (int i = 0; i <= na; ++i) {
      const cplx left = fock::binomial(na, i) * t_pows[static_cast<size_t>(i)] *
                        mrc_pows[static_cast<size_t>(na - i)];
      for (int j = 0; j <= nb; ++j) {
        const cplx right = fock::binomial(nb, j) *
                           r_pows[static_cast<size_t>(j)] *
                           tc_pows[static_cast<size_t>(nb - j)];
        const int out_a = i + j;
        const int out_b = na + nb - out_a;
        const double weight =
            fock::sqrt_factorial(out_a) * fock::sqrt_factorial(out_b) * inv_sqrt_in;
        out.add_term(occ.with(bs.mode_a, out_a).with(bs.mode_b, out_b),
                     amp * left * right * weight);
      }
    }
  }
  out.prune_in_place();
  return out;
}

StateVector apply_phaseshift(const StateVector& state, const PhaseShift& ps) {
  if (ps.mode < 0 || ps.mode >= state.modes())
    throw std::out_of_range("phase shift mode index out of range");
  StateVector out(state.modes(), state.cutoff());
  if (state.truncated()) out.mark_truncated();
  for (const auto& [occ, amp] : state.terms()) {
    const double phase = ps.theta * occ[ps.mode];
    out.add_term(occ, amp * std::polar(1.0, phase));
  }
  return out;
}

StateVector apply_displacement(const StateVector& state, const Displacement& d) {
  if (d.mode < 0 || d.mode >= state.modes())
    throw std::out_of_range("displacement mode index out of range");
  // The generator is exponentiated on a padded fiber so matrix elements near
  // the state cutoff match the untruncated displacement; the result is then
  // projected back. Leaked mass beyond the cutoff is measured and flags the
  // output when it exceeds the tail tolerance.
  const double eps_mag = std::abs(d.epsilon);
  const int pad = 8 + static_cast<int>(std::ceil(3.0 * eps_mag * eps_mag + 6.0 * eps_mag));
  const int dim = state.cutoff() + 1 + pad;

  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim - 1; ++n) {
    const double ladder = std::sqrt(n + 1.0);
    gen(n + 1, n) += d.epsilon * ladder;             // eps adag
    gen(n, n + 1) -= std::conj(d.epsilon) * ladder;  // -conj(eps) a
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(cplx(0.0, -1.0) * gen);
  Eigen::VectorXcd phases(dim);
  for (int k = 0; k < dim; ++k)
    phases(k) = std::polar(1.0, solver.eigenvalues()(k));
  const Eigen::MatrixXcd unitary = solver.eigenvectors() *
                                   phases.asDiagonal() *
                                   solver.eigenvectors().adjoint();

  StateVector out(state.modes(), state.cutoff());
  if (state.truncated()) out.mark_truncated();
  double leaked = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    const int n = occ[d.mode];
    const int headroom = state.cutoff() - (occ.total() - n);
    for (int m = 0; m < dim; ++m) {
      const cplx element = unitary(m, n);
      const cplx value = amp * element;
      if (m > headroom) {
        leaked += std::norm(value);
        continue;
      }
      out.add_term(occ.with(d.mode, m), value);
    }
  }
  if (leaked > 1e-12 * std::max(state.norm_sq(), 1e-300)) out.mark_truncated();
  out.prune_in_place();
  return out;
}

StateVector apply_element(const StateVector& state, const Element& e) {
  if (const auto* bs = std::get_if<BeamSplitter>(&e))
    return apply_beamsplitter(state, *bs);
  if (const auto* ps = std::get_if<PhaseShift>(&e))
    return apply_phaseshift(state, *ps);
  return apply_displacement(state, std::get<Displacement>(e));
}

StateVector apply_circuit(const StateVector& state, const Circuit& circuit) {
  StateVector current = state;
  for (const auto& e : circuit.elements) current = apply_element(current, e);
  return current;
}

Circuit equal_splitter(int n, int source_mode, const std::vector<int>& ancilla_modes) {
  if (n < 1) throw std::invalid_argument("equal splitter requires n >= 1");
  if (ancilla_modes.size() != static_cast<size_t>(n - 1))
    throw std::invalid_argument("equal splitter requires n-1 ancilla modes");
  Circuit circuit;
  // Ket-side order: the 1/sqrt(n) tap acts first, the 50:50 splitter last,
  // which leaves amplitude +1/sqrt(n) on every output.
  for (int l = n; l >= 2; --l) {
    const double t = std::sqrt((l - 1.0) / l);
    const double r = -1.0 / std::sqrt(static_cast<double>(l));
    circuit.push(BeamSplitter(cplx(t, 0.0), cplx(r, 0.0), source_mode,
                              ancilla_modes[static_cast<size_t>(l - 2)]));
  }
  return circuit;
}

}  // namespace qforge::optics
