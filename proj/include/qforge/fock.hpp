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

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace qforge::fock {

using cplx = std::complex<double>;

// Hard capacity of the inline occupation storage; actual mode counts are
// dynamic and validated against this at construction.
inline constexpr int kMaxModes = 32;

// Amplitudes below this magnitude are pruned after each composite operation
// to bound sparsity loss from numerical dust.
inline constexpr double kPruneThreshold = 1e-14;

double factorial(int n);
double sqrt_factorial(int n);
double binomial(int n, int k);

// Photon counts per mode of a multimode number state |n_1,...,n_m>.
class Occupation {
 public:
  Occupation() = default;
  explicit Occupation(std::initializer_list<int> counts);
  explicit Occupation(const std::vector<int>& counts);
  static Occupation zeros(int modes);

  int modes() const { return modes_; }
  int operator[](int mode) const { return counts_[static_cast<size_t>(mode)]; }
  int total() const;

  // Copy with one mode changed; count must stay in [0, 255].
  Occupation with(int mode, int count) const;

  std::vector<int> to_vector() const;

  bool operator==(const Occupation& other) const {
    return modes_ == other.modes_ && counts_ == other.counts_;
  }
  // Lexicographic; used for the canonical reporting order.
  bool operator<(const Occupation& other) const {
    return counts_ < other.counts_;
  }

  std::size_t hash() const;

 private:
  std::array<std::uint8_t, kMaxModes> counts_{};
  std::uint8_t modes_ = 0;
};

struct OccupationHash {
  std::size_t operator()(const Occupation& occ) const { return occ.hash(); }
};

// Sparse multimode Fock-state vector with a total-photon-number cutoff.
// Not necessarily normalized: heralded states carry their probability weight.
// Values are immutable once built; operations return new vectors. The
// truncation flag is sticky: once an operation drops out-of-cutoff
// components, every derived state keeps the flag.
class StateVector {
 public:
  using TermMap = std::unordered_map<Occupation, cplx, OccupationHash>;

  StateVector(int modes, int cutoff);
  static StateVector vacuum(int modes, int cutoff);
  static StateVector basis(const Occupation& occ, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  cplx amplitude(const Occupation& occ) const;
  // Accumulates; drops the component and sets the flag if it violates the
  // cutoff. Intended for state construction.
  void add_term(const Occupation& occ, cplx amp);

  double norm_sq() const;
  double norm() const;
  StateVector normalized() const;
  StateVector scaled(cplx factor) const;
  StateVector pruned(double threshold = kPruneThreshold) const;
  void prune_in_place(double threshold = kPruneThreshold);

  // Reporting convention: global phase fixed so the first nonzero amplitude
  // in lexicographic occupation order is real and positive.
  StateVector canonicalized() const;

  // Terms in lexicographic occupation order (deterministic).
  std::vector<std::pair<Occupation, cplx>> sorted_terms() const;

  // Probability mass per total photon number, index 0..cutoff.
  std::vector<double> total_photon_distribution() const;

 private:
  int modes_;
  int cutoff_;
  bool truncated_ = false;
  TermMap terms_;
};

// Ladder operators. Components pushed past the cutoff are dropped and flag
// the result as truncated.
StateVector apply_creation(const StateVector& state, int mode);
StateVector apply_annihilation(const StateVector& state, int mode);

// Conjugate-linear in the first argument.
cplx inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2 with both sides normalized.
double fidelity(const StateVector& a, const StateVector& b);

// Kronecker product; modes of `b` are appended after those of `a`.
StateVector tensor(const StateVector& a, const StateVector& b);

// Dense Hermitian operator on the truncated multimode Fock space spanned by
// all occupations with total photon number <= cutoff, in lexicographic order.
class DensityMatrix {
 public:
  DensityMatrix(int modes, int cutoff);
  static DensityMatrix from_pure(const StateVector& psi);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Occupation>& basis() const { return basis_; }
  int basis_index(const Occupation& occ) const;  // -1 if absent

  const Eigen::MatrixXcd& matrix() const { return mat_; }
  Eigen::MatrixXcd& matrix() { return mat_; }

  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  // Adds weight * |psi><psi|; out-of-cutoff components are dropped with the
  // truncation flag.
  void add_outer(const StateVector& psi, double weight = 1.0);

  double trace() const;
  DensityMatrix normalized() const;
  double purity() const;  // tr(rho^2) / tr(rho)^2
  double hermiticity_error() const;
  double min_eigenvalue() const;

  DensityMatrix partial_trace(const std::vector<int>& keep) const;

  // <t|rho|t> with rho and |t> normalized.
  double fidelity_pure(const StateVector& target) const;

  std::vector<double> photon_number_distribution() const;
  double mean_photon(int mode) const;
  double mean_total_photon() const;

 private:
  int modes_;
  int cutoff_;
  bool truncated_ = false;
  std::vector<Occupation> basis_;
  std::unordered_map<Occupation, int, OccupationHash> index_;
  Eigen::MatrixXcd mat_;
};

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2 on normalized inputs.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

// (1/2) tr |a - b| on normalized inputs.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// All occupations of `modes` modes with total <= cutoff, lexicographic.
std::vector<Occupation> enumerate_basis(int modes, int cutoff);

}  // namespace qforge::fock
