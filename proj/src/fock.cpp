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

#include "qforge/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace qforge::fock {

namespace {

constexpr int kFactorialTableSize = 171;  // 170! is the last finite double

const double* factorial_table() {
  static const auto table = [] {
    static double t[kFactorialTableSize];
    t[0] = 1.0;
    for (int i = 1; i < kFactorialTableSize; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

const double* sqrt_factorial_table() {
  static const auto table = [] {
    static double t[kFactorialTableSize];
    for (int i = 0; i < kFactorialTableSize; ++i)
      t[i] = std::sqrt(factorial_table()[i]);
    return t;
  }();
  return table;
}

void check_mode(int mode, int modes) {
  if (mode < 0 || mode >= modes)
    throw std::out_of_range("mode index " + std::to_string(mode) +
                            " out of range for " + std::to_string(modes) +
                            "-mode state");
}

}  // namespace

double factorial(int n) {
  if (n < 0 || n >= kFactorialTableSize)
    throw std::out_of_range("factorial argument out of table range");
  return factorial_table()[n];
}

double sqrt_factorial(int n) {
  if (n < 0 || n >= kFactorialTableSize)
    throw std::out_of_range("factorial argument out of table range");
  return sqrt_factorial_table()[n];
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

Occupation::Occupation(std::initializer_list<int> counts)
    : Occupation(std::vector<int>(counts)) {}

Occupation::Occupation(const std::vector<int>& counts) {
  if (counts.size() > static_cast<size_t>(kMaxModes))
    throw std::invalid_argument("mode count exceeds kMaxModes");
  modes_ = static_cast<std::uint8_t>(counts.size());
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0 || counts[i] > 255)
      throw std::invalid_argument("photon count out of range");
    counts_[i] = static_cast<std::uint8_t>(counts[i]);
  }
}

Occupation Occupation::zeros(int modes) {
  if (modes < 0 || modes > kMaxModes)
    throw std::invalid_argument("mode count exceeds kMaxModes");
  Occupation occ;
  occ.modes_ = static_cast<std::uint8_t>(modes);
  return occ;
}

int Occupation::total() const {
  int sum = 0;
  for (int i = 0; i < modes_; ++i) sum += counts_[static_cast<size_t>(i)];
  return sum;
}

Occupation Occupation::with(int mode, int count) const {
  check_mode(mode, modes_);
  if (count < 0 || count > 255)
    throw std::invalid_argument("photon count out of range");
  Occupation out = *this;
  out.counts_[static_cast<size_t>(mode)] = static_cast<std::uint8_t>(count);
  return out;
}

std::vector<int> Occupation::to_vector() const {
  std::vector<int> v(static_cast<size_t>(modes_));
  for (int i = 0; i < modes_; ++i) v[static_cast<size_t>(i)] = counts_[static_cast<size_t>(i)];
  return v;
}

std::size_t Occupation::hash() const {
  // FNV-style mix over the four 64-bit words of the inline storage.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ modes_;
  for (int i = 0; i < 4; ++i) {
    std::uint64_t word;
    std::memcpy(&word, counts_.data() + 8 * i, sizeof(word));
    h ^= word;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

StateVector::StateVector(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  if (modes < 1 || modes > kMaxModes)
    throw std::invalid_argument("mode count must be in [1, kMaxModes]");
  if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
}

StateVector StateVector::vacuum(int modes, int cutoff) {
  StateVector s(modes, cutoff);
  s.terms_.emplace(Occupation::zeros(modes), cplx(1.0, 0.0));
  return s;
}

StateVector StateVector::basis(const Occupation& occ, int cutoff) {
  StateVector s(occ.modes(), cutoff);
  s.add_term(occ, cplx(1.0, 0.0));
  return s;
}

cplx StateVector::amplitude(const Occupation& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

void StateVector::add_term(const Occupation& occ, cplx amp) {
  if (occ.modes() != modes_)
    throw std::invalid_argument("occupation mode count mismatch");
  if (occ.total() > cutoff_) {
    truncated_ = true;
    return;
  }
  auto [it, inserted] = terms_.try_emplace(occ, amp);
  if (!inserted) it->second += amp;
}

double StateVector::norm_sq() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
  return sum;
}

double StateVector::norm() const { return std::sqrt(norm_sq()); }

StateVector StateVector::scaled(cplx factor) const {
  StateVector out = *this;
  for (auto& [occ, amp] : out.terms_) amp *= factor;
  return out;
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  return scaled(cplx(1.0 / n, 0.0));
}

StateVector StateVector::pruned(double threshold) const {
  StateVector out = *this;
  out.prune_in_place(threshold);
  return out;
}

void StateVector::prune_in_place(double threshold) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < threshold)
      it = terms_.erase(it);
    else
      ++it;
  }
}

StateVector StateVector::canonicalized() const {
  const auto sorted = sorted_terms();
  for (const auto& [occ, amp] : sorted) {
    const double mag = std::abs(amp);
    if (mag > 0.0) {
      return scaled(std::conj(amp) / mag);
    }
  }
  return *this;
}

std::vector<std::pair<Occupation, cplx>> StateVector::sorted_terms() const {
  std::vector<std::pair<Occupation, cplx>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<double> StateVector::total_photon_distribution() const {
  std::vector<double> dist(static_cast<size_t>(cutoff_) + 1, 0.0);
  for (const auto& [occ, amp] : terms_)
    dist[static_cast<size_t>(occ.total())] += std::norm(amp);
  return dist;
}

StateVector apply_creation(const StateVector& state, int mode) {
  check_mode(mode, state.modes());
  StateVector out(state.modes(), state.cutoff());
  if (state.truncated()) out.mark_truncated();
  for (const auto& [occ, amp] : state.terms()) {
    const int n = occ[mode];
    if (occ.total() + 1 > state.cutoff()) {
      out.mark_truncated();
      continue;
    }
    out.add_term(occ.with(mode, n + 1), amp * std::sqrt(n + 1.0));
  }
  return out;
}

StateVector apply_annihilation(const StateVector& state, int mode) {
  check_mode(mode, state.modes());
  StateVector out(state.modes(), state.cutoff());
  if (state.truncated()) out.mark_truncated();
  for (const auto& [occ, amp] : state.terms()) {
    const int n = occ[mode];
    if (n == 0) continue;
    out.add_term(occ.with(mode, n - 1), amp * std::sqrt(static_cast<double>(n)));
  }
  return out;
}

cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.modes() != b.modes())
    throw std::invalid_argument("inner product requires matching mode counts");
  // Iterate over the smaller support.
  const StateVector& small = a.term_count() <= b.term_count() ? a : b;
  const StateVector& large = a.term_count() <= b.term_count() ? b : a;
  const bool small_is_a = &small == &a;
  cplx sum(0.0, 0.0);
  for (const auto& [occ, amp] : small.terms()) {
    const cplx other = large.amplitude(occ);
    sum += small_is_a ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return sum;
}

double fidelity(const StateVector& a, const StateVector& b) {
  const double na = a.norm_sq();
  const double nb = b.norm_sq();
  if (na == 0.0 || nb == 0.0)
    throw std::domain_error("fidelity of a zero vector is undefined");
  return std::norm(inner_product(a, b)) / (na * nb);
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  StateVector out(a.modes() + b.modes(), a.cutoff() + b.cutoff());
  if (a.truncated() || b.truncated()) out.mark_truncated();
  for (const auto& [occ_a, amp_a] : a.terms()) {
    std::vector<int> joint = occ_a.to_vector();
    const size_t base = joint.size();
    joint.resize(base + static_cast<size_t>(b.modes()));
    for (const auto& [occ_b, amp_b] : b.terms()) {
      for (int i = 0; i < b.modes(); ++i) joint[base + static_cast<size_t>(i)] = occ_b[i];
      out.add_term(Occupation(joint), amp_a * amp_b);
    }
  }
  return out;
}

namespace {

void enumerate_rec(int modes, int cutoff, int mode, std::vector<int>& occ,
                   int used, std::vector<Occupation>& out) {
  if (mode == modes) {
    out.emplace_back(occ);
    return;
  }
  for (int n = 0; n <= cutoff - used; ++n) {
    occ[static_cast<size_t>(mode)] = n;
    enumerate_rec(modes, cutoff, mode + 1, occ, used + n, out);
  }
  occ[static_cast<size_t>(mode)] = 0;
}

}  // namespace

std::vector<Occupation> enumerate_basis(int modes, int cutoff) {
  std::vector<Occupation> out;
  std::vector<int> occ(static_cast<size_t>(modes), 0);
  enumerate_rec(modes, cutoff, 0, occ, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

DensityMatrix::DensityMatrix(int modes, int cutoff)
    : modes_(modes), cutoff_(cutoff), basis_(enumerate_basis(modes, cutoff)) {
  index_.reserve(basis_.size());
  for (size_t i = 0; i < basis_.size(); ++i)
    index_.emplace(basis_[i], static_cast<int>(i));
  mat_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis_.size()),
                                static_cast<Eigen::Index>(basis_.size()));
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  DensityMatrix rho(psi.modes(), psi.cutoff());
  rho.add_outer(psi);
  if (psi.truncated()) rho.mark_truncated();
  return rho;
}

int DensityMatrix::basis_index(const Occupation& occ) const {
  auto it = index_.find(occ);
  return it == index_.end() ? -1 : it->second;
}

void DensityMatrix::add_outer(const StateVector& psi, double weight) {
  if (psi.modes() != modes_)
    throw std::invalid_argument("density matrix mode count mismatch");
  std::vector<std::pair<int, cplx>> entries;
  entries.reserve(psi.term_count());
  for (const auto& [occ, amp] : psi.terms()) {
    const int idx = basis_index(occ);
    if (idx < 0) {
      truncated_ = true;
      continue;
    }
    entries.emplace_back(idx, amp);
  }
  for (const auto& [i, ai] : entries)
    for (const auto& [j, aj] : entries)
      mat_(i, j) += weight * ai * std::conj(aj);
}

double DensityMatrix::trace() const { return mat_.trace().real(); }

DensityMatrix DensityMatrix::normalized() const {
  const double t = trace();
  if (t <= 0.0) throw std::domain_error("cannot normalize a traceless matrix");
  DensityMatrix out = *this;
  out.mat_ /= t;
  return out;
}

double DensityMatrix::purity() const {
  const double t = trace();
  if (t <= 0.0) throw std::domain_error("purity of a traceless matrix");
  return (mat_ * mat_).trace().real() / (t * t);
}

double DensityMatrix::hermiticity_error() const {
  return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (mat_ + mat_.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::partial_trace(const std::vector<int>& keep) const {
  if (keep.empty()) throw std::invalid_argument("keep set must be non-empty");
  std::vector<bool> kept(static_cast<size_t>(modes_), false);
  for (int m : keep) {
    check_mode(m, modes_);
    kept[static_cast<size_t>(m)] = true;
  }
  std::vector<int> keep_sorted;
  std::vector<int> traced;
  for (int m = 0; m < modes_; ++m)
    (kept[static_cast<size_t>(m)] ? keep_sorted : traced).push_back(m);

  DensityMatrix out(static_cast<int>(keep_sorted.size()), cutoff_);
  if (truncated_) out.mark_truncated();

  auto split = [&](const Occupation& occ, std::vector<int>& kept_part,
                   std::vector<int>& traced_part) {
    kept_part.clear();
    traced_part.clear();
    for (int m : keep_sorted) kept_part.push_back(occ[m]);
    for (int m : traced) traced_part.push_back(occ[m]);
  };

  std::vector<int> ki, ti, kj, tj;
  const int dim = this->dim();
  for (int i = 0; i < dim; ++i) {
    split(basis_[static_cast<size_t>(i)], ki, ti);
    for (int j = 0; j < dim; ++j) {
      split(basis_[static_cast<size_t>(j)], kj, tj);
      if (ti != tj) continue;
      const cplx v = mat_(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      const int oi = out.basis_index(Occupation(ki));
      const int oj = out.basis_index(Occupation(kj));
      out.mat_(oi, oj) += v;
    }
  }
  return out;
}

double DensityMatrix::fidelity_pure(const StateVector& target) const {
  const double t = trace();
  const double tn = target.norm_sq();
  if (t <= 0.0 || tn == 0.0) throw std::domain_error("fidelity undefined");
  cplx sum(0.0, 0.0);
  // <t|rho|t> = sum_ij conj(t_i) rho_ij t_j over target support.
  for (const auto& [occ_i, amp_i] : target.terms()) {
    const int i = basis_index(occ_i);
    if (i < 0) continue;
    for (const auto& [occ_j, amp_j] : target.terms()) {
      const int j = basis_index(occ_j);
      if (j < 0) continue;
      sum += std::conj(amp_i) * mat_(i, j) * amp_j;
    }
  }
  return sum.real() / (t * tn);
}

std::vector<double> DensityMatrix::photon_number_distribution() const {
  std::vector<double> dist(static_cast<size_t>(cutoff_) + 1, 0.0);
  for (int i = 0; i < dim(); ++i)
    dist[static_cast<size_t>(basis_[static_cast<size_t>(i)].total())] +=
        mat_(i, i).real();
  return dist;
}

double DensityMatrix::mean_photon(int mode) const {
  check_mode(mode, modes_);
  double sum = 0.0;
  for (int i = 0; i < dim(); ++i)
    sum += basis_[static_cast<size_t>(i)][mode] * mat_(i, i).real();
  return sum;
}

double DensityMatrix::mean_total_photon() const {
  double sum = 0.0;
  for (int i = 0; i < dim(); ++i)
    sum += basis_[static_cast<size_t>(i)].total() * mat_(i, i).real();
  return sum;
}

namespace {

Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (m + m.adjoint()));
  Eigen::VectorXd vals = solver.eigenvalues().cwiseMax(0.0);
  return solver.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.modes() != b.modes() || a.cutoff() != b.cutoff())
    throw std::invalid_argument("fidelity requires matching spaces");
  const Eigen::MatrixXcd ma = a.normalized().matrix();
  const Eigen::MatrixXcd mb = b.normalized().matrix();
  const Eigen::MatrixXcd sa = matrix_sqrt_psd(ma);
  const Eigen::MatrixXcd inner = sa * mb * sa;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double root_sum = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.modes() != b.modes() || a.cutoff() != b.cutoff())
    throw std::invalid_argument("trace distance requires matching spaces");
  const Eigen::MatrixXcd diff =
      a.normalized().matrix() - b.normalized().matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace qforge::fock
