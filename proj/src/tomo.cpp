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

#include "qforge/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qforge/rng.hpp"

namespace qforge::tomo {

using fock::Occupation;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
// Hermite-product monomial arithmetic stays well conditioned well past the
// desk-scale cutoffs; refuse anything beyond it.
constexpr int kMaxTomoCutoff = 12;

void check_two_modes(const DensityMatrix& rho) {
  if (rho.modes() != 2)
    throw std::invalid_argument("homodyne tomography expects two-mode states");
}

// Monomial coefficients of the normalized Hermite polynomials
// h_n = H_n / sqrt(2^n n! sqrt(pi)), so phi_n(x) = h_n(x) exp(-x^2/2).
std::vector<std::vector<double>> hermite_monomials(int max_n) {
  std::vector<std::vector<double>> h(static_cast<size_t>(max_n) + 1);
  std::vector<std::vector<double>> raw(static_cast<size_t>(max_n) + 1);
  raw[0] = {1.0};
  if (max_n >= 1) raw[1] = {0.0, 2.0};
  for (int n = 2; n <= max_n; ++n) {
    auto& out = raw[static_cast<size_t>(n)];
    out.assign(static_cast<size_t>(n) + 1, 0.0);
    for (size_t j = 0; j < raw[static_cast<size_t>(n) - 1].size(); ++j)
      out[j + 1] += 2.0 * raw[static_cast<size_t>(n) - 1][j];
    for (size_t j = 0; j < raw[static_cast<size_t>(n) - 2].size(); ++j)
      out[j] -= 2.0 * (n - 1) * raw[static_cast<size_t>(n) - 2][j];
  }
  for (int n = 0; n <= max_n; ++n) {
    const double scale =
        1.0 / std::sqrt(std::pow(2.0, n) * fock::factorial(n) * std::sqrt(kPi));
    h[static_cast<size_t>(n)] = raw[static_cast<size_t>(n)];
    for (double& c : h[static_cast<size_t>(n)]) c *= scale;
  }
  return h;
}

// phi_n(x) for n = 0..max_n via the stable upward recurrence.
void hermite_functions(int max_n, double x, std::vector<double>& out) {
  out.resize(static_cast<size_t>(max_n) + 1);
  const double gauss = std::exp(-0.5 * x * x) / std::pow(kPi, 0.25);
  out[0] = gauss;
  if (max_n >= 1) out[1] = std::sqrt(2.0) * x * gauss;
  for (int n = 1; n < max_n; ++n)
    out[static_cast<size_t>(n) + 1] =
        std::sqrt(2.0 / (n + 1.0)) * x * out[static_cast<size_t>(n)] -
        std::sqrt(n / (n + 1.0)) * out[static_cast<size_t>(n) - 1];
}

// Monomial tables W[n][m][j] with phi_n phi_m = exp(-x^2) sum_j W j x^j.
struct ProductTable {
  int max_n;
  std::vector<std::vector<std::vector<double>>> w;

  explicit ProductTable(int max_n_in) : max_n(max_n_in) {
    const auto h = hermite_monomials(max_n);
    w.resize(static_cast<size_t>(max_n) + 1);
    for (int n = 0; n <= max_n; ++n) {
      w[static_cast<size_t>(n)].resize(static_cast<size_t>(max_n) + 1);
      for (int m = 0; m <= max_n; ++m) {
        std::vector<double> prod(static_cast<size_t>(n + m) + 1, 0.0);
        for (size_t i = 0; i < h[static_cast<size_t>(n)].size(); ++i)
          for (size_t j = 0; j < h[static_cast<size_t>(m)].size(); ++j)
            prod[i + j] += h[static_cast<size_t>(n)][i] * h[static_cast<size_t>(m)][j];
        w[static_cast<size_t>(n)][static_cast<size_t>(m)] = std::move(prod);
      }
    }
  }
};

// Incomplete Gaussian moments I_j(x) = int_-inf^x t^j exp(-t^2) dt.
void gaussian_moments(int max_j, double x, std::vector<double>& out) {
  out.resize(static_cast<size_t>(max_j) + 1);
  const double gauss = std::exp(-x * x);
  out[0] = 0.5 * std::sqrt(kPi) * (1.0 + std::erf(x));
  if (max_j >= 1) out[1] = -0.5 * gauss;
  double xpow = x;  // x^(j-1) for j = 2
  for (int j = 2; j <= max_j; ++j) {
    out[static_cast<size_t>(j)] =
        -0.5 * xpow * gauss + 0.5 * (j - 1) * out[static_cast<size_t>(j) - 2];
    xpow *= x;
  }
}

// Full moments I_j(inf).
std::vector<double> gaussian_moments_full(int max_j) {
  std::vector<double> out(static_cast<size_t>(max_j) + 1, 0.0);
  out[0] = std::sqrt(kPi);
  for (int j = 2; j <= max_j; ++j)
    out[static_cast<size_t>(j)] = 0.5 * (j - 1) * out[static_cast<size_t>(j) - 2];
  return out;
}

// Draws one value from the density sum_{nm} A_{nm} phi_n phi_m (A Hermitian
// PSD) by bisecting its closed-form CDF.
class QuadratureDensity {
 public:
  QuadratureDensity(const ProductTable& table, const Eigen::MatrixXcd& a)
      : degree_(2 * (static_cast<int>(a.rows()) - 1)) {
    gamma_.assign(static_cast<size_t>(degree_) + 1, 0.0);
    const int dim = static_cast<int>(a.rows());
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m) {
        const double re = a(n, m).real();
        if (re == 0.0) continue;
        const auto& w = table.w[static_cast<size_t>(n)][static_cast<size_t>(m)];
        for (size_t j = 0; j < w.size(); ++j) gamma_[j] += re * w[j];
      }
    const auto full = gaussian_moments_full(degree_);
    total_ = 0.0;
    for (size_t j = 0; j <= static_cast<size_t>(degree_); ++j)
      total_ += gamma_[j] * full[j];
  }

  double total_mass() const { return total_; }

  double cdf(double x) const {
    gaussian_moments(degree_, x, moments_);
    double acc = 0.0;
    for (size_t j = 0; j <= static_cast<size_t>(degree_); ++j)
      acc += gamma_[j] * moments_[j];
    return acc;
  }

  double sample(double u, double radius) const {
    const double target = u * total_;
    double lo = -radius, hi = radius;
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  int degree_;
  std::vector<double> gamma_;
  double total_ = 0.0;
  mutable std::vector<double> moments_;
};

}  // namespace

void LossChannel::validate() const {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("transmissivity must be in (0, 1]");
}

DensityMatrix apply_loss(const DensityMatrix& rho, double eta) {
  LossChannel{eta}.validate();
  const int dim = rho.dim();
  const auto& basis = rho.basis();

  DensityMatrix out = rho;
  for (int mode = 0; mode < rho.modes(); ++mode) {
    DensityMatrix next(rho.modes(), rho.cutoff());
    if (out.truncated()) next.mark_truncated();
    // K_l |n> = sqrt(C(n,l) eta^(n-l) (1-eta)^l) |n-l>, summed over l.
    for (int i = 0; i < dim; ++i) {
      const int ni = basis[static_cast<size_t>(i)][mode];
      for (int j = 0; j < dim; ++j) {
        const cplx value = out.matrix()(i, j);
        if (value == cplx(0.0, 0.0)) continue;
        const int nj = basis[static_cast<size_t>(j)][mode];
        const int max_l = std::min(ni, nj);
        for (int l = 0; l <= max_l; ++l) {
          const double ki = std::sqrt(fock::binomial(ni, l) *
                                      std::pow(eta, ni - l) *
                                      std::pow(1.0 - eta, l));
          const double kj = std::sqrt(fock::binomial(nj, l) *
                                      std::pow(eta, nj - l) *
                                      std::pow(1.0 - eta, l));
          const int oi = next.basis_index(basis[static_cast<size_t>(i)].with(mode, ni - l));
          const int oj = next.basis_index(basis[static_cast<size_t>(j)].with(mode, nj - l));
          next.matrix()(oi, oj) += ki * kj * value;
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<QuadratureSample> sample_homodyne(const DensityMatrix& rho,
                                              long long shots,
                                              const PhaseStrategy& strategy,
                                              std::uint64_t seed) {
  check_two_modes(rho);
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (rho.cutoff() > kMaxTomoCutoff)
    throw std::invalid_argument("cutoff beyond the supported tomography range");
  const int levels = rho.cutoff() + 1;
  const ProductTable table(rho.cutoff());
  const double radius = std::sqrt(2.0 * rho.cutoff() + 1.0) + 8.0;

  // Spectral decomposition: sample a pure component, then x1 from its
  // marginal and x2 from the conditional slice.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (rho.normalized().matrix() +
             rho.normalized().matrix().adjoint()));
  std::vector<double> weights;
  std::vector<Eigen::MatrixXcd> components;  // coefficient grids c(n1, n2)
  for (int k = 0; k < rho.dim(); ++k) {
    const double w = solver.eigenvalues()(k);
    if (w < 1e-14) continue;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(levels, levels);
    for (int i = 0; i < rho.dim(); ++i) {
      const auto& occ = rho.basis()[static_cast<size_t>(i)];
      c(occ[0], occ[1]) = solver.eigenvectors()(i, k);
    }
    weights.push_back(w);
    components.push_back(std::move(c));
  }
  std::vector<double> weight_cdf(weights.size());
  double acc = 0.0;
  for (size_t k = 0; k < weights.size(); ++k) weight_cdf[k] = (acc += weights[k]);

  std::vector<QuadratureSample> samples;
  samples.reserve(static_cast<size_t>(shots));
  std::vector<double> phi;
  for (long long shot = 0; shot < shots; ++shot) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(shot)));
    QuadratureSample s;
    if (strategy.kind == PhaseStrategy::Kind::UniformRandom) {
      s.theta1 = rng.next_double() * kTwoPi;
      s.theta2 = rng.next_double() * kTwoPi;
    } else {
      const int g = std::max(1, strategy.grid_size);
      s.theta1 = kPi * static_cast<double>(shot % g) / g;
      s.theta2 = kPi * static_cast<double>((shot / g) % g) / g;
    }

    const double pick = rng.next_double() * acc;
    size_t k = static_cast<size_t>(
        std::lower_bound(weight_cdf.begin(), weight_cdf.end(), pick) -
        weight_cdf.begin());
    if (k >= components.size()) k = components.size() - 1;

    // Rotated coefficients c_nm exp(-i(n theta1 + m theta2)).
    Eigen::MatrixXcd c = components[k];
    for (int n = 0; n < levels; ++n)
      for (int m = 0; m < levels; ++m)
        c(n, m) *= std::polar(1.0, -(n * s.theta1 + m * s.theta2));

    const Eigen::MatrixXcd marginal = c * c.adjoint();
    QuadratureDensity density1(table, marginal);
    s.x1 = density1.sample(rng.next_double(), radius);

    hermite_functions(rho.cutoff(), s.x1, phi);
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(levels);
    for (int m = 0; m < levels; ++m)
      for (int n = 0; n < levels; ++n) d(m) += c(n, m) * phi[static_cast<size_t>(n)];
    const Eigen::MatrixXcd conditional = d.conjugate() * d.transpose();
    QuadratureDensity density2(table, conditional);
    s.x2 = density2.sample(rng.next_double(), radius);

    samples.push_back(s);
  }
  return samples;
}

namespace {

struct BinGrid {
  double low;
  double width;
  int count;

  int bin_of(double x) const {
    const int b = static_cast<int>(std::floor((x - low) / width));
    return std::clamp(b, 0, count - 1);
  }
};

}  // namespace

TomoResult mle_reconstruct(const std::vector<QuadratureSample>& samples,
                           int cutoff, const MleOptions& options) {
  if (samples.empty()) throw EmptySamplesError("no quadrature samples");
  if (cutoff < 0 || cutoff > kMaxTomoCutoff)
    throw std::invalid_argument("cutoff outside the supported range");

  const int levels = cutoff + 1;
  const ProductTable table(cutoff);
  const double span = std::sqrt(2.0 * cutoff + 1.0) + 5.0;
  BinGrid grid{-span, options.bin_width,
               static_cast<int>(std::ceil(2.0 * span / options.bin_width))};

  // Bin-integrated projector blocks T[b](n, m) = int_bin phi_n phi_m dx,
  // with the edge bins extended to +-infinity so each phase slice resolves
  // the identity exactly.
  std::vector<Eigen::MatrixXd> bin_ops(static_cast<size_t>(grid.count),
                                       Eigen::MatrixXd(levels, levels));
  {
    const auto full = gaussian_moments_full(2 * cutoff);
    std::vector<double> lo_m, hi_m;
    for (int b = 0; b < grid.count; ++b) {
      const double lo = grid.low + b * grid.width;
      const double hi = lo + grid.width;
      gaussian_moments(2 * cutoff, lo, lo_m);
      gaussian_moments(2 * cutoff, hi, hi_m);
      for (int n = 0; n < levels; ++n)
        for (int m = 0; m < levels; ++m) {
          const auto& w = table.w[static_cast<size_t>(n)][static_cast<size_t>(m)];
          double acc = 0.0;
          for (size_t j = 0; j < w.size(); ++j) {
            const double upper = b == grid.count - 1 ? full[j] : hi_m[j];
            const double lower = b == 0 ? 0.0 : lo_m[j];
            acc += w[j] * (upper - lower);
          }
          bin_ops[static_cast<size_t>(b)](n, m) = acc;
        }
    }
  }

  // Per-sample single-mode POVM blocks M(n, m) = exp(i(n-m)theta) T[bin](n, m),
  // fixed across iterations.
  struct Prepared {
    Eigen::MatrixXcd m1, m2;
  };
  std::vector<Prepared> prepared;
  prepared.reserve(samples.size());
  for (const auto& s : samples) {
    Prepared p;
    p.m1.resize(levels, levels);
    p.m2.resize(levels, levels);
    const auto& t1 = bin_ops[static_cast<size_t>(grid.bin_of(s.x1))];
    const auto& t2 = bin_ops[static_cast<size_t>(grid.bin_of(s.x2))];
    for (int n = 0; n < levels; ++n)
      for (int m = 0; m < levels; ++m) {
        p.m1(n, m) = std::polar(t1(n, m), (n - m) * s.theta1);
        p.m2(n, m) = std::polar(t2(n, m), (n - m) * s.theta2);
      }
    prepared.push_back(std::move(p));
  }

  DensityMatrix shape(2, cutoff);
  const int dim = shape.dim();
  std::vector<int> occ1(static_cast<size_t>(dim)), occ2(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    occ1[static_cast<size_t>(i)] = shape.basis()[static_cast<size_t>(i)][0];
    occ2[static_cast<size_t>(i)] = shape.basis()[static_cast<size_t>(i)][1];
  }

  auto probability_of = [&](const Eigen::MatrixXcd& m, const Prepared& p) {
    cplx prob(0.0, 0.0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        prob += m(j, i) * p.m1(occ1[static_cast<size_t>(i)], occ1[static_cast<size_t>(j)]) *
                p.m2(occ2[static_cast<size_t>(i)], occ2[static_cast<size_t>(j)]);
    return std::max(prob.real(), 1e-300);
  };

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim) / dim;
  std::vector<double> loglik_trace;
  double loglik = -std::numeric_limits<double>::infinity();

  auto log_likelihood_of = [&](const Eigen::MatrixXcd& m) {
    double acc = 0.0;
    for (const auto& p : prepared) acc += std::log(probability_of(m, p));
    return acc;
  };

  int iterations = 0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // R = (1/S) sum_s Pi_s / p_s.
    Eigen::MatrixXcd r_op = Eigen::MatrixXcd::Zero(dim, dim);
    double new_loglik = 0.0;
    for (const auto& p : prepared) {
      const double ps = probability_of(rho, p);
      new_loglik += std::log(ps);
      const double inv = 1.0 / (ps * static_cast<double>(prepared.size()));
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          r_op(i, j) += inv *
                        p.m1(occ1[static_cast<size_t>(i)], occ1[static_cast<size_t>(j)]) *
                        p.m2(occ2[static_cast<size_t>(i)], occ2[static_cast<size_t>(j)]);
    }
    r_op = 0.5 * (r_op + r_op.adjoint()).eval();

    if (iter > 0) {
      const double gain = new_loglik - loglik;
      if (gain < options.tolerance * std::abs(loglik)) {
        loglik = new_loglik;
        loglik_trace.push_back(new_loglik);
        ++iterations;
        break;
      }
    }
    loglik = new_loglik;
    loglik_trace.push_back(new_loglik);
    ++iterations;

    Eigen::MatrixXcd candidate = r_op * rho * r_op;
    candidate /= candidate.trace().real();
    candidate = 0.5 * (candidate + candidate.adjoint()).eval();
    // Dilution fallback keeps the likelihood non-decreasing.
    double mix = 1.0;
    while (log_likelihood_of(candidate) < loglik - 1e-12 && mix > 1e-6) {
      mix *= 0.5;
      const Eigen::MatrixXcd blended =
          Eigen::MatrixXcd::Identity(dim, dim) + mix * r_op;
      candidate = blended * rho * blended.adjoint();
      candidate /= candidate.trace().real();
      candidate = 0.5 * (candidate + candidate.adjoint()).eval();
    }
    rho = candidate;
  }

  TomoResult result{DensityMatrix(2, cutoff)};
  result.rho.matrix() = rho;
  result.iterations = iterations;
  result.log_likelihood = std::move(loglik_trace);
  result.photon_number_dist = result.rho.photon_number_distribution();
  return result;
}

QutritReport qutrit_diagnostics(const DensityMatrix& rho,
                                const std::vector<cplx>& target_qutrit) {
  check_two_modes(rho);
  if (target_qutrit.size() != 3)
    throw std::invalid_argument("qutrit target needs 3 coefficients");
  const auto rho_n = rho.normalized();

  const std::vector<Occupation> block_basis{Occupation{2, 0}, Occupation{1, 1},
                                            Occupation{0, 2}};
  Eigen::Matrix3cd block = Eigen::Matrix3cd::Zero();
  for (int i = 0; i < 3; ++i) {
    const int bi = rho_n.basis_index(block_basis[static_cast<size_t>(i)]);
    if (bi < 0) throw std::invalid_argument("state cutoff below two photons");
    for (int j = 0; j < 3; ++j) {
      const int bj = rho_n.basis_index(block_basis[static_cast<size_t>(j)]);
      block(i, j) = rho_n.matrix()(bi, bj);
    }
  }

  QutritReport report;
  report.block_weight = block.trace().real();
  if (report.block_weight <= 0.0)
    throw std::domain_error("no population in the two-photon subspace");
  block /= report.block_weight;
  report.block.assign(block.data(), block.data() + 9);
  // Eigen stores column-major; expose row-major.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      report.block[static_cast<size_t>(3 * i + j)] = block(i, j);

  Eigen::Vector3cd target;
  double target_norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    target(i) = target_qutrit[static_cast<size_t>(i)];
    target_norm += std::norm(target_qutrit[static_cast<size_t>(i)]);
  }
  if (target_norm == 0.0) throw std::invalid_argument("zero qutrit target");
  target /= std::sqrt(target_norm);
  report.subspace_fidelity = (target.adjoint() * block * target)(0).real();
  report.photon_number_dist = rho_n.photon_number_distribution();
  return report;
}

}  // namespace qforge::tomo
