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

#include "qforge/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qforge/rng.hpp"

namespace qforge::factor {

using fock::Occupation;
using fock::sqrt_factorial;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

cplx least_squares_scale(const std::vector<cplx>& model,
                         const std::vector<cplx>& target) {
  cplx num(0.0, 0.0);
  double den = 0.0;
  for (size_t i = 0; i < model.size(); ++i) {
    num += std::conj(model[i]) * target[i];
    den += std::norm(model[i]);
  }
  if (den == 0.0) throw std::domain_error("cannot scale a zero model");
  return num / den;
}

}  // namespace

void TargetState::validate() const {
  if (n < 0) throw std::invalid_argument("total photon number must be >= 0");
  if (coeffs.size() != static_cast<size_t>(n) + 1)
    throw std::invalid_argument("coefficient vector must have length n+1");
  double norm_sq = 0.0;
  for (const cplx& c : coeffs) norm_sq += std::norm(c);
  if (std::abs(norm_sq - 1.0) > 1e-10)
    throw std::invalid_argument("target coefficients must have unit norm");
}

TargetState TargetState::from_amplitudes(std::vector<cplx> amps) {
  if (amps.empty()) throw std::invalid_argument("empty amplitude vector");
  double norm_sq = 0.0;
  for (const cplx& c : amps) norm_sq += std::norm(c);
  if (norm_sq == 0.0) throw AllZeroError("all target amplitudes are zero");
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (cplx& c : amps) c *= inv;
  TargetState t{static_cast<int>(amps.size()) - 1, std::move(amps)};
  return t;
}

fock::StateVector TargetState::to_state() const {
  validate();
  fock::StateVector s(2, n);
  for (int k = 0; k <= n; ++k)
    s.add_term(Occupation{n - k, k}, coeffs[static_cast<size_t>(k)]);
  return s;
}

void FactorPlan::validate() const {
  for (const Factor& f : factors) {
    if (std::abs(std::norm(f.t) + std::norm(f.r) - 1.0) > 1e-12)
      throw std::invalid_argument("factor coefficients not normalized");
  }
}

std::vector<cplx> build_polynomial(const TargetState& target) {
  target.validate();
  const int n = target.n;
  std::vector<cplx> poly(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j)
    poly[static_cast<size_t>(j)] =
        target.coeffs[static_cast<size_t>(n - j)] /
        (sqrt_factorial(j) * sqrt_factorial(n - j));
  return poly;
}

namespace {

cplx poly_eval(const std::vector<cplx>& poly, cplx z) {
  cplx acc(0.0, 0.0);
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<cplx> poly_derivative(const std::vector<cplx>& poly) {
  std::vector<cplx> d;
  d.reserve(poly.size() - 1);
  for (size_t j = 1; j < poly.size(); ++j)
    d.push_back(static_cast<double>(j) * poly[j]);
  return d;
}

// Aberth-Ehrlich simultaneous iteration. `poly` has nonzero leading and
// constant coefficients.
std::vector<cplx> aberth_roots(const std::vector<cplx>& poly, double tolerance,
                               int max_iterations, double* worst_residual) {
  const int deg = static_cast<int>(poly.size()) - 1;
  const auto deriv = poly_derivative(poly);

  const cplx lead = poly.back();
  const cplx centroid = -poly[static_cast<size_t>(deg) - 1] /
                        (static_cast<double>(deg) * lead);
  double radius = std::pow(std::abs(poly.front() / lead), 1.0 / deg);
  if (!std::isfinite(radius) || radius <= 0.0) radius = 1.0;

  std::vector<cplx> z(static_cast<size_t>(deg));
  for (int k = 0; k < deg; ++k)
    z[static_cast<size_t>(k)] =
        centroid + std::polar(radius, 2.0 * kPi * k / deg + 0.4);

  std::vector<cplx> values(static_cast<size_t>(deg));
  for (int iter = 0; iter < max_iterations; ++iter) {
    double worst = 0.0;
    for (int k = 0; k < deg; ++k)
      worst = std::max(worst, std::abs(values[static_cast<size_t>(k)] =
                                           poly_eval(poly, z[static_cast<size_t>(k)])));
    *worst_residual = worst;
    if (worst <= tolerance) return z;

    for (int k = 0; k < deg; ++k) {
      const cplx zk = z[static_cast<size_t>(k)];
      const cplx pk = values[static_cast<size_t>(k)];
      if (std::abs(pk) <= tolerance) continue;
      cplx dk = poly_eval(deriv, zk);
      if (dk == cplx(0.0, 0.0)) {
        z[static_cast<size_t>(k)] += cplx(1e-8 * (1.0 + radius), 1e-8);
        continue;
      }
      const cplx newton = pk / dk;
      cplx repulsion(0.0, 0.0);
      for (int j = 0; j < deg; ++j) {
        if (j == k) continue;
        cplx diff = zk - z[static_cast<size_t>(j)];
        if (diff == cplx(0.0, 0.0)) diff = cplx(1e-12, 1e-12);
        repulsion += cplx(1.0, 0.0) / diff;
      }
      const cplx denom = cplx(1.0, 0.0) - newton * repulsion;
      const cplx step = denom == cplx(0.0, 0.0) ? newton : newton / denom;
      z[static_cast<size_t>(k)] = zk - step;
    }
  }
  double worst = 0.0;
  for (int k = 0; k < deg; ++k)
    worst = std::max(worst, std::abs(poly_eval(poly, z[static_cast<size_t>(k)])));
  *worst_residual = worst;
  return z;
}

void newton_polish(const std::vector<cplx>& poly, std::vector<cplx>& roots) {
  const auto deriv = poly_derivative(poly);
  for (cplx& z : roots) {
    cplx best = z;
    double best_val = std::abs(poly_eval(poly, z));
    for (int iter = 0; iter < 6; ++iter) {
      const cplx d = poly_eval(deriv, z);
      if (d == cplx(0.0, 0.0)) break;
      z -= poly_eval(poly, z) / d;
      const double val = std::abs(poly_eval(poly, z));
      if (val < best_val) {
        best_val = val;
        best = z;
      }
    }
    z = best;
  }
}

}  // namespace

RootResult find_roots(const std::vector<cplx>& poly, int max_iterations) {
  double max_coeff = 0.0;
  for (const cplx& c : poly) max_coeff = std::max(max_coeff, std::abs(c));
  if (max_coeff == 0.0) throw AllZeroError("polynomial has no nonzero coefficient");
  const double zero_threshold = 1e-14 * max_coeff;

  // Leading zeros (high powers) become pure mode-2 factors.
  int hi = static_cast<int>(poly.size()) - 1;
  while (hi > 0 && std::abs(poly[static_cast<size_t>(hi)]) <= zero_threshold) --hi;
  RootResult result;
  result.degree_deficit = static_cast<int>(poly.size()) - 1 - hi;

  // Trailing zeros are exact roots at the origin.
  int lo = 0;
  while (lo < hi && std::abs(poly[static_cast<size_t>(lo)]) <= zero_threshold) ++lo;
  for (int i = 0; i < lo; ++i) result.roots.push_back(cplx(0.0, 0.0));

  std::vector<cplx> core(poly.begin() + lo, poly.begin() + hi + 1);
  const int deg = static_cast<int>(core.size()) - 1;
  if (deg == 0) return result;

  if (deg == 1) {
    result.roots.push_back(-core[0] / core[1]);
    result.worst_residual = 0.0;
    return result;
  }
  if (deg == 2) {
    // Stable quadratic: pick the sqrt branch that avoids cancellation in -b -+ s.
    const cplx a = core[2], b = core[1], c = core[0];
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    const cplx s = (std::real(std::conj(b) * disc) >= 0.0) ? disc : -disc;
    const cplx q = -0.5 * (b + s);
    // q != 0 because the constant coefficient is nonzero after stripping.
    result.roots.push_back(q / a);
    result.roots.push_back(c / q);
    result.worst_residual = std::max(std::abs(poly_eval(core, result.roots[result.roots.size() - 2])),
                                     std::abs(poly_eval(core, result.roots.back())));
    return result;
  }

  const double tolerance = 1e-12 * max_coeff;
  double worst = 0.0;
  auto roots = aberth_roots(core, tolerance, max_iterations, &worst);
  newton_polish(core, roots);
  worst = 0.0;
  double worst_backward = 0.0;
  for (const cplx& z : roots) {
    const double residual = std::abs(poly_eval(core, z));
    worst = std::max(worst, residual);
    // Scale-aware acceptance: |p(z)| measured against the evaluation
    // magnitude sum_j |a_j||z|^j, which is the attainable floor.
    double scale = 0.0;
    double zpow = 1.0;
    const double zmag = std::abs(z);
    for (const cplx& a : core) {
      scale += std::abs(a) * zpow;
      zpow *= zmag;
    }
    worst_backward = std::max(worst_backward, residual / scale);
  }
  result.worst_residual = worst;
  if (worst > tolerance && worst_backward > 1e-11)
    throw NonConvergenceError("root finder did not reach the residual target",
                              worst);
  result.roots.insert(result.roots.end(), roots.begin(), roots.end());
  return result;
}

std::vector<cplx> expand_amplitudes(const std::vector<Factor>& factors) {
  // q[k] tracks the adag_1^(n-k) adag_2^k coefficient of the product.
  std::vector<cplx> q{cplx(1.0, 0.0)};
  for (const Factor& f : factors) {
    std::vector<cplx> next(q.size() + 1, cplx(0.0, 0.0));
    for (size_t k = 0; k < q.size(); ++k) {
      next[k] += f.t * q[k];
      next[k + 1] += f.r * q[k];
    }
    q = std::move(next);
  }
  const int n = static_cast<int>(q.size()) - 1;
  for (int k = 0; k <= n; ++k)
    q[static_cast<size_t>(k)] *= sqrt_factorial(n - k) * sqrt_factorial(k);
  return q;
}

double plan_norm_residual(const FactorPlan& plan) {
  double norm_sq = 0.0;
  for (const cplx& a : expand_amplitudes(plan.factors))
    norm_sq += std::norm(plan.scale * a);
  return std::abs(std::sqrt(norm_sq) - 1.0);
}

namespace {

// Canonical global phase, matching the fock reporting convention: the first
// nonzero amplitude in lexicographic occupation order -- the largest mode-2
// count -- is made real and positive.
void canonicalize_phase(std::vector<cplx>& amps) {
  for (auto it = amps.rbegin(); it != amps.rend(); ++it) {
    const double mag = std::abs(*it);
    if (mag > 0.0) {
      const cplx phase = std::conj(*it) / mag;
      for (cplx& c : amps) c *= phase;
      return;
    }
  }
}

}  // namespace

TargetState expand_plan(const FactorPlan& plan) {
  plan.validate();
  auto amps = expand_amplitudes(plan.factors);
  double norm_sq = 0.0;
  for (const cplx& c : amps) norm_sq += std::norm(c);
  if (norm_sq == 0.0) throw std::domain_error("plan expands to the zero state");
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (cplx& c : amps) c *= inv;
  canonicalize_phase(amps);
  return TargetState{static_cast<int>(amps.size()) - 1, std::move(amps)};
}

FactorPlan roots_to_plan(const std::vector<cplx>& roots, int degree_deficit,
                         const TargetState& target) {
  target.validate();
  if (static_cast<int>(roots.size()) + degree_deficit != target.n)
    throw std::invalid_argument("root count plus deficit must equal n");

  std::vector<cplx> sorted_roots = roots;
  std::sort(sorted_roots.begin(), sorted_roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  FactorPlan plan;
  plan.factors.reserve(static_cast<size_t>(target.n));
  for (const cplx& rho : sorted_roots) {
    const double t = 1.0 / std::sqrt(1.0 + std::norm(rho));
    plan.factors.push_back(Factor{cplx(t, 0.0), -rho * t});
  }
  for (int i = 0; i < degree_deficit; ++i)
    plan.factors.push_back(Factor{cplx(0.0, 0.0), cplx(1.0, 0.0)});

  const auto model = expand_amplitudes(plan.factors);
  plan.scale = least_squares_scale(model, target.coeffs);
  double residual_sq = 0.0;
  for (size_t k = 0; k < model.size(); ++k)
    residual_sq += std::norm(plan.scale * model[k] - target.coeffs[k]);
  const double residual = std::sqrt(residual_sq);
  if (residual > 1e-9)
    throw RoundtripError("plan does not reproduce the target", residual);
  return plan;
}

FactorPlan design_plan(const TargetState& target) {
  const auto poly = build_polynomial(target);
  const auto roots = find_roots(poly);
  return roots_to_plan(roots.roots, roots.degree_deficit, target);
}

TargetState loss_code_target(cplx alpha, cplx beta) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<cplx> amps{alpha * inv_sqrt2, cplx(0.0, 0.0), beta,
                         cplx(0.0, 0.0), alpha * inv_sqrt2};
  return TargetState::from_amplitudes(std::move(amps));
}

FactorPlan loss_code_plan(cplx alpha, cplx beta) {
  if (alpha == cplx(0.0, 0.0) || beta == cplx(0.0, 0.0))
    throw ZeroAmplitudeError(
        "loss-code closed form assumes alpha, beta != 0; use the generic "
        "pipeline for the edge cases");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
    throw std::invalid_argument("logical amplitudes must be normalized");

  // Quartic x^4 + (2 sqrt3 beta/alpha) x^2 y^2 + y^4 factors through the
  // quadratic in x^2/y^2; the four roots come in +- pairs.
  const cplx ratio = std::sqrt(3.0) * beta / alpha;
  const cplx inner = std::sqrt(ratio * ratio - 1.0);
  const cplx s1 = std::sqrt(-ratio + inner);
  const cplx s2 = std::sqrt(-ratio - inner);

  const std::vector<cplx> roots{s1, -s1, s2, -s2};
  return roots_to_plan(roots, 0, loss_code_target(alpha, beta));
}

FactorPlan noon_plan(int N) {
  if (N < 1) throw std::invalid_argument("NOON order must be >= 1");
  std::vector<cplx> roots;
  roots.reserve(static_cast<size_t>(N));
  // Roots of z^N + 1: zeta_{2N} zeta_N^k.
  for (int k = 0; k < N; ++k)
    roots.push_back(std::polar(1.0, kPi * (2.0 * k + 1.0) / N));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<cplx> amps(static_cast<size_t>(N) + 1, cplx(0.0, 0.0));
  amps.front() = amps.back() = cplx(inv_sqrt2, 0.0);
  return roots_to_plan(roots, 0, TargetState{N, std::move(amps)});
}

FactorPlan general_two_photon_plan(cplx alpha, cplx beta, cplx gamma) {
  if (alpha == cplx(0.0, 0.0))
    throw ZeroAmplitudeError(
        "two-photon closed form assumes alpha != 0; use the generic pipeline");
  const double sqrt2 = std::sqrt(2.0);
  const cplx inner = std::sqrt(gamma * gamma / (2.0 * alpha * alpha) - beta / alpha);
  const cplx base = -gamma / (sqrt2 * alpha);
  const std::vector<cplx> roots{base + inner, base - inner};
  // Note the coefficient order: beta multiplies |02>, gamma multiplies |11>.
  auto target = TargetState::from_amplitudes({alpha, gamma, beta});
  return roots_to_plan(roots, 0, target);
}

void MultivariateTarget::validate() const {
  if (modes < 1) throw std::invalid_argument("mode count must be >= 1");
  if (total_photons < 1) throw std::invalid_argument("total photons must be >= 1");
  double norm_sq = 0.0;
  for (const auto& [occ, amp] : coeffs) {
    if (occ.modes() != modes)
      throw std::invalid_argument("occupation mode count mismatch");
    const int total = occ.total();
    if (up_to_total ? total > total_photons : total != total_photons)
      throw std::invalid_argument("occupation total violates the photon budget");
    norm_sq += std::norm(amp);
  }
  if (std::abs(norm_sq - 1.0) > 1e-10)
    throw std::invalid_argument("multivariate target must have unit norm");
}

namespace {

// Dense enumeration of degree-n monomials over `vars` variables; exponents in
// lexicographic order. The fit works on this fixed layout.
struct MonomialSpace {
  int vars;
  int degree;
  std::vector<std::vector<int>> exponents;
  std::map<std::vector<int>, int> index;

  MonomialSpace(int vars, int degree) : vars(vars), degree(degree) {
    std::vector<int> e(static_cast<size_t>(vars), 0);
    build(e, 0, degree);
    for (size_t i = 0; i < exponents.size(); ++i)
      index.emplace(exponents[i], static_cast<int>(i));
  }

  void build(std::vector<int>& e, int var, int remaining) {
    if (var == vars - 1) {
      e[static_cast<size_t>(var)] = remaining;
      exponents.push_back(e);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      e[static_cast<size_t>(var)] = k;
      build(e, var + 1, remaining - k);
    }
    e[static_cast<size_t>(var)] = 0;
  }
};

// Coefficients of prod_k (sum_j d[k][j] z_j) on the degree-n monomial space.
std::vector<cplx> product_coefficients(const MonomialSpace& space,
                                       const std::vector<std::vector<cplx>>& d,
                                       int skip_factor = -1) {
  const int vars = space.vars;
  std::map<std::vector<int>, cplx> poly{{std::vector<int>(static_cast<size_t>(vars), 0),
                                         cplx(1.0, 0.0)}};
  for (size_t k = 0; k < d.size(); ++k) {
    if (static_cast<int>(k) == skip_factor) continue;
    std::map<std::vector<int>, cplx> next;
    for (const auto& [exp, coeff] : poly) {
      for (int j = 0; j < vars; ++j) {
        if (d[k][static_cast<size_t>(j)] == cplx(0.0, 0.0)) continue;
        std::vector<int> bumped = exp;
        ++bumped[static_cast<size_t>(j)];
        next[bumped] += coeff * d[k][static_cast<size_t>(j)];
      }
    }
    poly = std::move(next);
  }
  const int degree = skip_factor < 0 ? space.degree : space.degree - 1;
  std::vector<cplx> out;
  if (skip_factor < 0) {
    out.assign(space.exponents.size(), cplx(0.0, 0.0));
    for (const auto& [exp, coeff] : poly) out[static_cast<size_t>(space.index.at(exp))] = coeff;
  } else {
    // Degree n-1 coefficients, keyed by their own enumeration.
    MonomialSpace sub(space.vars, degree);
    out.assign(sub.exponents.size(), cplx(0.0, 0.0));
    for (const auto& [exp, coeff] : poly) out[static_cast<size_t>(sub.index.at(exp))] = coeff;
  }
  return out;
}

}  // namespace

std::map<Occupation, cplx> expand_multivariate(
    const std::vector<std::vector<cplx>>& factors, int modes,
    bool includes_constant) {
  const int vars = modes + (includes_constant ? 1 : 0);
  const int n = static_cast<int>(factors.size());
  MonomialSpace space(vars, n);
  const auto poly = product_coefficients(space, factors);
  std::map<Occupation, cplx> out;
  for (size_t i = 0; i < space.exponents.size(); ++i) {
    if (poly[i] == cplx(0.0, 0.0)) continue;
    std::vector<int> occ(space.exponents[i].begin(),
                         space.exponents[i].begin() + modes);
    double weight = 1.0;
    for (int j = 0; j < modes; ++j) weight *= sqrt_factorial(occ[static_cast<size_t>(j)]);
    out[Occupation(occ)] += poly[i] * weight;
  }
  return out;
}

FitResult multivariate_factor_fit(const MultivariateTarget& target,
                                  const FitOptions& options) {
  target.validate();
  const int n = target.total_photons;
  const int vars = target.modes + (target.up_to_total ? 1 : 0);
  MonomialSpace space(vars, n);
  MonomialSpace sub(vars, n - 1);
  const size_t dim = space.exponents.size();

  // Target amplitudes and creation weights per monomial. The scalar slack
  // variable of an up-to form carries no factorial weight.
  std::vector<cplx> target_vec(dim, cplx(0.0, 0.0));
  std::vector<double> weights(dim, 1.0);
  for (size_t i = 0; i < dim; ++i) {
    const auto& exp = space.exponents[i];
    double w = 1.0;
    for (int j = 0; j < target.modes; ++j) w *= sqrt_factorial(exp[static_cast<size_t>(j)]);
    weights[i] = w;
  }
  for (const auto& [occ, amp] : target.coeffs) {
    std::vector<int> exp = occ.to_vector();
    if (target.up_to_total) exp.push_back(n - occ.total());
    target_vec[static_cast<size_t>(space.index.at(exp))] = amp;
  }

  auto amplitudes_of = [&](const std::vector<std::vector<cplx>>& d) {
    auto poly = product_coefficients(space, d);
    for (size_t i = 0; i < dim; ++i) poly[i] *= weights[i];
    return poly;
  };
  auto sse_of = [&](const std::vector<cplx>& amps) {
    double sse = 0.0;
    for (size_t i = 0; i < dim; ++i) sse += std::norm(amps[i] - target_vec[i]);
    return sse;
  };

  FitResult best;
  best.residual = std::numeric_limits<double>::infinity();
  best.start_residuals.reserve(static_cast<size_t>(options.starts));

  for (int start = 0; start < options.starts; ++start) {
    SplitMix64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(start)));
    std::vector<std::vector<cplx>> d(static_cast<size_t>(n),
                                     std::vector<cplx>(static_cast<size_t>(vars)));
    const double init_scale = 1.0 / std::sqrt(2.0 * vars);
    for (auto& row : d)
      for (auto& v : row) v = rng.next_complex_gaussian() * init_scale;

    auto amps = amplitudes_of(d);
    double sse = sse_of(amps);
    double step = 0.25;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
      // Wirtinger gradient: g[k][j] = sum_i conj(w_i C^(-k)_{i - e_j}) E_i.
      std::vector<cplx> error(dim);
      for (size_t i = 0; i < dim; ++i) error[i] = amps[i] - target_vec[i];

      std::vector<std::vector<cplx>> grad(static_cast<size_t>(n),
                                          std::vector<cplx>(static_cast<size_t>(vars),
                                                            cplx(0.0, 0.0)));
      double grad_norm_sq = 0.0;
      for (int k = 0; k < n; ++k) {
        const auto partial = product_coefficients(space, d, k);
        for (size_t i = 0; i < dim; ++i) {
          const auto& exp = space.exponents[i];
          for (int j = 0; j < vars; ++j) {
            if (exp[static_cast<size_t>(j)] == 0) continue;
            std::vector<int> reduced = exp;
            --reduced[static_cast<size_t>(j)];
            const cplx coeff = partial[static_cast<size_t>(sub.index.at(reduced))];
            grad[static_cast<size_t>(k)][static_cast<size_t>(j)] +=
                std::conj(weights[i] * coeff) * error[i];
          }
        }
        for (int j = 0; j < vars; ++j)
          grad_norm_sq += std::norm(grad[static_cast<size_t>(k)][static_cast<size_t>(j)]);
      }
      if (grad_norm_sq < 1e-28 || sse < 1e-22) break;

      // Backtracking line search (Armijo).
      bool moved = false;
      for (int half = 0; half < 40; ++half) {
        std::vector<std::vector<cplx>> trial = d;
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < vars; ++j)
            trial[static_cast<size_t>(k)][static_cast<size_t>(j)] -=
                step * grad[static_cast<size_t>(k)][static_cast<size_t>(j)];
        auto trial_amps = amplitudes_of(trial);
        const double trial_sse = sse_of(trial_amps);
        if (trial_sse <= sse - 1e-4 * step * grad_norm_sq) {
          d = std::move(trial);
          amps = std::move(trial_amps);
          sse = trial_sse;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      step = std::min(step * 1.6, 4.0);
    }

    const double residual = std::sqrt(sse);
    best.start_residuals.push_back(residual);
    if (residual < best.residual) {
      best.residual = residual;
      best.factors = d;
    }
  }
  return best;
}

}  // namespace qforge::factor
