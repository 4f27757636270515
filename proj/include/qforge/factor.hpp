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
#include <map>
#include <stdexcept>
#include <vector>

#include "qforge/fock.hpp"

namespace qforge::factor {

using fock::cplx;

// Two-mode target sum_k coeffs[k] |n-k, k>; a qudit of dimension d = n+1.
struct TargetState {
  int n = 0;
  std::vector<cplx> coeffs;  // length n+1, unit norm; index k = photons in mode 2

  void validate() const;  // throws std::invalid_argument on violation
  static TargetState from_amplitudes(std::vector<cplx> amps);  // normalizes
  fock::StateVector to_state() const;
};

// One linear creation factor t adag_1 + r adag_2, normalized |t|^2+|r|^2 = 1.
struct Factor {
  cplx t;
  cplx r;
};

// Synthesized recipe: target amplitudes = scale * expansion of the factor
// product (the roundtrip invariant, enforced to 1e-9 at construction).
struct FactorPlan {
  std::vector<Factor> factors;
  cplx scale{1.0, 0.0};

  int n() const { return static_cast<int>(factors.size()); }
  void validate() const;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), worst_residual(residual) {}
  double worst_residual;
};

class AllZeroError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RoundtripError : public std::runtime_error {
 public:
  RoundtripError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

class ZeroAmplitudeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Polynomial coefficients, ascending powers: poly[j] is the z^j coefficient
// coeffs[n-j] / sqrt(j! (n-j)!).
std::vector<cplx> build_polynomial(const TargetState& target);

struct RootResult {
  std::vector<cplx> roots;
  int degree_deficit = 0;   // stripped leading zeros; each is a (0,1) factor
  double worst_residual = 0.0;
};

// Strips leading/trailing zero coefficients exactly, then solves with the
// closed-form quadratic (degree <= 2) or simultaneous Aberth iteration from
// perturbed-circle starts followed by Newton polish. Converged when every
// |p(z_i)| <= 1e-12 * max|coeff|.
RootResult find_roots(const std::vector<cplx>& poly, int max_iterations = 500);

// Root rho -> factor (1, -rho)/sqrt(1+|rho|^2); deficit -> (0, 1) factors,
// appended last. Non-deficit factors sorted by (Re rho, Im rho). The scale is
// the least-squares constant matching the target; residuals above 1e-9 throw
// RoundtripError.
FactorPlan roots_to_plan(const std::vector<cplx>& roots, int degree_deficit,
                         const TargetState& target);

// Full pipeline target -> polynomial -> roots -> plan.
FactorPlan design_plan(const TargetState& target);

// Amplitudes of prod_k (t_k adag_1 + r_k adag_2)|00>, index k as in
// TargetState (includes the sqrt((n-k)! k!) weights). Unnormalized.
std::vector<cplx> expand_amplitudes(const std::vector<Factor>& factors);

// | ||scale * expansion|| - 1 |: zero for any plan satisfying the roundtrip
// invariant against a unit-norm target.
double plan_norm_residual(const FactorPlan& plan);

// Normalized expansion with the canonical global phase (first nonzero
// amplitude in lexicographic occupation order real positive).
TargetState expand_plan(const FactorPlan& plan);

// alpha (|40>+|04>)/sqrt2 + beta |22> as a TargetState (n = 4).
TargetState loss_code_target(cplx alpha, cplx beta);

// Closed-form 4-factor plan for the one-photon-loss code. Requires
// alpha, beta != 0 (ZeroAmplitudeError otherwise; the generic pipeline
// handles those edges).
FactorPlan loss_code_plan(cplx alpha, cplx beta);

// N factors (1/sqrt2, -zeta_{2N} zeta_N^k / sqrt2) producing (|N0>+|0N>)/sqrt2.
FactorPlan noon_plan(int N);

// Closed-form plan for alpha|20> + beta|02> + gamma|11>. Requires alpha != 0
// (ZeroAmplitudeError; route through the generic pipeline instead).
FactorPlan general_two_photon_plan(cplx alpha, cplx beta, cplx gamma);

// Multimode target: amplitudes over occupations of `modes` modes summing to
// exactly `total_photons`, or to at most that when `up_to_total` is set (the
// displacement-assisted form; equivalent to one extra mode).
struct MultivariateTarget {
  int modes = 0;
  int total_photons = 0;
  bool up_to_total = false;
  std::map<fock::Occupation, cplx> coeffs;

  void validate() const;
};

struct FitOptions {
  int starts = 32;
  int max_iterations = 2000;
  std::uint64_t seed = 20260810;
};

struct FitResult {
  // factors[k][j]: coefficient of adag_{j+1} in factor k; when the target is
  // an up-to form the last column is the scalar (displacement) term.
  std::vector<std::vector<cplx>> factors;
  double residual = 0.0;               // Euclidean norm of amplitude mismatch
  std::vector<double> start_residuals;  // per-start best, index = start
};

// Least-squares search for a product of linear creation factors matching the
// target amplitudes: multi-start gradient descent with backtracking line
// search. A residual <= 1e-8 certifies factorizability at desk scale; a
// residual bounded away from zero across all starts is evidence (not proof)
// that no factorization exists.
FitResult multivariate_factor_fit(const MultivariateTarget& target,
                                  const FitOptions& options = {});

// Amplitudes of the factor product, for checking recovered factors.
std::map<fock::Occupation, cplx> expand_multivariate(
    const std::vector<std::vector<cplx>>& factors, int modes,
    bool includes_constant);

}  // namespace qforge::factor
