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

#include "qforge/factor.hpp"
#include "qforge/rng.hpp"
#include "qforge/sample.hpp"

using namespace qforge;
using namespace qforge::sample;
using factor::Factor;
using factor::FactorPlan;
using fock::cplx;

namespace {

FactorPlan balanced_qutrit_plan() {
  const double a = 1.0 / std::sqrt(3.0);
  return factor::design_plan(factor::TargetState::from_amplitudes({a, a, a}));
}

FactorPlan plan_from_factors(std::vector<Factor> factors) {
  FactorPlan plan;
  plan.factors = std::move(factors);
  return plan;
}

}  // namespace

TEST_CASE("one shot gives a count in {0, 1}") {
  SampleConfig config;
  config.shots = 1;
  config.q = 0.3;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
    config.seed = seed;
    auto report = sample_events(balanced_qutrit_plan(), config);
    CHECK((report.successes == 0 || report.successes == 1));
    CHECK(report.empirical_rate >= report.wilson_low);
    CHECK(report.empirical_rate <= report.wilson_high);
  }
}

TEST_CASE("analytic column matches the closed-form rate for the PNR pattern") {
  SampleConfig config;
  config.shots = 1;
  config.q = 0.1;
  auto plan = balanced_qutrit_plan();
  auto report = sample_events(plan, config);
  const double expected =
      herald::heralded_state_analytic(plan, config.q).success_probability;
  CHECK(report.analytic_rate == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("empirical rate is statistically consistent with the exact rate") {
  auto plan = balanced_qutrit_plan();
  SampleConfig config;
  config.q = 0.2;  // rate ~5.5e-4 keeps the expected counts useful
  config.shots = 100000;
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    config.seed = seed;
    auto report = sample_events(plan, config);
    if (report.analytic_rate >= report.wilson_low &&
        report.analytic_rate <= report.wilson_high)
      ++covered;
  }
  CHECK(covered >= 45);
}

TEST_CASE("reports are deterministic per seed") {
  SampleConfig config;
  config.shots = 20000;
  config.q = 0.2;
  config.seed = 424242;
  auto a = sample_events(balanced_qutrit_plan(), config);
  auto b = sample_events(balanced_qutrit_plan(), config);
  CHECK(a.successes == b.successes);
  CHECK(a.empirical_rate == b.empirical_rate);
  CHECK(a.wilson_low == b.wilson_low);
  CHECK(a.wilson_high == b.wilson_high);
  CHECK(a.analytic_rate == b.analytic_rate);
}

TEST_CASE("parallel plans herald twice as often as orthogonal ones") {
  // The bias shows up cleanly when sampling within the two-pair sector.
  const cplx t(1.0, 0.0), r(0.0, 0.0);
  auto parallel = plan_from_factors({Factor{t, r}, Factor{t, r}});
  auto orthogonal = plan_from_factors(
      {Factor{t, r}, Factor{cplx(0.0, 0.0), cplx(1.0, 0.0)}});

  SampleConfig config;
  config.q = 0.05;
  config.shots = 200000;
  config.seed = 7;
  config.condition_total = 2;
  auto rate_par = sample_events(parallel, config);
  auto rate_orth = sample_events(orthogonal, config);
  const double ratio = rate_par.empirical_rate / rate_orth.empirical_rate;
  CHECK(ratio > 1.9);
  CHECK(ratio < 2.1);
  // The exact conditional rates carry the same factor of two.
  CHECK(rate_par.analytic_rate / rate_orth.analytic_rate ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("state dependence of the event rate at equal q") {
  // Unconditioned analytic rates: parallel-factor plans beat orthogonal ones.
  const cplx t(1.0, 0.0), r(0.0, 0.0);
  auto parallel = plan_from_factors({Factor{t, r}, Factor{t, r}});
  auto orthogonal = plan_from_factors(
      {Factor{t, r}, Factor{cplx(0.0, 0.0), cplx(1.0, 0.0)}});
  SampleConfig config;
  config.shots = 1;
  config.q = 0.1;
  const double par = sample_events(parallel, config).analytic_rate;
  const double orth = sample_events(orthogonal, config).analytic_rate;
  CHECK(par > orth);
  CHECK(par / orth == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("threshold detector sampling agrees with its exact rate") {
  auto plan = balanced_qutrit_plan();
  SampleConfig config;
  config.q = 0.25;
  config.shots = 200000;
  config.seed = 31;
  config.detector.kind = herald::DetectorKind::Threshold;
  auto report = sample_events(plan, config);
  const double sim =
      herald::simulate_herald(
          herald::build_herald_circuit(plan, config.q,
                                       herald::standard_pattern(2, herald::DetectorKind::Threshold),
                                       plan.n() + 3))
          .success_probability;
  CHECK(report.analytic_rate == doctest::Approx(sim).epsilon(1e-9));
  CHECK(report.analytic_rate >= report.wilson_low);
  CHECK(report.analytic_rate <= report.wilson_high);
}

TEST_CASE("sweep_q returns one report per grid point with the analytic curve") {
  auto plan = balanced_qutrit_plan();
  SampleConfig base;
  base.seed = 11;
  const std::vector<double> grid{0.05, 0.1, 0.2};
  auto table = sweep_q(plan, grid, 2000, base);
  REQUIRE(table.size() == 3);
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(table[i].q == grid[i]);
    const double expected =
        herald::heralded_state_analytic(plan, grid[i]).success_probability;
    CHECK(table[i].analytic_rate == doctest::Approx(expected).epsilon(1e-9));
  }
  // Quartic small-q rise: P(0.1)/P(0.05) ~ 16.
  CHECK(table[1].analytic_rate / table[0].analytic_rate ==
        doctest::Approx(16.0).epsilon(0.02));
  // A one-point grid is sample_events.
  SampleConfig single = base;
  single.q = 0.1;
  single.shots = 2000;
  single.seed = derive_seed(base.seed, 0);
  auto direct = sample_events(plan, single);
  auto one = sweep_q(plan, {0.1}, 2000, base);
  CHECK(one[0].successes == direct.successes);
}

TEST_CASE("NOON analytic curves are ordered by leading power at small q") {
  const double q = 0.05;
  double previous = 1.0;
  for (int N : {2, 3, 4, 5}) {
    const double p = herald::noon_success_probability(N, q).probability;
    CHECK(p < previous);
    previous = p;
  }
}

TEST_CASE("invalid configs are rejected") {
  SampleConfig config;
  config.shots = 0;
  CHECK_THROWS_AS(sample_events(balanced_qutrit_plan(), config),
                  std::invalid_argument);
  config.shots = 1;
  config.q = 1.5;
  CHECK_THROWS_AS(sample_events(balanced_qutrit_plan(), config),
                  std::invalid_argument);
}
