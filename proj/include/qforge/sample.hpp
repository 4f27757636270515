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
#include <optional>
#include <vector>

#include "qforge/herald.hpp"

namespace qforge::sample {

struct SampleConfig {
  long long shots = 1;
  std::uint64_t seed = 1;
  double q = 0.1;
  herald::DetectorModel detector;  // empty pattern = standard for the plan
  int source_cutoff = -1;          // -1 = plan photon number + 3
  // When set, source draws are conditioned on a fixed total pair count
  // (uniform over the (n1, n2) splits), the regime in which the
  // state-dependent heralding bias is observable at feasible shot counts.
  std::optional<int> condition_total;

  void validate() const;
};

struct RateReport {
  long long shots = 0;
  long long successes = 0;
  double empirical_rate = 0.0;
  double wilson_low = 0.0;   // 95% Wilson score interval
  double wilson_high = 0.0;
  double analytic_rate = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;
  std::optional<int> condition_total;
};

// 95% Wilson score interval for `successes` out of `shots`.
std::pair<double, double> wilson_interval(long long successes, long long shots);

// Monte Carlo heralding: per shot, draw the photon-pair numbers of both
// sources from the truncated squeezed-source law, then the detector outcome
// from the exact conditional distribution of the idler circuit, and count
// pattern matches. Deterministic for a fixed seed (shots carry derived
// counter seeds, so any parallel split would reproduce these counts).
RateReport sample_events(const factor::FactorPlan& plan,
                         const SampleConfig& config);

// One RateReport per grid point plus the analytic curve; per-point seeds are
// derived from the base seed.
std::vector<RateReport> sweep_q(const factor::FactorPlan& plan,
                                const std::vector<double>& q_grid,
                                long long shots, const SampleConfig& base);

}  // namespace qforge::sample
