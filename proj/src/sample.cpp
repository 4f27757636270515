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

#include "qforge/sample.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qforge/rng.hpp"

namespace qforge::sample {

using fock::cplx;
using fock::Occupation;
using fock::StateVector;

void SampleConfig::validate() const {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("squeezing parameter must be in (0, 1)");
  if (condition_total && *condition_total < 0)
    throw std::invalid_argument("conditioned total must be >= 0");
}

std::pair<double, double> wilson_interval(long long successes, long long shots) {
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(shots);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

// Exact detector-outcome distribution for one source configuration (n1, n2):
// the idler circuit applied to the corresponding Fock component. Independent
// of q, so it is cached across shots.
struct SectorDistribution {
  std::vector<double> cumulative;
  std::vector<char> matches;
  double success_probability = 0.0;
};

class ConditionalSampler {
 public:
  ConditionalSampler(const herald::CircuitSpec& spec) : spec_(spec) {}

  const SectorDistribution& sector(int n1, int n2) {
    const long long key = static_cast<long long>(n1) * 10000 + n2;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    const int modes = spec_.mode_count();
    std::vector<int> occ(static_cast<size_t>(modes), 0);
    occ[2] = n1;
    occ[3] = n2;
    StateVector idlers = StateVector::basis(Occupation(occ), n1 + n2);
    idlers = optics::apply_circuit(idlers, spec_.idler_circuit());

    SectorDistribution dist;
    double total = 0.0;
    const bool pnr = spec_.detector.kind == herald::DetectorKind::PNR;
    for (const auto& [out_occ, amp] : idlers.sorted_terms()) {
      const double p = std::norm(amp);
      total += p;
      bool match = true;
      for (size_t i = 0; i < spec_.detector.pattern.size(); ++i) {
        const int count = out_occ[static_cast<int>(i) + 2];
        const int want = spec_.detector.pattern[i];
        if (pnr ? count != want : (want >= 1 ? count < 1 : count != 0)) {
          match = false;
          break;
        }
      }
      dist.cumulative.push_back(total);
      dist.matches.push_back(match ? 1 : 0);
      if (match) dist.success_probability += p;
    }
    return cache_.emplace(key, std::move(dist)).first->second;
  }

 private:
  const herald::CircuitSpec& spec_;
  std::map<long long, SectorDistribution> cache_;
};

bool draw_outcome(const SectorDistribution& dist, double u) {
  if (dist.cumulative.empty()) return false;
  const auto it =
      std::lower_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
  const size_t idx = it == dist.cumulative.end()
                         ? dist.cumulative.size() - 1
                         : static_cast<size_t>(it - dist.cumulative.begin());
  return dist.matches[idx] != 0;
}

}  // namespace

RateReport sample_events(const factor::FactorPlan& plan,
                         const SampleConfig& config) {
  config.validate();
  const int n = plan.n();
  const int cutoff = config.source_cutoff >= 0 ? config.source_cutoff : n + 3;
  auto detector = config.detector;
  if (detector.pattern.empty()) {
    const auto kind = detector.kind;
    detector = herald::standard_pattern(n, kind);
  }
  auto spec = herald::build_herald_circuit(plan, config.q, detector, cutoff);
  ConditionalSampler sampler(spec);

  const double q2 = config.q * config.q;

  // Truncated-geometric CDF for one source's pair count.
  std::vector<double> source_cdf(static_cast<size_t>(cutoff) + 1);
  {
    double mass = 0.0, w = 1.0;
    for (int k = 0; k <= cutoff; ++k) {
      mass += w;
      source_cdf[static_cast<size_t>(k)] = mass;
      w *= q2;
    }
    for (double& v : source_cdf) v /= mass;
  }
  auto draw_pairs = [&](double u) {
    const auto it = std::lower_bound(source_cdf.begin(), source_cdf.end(), u);
    return static_cast<int>(it == source_cdf.end() ? cutoff
                                                   : it - source_cdf.begin());
  };

  if (config.condition_total && *config.condition_total > 2 * cutoff)
    throw std::invalid_argument("conditioned total exceeds the source budget");

  RateReport report;
  report.shots = config.shots;
  report.q = config.q;
  report.seed = config.seed;
  report.condition_total = config.condition_total;

  for (long long shot = 0; shot < config.shots; ++shot) {
    SplitMix64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(shot)));
    int n1, n2;
    if (config.condition_total) {
      const int total = *config.condition_total;
      const int lo = std::max(0, total - cutoff);
      const int hi = std::min(cutoff, total);
      const int span = hi - lo + 1;
      n1 = lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(span));
      n2 = total - n1;
    } else {
      n1 = draw_pairs(rng.next_double());
      n2 = draw_pairs(rng.next_double());
    }
    if (draw_outcome(sampler.sector(n1, n2), rng.next_double()))
      ++report.successes;
  }

  report.empirical_rate =
      static_cast<double>(report.successes) / static_cast<double>(report.shots);
  std::tie(report.wilson_low, report.wilson_high) =
      wilson_interval(report.successes, report.shots);

  // Exact rate over the same truncated source law: sum of sector weights
  // times the cached conditional success probabilities.
  const double vacuum_factor = (1.0 - q2) * (1.0 - q2);
  if (config.condition_total) {
    const int total = *config.condition_total;
    const int lo = std::max(0, total - cutoff);
    const int hi = std::min(cutoff, total);
    double acc = 0.0;
    for (int n1v = lo; n1v <= hi; ++n1v)
      acc += sampler.sector(n1v, total - n1v).success_probability;
    report.analytic_rate = acc / (hi - lo + 1);
  } else {
    double acc = 0.0;
    for (int total = 0; total <= 2 * cutoff; ++total) {
      const double sector_weight = vacuum_factor * std::pow(q2, total);
      if (total > n && sector_weight * (total + 1.0) < 1e-12 * acc) break;
      const int lo = std::max(0, total - cutoff);
      const int hi = std::min(cutoff, total);
      for (int n1v = lo; n1v <= hi; ++n1v)
        acc += sector_weight * sampler.sector(n1v, total - n1v).success_probability;
    }
    report.analytic_rate = acc;
  }
  return report;
}

std::vector<RateReport> sweep_q(const factor::FactorPlan& plan,
                                const std::vector<double>& q_grid,
                                long long shots, const SampleConfig& base) {
  std::vector<RateReport> table;
  table.reserve(q_grid.size());
  for (size_t i = 0; i < q_grid.size(); ++i) {
    SampleConfig point = base;
    point.q = q_grid[i];
    point.shots = shots;
    point.seed = derive_seed(base.seed, static_cast<std::uint64_t>(i));
    table.push_back(sample_events(plan, point));
  }
  return table;
}

}  // namespace qforge::sample
