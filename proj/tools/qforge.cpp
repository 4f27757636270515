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

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qforge/json_io.hpp"
#include "qforge/rng.hpp"

namespace {

using namespace qforge;
using json_io::json;

constexpr const char* kVersion = "qforge 0.1.0";
constexpr int kExitNumerical = 2;
constexpr int kExitInvalidInput = 3;

// Raised when the analytic and simulated herald paths disagree beyond the
// verification gate.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fock::cplx parse_complex(const std::string& text) {
  double re = 0.0, im = 0.0;
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    re = std::stod(text);
  } else {
    re = std::stod(text.substr(0, comma));
    im = std::stod(text.substr(comma + 1));
  }
  return {re, im};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << contents;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed_flag) {
  if (seed_flag) return *seed_flag;
  if (const char* env = std::getenv("QFORGE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

herald::DetectorKind parse_detector(const std::string& name) {
  if (name == "pnr") return herald::DetectorKind::PNR;
  if (name == "threshold") return herald::DetectorKind::Threshold;
  throw std::invalid_argument("detector must be 'pnr' or 'threshold'");
}

std::vector<double> parse_q_grid(const std::string& text) {
  std::vector<double> grid;
  const auto first_colon = text.find(':');
  if (first_colon != std::string::npos) {
    const auto second_colon = text.find(':', first_colon + 1);
    if (second_colon == std::string::npos)
      throw std::invalid_argument("grid format is start:stop:count");
    const double start = std::stod(text.substr(0, first_colon));
    const double stop = std::stod(text.substr(first_colon + 1, second_colon - first_colon - 1));
    const int count = std::stoi(text.substr(second_colon + 1));
    if (count < 1) throw std::invalid_argument("grid needs >= 1 points");
    for (int i = 0; i < count; ++i)
      grid.push_back(count == 1 ? start
                                : start + (stop - start) * i / (count - 1));
    return grid;
  }
  size_t pos = 0;
  while (pos < text.size()) {
    const auto comma = text.find(',', pos);
    grid.push_back(std::stod(text.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (grid.empty()) throw std::invalid_argument("empty q grid");
  return grid;
}

std::string format(const char* fmt, ...) {
  char buffer[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof(buffer), fmt, args);
  va_end(args);
  return buffer;
}

void print_plan_table(const factor::FactorPlan& plan) {
  std::printf("factor  t                     r                     split %%        arg(t)/pi  arg(r)/pi\n");
  for (size_t k = 0; k < plan.factors.size(); ++k) {
    const auto& f = plan.factors[k];
    std::printf("%-7zu %+.6f%+.6fi  %+.6f%+.6fi  %5.2f:%-5.2f  %+9.4f  %+9.4f\n",
                k + 1, f.t.real(), f.t.imag(), f.r.real(), f.r.imag(),
                100.0 * std::norm(f.t), 100.0 * std::norm(f.r),
                std::arg(f.t) / M_PI, std::arg(f.r) / M_PI);
  }
  std::printf("scale: %+.9f%+.9fi\n", plan.scale.real(), plan.scale.imag());
}

struct DesignArgs {
  std::string target_path;
  std::string preset;
  int noon_order = 3;
  std::string alpha{"1"}, beta{"0"}, gamma{"0"};
  std::string out_path{"plan.json"};
};

int run_design(const DesignArgs& args) {
  factor::FactorPlan plan;
  json config{{"command", "design"}, {"version", kVersion}};

  if (!args.target_path.empty()) {
    auto target = json_io::target_from_json(load_json(args.target_path));
    plan = factor::design_plan(target);
    config["target"] = args.target_path;
  } else if (args.preset == "noon") {
    plan = factor::noon_plan(args.noon_order);
    config["preset"] = "noon";
    config["N"] = args.noon_order;
  } else if (args.preset == "losscode") {
    auto alpha = parse_complex(args.alpha);
    auto beta = parse_complex(args.beta);
    const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (norm == 0.0) throw std::invalid_argument("alpha and beta both zero");
    alpha /= norm;
    beta /= norm;
    try {
      plan = factor::loss_code_plan(alpha, beta);
    } catch (const factor::ZeroAmplitudeError&) {
      plan = factor::design_plan(factor::loss_code_target(alpha, beta));
    }
    config["preset"] = "losscode";
    config["alpha"] = {alpha.real(), alpha.imag()};
    config["beta"] = {beta.real(), beta.imag()};
  } else if (args.preset == "twophoton") {
    auto alpha = parse_complex(args.alpha);
    auto beta = parse_complex(args.beta);
    auto gamma = parse_complex(args.gamma);
    const double norm =
        std::sqrt(std::norm(alpha) + std::norm(beta) + std::norm(gamma));
    if (norm == 0.0) throw std::invalid_argument("all amplitudes zero");
    alpha /= norm;
    beta /= norm;
    gamma /= norm;
    try {
      plan = factor::general_two_photon_plan(alpha, beta, gamma);
    } catch (const factor::ZeroAmplitudeError&) {
      plan = factor::design_plan(
          factor::TargetState::from_amplitudes({alpha, gamma, beta}));
    }
    config["preset"] = "twophoton";
  } else if (args.preset == "qutrit-balanced") {
    const double a = 1.0 / std::sqrt(3.0);
    plan = factor::design_plan(factor::TargetState::from_amplitudes(
        {fock::cplx(a, 0.0), fock::cplx(a, 0.0), fock::cplx(a, 0.0)}));
    config["preset"] = "qutrit-balanced";
  } else {
    throw std::invalid_argument("need --target or a valid --preset");
  }

  json out = json_io::to_json(plan);
  out["config"] = config;
  write_file(args.out_path, out.dump(2) + "\n");
  print_plan_table(plan);
  std::printf("plan written to %s\n", args.out_path.c_str());
  return 0;
}

struct VerifyArgs {
  std::string plan_path;
  double q = 0.1;
  std::string detector{"pnr"};
  int cutoff = -1;
  std::string out_path{"report.json"};
};

int run_verify(const VerifyArgs& args) {
  auto plan = json_io::plan_from_json(load_json(args.plan_path));
  const double norm_residual = factor::plan_norm_residual(plan);
  if (norm_residual > 1e-9)
    throw factor::RoundtripError("plan violates its roundtrip invariant",
                                 norm_residual);

  const int cutoff = args.cutoff > 0 ? args.cutoff : plan.n() + 3;
  const auto kind = parse_detector(args.detector);
  auto analytic = herald::heralded_state_analytic(plan, args.q);
  auto spec = herald::build_herald_circuit(
      plan, args.q, herald::standard_pattern(plan.n(), kind), cutoff);
  auto simulated = herald::simulate_herald(spec);

  json report{{"config",
               {{"command", "verify"},
                {"version", kVersion},
                {"plan", args.plan_path},
                {"q", args.q},
                {"detector", args.detector},
                {"cutoff", cutoff}}},
              {"analytic", json_io::to_json(analytic)},
              {"simulated", json_io::to_json(simulated)}};

  std::printf("analytic : P = %.6e, fidelity to target %.12f\n",
              analytic.success_probability, analytic.fidelity_to_target);
  std::printf("simulated: P = %.6e, fidelity to target %.12f, purity %.12f%s\n",
              simulated.success_probability, simulated.fidelity_to_target,
              simulated.purity, simulated.truncation_flag ? " [truncated]" : "");

  if (kind == herald::DetectorKind::PNR) {
    const double fidelity_gap =
        1.0 - fock::fidelity(*simulated.pure, *analytic.pure);
    const double probability_gap =
        std::abs(simulated.success_probability - analytic.success_probability) /
        analytic.success_probability;
    report["agreement"] = {{"fidelity_gap", fidelity_gap},
                           {"probability_rel_diff", probability_gap}};
    std::printf("agreement: fidelity gap %.3e, probability rel diff %.3e\n",
                fidelity_gap, probability_gap);
    write_file(args.out_path, report.dump(2) + "\n");
    if (fidelity_gap > 1e-8 || probability_gap > 1e-8)
      throw VerificationFailure(
          format("analytic/simulated disagreement beyond 1e-8 "
                 "(fidelity gap %.3e, probability %.3e)",
                 fidelity_gap, probability_gap));
  } else {
    report["agreement"] = {
        {"impurity", 1.0 - simulated.purity},
        {"impurity_bound_10q2", 10.0 * args.q * args.q}};
    std::printf("threshold impurity %.3e (order-q^2 bound %.3e)\n",
                1.0 - simulated.purity, 10.0 * args.q * args.q);
    write_file(args.out_path, report.dump(2) + "\n");
  }
  std::printf("report written to %s\n", args.out_path.c_str());
  return 0;
}

struct SampleArgs {
  std::string plan_path;
  double q = 0.1;
  long long shots = 10000;
  std::optional<std::uint64_t> seed;
  std::string detector{"pnr"};
  int condition_total = -1;
  int cutoff = -1;
  std::string out_path{"rate.json"};
};

int run_sample(const SampleArgs& args) {
  auto plan = json_io::plan_from_json(load_json(args.plan_path));
  sample::SampleConfig config;
  config.q = args.q;
  config.shots = args.shots;
  config.seed = resolve_seed(args.seed);
  config.detector.kind = parse_detector(args.detector);
  config.source_cutoff = args.cutoff;
  if (args.condition_total >= 0) config.condition_total = args.condition_total;

  auto report = sample_events(plan, config);
  json out = json_io::to_json(report);
  out["config"] = {{"command", "sample"}, {"version", kVersion},
                   {"plan", args.plan_path}, {"detector", args.detector}};
  write_file(args.out_path, out.dump(2) + "\n");
  std::printf("%lld/%lld heralds, rate %.6e in [%.6e, %.6e], exact %.6e\n",
              report.successes, report.shots, report.empirical_rate,
              report.wilson_low, report.wilson_high, report.analytic_rate);
  std::printf("report written to %s\n", args.out_path.c_str());
  return 0;
}

struct SweepArgs {
  std::string plan_path;
  std::string grid{"0.02:0.3:15"};
  long long shots = 10000;
  std::optional<std::uint64_t> seed;
  std::string detector{"pnr"};
  std::string out_path{"sweep.csv"};
};

int run_sweep(const SweepArgs& args) {
  auto plan = json_io::plan_from_json(load_json(args.plan_path));
  sample::SampleConfig base;
  base.seed = resolve_seed(args.seed);
  base.detector.kind = parse_detector(args.detector);
  const auto grid = parse_q_grid(args.grid);
  auto table = sample::sweep_q(plan, grid, args.shots, base);

  std::ostringstream csv;
  json_io::write_rate_csv(
      csv, table,
      {std::string(kVersion) + " sweep", "plan=" + args.plan_path,
       "shots=" + std::to_string(args.shots),
       "seed=" + std::to_string(base.seed), "detector=" + args.detector,
       "grid=" + args.grid});
  write_file(args.out_path, csv.str());
  std::printf("sweep of %zu points written to %s\n", grid.size(),
              args.out_path.c_str());
  return 0;
}

struct TomoArgs {
  std::string target_path;
  std::string plan_path;
  double eta = 0.7;
  long long shots = 20000;
  std::optional<std::uint64_t> seed;
  int cutoff = 4;
  double bin_width = 0.05;
  int max_iterations = 300;
  std::string out_path{"tomo.json"};
  std::string samples_path;
};

int run_tomo(const TomoArgs& args) {
  factor::TargetState target;
  std::string source_desc;
  if (!args.target_path.empty()) {
    target = json_io::target_from_json(load_json(args.target_path));
    source_desc = args.target_path;
  } else if (!args.plan_path.empty()) {
    target = factor::expand_plan(json_io::plan_from_json(load_json(args.plan_path)));
    source_desc = args.plan_path;
  } else {
    throw std::invalid_argument("need --target or --plan");
  }
  if (args.cutoff < target.n)
    throw std::invalid_argument("tomography cutoff below the target photon number");

  const std::uint64_t seed = resolve_seed(args.seed);
  fock::StateVector psi(2, args.cutoff);
  for (int k = 0; k <= target.n; ++k)
    psi.add_term(fock::Occupation{target.n - k, k},
                 target.coeffs[static_cast<size_t>(k)]);
  auto truth = tomo::apply_loss(fock::DensityMatrix::from_pure(psi), args.eta);

  auto samples = tomo::sample_homodyne(truth, args.shots, tomo::PhaseStrategy{}, seed);
  if (!args.samples_path.empty()) {
    std::ostringstream csv;
    json_io::write_samples_csv(
        csv, samples,
        {std::string(kVersion) + " homodyne samples, x = (a + adag)/sqrt(2)",
         "state=" + source_desc, "eta=" + std::to_string(args.eta),
         "seed=" + std::to_string(seed)});
    write_file(args.samples_path, csv.str());
  }

  tomo::MleOptions options;
  options.bin_width = args.bin_width;
  options.max_iterations = args.max_iterations;
  auto result = tomo::mle_reconstruct(samples, args.cutoff, options);

  json out{{"config",
            {{"command", "tomo"},
             {"version", kVersion},
             {"state", source_desc},
             {"eta", args.eta},
             {"shots", args.shots},
             {"seed", seed},
             {"cutoff", args.cutoff},
             {"bin_width", args.bin_width},
             {"quadrature_convention", "x = (a + adag)/sqrt(2), hbar = 1"}}},
           {"true_photon_number_dist", truth.photon_number_distribution()}};

  if (target.n == 2) {
    auto diag = tomo::qutrit_diagnostics(result.rho, target.coeffs);
    result.subspace_fidelity = diag.subspace_fidelity;
    out["qutrit"] = json_io::to_json(diag);
    std::printf("two-photon population %.4f (true %.4f), subspace fidelity %.4f\n",
                diag.photon_number_dist[2],
                truth.photon_number_distribution()[2], diag.subspace_fidelity);
  }
  out["result"] = json_io::to_json(result);
  write_file(args.out_path, out.dump(2) + "\n");
  std::printf("MLE converged in %d iterations; result written to %s\n",
              result.iterations, args.out_path.c_str());
  return 0;
}

void print_presets() {
  std::printf(
      "presets for `qforge design --preset <name>`:\n"
      "  noon             (|N0> + |0N>)/sqrt2           flags: --N\n"
      "  losscode         alpha(|40>+|04>)/sqrt2+beta|22> flags: --alpha --beta\n"
      "  twophoton        alpha|20>+beta|02>+gamma|11>    flags: --alpha --beta --gamma\n"
      "  qutrit-balanced  (|20>+|11>+|02>)/sqrt3\n"
      "complex flags accept 're' or 're,im'.\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"design and verification of heralded two-mode photonic qudit "
               "preparation from weak two-mode squeezing and linear optics"};
  app.require_subcommand(1);

  DesignArgs design;
  auto* cmd_design = app.add_subcommand("design", "factor a target into beam-splitter settings");
  cmd_design->add_option("--target", design.target_path, "target state JSON");
  cmd_design->add_option("--preset", design.preset, "noon|losscode|twophoton|qutrit-balanced");
  cmd_design->add_option("--N", design.noon_order, "NOON photon number");
  cmd_design->add_option("--alpha", design.alpha, "complex amplitude");
  cmd_design->add_option("--beta", design.beta, "complex amplitude");
  cmd_design->add_option("--gamma", design.gamma, "complex amplitude");
  cmd_design->add_option("--out", design.out_path, "output plan path");

  VerifyArgs verify;
  auto* cmd_verify = app.add_subcommand("verify", "check a plan by analytic and simulated heralding");
  cmd_verify->add_option("--plan", verify.plan_path, "plan JSON")->required();
  cmd_verify->add_option("--q", verify.q, "squeezing parameter");
  cmd_verify->add_option("--detector", verify.detector, "pnr|threshold");
  cmd_verify->add_option("--cutoff", verify.cutoff, "per-source photon cutoff");
  cmd_verify->add_option("--out", verify.out_path, "report path");

  SampleArgs sample_args;
  auto* cmd_sample = app.add_subcommand("sample", "Monte Carlo heralding statistics");
  cmd_sample->add_option("--plan", sample_args.plan_path, "plan JSON")->required();
  cmd_sample->add_option("--q", sample_args.q, "squeezing parameter");
  cmd_sample->add_option("--shots", sample_args.shots, "number of attempts");
  cmd_sample->add_option("--seed", sample_args.seed, "RNG seed (default: QFORGE_SEED or 1)");
  cmd_sample->add_option("--detector", sample_args.detector, "pnr|threshold");
  cmd_sample->add_option("--condition-total", sample_args.condition_total,
                         "condition draws on a fixed total pair count");
  cmd_sample->add_option("--cutoff", sample_args.cutoff, "per-source photon cutoff");
  cmd_sample->add_option("--out", sample_args.out_path, "report path");

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "success probability across a q grid");
  cmd_sweep->add_option("--plan", sweep.plan_path, "plan JSON")->required();
  cmd_sweep->add_option("--q-grid", sweep.grid, "start:stop:count or comma list");
  cmd_sweep->add_option("--shots", sweep.shots, "shots per grid point");
  cmd_sweep->add_option("--seed", sweep.seed, "RNG seed (default: QFORGE_SEED or 1)");
  cmd_sweep->add_option("--detector", sweep.detector, "pnr|threshold");
  cmd_sweep->add_option("--out", sweep.out_path, "CSV path");

  TomoArgs tomo_args;
  auto* cmd_tomo = app.add_subcommand("tomo", "loss + homodyne sampling + MLE reconstruction");
  cmd_tomo->add_option("--target", tomo_args.target_path, "target state JSON");
  cmd_tomo->add_option("--plan", tomo_args.plan_path, "plan JSON (expanded to its target)");
  cmd_tomo->add_option("--eta", tomo_args.eta, "loss transmissivity per mode");
  cmd_tomo->add_option("--shots", tomo_args.shots, "homodyne samples");
  cmd_tomo->add_option("--seed", tomo_args.seed, "RNG seed (default: QFORGE_SEED or 1)");
  cmd_tomo->add_option("--cutoff", tomo_args.cutoff, "reconstruction photon cutoff");
  cmd_tomo->add_option("--bin-width", tomo_args.bin_width, "quadrature bin width");
  cmd_tomo->add_option("--max-iter", tomo_args.max_iterations, "MLE iteration cap");
  cmd_tomo->add_option("--out", tomo_args.out_path, "result path");
  cmd_tomo->add_option("--samples-out", tomo_args.samples_path, "write samples CSV");

  auto* cmd_presets = app.add_subcommand("presets", "list design presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    if (cmd_design->parsed()) return run_design(design);
    if (cmd_verify->parsed()) return run_verify(verify);
    if (cmd_sample->parsed()) return run_sample(sample_args);
    if (cmd_sweep->parsed()) return run_sweep(sweep);
    if (cmd_tomo->parsed()) return run_tomo(tomo_args);
    if (cmd_presets->parsed()) {
      print_presets();
      return 0;
    }
  } catch (const factor::NonConvergenceError& e) {
    std::fprintf(stderr, "numerical failure: %s (worst residual %.3e)\n",
                 e.what(), e.worst_residual);
    return kExitNumerical;
  } catch (const factor::RoundtripError& e) {
    std::fprintf(stderr, "numerical failure: %s (residual %.3e)\n", e.what(),
                 e.residual);
    return kExitNumerical;
  } catch (const VerificationFailure& e) {
    std::fprintf(stderr, "verification failed: %s\n", e.what());
    return kExitNumerical;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}
