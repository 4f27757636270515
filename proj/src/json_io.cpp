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

#include "qforge/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace qforge::json_io {

namespace {

json complex_to_json(fock::cplx z) { return json::array({z.real(), z.imag()}); }

fock::cplx complex_from_json(const json& j) {
  if (j.is_number()) return fock::cplx(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex values are [re, im] pairs");
  return fock::cplx(j[0].get<double>(), j[1].get<double>());
}

// Shortest-roundtrip decimal keeps CSV artifacts bit-reproducible.
std::string format_double(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

json to_json(const fock::StateVector& state) {
  json terms = json::array();
  for (const auto& [occ, amp] : state.canonicalized().sorted_terms()) {
    terms.push_back(
        {{"occ", occ.to_vector()}, {"re", amp.real()}, {"im", amp.imag()}});
  }
  return {{"modes", state.modes()},
          {"cutoff", state.cutoff()},
          {"terms", std::move(terms)}};
}

fock::StateVector state_from_json(const json& j) {
  fock::StateVector state(j.at("modes").get<int>(), j.at("cutoff").get<int>());
  for (const auto& term : j.at("terms")) {
    state.add_term(fock::Occupation(term.at("occ").get<std::vector<int>>()),
                   fock::cplx(term.at("re").get<double>(),
                              term.at("im").get<double>()));
  }
  return state;
}

json to_json(const fock::DensityMatrix& rho) {
  json basis = json::array();
  for (const auto& occ : rho.basis()) basis.push_back(occ.to_vector());
  json entries = json::array();
  for (int i = 0; i < rho.dim(); ++i)
    for (int j = 0; j < rho.dim(); ++j)
      entries.push_back(complex_to_json(rho.matrix()(i, j)));
  return {{"modes", rho.modes()},
          {"cutoff", rho.cutoff()},
          {"basis", std::move(basis)},
          {"entries", std::move(entries)}};
}

fock::DensityMatrix density_from_json(const json& j) {
  fock::DensityMatrix rho(j.at("modes").get<int>(), j.at("cutoff").get<int>());
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != rho.dim() * rho.dim())
    throw std::invalid_argument("density matrix entry count mismatch");
  for (int i = 0; i < rho.dim(); ++i)
    for (int k = 0; k < rho.dim(); ++k)
      rho.matrix()(i, k) =
          complex_from_json(entries[static_cast<size_t>(i * rho.dim() + k)]);
  return rho;
}

json to_json(const optics::Circuit& circuit) {
  json out = json::array();
  for (const auto& element : circuit.elements) {
    if (const auto* bs = std::get_if<optics::BeamSplitter>(&element)) {
      out.push_back({{"type", "bs"},
                     {"t", complex_to_json(bs->t)},
                     {"r", complex_to_json(bs->r)},
                     {"modes", {bs->mode_a, bs->mode_b}}});
    } else if (const auto* ps = std::get_if<optics::PhaseShift>(&element)) {
      out.push_back({{"type", "phase"}, {"theta", ps->theta}, {"mode", ps->mode}});
    } else {
      const auto& d = std::get<optics::Displacement>(element);
      out.push_back({{"type", "disp"},
                     {"epsilon", complex_to_json(d.epsilon)},
                     {"mode", d.mode}});
    }
  }
  return out;
}

optics::Circuit circuit_from_json(const json& j) {
  optics::Circuit circuit;
  for (const auto& element : j) {
    const std::string type = element.at("type").get<std::string>();
    if (type == "bs") {
      circuit.push(optics::BeamSplitter(
          complex_from_json(element.at("t")), complex_from_json(element.at("r")),
          element.at("modes")[0].get<int>(), element.at("modes")[1].get<int>()));
    } else if (type == "phase") {
      circuit.push(optics::PhaseShift{element.at("mode").get<int>(),
                                      element.at("theta").get<double>()});
    } else if (type == "disp") {
      circuit.push(optics::Displacement{element.at("mode").get<int>(),
                                        complex_from_json(element.at("epsilon"))});
    } else {
      throw std::invalid_argument("unknown circuit element type: " + type);
    }
  }
  return circuit;
}

json to_json(const factor::TargetState& target) {
  json coeffs = json::array();
  for (const auto& c : target.coeffs) coeffs.push_back(complex_to_json(c));
  return {{"n", target.n}, {"coeffs", std::move(coeffs)}};
}

factor::TargetState target_from_json(const json& j) {
  factor::TargetState target;
  target.n = j.at("n").get<int>();
  for (const auto& c : j.at("coeffs")) target.coeffs.push_back(complex_from_json(c));
  target.validate();
  return target;
}

json to_json(const factor::FactorPlan& plan) {
  json factors = json::array();
  for (const auto& f : plan.factors)
    factors.push_back({{"t", complex_to_json(f.t)}, {"r", complex_to_json(f.r)}});
  return {{"scale", complex_to_json(plan.scale)}, {"factors", std::move(factors)}};
}

factor::FactorPlan plan_from_json(const json& j) {
  factor::FactorPlan plan;
  plan.scale = complex_from_json(j.at("scale"));
  for (const auto& f : j.at("factors"))
    plan.factors.push_back(factor::Factor{complex_from_json(f.at("t")),
                                          complex_from_json(f.at("r"))});
  plan.validate();
  return plan;
}

json to_json(const herald::HeraldOutcome& outcome) {
  json out{{"success_probability", outcome.success_probability},
           {"purity", outcome.purity},
           {"fidelity_to_target", outcome.fidelity_to_target},
           {"truncated", outcome.truncation_flag}};
  if (outcome.pure) out["state"] = to_json(*outcome.pure);
  if (outcome.mixed) out["state_mixed"] = to_json(*outcome.mixed);
  return out;
}

json to_json(const sample::RateReport& report) {
  json out{{"shots", report.shots},
           {"successes", report.successes},
           {"empirical_rate", report.empirical_rate},
           {"wilson_low", report.wilson_low},
           {"wilson_high", report.wilson_high},
           {"analytic_rate", report.analytic_rate},
           {"q", report.q},
           {"seed", report.seed}};
  if (report.condition_total) out["condition_total"] = *report.condition_total;
  return out;
}

void write_rate_csv(std::ostream& out,
                    const std::vector<sample::RateReport>& table,
                    const std::vector<std::string>& header_comment) {
  for (const auto& line : header_comment) out << "# " << line << "\n";
  out << "q,shots,successes,rate,ci_lo,ci_hi,analytic\n";
  for (const auto& r : table) {
    out << format_double(r.q) << ',' << r.shots << ',' << r.successes << ','
        << format_double(r.empirical_rate) << ',' << format_double(r.wilson_low)
        << ',' << format_double(r.wilson_high) << ','
        << format_double(r.analytic_rate) << '\n';
  }
}

void write_samples_csv(std::ostream& out,
                       const std::vector<tomo::QuadratureSample>& samples,
                       const std::vector<std::string>& header_comment) {
  for (const auto& line : header_comment) out << "# " << line << "\n";
  out << "theta1,theta2,x1,x2\n";
  for (const auto& s : samples) {
    out << format_double(s.theta1) << ',' << format_double(s.theta2) << ','
        << format_double(s.x1) << ',' << format_double(s.x2) << '\n';
  }
}

std::vector<tomo::QuadratureSample> read_samples_csv(std::istream& in) {
  std::vector<tomo::QuadratureSample> samples;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // "theta1,theta2,x1,x2"
      continue;
    }
    tomo::QuadratureSample s;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &s.theta1, &s.theta2,
                    &s.x1, &s.x2) != 4)
      throw std::invalid_argument("malformed quadrature sample line: " + line);
    // Phases live in [0, 2 pi).
    constexpr double two_pi = 6.283185307179586476925286766559;
    s.theta1 -= two_pi * std::floor(s.theta1 / two_pi);
    s.theta2 -= two_pi * std::floor(s.theta2 / two_pi);
    samples.push_back(s);
  }
  return samples;
}

json to_json(const tomo::TomoResult& result) {
  json out{{"rho", to_json(result.rho)},
           {"iterations", result.iterations},
           {"log_likelihood", result.log_likelihood},
           {"photon_number_dist", result.photon_number_dist}};
  if (result.subspace_fidelity) out["subspace_fidelity"] = *result.subspace_fidelity;
  return out;
}

json to_json(const tomo::QutritReport& report) {
  json block = json::array();
  for (const auto& entry : report.block) block.push_back(complex_to_json(entry));
  return {{"block", std::move(block)},
          {"block_weight", report.block_weight},
          {"subspace_fidelity", report.subspace_fidelity},
          {"photon_number_dist", report.photon_number_dist}};
}

}  // namespace qforge::json_io
