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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qforge/factor.hpp"
#include "qforge/fock.hpp"
#include "qforge/herald.hpp"
#include "qforge/optics.hpp"
#include "qforge/sample.hpp"
#include "qforge/tomo.hpp"

namespace qforge::json_io {

using nlohmann::json;

// States are stored in the canonical reporting convention: terms in
// lexicographic occupation order, global phase making the first nonzero
// amplitude real positive.
json to_json(const fock::StateVector& state);
fock::StateVector state_from_json(const json& j);

json to_json(const fock::DensityMatrix& rho);
fock::DensityMatrix density_from_json(const json& j);

json to_json(const optics::Circuit& circuit);
optics::Circuit circuit_from_json(const json& j);

json to_json(const factor::TargetState& target);
factor::TargetState target_from_json(const json& j);

json to_json(const factor::FactorPlan& plan);
factor::FactorPlan plan_from_json(const json& j);

json to_json(const herald::HeraldOutcome& outcome);

json to_json(const sample::RateReport& report);

// CSV columns: q, shots, successes, rate, ci_lo, ci_hi, analytic.
// `header_comment` lines are emitted as leading '#' lines (config + seed).
void write_rate_csv(std::ostream& out,
                    const std::vector<sample::RateReport>& table,
                    const std::vector<std::string>& header_comment);

// CSV with header "theta1,theta2,x1,x2".
void write_samples_csv(std::ostream& out,
                       const std::vector<tomo::QuadratureSample>& samples,
                       const std::vector<std::string>& header_comment);
std::vector<tomo::QuadratureSample> read_samples_csv(std::istream& in);

json to_json(const tomo::TomoResult& result);
json to_json(const tomo::QutritReport& report);

}  // namespace qforge::json_io
