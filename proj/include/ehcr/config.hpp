// Copyright 2026 The ehcr Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// JSON run configuration. A run is assembled from an optional built-in
// preset, an optional config file (merge-patched on top), `--set` overrides
// and the dedicated command-line flags, in that order.
//
//   {
//     "scheme": "Feedback",
//     "profile": {"primary": 0.7, "primary_conc": 0.14, "sec_0": 0.6065,
//                 "sec_0_conc": 0.182, "delta": 0.9782, "delta_conc": 0.8},
//     "sensing": {"false_alarm": 0.1, "missed_detection": 0.08},
//     "traffic": {"lambda_p": 0.1, "lambda_s": 1, "lambda_e": 0.8,
//                 "delay_bound": 2},
//     "policy": {"ps": 0, "pf": 0, "pb": 0, "pt": 1, "pr": 0},
//     "sweep": {"variable": "lambda_p", "start": 0, "stop": 0.4,
//               "step": 0.025, "schemes": ["Feedback", "NoFeedback",
//               "RandomAccess"]},
//     "solver": {"n_starts": 32, "seed": 1},
//     "simulation": {"slots": 1000000, "semantics": "PaperApprox"},
//     "seed": 1,
//     "output": "out.csv"
//   }
//
// A top-level "physics" block (two link budgets, cross interference levels
// and a power mode) may replace "profile"; exactly one of the two must be
// present. "mpr": false zeroes the concurrent success probabilities.
// "delay_bound" accepts a number or "inf".

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehcr/model.hpp"
#include "ehcr/optimizer.hpp"
#include "ehcr/simulator.hpp"
#include "json.hpp"

namespace ehcr {

enum class SweepVariable { LambdaP, LambdaE, DelayBound, MprOn };

std::string_view to_string(SweepVariable v);

struct SweepSpec {
    SweepVariable variable = SweepVariable::LambdaP;
    std::vector<double> values;
    std::vector<Scheme> schemes = {Scheme::Feedback, Scheme::NoFeedback,
                                   Scheme::RandomAccess};
    std::vector<bool> mpr_on = {true};  // outer series
};

struct SimulationSpec {
    std::uint64_t slots = 1'000'000;
    SimSemantics semantics = SimSemantics::PaperApprox;
    std::int64_t energy_capacity = -1;
    int batches = 30;
};

struct RunConfig {
    Scheme scheme = Scheme::NoFeedback;
    OutageProfile profile;  // as configured, before the mpr switch
    bool mpr_on = true;
    SensingQuality sensing;
    TrafficParams traffic;
    PolicyFb policy;
    SolverConfig solver;
    std::optional<SweepSpec> sweep;
    SimulationSpec simulation;
    std::uint64_t seed = 1;
    std::string output;

    /// `profile`, with concurrent successes zeroed when mpr_on is false.
    OutageProfile effective_profile() const;
    OptProblem problem() const;
    OptProblem problem(Scheme s) const;
    SimParams sim_params() const;
};

/// Names accepted by --preset.
std::vector<std::string> preset_names();

/// Built-in preset document; throws ConfigError for unknown names.
nlohmann::json preset_json(const std::string& name);

/// Reads a JSON file. Relative paths that do not exist are also looked up in
/// $EHCR_CONFIG_DIR. Parse errors carry line and column.
nlohmann::json load_config_file(const std::string& path);

/// Applies "a.b.c=value" (value parsed as JSON, else taken as a string).
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates and converts a document; errors name the offending field.
RunConfig parse_config(const nlohmann::json& doc);

}  // namespace ehcr
