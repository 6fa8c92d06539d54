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

#include <iosfwd>
#include <string>
#include <vector>

#include "ehcr/config.hpp"

namespace ehcr {

// Process exit codes of the ehcr tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitValidation = 3;

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

struct SweepRow {
    SweepVariable variable = SweepVariable::LambdaP;
    double value = 0.0;
    Scheme scheme = Scheme::NoFeedback;
    bool mpr_on = true;
    TrafficParams traffic;
    OptResult result;
};

/// Optimizes every (mpr series, sweep value, scheme) combination. Points run
/// concurrently; rows come back in that nested order.
std::vector<SweepRow> run_sweep(const RunConfig& config);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

// Each command writes its CSV to `out` and diagnostics to `err`, and
// returns the process exit code.
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point (subcommand dispatch, config loading,
/// error-to-exit-code mapping).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ehcr
