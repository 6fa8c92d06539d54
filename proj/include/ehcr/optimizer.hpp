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

// Maximizes the secondary service rate over the access probabilities subject
// to primary stability (lambda_p <= mu_p - margin, or eta for feedback) and
// the primary delay bound.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ehcr/model.hpp"

namespace ehcr {

struct OptProblem {
    Scheme scheme = Scheme::NoFeedback;
    OutageProfile profile;
    SensingQuality sensing;
    TrafficParams traffic;

    void validate() const;
};

struct SolverConfig {
    int n_starts = 32;
    int max_iters = 4000;         // polls per start
    double initial_step = 0.25;
    double step_shrink = 0.5;
    double min_step = 1e-10;
    int random_directions = 8;    // extra random poll directions per poll
    double audit_step = 0.1;      // coarse grid checked before returning
    int audit_polish = 4;         // best audit points used as extra starts
    std::uint64_t seed = 1;
    double eps_feas = 1e-9;       // tolerance when re-checking constraints

    void validate() const;
};

struct SolverMeta {
    int starts = 0;
    long iterations = 0;
    int best_start = -1;  // index into the start list; -1 if none feasible
    long evaluations = 0;
};

struct OptResult {
    PolicyFb policy;  // access_retx is 0 for schemes without feedback
    double mu_s = 0.0;
    double mu_p = 0.0;  // eta for feedback schemes
    double delay = 0.0;
    bool feasible = false;
    AnalysisReport report;
    SolverMeta meta;
};

/// Names of the decision variables of a scheme, in tie-break order.
std::vector<const char*> decision_variables(Scheme scheme);

/// Maps a decision vector onto a full policy (pinned entries are 0).
PolicyFb policy_from_vector(Scheme scheme, const std::vector<double>& x);

/// Closed-form report of a policy under the problem's scheme.
AnalysisReport evaluate_policy(const OptProblem& problem, const PolicyFb& policy);

/// Both functional constraints hold (delay bound checked with `eps_feas`
/// relative slack).
bool satisfies_constraints(const OptProblem& problem, const AnalysisReport& r,
                           double eps_feas = 0.0);

/// Multi-start pattern search with box projection.
OptResult solve(const OptProblem& problem, const SolverConfig& config = {});

/// Exhaustive search over the Cartesian grid {0, step, 2 step, ..., 1}^n.
/// Ties keep the lexicographically smallest policy.
OptResult grid_oracle(const OptProblem& problem, double step);

}  // namespace ehcr
