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

// Slot-level Monte Carlo of the primary queue, the secondary data queue and
// the secondary energy queue.
//
// Slot t:
//   1. the primary transmits iff Q_p > 0;
//   2. the secondary decides (retransmission slot after a NACK: access w.p.
//      pr, full slot; otherwise sense w.p. ps and access w.p. pf / pb, or
//      skip sensing and access w.p. pt);
//   3. success draws from the OutageProfile;
//   4. departures, energy consumption;
//   5. Bernoulli arrivals to Q_p, Q_s, Q_e (eligible from slot t + 1);
//   6. the primary ACK/NACK is kept for slot t + 1.
// A primary packet that arrives in slot a and leaves in slot d has delay
// d - a slots.

#include <cstdint>
#include <string>
#include <vector>

#include "ehcr/model.hpp"

namespace ehcr {

enum class SimSemantics {
    Exact,        // transmit only real packets, energy spent per transmission
    PaperApprox,  // dummy packets when Q_s is empty, one energy unit per slot
};

std::string_view to_string(SimSemantics semantics);
SimSemantics semantics_from_string(std::string_view name);

struct SimParams {
    Scheme scheme = Scheme::NoFeedback;
    PolicyFb policy;
    OutageProfile profile;
    SensingQuality sensing;
    TrafficParams traffic;
    SimSemantics semantics = SimSemantics::PaperApprox;
    std::uint64_t n_slots = 1'000'000;
    std::uint64_t seed = 1;
    std::int64_t energy_capacity = -1;  // < 0: unbounded
    int batches = 30;

    void validate() const;
};

/// Point estimate with its batch-means standard error.
struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;

    double ci95() const { return 1.96 * stderr_; }
};

struct SimStats {
    std::uint64_t slots = 0;
    Estimate mu_p;          // primary successes per busy slot
    Estimate mu_s;          // secondary successes (incl. dummy) per slot
    Estimate mu_e;          // energy units consumed per slot with Q_e > 0
    Estimate throughput_s;  // real secondary departures per slot
    Estimate delay;         // mean primary sojourn, slots
    Estimate mean_qp;       // Q_p at slot end
    Estimate mean_qs;
    Estimate empty_frac_p;  // slots starting with Q_p = 0
    Estimate retx_frac;     // slots in which the primary retransmits
    Estimate alpha;         // primary success in first-transmission slots
    Estimate gamma;         // primary success in retransmission slots
    double arrival_rate_p = 0.0;  // admitted primary arrivals per slot
    std::uint64_t departures_p = 0;
    std::uint64_t idle_sensed = 0;
    std::uint64_t idle_declared_busy = 0;
    std::uint64_t busy_sensed = 0;
    std::uint64_t busy_declared_free = 0;
    double qp_first_decile = 0.0;
    double qp_last_decile = 0.0;
    std::string rng = "mt19937_64 x8 streams, seed_seq{seed_lo, seed_hi, stream}";
};

/// Runs one replication. Deterministic for fixed parameters and seed.
SimStats run(const SimParams& params);

/// Slow drift of the primary queue: last-decile mean > 10 x max(first, 1).
bool drift_detected(const SimStats& stats);

struct Check {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double sigma = 0.0;  // combined standard error used for the bound
    bool passed = false;
    bool asserted = true;  // false: advisory only

    double residual() const { return measured - expected; }
};

struct ValidationReport {
    std::vector<Check> checks;
    bool unstable_detected = false;
    bool passed() const;
};

/// Compares a PaperApprox run against the closed forms of its scheme
/// (mu_p, mu_s, empty fraction, delay; retransmission fraction for feedback)
/// plus Little's law and the sensing error frequencies, each at `n_sigma`.
ValidationReport validate_closed_forms(const SimParams& params,
                                       double n_sigma = 3.0);

/// Exact and PaperApprox semantics on common random numbers. With
/// lambda_s > 0: Exact mu_s >= PaperApprox mu_s and Exact mu_s >= analytic
/// mu_s, both up to `n_sigma`. With lambda_s = 0: primary side,
/// Exact mu_p >= PaperApprox mu_p. A drifting primary queue is reported and
/// the checks become advisory.
struct LowerBoundReport {
    SimStats exact;
    SimStats approx;
    AnalysisReport analytic;
    ValidationReport validation;
};
LowerBoundReport validate_lower_bound(const SimParams& params,
                                      double n_sigma = 3.0);

}  // namespace ehcr
