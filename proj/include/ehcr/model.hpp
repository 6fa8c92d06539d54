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

#include <array>
#include <limits>
#include <string_view>

#include "ehcr/outage.hpp"

namespace ehcr {

/// Secondary access probabilities for the sensing-only scheme.
struct PolicyNoFb {
    double sense = 0.0;          // ps
    double access_free = 0.0;    // pf, channel sensed free
    double access_busy = 0.0;    // pb, channel sensed busy
    double access_direct = 0.0;  // pt, no sensing

    void validate() const;
};

/// Sensing-only probabilities plus pr, the access probability in a slot
/// that follows an overheard NACK.
struct PolicyFb : PolicyNoFb {
    double access_retx = 0.0;

    void validate() const;
};

struct SensingQuality {
    double false_alarm = 0.0;       // P_FA, busy declared while idle
    double missed_detection = 0.0;  // P_MD, idle declared while busy

    void validate() const;
};

inline constexpr double kNoDelayBound = std::numeric_limits<double>::infinity();

/// Bernoulli arrival rates per slot and the primary delay bound (slots).
struct TrafficParams {
    double lambda_p = 0.0;
    double lambda_s = 1.0;
    double lambda_e = 0.0;
    double delay_bound = kNoDelayBound;

    void validate() const;
};

enum class Scheme {
    NoFeedback,
    Feedback,
    RandomAccess,          // NoFeedback with ps pinned to 0
    RandomAccessFeedback,  // Feedback with ps pinned to 0
};

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);  // throws InvalidArgument
bool uses_feedback(Scheme scheme);
bool pins_sensing_off(Scheme scheme);

/// Closed-form performance of one policy. For the feedback scheme `mu_p`
/// holds eta, the long-run service probability of a busy primary slot;
/// `alpha`/`gamma` are the first-transmission and retransmission success
/// probabilities (both equal mu_p without feedback).
struct AnalysisReport {
    double mu_p = 0.0;
    double mu_s = 0.0;
    double empty_prob = 0.0;  // nu_0 or pi_0
    double delay = 0.0;       // slots; +inf when unstable
    double alpha = 0.0;
    double gamma = 0.0;
    double retx_prob = 0.0;   // sum of eps_k; 0 without feedback
    bool primary_stable = false;
    bool delay_feasible = false;
    bool secondary_stable = false;
};

/// Probability that the secondary accesses a slot in which the primary is
/// active, given it has energy and does not act on feedback.
double access_prob_busy(const PolicyNoFb& policy, const SensingQuality& sensing);

/// Secondary success probability per energized slot with an idle primary:
/// (1-ps) pt P0s + ps pb P_FA P1s + ps pf (1-P_FA) P1s.
double secondary_gain_idle(const OutageProfile& profile,
                           const PolicyNoFb& policy,
                           const SensingQuality& sensing);

/// Same with an active primary (no feedback):
/// (1-ps) pt P0s^c + ps pf P_MD P1s^c + ps pb (1-P_MD) P1s^c.
double secondary_gain_busy(const OutageProfile& profile,
                           const PolicyNoFb& policy,
                           const SensingQuality& sensing);

/// Minimum primary service rate meeting delay_nofb <= bound:
/// lambda_p + (1 - lambda_p) / bound.
double min_service_for_delay(double lambda_p, double bound);

}  // namespace ehcr
