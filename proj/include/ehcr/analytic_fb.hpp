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

// Feedback-based access. After an overheard NACK the secondary knows the
// primary retransmits, skips sensing and accesses with probability pr. The
// primary queue becomes a two-phase chain: (k, F) first transmission of the
// head packet with success probability alpha, (k, R) retransmission with
// success probability gamma.

#include <cstddef>
#include <vector>

#include "ehcr/model.hpp"

namespace ehcr {

struct PrimarySuccess {
    double alpha = 0.0;  // first transmission
    double gamma = 0.0;  // retransmission
};

/// Aggregate stationary quantities of the two-phase chain.
struct FeedbackChainStats {
    double alpha = 0.0;
    double gamma = 0.0;
    double eta = 0.0;      // lambda_p alpha + (1 - lambda_p) gamma
    double pi0 = 0.0;      // (eta - lambda_p) / gamma
    double sum_pi = 0.0;   // sum_{k>=1} pi_k, equals lambda_p
    double sum_eps = 0.0;  // sum_{k>=1} eps_k = lambda_p (1 - alpha) / gamma
};

struct FeedbackStateProbs {
    std::vector<double> first;  // pi_0 .. pi_kmax
    std::vector<double> retx;   // eps_0 .. eps_kmax, eps_0 = 0
};

/// alpha has the sensing-only mu_p form; gamma replaces the sensing branch
/// with a single access probability pr.
PrimarySuccess alpha_gamma(const OutageProfile& profile, const PolicyFb& policy,
                           const SensingQuality& sensing, double lambda_e);

/// Throws UnstableError when lambda_p >= eta.
FeedbackChainStats chain_stats(double alpha, double gamma, double lambda_p);

/// Stationary probabilities up to k_max. Throws UnstableError.
FeedbackStateProbs state_probs_fb(double alpha, double gamma, double lambda_p,
                                  std::size_t k_max);

/// le [ pi0 gain_idle + sum_pi gain_busy + sum_eps pr P0s^c ].
double mu_s_fb(const OutageProfile& profile, const PolicyFb& policy,
               const SensingQuality& sensing, double lambda_e,
               const FeedbackChainStats& stats);

/// Mean primary delay in slots. Throws UnstableError when lambda_p >= eta.
double delay_fb(double alpha, double gamma, double lambda_p);

/// Feedback counterpart of analyze_nofb; `mu_p` in the report is eta.
AnalysisReport analyze_fb(const OutageProfile& profile, const PolicyFb& policy,
                          const SensingQuality& sensing,
                          const TrafficParams& traffic);

}  // namespace ehcr
