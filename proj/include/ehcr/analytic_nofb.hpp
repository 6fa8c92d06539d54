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

// Sensing-only access with a backlogged secondary whose energy queue is
// drained once per slot. The energy queue is then nonempty with probability
// lambda_e and the primary queue is a discrete-time birth-death chain with
// arrival probability lambda_p and service probability mu_p.

#include <cstddef>
#include <vector>

#include "ehcr/model.hpp"

namespace ehcr {

/// Primary service rate
///   (1-le) P + le ( (1-ps)[pt Pc + (1-pt) P]
///                 + ps P_MD [pf Pc + (1-pf) P]
///                 + ps (1-P_MD) [pb Pc + (1-pb) P] ).
double mu_p(const OutageProfile& profile, const PolicyNoFb& policy,
            const SensingQuality& sensing, double lambda_e);

/// Secondary service rate le [ (1 - lp/mu_p) gain_idle + (lp/mu_p) gain_busy ].
/// Throws UnstableError when lambda_p >= mu_p.
double mu_s(const OutageProfile& profile, const PolicyNoFb& policy,
            const SensingQuality& sensing, double lambda_e, double lambda_p);

/// nu_0 .. nu_{k_max} of the primary queue length.
/// Throws UnstableError when lambda_p >= mu_p.
std::vector<double> stationary_dist_nofb(double lambda_p, double mu_p,
                                         std::size_t k_max);

/// Mean primary queueing delay (1 - lp) / (mu_p - lp) in slots.
double delay_nofb(double lambda_p, double mu_p);

/// Smallest k such that the mass of a geometric tail with this ratio, scaled
/// by `lead`, beyond k drops below `tol`.
std::size_t geometric_cutoff(double ratio, double lead, double tol = 1e-12);

/// Evaluates every quantity of the sensing-only scheme and the two
/// constraints (lambda_p <= mu_p - margin, delay <= bound). Never throws for
/// instability; an unstable primary reports empty_prob = 0, delay = +inf and
/// mu_s with the primary treated as always busy.
AnalysisReport analyze_nofb(const OutageProfile& profile,
                            const PolicyNoFb& policy,
                            const SensingQuality& sensing,
                            const TrafficParams& traffic);

}  // namespace ehcr
