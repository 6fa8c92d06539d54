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

#include "ehcr/analytic_nofb.hpp"

#include <cmath>
#include <limits>

#include "ehcr/errors.hpp"

namespace ehcr {

namespace {

void require_stable(double lambda_p, double mu_p) {
    if (!(lambda_p < mu_p)) {
        throw UnstableError("primary queue unstable: lambda_p >= mu_p");
    }
}

}  // namespace

double mu_p(const OutageProfile& o, const PolicyNoFb& p,
            const SensingQuality& s, double lambda_e) {
    const double solo = o.primary;
    const double conc = o.primary_conc;
    const double active =
        (1.0 - p.sense) * (p.access_direct * conc + (1.0 - p.access_direct) * solo) +
        p.sense * s.missed_detection *
            (p.access_free * conc + (1.0 - p.access_free) * solo) +
        p.sense * (1.0 - s.missed_detection) *
            (p.access_busy * conc + (1.0 - p.access_busy) * solo);
    return (1.0 - lambda_e) * solo + lambda_e * active;
}

double mu_s(const OutageProfile& o, const PolicyNoFb& p,
            const SensingQuality& s, double lambda_e, double lambda_p) {
    const double service = mu_p(o, p, s, lambda_e);
    require_stable(lambda_p, service);
    const double busy = lambda_p / service;
    return lambda_e * ((1.0 - busy) * secondary_gain_idle(o, p, s) +
                       busy * secondary_gain_busy(o, p, s));
}

std::vector<double> stationary_dist_nofb(double lambda_p, double mu_p,
                                         std::size_t k_max) {
    require_stable(lambda_p, mu_p);
    std::vector<double> nu(k_max + 1, 0.0);
    nu[0] = 1.0 - lambda_p / mu_p;
    if (k_max == 0 || lambda_p == 0.0) return nu;

    const double ratio =
        lambda_p * (1.0 - mu_p) / ((1.0 - lambda_p) * mu_p);
    if (1.0 - mu_p >= 1e-9) {
        const double lead = nu[0] / (1.0 - mu_p);
        double power = 1.0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            power *= ratio;
            nu[k] = lead * power;
        }
    } else {
        // 1/(1-mu_p) cancels against one factor of the ratio.
        nu[1] = nu[0] * lambda_p / ((1.0 - lambda_p) * mu_p);
        for (std::size_t k = 2; k <= k_max; ++k) nu[k] = nu[k - 1] * ratio;
    }
    return nu;
}

double delay_nofb(double lambda_p, double mu_p) {
    require_stable(lambda_p, mu_p);
    return (1.0 - lambda_p) / (mu_p - lambda_p);
}

std::size_t geometric_cutoff(double ratio, double lead, double tol) {
    if (!(ratio > 0.0) || !(lead > 0.0)) return 1;
    if (ratio >= 1.0) return std::numeric_limits<std::size_t>::max();
    // tail beyond k: lead * ratio^(k+1) / (1 - ratio) < tol
    const double k = std::log(tol * (1.0 - ratio) / lead) / std::log(ratio);
    return k <= 1.0 ? 1 : static_cast<std::size_t>(std::ceil(k));
}

AnalysisReport analyze_nofb(const OutageProfile& profile,
                            const PolicyNoFb& policy,
                            const SensingQuality& sensing,
                            const TrafficParams& traffic) {
    profile.validate();
    policy.validate();
    sensing.validate();
    traffic.validate();

    AnalysisReport r;
    r.mu_p = mu_p(profile, policy, sensing, traffic.lambda_e);
    r.alpha = r.mu_p;
    r.gamma = r.mu_p;
    r.primary_stable = traffic.lambda_p <= r.mu_p - kStabilityMargin;

    if (r.primary_stable) {
        r.empty_prob = 1.0 - traffic.lambda_p / r.mu_p;
        r.mu_s = mu_s(profile, policy, sensing, traffic.lambda_e,
                      traffic.lambda_p);
        r.delay = delay_nofb(traffic.lambda_p, r.mu_p);
    } else {
        r.empty_prob = 0.0;
        r.mu_s = traffic.lambda_e * secondary_gain_busy(profile, policy, sensing);
        r.delay = std::numeric_limits<double>::infinity();
    }
    r.delay_feasible = r.primary_stable && r.delay <= traffic.delay_bound;
    r.secondary_stable = traffic.lambda_s < r.mu_s;
    return r;
}

}  // namespace ehcr
