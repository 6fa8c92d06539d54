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

#include "ehcr/analytic_fb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ehcr/analytic_nofb.hpp"
#include "ehcr/errors.hpp"

namespace ehcr {

namespace {

// Below this distance from 1, eta is treated as perfect service and the
// (1 - eta) denominators are cancelled analytically.
constexpr double kDegenerateEta = 1e-9;

double service_mix(double alpha, double gamma, double lambda_p) {
    return lambda_p * alpha + (1.0 - lambda_p) * gamma;
}

void require_stable(double lambda_p, double eta) {
    if (!(lambda_p < eta)) {
        throw UnstableError("primary queue unstable: lambda_p >= eta");
    }
}

}  // namespace

PrimarySuccess alpha_gamma(const OutageProfile& o, const PolicyFb& p,
                           const SensingQuality& s, double lambda_e) {
    PrimarySuccess out;
    out.alpha = mu_p(o, p, s, lambda_e);
    out.gamma = (1.0 - lambda_e) * o.primary +
                lambda_e * (p.access_retx * o.primary_conc +
                            (1.0 - p.access_retx) * o.primary);
    return out;
}

FeedbackChainStats chain_stats(double alpha, double gamma, double lambda_p) {
    FeedbackChainStats st;
    st.alpha = alpha;
    st.gamma = gamma;
    st.eta = service_mix(alpha, gamma, lambda_p);
    require_stable(lambda_p, st.eta);
    st.pi0 = (st.eta - lambda_p) / gamma;
    st.sum_pi = lambda_p;
    st.sum_eps = lambda_p / gamma * (1.0 - alpha);
    return st;
}

FeedbackStateProbs state_probs_fb(double alpha, double gamma, double lambda_p,
                                  std::size_t k_max) {
    const double eta = service_mix(alpha, gamma, lambda_p);
    require_stable(lambda_p, eta);

    FeedbackStateProbs out;
    out.first.assign(k_max + 1, 0.0);
    out.retx.assign(k_max + 1, 0.0);
    const double pi0 = (eta - lambda_p) / gamma;
    out.first[0] = pi0;
    if (k_max == 0 || lambda_p == 0.0) return out;

    out.first[1] = pi0 * lambda_p / (1.0 - lambda_p) *
                   (lambda_p + (1.0 - lambda_p) * gamma) / eta;
    out.retx[1] = pi0 * lambda_p / eta * (1.0 - alpha);

    const double ratio =
        lambda_p * (1.0 - eta) / ((1.0 - lambda_p) * eta);
    double lead_first = 0.0;
    double lead_retx = 0.0;
    double power = 1.0;
    if (1.0 - eta >= kDegenerateEta) {
        const double denom = (1.0 - eta) * (1.0 - eta);
        lead_first = pi0 * lambda_p * (1.0 - alpha) / denom;
        lead_retx = pi0 * (1.0 - lambda_p) * (1.0 - alpha) / denom;
        power = ratio * ratio;
    } else {
        // ratio^k / (1-eta)^2 = s^2 ratio^(k-2), s = lp / ((1-lp) eta)
        const double s = lambda_p / ((1.0 - lambda_p) * eta);
        lead_first = pi0 * lambda_p * (1.0 - alpha) * s * s;
        lead_retx = pi0 * (1.0 - lambda_p) * (1.0 - alpha) * s * s;
        power = 1.0;
    }
    for (std::size_t k = 2; k <= k_max; ++k) {
        out.first[k] = lead_first * power;
        out.retx[k] = lead_retx * power;
        power *= ratio;
    }
    return out;
}

double mu_s_fb(const OutageProfile& o, const PolicyFb& p,
               const SensingQuality& s, double lambda_e,
               const FeedbackChainStats& st) {
    return lambda_e * (st.pi0 * secondary_gain_idle(o, p, s) +
                       st.sum_pi * secondary_gain_busy(o, p, s) +
                       st.sum_eps * p.access_retx * o.sec_0_conc);
}

double delay_fb(double alpha, double gamma, double lambda_p) {
    const double eta = service_mix(alpha, gamma, lambda_p);
    require_stable(lambda_p, eta);
    if (1.0 - eta >= kDegenerateEta) {
        const double a = eta - lambda_p;
        const double b = 1.0 - lambda_p;
        return ((alpha - eta) * a * a + b * b * (1.0 - alpha) * eta) /
               (a * b * (1.0 - eta) * gamma);
    }
    // Near-perfect service: head packet needs one attempt plus a
    // retransmission phase with probability 1 - alpha.
    if (lambda_p == 0.0) return (1.0 + gamma - alpha) / gamma;
    const double ratio = lambda_p * (1.0 - eta) / ((1.0 - lambda_p) * eta);
    const std::size_t k_max = std::max<std::size_t>(
        2, std::min<std::size_t>(geometric_cutoff(ratio, 1.0) + 2, 1u << 20));
    const FeedbackStateProbs probs = state_probs_fb(alpha, gamma, lambda_p, k_max);
    double mean = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        mean += static_cast<double>(k) * (probs.first[k] + probs.retx[k]);
    }
    return mean / lambda_p;
}

AnalysisReport analyze_fb(const OutageProfile& profile, const PolicyFb& policy,
                          const SensingQuality& sensing,
                          const TrafficParams& traffic) {
    profile.validate();
    policy.validate();
    sensing.validate();
    traffic.validate();

    const PrimarySuccess ps =
        alpha_gamma(profile, policy, sensing, traffic.lambda_e);
    AnalysisReport r;
    r.alpha = ps.alpha;
    r.gamma = ps.gamma;
    r.mu_p = service_mix(ps.alpha, ps.gamma, traffic.lambda_p);
    r.primary_stable = traffic.lambda_p <= r.mu_p - kStabilityMargin;

    if (r.primary_stable) {
        const FeedbackChainStats st =
            chain_stats(ps.alpha, ps.gamma, traffic.lambda_p);
        r.empty_prob = st.pi0;
        r.retx_prob = st.sum_eps;
        r.mu_s = mu_s_fb(profile, policy, sensing, traffic.lambda_e, st);
        r.delay = delay_fb(ps.alpha, ps.gamma, traffic.lambda_p);
    } else {
        // Saturated primary: only F/R phases remain, in proportion to the
        // renewal cycle 1 first attempt + (1 - alpha)/gamma retransmissions.
        const double first =
            ps.gamma > 0.0 ? ps.gamma / (ps.gamma + 1.0 - ps.alpha)
                           : (ps.alpha >= 1.0 ? 1.0 : 0.0);
        const double retx = 1.0 - first;
        r.empty_prob = 0.0;
        r.retx_prob = retx;
        r.mu_s = traffic.lambda_e *
                 (first * secondary_gain_busy(profile, policy, sensing) +
                  retx * policy.access_retx * profile.sec_0_conc);
        r.delay = std::numeric_limits<double>::infinity();
    }
    r.delay_feasible = r.primary_stable && r.delay <= traffic.delay_bound;
    r.secondary_stable = traffic.lambda_s < r.mu_s;
    return r;
}

}  // namespace ehcr
