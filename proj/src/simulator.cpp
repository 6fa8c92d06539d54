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

#include "ehcr/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <random>

#include "ehcr/analytic_fb.hpp"
#include "ehcr/analytic_nofb.hpp"
#include "ehcr/errors.hpp"

namespace ehcr {

std::string_view to_string(SimSemantics semantics) {
    return semantics == SimSemantics::Exact ? "Exact" : "PaperApprox";
}

SimSemantics semantics_from_string(std::string_view name) {
    if (name == "Exact") return SimSemantics::Exact;
    if (name == "PaperApprox") return SimSemantics::PaperApprox;
    throw InvalidArgument("unknown semantics '" + std::string(name) + "'");
}

void SimParams::validate() const {
    policy.validate();
    profile.validate();
    sensing.validate();
    traffic.validate();
    if (n_slots < 1) throw InvalidArgument("n_slots must be >= 1");
    if (batches < 1) throw InvalidArgument("batches must be >= 1");
}

namespace {

// One generator per decision category. Every stream advances exactly once
// per slot whether or not its draw is used, so two runs with the same seed
// see the same numbers category by category (common random numbers).
enum Stream : std::size_t {
    kPrimaryArrival,
    kSecondaryArrival,
    kEnergyArrival,
    kSenseDecision,
    kSensingOutcome,
    kAccessDecision,
    kPrimaryChannel,
    kSecondaryChannel,
    kStreamCount,
};

class StreamSet {
 public:
    explicit StreamSet(std::uint64_t seed) {
        for (std::size_t s = 0; s < kStreamCount; ++s) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed),
                              static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(s)};
            engines_[s].seed(seq);
        }
    }

    void draw(std::array<double, kStreamCount>& u) {
        for (std::size_t s = 0; s < kStreamCount; ++s) {
            u[s] = static_cast<double>(engines_[s]() >> 11) * 0x1.0p-53;
        }
    }

 private:
    std::array<std::mt19937_64, kStreamCount> engines_;
};

struct Batch {
    double slots = 0;
    double busy = 0;
    double primary_success = 0;
    double secondary_success = 0;
    double energy_slots = 0;
    double energy_used = 0;
    double real_departures = 0;
    double delay_sum = 0;
    double delay_count = 0;
    double qp_sum = 0;
    double qs_sum = 0;
    double empty = 0;
    double retx = 0;
    double retx_success = 0;
    double first = 0;
    double first_success = 0;
};

template <typename Num, typename Den>
Estimate ratio_estimate(const std::vector<Batch>& batches, Num num, Den den) {
    double total_num = 0.0;
    double total_den = 0.0;
    std::vector<double> per_batch;
    for (const Batch& b : batches) {
        total_num += num(b);
        total_den += den(b);
        if (den(b) > 0.0) per_batch.push_back(num(b) / den(b));
    }
    Estimate e;
    e.value = total_den > 0.0 ? total_num / total_den : 0.0;
    if (per_batch.size() >= 2) {
        double mean = 0.0;
        for (double v : per_batch) mean += v;
        mean /= static_cast<double>(per_batch.size());
        double var = 0.0;
        for (double v : per_batch) var += (v - mean) * (v - mean);
        var /= static_cast<double>(per_batch.size() - 1);
        e.stderr_ = std::sqrt(var / static_cast<double>(per_batch.size()));
    }
    return e;
}

}  // namespace

SimStats run(const SimParams& params) {
    params.validate();
    const PolicyFb& pol = params.policy;
    const OutageProfile& prof = params.profile;
    const SensingQuality& sens = params.sensing;
    const TrafficParams& tr = params.traffic;
    const bool feedback = uses_feedback(params.scheme);
    const bool exact = params.semantics == SimSemantics::Exact;

    const std::uint64_t n = params.n_slots;
    const auto n_batches = static_cast<std::uint64_t>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(params.batches), n));
    std::vector<Batch> batches(n_batches);
    const std::uint64_t decile = std::max<std::uint64_t>(1, n / 10);

    StreamSet streams(params.seed);
    std::array<double, kStreamCount> u{};
    std::deque<std::uint64_t> qp;  // arrival slot of each queued packet
    std::int64_t qs = 0;
    std::int64_t qe = 0;
    bool last_nack = false;

    SimStats st;
    st.slots = n;
    double arrivals_p = 0.0;
    double first_decile_sum = 0.0;
    double last_decile_sum = 0.0;

    for (std::uint64_t t = 0; t < n; ++t) {
        Batch& b = batches[t * n_batches / n];
        streams.draw(u);
        b.slots += 1;

        const bool primary_active = !qp.empty();
        const bool retx_phase = primary_active && last_nack;
        if (!primary_active) b.empty += 1;

        const bool energized = qe > 0;
        const bool eligible = energized && (!exact || qs > 0);
        bool transmit = false;
        TxStart start = TxStart::FullSlot;
        if (eligible) {
            if (feedback && retx_phase) {
                transmit = u[kAccessDecision] < pol.access_retx;
            } else if (u[kSenseDecision] < pol.sense) {
                start = TxStart::AfterSensing;
                bool declared_busy = false;
                if (primary_active) {
                    declared_busy = u[kSensingOutcome] < 1.0 - sens.missed_detection;
                    ++st.busy_sensed;
                    if (!declared_busy) ++st.busy_declared_free;
                } else {
                    declared_busy = u[kSensingOutcome] < sens.false_alarm;
                    ++st.idle_sensed;
                    if (declared_busy) ++st.idle_declared_busy;
                }
                transmit = u[kAccessDecision] <
                           (declared_busy ? pol.access_busy : pol.access_free);
            } else {
                transmit = u[kAccessDecision] < pol.access_direct;
            }
        }

        const bool secondary_ok =
            transmit && u[kSecondaryChannel] < prof.secondary(primary_active, start);
        const bool primary_ok =
            primary_active &&
            u[kPrimaryChannel] < (transmit ? prof.primary_conc : prof.primary);

        if (energized) {
            b.energy_slots += 1;
            if (!exact || transmit) {
                --qe;
                b.energy_used += 1;
            }
        }
        if (secondary_ok) {
            b.secondary_success += 1;
            if (qs > 0) {
                --qs;
                b.real_departures += 1;
            }
        }
        if (primary_active) {
            b.busy += 1;
            if (retx_phase) {
                b.retx += 1;
                if (primary_ok) b.retx_success += 1;
            } else {
                b.first += 1;
                if (primary_ok) b.first_success += 1;
            }
            if (primary_ok) {
                b.primary_success += 1;
                b.delay_sum += static_cast<double>(t - qp.front());
                b.delay_count += 1;
                qp.pop_front();
                ++st.departures_p;
            }
        }
        last_nack = primary_active && !primary_ok;

        if (u[kPrimaryArrival] < tr.lambda_p) {
            qp.push_back(t);
            arrivals_p += 1.0;
        }
        if (u[kSecondaryArrival] < tr.lambda_s) ++qs;
        if (u[kEnergyArrival] < tr.lambda_e &&
            (params.energy_capacity < 0 || qe < params.energy_capacity)) {
            ++qe;
        }

        const auto qlen = static_cast<double>(qp.size());
        b.qp_sum += qlen;
        b.qs_sum += static_cast<double>(qs);
        if (t < decile) first_decile_sum += qlen;
        if (t >= n - decile) last_decile_sum += qlen;
    }

    auto slots = [](const Batch& b) { return b.slots; };
    st.mu_p = ratio_estimate(batches, [](const Batch& b) { return b.primary_success; },
                             [](const Batch& b) { return b.busy; });
    st.mu_s = ratio_estimate(batches, [](const Batch& b) { return b.secondary_success; }, slots);
    st.mu_e = ratio_estimate(batches, [](const Batch& b) { return b.energy_used; },
                             [](const Batch& b) { return b.energy_slots; });
    st.throughput_s = ratio_estimate(
        batches, [](const Batch& b) { return b.real_departures; }, slots);
    st.delay = ratio_estimate(batches, [](const Batch& b) { return b.delay_sum; },
                              [](const Batch& b) { return b.delay_count; });
    st.mean_qp = ratio_estimate(batches, [](const Batch& b) { return b.qp_sum; }, slots);
    st.mean_qs = ratio_estimate(batches, [](const Batch& b) { return b.qs_sum; }, slots);
    st.empty_frac_p = ratio_estimate(batches, [](const Batch& b) { return b.empty; }, slots);
    st.retx_frac = ratio_estimate(batches, [](const Batch& b) { return b.retx; }, slots);
    st.alpha = ratio_estimate(batches, [](const Batch& b) { return b.first_success; },
                              [](const Batch& b) { return b.first; });
    st.gamma = ratio_estimate(batches, [](const Batch& b) { return b.retx_success; },
                              [](const Batch& b) { return b.retx; });
    st.arrival_rate_p = arrivals_p / static_cast<double>(n);
    st.qp_first_decile = first_decile_sum / static_cast<double>(decile);
    st.qp_last_decile = last_decile_sum / static_cast<double>(decile);
    return st;
}

bool drift_detected(const SimStats& stats) {
    return stats.qp_last_decile > 10.0 * std::max(stats.qp_first_decile, 1.0);
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.passed || !c.asserted; });
}

namespace {

Check make_check(std::string name, double measured, double expected,
                 double sigma, double n_sigma) {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = expected;
    c.sigma = sigma;
    c.passed = std::abs(measured - expected) <= n_sigma * sigma + 1e-12;
    return c;
}

// One-sided: measured >= expected - n_sigma * sigma.
Check make_lower_check(std::string name, double measured, double expected,
                       double sigma, double n_sigma) {
    Check c = make_check(std::move(name), measured, expected, sigma, n_sigma);
    c.passed = measured >= expected - n_sigma * sigma - 1e-12;
    return c;
}

double binomial_sigma(double p, std::uint64_t n) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

AnalysisReport analytic_for(const SimParams& params) {
    if (uses_feedback(params.scheme)) {
        return analyze_fb(params.profile, params.policy, params.sensing,
                          params.traffic);
    }
    return analyze_nofb(params.profile, params.policy, params.sensing,
                        params.traffic);
}

}  // namespace

ValidationReport validate_closed_forms(const SimParams& params, double n_sigma) {
    SimParams p = params;
    p.semantics = SimSemantics::PaperApprox;
    const SimStats st = run(p);
    const AnalysisReport an = analytic_for(p);

    ValidationReport rep;
    rep.unstable_detected = !an.primary_stable || drift_detected(st);
    auto& c = rep.checks;
    if (uses_feedback(p.scheme)) {
        c.push_back(make_check("alpha", st.alpha.value, an.alpha, st.alpha.stderr_, n_sigma));
        c.push_back(make_check("gamma", st.gamma.value, an.gamma, st.gamma.stderr_, n_sigma));
        c.push_back(make_check("retx_frac", st.retx_frac.value, an.retx_prob,
                               st.retx_frac.stderr_, n_sigma));
    } else {
        c.push_back(make_check("mu_p", st.mu_p.value, an.mu_p, st.mu_p.stderr_, n_sigma));
    }
    c.push_back(make_check("mu_s", st.mu_s.value, an.mu_s, st.mu_s.stderr_, n_sigma));
    c.push_back(make_check("empty_frac_p", st.empty_frac_p.value, an.empty_prob,
                           st.empty_frac_p.stderr_, n_sigma));
    if (st.departures_p > 0) {
        c.push_back(make_check("delay", st.delay.value, an.delay, st.delay.stderr_, n_sigma));
        const double lam = st.arrival_rate_p;
        const double sigma = std::hypot(st.mean_qp.stderr_, lam * st.delay.stderr_);
        c.push_back(make_check("little_law", st.mean_qp.value, lam * st.delay.value,
                               sigma, n_sigma));
    }
    if (st.idle_sensed > 0) {
        const double pfa = p.sensing.false_alarm;
        c.push_back(make_check(
            "false_alarm_freq",
            static_cast<double>(st.idle_declared_busy) / static_cast<double>(st.idle_sensed),
            pfa, binomial_sigma(pfa, st.idle_sensed), n_sigma));
    }
    if (st.busy_sensed > 0) {
        const double pmd = p.sensing.missed_detection;
        c.push_back(make_check(
            "missed_detection_freq",
            static_cast<double>(st.busy_declared_free) / static_cast<double>(st.busy_sensed),
            pmd, binomial_sigma(pmd, st.busy_sensed), n_sigma));
    }
    if (rep.unstable_detected) {
        for (Check& check : c) check.asserted = false;
    }
    return rep;
}

LowerBoundReport validate_lower_bound(const SimParams& params, double n_sigma) {
    LowerBoundReport out;
    SimParams p = params;
    p.semantics = SimSemantics::Exact;
    out.exact = run(p);
    p.semantics = SimSemantics::PaperApprox;
    out.approx = run(p);
    out.analytic = analytic_for(p);

    ValidationReport& rep = out.validation;
    rep.unstable_detected = drift_detected(out.exact) || drift_detected(out.approx);
    if (params.traffic.lambda_s > 0.0) {
        rep.checks.push_back(make_lower_check(
            "mu_s_exact_ge_approx", out.exact.mu_s.value, out.approx.mu_s.value,
            std::hypot(out.exact.mu_s.stderr_, out.approx.mu_s.stderr_), n_sigma));
        rep.checks.push_back(make_lower_check(
            "mu_s_exact_ge_analytic", out.exact.mu_s.value, out.analytic.mu_s,
            out.exact.mu_s.stderr_, n_sigma));
    } else {
        rep.checks.push_back(make_lower_check(
            "mu_p_exact_ge_approx", out.exact.mu_p.value, out.approx.mu_p.value,
            std::hypot(out.exact.mu_p.stderr_, out.approx.mu_p.stderr_), n_sigma));
    }
    if (rep.unstable_detected) {
        for (Check& check : rep.checks) check.asserted = false;
    }
    return out;
}

}  // namespace ehcr
