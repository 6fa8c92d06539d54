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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "ehcr/analytic_nofb.hpp"
#include "ehcr/errors.hpp"
#include "ehcr/simulator.hpp"

using namespace ehcr;

namespace {

SimParams fig4(Scheme scheme, double lambda_p) {
    SimParams p;
    p.scheme = scheme;
    p.profile = OutageProfile::from_ratios(0.7, 0.14, 0.6065, 0.1820, 0.9782, 0.8);
    p.sensing = {0.1, 0.08};
    p.traffic.lambda_p = lambda_p;
    p.traffic.lambda_s = 1.0;
    p.traffic.lambda_e = 0.8;
    p.policy.access_direct = 1.0;
    p.n_slots = 200'000;
    p.seed = 5;
    return p;
}

void require_passed(const ValidationReport& rep) {
    for (const Check& c : rep.checks) {
        CAPTURE(c.name);
        CAPTURE(c.measured);
        CAPTURE(c.expected);
        CAPTURE(c.sigma);
        CHECK(c.passed);
    }
}

}  // namespace

TEST_CASE("no energy means no secondary service") {
    SimParams p = fig4(Scheme::NoFeedback, 0.1);
    p.traffic.lambda_e = 0.0;
    for (auto sem : {SimSemantics::Exact, SimSemantics::PaperApprox}) {
        p.semantics = sem;
        const SimStats s = run(p);
        CHECK(s.mu_s.value == 0.0);
        CHECK(s.throughput_s.value == 0.0);
    }
}

TEST_CASE("same seed, same statistics") {
    SimParams p = fig4(Scheme::Feedback, 0.2);
    p.policy = {};
    p.policy.sense = 0.6;
    p.policy.access_free = 1.0;
    p.policy.access_busy = 0.1;
    p.policy.access_direct = 0.3;
    p.policy.access_retx = 0.5;
    p.n_slots = 50'000;
    const SimStats a = run(p);
    const SimStats b = run(p);
    CHECK(std::memcmp(&a.mu_p, &b.mu_p, sizeof(Estimate)) == 0);
    CHECK(a.mu_s.value == b.mu_s.value);
    CHECK(a.delay.value == b.delay.value);
    CHECK(a.departures_p == b.departures_p);
    p.seed = 6;
    CHECK(run(p).departures_p != a.departures_p);
}

TEST_CASE("paper approximation matches the closed forms") {
    require_passed(validate_closed_forms(fig4(Scheme::NoFeedback, 0.126)));

    SimParams p = fig4(Scheme::Feedback, 0.15);
    p.policy.sense = 0.5;
    p.policy.access_free = 0.9;
    p.policy.access_busy = 0.2;
    p.policy.access_direct = 0.4;
    p.policy.access_retx = 0.6;
    require_passed(validate_closed_forms(p));

    const SimStats s = run(fig4(Scheme::NoFeedback, 0.126));
    CHECK(std::abs(s.mu_p.value - 0.252) <= 4 * s.mu_p.stderr_);
    CHECK(std::abs(s.mu_s.value - 0.3154) <= 4 * s.mu_s.stderr_ + 1e-4);
    CHECK(std::abs(s.delay.value - 6.9365) <= 4 * s.delay.stderr_);
}

TEST_CASE("paper approximation drains one energy unit per slot") {
    const SimStats s = run(fig4(Scheme::NoFeedback, 0.1));
    CHECK(s.mu_e.value == 1.0);
    SimParams p = fig4(Scheme::NoFeedback, 0.1);
    p.semantics = SimSemantics::Exact;
    p.policy.access_direct = 0.5;
    const SimStats e = run(p);
    CHECK(e.mu_e.value < 1.0);
    CHECK(e.mu_e.value > 0.0);
}

TEST_CASE("lower bound") {
    SimParams p = fig4(Scheme::NoFeedback, 0.1);
    p.policy.sense = 0.5;
    p.policy.access_free = 1.0;
    p.policy.access_direct = 0.3;
    const LowerBoundReport lb = validate_lower_bound(p);
    require_passed(lb.validation);

    // approximations are vacuous when energy and data are always present
    p.traffic.lambda_e = 1.0;
    const LowerBoundReport full = validate_lower_bound(p);
    CHECK(std::abs(full.exact.mu_s.value - full.approx.mu_s.value) <=
          3 * std::hypot(full.exact.mu_s.stderr_, full.approx.mu_s.stderr_));

    p.traffic.lambda_s = 0.0;
    p.traffic.lambda_e = 0.8;
    const LowerBoundReport primary_side = validate_lower_bound(p);
    require_passed(primary_side.validation);
    CHECK(primary_side.exact.mu_s.value == 0.0);
}

TEST_CASE("unstable configuration is flagged") {
    SimParams p = fig4(Scheme::NoFeedback, 0.9);
    p.n_slots = 100'000;
    const SimStats s = run(p);
    CHECK(drift_detected(s));
    const ValidationReport rep = validate_closed_forms(p);
    CHECK(rep.unstable_detected);
    CHECK(rep.passed());
}

TEST_CASE("invalid parameters") {
    SimParams p = fig4(Scheme::NoFeedback, 0.1);
    p.n_slots = 0;
    CHECK_THROWS_AS(run(p), InvalidArgument);
    p = fig4(Scheme::NoFeedback, 1.5);
    CHECK_THROWS_AS(run(p), InvalidArgument);
}
