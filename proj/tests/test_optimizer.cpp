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

#include "ehcr/errors.hpp"
#include "ehcr/optimizer.hpp"

using namespace ehcr;

namespace {

OptProblem fig4(Scheme scheme, double lambda_p, double bound) {
    OptProblem p;
    p.scheme = scheme;
    p.profile = OutageProfile::from_ratios(0.7, 0.14, 0.6065, 0.1820, 0.9782, 0.8);
    p.sensing = {0.1, 0.08};
    p.traffic.lambda_p = lambda_p;
    p.traffic.lambda_e = 0.8;
    p.traffic.delay_bound = bound;
    return p;
}

bool same_policy(const PolicyFb& a, const PolicyFb& b) {
    return a.sense == b.sense && a.access_free == b.access_free &&
           a.access_busy == b.access_busy && a.access_direct == b.access_direct &&
           a.access_retx == b.access_retx;
}

}  // namespace

TEST_CASE("decision variables") {
    CHECK(decision_variables(Scheme::NoFeedback).size() == 4);
    CHECK(decision_variables(Scheme::Feedback).size() == 5);
    CHECK(decision_variables(Scheme::RandomAccess).size() == 1);
    CHECK(decision_variables(Scheme::RandomAccessFeedback).size() == 2);
    const PolicyFb p = policy_from_vector(Scheme::RandomAccess, {0.3});
    CHECK(p.sense == 0.0);
    CHECK(p.access_direct == 0.3);
}

TEST_CASE("empty primary queue favors direct access") {
    const OptResult r = solve(fig4(Scheme::NoFeedback, 0.0, kNoDelayBound));
    REQUIRE(r.feasible);
    CHECK(r.mu_s == doctest::Approx(0.8 * 0.6065).epsilon(1e-9));
    CHECK(r.policy.sense == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.policy.access_direct == doctest::Approx(1.0).epsilon(1e-9));
    const OptResult g = grid_oracle(fig4(Scheme::NoFeedback, 0.0, kNoDelayBound), 0.1);
    CHECK(g.mu_s == doctest::Approx(0.4852).epsilon(1e-12));
}

TEST_CASE("infeasible delay bound") {
    // silent policy already misses the bound: 0.5 + 0.5 / 1.2 > 0.7
    OptProblem p = fig4(Scheme::Feedback, 0.5, 1.2);
    const OptResult r = solve(p);
    CHECK_FALSE(r.feasible);
    CHECK(r.mu_s == 0.0);
    CHECK_FALSE(grid_oracle(p, 0.25).feasible);
}

TEST_CASE("zero energy") {
    OptProblem p = fig4(Scheme::Feedback, 0.1, 5);
    p.traffic.lambda_e = 0.0;
    const OptResult g = grid_oracle(p, 0.5);
    CHECK(g.feasible);
    CHECK(g.mu_s == 0.0);
    // ties resolve to the smallest policy
    CHECK(same_policy(g.policy, PolicyFb{}));
    CHECK_THROWS_AS(grid_oracle(p, 0.0), InvalidArgument);
    CHECK_THROWS_AS(grid_oracle(p, 0.6), InvalidArgument);
}

TEST_CASE("solver reaches the grid optimum") {
    for (Scheme s : {Scheme::NoFeedback, Scheme::Feedback, Scheme::RandomAccess}) {
        for (double lp : {0.05, 0.2}) {
            for (double bound : {2.0, 200.0}) {
                const OptProblem p = fig4(s, lp, bound);
                const OptResult r = solve(p);
                const OptResult g = grid_oracle(p, 0.05);
                CAPTURE(lp);
                CAPTURE(bound);
                REQUIRE(r.feasible == g.feasible);
                CHECK(r.mu_s >= g.mu_s - 1e-6);
                if (r.feasible) {
                    const AnalysisReport rep = evaluate_policy(p, r.policy);
                    CHECK(satisfies_constraints(p, rep, 1e-9));
                    CHECK(rep.mu_s == r.mu_s);
                }
                for (double v : {r.policy.sense, r.policy.access_free, r.policy.access_busy,
                                 r.policy.access_direct, r.policy.access_retx}) {
                    CHECK(v >= 0.0);
                    CHECK(v <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("determinism") {
    const OptProblem p = fig4(Scheme::Feedback, 0.15, 2.0);
    SolverConfig c;
    c.seed = 42;
    const OptResult a = solve(p, c);
    const OptResult b = solve(p, c);
    CHECK(a.mu_s == b.mu_s);
    CHECK(same_policy(a.policy, b.policy));
    CHECK(a.meta.iterations == b.meta.iterations);
}

TEST_CASE("larger delay bound never hurts") {
    for (Scheme s : {Scheme::NoFeedback, Scheme::Feedback}) {
        double prev = -1.0;
        for (double bound : {1.5, 2.0, 5.0, 200.0, kNoDelayBound}) {
            const OptResult r = solve(fig4(s, 0.15, bound));
            CHECK(r.mu_s >= prev - 1e-9);
            prev = r.mu_s;
        }
    }
}

TEST_CASE("solver config validation") {
    SolverConfig c;
    c.n_starts = 0;
    CHECK_THROWS_AS(solve(fig4(Scheme::NoFeedback, 0.1, 2.0), c), InvalidArgument);
}
