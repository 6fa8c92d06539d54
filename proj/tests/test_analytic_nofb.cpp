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
#include <numeric>
#include <random>

#include "ehcr/analytic_nofb.hpp"
#include "ehcr/errors.hpp"
#include "oracles.hpp"

using namespace ehcr;

namespace {

const OutageProfile kFig4 =
    OutageProfile::from_ratios(0.7, 0.14, 0.6065, 0.1820, 0.9782, 0.8);
const SensingQuality kSensing{0.1, 0.08};

PolicyNoFb direct(double pt) {
    PolicyNoFb p;
    p.access_direct = pt;
    return p;
}

PolicyNoFb random_policy(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {u(gen), u(gen), u(gen), u(gen)};
}

}  // namespace

TEST_CASE("primary service rate") {
    CHECK(mu_p(kFig4, direct(1), kSensing, 0.0) == doctest::Approx(0.7));
    CHECK(mu_p(kFig4, direct(0), kSensing, 0.8) == doctest::Approx(0.7));
    CHECK(mu_p(kFig4, direct(1), kSensing, 0.8) == doctest::Approx(0.252).epsilon(1e-14));

    std::mt19937_64 gen(3);
    for (int n = 0; n < 1000; ++n) {
        const PolicyNoFb p = random_policy(gen);
        const double m = mu_p(kFig4, p, kSensing, 0.8);
        REQUIRE(m >= 0.14 - 1e-15);
        REQUIRE(m <= 0.7 + 1e-15);
        // nonincreasing in every access probability
        for (double PolicyNoFb::*f : {&PolicyNoFb::access_free, &PolicyNoFb::access_busy,
                                      &PolicyNoFb::access_direct}) {
            PolicyNoFb q = p;
            q.*f = std::min(1.0, q.*f + 0.1);
            REQUIRE(mu_p(kFig4, q, kSensing, 0.8) <= m + 1e-15);
        }
    }
}

TEST_CASE("secondary service rate") {
    CHECK(mu_s(kFig4, direct(1), kSensing, 0.0, 0.1) == 0.0);
    CHECK(mu_s(kFig4, direct(1), kSensing, 0.8, 0.126) ==
          doctest::Approx(0.8 * (0.5 * 0.6065 + 0.5 * 0.1820)).epsilon(1e-12));
    CHECK(mu_s(kFig4, direct(1), kSensing, 0.8, 0.126) == doctest::Approx(0.3154).epsilon(1e-4));

    const SensingQuality perfect{0.0, 0.0};
    const PolicyNoFb sensing_only{1, 1, 0, 0};
    CHECK(mu_s(kFig4, sensing_only, perfect, 0.5, 0.0) == doctest::Approx(0.5 * kFig4.sec_1));

    CHECK_THROWS_AS(mu_s(kFig4, direct(1), kSensing, 0.8, 0.252), UnstableError);

    std::mt19937_64 gen(5);
    for (int n = 0; n < 500; ++n) {
        const PolicyNoFb p = random_policy(gen);
        double prev = 0.0;
        for (double le = 0.0; le <= 1.0; le += 0.05) {
            const double m = mu_s(kFig4, p, kSensing, le, 0.0);
            REQUIRE(m >= prev - 1e-15);
            REQUIRE(m <= le + 1e-15);
            prev = m;
        }
    }
}

TEST_CASE("stationary distribution") {
    auto nu = stationary_dist_nofb(0.0, 0.5, 5);
    CHECK(nu[0] == 1.0);
    CHECK(std::accumulate(nu.begin() + 1, nu.end(), 0.0) == 0.0);
    nu = stationary_dist_nofb(0.126, 0.252, 10);
    CHECK(nu[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(stationary_dist_nofb(0.3, 0.3, 10), UnstableError);

    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        const double mu = 0.05 + 0.95 * u(gen);
        const double lam = mu * u(gen) * 0.9;
        const double rho = lam * (1 - mu) / ((1 - lam) * mu);
        if (rho > 0.8) continue;
        const std::size_t K = oracle::tail_cutoff(rho, 1e-15);
        const auto ref = oracle::power_iteration(oracle::nofb_chain(lam, mu, K));
        nu = stationary_dist_nofb(lam, mu, K);
        double l1 = 0.0;
        for (std::size_t k = 0; k <= K; ++k) l1 += std::abs(ref[k] - nu[k]);
        REQUIRE(l1 <= 1e-8);
    }

    // closed-form normalization
    for (int n = 0; n < 1000; ++n) {
        const double mu = 0.01 + 0.98 * u(gen);
        const double lam = mu * u(gen) * 0.999;
        const double nu0 = 1 - lam / mu;
        const double rho = lam * (1 - mu) / ((1 - lam) * mu);
        const double total = nu0 + nu0 / (1 - mu) * rho / (1 - rho);
        REQUIRE(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("perfect service") {
    const auto nu = stationary_dist_nofb(0.3, 1.0, 6);
    CHECK(nu[0] == doctest::Approx(0.7));
    CHECK(nu[1] == doctest::Approx(0.3));
    CHECK(nu[2] == 0.0);
    CHECK(delay_nofb(0.3, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("delay") {
    CHECK(delay_nofb(0.0, 0.4) == doctest::Approx(2.5));
    CHECK(delay_nofb(0.126, 0.252) == doctest::Approx(6.9365079365).epsilon(1e-10));
    CHECK_THROWS_AS(delay_nofb(0.5, 0.5), UnstableError);

    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 1000; ++n) {
        const double mu = 0.05 + 0.95 * u(gen);
        const double lam = std::max(1e-3, mu * u(gen) * 0.98);
        if (lam >= mu) continue;
        const double rho = lam * (1 - mu) / ((1 - lam) * mu);
        const std::size_t K = geometric_cutoff(rho, 1.0, 1e-16) + 50;
        const auto nu = stationary_dist_nofb(lam, mu, K);
        const double d = delay_nofb(lam, mu);
        REQUIRE(std::abs(oracle::little_delay(nu, lam) - d) <= 1e-8 * std::max(1.0, d));
        REQUIRE(d >= 1.0);
        REQUIRE(d >= 1.0 / mu - 1e-12);
        REQUIRE(delay_nofb(lam, std::min(1.0, mu + 0.01)) <= d);

        const double bound = 1 + 50 * u(gen);
        REQUIRE((d <= bound) == (mu >= min_service_for_delay(lam, bound)));
    }
}

TEST_CASE("analysis report") {
    TrafficParams t;
    t.lambda_p = 0.126;
    t.lambda_e = 0.8;
    t.delay_bound = 2;
    const AnalysisReport r = analyze_nofb(kFig4, direct(1), kSensing, t);
    CHECK(r.mu_p == doctest::Approx(0.252));
    CHECK(r.delay == doctest::Approx(6.9365).epsilon(1e-4));
    CHECK(r.primary_stable);
    CHECK_FALSE(r.delay_feasible);
    CHECK(r.mu_s == mu_s(kFig4, direct(1), kSensing, 0.8, 0.126));
    CHECK_FALSE(r.secondary_stable);

    t.lambda_e = 0.0;
    t.lambda_p = 0.69;
    CHECK(analyze_nofb(kFig4, direct(1), kSensing, t).primary_stable);
    t.lambda_p = 0.7;
    const AnalysisReport u = analyze_nofb(kFig4, direct(1), kSensing, t);
    CHECK_FALSE(u.primary_stable);
    CHECK_FALSE(u.delay_feasible);
    CHECK(std::isinf(u.delay));
}
