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
#include <limits>
#include <random>

#include "ehcr/errors.hpp"
#include "ehcr/outage.hpp"
#include "oracles.hpp"

using namespace ehcr;

namespace {

LinkBudget unit_link(double snr = 2.0) {
    LinkBudget l;
    l.bits_per_packet = 1.0;
    l.slot_duration = 1.0;
    l.bandwidth = 1.0;
    l.mean_snr = snr;
    l.fading_mean = 1.0;
    return l;
}

LinkBudget random_link(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LinkBudget l;
    l.bits_per_packet = 100.0 + 2000.0 * u(gen);
    l.slot_duration = 1e-3 * (0.5 + u(gen));
    l.bandwidth = 1e5 + 1e6 * u(gen);
    l.sensing_duration = l.slot_duration * (0.01 + 0.6 * u(gen));
    l.mean_snr = std::pow(10.0, 2.0 * u(gen) - 0.5);
    l.fading_mean = 0.2 + 2.0 * u(gen);
    return l;
}

}  // namespace

TEST_CASE("transmission rate") {
    LinkBudget l;
    l.bits_per_packet = 1000;
    l.slot_duration = 1;
    l.sensing_duration = 0.1;
    CHECK(transmission_rate(l, TxStart::FullSlot) == doctest::Approx(1000));
    CHECK(transmission_rate(l, TxStart::AfterSensing) == doctest::Approx(1000 / 0.9));
    l.sensing_duration = 0;
    CHECK(transmission_rate(l, TxStart::AfterSensing) ==
          transmission_rate(l, TxStart::FullSlot));
}

TEST_CASE("solo success closed form") {
    const LinkBudget l = unit_link();
    CHECK(success_prob_solo(l, TxStart::FullSlot) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(success_prob_solo(l, TxStart::FullSlot) == doctest::Approx(0.6065).epsilon(1e-4));

    LinkBudget zero = l;
    zero.bits_per_packet = 0;
    CHECK(success_prob_solo(zero, TxStart::FullSlot) == 1.0);
    CHECK(success_prob_solo(zero, TxStart::AfterSensing) == 1.0);

    for (auto mode : {PowerMode::FixedPower, PowerMode::FixedEnergy}) {
        CHECK(success_prob_solo(l, TxStart::AfterSensing, mode) ==
              success_prob_solo(l, TxStart::FullSlot, mode));
    }
}

TEST_CASE("concurrent success") {
    const LinkBudget l = unit_link();
    const double solo = success_prob_solo(l, TxStart::FullSlot);
    CHECK(success_prob_concurrent(l, 0.0, TxStart::FullSlot) == solo);
    CHECK(success_prob_concurrent(l, 2.0, TxStart::FullSlot) == doctest::Approx(solo / 2));
    CHECK(success_prob_concurrent(l, 1e12, TxStart::FullSlot) < 1e-11);
    CHECK(success_prob_concurrent(l, std::numeric_limits<double>::infinity(),
                                  TxStart::FullSlot) == 0.0);
    CHECK_THROWS_AS(success_prob_concurrent(l, -1.0, TxStart::FullSlot), InvalidArgument);
}

TEST_CASE("link validation") {
    LinkBudget l = unit_link();
    l.sensing_duration = 1.0;
    CHECK_THROWS_AS(l.validate(), InvalidArgument);
    l = unit_link();
    l.bandwidth = 0;
    CHECK_THROWS_AS(success_prob_solo(l, TxStart::FullSlot), InvalidArgument);
    l = unit_link(-1);
    CHECK_THROWS_AS(l.validate(), InvalidArgument);
}

TEST_CASE("post-sensing transmissions are worse") {
    std::mt19937_64 gen(7);
    for (int n = 0; n < 10000; ++n) {
        const LinkBudget l = random_link(gen);
        for (auto mode : {PowerMode::FixedPower, PowerMode::FixedEnergy}) {
            const double s0 = success_prob_solo(l, TxStart::FullSlot, mode);
            const double s1 = success_prob_solo(l, TxStart::AfterSensing, mode);
            if (s0 > 0.0) REQUIRE(s1 < s0);
        }
    }
}

TEST_CASE("window exponent decreases") {
    for (double la = -3; la <= 1.5; la += 0.25) {
        const double a = std::pow(10.0, la);
        double prev = window_exponent(0.01, a);
        for (double x = 0.02; x <= 1.0 + 1e-12; x += 0.01) {
            const double g = window_exponent(x, a);
            if (std::isfinite(prev)) REQUIRE(g < prev);
            prev = g;
        }
    }
}

TEST_CASE("profile construction") {
    LinkBudget p = unit_link(3.0);
    LinkBudget s = unit_link(2.0);
    s.sensing_duration = 0.0;
    OutageProfile prof = build_profile(p, s, {});
    CHECK(prof.sec_0 == prof.sec_1);
    CHECK(prof.sec_0_conc == prof.sec_0);
    CHECK(prof.primary_conc == prof.primary);

    s.sensing_duration = 0.2;
    prof = build_profile(p, s, {1.0, 0.5});
    CHECK(prof.sec_1 < prof.sec_0);
    CHECK(prof.sec_1_conc < prof.sec_0_conc);
    CHECK(prof.sec_0_conc < prof.sec_0);
    CHECK(prof.primary_conc < prof.primary);
    CHECK(prof.delta() < 1.0);
    CHECK(prof.delta_conc() < 1.0);

    const auto fig4 = OutageProfile::from_ratios(0.7, 0.14, 0.6065, 0.1820, 0.9782, 0.8);
    CHECK(fig4.sec_1 == doctest::Approx(0.6065 * 0.9782));
    CHECK(fig4.sec_1_conc == doctest::Approx(0.1820 * 0.8));
    CHECK(fig4.without_mpr().primary_conc == 0.0);
    CHECK(fig4.without_mpr().sec_1_conc == 0.0);

    CHECK_THROWS_AS(OutageProfile::from_probabilities(1.1, 0, 0, 0, 0, 0), InvalidArgument);
    CHECK_NOTHROW(OutageProfile::from_probabilities(1.0 + 1e-13, 0, 0, 0, 0, 0));
}

TEST_CASE("Monte Carlo agreement") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 5; ++n) {
        LinkBudget l = random_link(gen);
        l.bits_per_packet = l.slot_duration * l.bandwidth * (0.2 + u(gen));
        const double interferer = 3.0 * u(gen);
        const double x = 1.0 - l.sensing_duration / l.slot_duration;
        const double theta0 = std::exp2(l.bits_per_packet / (l.slot_duration * l.bandwidth)) - 1;
        const double theta1 = std::exp2(l.bits_per_packet / (l.slot_duration * x * l.bandwidth)) - 1;
        const double snr = l.mean_snr * l.fading_mean;
        const std::uint64_t seed = 100 + n;

        auto mc = oracle::rayleigh_success_mc(theta0, snr, 0.0, 200000, seed);
        CHECK(std::abs(success_prob_solo(l, TxStart::FullSlot) - mc.p) <= 4 * mc.stderr_);
        mc = oracle::rayleigh_success_mc(theta1, snr / x, interferer, 200000, seed + 50);
        CHECK(std::abs(success_prob_concurrent(l, interferer, TxStart::AfterSensing,
                                               PowerMode::FixedEnergy) - mc.p) <=
              4 * mc.stderr_);
    }
}
