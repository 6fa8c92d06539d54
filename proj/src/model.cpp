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

#include "ehcr/model.hpp"

#include <string>

#include "ehcr/errors.hpp"

namespace ehcr {

void PolicyNoFb::validate() const {
    checked_probability(sense, "ps");
    checked_probability(access_free, "pf");
    checked_probability(access_busy, "pb");
    checked_probability(access_direct, "pt");
}

void PolicyFb::validate() const {
    PolicyNoFb::validate();
    checked_probability(access_retx, "pr");
}

void SensingQuality::validate() const {
    checked_probability(false_alarm, "P_FA");
    checked_probability(missed_detection, "P_MD");
}

void TrafficParams::validate() const {
    checked_probability(lambda_p, "lambda_p");
    checked_probability(lambda_s, "lambda_s");
    checked_probability(lambda_e, "lambda_e");
    if (!(delay_bound >= 1.0)) {
        throw InvalidArgument("delay_bound must be >= 1 slot");
    }
}

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::NoFeedback: return "NoFeedback";
        case Scheme::Feedback: return "Feedback";
        case Scheme::RandomAccess: return "RandomAccess";
        case Scheme::RandomAccessFeedback: return "RandomAccessFeedback";
    }
    return "?";
}

Scheme scheme_from_string(std::string_view name) {
    for (Scheme s : {Scheme::NoFeedback, Scheme::Feedback, Scheme::RandomAccess,
                     Scheme::RandomAccessFeedback}) {
        if (to_string(s) == name) return s;
    }
    throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

bool uses_feedback(Scheme scheme) {
    return scheme == Scheme::Feedback || scheme == Scheme::RandomAccessFeedback;
}

bool pins_sensing_off(Scheme scheme) {
    return scheme == Scheme::RandomAccess ||
           scheme == Scheme::RandomAccessFeedback;
}

double access_prob_busy(const PolicyNoFb& p, const SensingQuality& s) {
    return (1.0 - p.sense) * p.access_direct +
           p.sense * s.missed_detection * p.access_free +
           p.sense * (1.0 - s.missed_detection) * p.access_busy;
}

double secondary_gain_idle(const OutageProfile& o, const PolicyNoFb& p,
                           const SensingQuality& s) {
    return (1.0 - p.sense) * p.access_direct * o.sec_0 +
           p.sense * p.access_busy * s.false_alarm * o.sec_1 +
           p.sense * p.access_free * (1.0 - s.false_alarm) * o.sec_1;
}

double secondary_gain_busy(const OutageProfile& o, const PolicyNoFb& p,
                           const SensingQuality& s) {
    return (1.0 - p.sense) * p.access_direct * o.sec_0_conc +
           p.sense * p.access_free * s.missed_detection * o.sec_1_conc +
           p.sense * p.access_busy * (1.0 - s.missed_detection) * o.sec_1_conc;
}

double min_service_for_delay(double lambda_p, double bound) {
    return lambda_p + (1.0 - lambda_p) / bound;
}

}  // namespace ehcr
