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

#include "ehcr/outage.hpp"

#include <cmath>
#include <string>

#include "ehcr/errors.hpp"

namespace ehcr {

double checked_probability(double p, const std::string& name) {
    if (!(p >= -kProbTolerance && p <= 1.0 + kProbTolerance)) {
        throw InvalidArgument(name + " must lie in [0,1], got " +
                              std::to_string(p));
    }
    return std::fmin(1.0, std::fmax(0.0, p));
}

void LinkBudget::validate() const {
    // b = 0 is accepted as the degenerate "nothing to send" link.
    if (!(bits_per_packet >= 0.0)) {
        throw InvalidArgument("bits_per_packet must be >= 0");
    }
    if (!(slot_duration > 0.0)) throw InvalidArgument("slot_duration must be > 0");
    if (!(bandwidth > 0.0)) throw InvalidArgument("bandwidth must be > 0");
    if (!(mean_snr > 0.0)) throw InvalidArgument("mean_snr must be > 0");
    if (!(fading_mean > 0.0)) throw InvalidArgument("fading_mean must be > 0");
    if (!(sensing_duration >= 0.0 && sensing_duration < slot_duration)) {
        throw InvalidArgument("sensing_duration must satisfy 0 <= tau < T");
    }
}

double LinkBudget::window_fraction(TxStart start) const {
    return start == TxStart::FullSlot ? 1.0
                                      : 1.0 - sensing_duration / slot_duration;
}

double LinkBudget::effective_mean_snr(TxStart start, PowerMode mode) const {
    const double snr = mean_snr * fading_mean;
    if (mode == PowerMode::FixedEnergy) return snr / window_fraction(start);
    return snr;
}

double transmission_rate(const LinkBudget& link, TxStart start) {
    link.validate();
    return link.bits_per_packet /
           (link.slot_duration * link.window_fraction(start));
}

namespace {

// 2^{r/W} - 1, the SNR threshold for decoding at rate r.
double snr_threshold(const LinkBudget& link, TxStart start) {
    return std::expm1(transmission_rate(link, start) / link.bandwidth *
                      std::log(2.0));
}

}  // namespace

double success_prob_solo(const LinkBudget& link, TxStart start,
                         PowerMode mode) {
    const double threshold = snr_threshold(link, start);
    return std::exp(-threshold / link.effective_mean_snr(start, mode));
}

double success_prob_concurrent(const LinkBudget& link, double interferer_snr,
                               TxStart start, PowerMode mode) {
    if (!(interferer_snr >= 0.0)) {
        throw InvalidArgument("interferer_snr must be >= 0");
    }
    const double threshold = snr_threshold(link, start);
    const double own = link.effective_mean_snr(start, mode);
    const double solo = std::exp(-threshold / own);
    if (std::isinf(interferer_snr)) return 0.0;
    return solo / (1.0 + threshold * interferer_snr / own);
}

double window_exponent(double x, double a) {
    return x * std::expm1(a / x);
}

OutageProfile OutageProfile::from_probabilities(double primary,
                                                double primary_conc,
                                                double sec_0, double sec_1,
                                                double sec_0_conc,
                                                double sec_1_conc) {
    OutageProfile p;
    p.primary = checked_probability(primary, "primary");
    p.primary_conc = checked_probability(primary_conc, "primary_conc");
    p.sec_0 = checked_probability(sec_0, "sec_0");
    p.sec_1 = checked_probability(sec_1, "sec_1");
    p.sec_0_conc = checked_probability(sec_0_conc, "sec_0_conc");
    p.sec_1_conc = checked_probability(sec_1_conc, "sec_1_conc");
    return p;
}

OutageProfile OutageProfile::from_ratios(double primary, double primary_conc,
                                         double sec_0, double sec_0_conc,
                                         double delta, double delta_c) {
    return from_probabilities(primary, primary_conc, sec_0, delta * sec_0,
                              sec_0_conc, delta_c * sec_0_conc);
}

void OutageProfile::validate() const {
    (void)from_probabilities(primary, primary_conc, sec_0, sec_1, sec_0_conc,
                             sec_1_conc);
}

OutageProfile OutageProfile::without_mpr() const {
    OutageProfile p = *this;
    p.primary_conc = 0.0;
    p.sec_0_conc = 0.0;
    p.sec_1_conc = 0.0;
    return p;
}

double OutageProfile::delta() const {
    return sec_0 > 0.0 ? sec_1 / sec_0 : 0.0;
}

double OutageProfile::delta_conc() const {
    return sec_0_conc > 0.0 ? sec_1_conc / sec_0_conc : 0.0;
}

OutageProfile build_profile(const LinkBudget& primary,
                            const LinkBudget& secondary, const CrossSnr& cross,
                            PowerMode mode) {
    primary.validate();
    secondary.validate();
    OutageProfile p;
    p.primary = success_prob_solo(primary, TxStart::FullSlot, mode);
    p.primary_conc = success_prob_concurrent(
        primary, cross.secondary_at_primary_rx, TxStart::FullSlot, mode);
    p.sec_0 = success_prob_solo(secondary, TxStart::FullSlot, mode);
    p.sec_1 = success_prob_solo(secondary, TxStart::AfterSensing, mode);
    p.sec_0_conc = success_prob_concurrent(
        secondary, cross.primary_at_secondary_rx, TxStart::FullSlot, mode);
    p.sec_1_conc = success_prob_concurrent(
        secondary, cross.primary_at_secondary_rx, TxStart::AfterSensing, mode);
    return p;
}

}  // namespace ehcr
