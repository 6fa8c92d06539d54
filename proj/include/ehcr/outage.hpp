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

// Success (complement-of-outage) probabilities over Rayleigh block-fading
// links. A packet of b bits sent over the whole slot needs rate b/T; sent
// after a sensing phase of length tau it needs b/(T - tau).

namespace ehcr {

/// When a transmission starts inside the slot.
enum class TxStart {
    FullSlot,      // at the slot boundary, duration T
    AfterSensing,  // after sensing for tau seconds, duration T - tau
};

/// How the transmitter reacts to a shortened transmission window.
enum class PowerMode {
    FixedPower,   // same power, SNR unchanged
    FixedEnergy,  // one energy unit per packet, SNR scaled by T/(T - tau)
};

/// Physical parameters of one transmitter -> receiver link.
struct LinkBudget {
    double bits_per_packet = 1.0;   // b
    double slot_duration = 1.0;     // T [s]
    double sensing_duration = 0.0;  // tau [s], 0 <= tau < T
    double bandwidth = 1.0;         // W [Hz]
    double mean_snr = 1.0;          // gamma, received SNR at unit channel gain
    double fading_mean = 1.0;       // mean of the exponential channel gain

    /// Throws InvalidArgument when a field is out of its domain.
    void validate() const;

    /// Fraction of the slot left for transmission, 1 - i*tau/T.
    double window_fraction(TxStart start) const;

    /// gamma * fading_mean, scaled by 1/x for FixedEnergy post-sensing sends.
    double effective_mean_snr(TxStart start, PowerMode mode) const;
};

/// Required information rate b / (T (1 - i tau / T)) in bits per second.
double transmission_rate(const LinkBudget& link, TxStart start);

/// Pr{W log2(1 + gamma beta) >= r_i} for exponential beta.
double success_prob_solo(const LinkBudget& link, TxStart start,
                         PowerMode mode = PowerMode::FixedEnergy);

/// Success probability when a concurrent transmitter interferes.
/// `interferer_snr` is gamma_v * mean(beta_v) at this link's receiver.
double success_prob_concurrent(const LinkBudget& link, double interferer_snr,
                               TxStart start,
                               PowerMode mode = PowerMode::FixedEnergy);

/// x (exp(a / x) - 1). Up to a positive factor this is the outage exponent of
/// a fixed-energy transmission squeezed into a fraction x of the slot, with
/// a = b ln 2 / (W T). Strictly decreasing on (0, 1] for a > 0.
double window_exponent(double x, double a);

/// The six success probabilities that drive the queue service rates.
/// "sec_1" entries are for transmissions after sensing, "sec_0" for the
/// full slot; "_conc" entries hold when the other user transmits too.
struct OutageProfile {
    double primary = 0.0;
    double primary_conc = 0.0;
    double sec_0 = 0.0;
    double sec_1 = 0.0;
    double sec_0_conc = 0.0;
    double sec_1_conc = 0.0;

    /// Direct construction; validates each entry against [0,1].
    static OutageProfile from_probabilities(double primary, double primary_conc,
                                            double sec_0, double sec_1,
                                            double sec_0_conc,
                                            double sec_1_conc);

    /// Builds a profile from full-slot values and the post-sensing ratios
    /// delta = sec_1 / sec_0 and delta_c = sec_1_conc / sec_0_conc.
    static OutageProfile from_ratios(double primary, double primary_conc,
                                     double sec_0, double sec_0_conc,
                                     double delta, double delta_c);

    /// Throws InvalidArgument if an entry lies outside [0,1].
    void validate() const;

    /// Copy with every concurrent success probability set to zero
    /// (collision channel, no multipacket reception).
    OutageProfile without_mpr() const;

    /// Secondary success probability for the given slot situation.
    double secondary(bool primary_active, TxStart start) const {
        if (primary_active) {
            return start == TxStart::FullSlot ? sec_0_conc : sec_1_conc;
        }
        return start == TxStart::FullSlot ? sec_0 : sec_1;
    }

    /// sec_1 / sec_0 and sec_1_conc / sec_0_conc (0 when the denominator is 0).
    double delta() const;
    double delta_conc() const;
};

/// Interference strengths gamma_v * mean(beta_v) seen at each receiver.
struct CrossSnr {
    double secondary_at_primary_rx = 0.0;
    double primary_at_secondary_rx = 0.0;
};

/// Assembles an OutageProfile from the two links. The primary always starts
/// at the slot boundary; its concurrent value uses the secondary's
/// interference level as given in `cross`.
OutageProfile build_profile(const LinkBudget& primary,
                            const LinkBudget& secondary, const CrossSnr& cross,
                            PowerMode mode = PowerMode::FixedEnergy);

}  // namespace ehcr
