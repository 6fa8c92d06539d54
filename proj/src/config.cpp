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

#include "ehcr/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ehcr/errors.hpp"

namespace ehcr {

using nlohmann::json;

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::LambdaP: return "lambda_p";
        case SweepVariable::LambdaE: return "lambda_e";
        case SweepVariable::DelayBound: return "delay_bound";
        case SweepVariable::MprOn: return "mpr_on";
    }
    return "?";
}

OutageProfile RunConfig::effective_profile() const {
    return mpr_on ? profile : profile.without_mpr();
}

OptProblem RunConfig::problem() const { return problem(scheme); }

OptProblem RunConfig::problem(Scheme s) const {
    OptProblem p;
    p.scheme = s;
    p.profile = effective_profile();
    p.sensing = sensing;
    p.traffic = traffic;
    return p;
}

SimParams RunConfig::sim_params() const {
    SimParams p;
    p.scheme = scheme;
    p.policy = policy;
    if (pins_sensing_off(scheme)) p.policy.sense = 0.0;
    if (!uses_feedback(scheme)) p.policy.access_retx = 0.0;
    p.profile = effective_profile();
    p.sensing = sensing;
    p.traffic = traffic;
    p.semantics = simulation.semantics;
    p.n_slots = simulation.slots;
    p.seed = seed;
    p.energy_capacity = simulation.energy_capacity;
    p.batches = simulation.batches;
    return p;
}

namespace {

constexpr const char* kPresetProfile = R"({
    "primary": 0.7, "primary_conc": 0.14, "sec_0": 0.6065,
    "sec_0_conc": 0.182, "delta": 0.9782, "delta_conc": 0.8})";

json base_preset() {
    json doc;
    doc["scheme"] = "Feedback";
    doc["profile"] = json::parse(kPresetProfile);
    doc["mpr"] = true;
    doc["sensing"] = {{"false_alarm", 0.1}, {"missed_detection", 0.08}};
    doc["traffic"] = {{"lambda_p", 0.126}, {"lambda_s", 1.0},
                      {"lambda_e", 0.8}, {"delay_bound", 2.0}};
    doc["policy"] = {{"ps", 0.0}, {"pf", 0.0}, {"pb", 0.0}, {"pt", 1.0}, {"pr", 0.0}};
    doc["seed"] = 1;
    return doc;
}

json lambda_p_sweep(double stop) {
    return {{"variable", "lambda_p"}, {"start", 0.0}, {"stop", stop},
            {"step", 0.025},
            {"schemes", {"Feedback", "NoFeedback", "RandomAccess"}}};
}

// ---- field readers with path diagnostics ---------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!keys.count(item.key())) fail(path + "." + item.key(), "unknown field");
    }
}

double number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required field");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& path,
                 double fallback) {
    return obj.contains(key) ? number(obj, key, path) : fallback;
}

double probability(const json& obj, const std::string& key, const std::string& path) {
    const double v = number(obj, key, path);
    if (!(v >= 0.0 && v <= 1.0)) fail(path + "." + key, "must lie in [0,1]");
    return v;
}

double probability_or(const json& obj, const std::string& key,
                      const std::string& path, double fallback) {
    return obj.contains(key) ? probability(obj, key, path) : fallback;
}

double delay_bound(const json& obj, const std::string& path) {
    if (!obj.contains("delay_bound")) return kNoDelayBound;
    const json& v = obj.at("delay_bound");
    if (v.is_null()) return kNoDelayBound;
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "Infinity" || s == "infinity") return kNoDelayBound;
        fail(path + ".delay_bound", "expected a number or \"inf\"");
    }
    const double d = number(obj, "delay_bound", path);
    if (!(d >= 1.0)) fail(path + ".delay_bound", "must be >= 1");
    return d;
}

template <typename Parse>
auto enum_field(const json& obj, const std::string& key, const std::string& path,
                Parse parse) {
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    try {
        return parse(v.get<std::string>());
    } catch (const InvalidArgument& e) {
        fail(path + "." + key, e.what());
    }
}

OutageProfile parse_profile(const json& p) {
    const std::string path = "profile";
    reject_unknown(p, path, {"primary", "primary_conc", "sec_0", "sec_1",
                             "sec_0_conc", "sec_1_conc", "delta", "delta_conc"});
    const double primary = probability(p, "primary", path);
    const double primary_conc = probability(p, "primary_conc", path);
    const double sec_0 = probability(p, "sec_0", path);
    const double sec_0_conc = probability(p, "sec_0_conc", path);
    const bool ratios = p.contains("delta") || p.contains("delta_conc");
    const bool direct = p.contains("sec_1") || p.contains("sec_1_conc");
    if (ratios == direct) {
        fail(path, "give either delta/delta_conc or sec_1/sec_1_conc");
    }
    if (ratios) {
        return OutageProfile::from_ratios(primary, primary_conc, sec_0, sec_0_conc,
                                          probability(p, "delta", path),
                                          probability(p, "delta_conc", path));
    }
    return OutageProfile::from_probabilities(primary, primary_conc, sec_0,
                                             probability(p, "sec_1", path),
                                             sec_0_conc,
                                             probability(p, "sec_1_conc", path));
}

LinkBudget parse_link(const json& l, const std::string& path) {
    reject_unknown(l, path, {"bits_per_packet", "slot_duration", "sensing_duration",
                             "bandwidth", "mean_snr", "fading_mean"});
    LinkBudget link;
    link.bits_per_packet = number(l, "bits_per_packet", path);
    link.slot_duration = number(l, "slot_duration", path);
    link.sensing_duration = number_or(l, "sensing_duration", path, 0.0);
    link.bandwidth = number(l, "bandwidth", path);
    link.mean_snr = number(l, "mean_snr", path);
    link.fading_mean = number_or(l, "fading_mean", path, 1.0);
    try {
        link.validate();
    } catch (const InvalidArgument& e) {
        fail(path, e.what());
    }
    return link;
}

OutageProfile parse_physics(const json& p) {
    const std::string path = "physics";
    reject_unknown(p, path, {"primary_link", "secondary_link", "cross", "power_mode"});
    if (!p.contains("primary_link")) fail(path + ".primary_link", "missing required field");
    if (!p.contains("secondary_link")) fail(path + ".secondary_link", "missing required field");
    const LinkBudget primary = parse_link(p.at("primary_link"), path + ".primary_link");
    const LinkBudget secondary = parse_link(p.at("secondary_link"), path + ".secondary_link");
    CrossSnr cross;
    if (p.contains("cross")) {
        const json& c = p.at("cross");
        reject_unknown(c, path + ".cross",
                       {"secondary_at_primary_rx", "primary_at_secondary_rx"});
        cross.secondary_at_primary_rx =
            number_or(c, "secondary_at_primary_rx", path + ".cross", 0.0);
        cross.primary_at_secondary_rx =
            number_or(c, "primary_at_secondary_rx", path + ".cross", 0.0);
    }
    PowerMode mode = PowerMode::FixedEnergy;
    if (p.contains("power_mode")) {
        mode = enum_field(p, "power_mode", path, [](const std::string& s) {
            if (s == "FixedEnergy") return PowerMode::FixedEnergy;
            if (s == "FixedPower") return PowerMode::FixedPower;
            throw InvalidArgument("expected FixedEnergy or FixedPower");
        });
    }
    return build_profile(primary, secondary, cross, mode);
}

std::vector<double> sweep_values(const json& s, const std::string& path) {
    std::vector<double> values;
    if (s.contains("values")) {
        if (s.contains("start") || s.contains("stop") || s.contains("step")) {
            fail(path, "give either values or start/stop/step");
        }
        const json& v = s.at("values");
        if (!v.is_array()) fail(path + ".values", "expected an array");
        for (const json& x : v) {
            if (!x.is_number()) fail(path + ".values", "expected numbers");
            values.push_back(x.get<double>());
        }
    } else {
        const double start = number(s, "start", path);
        const double stop = number(s, "stop", path);
        const double step = number(s, "step", path);
        if (!(step > 0.0)) fail(path + ".step", "must be > 0");
        if (stop < start) fail(path + ".stop", "must be >= start");
        const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= n; ++i) {
            // Round to 12 decimals so 0.1 * 3 prints as 0.3.
            values.push_back(std::round((start + i * step) * 1e12) / 1e12);
        }
    }
    if (values.empty()) fail(path + ".values", "sweep grid is empty");
    bool up = true;
    bool down = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        up = up && values[i] > values[i - 1];
        down = down && values[i] < values[i - 1];
    }
    if (!up && !down) fail(path + ".values", "sweep grid must be strictly monotone");
    return values;
}

SweepSpec parse_sweep(const json& s) {
    const std::string path = "sweep";
    reject_unknown(s, path, {"variable", "values", "start", "stop", "step",
                             "schemes", "mpr_on"});
    SweepSpec spec;
    if (!s.contains("variable")) fail(path + ".variable", "missing required field");
    spec.variable = enum_field(s, "variable", path, [](const std::string& v) {
        for (SweepVariable c : {SweepVariable::LambdaP, SweepVariable::LambdaE,
                                SweepVariable::DelayBound, SweepVariable::MprOn}) {
            if (to_string(c) == v) return c;
        }
        throw InvalidArgument("unknown sweep variable '" + v + "'");
    });
    spec.values = sweep_values(s, path);
    for (double v : spec.values) {
        const bool ok = spec.variable == SweepVariable::MprOn ? (v == 0.0 || v == 1.0)
                        : spec.variable == SweepVariable::DelayBound ? v >= 1.0
                                                                     : (v >= 0.0 && v <= 1.0);
        if (!ok) fail(path + ".values", "value " + std::to_string(v) + " out of range");
    }
    if (s.contains("schemes")) {
        const json& list = s.at("schemes");
        if (!list.is_array() || list.empty()) {
            fail(path + ".schemes", "expected a nonempty array");
        }
        spec.schemes.clear();
        for (const json& name : list) {
            if (!name.is_string()) fail(path + ".schemes", "expected scheme names");
            try {
                spec.schemes.push_back(scheme_from_string(name.get<std::string>()));
            } catch (const InvalidArgument& e) {
                fail(path + ".schemes", e.what());
            }
        }
    }
    if (s.contains("mpr_on")) {
        const json& list = s.at("mpr_on");
        if (!list.is_array() || list.empty()) {
            fail(path + ".mpr_on", "expected a nonempty array of booleans");
        }
        spec.mpr_on.clear();
        for (const json& b : list) {
            if (!b.is_boolean()) fail(path + ".mpr_on", "expected booleans");
            spec.mpr_on.push_back(b.get<bool>());
        }
    }
    return spec;
}

SolverConfig parse_solver(const json& s, std::uint64_t seed) {
    const std::string path = "solver";
    reject_unknown(s, path, {"n_starts", "max_iters", "initial_step", "step_shrink",
                             "min_step", "random_directions", "audit_step",
                             "audit_polish", "eps_feas"});
    SolverConfig c;
    c.seed = seed;
    c.n_starts = static_cast<int>(number_or(s, "n_starts", path, c.n_starts));
    c.max_iters = static_cast<int>(number_or(s, "max_iters", path, c.max_iters));
    c.initial_step = number_or(s, "initial_step", path, c.initial_step);
    c.step_shrink = number_or(s, "step_shrink", path, c.step_shrink);
    c.min_step = number_or(s, "min_step", path, c.min_step);
    c.random_directions =
        static_cast<int>(number_or(s, "random_directions", path, c.random_directions));
    c.audit_step = number_or(s, "audit_step", path, c.audit_step);
    c.audit_polish = static_cast<int>(number_or(s, "audit_polish", path, c.audit_polish));
    c.eps_feas = number_or(s, "eps_feas", path, c.eps_feas);
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        fail(path, e.what());
    }
    return c;
}

SimulationSpec parse_simulation(const json& s) {
    const std::string path = "simulation";
    reject_unknown(s, path, {"slots", "semantics", "energy_capacity", "batches"});
    SimulationSpec spec;
    const double slots = number_or(s, "slots", path, static_cast<double>(spec.slots));
    if (!(slots >= 1.0)) fail(path + ".slots", "must be >= 1");
    spec.slots = static_cast<std::uint64_t>(slots);
    if (s.contains("semantics")) {
        spec.semantics = enum_field(s, "semantics", path, [](const std::string& v) {
            return semantics_from_string(v);
        });
    }
    spec.energy_capacity = static_cast<std::int64_t>(
        number_or(s, "energy_capacity", path, static_cast<double>(spec.energy_capacity)));
    spec.batches = static_cast<int>(number_or(s, "batches", path, spec.batches));
    if (spec.batches < 2) fail(path + ".batches", "must be >= 2");
    return spec;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig4", "fig6", "fig7", "fig8"}; }

nlohmann::json preset_json(const std::string& name) {
    json doc = base_preset();
    if (name == "fig4") {
        doc["sweep"] = lambda_p_sweep(0.375);
    } else if (name == "fig6") {
        doc["traffic"]["delay_bound"] = 200.0;
        doc["sweep"] = lambda_p_sweep(0.675);
    } else if (name == "fig7") {
        doc["traffic"]["lambda_p"] = 0.2;
        doc["sweep"] = {{"variable", "lambda_e"}, {"start", 0.1}, {"stop", 1.0},
                        {"step", 0.1},
                        {"schemes", {"Feedback", "NoFeedback", "RandomAccess"}}};
    } else if (name == "fig8") {
        doc["traffic"]["lambda_e"] = 0.5;
        doc["sweep"] = lambda_p_sweep(0.375);
        doc["sweep"]["mpr_on"] = {true, false};
    } else {
        throw ConfigError("preset: unknown preset '" + name + "'");
    }
    return doc;
}

nlohmann::json load_config_file(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path file(path);
    if (!fs::exists(file) && file.is_relative()) {
        if (const char* dir = std::getenv("EHCR_CONFIG_DIR")) {
            const fs::path alt = fs::path(dir) / file;
            if (fs::exists(alt)) file = alt;
        }
    }
    std::ifstream in(file);
    if (!in) throw ConfigError(path + ": cannot open config file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        // nlohmann reports "line L, column C" inside the message.
        throw ConfigError(path + ": " + e.what());
    }
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set " + assignment + ": expected key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    std::string pointer = "/";
    for (char c : key) pointer += c == '.' ? '/' : c;
    doc[json::json_pointer(pointer)] = value;
}

RunConfig parse_config(const nlohmann::json& doc) {
    reject_unknown(doc, "config", {"scheme", "profile", "physics", "mpr", "sensing",
                                   "traffic", "policy", "solver", "sweep",
                                   "simulation", "seed", "output"});
    RunConfig cfg;
    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0))
            fail("seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("scheme")) {
        cfg.scheme = enum_field(doc, "scheme", "config",
                                [](const std::string& v) { return scheme_from_string(v); });
    }

    const bool has_profile = doc.contains("profile");
    const bool has_physics = doc.contains("physics");
    if (has_profile == has_physics) {
        fail("profile", "exactly one of profile or physics is required");
    }
    try {
        cfg.profile = has_profile ? parse_profile(doc.at("profile"))
                                  : parse_physics(doc.at("physics"));
    } catch (const InvalidArgument& e) {
        fail(has_profile ? "profile" : "physics", e.what());
    }
    if (doc.contains("mpr")) {
        if (!doc.at("mpr").is_boolean()) fail("mpr", "expected a boolean");
        cfg.mpr_on = doc.at("mpr").get<bool>();
    }

    if (!doc.contains("sensing")) fail("sensing", "missing required field");
    const json& sens = doc.at("sensing");
    reject_unknown(sens, "sensing", {"false_alarm", "missed_detection"});
    cfg.sensing.false_alarm = probability(sens, "false_alarm", "sensing");
    cfg.sensing.missed_detection = probability(sens, "missed_detection", "sensing");

    if (!doc.contains("traffic")) fail("traffic", "missing required field");
    const json& tr = doc.at("traffic");
    reject_unknown(tr, "traffic", {"lambda_p", "lambda_s", "lambda_e", "delay_bound"});
    cfg.traffic.lambda_p = probability(tr, "lambda_p", "traffic");
    cfg.traffic.lambda_s = probability_or(tr, "lambda_s", "traffic", 1.0);
    cfg.traffic.lambda_e = probability(tr, "lambda_e", "traffic");
    cfg.traffic.delay_bound = delay_bound(tr, "traffic");

    if (doc.contains("policy")) {
        const json& p = doc.at("policy");
        reject_unknown(p, "policy", {"ps", "pf", "pb", "pt", "pr"});
        cfg.policy.sense = probability_or(p, "ps", "policy", 0.0);
        cfg.policy.access_free = probability_or(p, "pf", "policy", 0.0);
        cfg.policy.access_busy = probability_or(p, "pb", "policy", 0.0);
        cfg.policy.access_direct = probability_or(p, "pt", "policy", 0.0);
        cfg.policy.access_retx = probability_or(p, "pr", "policy", 0.0);
    }
    cfg.solver = parse_solver(doc.contains("solver") ? doc.at("solver") : json::object(),
                              cfg.seed);
    if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc.at("sweep"));
    cfg.simulation = parse_simulation(
        doc.contains("simulation") ? doc.at("simulation") : json::object());
    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) fail("output", "expected a path string");
        cfg.output = doc.at("output").get<std::string>();
    }
    return cfg;
}

}  // namespace ehcr
