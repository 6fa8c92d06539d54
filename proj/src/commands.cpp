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

#include "ehcr/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ehcr/errors.hpp"

namespace ehcr {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string flag(bool b) { return b ? "true" : "false"; }

// Joins fields with commas and terminates with LF.
class Row {
 public:
    Row& operator<<(const std::string& s) {
        if (!first_) line_ += ',';
        line_ += s;
        first_ = false;
        return *this;
    }
    Row& operator<<(std::string_view s) { return *this << std::string(s); }
    Row& operator<<(const char* s) { return *this << std::string(s); }
    Row& operator<<(double v) { return *this << format_double(v); }
    Row& operator<<(bool b) { return *this << flag(b); }
    Row& operator<<(std::uint64_t v) { return *this << std::to_string(v); }
    Row& operator<<(int v) { return *this << std::to_string(v); }
    Row& operator<<(long v) { return *this << std::to_string(v); }
    std::string str() const { return line_ + '\n'; }

 private:
    std::string line_;
    bool first_ = true;
};

Row& policy_fields(Row& r, const PolicyFb& p) {
    return r << p.sense << p.access_free << p.access_busy << p.access_direct
             << p.access_retx;
}

PolicyFb scheme_policy(const RunConfig& cfg) { return cfg.sim_params().policy; }

AnalysisReport analyze(const RunConfig& cfg) {
    return evaluate_policy(cfg.problem(), scheme_policy(cfg));
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& config) {
    if (!config.sweep) throw ConfigError("sweep: missing sweep section");
    const SweepSpec& spec = *config.sweep;
    std::vector<SweepRow> rows;
    for (bool mpr : spec.mpr_on) {
        for (double value : spec.values) {
            for (Scheme scheme : spec.schemes) {
                SweepRow row;
                row.variable = spec.variable;
                row.value = value;
                row.scheme = scheme;
                row.mpr_on = mpr;
                row.traffic = config.traffic;
                switch (spec.variable) {
                    case SweepVariable::LambdaP: row.traffic.lambda_p = value; break;
                    case SweepVariable::LambdaE: row.traffic.lambda_e = value; break;
                    case SweepVariable::DelayBound: row.traffic.delay_bound = value; break;
                    case SweepVariable::MprOn: row.mpr_on = value != 0.0; break;
                }
                rows.push_back(row);
            }
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            SweepRow& row = rows[i];
            OptProblem problem;
            problem.scheme = row.scheme;
            problem.profile = row.mpr_on ? config.profile : config.profile.without_mpr();
            problem.sensing = config.sensing;
            problem.traffic = row.traffic;
            row.result = solve(problem, config.solver);
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(
        std::thread::hardware_concurrency(), static_cast<unsigned>(rows.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::string sweep_csv_header() {
    return "variable,value,scheme,mpr_on,lambda_p,lambda_e,delay_bound,mu_s_opt,"
           "mu_p_at_opt,delay_at_opt,ps,pf,pb,pt,pr,feasible\n";
}

std::string sweep_csv_row(const SweepRow& row) {
    Row r;
    r << to_string(row.variable) << row.value << to_string(row.scheme) << row.mpr_on
      << row.traffic.lambda_p << row.traffic.lambda_e << row.traffic.delay_bound
      << row.result.mu_s << row.result.mu_p << row.result.delay;
    policy_fields(r, row.result.policy) << row.result.feasible;
    return r.str();
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const AnalysisReport rep = analyze(cfg);
    out << "scheme,lambda_p,lambda_e,delay_bound,ps,pf,pb,pt,pr,mu_p,mu_s,"
           "empty_prob,delay,alpha,gamma,retx_prob,primary_stable,delay_feasible,"
           "secondary_stable\n";
    Row r;
    r << to_string(cfg.scheme) << cfg.traffic.lambda_p << cfg.traffic.lambda_e
      << cfg.traffic.delay_bound;
    policy_fields(r, scheme_policy(cfg))
        << rep.mu_p << rep.mu_s << rep.empty_prob << rep.delay << rep.alpha
        << rep.gamma << rep.retx_prob << rep.primary_stable << rep.delay_feasible
        << rep.secondary_stable;
    out << r.str();
    if (!rep.primary_stable) {
        err << "primary queue unstable for this policy\n";
        return kExitInfeasible;
    }
    if (!rep.delay_feasible) {
        err << "delay bound violated: " << format_double(rep.delay) << " > "
            << format_double(cfg.traffic.delay_bound) << "\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const OptResult res = solve(cfg.problem(), cfg.solver);
    out << "scheme,lambda_p,lambda_e,delay_bound,mpr_on,mu_s_opt,mu_p_at_opt,"
           "delay_at_opt,ps,pf,pb,pt,pr,feasible,starts,iterations,best_start\n";
    Row r;
    r << to_string(cfg.scheme) << cfg.traffic.lambda_p << cfg.traffic.lambda_e
      << cfg.traffic.delay_bound << cfg.mpr_on << res.mu_s << res.mu_p << res.delay;
    policy_fields(r, res.policy) << res.feasible << res.meta.starts
                                 << res.meta.iterations << res.meta.best_start;
    out << r.str();
    if (!res.feasible) {
        err << "no policy satisfies the stability and delay constraints\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::vector<SweepRow> rows = run_sweep(cfg);
    out << sweep_csv_header();
    std::size_t infeasible = 0;
    for (const SweepRow& row : rows) {
        out << sweep_csv_row(row);
        if (!row.result.feasible) ++infeasible;
    }
    if (infeasible > 0) err << infeasible << " sweep point(s) infeasible\n";
    return kExitOk;
}

namespace {

std::string simstats_header() {
    return "scheme,semantics,slots,seed,mu_p,mu_p_se,mu_s,mu_s_se,mu_e,mu_e_se,"
           "throughput_s,throughput_s_se,delay,delay_se,mean_qp,mean_qp_se,mean_qs,"
           "empty_frac_p,empty_frac_p_se,retx_frac,retx_frac_se,alpha,alpha_se,gamma,"
           "gamma_se,arrival_rate_p,departures_p,idle_sensed,idle_declared_busy,"
           "busy_sensed,busy_declared_free,drift_detected,rng\n";
}

std::string simstats_row(const SimParams& p, const SimStats& s) {
    Row r;
    r << to_string(p.scheme) << to_string(p.semantics) << s.slots << p.seed;
    for (const Estimate* e : {&s.mu_p, &s.mu_s, &s.mu_e, &s.throughput_s, &s.delay,
                              &s.mean_qp}) {
        r << e->value << e->stderr_;
    }
    r << s.mean_qs.value;
    for (const Estimate* e : {&s.empty_frac_p, &s.retx_frac, &s.alpha, &s.gamma}) {
        r << e->value << e->stderr_;
    }
    r << s.arrival_rate_p << s.departures_p << s.idle_sensed << s.idle_declared_busy
      << s.busy_sensed << s.busy_declared_free << drift_detected(s) << s.rng;
    return r.str();
}

void write_checks(std::ostream& out, const std::string& group,
                  const ValidationReport& rep, double n_sigma) {
    for (const Check& c : rep.checks) {
        Row r;
        r << group << c.name << c.measured << c.expected << c.residual()
          << n_sigma * c.sigma
          << (c.asserted ? (c.passed ? "PASS" : "FAIL") : (c.passed ? "ADVISORY-PASS" : "ADVISORY-FAIL"));
        out << r.str();
    }
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SimParams p = cfg.sim_params();
    const SimStats s = run(p);
    out << simstats_header() << simstats_row(p, s);
    if (drift_detected(s)) err << "unstable detected: primary queue drifts upward\n";
    return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    constexpr double kSigmas = 3.0;
    const SimParams p = cfg.sim_params();
    const ValidationReport closed = validate_closed_forms(p, kSigmas);
    const LowerBoundReport lower = validate_lower_bound(p, kSigmas);

    out << "group,check,measured,expected,residual,bound,status\n";
    write_checks(out, "closed_form", closed, kSigmas);
    write_checks(out, "lower_bound", lower.validation, kSigmas);

    const bool unstable = closed.unstable_detected || lower.validation.unstable_detected;
    if (unstable) err << "unstable detected: checks reported as advisory\n";
    const bool ok = closed.passed() && lower.validation.passed();
    err << (ok ? "validation PASS\n" : "validation FAIL\n");
    return ok ? kExitOk : kExitValidation;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy-harvesting cognitive radio access analysis"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string preset;
    std::string scheme;
    std::string semantics;
    std::string out_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    std::uint64_t slots = 0;

    const char* names[] = {"analyze", "optimize", "sweep", "simulate", "validate"};
    const char* help[] = {
        "closed-form rates, delay and constraint flags of the configured policy",
        "maximize the secondary service rate",
        "optimize over a parameter sweep (CSV rows per point and scheme)",
        "Monte Carlo run of the configured policy",
        "compare simulation against the closed forms and the lower bound"};
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], help[i]);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--preset", preset, "built-in preset")
            ->check(CLI::IsMember(preset_names()));
        sub->add_option("--scheme", scheme,
                        "NoFeedback | Feedback | RandomAccess | RandomAccessFeedback");
        sub->add_option("--seed", seed, "seed for the solver and the simulator");
        sub->add_option("--slots", slots, "simulated slots");
        sub->add_option("--semantics", semantics, "Exact | PaperApprox");
        sub->add_option("--out", out_path, "write CSV here instead of stdout");
        sub->add_option("--set", overrides, "override a config field, e.g. traffic.lambda_p=0.1");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        nlohmann::json doc = nlohmann::json::object();
        if (!preset.empty()) doc = preset_json(preset);
        if (!config_path.empty()) doc.merge_patch(load_config_file(config_path));
        for (const std::string& o : overrides) apply_override(doc, o);
        if (!scheme.empty()) doc["scheme"] = scheme;
        if (seed != 0) doc["seed"] = seed;
        if (slots != 0) doc["simulation"]["slots"] = slots;
        if (!semantics.empty()) doc["simulation"]["semantics"] = semantics;

        RunConfig cfg = parse_config(doc);
        if (!out_path.empty()) cfg.output = out_path;

        std::ofstream file;
        std::ostream* sink = &out;
        if (!cfg.output.empty()) {
            file.open(cfg.output, std::ios::binary);
            if (!file) throw ConfigError("output: cannot write " + cfg.output);
            sink = &file;
        }
        int code = kExitOk;
        if (subs[0]->parsed()) code = cmd_analyze(cfg, *sink, err);
        if (subs[1]->parsed()) code = cmd_optimize(cfg, *sink, err);
        if (subs[2]->parsed()) code = cmd_sweep(cfg, *sink, err);
        if (subs[3]->parsed()) code = cmd_simulate(cfg, *sink, err);
        if (subs[4]->parsed()) code = cmd_validate(cfg, *sink, err);
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace ehcr
