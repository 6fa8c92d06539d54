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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "ehcr/analytic_fb.hpp"
#include "ehcr/analytic_nofb.hpp"
#include "ehcr/commands.hpp"
#include "ehcr/errors.hpp"
#include "ehcr/optimizer.hpp"
#include "ehcr/outage.hpp"
#include "ehcr/simulator.hpp"

namespace py = pybind11;
using namespace ehcr;

namespace {

PolicyFb make_policy(double ps, double pf, double pb, double pt, double pr) {
    PolicyFb p;
    p.sense = ps;
    p.access_free = pf;
    p.access_busy = pb;
    p.access_direct = pt;
    p.access_retx = pr;
    return p;
}

py::tuple cli(const std::vector<std::string>& args) {
    std::vector<std::string> owned = args;
    owned.insert(owned.begin(), "ehcr");
    std::vector<char*> argv;
    for (auto& a : owned) argv.push_back(a.data());
    std::ostringstream out, err;
    int code;
    {
        py::gil_scoped_release release;
        code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_ehcr, m) {
    m.doc() = "Energy-harvesting cognitive radio access analysis";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<UnstableError>(m, "UnstableError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<TxStart>(m, "TxStart")
        .value("FullSlot", TxStart::FullSlot)
        .value("AfterSensing", TxStart::AfterSensing);
    py::enum_<PowerMode>(m, "PowerMode")
        .value("FixedPower", PowerMode::FixedPower)
        .value("FixedEnergy", PowerMode::FixedEnergy);
    py::enum_<Scheme>(m, "Scheme")
        .value("NoFeedback", Scheme::NoFeedback)
        .value("Feedback", Scheme::Feedback)
        .value("RandomAccess", Scheme::RandomAccess)
        .value("RandomAccessFeedback", Scheme::RandomAccessFeedback);
    py::enum_<SimSemantics>(m, "SimSemantics")
        .value("Exact", SimSemantics::Exact)
        .value("PaperApprox", SimSemantics::PaperApprox);

    py::class_<LinkBudget>(m, "LinkBudget")
        .def(py::init([](double b, double T, double tau, double W, double snr, double fading) {
                 LinkBudget l{b, T, tau, W, snr, fading};
                 l.validate();
                 return l;
             }),
             py::arg("bits_per_packet"), py::arg("slot_duration"), py::arg("sensing_duration"),
             py::arg("bandwidth"), py::arg("mean_snr"), py::arg("fading_mean") = 1.0)
        .def_readwrite("bits_per_packet", &LinkBudget::bits_per_packet)
        .def_readwrite("slot_duration", &LinkBudget::slot_duration)
        .def_readwrite("sensing_duration", &LinkBudget::sensing_duration)
        .def_readwrite("bandwidth", &LinkBudget::bandwidth)
        .def_readwrite("mean_snr", &LinkBudget::mean_snr)
        .def_readwrite("fading_mean", &LinkBudget::fading_mean);

    py::class_<OutageProfile>(m, "OutageProfile")
        .def(py::init(&OutageProfile::from_probabilities), py::arg("primary"),
             py::arg("primary_conc"), py::arg("sec_0"), py::arg("sec_1"), py::arg("sec_0_conc"),
             py::arg("sec_1_conc"))
        .def_static("from_ratios", &OutageProfile::from_ratios, py::arg("primary"),
                    py::arg("primary_conc"), py::arg("sec_0"), py::arg("sec_0_conc"),
                    py::arg("delta"), py::arg("delta_c"))
        .def("without_mpr", &OutageProfile::without_mpr)
        .def("delta", &OutageProfile::delta)
        .def("delta_conc", &OutageProfile::delta_conc)
        .def_readonly("primary", &OutageProfile::primary)
        .def_readonly("primary_conc", &OutageProfile::primary_conc)
        .def_readonly("sec_0", &OutageProfile::sec_0)
        .def_readonly("sec_1", &OutageProfile::sec_1)
        .def_readonly("sec_0_conc", &OutageProfile::sec_0_conc)
        .def_readonly("sec_1_conc", &OutageProfile::sec_1_conc);

    py::class_<CrossSnr>(m, "CrossSnr")
        .def(py::init<double, double>(), py::arg("secondary_at_primary_rx") = 0.0,
             py::arg("primary_at_secondary_rx") = 0.0);

    py::class_<PolicyFb>(m, "Policy")
        .def(py::init(&make_policy), py::arg("ps") = 0.0, py::arg("pf") = 0.0,
             py::arg("pb") = 0.0, py::arg("pt") = 0.0, py::arg("pr") = 0.0)
        .def_readwrite("ps", &PolicyFb::sense)
        .def_readwrite("pf", &PolicyFb::access_free)
        .def_readwrite("pb", &PolicyFb::access_busy)
        .def_readwrite("pt", &PolicyFb::access_direct)
        .def_readwrite("pr", &PolicyFb::access_retx)
        .def("__repr__", [](const PolicyFb& p) {
            std::ostringstream s;
            s << "Policy(ps=" << p.sense << ", pf=" << p.access_free << ", pb=" << p.access_busy
              << ", pt=" << p.access_direct << ", pr=" << p.access_retx << ")";
            return s.str();
        });

    py::class_<SensingQuality>(m, "SensingQuality")
        .def(py::init([](double fa, double md) { return SensingQuality{fa, md}; }),
             py::arg("false_alarm") = 0.0, py::arg("missed_detection") = 0.0)
        .def_readwrite("false_alarm", &SensingQuality::false_alarm)
        .def_readwrite("missed_detection", &SensingQuality::missed_detection);

    py::class_<TrafficParams>(m, "TrafficParams")
        .def(py::init([](double lp, double ls, double le, double d) {
                 return TrafficParams{lp, ls, le, d};
             }),
             py::arg("lambda_p") = 0.0, py::arg("lambda_s") = 1.0, py::arg("lambda_e") = 0.0,
             py::arg("delay_bound") = kNoDelayBound)
        .def_readwrite("lambda_p", &TrafficParams::lambda_p)
        .def_readwrite("lambda_s", &TrafficParams::lambda_s)
        .def_readwrite("lambda_e", &TrafficParams::lambda_e)
        .def_readwrite("delay_bound", &TrafficParams::delay_bound);

    py::class_<AnalysisReport>(m, "AnalysisReport")
        .def_readonly("mu_p", &AnalysisReport::mu_p)
        .def_readonly("mu_s", &AnalysisReport::mu_s)
        .def_readonly("empty_prob", &AnalysisReport::empty_prob)
        .def_readonly("delay", &AnalysisReport::delay)
        .def_readonly("alpha", &AnalysisReport::alpha)
        .def_readonly("gamma", &AnalysisReport::gamma)
        .def_readonly("retx_prob", &AnalysisReport::retx_prob)
        .def_readonly("primary_stable", &AnalysisReport::primary_stable)
        .def_readonly("delay_feasible", &AnalysisReport::delay_feasible)
        .def_readonly("secondary_stable", &AnalysisReport::secondary_stable);

    py::class_<FeedbackChainStats>(m, "FeedbackChainStats")
        .def_readonly("alpha", &FeedbackChainStats::alpha)
        .def_readonly("gamma", &FeedbackChainStats::gamma)
        .def_readonly("eta", &FeedbackChainStats::eta)
        .def_readonly("pi0", &FeedbackChainStats::pi0)
        .def_readonly("sum_pi", &FeedbackChainStats::sum_pi)
        .def_readonly("sum_eps", &FeedbackChainStats::sum_eps);

    // outage
    m.def("transmission_rate", &transmission_rate, py::arg("link"), py::arg("start"));
    m.def("success_prob_solo", &success_prob_solo, py::arg("link"), py::arg("start"),
          py::arg("mode") = PowerMode::FixedEnergy);
    m.def("success_prob_concurrent", &success_prob_concurrent, py::arg("link"),
          py::arg("interferer_snr"), py::arg("start"), py::arg("mode") = PowerMode::FixedEnergy);
    m.def("build_profile", &build_profile, py::arg("primary"), py::arg("secondary"),
          py::arg("cross"), py::arg("mode") = PowerMode::FixedEnergy);

    // closed forms
    // The no-feedback closed forms ignore pr.
    m.def("mu_p", [](const OutageProfile& o, const PolicyFb& p, const SensingQuality& q,
                     double le) { return mu_p(o, p, q, le); },
          py::arg("profile"), py::arg("policy"), py::arg("sensing"),
          py::arg("lambda_e"));
    m.def("mu_s", [](const OutageProfile& o, const PolicyFb& p, const SensingQuality& q,
                     double le, double lp) { return mu_s(o, p, q, le, lp); },
          py::arg("profile"), py::arg("policy"), py::arg("sensing"),
          py::arg("lambda_e"), py::arg("lambda_p"));
    m.def("stationary_dist_nofb", &stationary_dist_nofb, py::arg("lambda_p"), py::arg("mu_p"),
          py::arg("k_max"));
    m.def("delay_nofb", &delay_nofb, py::arg("lambda_p"), py::arg("mu_p"));
    m.def("analyze_nofb", [](const OutageProfile& o, const PolicyFb& p, const SensingQuality& q,
                             const TrafficParams& t) { return analyze_nofb(o, p, q, t); },
          py::arg("profile"), py::arg("policy"),
          py::arg("sensing"), py::arg("traffic"));
    m.def("chain_stats", &chain_stats, py::arg("alpha"), py::arg("gamma"), py::arg("lambda_p"));
    m.def("state_probs_fb", [](double a, double g, double lp, std::size_t k) {
              auto s = state_probs_fb(a, g, lp, k);
              return py::make_tuple(s.first, s.retx);
          },
          py::arg("alpha"), py::arg("gamma"), py::arg("lambda_p"), py::arg("k_max"));
    m.def("delay_fb", &delay_fb, py::arg("alpha"), py::arg("gamma"), py::arg("lambda_p"));
    m.def("analyze_fb", &analyze_fb, py::arg("profile"), py::arg("policy"), py::arg("sensing"),
          py::arg("traffic"));

    // optimizer
    py::class_<OptProblem>(m, "OptProblem")
        .def(py::init([](Scheme s, const OutageProfile& p, const SensingQuality& q,
                         const TrafficParams& t) { return OptProblem{s, p, q, t}; }),
             py::arg("scheme"), py::arg("profile"), py::arg("sensing"), py::arg("traffic"));
    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("n_starts", &SolverConfig::n_starts)
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("seed", &SolverConfig::seed)
        .def_readwrite("audit_step", &SolverConfig::audit_step);
    py::class_<OptResult>(m, "OptResult")
        .def_readonly("policy", &OptResult::policy)
        .def_readonly("mu_s", &OptResult::mu_s)
        .def_readonly("mu_p", &OptResult::mu_p)
        .def_readonly("delay", &OptResult::delay)
        .def_readonly("feasible", &OptResult::feasible)
        .def_readonly("report", &OptResult::report)
        .def_property_readonly("starts", [](const OptResult& r) { return r.meta.starts; })
        .def_property_readonly("iterations", [](const OptResult& r) { return r.meta.iterations; });
    m.def("evaluate_policy", &evaluate_policy, py::arg("problem"), py::arg("policy"));
    m.def("solve", &solve, py::arg("problem"), py::arg("config") = SolverConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def("grid_oracle", &grid_oracle, py::arg("problem"), py::arg("step"),
          py::call_guard<py::gil_scoped_release>());

    // simulator
    py::class_<Estimate>(m, "Estimate")
        .def_readonly("value", &Estimate::value)
        .def_readonly("stderr", &Estimate::stderr_)
        .def("ci95", &Estimate::ci95);
    py::class_<SimStats>(m, "SimStats")
        .def_readonly("slots", &SimStats::slots)
        .def_readonly("mu_p", &SimStats::mu_p)
        .def_readonly("mu_s", &SimStats::mu_s)
        .def_readonly("mu_e", &SimStats::mu_e)
        .def_readonly("throughput_s", &SimStats::throughput_s)
        .def_readonly("delay", &SimStats::delay)
        .def_readonly("mean_qp", &SimStats::mean_qp)
        .def_readonly("mean_qs", &SimStats::mean_qs)
        .def_readonly("empty_frac_p", &SimStats::empty_frac_p)
        .def_readonly("retx_frac", &SimStats::retx_frac)
        .def_readonly("rng", &SimStats::rng);
    m.def(
        "simulate",
        [](Scheme scheme, const PolicyFb& policy, const OutageProfile& profile,
           const SensingQuality& sensing, const TrafficParams& traffic, SimSemantics semantics,
           std::uint64_t n_slots, std::uint64_t seed) {
            SimParams p;
            p.scheme = scheme;
            p.policy = policy;
            p.profile = profile;
            p.sensing = sensing;
            p.traffic = traffic;
            p.semantics = semantics;
            p.n_slots = n_slots;
            p.seed = seed;
            py::gil_scoped_release release;
            return run(p);
        },
        py::arg("scheme"), py::arg("policy"), py::arg("profile"), py::arg("sensing"),
        py::arg("traffic"), py::arg("semantics") = SimSemantics::PaperApprox,
        py::arg("n_slots") = 1'000'000, py::arg("seed") = 1);

    // command line
    m.def("cli", &cli, py::arg("args"),
          "Runs the ehcr command line in-process; returns (exit_code, stdout, stderr).");
}
