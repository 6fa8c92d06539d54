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

#include "ehcr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <utility>

#include "ehcr/analytic_fb.hpp"
#include "ehcr/analytic_nofb.hpp"
#include "ehcr/errors.hpp"

namespace ehcr {

void OptProblem::validate() const {
    profile.validate();
    sensing.validate();
    traffic.validate();
}

void SolverConfig::validate() const {
    if (n_starts < 1) throw InvalidArgument("n_starts must be >= 1");
    if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (!(initial_step > 0.0 && initial_step <= 1.0)) {
        throw InvalidArgument("initial_step must lie in (0,1]");
    }
    if (!(step_shrink > 0.0 && step_shrink < 1.0)) {
        throw InvalidArgument("step_shrink must lie in (0,1)");
    }
    if (!(min_step > 0.0)) throw InvalidArgument("min_step must be > 0");
    if (random_directions < 0) {
        throw InvalidArgument("random_directions must be >= 0");
    }
    if (!(audit_step > 0.0 && audit_step <= 0.5)) {
        throw InvalidArgument("audit_step must lie in (0, 0.5]");
    }
    if (audit_polish < 0) throw InvalidArgument("audit_polish must be >= 0");
    if (!(eps_feas >= 0.0)) throw InvalidArgument("eps_feas must be >= 0");
}

std::vector<const char*> decision_variables(Scheme scheme) {
    switch (scheme) {
        case Scheme::NoFeedback: return {"ps", "pf", "pb", "pt"};
        case Scheme::Feedback: return {"ps", "pf", "pb", "pt", "pr"};
        case Scheme::RandomAccess: return {"pt"};
        case Scheme::RandomAccessFeedback: return {"pt", "pr"};
    }
    return {};
}

PolicyFb policy_from_vector(Scheme scheme, const std::vector<double>& x) {
    PolicyFb p;
    switch (scheme) {
        case Scheme::NoFeedback:
        case Scheme::Feedback:
            p.sense = x.at(0);
            p.access_free = x.at(1);
            p.access_busy = x.at(2);
            p.access_direct = x.at(3);
            if (scheme == Scheme::Feedback) p.access_retx = x.at(4);
            break;
        case Scheme::RandomAccess:
            p.access_direct = x.at(0);
            break;
        case Scheme::RandomAccessFeedback:
            p.access_direct = x.at(0);
            p.access_retx = x.at(1);
            break;
    }
    return p;
}

AnalysisReport evaluate_policy(const OptProblem& problem,
                               const PolicyFb& policy) {
    if (uses_feedback(problem.scheme)) {
        return analyze_fb(problem.profile, policy, problem.sensing,
                          problem.traffic);
    }
    return analyze_nofb(problem.profile, policy, problem.sensing,
                        problem.traffic);
}

bool satisfies_constraints(const OptProblem& problem, const AnalysisReport& r,
                           double eps_feas) {
    const double bound = problem.traffic.delay_bound;
    return problem.traffic.lambda_p <= r.mu_p - kStabilityMargin + eps_feas &&
           std::isfinite(r.delay) && r.delay <= bound * (1.0 + eps_feas);
}

namespace {

// 0 when feasible. Stable but too slow: 1 - bound/delay in (0,1).
// Unstable: above 1, growing with the stability gap.
double violation(const OptProblem& problem, const AnalysisReport& r) {
    if (!r.primary_stable) {
        return 1.0 + (problem.traffic.lambda_p - r.mu_p + kStabilityMargin);
    }
    if (r.delay <= problem.traffic.delay_bound) return 0.0;
    return 1.0 - problem.traffic.delay_bound / r.delay;
}

struct Candidate {
    std::vector<double> x;
    AnalysisReport report;
    double viol = 0.0;
};

// Feasible beats infeasible; among feasible, larger mu_s; among infeasible,
// smaller violation.
bool better(const Candidate& a, const Candidate& b) {
    const bool fa = a.viol == 0.0;
    const bool fb = b.viol == 0.0;
    if (fa && fb) return a.report.mu_s > b.report.mu_s;
    if (fa != fb) return fa;
    return a.viol < b.viol;
}

class Search {
 public:
    Search(const OptProblem& problem, const SolverConfig& config)
        : problem_(problem),
          config_(config),
          dim_(decision_variables(problem.scheme).size()),
          rng_(config.seed) {}

    Candidate evaluate(std::vector<double> x) {
        ++evaluations_;
        Candidate c;
        c.x = std::move(x);
        c.report = evaluate_policy(problem_, policy_from_vector(problem_.scheme, c.x));
        c.viol = violation(problem_, c.report);
        return c;
    }

    std::vector<std::vector<double>> start_points() {
        static constexpr double kPrimes[] = {2, 3, 5, 7, 11};
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> shift(dim_);
        for (auto& s : shift) s = unit(rng_);
        std::vector<std::vector<double>> starts;
        starts.push_back(std::vector<double>(dim_, 0.0));  // silent secondary
        for (int i = 1; i < config_.n_starts; ++i) {
            std::vector<double> x(dim_);
            for (std::size_t d = 0; d < dim_; ++d) {
                x[d] = std::fmod(radical_inverse(i, kPrimes[d]) + shift[d], 1.0);
            }
            starts.push_back(std::move(x));
        }
        return starts;
    }

    // Pattern search from x; returns the local optimum.
    Candidate local_search(std::vector<double> x0, long& polls) {
        Candidate cur = evaluate(std::move(x0));
        std::vector<std::vector<double>> dirs = base_directions();
        double step = config_.initial_step;
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int it = 0; it < config_.max_iters && step >= config_.min_step; ++it) {
            ++polls;
            std::vector<std::vector<double>> poll = dirs;
            for (int r = 0; r < config_.random_directions; ++r) {
                std::vector<double> d(dim_);
                double norm = 0.0;
                for (auto& v : d) {
                    v = gauss(rng_);
                    norm += v * v;
                }
                norm = std::sqrt(norm);
                for (auto& v : d) v /= norm > 0.0 ? norm : 1.0;
                poll.push_back(std::move(d));
            }
            bool improved = false;
            for (std::size_t k = 0; k < poll.size(); ++k) {
                std::vector<double> y(dim_);
                for (std::size_t d = 0; d < dim_; ++d) {
                    y[d] = std::clamp(cur.x[d] + step * poll[k][d], 0.0, 1.0);
                }
                if (y == cur.x) continue;
                Candidate trial = evaluate(std::move(y));
                if (trial.viol > 0.0 && cur.viol == 0.0) trial = retract(trial);
                if (better(trial, cur)) {
                    cur = std::move(trial);
                    improved = true;
                    // Successful base direction is polled first next time.
                    if (k < dirs.size() && k > 0) std::swap(dirs[0], dirs[k]);
                    break;
                }
            }
            if (!improved) improved = try_jumps(cur, step);
            if (!improved) step *= config_.step_shrink;
        }
        return cur;
    }

    // Escapes corners where a variable has no effect (pt at ps = 1, pf and pb
    // at ps = 0): one coordinate jumps to a bound, optionally combined with a
    // regular step in another coordinate.
    bool try_jumps(Candidate& cur, double step) {
        for (std::size_t j = 0; j < dim_; ++j) {
            for (double bound : {0.0, 1.0}) {
                if (cur.x[j] == bound) continue;
                for (std::size_t i = 0; i <= dim_; ++i) {
                    if (i == j) continue;
                    for (double s : {1.0, -1.0}) {
                        if (i == dim_ && s < 0.0) continue;
                        std::vector<double> y = cur.x;
                        y[j] = bound;
                        if (i < dim_) y[i] = std::clamp(y[i] + s * step, 0.0, 1.0);
                        Candidate trial = evaluate(std::move(y));
                        if (trial.viol > 0.0 && cur.viol == 0.0) trial = retract(trial);
                        if (better(trial, cur)) {
                            cur = std::move(trial);
                            return true;
                        }
                    }
                }
            }
        }
        return false;
    }

    // Replaces the lexicographically earliest variables by 0 when that keeps
    // the point feasible without lowering mu_s (ties of the objective).
    Candidate canonicalize(Candidate c) {
        if (c.viol > 0.0) return c;
        for (std::size_t d = 0; d < dim_; ++d) {
            if (c.x[d] == 0.0) continue;
            std::vector<double> y = c.x;
            y[d] = 0.0;
            Candidate t = evaluate(std::move(y));
            if (t.viol == 0.0 && t.report.mu_s >= c.report.mu_s) c = std::move(t);
        }
        return c;
    }

    long evaluations() const { return evaluations_; }

 private:
    static double radical_inverse(int i, double base) {
        double inv = 1.0 / base;
        double f = inv;
        double r = 0.0;
        auto n = static_cast<long>(i);
        const auto b = static_cast<long>(base);
        while (n > 0) {
            r += f * static_cast<double>(n % b);
            n /= b;
            f *= inv;
        }
        return r;
    }

    std::vector<std::vector<double>> base_directions() const {
        std::vector<std::vector<double>> dirs;
        for (std::size_t i = 0; i < dim_; ++i) {
            for (double s : {1.0, -1.0}) {
                std::vector<double> d(dim_, 0.0);
                d[i] = s;
                dirs.push_back(std::move(d));
            }
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i + 1; j < dim_; ++j) {
                for (double si : {1.0, -1.0}) {
                    for (double sj : {1.0, -1.0}) {
                        std::vector<double> d(dim_, 0.0);
                        d[i] = si;
                        d[j] = sj;
                        dirs.push_back(std::move(d));
                    }
                }
            }
        }
        return dirs;
    }

    // Indices of the access probabilities (everything except ps).
    std::vector<std::size_t> access_indices() const {
        std::vector<std::size_t> idx;
        const auto names = decision_variables(problem_.scheme);
        for (std::size_t d = 0; d < names.size(); ++d) {
            if (std::string_view(names[d]) != "ps") idx.push_back(d);
        }
        return idx;
    }

    // Scales the access probabilities of an infeasible trial down toward the
    // silent policy and returns the largest feasible scaling found by
    // bisection. Lets the search slide along the constraint boundary.
    Candidate retract(const Candidate& trial) {
        const std::vector<std::size_t> idx = access_indices();
        auto scaled = [&](double s) {
            std::vector<double> y = trial.x;
            for (std::size_t d : idx) y[d] *= s;
            return y;
        };
        Candidate lo = evaluate(scaled(0.0));
        if (lo.viol > 0.0) return trial;
        double a = 0.0;
        double b = 1.0;
        for (int i = 0; i < 40; ++i) {
            const double m = 0.5 * (a + b);
            Candidate mid = evaluate(scaled(m));
            if (mid.viol == 0.0) {
                a = m;
                lo = std::move(mid);
            } else {
                b = m;
            }
        }
        return lo;
    }

    const OptProblem& problem_;
    const SolverConfig& config_;
    std::size_t dim_;
    std::mt19937_64 rng_;
    long evaluations_ = 0;
};

std::vector<double> grid_axis(double step) {
    std::vector<double> axis;
    const auto n = static_cast<long>(std::floor(1.0 / step + 1e-9));
    for (long k = 0; k <= n; ++k) axis.push_back(std::min(1.0, k * step));
    if (axis.back() < 1.0 - 1e-12) axis.push_back(1.0);
    return axis;
}

OptResult finish(const OptProblem& problem, const Candidate& best,
                 SolverMeta meta) {
    OptResult out;
    out.meta = meta;
    out.feasible = best.viol == 0.0;
    if (out.feasible) {
        out.policy = policy_from_vector(problem.scheme, best.x);
    }
    out.report = evaluate_policy(problem, out.policy);
    out.mu_s = out.report.mu_s;
    out.mu_p = out.report.mu_p;
    out.delay = out.report.delay;
    if (!out.feasible) out.meta.best_start = -1;
    return out;
}

// Best feasible points of a grid, in grid (lexicographic) order for ties.
struct GridHit {
    double mu_s;
    std::vector<double> x;
};

// Exhaustive grid scan. Policies are enumerated lexicographically with the
// last variable fastest; only strictly better points replace the incumbent.
// Keeps the `keep` best points.
std::vector<GridHit> scan_grid(const OptProblem& problem, double step,
                               std::size_t keep, long& evaluations) {
    const std::vector<double> axis = grid_axis(step);
    const std::size_t dim = decision_variables(problem.scheme).size();
    const bool feedback = uses_feedback(problem.scheme);
    const double lp = problem.traffic.lambda_p;
    const double le = problem.traffic.lambda_e;
    const double bound = problem.traffic.delay_bound;
    const OutageProfile& o = problem.profile;
    const SensingQuality& s = problem.sensing;

    // Outer variables are everything except pr; pr is swept innermost.
    const std::size_t outer_dim = feedback ? dim - 1 : dim;
    const std::size_t m = axis.size();
    std::size_t outer_count = 1;
    for (std::size_t d = 0; d < outer_dim; ++d) outer_count *= m;

    auto scan_range = [&](std::size_t begin, std::size_t end, long& evals) {
        std::vector<GridHit> hits;
        double threshold = -1.0;  // mu_s of the worst kept hit once full
        auto offer = [&](double mu_s, const std::vector<double>& x) {
            if (hits.size() == keep && !(mu_s > threshold)) return;
            GridHit h{mu_s, x};
            auto pos = std::upper_bound(
                hits.begin(), hits.end(), h,
                [](const GridHit& a, const GridHit& b) { return a.mu_s > b.mu_s; });
            hits.insert(pos, std::move(h));
            if (hits.size() > keep) hits.pop_back();
            if (hits.size() == keep) threshold = hits.back().mu_s;
        };
        std::vector<double> x(dim, 0.0);
        for (std::size_t flat = begin; flat < end; ++flat) {
            std::size_t rem = flat;
            for (std::size_t d = outer_dim; d-- > 0;) {
                x[d] = axis[rem % m];
                rem /= m;
            }
            // alpha and the sensing gains do not depend on pr.
            PolicyFb policy = policy_from_vector(problem.scheme, x);
            const double alpha = mu_p(o, policy, s, le);
            const double idle = secondary_gain_idle(o, policy, s);
            const double busy = secondary_gain_busy(o, policy, s);
            if (!feedback) {
                ++evals;
                if (!(lp <= alpha - kStabilityMargin)) continue;
                const double ratio = lp / alpha;
                const double mu_s = le * ((1.0 - ratio) * idle + ratio * busy);
                if (hits.size() == keep && !(mu_s > threshold)) continue;
                if (!(delay_nofb(lp, alpha) <= bound)) continue;
                offer(mu_s, x);
                continue;
            }
            for (std::size_t r = 0; r < m; ++r) {
                ++evals;
                policy.access_retx = axis[r];
                const double gamma =
                    (1.0 - le) * o.primary +
                    le * (axis[r] * o.primary_conc + (1.0 - axis[r]) * o.primary);
                const double eta = lp * alpha + (1.0 - lp) * gamma;
                if (!(lp <= eta - kStabilityMargin)) continue;
                const FeedbackChainStats st = chain_stats(alpha, gamma, lp);
                const double mu_s = mu_s_fb(o, policy, s, le, st);
                if (hits.size() == keep && !(mu_s > threshold)) continue;
                if (!(delay_fb(alpha, gamma, lp) <= bound)) continue;
                x[dim - 1] = axis[r];
                offer(mu_s, x);
            }
        }
        return hits;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(
        std::thread::hardware_concurrency(),
        static_cast<unsigned>(std::max<std::size_t>(1, outer_count / 4096))));
    std::vector<std::vector<GridHit>> parts(workers);
    std::vector<long> evals(workers, 0);
    std::vector<std::thread> pool;
    const std::size_t chunk = (outer_count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(outer_count, w * chunk);
        const std::size_t end = std::min(outer_count, begin + chunk);
        if (workers == 1) {
            parts[w] = scan_range(begin, end, evals[w]);
        } else {
            pool.emplace_back([&, w, begin, end] {
                parts[w] = scan_range(begin, end, evals[w]);
            });
        }
    }
    for (auto& t : pool) t.join();

    // Chunks are in lexicographic order, so a stable merge keeps the
    // lexicographically smallest point first among equal mu_s.
    std::vector<GridHit> merged;
    for (unsigned w = 0; w < workers; ++w) {
        evaluations += evals[w];
        merged.insert(merged.end(), parts[w].begin(), parts[w].end());
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const GridHit& a, const GridHit& b) { return a.mu_s > b.mu_s; });
    if (merged.size() > keep) merged.resize(keep);
    return merged;
}

}  // namespace

OptResult solve(const OptProblem& problem, const SolverConfig& config) {
    problem.validate();
    config.validate();

    Search search(problem, config);
    SolverMeta meta;
    std::vector<std::vector<double>> starts = search.start_points();

    long audit_evals = 0;
    const std::size_t keep = static_cast<std::size_t>(std::max(1, config.audit_polish));
    const std::vector<GridHit> audit =
        scan_grid(problem, config.audit_step, keep, audit_evals);
    for (std::size_t i = 0; i < audit.size() && i < static_cast<std::size_t>(config.audit_polish); ++i) {
        starts.push_back(audit[i].x);
    }

    Candidate best;
    bool have_best = false;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        Candidate local = search.local_search(starts[i], meta.iterations);
        if (!have_best || better(local, best)) {
            best = std::move(local);
            have_best = true;
            meta.best_start = static_cast<int>(i);
        }
    }
    meta.starts = static_cast<int>(starts.size());

    // The result must dominate the audit grid.
    if (!audit.empty() && (best.viol > 0.0 || audit.front().mu_s > best.report.mu_s)) {
        best = search.local_search(audit.front().x, meta.iterations);
    }
    best = search.canonicalize(std::move(best));
    meta.evaluations = search.evaluations() + audit_evals;
    return finish(problem, best, meta);
}

OptResult grid_oracle(const OptProblem& problem, double step) {
    problem.validate();
    if (!(step > 0.0 && step <= 0.5)) {
        throw InvalidArgument("grid step must lie in (0, 0.5]");
    }
    SolverMeta meta;
    const std::vector<GridHit> hits = scan_grid(problem, step, 1, meta.evaluations);
    Candidate best;
    best.viol = 1.0;
    if (!hits.empty()) {
        best.x = hits.front().x;
        best.viol = 0.0;
        meta.best_start = 0;
    }
    meta.starts = 1;
    return finish(problem, best, meta);
}

}  // namespace ehcr
