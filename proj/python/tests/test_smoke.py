# Copyright 2026 The ehcr Authors
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.

import math

import pytest

import ehcr


@pytest.fixture
def setup():
    return (
        ehcr.preset_profile(),
        ehcr.SensingQuality(0.1, 0.08),
        ehcr.TrafficParams(lambda_p=0.126, lambda_e=0.8, delay_bound=2.0),
    )


def test_direct_access_rates(setup):
    profile, sensing, traffic = setup
    policy = ehcr.Policy(pt=1.0)
    assert ehcr.mu_p(profile, policy, sensing, 0.8) == pytest.approx(0.252)
    assert ehcr.mu_s(profile, policy, sensing, 0.8, 0.126) == pytest.approx(0.3154, abs=1e-4)
    report = ehcr.analyze_nofb(profile, policy, sensing, traffic)
    assert report.delay == pytest.approx(6.9365, abs=1e-4)
    assert not report.delay_feasible


def test_feedback_chain():
    stats = ehcr.chain_stats(0.252, 0.7, 0.126)
    assert stats.pi0 + stats.sum_pi + stats.sum_eps == pytest.approx(1.0)
    first, retx = ehcr.state_probs_fb(0.252, 0.7, 0.126, 50)
    assert retx[0] == 0.0
    assert first[0] == pytest.approx(stats.pi0)
    with pytest.raises(ehcr.UnstableError):
        ehcr.delay_fb(0.1, 0.1, 0.5)


def test_outage():
    link = ehcr.LinkBudget(1.0, 1.0, 0.0, 1.0, 2.0)
    assert ehcr.success_prob_solo(link, ehcr.TxStart.FullSlot) == pytest.approx(math.exp(-0.5))
    with pytest.raises(ValueError):
        ehcr.LinkBudget(1.0, 1.0, 1.0, 1.0, 2.0)


def test_solver_and_grid(setup):
    profile, sensing, traffic = setup
    problem = ehcr.OptProblem(ehcr.Scheme.Feedback, profile, sensing, traffic)
    result = ehcr.solve(problem)
    grid = ehcr.grid_oracle(problem, 0.1)
    assert result.feasible
    assert result.mu_s >= grid.mu_s - 1e-9
    assert ehcr.evaluate_policy(problem, result.policy).mu_s == result.mu_s


def test_simulator(setup):
    profile, sensing, traffic = setup
    stats = ehcr.simulate(ehcr.Scheme.NoFeedback, ehcr.Policy(pt=1.0), profile, sensing,
                          traffic, n_slots=200_000, seed=3)
    assert abs(stats.mu_p.value - 0.252) <= 4 * stats.mu_p.stderr


def test_cli():
    code, out, err = ehcr.cli(["analyze", "--preset", "fig4", "--scheme", "NoFeedback"])
    assert code == 2
    assert out.startswith("scheme,")
    assert ",0.252," in out
