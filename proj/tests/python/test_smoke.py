# Copyright 2026 The riskcert Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the Python bindings."""

import json
import math

import pytest

import riskcert


def test_confidence_matches_closed_form():
    assert riskcert.confidence(0.01, 1000) == pytest.approx(1 - 0.99**1000, abs=1e-12)
    assert riskcert.required_samples(0.05, 0.994) == 100


def test_certify_min_reports_smallest_cost():
    bound = riskcert.certify_min([3.0, 1.5, 2.0], 0.1)
    assert bound["threshold"] == 1.5
    assert bound["n_samples"] == 3
    assert bound["confidence"] == pytest.approx(1 - 0.9**3)


def test_certify_max_reports_largest_runtime():
    assert riskcert.certify_max([0.1, 0.4, 0.2], 0.01)["threshold"] == 0.4


def test_planar_cost_of_straight_path():
    # Ten steps of 0.03 along x from (4.2, 2.0) end at the goal.
    steps = [(0.03, 0.0)] * 10
    cost = riskcert.planar_cost(steps, (4.2, 2.0))
    assert cost == pytest.approx(0.3, abs=1e-12)
    miss = riskcert.planar_cost([(0.0, 0.0)] * 10, (4.2, 2.0))
    assert miss == pytest.approx(10 * 0.3, abs=1e-12)


def test_solve_planar_is_seeded_and_feasible():
    a = riskcert.solve_planar((1.0, 1.0), obstacles=[(2.0, 2.0)], n=200, seed=3)
    b = riskcert.solve_planar((1.0, 1.0), obstacles=[(2.0, 2.0)], n=200, seed=3)
    assert a == b
    assert len(a["sequence"]) == 20
    for dx, dy in a["sequence"]:
        assert math.hypot(dx, dy) <= 0.03 + 1e-12
    assert a["bound"]["confidence"] == pytest.approx(1 - 0.99**200)
    refined = riskcert.solve_planar(
        (1.0, 1.0), obstacles=[(2.0, 2.0)], n=200, seed=3, refine=True
    )
    assert refined["cost"] <= a["cost"]


def test_run_cli_plan(tmp_path):
    out = tmp_path / "plan.json"
    code, stdout, _ = riskcert.run_cli(
        ["plan", "--env", "unicycle", "--seed", "4", "--out", str(out)]
    )
    assert code == 0
    assert str(out) in stdout
    report = json.loads(out.read_text())
    assert report["schema"] == "riskcert/1"
    assert report["kind"] == "percentile"


def test_run_cli_rejects_bad_epsilon():
    code, _, err = riskcert.run_cli(["plan", "--env", "planar", "--epsilon", "2"])
    assert code == 1
    assert err
