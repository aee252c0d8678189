# Copyright 2026 The FedMon Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Smoke tests for the Python bindings."""

import math
import os

import pytest

import fedmon

TINY = """experiment.rounds = 2
fl.local_epochs = 1
data.train_events = 6000
data.validation_events = 4000
data.eval_events = 6000
model.hidden = 6
model.latent = 2
detect.iforest_trees = 10
"""


def test_default_config_bandwidth():
    assert fedmon.predict_bandwidth() == 3560160


def test_canonical_config_round_trips():
    text = fedmon.canonical_config(TINY)
    assert "experiment.rounds = 2\n" in text
    assert fedmon.canonical_config(text) == text
    assert fedmon.config_fingerprint(text) == fedmon.config_fingerprint(TINY)


def test_shipped_config_loads():
    path = os.path.join(os.environ.get("FEDMON_CONFIG_DIR", "configs"), "default.cfg")
    with open(path) as f:
        assert fedmon.canonical_config(f.read()) == fedmon.canonical_config("")


def test_invalid_config_raises_value_error():
    with pytest.raises(ValueError):
        fedmon.canonical_config("no.such.key = 1\n")
    with pytest.raises(ValueError, match="at least 5"):
        fedmon.predict_bandwidth("fl.aggregation = krum\n")


def test_run_experiment_matches_prediction_and_is_deterministic():
    a = fedmon.run_experiment(TINY)
    b = fedmon.run_experiment(TINY)
    assert a == b
    assert len(a["rounds"]) == 2
    assert a["cumulative_bytes"] == fedmon.predict_bandwidth(TINY)
    assert 0.0 <= a["final"]["macro_f1"] <= 1.0


def test_metrics_from_counts():
    m = fedmon.metrics_from_counts(tp=8554, fp=546, tn=5000, fn=846)
    assert m["precision"] == pytest.approx(0.94)
    assert m["recall"] == pytest.approx(0.91)
    assert m["f1"] == pytest.approx(2 * 0.94 * 0.91 / (0.94 + 0.91))


def test_aggregation_helpers():
    assert math.hypot(*fedmon.clip([3.0, 4.0], 1.0)) == pytest.approx(1.0)
    assert fedmon.fedavg([[1.0], [4.0]], [3, 1]) == pytest.approx([1.75])
    deltas = [[0.0], [0.1], [-0.1], [0.2], [50.0]]
    selected, scores = fedmon.krum(deltas, f=1)
    assert selected != 4
    assert len(scores) == 5
    with pytest.raises(ValueError):
        fedmon.krum(deltas[:3], f=1)
