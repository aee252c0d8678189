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
"""Federated runtime anomaly detection simulator."""

import json

from fedmon._fedmon import (
    canonical_config,
    clip,
    config_fingerprint,
    fedavg,
    krum,
    metrics_from_counts,
    predict_bandwidth,
    run_experiment_json,
)

__all__ = [
    "canonical_config",
    "clip",
    "config_fingerprint",
    "fedavg",
    "krum",
    "metrics_from_counts",
    "predict_bandwidth",
    "run_experiment",
    "run_experiment_json",
]


def run_experiment(text: str = "") -> dict:
    """Runs an experiment and returns the report as a dict.

    The message transcript is attached under the "transcript_csv" key.
    """
    report_json, transcript_csv = run_experiment_json(text)
    report = json.loads(report_json)
    report["transcript_csv"] = transcript_csv
    return report
