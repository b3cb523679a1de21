# Copyright 2026 The sybilscope Authors
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
"""Python bindings for the sybilscope detection core.

Reports, configs and ground truth cross the boundary as JSON; the wrappers
below take and return plain dicts.
"""

import json

from ._sybilscope import (
    ConfigError,
    IoError,
    Snapshot,
    dbscan,
    pair_count,
    search_complex,
    search_radial,
    search_sequential,
    seq_sim,
    silhouette,
    simulate,
)
from . import _sybilscope as _core

__all__ = [
    "ConfigError",
    "IoError",
    "Snapshot",
    "dbscan",
    "detect",
    "evaluate",
    "generate",
    "load",
    "pair_count",
    "search_complex",
    "search_radial",
    "search_sequential",
    "seq_sim",
    "silhouette",
    "simulate",
]


def generate(scenario):
    """Returns (Snapshot, truth dict) for a scenario dict."""
    snapshot, truth = _core.generate(json.dumps(scenario))
    return snapshot, json.loads(truth)


def load(config_path):
    """Loads a run config; returns (Snapshot, detect config dict, diagnostics)."""
    snapshot, cfg, diags = _core.load(str(config_path))
    return snapshot, json.loads(cfg), diags


def detect(snapshot, config=None):
    return json.loads(_core.detect(snapshot, json.dumps(config or {})))


def evaluate(report, truth):
    return json.loads(_core.evaluate(json.dumps(report), json.dumps(truth)))
