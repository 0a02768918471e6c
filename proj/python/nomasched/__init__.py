# Copyright 2026 The nomasched Authors
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

"""Downlink NOMA/OMA weighted proportional-fair scheduling simulator."""

import json
from typing import Any, Mapping, Union

from . import _nomasched
from ._nomasched import (
    ConfigError,
    InvalidArgument,
    enumerate_candidates,
    ftpa_allocate,
    gini,
    pathloss_db,
    percentile,
    scheduler_kinds,
    user_rates,
)

__all__ = [
    "ConfigError",
    "InvalidArgument",
    "enumerate_candidates",
    "ftpa_allocate",
    "gini",
    "parse_config",
    "pathloss_db",
    "percentile",
    "run_comparison",
    "run_experiment",
    "scheduler_kinds",
    "user_rates",
]

Config = Union[str, Mapping[str, Any], None]


def _text(config: Config) -> str:
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return json.dumps(dict(config))


def parse_config(config: Config = None) -> dict:
    """Validated config with defaults filled in."""
    return json.loads(_nomasched.parse_config(_text(config)))


def run_experiment(config: Config = None, kind: str = "WNOPF") -> dict:
    """Runs every drop for one scheduler kind; returns the JSON summary."""
    return json.loads(_nomasched.run_experiment(_text(config), kind))


def run_comparison(config: Config, a: str, b: str) -> dict:
    return json.loads(_nomasched.run_comparison(_text(config), a, b))
