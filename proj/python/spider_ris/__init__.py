# SPDX-License-Identifier: Apache-2.0
#
# spider-ris: movable RIS assisted mmWave hybrid beamforming simulator
# Copyright (C) 2026 The spider-ris authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Movable RIS assisted mmWave hybrid beamforming simulator."""

from ._spider_ris import (
    InvalidConfig,
    baseline_names,
    channels,
    config_digest,
    config_keys,
    decode,
    default_config,
    monte_carlo_point,
    noise_power,
    oracle_check,
    path_loss_linear,
    steering_vector,
    sweep,
)

__all__ = [
    "InvalidConfig",
    "baseline_names",
    "channels",
    "config_digest",
    "config_keys",
    "decode",
    "default_config",
    "monte_carlo_point",
    "noise_power",
    "oracle_check",
    "path_loss_linear",
    "steering_vector",
    "sweep",
    "with_overrides",
]


def with_overrides(config: str, **fields) -> str:
    """Append 'key = value' overrides to a scenario text."""
    lines = [config.rstrip("\n")]
    for key, value in fields.items():
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
