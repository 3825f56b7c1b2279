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
"""Percentile certificates for sampling-based controllers."""

from riskcert._core import (
    certify_max,
    certify_min,
    confidence,
    planar_cost,
    required_samples,
    run_cli,
    solve_planar,
)

__all__ = [
    "certify_max",
    "certify_min",
    "confidence",
    "planar_cost",
    "required_samples",
    "run_cli",
    "solve_planar",
]
