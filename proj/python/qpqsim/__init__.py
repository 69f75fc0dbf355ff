# Copyright 2026 The qpqsim Authors
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

"""Python interface to the quantum private query simulator."""

from ._core import (
    AttackStrategy,
    CapExceededError,
    CommCost,
    ComplexityReport,
    Database,
    DimensionError,
    ExactRunResult,
    GateCountReport,
    IoError,
    ProjectiveMode,
    ProtocolOutcome,
    QueryPlan,
    RandomSource,
    RunResult,
    Scenario,
    Transcript,
    ValidationError,
    Variant,
    __version__,
    bob_information,
    comm_cost,
    complexity_report,
    coupling_attack,
    detection_probability_exact,
    detection_probability_mc,
    epsilon_of,
    gate_count,
    honest_strategy,
    parse_strategy,
    plan_query,
    projective_both_strategy,
    run_protocol,
    run_protocol_exact,
    tradeoff_sweep,
)

__all__ = [
    "AttackStrategy",
    "CapExceededError",
    "CommCost",
    "ComplexityReport",
    "Database",
    "DimensionError",
    "ExactRunResult",
    "GateCountReport",
    "IoError",
    "ProjectiveMode",
    "ProtocolOutcome",
    "QueryPlan",
    "RandomSource",
    "RunResult",
    "Scenario",
    "Transcript",
    "ValidationError",
    "Variant",
    "__version__",
    "bob_information",
    "comm_cost",
    "complexity_report",
    "coupling_attack",
    "detection_probability_exact",
    "detection_probability_mc",
    "epsilon_of",
    "gate_count",
    "honest_strategy",
    "parse_strategy",
    "plan_query",
    "projective_both_strategy",
    "run_protocol",
    "run_protocol_exact",
    "tradeoff_sweep",
]
