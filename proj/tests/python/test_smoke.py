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

import math

import pytest

import qpqsim


def test_version_string():
    assert qpqsim.__version__


def test_database_round_trip(tmp_path):
    db = qpqsim.Database(2, [0, 1, 1, 0])
    assert db.width() == 2
    assert db.size() == 4
    assert [db.record(a) for a in range(4)] == [0, 1, 1, 0]

    path = tmp_path / "records.db"
    db.save(str(path))
    loaded = qpqsim.Database.load(str(path))
    assert loaded.serialize() == db.serialize()

    with pytest.raises(ValueError):
        qpqsim.Database(2, [1, 0, 0, 0])  # record 0 must stay 0


def test_honest_run_accepts():
    db = qpqsim.Database.random(3, 42)
    rng = qpqsim.RandomSource(1)
    honest = qpqsim.honest_strategy()
    for _ in range(20):
        plan = qpqsim.plan_query(j=5, variant=qpqsim.Variant.Basic, n=3,
                                 rng=rng)
        result = qpqsim.run_protocol(db, plan, honest, rng)
        assert not result.outcome.detected_cheating
        assert result.outcome.answer == db.record(5)

    exact = qpqsim.run_protocol_exact(db, plan, honest)
    assert exact.accept_prob == pytest.approx(1.0, abs=1e-12)
    cost = qpqsim.comm_cost(result.transcript)
    assert cost.total_qubits == 8
    assert cost.db_calls == 2


def test_exact_detection_probability():
    db = qpqsim.Database.random(2, 7)
    paper = qpqsim.projective_both_strategy(qpqsim.ProjectiveMode.Paper)
    for j in range(1, 4):
        assert qpqsim.detection_probability_exact(paper, db, j) == \
            pytest.approx(0.25, abs=1e-10)

    sampled = qpqsim.detection_probability_mc(paper, db, 1, 5000, 3)
    assert abs(sampled - 0.25) < 5 * math.sqrt(0.25 * 0.75 / 5000)

    strict = qpqsim.parse_strategy("projective:strict")
    assert qpqsim.detection_probability_exact(strict, db, 1) == \
        pytest.approx(0.375, abs=1e-10)


def test_tradeoff_sweep_summary():
    db = qpqsim.Database.random(2, 3)
    grid = [0.0, math.pi / 4, math.pi / 2]
    report = qpqsim.tradeoff_sweep(grid, db)
    assert report["n"] == 2
    assert report["domain_size"] == 4
    assert len(report["points"]) == 3
    assert report["points"][0]["epsilon"] == pytest.approx(0.0, abs=1e-10)
    assert report["points"][2]["epsilon"] == pytest.approx(0.5, abs=1e-10)
    assert report["points"][2]["holevo_bits"] == \
        pytest.approx(math.log2(3), abs=1e-9)
    assert math.isfinite(report["c_fidelity"])
    assert "uniform over admissible queries" in report["query_weights"]


def test_gate_counts_and_complexity():
    counts = qpqsim.gate_count(10)
    assert counts.conventional_ops == 2046
    assert counts.addressing_ops == 10

    report = qpqsim.complexity_report(3)
    assert report.qpq_qubits == 8
    assert report.qpq_db_calls == 2
    assert report.spir_exchange == 8
    assert report.qram_counts.conventional_ops == 14


def test_exceptions_map_to_python_types():
    with pytest.raises(ValueError):
        qpqsim.coupling_attack(-1.0)
    with pytest.raises(OSError):
        qpqsim.Database.load("/nonexistent/qpq.db")
    with pytest.raises(RuntimeError):
        # width cap on the gate-count closed form
        qpqsim.gate_count(62)
