// Copyright 2026 The qpqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpq/analysis.hpp"
#include "qpq/cli.hpp"
#include "qpq/version.hpp"

namespace py = pybind11;

namespace {

py::dict tradeoff_summary(const std::vector<double>& theta_grid,
                          const qpq::Database& db) {
  const qpq::TradeoffReport report = qpq::tradeoff_sweep(theta_grid, db);
  py::list points;
  for (const auto& point : report.points) {
    py::dict p;
    p["theta"] = point.theta;
    p["epsilon"] = point.epsilon;
    p["fidelity_gap"] = point.fidelity_gap;
    p["holevo_bits"] = point.holevo_bits;
    points.append(std::move(p));
  }
  py::dict doc;
  doc["n"] = report.n;
  doc["domain_size"] = report.domain_size;
  doc["points"] = std::move(points);
  doc["c_fidelity"] = report.c_fidelity;
  doc["c_holevo"] = report.c_holevo;
  doc["query_weights"] = report.query_weights;
  return doc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum private query simulator";

  py::register_exception<qpq::ValidationError>(m, "ValidationError",
                                               PyExc_ValueError);
  py::register_exception<qpq::DimensionError>(m, "DimensionError",
                                              PyExc_ValueError);
  py::register_exception<qpq::CapExceededError>(m, "CapExceededError",
                                                PyExc_RuntimeError);
  py::register_exception<qpq::IoError>(m, "IoError", PyExc_OSError);

  py::class_<qpq::RandomSource>(m, "RandomSource")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &qpq::RandomSource::uniform)
      .def("uniform_int", &qpq::RandomSource::uniform_int, py::arg("lo"),
           py::arg("hi"))
      .def("normal", &qpq::RandomSource::normal)
      .def("bernoulli", &qpq::RandomSource::bernoulli, py::arg("p"));

  py::class_<qpq::Database>(m, "Database")
      .def(py::init<int, std::vector<std::uint8_t>>(), py::arg("n"),
           py::arg("records"))
      .def_static("random", &qpq::Database::random, py::arg("n"),
                  py::arg("seed"))
      .def_static(
          "load",
          [](const std::string& path) { return qpq::Database::load(path); },
          py::arg("path"))
      .def(
          "save",
          [](const qpq::Database& db, const std::string& path) {
            db.save(path);
          },
          py::arg("path"))
      .def_static("parse", &qpq::Database::parse, py::arg("text"),
                  py::arg("origin") = "<string>")
      .def("serialize", &qpq::Database::serialize)
      .def("width", &qpq::Database::width)
      .def("size", &qpq::Database::size)
      .def("record", &qpq::Database::record, py::arg("address"))
      .def("records", &qpq::Database::records);

  py::enum_<qpq::Variant>(m, "Variant")
      .value("Basic", qpq::Variant::Basic)
      .value("ArbitraryAmplitude", qpq::Variant::ArbitraryAmplitude)
      .value("TwoQuery", qpq::Variant::TwoQuery);

  py::enum_<qpq::Scenario>(m, "Scenario")
      .value("A", qpq::Scenario::A)
      .value("B", qpq::Scenario::B);

  py::class_<qpq::QueryPlan>(m, "QueryPlan")
      .def_readonly("n", &qpq::QueryPlan::n)
      .def_readonly("j", &qpq::QueryPlan::j)
      .def_readonly("variant", &qpq::QueryPlan::variant)
      .def_readonly("reference", &qpq::QueryPlan::reference)
      .def_readonly("scenario", &qpq::QueryPlan::scenario)
      .def_readonly("superposed_slot", &qpq::QueryPlan::superposed_slot)
      .def_readonly("seed", &qpq::QueryPlan::seed)
      .def("send_count", &qpq::QueryPlan::send_count)
      .def("domain_size", &qpq::QueryPlan::domain_size);

  m.def("plan_query", &qpq::plan_query, py::arg("j"), py::arg("variant"),
        py::arg("n"), py::arg("rng"), py::arg("alpha") = py::none(),
        py::arg("beta") = py::none(), py::arg("k") = py::none());

  py::class_<qpq::ProtocolOutcome>(m, "ProtocolOutcome")
      .def_readonly("answer", &qpq::ProtocolOutcome::answer)
      .def_readonly("plain_consistent", &qpq::ProtocolOutcome::plain_consistent)
      .def_readonly("test_passed", &qpq::ProtocolOutcome::test_passed)
      .def_readonly("detected_cheating",
                    &qpq::ProtocolOutcome::detected_cheating);

  py::class_<qpq::Transcript>(m, "Transcript")
      .def("n", &qpq::Transcript::n)
      .def("total_qubits", &qpq::Transcript::total_qubits)
      .def("gross_qubits", &qpq::Transcript::gross_qubits)
      .def("db_calls", &qpq::Transcript::db_calls);

  py::class_<qpq::RunResult>(m, "RunResult")
      .def_readonly("outcome", &qpq::RunResult::outcome)
      .def_readonly("transcript", &qpq::RunResult::transcript);

  py::class_<qpq::ExactRunResult>(m, "ExactRunResult")
      .def_readonly("answer_correct_prob",
                    &qpq::ExactRunResult::answer_correct_prob)
      .def_readonly("plain_consistent_prob",
                    &qpq::ExactRunResult::plain_consistent_prob)
      .def_readonly("test_pass_prob", &qpq::ExactRunResult::test_pass_prob)
      .def_readonly("accept_prob", &qpq::ExactRunResult::accept_prob)
      .def_readonly("detection_prob", &qpq::ExactRunResult::detection_prob);

  py::class_<qpq::CommCost>(m, "CommCost")
      .def_readonly("total_qubits", &qpq::CommCost::total_qubits)
      .def_readonly("gross_qubits", &qpq::CommCost::gross_qubits)
      .def_readonly("db_calls", &qpq::CommCost::db_calls)
      .def_readonly("qpq_db_calls", &qpq::CommCost::qpq_db_calls)
      .def_readonly("classical_pir_calls", &qpq::CommCost::classical_pir_calls)
      .def_readonly("spir_exchange", &qpq::CommCost::spir_exchange);

  m.def("comm_cost", &qpq::comm_cost, py::arg("transcript"));

  py::class_<qpq::AttackStrategy>(m, "AttackStrategy")
      .def("name", &qpq::AttackStrategy::name)
      .def("honest", &qpq::AttackStrategy::honest)
      .def("branching", &qpq::AttackStrategy::branching)
      .def("ancilla_dim", &qpq::AttackStrategy::ancilla_dim, py::arg("n"));

  py::enum_<qpq::ProjectiveMode>(m, "ProjectiveMode")
      .value("Paper", qpq::ProjectiveMode::Paper)
      .value("Strict", qpq::ProjectiveMode::Strict);

  m.def("honest_strategy", &qpq::honest_strategy);
  m.def("projective_both_strategy", &qpq::projective_both_strategy,
        py::arg("mode"));
  m.def("coupling_attack", &qpq::coupling_attack, py::arg("theta"));
  m.def("parse_strategy", &qpq::parse_strategy, py::arg("text"));

  m.def("run_protocol", &qpq::run_protocol, py::arg("db"), py::arg("plan"),
        py::arg("strategy"), py::arg("rng"));
  m.def("run_protocol_exact", &qpq::run_protocol_exact, py::arg("db"),
        py::arg("plan"), py::arg("strategy"));

  m.def(
      "detection_probability_exact",
      [](const qpq::AttackStrategy& strategy, const qpq::Database& db,
         std::int64_t j) {
        return qpq::detection_probability(strategy, db, j, qpq::ExactMethod{});
      },
      py::arg("strategy"), py::arg("db"), py::arg("j"));
  m.def(
      "detection_probability_mc",
      [](const qpq::AttackStrategy& strategy, const qpq::Database& db,
         std::int64_t j, std::int64_t trials, std::uint64_t seed) {
        return qpq::detection_probability(strategy, db, j,
                                          qpq::MonteCarloMethod{trials, seed});
      },
      py::arg("strategy"), py::arg("db"), py::arg("j"), py::arg("trials"),
      py::arg("seed"));
  m.def("epsilon_of", &qpq::epsilon_of, py::arg("strategy"), py::arg("db"));
  m.def("bob_information", &qpq::bob_information, py::arg("strategy"),
        py::arg("db"));
  m.def("tradeoff_sweep", &tradeoff_summary, py::arg("theta_grid"),
        py::arg("db"));

  py::class_<qpq::GateCountReport>(m, "GateCountReport")
      .def_readonly("n", &qpq::GateCountReport::n)
      .def_readonly("conventional_ops", &qpq::GateCountReport::conventional_ops)
      .def_readonly("addressing_ops", &qpq::GateCountReport::addressing_ops);
  m.def("gate_count", &qpq::gate_count, py::arg("n"));

  py::class_<qpq::ComplexityReport>(m, "ComplexityReport")
      .def_readonly("n", &qpq::ComplexityReport::n)
      .def_readonly("qpq_qubits", &qpq::ComplexityReport::qpq_qubits)
      .def_readonly("qpq_db_calls", &qpq::ComplexityReport::qpq_db_calls)
      .def_readonly("spir_exchange", &qpq::ComplexityReport::spir_exchange)
      .def_readonly("classical_db_calls",
                    &qpq::ComplexityReport::classical_db_calls)
      .def_readonly("qram_counts", &qpq::ComplexityReport::qram_counts);
  m.def("complexity_report", &qpq::complexity_report, py::arg("n"));

  m.attr("__version__") = qpq::kVersion;
}
