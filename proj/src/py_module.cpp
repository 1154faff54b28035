#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bilatsim/experiments.hpp"
#include "bilatsim/io.hpp"
#include "bilatsim/metrics.hpp"
#include "bilatsim/trading.hpp"
#include "bilatsim/world.hpp"

namespace py = pybind11;
using namespace bilatsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "deterministic bilateral bond market-maker network simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<IntRange>(m, "IntRange")
        .def(py::init<int, int>(), py::arg("lo"), py::arg("hi"))
        .def_readwrite("lo", &IntRange::lo)
        .def_readwrite("hi", &IntRange::hi)
        .def("__eq__", [](const IntRange& a, const IntRange& b) { return a == b; })
        .def("__repr__", [](const IntRange& r) {
            return "IntRange(" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + ")";
        });

    py::enum_<Neighborhood>(m, "Neighborhood")
        .value("moore", Neighborhood::moore)
        .value("von_neumann", Neighborhood::von_neumann);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("grid_width", &SimConfig::grid_width)
        .def_readwrite("grid_height", &SimConfig::grid_height)
        .def_readwrite("neighborhood", &SimConfig::neighborhood)
        .def_readwrite("n_agents", &SimConfig::n_agents)
        .def_readwrite("vision_range", &SimConfig::vision_range)
        .def_readwrite("metabolism_range_bonds", &SimConfig::metabolism_range_bonds)
        .def_readwrite("metabolism_range_cash", &SimConfig::metabolism_range_cash)
        .def_readwrite("endowment_range_bonds", &SimConfig::endowment_range_bonds)
        .def_readwrite("endowment_range_cash", &SimConfig::endowment_range_cash)
        .def_readwrite("cell_capacity_range_bonds", &SimConfig::cell_capacity_range_bonds)
        .def_readwrite("cell_capacity_range_cash", &SimConfig::cell_capacity_range_cash)
        .def_readwrite("regrowth_rate", &SimConfig::regrowth_rate)
        .def_readwrite("max_steps", &SimConfig::max_steps)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("replications", &SimConfig::replications)
        .def("validate", &SimConfig::validate)
        .def("__eq__", [](const SimConfig& a, const SimConfig& b) { return a == b; });

    py::class_<AgentState>(m, "AgentState")
        .def(py::init<>())
        .def_readwrite("id", &AgentState::id)
        .def_readwrite("x", &AgentState::x)
        .def_readwrite("y", &AgentState::y)
        .def_readwrite("vision", &AgentState::vision)
        .def_readwrite("metabolism_bonds", &AgentState::metabolism_bonds)
        .def_readwrite("metabolism_cash", &AgentState::metabolism_cash)
        .def_readwrite("accum_bonds", &AgentState::accum_bonds)
        .def_readwrite("accum_cash", &AgentState::accum_cash)
        .def_readwrite("alive", &AgentState::alive);

    py::class_<TradeRecord>(m, "TradeRecord")
        .def_readonly("step", &TradeRecord::step)
        .def_readonly("buyer_id", &TradeRecord::buyer_id)
        .def_readonly("seller_id", &TradeRecord::seller_id)
        .def_readonly("bonds_moved", &TradeRecord::bonds_moved)
        .def_readonly("cash_moved", &TradeRecord::cash_moved)
        .def_readonly("price", &TradeRecord::price);

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("replication_index", &RunSummary::replication_index)
        .def_readonly("run_seed", &RunSummary::run_seed)
        .def_readonly("total_actions", &RunSummary::total_actions)
        .def_readonly("trading_actions", &RunSummary::trading_actions)
        .def_readonly("trade_fraction", &RunSummary::trade_fraction)
        .def_readonly("collapse_step", &RunSummary::collapse_step)
        .def_readonly("steps_executed", &RunSummary::steps_executed)
        .def_readonly("final_population", &RunSummary::final_population)
        .def_readonly("population_trajectory", &RunSummary::population_trajectory)
        .def_readonly("trade_log", &RunSummary::trade_log);

    py::class_<PaperTarget>(m, "PaperTarget")
        .def_readonly("mean_trade_fraction", &PaperTarget::mean_trade_fraction)
        .def_readonly("mean_tolerance", &PaperTarget::mean_tolerance)
        .def_readonly("mean_trade_fraction_max", &PaperTarget::mean_trade_fraction_max)
        .def_readonly("median_trade_fraction", &PaperTarget::median_trade_fraction)
        .def_readonly("median_tolerance", &PaperTarget::median_tolerance)
        .def_readonly("min_trade_fraction_max", &PaperTarget::min_trade_fraction_max)
        .def_readonly("max_trade_fraction_min", &PaperTarget::max_trade_fraction_min)
        .def_readonly("interbank_alignment_max", &PaperTarget::interbank_alignment_max)
        .def_readonly("median_collapse_step_max", &PaperTarget::median_collapse_step_max);

    py::class_<ScenarioSpec>(m, "ScenarioSpec")
        .def_readonly("name", &ScenarioSpec::name)
        .def_readonly("description", &ScenarioSpec::description)
        .def_readonly("config", &ScenarioSpec::config)
        .def_readonly("paper_target", &ScenarioSpec::paper_target);

    py::class_<TargetCheck>(m, "TargetCheck")
        .def_readonly("name", &TargetCheck::name)
        .def_readonly("pass_", &TargetCheck::pass)
        .def_readonly("observed", &TargetCheck::observed)
        .def_readonly("bound", &TargetCheck::bound);

    py::class_<ScenarioResult>(m, "ScenarioResult")
        .def_readonly("spec_name", &ScenarioResult::spec_name)
        .def_readonly("n_agents", &ScenarioResult::n_agents)
        .def_readonly("max_steps", &ScenarioResult::max_steps)
        .def_readonly("replications", &ScenarioResult::replications)
        .def_readonly("failed_replications", &ScenarioResult::failed_replications)
        .def_readonly("replication_summaries", &ScenarioResult::replication_summaries)
        .def_readonly("mean_trade_fraction", &ScenarioResult::mean_trade_fraction)
        .def_readonly("median_trade_fraction", &ScenarioResult::median_trade_fraction)
        .def_readonly("min_trade_fraction", &ScenarioResult::min_trade_fraction)
        .def_readonly("max_trade_fraction", &ScenarioResult::max_trade_fraction)
        .def_readonly("pooled_trade_fraction", &ScenarioResult::pooled_trade_fraction)
        .def_readonly("mean_final_population", &ScenarioResult::mean_final_population)
        .def_readonly("median_collapse_step", &ScenarioResult::median_collapse_step)
        .def_readonly("collapse_share", &ScenarioResult::collapse_share)
        .def_readonly("target_checks", &ScenarioResult::target_checks)
        .def_readonly("target_pass", &ScenarioResult::target_pass);

    py::class_<StabilityReport>(m, "StabilityReport")
        .def_readonly("parameter", &StabilityReport::parameter)
        .def_readonly("direction", &StabilityReport::direction)
        .def_readonly("perturbation", &StabilityReport::perturbation)
        .def_readonly("skipped", &StabilityReport::skipped)
        .def_readonly("warning", &StabilityReport::warning)
        .def_readonly("outcome_similarity", &StabilityReport::outcome_similarity)
        .def_readonly("interbank_alignment", &StabilityReport::interbank_alignment)
        .def_readonly("population_stability", &StabilityReport::population_stability)
        .def_readonly("similar_outcomes", &StabilityReport::similar_outcomes)
        .def_readonly("aligned_with_interbank", &StabilityReport::aligned_with_interbank)
        .def_readonly("population_stable", &StabilityReport::population_stable);

    py::class_<HypothesisCheck>(m, "HypothesisCheck")
        .def_readonly("name", &HypothesisCheck::name)
        .def_readonly("detail", &HypothesisCheck::detail)
        .def_readonly("pass_", &HypothesisCheck::pass);

    py::class_<HypothesisReport>(m, "HypothesisReport")
        .def_readonly("checks", &HypothesisReport::checks)
        .def_readonly("all_pass", &HypothesisReport::all_pass)
        .def_readonly("high_variance_flag", &HypothesisReport::high_variance_flag);

    m.def("compute_mrs",
          py::overload_cast<int, int, double, double>(&compute_mrs),
          py::arg("metabolism_bonds"), py::arg("metabolism_cash"), py::arg("bonds"), py::arg("cash"));
    m.def("compute_mrs", py::overload_cast<const AgentState&>(&compute_mrs), py::arg("agent"));
    m.def("compute_welfare",
          py::overload_cast<int, int, double, double>(&compute_welfare),
          py::arg("metabolism_bonds"), py::arg("metabolism_cash"), py::arg("bonds"), py::arg("cash"));
    m.def("compute_welfare", py::overload_cast<const AgentState&>(&compute_welfare), py::arg("agent"));
    m.def("bargain_price", &bargain_price, py::arg("mrs_a"), py::arg("mrs_b"));
    m.def("execute_trade_session", &execute_trade_session, py::arg("a"), py::arg("b"),
          py::arg("step") = 0, "Run a bargaining session; mutates both agents.");
    m.def("detect_collapse", &detect_collapse, py::arg("population_trajectory"));

    m.def(
        "run",
        [](const SimConfig& cfg, int replication_index, bool keep_trade_log) {
            return run(cfg, replication_index, keep_trade_log);
        },
        py::arg("config"), py::arg("replication_index") = 0, py::arg("keep_trade_log") = true,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "run_batch",
        [](const SimConfig& cfg, int replications, bool keep_trade_log) {
            return run_batch(cfg, replications, keep_trade_log).summaries;
        },
        py::arg("config"), py::arg("replications"), py::arg("keep_trade_log") = false,
        py::call_guard<py::gil_scoped_release>());

    m.def("builtin_scenarios", &builtin_scenarios);
    m.def("run_scenario", &run_scenario, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("hypothesis_report", &hypothesis_report, py::arg("results"));
    m.def("sensitivity_sweep", &sensitivity_sweep, py::arg("config"), py::arg("perturbation"),
          py::arg("parameters"), py::call_guard<py::gil_scoped_release>());
    m.def("stability_score", &stability_score, py::arg("baseline"), py::arg("perturbed"),
          py::arg("interbank_share") = kInterbankTradeShare);

    m.def("parse_config", &parse_config, py::arg("json_text"));
    m.def("serialize_config", &serialize_config, py::arg("config"));

    m.attr("TRADE_QUANTUM") = kTradeQuantum;
    m.attr("INTERBANK_TRADE_SHARE") = kInterbankTradeShare;
    m.attr("__version__") = "0.1.0";
}
