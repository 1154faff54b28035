"""Deterministic agent-based simulator of a bilateral OTC bond market-maker network."""

from ._core import (
    INTERBANK_TRADE_SHARE,
    TRADE_QUANTUM,
    AgentState,
    ConfigError,
    HypothesisCheck,
    HypothesisReport,
    IntRange,
    Neighborhood,
    PaperTarget,
    RunSummary,
    ScenarioResult,
    ScenarioSpec,
    SimConfig,
    StabilityReport,
    TargetCheck,
    TradeRecord,
    __version__,
    bargain_price,
    builtin_scenarios,
    compute_mrs,
    compute_welfare,
    detect_collapse,
    execute_trade_session,
    hypothesis_report,
    parse_config,
    run,
    run_batch,
    run_scenario,
    sensitivity_sweep,
    serialize_config,
    stability_score,
)

__all__ = [
    "INTERBANK_TRADE_SHARE",
    "TRADE_QUANTUM",
    "AgentState",
    "ConfigError",
    "HypothesisCheck",
    "HypothesisReport",
    "IntRange",
    "Neighborhood",
    "PaperTarget",
    "RunSummary",
    "ScenarioResult",
    "ScenarioSpec",
    "SimConfig",
    "StabilityReport",
    "TargetCheck",
    "TradeRecord",
    "__version__",
    "bargain_price",
    "builtin_scenarios",
    "compute_mrs",
    "compute_welfare",
    "detect_collapse",
    "execute_trade_session",
    "hypothesis_report",
    "parse_config",
    "run",
    "run_batch",
    "run_scenario",
    "sensitivity_sweep",
    "serialize_config",
    "stability_score",
]
