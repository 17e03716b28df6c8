"""Metropolis–Hastings sampling of configurations under the measure, and the JSON-lines sample stream."""

from .chain import (
    TARGET_KAHLER,
    TARGET_UNIT,
    Bounds,
    ChainResult,
    ChainState,
    Sample,
    acceptance_probability,
    audit,
    detailed_balance_gap,
    in_bounds,
    initial_state,
    log_target,
    mh_step,
    run_chain,
    run_chains,
)
from .stream import SampleStream

__all__ = [
    "Bounds",
    "ChainResult",
    "ChainState",
    "Sample",
    "SampleStream",
    "TARGET_KAHLER",
    "TARGET_UNIT",
    "acceptance_probability",
    "audit",
    "detailed_balance_gap",
    "in_bounds",
    "initial_state",
    "log_target",
    "mh_step",
    "run_chain",
    "run_chains",
]
