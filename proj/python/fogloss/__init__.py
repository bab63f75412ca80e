"""Blocking probabilities of two cooperating loss systems with overflow rerouting.

The heavy lifting is in the compiled ``_fogloss`` extension; this package
re-exports it.
"""

from ._fogloss import (
    FiniteBlocking,
    FoglossError,
    Node,
    Regime,
    SimEstimate,
    StationarySolution,
    SystemParams,
    blocking,
    branch_points,
    classify_ring,
    erlang_b,
    exact_finite,
    figure_table,
    oracle,
    phi_Y,
    pi00,
    regime,
    ring_blocking,
    run_config,
    simulate,
    simulate_ring,
)

__all__ = [
    "FiniteBlocking",
    "FoglossError",
    "Node",
    "Regime",
    "SimEstimate",
    "StationarySolution",
    "SystemParams",
    "blocking",
    "branch_points",
    "classify_ring",
    "erlang_b",
    "exact_finite",
    "figure_table",
    "oracle",
    "phi_Y",
    "pi00",
    "regime",
    "ring_blocking",
    "run_config",
    "simulate",
    "simulate_ring",
]
