"""Last-mile delivery with autonomous vehicles and drones.

Thin wrapper over the C++ core: scenario generation and grouping, the exact
and greedy assignment solvers, LP export and the company/vehicle metrics.
"""

from ._lad import (
    Group,
    InfeasibleError,
    IoError,
    LadError,
    ParseError,
    PartialCoverageError,
    Point,
    ProviderError,
    Scenario,
    Solution,
    ValidationError,
    Vehicle,
    break_even_rate,
    build_groups,
    check_assignment,
    company_savings,
    completion_time,
    export_lp,
    generate,
    min_makespan,
    per_vehicle_profit,
    round_cents,
    solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
