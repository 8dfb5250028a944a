"""Resource limits shared by generators, the clique solver, and searches."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    """Caps and budgets in effect for one engine run.

    member_cap      largest family the generators will materialize
    node_budget     search-tree nodes the exact solver may explore before
                    failing loudly (never silently truncating)
    enum_cap        maximum-witness count collected by full enumeration
    cover_budget    nodes for the exact-cover decomposition search
    adjacency_bits  upper bound on order**2 bits of an intersection graph
    """

    member_cap: int = 2_000_000
    node_budget: int = 1_000_000_000
    enum_cap: int = 100_000
    cover_budget: int = 100_000_000
    adjacency_bits: int = 8_000_000_000


DEFAULT_LIMITS = Limits()
