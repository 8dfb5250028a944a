"""EKR and strong-EKR verdicts, and the admissible-ordering check.

A family is EKR when every star (all members through one fixed element)
attains the maximum intersecting-subfamily size; it is strongly EKR when
stars are the only maximum intersecting subfamilies.  For thresholds
t >= 2 the star notion generalizes to a t-star: all members containing a
fixed t-subset of the relevant universe (ground elements in element mode,
ambient vertices in vertex mode), matching the equality families of the
classical t-intersecting bounds.

Verdicts are exact.  A budget exhaustion in the solver yields status
"Unknown", never a silently weakened answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .config import DEFAULT_LIMITS, Limits
from .core import NodeBudgetExceeded, SetFamily
from .solver import (
    MODE_ELEMENT,
    build_intersection_graph,
    find_non_star_maximum,
    solve_max_clique,
)

STATUS_EKR = "EKR"
STATUS_STRONG = "StrongEKR"
STATUS_NOT_EKR = "NotEKR"
STATUS_NOT_STRONG = "EkrNotStrong"
STATUS_UNKNOWN = "Unknown"


@dataclass(frozen=True)
class EkrVerdict:
    """Machine-readable outcome of an EKR check, with witnesses.

    star_size          size of the largest t-star
    max_size           exact maximum intersecting-subfamily size
    counterexample     an intersecting subfamily beating (or matching while
                       stars disagree) the star bound, when NotEKR
    non_star_maximum   a maximum intersecting subfamily equal to no star,
                       when EkrNotStrong
    unequal_stars      two (t-subset, size) probes with different sizes
    """

    status: str
    star_size: int
    max_size: int
    counterexample: tuple[int, ...] | None = None
    non_star_maximum: tuple[int, ...] | None = None
    unequal_stars: tuple[tuple[tuple[int, ...], int], tuple[tuple[int, ...], int]] | None = None
    exhaustive: bool = True
    node_count: int = 0

    @property
    def holds(self) -> bool:
        return self.status in (STATUS_EKR, STATUS_STRONG)

    def to_json_dict(self, family: SetFamily | None = None) -> dict:
        def labeled(indices: tuple[int, ...] | None):
            if indices is None:
                return []
            if family is None:
                return [list(indices)]
            return [list(family.members[i].labels(family.ground)) for i in indices]

        witnesses = []
        if self.counterexample is not None:
            witnesses.append({"kind": "counterexample", "members": labeled(self.counterexample)})
        if self.non_star_maximum is not None:
            witnesses.append({"kind": "non_star_maximum", "members": labeled(self.non_star_maximum)})
        return {
            "status": self.status,
            "star_size": self.star_size,
            "max_size": self.max_size,
            "witnesses": witnesses,
            "exhaustive": self.exhaustive,
            "node_count": self.node_count,
        }


def star_sizes(family: SetFamily) -> list[tuple[int, int]]:
    """|star(F, x)| for every ground element x."""
    counts = [0] * family.ground.size
    for m in family.members:
        b = m.bits
        while b:
            low = b & -b
            counts[low.bit_length() - 1] += 1
            b ^= low
    return list(enumerate(counts))


def _t_star_table(masks: tuple[int, ...], t: int) -> dict[tuple[int, ...], list[int]]:
    """Map each t-subset of the relevant universe (that occurs inside some
    member) to the indices of the members containing it."""
    table: dict[tuple[int, ...], list[int]] = {}
    for i, mask in enumerate(masks):
        idxs = _indices_of(mask)
        if len(idxs) < t:
            continue
        for combo in combinations(idxs, t):
            table.setdefault(combo, []).append(i)
    return table


def _indices_of(bits: int) -> tuple[int, ...]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return tuple(out)


def _relevant_universe_size(family: SetFamily, mode: str) -> int:
    if mode == MODE_ELEMENT:
        return family.ground.size
    return family.ambient.vertex_count  # vertex mode was validated upstream


def check_ekr(
    family: SetFamily,
    t: int = 1,
    mode: str = MODE_ELEMENT,
    limits: Limits = DEFAULT_LIMITS,
) -> EkrVerdict:
    """EKR iff all t-stars are equally large and attain the exact maximum."""
    if not family.members:
        raise ValueError("family must be nonempty")
    graph = build_intersection_graph(family, t, mode, limits)
    table = _t_star_table(graph.member_masks, t)
    universe = _relevant_universe_size(family, mode)
    total_t_subsets = comb(universe, t)
    star_max = max((len(v) for v in table.values()), default=0)
    star_min = min((len(v) for v in table.values()), default=0)
    if len(table) < total_t_subsets:
        star_min = 0

    try:
        top = solve_max_clique(graph, limits)
    except NodeBudgetExceeded:
        return EkrVerdict(STATUS_UNKNOWN, star_max, 0, exhaustive=False)

    if star_min != star_max:
        small = _smallest_uncovered(table, universe, t, star_min)
        big = max(table.items(), key=lambda kv: (len(kv[1]), tuple(-i for i in kv[0])))
        return EkrVerdict(
            STATUS_NOT_EKR,
            star_max,
            top.size,
            counterexample=top.witness,
            unequal_stars=(small, (big[0], len(big[1]))),
            node_count=top.node_count,
        )
    if top.size > star_max:
        return EkrVerdict(
            STATUS_NOT_EKR,
            star_max,
            top.size,
            counterexample=top.witness,
            node_count=top.node_count,
        )
    return EkrVerdict(STATUS_EKR, star_max, top.size, node_count=top.node_count)


def _smallest_uncovered(table, universe: int, t: int, star_min: int):
    """A (t-subset, size) probe realizing the minimum star size."""
    if star_min == 0 and len(table) < comb(universe, t):
        for combo in combinations(range(universe), t):
            if combo not in table:
                return (combo, 0)
    small = min(table.items(), key=lambda kv: (len(kv[1]), kv[0]))
    return (small[0], len(small[1]))


def check_strong_ekr(
    family: SetFamily,
    t: int = 1,
    mode: str = MODE_ELEMENT,
    limits: Limits = DEFAULT_LIMITS,
) -> EkrVerdict:
    """Strong EKR iff every maximum intersecting subfamily is a t-star.

    Once the family is EKR, every t-star is a maximum, and a maximum whose
    members share a t-subset T fills the whole star of T; so the family is
    strongly EKR exactly when no maximum avoids all t-stars.  The check is
    an exhaustive search for such a scattered maximum, stopping at the
    first witness.  A budget exhaustion yields Unknown, never a guess.
    """
    base = check_ekr(family, t, mode, limits)
    if base.status != STATUS_EKR:
        return base
    graph = build_intersection_graph(family, t, mode, limits)
    try:
        witness, nodes = find_non_star_maximum(graph, base.max_size, limits)
    except NodeBudgetExceeded:
        return EkrVerdict(
            STATUS_UNKNOWN, base.star_size, base.max_size, exhaustive=False,
            node_count=base.node_count,
        )
    nodes += base.node_count
    if witness is not None:
        return EkrVerdict(
            STATUS_NOT_STRONG,
            base.star_size,
            base.max_size,
            non_star_maximum=witness,
            exhaustive=True,
            node_count=nodes,
        )
    return EkrVerdict(
        STATUS_STRONG,
        base.star_size,
        base.max_size,
        exhaustive=True,
        node_count=nodes,
    )


# ---------------------------------------------------------------------------
# admissible orderings (cyclic orderings whose every k-window is a member)
# ---------------------------------------------------------------------------


def check_admissible_ordering(
    ground_order: list[int] | tuple[int, ...], family: SetFamily, k: int
) -> tuple[bool, int | None]:
    """True iff every cyclic window of k consecutive elements is a member.

    Returns (ok, first offending window start) - the window starting at
    position i covers ground_order[i..i+k-1] cyclically.
    """
    n = family.ground.size
    order = tuple(ground_order)
    if sorted(order) != list(range(n)):
        raise ValueError("ground_order must be a permutation of all ground elements")
    if not 1 <= k <= n:
        raise ValueError("window length must be between 1 and n")
    member_bits = {m.bits for m in family.members}
    window = 0
    for i in range(k):
        window |= 1 << order[i]
    for i in range(n):
        if window not in member_bits:
            return False, i
        window ^= 1 << order[i]
        window |= 1 << order[(i + k) % n]
    return True, None


def search_admissible_ordering(
    family: SetFamily, k: int, node_budget: int = 10_000_000
) -> tuple[int, ...] | None:
    """Backtracking search for an admissible ordering; None means none exists.

    Fixes element 0 first (cyclic rotations are equivalent), then extends
    position by position, checking each window as soon as it completes.
    """
    n = family.ground.size
    member_bits = {m.bits for m in family.members}
    if k == 1:
        # every window is a singleton, so any rotation works iff all
        # singletons are members
        if all(1 << x in member_bits for x in range(n)):
            return tuple(range(n))
        return None
    order = [0] + [-1] * (n - 1)
    used = [False] * n
    used[0] = True
    budget = [node_budget]

    def window_ok(pos: int) -> bool:
        # window starting at pos-k+1, fully placed once position pos is set
        b = 0
        for i in range(pos - k + 1, pos + 1):
            b |= 1 << order[i % n]
        return b in member_bits

    def place(pos: int) -> bool:
        if pos == n:
            return all(window_ok(n + i) for i in range(k - 1))
        for cand in range(1, n):
            if used[cand]:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise NodeBudgetExceeded("budget exhausted")
            order[pos] = cand
            if pos >= k - 1 and not window_ok(pos):
                continue
            used[cand] = True
            if place(pos + 1):
                return True
            used[cand] = False
        order[pos] = -1
        return False

    if place(1):
        return tuple(order)
    return None
