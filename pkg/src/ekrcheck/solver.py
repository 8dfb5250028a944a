"""Exact maximum t-intersecting subfamilies via maximum clique search.

The intersection graph puts one vertex per family member and joins two
members when they share at least t ground elements (element mode) or at
least t ambient vertices (vertex mode).  Maximum intersecting subfamilies
are exactly maximum cliques of this graph.

The search is branch and bound over bit-parallel candidate sets (Python
integers as bitsets) with three exact devices tuned to intersecting-family
structure:

  star fold      every clique whose members share a common t-set lies
                 inside one t-star, and each t-star is itself a clique;
                 the largest star is both the initial incumbent and the
                 exact value of every star-confined branch.
  scatter split  at any node, a clique either stays inside the best star
                 of the candidates (folded exactly, never searched) or
                 contains a member escaping it; only escaping members are
                 branched on, and once the running common intersection
                 drops below t the node falls back to a classical
                 greedy-coloring bounded expansion.
  multicover     r independent sets covering every vertex at least w
                 times certify max clique <= r // w; a balanced cover is
                 attempted once at the root and refutes anything beyond
                 the star bound outright on sharply transitive instances.

Everything is deterministic: branching follows fixed index orders,
enumeration emits witnesses in ascending lexicographic order, and no
randomness exists anywhere.  Budgets fail loudly; a result is never
silently truncated.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable

from . import ambient as ambient_mod
from .config import DEFAULT_LIMITS, Limits
from .core import EngineError, FormatError, NodeBudgetExceeded, SetFamily

MODE_ELEMENT = "element"
MODE_VERTEX = "vertex"

# node allowance for the first search pass, before the multicover bound and
# the complement route are consulted; generous enough that easy instances
# never take the detour
_FIRST_PASS_NODES = 40_000
_COVER_DEGREE_CAP = 80
_COVER_ROUND_FACTOR = 24
_MIS_DEGREE_CAP = 64


@dataclass(frozen=True)
class IntersectionGraph:
    order: int
    adjacency: tuple[int, ...]  # symmetric bitmask rows, no self loops
    t: int
    mode: str
    member_masks: tuple[int, ...]  # per-member element or vertex bitmask


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: tuple[int, ...]
    node_count: int


@dataclass(frozen=True)
class EnumerationResult:
    size: int
    witnesses: tuple[tuple[int, ...], ...]
    exhaustive: bool
    node_count: int


def relevant_masks(family: SetFamily, mode: str) -> tuple[int, ...]:
    """Element bitmasks (element mode) or ambient-vertex bitmasks (vertex mode)."""
    if mode == MODE_ELEMENT:
        return tuple(m.bits for m in family.members)
    if mode == MODE_VERTEX:
        amb = family.ambient
        if amb is None:
            raise ValueError("vertex mode requires an ambient-backed family")
        return tuple(ambient_mod.vertex_mask_of(amb, m.bits) for m in family.members)
    raise ValueError(f"unknown mode {mode!r}")


def build_intersection_graph(
    family: SetFamily,
    t: int = 1,
    mode: str = MODE_ELEMENT,
    limits: Limits = DEFAULT_LIMITS,
) -> IntersectionGraph:
    """Adjacency i~j iff the members' relevant sets share >= t elements."""
    if t < 1:
        raise ValueError("threshold t must be >= 1")
    n = len(family.members)
    if n * n > limits.adjacency_bits:
        raise EngineError("intersection graph exceeds the adjacency bit cap")
    masks = relevant_masks(family, mode)
    rows = [0] * n
    for i in range(n):
        mi = masks[i]
        row = rows[i]
        for j in range(i + 1, n):
            if (mi & masks[j]).bit_count() >= t:
                row |= 1 << j
                rows[j] |= 1 << i
        rows[i] = row
    return IntersectionGraph(n, tuple(rows), t, mode, masks)


def is_intersecting(
    family: SetFamily, indices: list[int] | tuple[int, ...], t: int = 1, mode: str = MODE_ELEMENT
) -> bool:
    """True iff the chosen members pairwise share >= t relevant elements."""
    masks = relevant_masks(family, mode)
    idx = list(indices)
    for i in idx:
        if not 0 <= i < len(family.members):
            raise ValueError(f"member index {i} out of range")
    for a, b in combinations(idx, 2):
        if (masks[a] & masks[b]).bit_count() < t:
            return False
    return True


def _bit_indices(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def _element_vertex_sets(masks: tuple[int, ...]) -> list[int]:
    """For each ground element, the bitset of members containing it."""
    width = max((m.bit_length() for m in masks), default=0)
    table = [0] * width
    for i, mask in enumerate(masks):
        b = mask
        while b:
            low = b & -b
            table[low.bit_length() - 1] |= 1 << i
            b ^= low
    return table


def best_star_clique(graph: IntersectionGraph) -> list[int]:
    """Largest set of members sharing one common t-subset (always a clique).

    Deterministic: among equally large stars the lexicographically smallest
    t-subset wins.
    """
    cand = (1 << graph.order) - 1
    members, _ = _best_star_in(
        _element_vertex_sets(graph.member_masks), graph.member_masks, graph.t, cand
    )
    if members:
        return _bit_indices(members)
    return [0] if graph.order else []


def _best_star_in(
    element_sets: list[int], masks: tuple[int, ...], t: int, cand: int, within: int = -1
) -> tuple[int, int]:
    """(member bitset, size) of the best t-star among `cand`, with the star's
    t-subset drawn from the elements of `within` (default: all elements)."""
    if t == 1:
        best_set, best_size = 0, 0
        scan = range(len(element_sets)) if within == -1 else _bit_indices(within)
        for x in scan:
            hits = element_sets[x] & cand
            size = hits.bit_count()
            if size > best_size:
                best_set, best_size = hits, size
        return best_set, best_size
    elements = range(len(element_sets)) if within == -1 else _bit_indices(within)
    pool = [x for x in elements if element_sets[x] & cand]
    best_set, best_size = 0, 0
    for combo in combinations(pool, t):
        hits = cand
        for x in combo:
            hits &= element_sets[x]
            if not hits:
                break
        size = hits.bit_count()
        if size > best_size:
            best_set, best_size = hits, size
    return best_set, best_size


class _Budget:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit: int) -> None:
        self.nodes = 0
        self.limit = limit

    def spend(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise NodeBudgetExceeded("budget exhausted")


def _complement_rows(adj: tuple[int, ...], n: int) -> list[int]:
    full = (1 << n) - 1
    return [(~adj[v]) & full & ~(1 << v) for v in range(n)]


def _hk_double_matching(comp: list[int], sub: int) -> int:
    """Maximum matching size of the bipartite double cover of the complement
    graph induced on `sub` (Hopcroft-Karp).  Half of it is the exact LP
    vertex-cover value of that induced graph."""
    verts = _bit_indices(sub)
    if not verts:
        return 0
    match_l: dict[int, int] = {}
    match_r: dict[int, int] = {}
    INF = 1 << 30
    adj_of = {v: _bit_indices(comp[v] & sub) for v in verts}

    def bfs() -> bool:
        dist = {}
        queue = []
        for u in verts:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
        found = False
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for w in adj_of[u]:
                nxt = match_r.get(w)
                if nxt is None:
                    found = True
                elif nxt not in dist:
                    dist[nxt] = dist[u] + 1
                    queue.append(nxt)
        bfs.dist = dist
        return found

    def dfs(u: int) -> bool:
        for w in adj_of[u]:
            nxt = match_r.get(w)
            if nxt is None or (
                bfs.dist.get(nxt, INF) == bfs.dist[u] + 1 and dfs(nxt)
            ):
                match_l[u] = w
                match_r[w] = u
                return True
        bfs.dist[u] = INF
        return False

    size = 0
    while bfs():
        for u in verts:
            if u not in match_l and dfs(u):
                size += 1
    return size


def _lp_alpha_bound(comp: list[int], sub: int) -> int:
    """alpha(complement induced on sub) <= |sub| - ceil(LP vertex cover)."""
    mm = _hk_double_matching(comp, sub)
    return sub.bit_count() - (mm + 1) // 2


def _color_count_below(adj: tuple[int, ...], mask: int, need: int) -> bool:
    """True when a greedy coloring certifies < `need` colors on the mask."""
    count = 0
    rest = mask
    while rest:
        count += 1
        if count >= need:
            return False
        avail = rest
        while avail:
            low = avail & -avail
            rest ^= low
            avail &= ~(adj[low.bit_length() - 1] | low)
    return True


def _mis_on_complement(
    graph: IntersectionGraph,
    comp: list[int],
    seed_size: int,
    seed: list[int],
    budget: _Budget,
) -> tuple[int, list[int]]:
    """Exact maximum clique as maximum independent set of the complement.

    Suited to sparse complements: branches on the largest complement degree,
    applies degree-0/1 reductions, and prunes with the exact LP vertex-cover
    bound from bipartite-double-cover matchings."""
    best_size = seed_size
    best = list(seed)
    bit_count = int.bit_count

    def rec(sub: int, chosen: list[int]) -> None:
        nonlocal best_size, best
        while True:
            k = bit_count(sub)
            if len(chosen) + k <= best_size:
                return
            # degree-0 and degree-1 vertices always extend some maximum
            reduced = False
            b = sub
            while b:
                low = b & -b
                v = low.bit_length() - 1
                b ^= low
                if not sub & low:
                    continue  # removed earlier in this pass as a neighbor
                d = comp[v] & sub
                if d == 0:
                    chosen.append(v)
                    sub ^= low
                    reduced = True
                elif d & (d - 1) == 0:
                    chosen.append(v)
                    sub &= ~(low | d)
                    reduced = True
            if not reduced:
                break
        if not sub:
            if len(chosen) > best_size:
                best_size = len(chosen)
                best = sorted(chosen)
            return
        if len(chosen) + _lp_alpha_bound(comp, sub) <= best_size:
            return
        budget.spend()
        v = max(_bit_indices(sub), key=lambda u: ((comp[u] & sub).bit_count(), -u))
        vb = 1 << v
        take = list(chosen)
        take.append(v)
        rec(sub & ~(vb | comp[v]), take)
        rec(sub & ~vb, list(chosen))

    rec((1 << graph.order) - 1, [])
    return best_size, best


class _MaxSearch:
    """Scatter/fold search for the maximum clique, seeded with the best star.

    In non_star_mode the fold is disabled and only cliques whose common
    intersection has fewer than t elements are ever recorded, so the search
    explores exactly the cliques contained in no t-star."""

    def __init__(self, graph: IntersectionGraph, limits: Limits) -> None:
        self.adj = graph.adjacency
        self.masks = graph.member_masks
        self.t = graph.t
        self.element_sets = _element_vertex_sets(graph.member_masks)
        self.budget = _Budget(limits.node_budget)
        self.non_star_mode = False
        self.comp: list[int] | None = None  # set when LP pruning is wanted
        star, size = _best_star_in(
            self.element_sets, self.masks, self.t, (1 << graph.order) - 1
        )
        if size:
            self.best_size = size
            self.best = _bit_indices(star)
        else:
            self.best_size = 1 if graph.order else 0
            self.best = [0] if graph.order else []
        self.stop_at: int | None = None  # early exit threshold (strong check)
        self.stopped = False

    def _lp_prunes(self, cand: int, need: int) -> bool:
        """LP bound attempt, only worthwhile when a near-perfect matching of
        the complement could certify the node (|cand| <= ~2*need)."""
        if self.comp is None:
            return False
        pc = cand.bit_count()
        if pc > 2 * need + 2:
            return False
        return _lp_alpha_bound(self.comp, cand) <= need

    # -- classical bounded expansion (no common t-set left on the path) ----

    def _classic(self, cand: int, cur: list[int]) -> None:
        if self._lp_prunes(cand, self.best_size - len(cur)):
            return
        adj = self.adj
        order_v: list[int] = []
        order_c: list[int] = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                order_v.append(v)
                order_c.append(color)
                rest ^= low
                avail &= ~(adj[v] | low)
        cur_len = len(cur)
        for i in range(len(order_v) - 1, -1, -1):
            if self.stopped:
                return
            if cur_len + order_c[i] <= self.best_size:
                return
            v = order_v[i]
            self.budget.spend()
            new_cand = cand & adj[v]
            if new_cand:
                cur.append(v)
                self._classic(new_cand, cur)
                cur.pop()
            elif cur_len + 1 > self.best_size:
                self._record(cur + [v])
            cand ^= 1 << v

    # -- scatter region (the path still has a common t-set) ----------------

    def _scatter(self, cand: int, cur: list[int], common: int) -> None:
        if self.stopped:
            return
        cur_len = len(cur)
        need = self.best_size - cur_len
        if cand.bit_count() <= need:
            return
        if _color_count_below(self.adj, cand, need + 1):
            return
        if self._lp_prunes(cand, need):
            return
        star_members, star_size = _best_star_in(
            self.element_sets, self.masks, self.t, cand, common
        )
        if not self.non_star_mode and cur_len + star_size > self.best_size:
            # exact fold: cur plus that whole star is a clique
            self._record(cur + _bit_indices(star_members))
            if self.stopped:
                return
        scatter = cand & ~star_members
        adj = self.adj
        masks = self.masks
        while scatter:
            if cand.bit_count() + cur_len <= self.best_size:
                return
            low = scatter & -scatter
            v = low.bit_length() - 1
            self.budget.spend()
            new_cand = cand & adj[v]
            new_common = common & masks[v]
            cur.append(v)
            if new_cand:
                if new_common.bit_count() >= self.t:
                    self._scatter(new_cand, cur, new_common)
                elif (
                    cur_len + 1 + new_cand.bit_count() > self.best_size
                    and not _color_count_below(
                        adj, new_cand, self.best_size - cur_len
                    )
                    and not self._lp_prunes(new_cand, self.best_size - cur_len - 1)
                ):
                    self._classic(new_cand, cur)
            elif cur_len + 1 > self.best_size and (
                not self.non_star_mode or new_common.bit_count() < self.t
            ):
                self._record(list(cur))
            cur.pop()
            if self.stopped:
                return
            cand ^= low
            scatter ^= low

    def _record(self, clique: list[int]) -> None:
        self.best_size = len(clique)
        self.best = sorted(clique)
        if self.stop_at is not None and self.best_size >= self.stop_at:
            self.stopped = True

    def run(self, cand: int) -> None:
        if not cand:
            return
        self._scatter(cand, [], -1)


def _balanced_multicover_bound(
    graph: IntersectionGraph, target: int, full: int
) -> int | None:
    """Try to certify max clique <= target via an independent-set multicover.

    Builds maximal independent sets that always start from (and extend
    through) least-covered vertices; with r sets built and every vertex
    covered at least w times, r // w bounds any clique.  Returns the bound
    when it reaches the target, else None.  Sound for every graph; tight on
    sharply transitive instances.
    """
    n = graph.order
    adj = graph.adjacency
    comp = [(~adj[v]) & full & ~(1 << v) for v in range(n)]
    if max((c.bit_count() for c in comp), default=0) > _COVER_DEGREE_CAP:
        return None
    counts = [0] * n
    r = 0
    best_bound: int | None = None
    for _ in range(_COVER_ROUND_FACTOR * n):
        v = min(range(n), key=lambda u: (counts[u], u))
        chosen = 1 << v
        # exhaustive least-covered pair, then greedy least-covered extension
        avail = comp[v]
        best_pair = None
        best_key = None
        for a in _bit_indices(avail):
            both = avail & comp[a]
            b = both & ~((1 << (a + 1)) - 1)
            while b:
                low = b & -b
                u = low.bit_length() - 1
                b ^= low
                key = (counts[a] + counts[u], max(counts[a], counts[u]), a, u)
                if best_key is None or key < best_key:
                    best_key, best_pair = key, (a, u)
        if best_pair is not None:
            chosen |= (1 << best_pair[0]) | (1 << best_pair[1])
            avail &= comp[best_pair[0]] & comp[best_pair[1]]
        elif avail:
            a = min(_bit_indices(avail), key=lambda u: (counts[u], u))
            chosen |= 1 << a
            avail &= comp[a]
        while avail:
            u = min(_bit_indices(avail), key=lambda x: (counts[x], x))
            chosen |= 1 << u
            avail &= comp[u]
        for u in _bit_indices(chosen):
            counts[u] += 1
        r += 1
        w = min(counts)
        if w:
            bound = r // w
            if best_bound is None or bound < best_bound:
                best_bound = bound
                if best_bound <= target:
                    return best_bound
    return None


def solve_max_clique(
    graph: IntersectionGraph, limits: Limits = DEFAULT_LIMITS
) -> CliqueResult:
    """Exact maximum clique size with a deterministic witness.

    The incumbent starts at the best t-star.  A first bounded search pass
    handles easy instances; if it runs out, a multicover certificate is
    attempted before the full-budget search."""
    n = graph.order
    if n == 0:
        return CliqueResult(0, (), 0)
    full = (1 << n) - 1

    first = _MaxSearch(graph, limits)
    first.budget.limit = min(limits.node_budget, _FIRST_PASS_NODES)
    try:
        first.run(full)
        return CliqueResult(first.best_size, tuple(first.best), first.budget.nodes)
    except NodeBudgetExceeded:
        if first.budget.limit >= limits.node_budget:
            raise

    bound = _balanced_multicover_bound(graph, first.best_size, full)
    if bound is not None and bound <= first.best_size:
        # the incumbent is an achieved clique and the cover proves optimality
        return CliqueResult(first.best_size, tuple(first.best), first.budget.nodes)

    comp = _complement_rows(graph.adjacency, n)
    if max(c.bit_count() for c in comp) <= _MIS_DEGREE_CAP:
        mis_budget = _Budget(limits.node_budget - first.budget.nodes)
        size, witness = _mis_on_complement(
            graph, comp, first.best_size, first.best, mis_budget
        )
        return CliqueResult(
            size, tuple(sorted(witness)), first.budget.nodes + mis_budget.nodes
        )

    second = _MaxSearch(graph, limits)
    second.budget.limit = limits.node_budget - first.budget.nodes
    if first.best_size > second.best_size:
        second.best_size = first.best_size
        second.best = list(first.best)
    second.run(full)
    return CliqueResult(
        second.best_size, tuple(second.best), first.budget.nodes + second.budget.nodes
    )


def find_non_star_maximum(
    graph: IntersectionGraph, size: int, limits: Limits = DEFAULT_LIMITS
) -> tuple[tuple[int, ...] | None, int]:
    """A clique of the given maximum size whose members share no common
    t-subset, or None if none exists (then every maximum is a t-star).

    Runs the scatter search with the incumbent pinned one below `size`:
    star-confined branches can never improve on that, so the first recorded
    improvement is exactly a scattered maximum."""
    n = graph.order
    if n == 0 or size <= 0:
        return None, 0
    search = _MaxSearch(graph, limits)
    search.non_star_mode = True
    comp = _complement_rows(graph.adjacency, n)
    if max(c.bit_count() for c in comp) <= _MIS_DEGREE_CAP:
        search.comp = comp
    search.best_size = size - 1
    search.best = []
    search.stop_at = size
    search.run((1 << n) - 1)
    if search.stopped and search.best_size >= size:
        return tuple(search.best), search.budget.nodes
    return None, search.budget.nodes


# ---------------------------------------------------------------------------
# enumeration of all maximum cliques
# ---------------------------------------------------------------------------


def for_each_maximum(
    graph: IntersectionGraph,
    size: int,
    callback: Callable[[tuple[int, ...]], bool],
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[bool, int]:
    """Visit every clique of exactly `size` in ascending lexicographic order.

    `size` must be the maximum clique size of the graph.  The callback
    returns False to stop early.  Returns (exhausted, nodes)."""
    n = graph.order
    adj = graph.adjacency
    masks = graph.member_masks
    t = graph.t
    budget = _Budget(limits.node_budget)
    bit_count = int.bit_count
    stopped = False

    def rec(cand: int, cur: list[int], need: int, common: int) -> bool:
        nonlocal stopped
        if need == 0:
            if not callback(tuple(cur)):
                stopped = True
                return False
            return True
        pc = bit_count(cand)
        if pc < need:
            return True
        if common:
            folded = common
            b = cand
            while b and folded:
                low = b & -b
                folded &= masks[low.bit_length() - 1]
                b ^= low
            if folded and bit_count(folded) >= t:
                if pc > need:
                    raise EngineError("for_each_maximum needs the exact maximum size")
                if not callback(tuple(cur + _bit_indices(cand))):
                    stopped = True
                    return False
                return True
        if pc > need and _color_count_below(adj, cand, need):
            return True
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            budget.spend()
            cur.append(v)
            if not rec(cand & adj[v], cur, need - 1, common & masks[v]):
                cur.pop()
                return False
            cur.pop()
            if bit_count(cand) < need:
                break
        return True

    if size <= 0 or n == 0:
        return True, 0
    rec((1 << n) - 1, [], size, -1)
    return (not stopped), budget.nodes


# ---------------------------------------------------------------------------
# public family-level operations
# ---------------------------------------------------------------------------


def max_intersecting(
    family: SetFamily,
    t: int = 1,
    mode: str = MODE_ELEMENT,
    limits: Limits = DEFAULT_LIMITS,
) -> CliqueResult:
    """Exact maximum size of a t-intersecting subfamily, with one witness."""
    if not family.members:
        raise ValueError("family must be nonempty")
    graph = build_intersection_graph(family, t, mode, limits)
    return solve_max_clique(graph, limits)


def enumerate_maximum(
    family: SetFamily,
    t: int = 1,
    mode: str = MODE_ELEMENT,
    cap: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> EnumerationResult:
    """All maximum t-intersecting subfamilies (ascending lex), up to `cap`."""
    if not family.members:
        raise ValueError("family must be nonempty")
    cap = limits.enum_cap if cap is None else cap
    graph = build_intersection_graph(family, t, mode, limits)
    top = solve_max_clique(graph, limits)
    out: list[tuple[int, ...]] = []

    def keep(w: tuple[int, ...]) -> bool:
        out.append(w)
        return len(out) < cap

    exhausted, nodes = for_each_maximum(graph, top.size, keep, limits)
    return EnumerationResult(top.size, tuple(out), exhausted, top.node_count + nodes)


# ---------------------------------------------------------------------------
# DIMACS undirected-graph export (1-based), for external cross-checking
# ---------------------------------------------------------------------------


def graph_to_dimacs(graph: IntersectionGraph) -> str:
    lines = []
    edges = []
    for i in range(graph.order):
        row = graph.adjacency[i] >> (i + 1) << (i + 1)
        while row:
            low = row & -row
            edges.append((i + 1, low.bit_length()))
            row ^= low
    lines.append(f"p edge {graph.order} {len(edges)}")
    for a, b in edges:
        lines.append(f"e {a} {b}")
    return "\n".join(lines) + "\n"


def dimacs_to_adjacency(text: str) -> tuple[int, ...]:
    """Parse a DIMACS graph back into bitmask rows (for round-trip checks)."""
    order = None
    rows: list[int] = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise FormatError("bad DIMACS problem line")
            order = int(parts[2])
            rows = [0] * order
        elif parts[0] == "e":
            if order is None:
                raise FormatError("edge line before problem line")
            a, b = int(parts[1]) - 1, int(parts[2]) - 1
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        else:
            raise FormatError(f"unknown DIMACS line {line!r}")
    if order is None:
        raise FormatError("missing DIMACS problem line")
    return tuple(rows)


def write_dimacs(graph: IntersectionGraph, path: str | Path) -> None:
    Path(path).write_text(graph_to_dimacs(graph))
