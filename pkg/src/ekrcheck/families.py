"""Generators for the structured set families the engine studies.

Every generator returns a canonical SetFamily (already deduplicated and
sorted); edge families carry their AmbientGraph so vertex-level checks and
symmetry kits can find it later.  Copy counting always identifies a
subgraph with its edge set: two embeddings with the same image are one
member.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb, factorial
from pathlib import Path

from .ambient import (
    KIND_BIPARTITE,
    KIND_COMPLETE,
    KIND_UNIFORM,
    AmbientGraph,
    complete,
    complete_bipartite,
)
from .config import DEFAULT_LIMITS, Limits
from .core import (
    FamilyTooLarge,
    FormatError,
    GroundSet,
    NodeBudgetExceeded,
    SetFamily,
    family_from_bits,
)


@dataclass(frozen=True)
class PatternGraph:
    """A fixed small graph or r-uniform hypergraph to take copies of."""

    vertex_count: int
    edges: tuple[tuple[int, ...], ...]
    uniformity: int = 2

    def __post_init__(self) -> None:
        if self.uniformity < 2:
            raise ValueError("pattern uniformity must be at least 2")
        seen = set()
        for e in self.edges:
            if len(e) != self.uniformity or len(set(e)) != self.uniformity:
                raise ValueError(f"edge {e} must have {self.uniformity} distinct vertices")
            if tuple(sorted(e)) != e:
                raise ValueError(f"edge {e} must be sorted")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            if e[-1] >= self.vertex_count:
                raise ValueError(f"edge {e} mentions a vertex >= vertex_count")

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


def cycle_pattern(k: int) -> PatternGraph:
    """The k-cycle C_k as a 2-uniform pattern."""
    if k < 3:
        raise ValueError("cycles need k >= 3")
    edges = sorted(tuple(sorted((i, (i + 1) % k))) for i in range(k))
    return PatternGraph(k, tuple(edges), 2)


def matching_pattern(k: int) -> PatternGraph:
    """k vertex-disjoint edges (the graph T_k)."""
    if k < 1:
        raise ValueError("matchings need k >= 1")
    return PatternGraph(2 * k, tuple((2 * i, 2 * i + 1) for i in range(k)), 2)


def clique_pattern(k: int) -> PatternGraph:
    if k < 2:
        raise ValueError("cliques need k >= 2")
    return PatternGraph(k, tuple(combinations(range(k), 2)), 2)


def single_edge_pattern(r: int) -> PatternGraph:
    """One r-uniform hyperedge."""
    return PatternGraph(r, (tuple(range(r)),), r)


# ---------------------------------------------------------------------------
# abstract-point families
# ---------------------------------------------------------------------------


def k_subsets(n: int, k: int, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """All k-subsets of an n-point universe."""
    if not 1 <= k <= n:
        raise ValueError("k_subsets needs 1 <= k <= n")
    _check_cap(comb(n, k), limits)
    ground = GroundSet.points(n)
    bits = [_mask(c) for c in combinations(range(n), k)]
    return family_from_bits(bits, ground)


def separated_k_subsets(n: int, k: int, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """k-subsets of the cyclically ordered [n] with no two cyclically adjacent
    elements (elements i, i+1 mod n never appear together)."""
    if n < 2 * k:
        raise ValueError("separated families need n >= 2k")
    ground = GroundSet.points(n)
    bits = []
    for c in combinations(range(n), k):
        chosen = set(c)
        if k > 1 and any((x + 1) % n in chosen for x in c):
            continue
        bits.append(_mask(c))
    _check_cap(len(bits), limits)
    return family_from_bits(bits, ground)


# ---------------------------------------------------------------------------
# edge families over ambient structures
# ---------------------------------------------------------------------------


def perfect_matchings_bipartite(n: int, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """All n! perfect matchings of K_{n,n}; matching {u_i v_sigma(i)} per sigma."""
    if n < 1:
        raise ValueError("perfect matchings need n >= 1")
    if factorial(n) * n > limits.member_cap:
        raise FamilyTooLarge("family too large")
    amb = complete_bipartite(n, n)
    bits = []
    for sigma in permutations(range(n)):
        b = 0
        for i, j in enumerate(sigma):
            b |= 1 << (i * n + j)
        bits.append(b)
    return family_from_bits(bits, amb.ground, amb)


def k_matchings(ambient: AmbientGraph, k: int, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """All k-edge matchings (k pairwise vertex-disjoint edges) of the ambient."""
    if ambient.kind == KIND_COMPLETE:
        if ambient.params[0] < 2 * k:
            raise ValueError("K_n has no k-matching unless n >= 2k")
    elif ambient.kind == KIND_BIPARTITE:
        a, b = ambient.params
        if a != b:
            raise ValueError("k_matchings expects K_{n,n}")
        if a < k:
            raise ValueError("K_{n,n} has no k-matching unless n >= k")
    else:
        raise ValueError("k_matchings needs a graph ambient")
    if k < 1:
        raise ValueError("k must be >= 1")
    edge_vmasks = [_vmask(e) for e in ambient.edges]
    m = ambient.ground.size
    bits: list[int] = []

    def extend(start: int, used_vmask: int, chosen_bits: int, depth: int) -> None:
        if depth == k:
            bits.append(chosen_bits)
            if len(bits) > limits.member_cap:
                raise FamilyTooLarge("family too large")
            return
        for e in range(start, m):
            if edge_vmasks[e] & used_vmask:
                continue
            extend(e + 1, used_vmask | edge_vmasks[e], chosen_bits | 1 << e, depth + 1)

    extend(0, 0, 0, 0)
    return family_from_bits(bits, ambient.ground, ambient)


def k_cycles_complete(n: int, k: int, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """Edge sets of all k-cycles in K_n; there are C(n,k) * (k-1)!/2 of them."""
    if not 3 <= k <= n:
        raise ValueError("k_cycles_complete needs 3 <= k <= n")
    _check_cap(comb(n, k) * factorial(k - 1) // 2, limits)
    amb = complete(n)
    bits = []
    for verts in combinations(range(n), k):
        anchor = verts[0]
        rest = verts[1:]
        for order in permutations(rest):
            # kill the reflection: walk the smaller second vertex first
            if order[0] > order[-1]:
                continue
            cyc = (anchor,) + order
            b = 0
            for i in range(k):
                b |= 1 << amb.index_of((cyc[i], cyc[(i + 1) % k]))
            bits.append(b)
    return family_from_bits(bits, amb.ground, amb)


def cycles_bipartite(n: int, two_k: int, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """Edge sets of all 2k-cycles in K_{n,n}: C(n,k)^2 * (k-1)!k!/2 members."""
    if two_k % 2 or two_k < 4:
        raise ValueError("bipartite cycles need an even length >= 4")
    k = two_k // 2
    if k > n:
        raise ValueError("a 2k-cycle needs k vertices per side")
    _check_cap(comb(n, k) ** 2 * factorial(k - 1) * factorial(k) // 2, limits)
    amb = complete_bipartite(n, n)
    found = set()
    for left in combinations(range(n), k):
        for right in combinations(range(n), k):
            anchor = left[0]
            for lorder in permutations(left[1:]):
                lefts = (anchor,) + lorder
                for rorder in permutations(right):
                    b = 0
                    for i in range(k):
                        b |= 1 << (lefts[i] * n + rorder[i])
                        b |= 1 << (lefts[(i + 1) % k] * n + rorder[i])
                    found.add(b)
    return family_from_bits(found, amb.ground, amb)


def cliques_complete(n: int, k: int, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """Edge sets of all k-cliques of K_n."""
    if not 2 <= k <= n:
        raise ValueError("cliques_complete needs 2 <= k <= n")
    _check_cap(comb(n, k), limits)
    amb = complete(n)
    bits = []
    for verts in combinations(range(n), k):
        b = 0
        for u, v in combinations(verts, 2):
            b |= 1 << amb.index_of((u, v))
        bits.append(b)
    return family_from_bits(bits, amb.ground, amb)


def bicliques(n: int, k: int, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """Edge sets of all K_{k,k} subgraphs of K_{n,n}."""
    if not 1 <= k <= n:
        raise ValueError("bicliques need 1 <= k <= n")
    _check_cap(comb(n, k) ** 2, limits)
    amb = complete_bipartite(n, n)
    bits = []
    for left in combinations(range(n), k):
        for right in combinations(range(n), k):
            b = 0
            for i in left:
                for j in right:
                    b |= 1 << (i * n + j)
            bits.append(b)
    return family_from_bits(bits, amb.ground, amb)


def h_copies(
    ambient: AmbientGraph, pattern: PatternGraph, limits: Limits = DEFAULT_LIMITS
) -> SetFamily:
    """Distinct edge sets of all copies of the pattern inside the ambient.

    Backtracks over injective vertex maps (connected-first order, so side
    constraints prune early in bipartite ambients) and deduplicates images;
    pattern automorphisms therefore never overcount.
    """
    expected_uniformity = pattern_uniformity_for(ambient)
    if pattern.uniformity != expected_uniformity:
        raise ValueError(
            f"pattern uniformity {pattern.uniformity} does not match ambient "
            f"(needs {expected_uniformity})"
        )
    if any(pattern.degree(v) == 0 for v in range(pattern.vertex_count)):
        raise ValueError("isolated vertices unsupported")
    if pattern.vertex_count > ambient.vertex_count:
        raise ValueError("pattern has more vertices than the ambient")

    maps_bound = 1
    for i in range(pattern.vertex_count):
        maps_bound *= ambient.vertex_count - i
    if maps_bound > limits.node_budget:
        raise NodeBudgetExceeded("budget exhausted")

    order = _connected_vertex_order(pattern)
    pos = {v: i for i, v in enumerate(order)}
    # edges checkable once their last-placed endpoint is assigned
    edges_at = [[] for _ in range(pattern.vertex_count)]
    for e in pattern.edges:
        edges_at[max(pos[v] for v in e)].append(e)

    bipartite = ambient.kind == KIND_BIPARTITE
    a = ambient.params[0] if bipartite else 0
    found: set[int] = set()
    image = [0] * pattern.vertex_count
    used = [False] * ambient.vertex_count

    def place(depth: int) -> None:
        if depth == pattern.vertex_count:
            b = 0
            for e in pattern.edges:
                b |= 1 << ambient.index_of(tuple(image[pos[v]] for v in e))
            found.add(b)
            if len(found) > limits.member_cap:
                raise FamilyTooLarge("family too large")
            return
        for cand in range(ambient.vertex_count):
            if used[cand]:
                continue
            image[depth] = cand
            ok = True
            if bipartite:
                for e in edges_at[depth]:
                    u, w = image[pos[e[0]]], image[pos[e[1]]]
                    if (u < a) == (w < a):
                        ok = False
                        break
            if ok:
                used[cand] = True
                place(depth + 1)
                used[cand] = False

    place(0)
    return family_from_bits(found, ambient.ground, ambient)


def pattern_uniformity_for(ambient: AmbientGraph) -> int:
    return ambient.params[1] if ambient.kind == KIND_UNIFORM else 2


def _connected_vertex_order(pattern: PatternGraph) -> list[int]:
    """Vertex order where each vertex (when possible) touches an earlier one."""
    adj = {v: set() for v in range(pattern.vertex_count)}
    for e in pattern.edges:
        for u in e:
            adj[u].update(w for w in e if w != u)
    order: list[int] = []
    placed = set()
    remaining = set(range(pattern.vertex_count))
    while remaining:
        touching = [v for v in remaining if adj[v] & placed]
        pool = touching or sorted(remaining, key=lambda v: -pattern.degree(v))
        v = max(pool, key=lambda w: (len(adj[w] & placed), pattern.degree(w), -w))
        order.append(v)
        placed.add(v)
        remaining.remove(v)
    return order


def _mask(indices) -> int:
    b = 0
    for i in indices:
        b |= 1 << i
    return b


def _vmask(vertices) -> int:
    b = 0
    for v in vertices:
        b |= 1 << v
    return b


def _check_cap(count: int, limits: Limits) -> None:
    if count > limits.member_cap:
        raise FamilyTooLarge("family too large")


# ---------------------------------------------------------------------------
# .pat text format: "v e r" header, then e lines of r ascending vertex indices
# ---------------------------------------------------------------------------


def pattern_to_text(pattern: PatternGraph) -> str:
    lines = [f"{pattern.vertex_count} {len(pattern.edges)} {pattern.uniformity}"]
    for e in pattern.edges:
        lines.append(" ".join(str(v) for v in e))
    return "\n".join(lines) + "\n"


def pattern_from_text(text: str) -> PatternGraph:
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise FormatError("empty pattern file")
    head = lines[0].split()
    if len(head) != 3:
        raise FormatError("pattern header must be 'v e r'")
    v, e, r = (int(tok) for tok in head)
    if len(lines) < 1 + e:
        raise FormatError(f"expected {e} edge lines")
    edges = []
    for row in lines[1 : 1 + e]:
        edge = tuple(sorted(int(tok) for tok in row.split()))
        edges.append(edge)
    return PatternGraph(v, tuple(sorted(edges)), r)


def write_pat(pattern: PatternGraph, path: str | Path) -> None:
    Path(path).write_text(pattern_to_text(pattern))


def read_pat(path: str | Path) -> PatternGraph:
    return pattern_from_text(Path(path).read_text())
