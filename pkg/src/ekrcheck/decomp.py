"""Edge decompositions: explicit constructions and an exact-cover search.

The constructions (zig-zag Hamiltonian decomposition of odd K_n, the
round-robin one-factorization of even K_n, shifted perfect matchings of
K_{n,n}, and consecutive unions of a one-factorization) are verified
before they are returned - the verifier, not the construction, is
normative.  The generic search decomposes an ambient's ground set into
copies of a pattern by exact-cover backtracking and can also certify,
by exhaustion, that no decomposition exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .ambient import KIND_BIPARTITE, KIND_COMPLETE, AmbientGraph, complete, complete_bipartite
from .config import DEFAULT_LIMITS, Limits
from .core import EngineError, FormatError, GroundSet, NodeBudgetExceeded, Subset, family_to_text, family_from_text, family_from_bits
from .families import PatternGraph, h_copies


class DecompositionError(EngineError):
    pass


@dataclass(frozen=True)
class DecompositionResult:
    """Cover of an ambient's ground set; every element lies in exactly
    `multiplicity` blocks once `verified` is set."""

    ambient: AmbientGraph
    blocks: tuple[Subset, ...]
    multiplicity: int
    verified: bool


def verify_decomposition(
    ground: GroundSet, blocks: list[Subset] | tuple[Subset, ...], j: int
) -> tuple[bool, int | None]:
    """Exact multiplicity check; returns (ok, first violating element)."""
    counts = [0] * ground.size
    for b in blocks:
        if b.universe_size != ground.size:
            raise ValueError("block does not live on the given ground set")
        bits = b.bits
        while bits:
            low = bits & -bits
            counts[low.bit_length() - 1] += 1
            bits ^= low
    for x, c in enumerate(counts):
        if c != j:
            return False, x
    return True, None


def _trace_hamiltonian(ambient: AmbientGraph, bits: int) -> bool:
    """True iff the edge set is one cycle through every ambient vertex."""
    adj: dict[int, list[int]] = {}
    edge_count = 0
    b = bits
    while b:
        low = b & -b
        u, v = ambient.edges[low.bit_length() - 1]
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
        edge_count += 1
        b ^= low
    n = ambient.vertex_count
    if edge_count != n or len(adj) != n:
        return False
    if any(len(nb) != 2 for nb in adj.values()):
        return False
    prev, cur = None, 0
    for _ in range(n):
        a, c = adj[cur]
        nxt = c if a == prev else a
        prev, cur = cur, nxt
    return cur == 0


def walecki(n: int, ambient: AmbientGraph | None = None) -> DecompositionResult:
    """Hamiltonian decomposition of odd K_n: (n-1)/2 cycles partitioning E(K_n).

    Built by the standard zig-zag path on Z_{n-1} plus a hub vertex, rotated;
    every block is walk-traced and the partition is verified before return.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("walecki needs odd n >= 3")
    amb = ambient if ambient is not None else complete(n)
    if amb.kind != KIND_COMPLETE or amb.params[0] != n:
        raise ValueError("ambient must be the complete graph K_n")
    m = n - 1  # rotation modulus; vertex n-1 is the hub
    blocks = []
    for i in range((n - 1) // 2):
        seq = [n - 1, i % m]
        sign = 1
        for step in range(1, m):
            offset = (step + 1) // 2 * sign
            seq.append((i + offset) % m)
            sign = -sign
        bits = 0
        for a, b in zip(seq, seq[1:] + [seq[0]]):
            bits |= 1 << amb.index_of((a, b))
        if not _trace_hamiltonian(amb, bits):
            raise DecompositionError(f"constructed block {i} is not a Hamiltonian cycle")
        blocks.append(Subset(amb.ground.size, bits))
    ok, bad = verify_decomposition(amb.ground, blocks, 1)
    if not ok:
        raise DecompositionError(f"blocks do not partition the edges at element {bad}")
    return DecompositionResult(amb, tuple(blocks), 1, True)


def circle_factorization(n: int, ambient: AmbientGraph | None = None) -> DecompositionResult:
    """Round-robin one-factorization of even K_n: n-1 perfect matchings."""
    if n < 2 or n % 2:
        raise ValueError("circle_factorization needs even n >= 2")
    amb = ambient if ambient is not None else complete(n)
    if amb.kind != KIND_COMPLETE or amb.params[0] != n:
        raise ValueError("ambient must be the complete graph K_n")
    m = n - 1
    blocks = []
    for r in range(m):
        bits = 1 << amb.index_of((n - 1, r))
        for i in range(1, n // 2):
            a = (r + i) % m
            b = (r - i) % m
            bits |= 1 << amb.index_of((a, b))
        blocks.append(Subset(amb.ground.size, bits))
    ok, bad = verify_decomposition(amb.ground, blocks, 1)
    if not ok:
        raise DecompositionError(f"blocks do not partition the edges at element {bad}")
    for idx, blk in enumerate(blocks):
        if not _is_perfect_matching(amb, blk.bits):
            raise DecompositionError(f"round {idx} is not a perfect matching")
    return DecompositionResult(amb, tuple(blocks), 1, True)


def _is_perfect_matching(ambient: AmbientGraph, bits: int) -> bool:
    seen: set[int] = set()
    count = 0
    while bits:
        low = bits & -bits
        u, v = ambient.edges[low.bit_length() - 1]
        if u in seen or v in seen:
            return False
        seen.update((u, v))
        count += 1
        bits ^= low
    return count * 2 == ambient.vertex_count


def bipartite_shift_matchings(
    n: int, ambient: AmbientGraph | None = None
) -> DecompositionResult:
    """The n shifted matchings {u_j v_{j+i mod n}} partitioning E(K_{n,n})."""
    if n < 1:
        raise ValueError("bipartite_shift_matchings needs n >= 1")
    amb = ambient if ambient is not None else complete_bipartite(n, n)
    if amb.kind != KIND_BIPARTITE or amb.params != (n, n):
        raise ValueError("ambient must be K_{n,n}")
    blocks = []
    for i in range(n):
        bits = 0
        for jj in range(n):
            bits |= 1 << (jj * n + (jj + i) % n)
        blocks.append(Subset(amb.ground.size, bits))
    ok, bad = verify_decomposition(amb.ground, blocks, 1)
    if not ok:
        raise DecompositionError(f"blocks do not partition the edges at element {bad}")
    return DecompositionResult(amb, tuple(blocks), 1, True)


def consecutive_unions(
    factors: DecompositionResult, wrap: bool = True
) -> DecompositionResult:
    """Blocks N_i + N_{i+1} from a one-factorization (cyclically when wrap).

    Every union is verified to be one Hamiltonian cycle; a union splitting
    into two or more cycles, or duplicate blocks, fails loudly naming the
    offending factor pair.
    """
    if factors.multiplicity != 1 or not factors.verified:
        raise ValueError("factors must be a verified partition (j = 1)")
    amb = factors.ambient
    for idx, blk in enumerate(factors.blocks):
        if not _is_perfect_matching(amb, blk.bits):
            raise ValueError(f"factor {idx} is not a perfect matching")
    count = len(factors.blocks)
    upto = count if wrap else count - 1
    blocks = []
    seen_bits = set()
    for i in range(upto):
        a = factors.blocks[i].bits
        b = factors.blocks[(i + 1) % count].bits
        union = a | b
        if not _trace_hamiltonian(amb, union):
            raise DecompositionError(
                f"union of factors {i} and {(i + 1) % count} is not a single "
                f"Hamiltonian cycle"
            )
        if union in seen_bits:
            raise DecompositionError(
                f"union of factors {i} and {(i + 1) % count} duplicates an "
                f"earlier block"
            )
        seen_bits.add(union)
        blocks.append(Subset(amb.ground.size, union))
    j = 2 if wrap else None
    if wrap:
        ok, bad = verify_decomposition(amb.ground, blocks, 2)
        if not ok:
            raise DecompositionError(f"multiplicity is not 2 at element {bad}")
        return DecompositionResult(amb, tuple(blocks), 2, True)
    return DecompositionResult(amb, tuple(blocks), 0, False)


# ---------------------------------------------------------------------------
# generic exact-cover decomposition search
# ---------------------------------------------------------------------------


def exact_cover_decomposition(
    ambient: AmbientGraph,
    pattern: PatternGraph,
    limits: Limits = DEFAULT_LIMITS,
) -> DecompositionResult | None:
    """Partition the ambient ground set into pattern copies, if possible.

    Returns a verified partition, or None when the backtracking search
    exhausts all branches (a proof that no decomposition exists).  Raises
    DecompositionError when the edge count rules it out up front, and
    NodeBudgetExceeded when the search budget runs dry.
    """
    block_size = len(pattern.edges)
    if block_size == 0 or ambient.ground.size % block_size:
        raise DecompositionError(
            f"necessary condition fails: {block_size} does not divide "
            f"{ambient.ground.size}"
        )
    rows = [m.bits for m in h_copies(ambient, pattern, limits).members]
    n = ambient.ground.size
    rows_through: list[list[int]] = [[] for _ in range(n)]
    for ri, bits in enumerate(rows):
        b = bits
        while b:
            low = b & -b
            rows_through[low.bit_length() - 1].append(ri)
            b ^= low

    budget = [limits.cover_budget]
    chosen: list[int] = []

    def search(uncovered: int) -> bool:
        if uncovered == 0:
            return True
        # deterministic MRV: scan uncovered columns, pick the fewest-options
        # one (ties by element index); options must avoid covered elements
        best_col = -1
        best_rows: list[int] = []
        b = uncovered
        covered = ~uncovered
        while b:
            low = b & -b
            col = low.bit_length() - 1
            options = [ri for ri in rows_through[col] if rows[ri] & covered == 0]
            if best_col < 0 or len(options) < len(best_rows):
                best_col, best_rows = col, options
                if not options:
                    return False
            b ^= low
        for ri in best_rows:
            budget[0] -= 1
            if budget[0] < 0:
                raise NodeBudgetExceeded("budget exhausted")
            chosen.append(ri)
            if search(uncovered & ~rows[ri]):
                return True
            chosen.pop()
        return False

    full = (1 << n) - 1
    if not search(full):
        return None
    blocks = tuple(Subset(n, rows[ri]) for ri in chosen)
    ok, bad = verify_decomposition(ambient.ground, blocks, 1)
    if not ok:
        raise DecompositionError(f"internal error: cover fails at element {bad}")
    return DecompositionResult(ambient, blocks, 1, True)


# ---------------------------------------------------------------------------
# export: a "j=<multiplicity>" header line followed by the .fam body
# ---------------------------------------------------------------------------


def decomposition_to_text(result: DecompositionResult) -> str:
    fam = family_from_bits(
        [b.bits for b in result.blocks], result.ambient.ground, result.ambient
    )
    return f"j={result.multiplicity}\n" + family_to_text(fam)


def write_decomposition(result: DecompositionResult, path: str | Path) -> None:
    Path(path).write_text(decomposition_to_text(result))


def read_decomposition_text(text: str) -> tuple[int, "SetFamily"]:
    head, _, rest = text.partition("\n")
    if not head.startswith("j="):
        raise FormatError("decomposition file must start with 'j=<multiplicity>'")
    return int(head[2:]), family_from_text(rest)
