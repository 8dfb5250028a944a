"""Ambient complete structures whose edge sets serve as ground sets.

Three kinds are supported:

    complete(n)             edges of K_n, index = lexicographic rank of (u,v), u<v
    complete_bipartite(a,b) edges of K_{a,b}, index of (u_i, v_j) = i*b + j
    complete_uniform(n,r)   hyperedges of K_n^(r), index = colexicographic rank

Vertices are numbered globally: for the bipartite kind the left side is
0..a-1 and the right side a..a+b-1.  Indexing is a bijection and is stable
as n grows (colex ranks extend prefixes), so regression data stays valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .core import FormatError, GroundSet, Subset

KIND_COMPLETE = "complete"
KIND_BIPARTITE = "complete_bipartite"
KIND_UNIFORM = "complete_uniform"


@dataclass(frozen=True)
class AmbientGraph:
    kind: str
    params: tuple[int, ...]
    ground: GroundSet
    vertex_count: int
    edges: tuple[tuple[int, ...], ...]  # ground index -> sorted global vertex tuple
    _edge_index: dict | None = field(default=None, compare=False, repr=False)

    def edge_of(self, index: int) -> tuple[int, ...]:
        return self.edges[index]

    def index_of(self, vertices: tuple[int, ...]) -> int:
        if self._edge_index is None:
            object.__setattr__(
                self, "_edge_index", {e: i for i, e in enumerate(self.edges)}
            )
        return self._edge_index[tuple(sorted(vertices))]

    @property
    def left_size(self) -> int:
        if self.kind != KIND_BIPARTITE:
            raise ValueError("left_size only applies to bipartite ambients")
        return self.params[0]

    def descriptor(self) -> str:
        if self.kind == KIND_COMPLETE:
            return f"Kn:{self.params[0]}"
        if self.kind == KIND_BIPARTITE:
            return f"Knn:{self.params[0]},{self.params[1]}"
        return f"Kr:{self.params[0]},{self.params[1]}"


def complete(n: int) -> AmbientGraph:
    """K_n with edges ranked lexicographically; index 0 is the pair (0,1)."""
    if n < 2:
        raise ValueError("complete graph needs n >= 2 for a nonempty edge set")
    pairs = tuple((u, v) for u in range(n) for v in range(u + 1, n))
    labels = tuple(f"{u}-{v}" for u, v in pairs)
    ground = GroundSet(len(pairs), labels)
    return AmbientGraph(KIND_COMPLETE, (n,), ground, n, pairs)


def complete_bipartite(a: int, b: int) -> AmbientGraph:
    """K_{a,b}; edge (u_i, v_j) has index i*b + j; right vertices offset by a."""
    if a < 1 or b < 1:
        raise ValueError("bipartite sides must be >= 1")
    pairs = tuple((i, a + j) for i in range(a) for j in range(b))
    labels = tuple(f"u{i}-v{j}" for i in range(a) for j in range(b))
    ground = GroundSet(a * b, labels)
    return AmbientGraph(KIND_BIPARTITE, (a, b), ground, a + b, pairs)


def colex_rank(vertices: tuple[int, ...]) -> int:
    """Colexicographic rank of a sorted vertex tuple."""
    return sum(comb(v, i + 1) for i, v in enumerate(vertices))


def complete_uniform(n: int, r: int) -> AmbientGraph:
    """K_n^(r) with hyperedges ranked colexicographically."""
    if not 1 <= r <= n:
        raise ValueError("complete_uniform needs 1 <= r <= n")
    size = comb(n, r)
    edges: list[tuple[int, ...]] = [()] * size
    for combo in combinations(range(n), r):
        edges[colex_rank(combo)] = combo
    labels = tuple("{" + ",".join(str(v) for v in e) + "}" for e in edges)
    ground = GroundSet(size, labels)
    return AmbientGraph(KIND_UNIFORM, (n, r), ground, n, tuple(edges))


def build_ambient(kind: str, *params: int) -> AmbientGraph:
    if kind == KIND_COMPLETE:
        return complete(*params)
    if kind == KIND_BIPARTITE:
        return complete_bipartite(*params)
    if kind == KIND_UNIFORM:
        return complete_uniform(*params)
    raise ValueError(f"unknown ambient kind {kind!r}")


def parse_ambient(descriptor: str) -> AmbientGraph:
    """Parse the CLI grammar: "Kn:9", "Knn:4,4", "Kr:7,3"."""
    try:
        head, rest = descriptor.split(":", 1)
        nums = tuple(int(tok) for tok in rest.split(","))
    except ValueError as exc:
        raise FormatError(f"bad ambient descriptor {descriptor!r}") from exc
    if head == "Kn" and len(nums) == 1:
        return complete(nums[0])
    if head == "Knn" and len(nums) == 2:
        return complete_bipartite(*nums)
    if head == "Kr" and len(nums) == 2:
        return complete_uniform(*nums)
    raise FormatError(f"bad ambient descriptor {descriptor!r}")


def split_ambient_descriptor(text: str) -> tuple[str, str]:
    """Split "Kn:5,2" into ("Kn:5", "2") by consuming the ambient's arity."""
    head, _, rest = text.partition(":")
    arity = {"Kn": 1, "Knn": 2, "Kr": 2}.get(head)
    if arity is None:
        raise FormatError(f"bad ambient descriptor in {text!r}")
    parts = rest.split(",")
    if len(parts) < arity:
        raise FormatError(f"bad ambient descriptor in {text!r}")
    amb = head + ":" + ",".join(parts[:arity])
    remainder = ",".join(parts[arity:])
    return amb, remainder


def vertex_set_of(ambient: AmbientGraph, member: Subset) -> frozenset[int]:
    """Union of the endpoint/vertex sets of a member's edges."""
    if member.universe_size != ambient.ground.size:
        raise ValueError("member does not live on this ambient's ground set")
    verts: set[int] = set()
    b = member.bits
    while b:
        low = b & -b
        verts.update(ambient.edges[low.bit_length() - 1])
        b ^= low
    return frozenset(verts)


def vertex_mask_of(ambient: AmbientGraph, bits: int) -> int:
    """Same as vertex_set_of but as a bitmask over global vertex ids."""
    mask = 0
    while bits:
        low = bits & -bits
        for v in ambient.edges[low.bit_length() - 1]:
            mask |= 1 << v
        bits ^= low
    return mask
