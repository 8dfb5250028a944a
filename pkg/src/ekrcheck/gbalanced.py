"""Permutation actions on ground sets and the balanced-cover certificate.

Groups are given by generators only; orbits are breadth-first closures and
transitivity means a single orbit.  The balanced certificate for a family
F with cover blocks D_1..D_r and multiplicity j checks:

  (a) the generators act transitively on the ground set;
  (b) F is closed under the induced action and forms one orbit;
  (c) every ground element lies in exactly j cover blocks;
  (d) no more than j of the blocks form an intersecting family
      (exact, via the clique solver on the block subfamily).

When j = 1, (c) already forces (d); the checker still verifies it.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .ambient import KIND_BIPARTITE, KIND_COMPLETE, KIND_UNIFORM, AmbientGraph
from .config import DEFAULT_LIMITS, Limits
from .core import FormatError, GroundSet, SetFamily, Subset, subfamily
from .solver import MODE_ELEMENT, build_intersection_graph, solve_max_clique

Permutation = tuple[int, ...]


@dataclass(frozen=True)
class GroupAction:
    ground: GroundSet
    generators: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("generator list must be nonempty")
        n = self.ground.size
        for g in self.generators:
            if len(g) != n or sorted(g) != list(range(n)):
                raise ValueError("each generator must be a bijection on 0..n-1")


@dataclass(frozen=True)
class BalancedVerdict:
    transitive_on_ground: bool
    family_closed: bool
    transitive_on_family: bool
    cover_multiplicity_ok: bool
    cover_clique_ok: bool
    j: int

    @property
    def passed(self) -> bool:
        return (
            self.transitive_on_ground
            and self.family_closed
            and self.transitive_on_family
            and self.cover_multiplicity_ok
            and self.cover_clique_ok
        )

    def to_json_dict(self) -> dict:
        return {
            "transitive_on_ground": self.transitive_on_ground,
            "family_closed": self.family_closed,
            "transitive_on_family": self.transitive_on_family,
            "cover_multiplicity_ok": self.cover_multiplicity_ok,
            "cover_clique_ok": self.cover_clique_ok,
            "j": self.j,
            "passed": self.passed,
        }


def compose(g: Permutation, h: Permutation) -> Permutation:
    """Permutation applying h first, then g."""
    return tuple(g[h[i]] for i in range(len(g)))


def inverse(g: Permutation) -> Permutation:
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


def orbit(action: GroupAction, seed: int) -> frozenset[int]:
    """Closure of {seed} under all generators, breadth-first."""
    if not 0 <= seed < action.ground.size:
        raise ValueError("seed out of range")
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for x in frontier:
            for g in action.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def act_on_subset(action: GroupAction, g: Permutation, member: Subset) -> Subset:
    """Image {g(a) : a in A} of a member under one permutation."""
    if member.universe_size != action.ground.size:
        raise ValueError("member does not live on this action's ground set")
    return Subset(member.universe_size, act_on_bits(g, member.bits))


def act_on_bits(g: Permutation, bits: int) -> int:
    out = 0
    while bits:
        low = bits & -bits
        out |= 1 << g[low.bit_length() - 1]
        bits ^= low
    return out


def check_transitive_on_family(
    action: GroupAction, family: SetFamily
) -> tuple[bool, bool]:
    """(closed, transitive) for the induced action on the family.

    closed: every generator image of every member is again a member.
    transitive: the orbit of member 0 is the whole family (only meaningful,
    and only computed, when closed; reported False otherwise).
    """
    index: dict[int, int] = {m.bits: i for i, m in enumerate(family.members)}
    images: list[list[int]] = []
    for g in action.generators:
        row = []
        for m in family.members:
            img = act_on_bits(g, m.bits)
            at = index.get(img)
            if at is None:
                return False, False
            row.append(at)
        images.append(row)
    if not family.members:
        return True, False
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for row in images:
                j = row[i]
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return True, len(seen) == len(family.members)


def check_g_balanced(
    action: GroupAction,
    family: SetFamily,
    cover: list[int] | tuple[int, ...],
    j: int,
    t: int = 1,
    mode: str = MODE_ELEMENT,
    limits: Limits = DEFAULT_LIMITS,
) -> BalancedVerdict:
    """Verify the full balanced-cover certificate for the family."""
    if j < 1:
        raise ValueError("j must be >= 1")
    cover = list(cover)
    if len(set(cover)) != len(cover):
        raise ValueError("cover indices must be distinct")
    for i in cover:
        if not 0 <= i < len(family.members):
            raise ValueError(f"cover index {i} out of range")
    if action.ground != family.ground:
        raise ValueError("action and family must share a ground set")

    ground_transitive = len(orbit(action, 0)) == action.ground.size
    closed, family_transitive = check_transitive_on_family(action, family)

    counts = [0] * family.ground.size
    for i in cover:
        b = family.members[i].bits
        while b:
            low = b & -b
            counts[low.bit_length() - 1] += 1
            b ^= low
    multiplicity_ok = all(c == j for c in counts)

    blocks = subfamily(family, cover)
    graph = build_intersection_graph(blocks, t, mode, limits)
    clique_ok = solve_max_clique(graph, limits).size <= j

    return BalancedVerdict(
        transitive_on_ground=ground_transitive,
        family_closed=closed,
        transitive_on_family=family_transitive,
        cover_multiplicity_ok=multiplicity_ok,
        cover_clique_ok=clique_ok,
        j=j,
    )


# ---------------------------------------------------------------------------
# standard generator kits, lifted from vertex permutations to ground indices
# ---------------------------------------------------------------------------


def _lift_vertex_permutation(ambient: AmbientGraph, vperm: Permutation) -> Permutation:
    out = [0] * ambient.ground.size
    for idx, verts in enumerate(ambient.edges):
        out[idx] = ambient.index_of(tuple(sorted(vperm[v] for v in verts)))
    return tuple(out)


def _vertex_generators(n: int) -> list[Permutation]:
    """Adjacent transposition plus n-cycle: generators of the full symmetric
    group on n points (just the transposition when n = 2)."""
    swap = tuple([1, 0] + list(range(2, n)))
    if n == 2:
        return [swap]
    cycle = tuple(list(range(1, n)) + [0])
    return [swap, cycle]


def symmetric_vertex_kit(ambient: AmbientGraph) -> GroupAction:
    """Full vertex symmetric group of K_n or K_n^(r), lifted to the ground."""
    if ambient.kind not in (KIND_COMPLETE, KIND_UNIFORM):
        raise ValueError("vertex kit needs a complete or complete-uniform ambient")
    n = ambient.params[0]
    gens = [_lift_vertex_permutation(ambient, g) for g in _vertex_generators(n)]
    return GroupAction(ambient.ground, tuple(gens))


def bipartite_kit(ambient: AmbientGraph, include_swap: bool = False) -> GroupAction:
    """S_a x S_b acting on K_{a,b} edges; optionally the part swap (a = b)."""
    if ambient.kind != KIND_BIPARTITE:
        raise ValueError("bipartite kit needs a complete-bipartite ambient")
    a, b = ambient.params
    gens: list[Permutation] = []
    for vg in _vertex_generators(a):
        full = tuple(list(vg) + list(range(a, a + b)))
        gens.append(_lift_vertex_permutation(ambient, full))
    for vg in _vertex_generators(b):
        full = tuple(list(range(a)) + [a + x for x in vg])
        gens.append(_lift_vertex_permutation(ambient, full))
    if include_swap:
        if a != b:
            raise ValueError("part swap needs equal sides")
        swap = tuple([a + i for i in range(a)] + list(range(a)))
        gens.append(_lift_vertex_permutation(ambient, swap))
    return GroupAction(ambient.ground, tuple(gens))


KIT_NAMES = ("sym-vertices", "sym-bipartite", "sym-bipartite-swap", "sym-hyper")


def kit_by_name(name: str, ambient: AmbientGraph) -> GroupAction:
    if name in ("sym-vertices", "sym-hyper"):
        return symmetric_vertex_kit(ambient)
    if name == "sym-bipartite":
        return bipartite_kit(ambient, include_swap=False)
    if name == "sym-bipartite-swap":
        return bipartite_kit(ambient, include_swap=True)
    raise ValueError(f"unknown generator kit {name!r}")


# ---------------------------------------------------------------------------
# .gen text format: one permutation per line, one-line cycle notation on
# element indices; "()" is the identity.
# ---------------------------------------------------------------------------


def permutation_to_cycles(g: Permutation) -> str:
    seen = [False] * len(g)
    parts = []
    for start in range(len(g)):
        if seen[start] or g[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        x = g[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = g[x]
        parts.append("(" + " ".join(str(v) for v in cyc) + ")")
    return "".join(parts) if parts else "()"


def permutation_from_cycles(text: str, n: int) -> Permutation:
    perm = list(range(n))
    body = text.strip()
    if body == "()":
        return tuple(perm)
    if not body.startswith("(") or not body.endswith(")"):
        raise FormatError(f"bad cycle notation {text!r}")
    moved: set[int] = set()
    for chunk in body[1:-1].split(")("):
        cyc = [int(tok) for tok in chunk.split()]
        if len(cyc) < 2 or len(set(cyc)) != len(cyc):
            raise FormatError(f"bad cycle {chunk!r}")
        for v in cyc:
            if not 0 <= v < n or v in moved:
                raise FormatError(f"bad cycle {chunk!r}")
            moved.add(v)
        for i, v in enumerate(cyc):
            perm[v] = cyc[(i + 1) % len(cyc)]
    return tuple(perm)


def action_to_text(action: GroupAction) -> str:
    return "\n".join(permutation_to_cycles(g) for g in action.generators) + "\n"


def action_from_text(text: str, ground: GroundSet) -> GroupAction:
    gens = []
    for line in text.splitlines():
        if line.strip():
            gens.append(permutation_from_cycles(line, ground.size))
    return GroupAction(ground, tuple(gens))


def write_gen(action: GroupAction, path: str | Path) -> None:
    Path(path).write_text(action_to_text(action))


def read_gen(path: str | Path, ground: GroundSet) -> GroupAction:
    return action_from_text(Path(path).read_text(), ground)
