"""Ground sets, bit-vector subsets, and canonically ordered set families.

A subset of a fixed n-element universe is stored as an arbitrary-precision
integer bitmask (bit i set = element i present).  Families keep their
members deduplicated and sorted in one fixed total order, so equal families
compare equal and every derived artifact (files, witnesses, reports) is
bit-for-bit reproducible.

All values are immutable after construction and every operation is a pure
function; everything here is safe to use from concurrent threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

MAX_UNIVERSE = 4096


class EngineError(Exception):
    """Base class for engine failures."""


class UniverseMismatch(EngineError):
    pass


class FamilyTooLarge(EngineError):
    pass


class NodeBudgetExceeded(EngineError):
    pass


class FormatError(EngineError):
    """A text artifact (.fam/.pat/.rel/.gen/DIMACS) could not be parsed."""


@dataclass(frozen=True)
class GroundSet:
    """Finite universe with one printable, whitespace-free label per element."""

    size: int
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("ground set needs at least one element")
        if self.size > MAX_UNIVERSE:
            raise ValueError(f"universe sizes above {MAX_UNIVERSE} are unsupported")
        if len(self.labels) != self.size:
            raise ValueError("label list length must equal size")
        for lab in self.labels:
            if not lab or any(ch.isspace() for ch in lab):
                raise ValueError(f"label {lab!r} is empty or contains whitespace")
        if len(set(self.labels)) != self.size:
            raise ValueError("labels must be pairwise distinct")

    @staticmethod
    def points(n: int) -> "GroundSet":
        """Universe of n abstract points labeled '0'..'n-1'."""
        return GroundSet(n, tuple(str(i) for i in range(n)))


@dataclass(frozen=True)
class Subset:
    """A member set, held as a bitmask over a fixed-size universe."""

    universe_size: int
    bits: int

    def __post_init__(self) -> None:
        if not 0 < self.universe_size <= MAX_UNIVERSE:
            raise ValueError("universe_size out of range")
        if self.bits < 0 or self.bits >> self.universe_size:
            raise ValueError("all set bits must lie below universe_size")

    @staticmethod
    def from_indices(universe_size: int, indices: Iterable[int]) -> "Subset":
        bits = 0
        for i in indices:
            if not 0 <= i < universe_size:
                raise ValueError(f"element index {i} outside universe")
            bits |= 1 << i
        return Subset(universe_size, bits)

    def indices(self) -> tuple[int, ...]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return tuple(out)

    def labels(self, ground: GroundSet) -> tuple[str, ...]:
        return tuple(ground.labels[i] for i in self.indices())

    def contains(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()


def canonical_key(bits: int, universe_size: int) -> int:
    """Sort key realizing the canonical member order.

    Sorting bitmasks by this key in DESCENDING order equals ascending
    lexicographic order of the sorted element-index tuples: the member
    containing the smaller element at the first disagreement comes first.
    """
    r = 0
    while bits:
        low = bits & -bits
        r |= 1 << (universe_size - 1 - (low.bit_length() - 1))
        bits ^= low
    return r


def canonical_bit_order(bit_list: Iterable[int], universe_size: int) -> list[int]:
    """Deduplicate raw bitmasks and return them canonically sorted."""
    distinct = set(bit_list)
    return sorted(distinct, key=lambda b: canonical_key(b, universe_size), reverse=True)


@dataclass(frozen=True)
class SetFamily:
    """Deduplicated, canonically sorted family of subsets of one ground set.

    `uniform_size` is set exactly when all members share one cardinality.
    `ambient` optionally records the structure (complete graph etc.) whose
    edge set the ground represents; it never takes part in equality.
    """

    ground: GroundSet
    members: tuple[Subset, ...]
    uniform_size: int | None = None
    ambient: object | None = field(default=None, compare=False, repr=False)
    _index: dict | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = self.ground.size
        prev_key = None
        seen = set()
        for m in self.members:
            if m.universe_size != n:
                raise UniverseMismatch("universe mismatch")
            if m.bits in seen:
                raise ValueError("members must be pairwise distinct")
            seen.add(m.bits)
            key = canonical_key(m.bits, n)
            if prev_key is not None and key >= prev_key:
                raise ValueError("members are not in canonical order")
            prev_key = key
            if self.uniform_size is not None and len(m) != self.uniform_size:
                raise ValueError("uniform_size does not match a member cardinality")

    def __len__(self) -> int:
        return len(self.members)

    def member_bits(self) -> list[int]:
        return [m.bits for m in self.members]

    def index_of(self, member: Subset | int) -> int:
        """Index of a member given as Subset or raw bitmask; KeyError if absent."""
        bits = member.bits if isinstance(member, Subset) else member
        if self._index is None:
            table = {m.bits: i for i, m in enumerate(self.members)}
            object.__setattr__(self, "_index", table)
        return self._index[bits]

    def contains_bits(self, bits: int) -> bool:
        try:
            self.index_of(bits)
            return True
        except KeyError:
            return False


def canonicalize(
    members: Iterable[Subset],
    ground: GroundSet,
    ambient: object | None = None,
) -> SetFamily:
    """Build a family: deduplicate, sort canonically, infer uniform_size."""
    bit_list = []
    for m in members:
        if m.universe_size != ground.size:
            raise UniverseMismatch("universe mismatch")
        bit_list.append(m.bits)
    ordered = canonical_bit_order(bit_list, ground.size)
    subs = tuple(Subset(ground.size, b) for b in ordered)
    sizes = {len(s) for s in subs}
    uniform = sizes.pop() if len(sizes) == 1 else None
    return SetFamily(ground, subs, uniform, ambient)


def family_from_bits(
    bit_list: Iterable[int], ground: GroundSet, ambient: object | None = None
) -> SetFamily:
    """Same as canonicalize but starting from raw bitmasks."""
    ordered = canonical_bit_order(bit_list, ground.size)
    subs = tuple(Subset(ground.size, b) for b in ordered)
    sizes = {len(s) for s in subs}
    uniform = sizes.pop() if len(sizes) == 1 else None
    return SetFamily(ground, subs, uniform, ambient)


def intersection_size(a: Subset, b: Subset) -> int:
    """|A ∩ B| for two subsets of the same universe."""
    if a.universe_size != b.universe_size:
        raise UniverseMismatch("universe mismatch")
    return (a.bits & b.bits).bit_count()


def star(family: SetFamily, x: int) -> SetFamily:
    """Subfamily of all members containing element x, order preserved."""
    if not 0 <= x < family.ground.size:
        raise ValueError(f"element index {x} outside ground set")
    chosen = tuple(m for m in family.members if m.bits >> x & 1)
    return SetFamily(family.ground, chosen, family.uniform_size, family.ambient)


def subfamily(family: SetFamily, indices: Iterable[int]) -> SetFamily:
    """Family induced by a collection of member indices (canonical order kept)."""
    picked = sorted(set(indices))
    if picked and not 0 <= picked[0] <= picked[-1] < len(family.members):
        raise ValueError("member index out of range")
    subs = tuple(family.members[i] for i in picked)
    sizes = {len(s) for s in subs}
    uniform = sizes.pop() if len(sizes) == 1 else None
    return SetFamily(family.ground, subs, uniform, family.ambient)


# ---------------------------------------------------------------------------
# .fam text format
#
#   line 1: "n m k"  (ground size, member count, uniform size or "-")
#   line 2: n whitespace-separated labels
#   then m lines, each the ascending element indices of one member
#   (a blank line encodes the empty set).  Round-trip is bit-exact.
# ---------------------------------------------------------------------------


def family_to_text(family: SetFamily) -> str:
    head = f"{family.ground.size} {len(family.members)} " + (
        "-" if family.uniform_size is None else str(family.uniform_size)
    )
    lines = [head, " ".join(family.ground.labels)]
    for m in family.members:
        lines.append(" ".join(str(i) for i in m.indices()))
    return "\n".join(lines) + "\n"


def family_from_text(text: str) -> SetFamily:
    lines = text.splitlines()
    if len(lines) < 2:
        raise FormatError("family file needs a header and a label line")
    head = lines[0].split()
    if len(head) != 3:
        raise FormatError("family header must be 'n m k|-'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError("family header must be 'n m k|-'") from exc
    claimed = None if head[2] == "-" else int(head[2])
    labels = tuple(lines[1].split())
    if len(labels) != n:
        raise FormatError(f"expected {n} labels, found {len(labels)}")
    if len(lines) < 2 + m:
        raise FormatError(f"expected {m} member lines")
    ground = GroundSet(n, labels)
    members = []
    for row in lines[2 : 2 + m]:
        members.append(Subset.from_indices(n, (int(tok) for tok in row.split())))
    fam = canonicalize(members, ground)
    if len(fam.members) != m:
        raise FormatError("family file contains duplicate members")
    if fam.uniform_size != claimed:
        raise FormatError(
            f"header claims uniform size {head[2]} but members say {fam.uniform_size}"
        )
    return fam


def write_fam(family: SetFamily, path: str | Path) -> None:
    Path(path).write_text(family_to_text(family))


def read_fam(path: str | Path) -> SetFamily:
    return family_from_text(Path(path).read_text())
