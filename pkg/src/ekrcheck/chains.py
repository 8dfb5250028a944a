"""Regular-relation families and composition-certificate checking.

A relation family connects a family of small sets (lower, all of size l)
to a family of big sets (upper, all of size m >= l) over one ground set,
through indexed relations that imply containment.  The chain certificate
checks, exhaustively:

  (i)    the upper family is EKR;
  (ii)   every fiber (lower members related to one upper member under one
         relation index, re-grounded on that member) is EKR;
  (iii)  all fibers have one common positive size;
  (iv)   every lower member is related to upper members the same total
         number of times.

The special certificate additionally needs the upper family strongly EKR
and, for every upper member M and every x in M, a second member meeting M
exactly in {x}.  The counting report verifies the exact integer identities
these hypotheses force (star counts m/n * |upper|, fiber maxima
l/m * fiber size, and the closed-form lower star count).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .config import DEFAULT_LIMITS, Limits
from .core import (
    FormatError,
    GroundSet,
    NodeBudgetExceeded,
    SetFamily,
    family_from_bits,
)
from .solver import MODE_ELEMENT, build_intersection_graph, solve_max_clique
from .verify import STATUS_EKR, STATUS_STRONG, check_ekr, check_strong_ekr


@dataclass(frozen=True)
class RelationFamily:
    """Indexed regular relations between two uniform families."""

    lower: SetFamily
    upper: SetFamily
    relations: tuple[frozenset[tuple[int, int]], ...]

    def __post_init__(self) -> None:
        if self.lower.ground != self.upper.ground:
            raise ValueError("lower and upper families must share a ground set")
        if self.lower.uniform_size is None or self.upper.uniform_size is None:
            raise ValueError("both families must be uniform")
        if not self.lower.uniform_size <= self.upper.uniform_size <= self.lower.ground.size:
            raise ValueError("need l <= m <= n for the uniform sizes")
        if not self.relations:
            raise ValueError("at least one relation is required")
        for rel in self.relations:
            for li, mi in rel:
                if not 0 <= li < len(self.lower.members):
                    raise ValueError(f"lower index {li} out of range")
                if not 0 <= mi < len(self.upper.members):
                    raise ValueError(f"upper index {mi} out of range")
                lb = self.lower.members[li].bits
                mb = self.upper.members[mi].bits
                if lb & ~mb:
                    raise ValueError(
                        f"relation violates regularity: lower {li} is not "
                        f"contained in upper {mi}"
                    )


@dataclass(frozen=True)
class ConditionFailure:
    condition: str
    detail: str


@dataclass(frozen=True)
class ChainVerdict:
    is_chain: bool
    is_special: bool
    failures: tuple[ConditionFailure, ...]
    fiber_size: int | None
    degree_sum: int | None

    def to_json_dict(self) -> dict:
        return {
            "is_chain": self.is_chain,
            "is_special": self.is_special,
            "failures": [[f.condition, f.detail] for f in self.failures],
            "fiber_size": self.fiber_size,
            "degree_sum": self.degree_sum,
        }


def inclusion_relation(lower: SetFamily, upper: SetFamily) -> RelationFamily:
    """The single-relation family {(L, M) : L contained in M}."""
    pairs = set()
    for li, lm in enumerate(lower.members):
        lb = lm.bits
        for mi, um in enumerate(upper.members):
            if lb & ~um.bits == 0:
                pairs.add((li, mi))
    return RelationFamily(lower, upper, (frozenset(pairs),))


def fiber_family(rel: RelationFamily, i: int, mi: int) -> SetFamily:
    """Lower members related to upper member mi under relation i, re-grounded
    on that member (ground elements outside it are dropped)."""
    m_bits = rel.upper.members[mi].bits
    elements = []
    b = m_bits
    while b:
        low = b & -b
        elements.append(low.bit_length() - 1)
        b ^= low
    position = {e: p for p, e in enumerate(elements)}
    labels = tuple(rel.lower.ground.labels[e] for e in elements)
    ground = GroundSet(len(elements), labels)
    members = []
    for li, mj in rel.relations[i]:
        if mj != mi:
            continue
        nb = 0
        lb = rel.lower.members[li].bits
        while lb:
            low = lb & -lb
            nb |= 1 << position[low.bit_length() - 1]
            lb ^= low
        members.append(nb)
    return family_from_bits(members, ground)


def _fiber_counts(rel: RelationFamily) -> dict[tuple[int, int], int]:
    counts = {(i, mi): 0 for i in range(len(rel.relations)) for mi in range(len(rel.upper.members))}
    for i, relation in enumerate(rel.relations):
        for _, mi in relation:
            counts[(i, mi)] += 1
    return counts


def _degree_sums(rel: RelationFamily) -> list[int]:
    sums = [0] * len(rel.lower.members)
    for relation in rel.relations:
        for li, _ in relation:
            sums[li] += 1
    return sums


def check_ekr_chain(
    rel: RelationFamily,
    t: int = 1,
    mode: str = MODE_ELEMENT,
    limits: Limits = DEFAULT_LIMITS,
) -> ChainVerdict:
    """Exhaustively check the four chain conditions; every failure carries
    a concrete witness.  Budget exhaustions become explicit Unknown failures."""
    failures: list[ConditionFailure] = []

    fiber_counts = _fiber_counts(rel)
    sizes = set(fiber_counts.values())
    fiber_size = sizes.pop() if len(sizes) == 1 else None
    if fiber_size == 0:
        fiber_size = None
    if fiber_size is None:
        lo = min(fiber_counts.items(), key=lambda kv: (kv[1], kv[0]))
        hi = max(fiber_counts.items(), key=lambda kv: (kv[1], kv[0]))
        failures.append(
            ConditionFailure(
                "chain-iii",
                f"fiber sizes differ or vanish: relation {lo[0][0]} upper {lo[0][1]} "
                f"has {lo[1]}, relation {hi[0][0]} upper {hi[0][1]} has {hi[1]}",
            )
        )

    degree_sums = _degree_sums(rel)
    deg_set = set(degree_sums)
    degree_sum = deg_set.pop() if len(deg_set) == 1 else None
    if degree_sum is None:
        lo_i = degree_sums.index(min(degree_sums))
        hi_i = degree_sums.index(max(degree_sums))
        failures.append(
            ConditionFailure(
                "chain-iv",
                f"degree sums differ: lower {lo_i} has {degree_sums[lo_i]}, "
                f"lower {hi_i} has {degree_sums[hi_i]}",
            )
        )

    try:
        upper_verdict = check_ekr(rel.upper, t, mode, limits)
        if upper_verdict.status != STATUS_EKR:
            failures.append(
                ConditionFailure(
                    "chain-i",
                    f"upper family is {upper_verdict.status} "
                    f"(star {upper_verdict.star_size}, max {upper_verdict.max_size})",
                )
            )
    except NodeBudgetExceeded:
        failures.append(ConditionFailure("chain-i", "Unknown: budget exhausted"))

    for i in range(len(rel.relations)):
        for mi in range(len(rel.upper.members)):
            if fiber_counts[(i, mi)] == 0:
                continue  # already reported under chain-iii
            fam = fiber_family(rel, i, mi)
            try:
                verdict = check_ekr(fam, t, MODE_ELEMENT, limits)
            except NodeBudgetExceeded:
                failures.append(
                    ConditionFailure("chain-ii", f"Unknown: budget on fiber ({i},{mi})")
                )
                continue
            if verdict.status != STATUS_EKR:
                failures.append(
                    ConditionFailure(
                        "chain-ii",
                        f"fiber (relation {i}, upper {mi}) is {verdict.status} "
                        f"(star {verdict.star_size}, max {verdict.max_size})",
                    )
                )

    failures.sort(key=lambda f: (f.condition, f.detail))
    return ChainVerdict(
        is_chain=not failures,
        is_special=False,
        failures=tuple(failures),
        fiber_size=fiber_size,
        degree_sum=degree_sum,
    )


def check_special_chain(
    rel: RelationFamily,
    t: int = 1,
    mode: str = MODE_ELEMENT,
    limits: Limits = DEFAULT_LIMITS,
) -> ChainVerdict:
    """Chain conditions plus: upper strongly EKR, and every (M, x in M) has
    a kernel partner M' with M iintersect M' = {x} exactly."""
    base = check_ekr_chain(rel, t, mode, limits)
    failures = list(base.failures)

    try:
        strong = check_strong_ekr(rel.upper, t, mode, limits)
        if strong.status != STATUS_STRONG:
            failures.append(
                ConditionFailure(
                    "special-i", f"upper family is {strong.status}, not strongly EKR"
                )
            )
    except NodeBudgetExceeded:
        failures.append(ConditionFailure("special-i", "Unknown: budget exhausted"))

    upper_bits = [m.bits for m in rel.upper.members]
    for mi, mb in enumerate(upper_bits):
        missing = mb
        for ob in upper_bits:
            inter = mb & ob
            if inter and inter & (inter - 1) == 0:
                missing &= ~inter
                if not missing:
                    break
        if missing:
            x = (missing & -missing).bit_length() - 1
            failures.append(
                ConditionFailure(
                    "special-ii",
                    f"upper member {mi} has no partner meeting it exactly in "
                    f"element {rel.upper.ground.labels[x]}",
                )
            )

    failures.sort(key=lambda f: (f.condition, f.detail))
    return ChainVerdict(
        is_chain=base.is_chain,
        is_special=not failures,
        failures=tuple(failures),
        fiber_size=base.fiber_size,
        degree_sum=base.degree_sum,
    )


# ---------------------------------------------------------------------------
# counting identities forced by the chain hypotheses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityEntry:
    identity: str
    context: str
    lhs: str
    rhs: str
    holds: bool


@dataclass(frozen=True)
class IdentityReport:
    entries: tuple[IdentityEntry, ...]

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.entries)

    def entry(self, identity: str) -> "IdentityEntry":
        for e in self.entries:
            if e.identity == identity:
                return e
        raise KeyError(identity)


def check_counting_identities(
    rel: RelationFamily, limits: Limits = DEFAULT_LIMITS
) -> IdentityReport:
    """Verify the four counting identities in exact rational arithmetic.

    upper-star:   |upper_a| = (m/n) |upper| for every ground element a
    upper-max:    max intersecting subfamily of upper = (m/n) |upper|
    fiber-max:    max intersecting subfamily of each fiber = (l/m) |fiber|
    lower-star:   |lower_a| is one number for every a, equal to
                  l * fiber * |upper| * |I| / (n * degree_sum)

    Non-integer right-hand sides are reported as violations (they signal a
    broken chain, not an arithmetic fault).
    """
    n = rel.lower.ground.size
    ell = rel.lower.uniform_size
    m = rel.upper.uniform_size
    entries: list[IdentityEntry] = []

    upper_counts = [0] * n
    for mm in rel.upper.members:
        for i in _indices(mm.bits):
            upper_counts[i] += 1
    want = Fraction(m * len(rel.upper.members), n)
    bad = [a for a, c in enumerate(upper_counts) if Fraction(c) != want]
    entries.append(
        IdentityEntry(
            "upper-star",
            f"all {n} elements" if not bad else f"element {bad[0]}",
            str(upper_counts[bad[0]] if bad else upper_counts[0]),
            str(want),
            not bad and want.denominator == 1,
        )
    )

    upper_graph = build_intersection_graph(rel.upper, 1, MODE_ELEMENT, limits)
    upper_max = solve_max_clique(upper_graph, limits).size
    entries.append(
        IdentityEntry(
            "upper-max", "upper family", str(upper_max), str(want),
            Fraction(upper_max) == want,
        )
    )

    fiber_ok = True
    fiber_ctx = "all fibers"
    fiber_lhs = fiber_rhs = ""
    counts = _fiber_counts(rel)
    for i in range(len(rel.relations)):
        for mi in range(len(rel.upper.members)):
            if counts[(i, mi)] == 0:
                fiber_ok = False
                fiber_ctx = f"fiber ({i},{mi})"
                fiber_lhs, fiber_rhs = "0", "empty fiber"
                break
            fam = fiber_family(rel, i, mi)
            fmax = solve_max_clique(
                build_intersection_graph(fam, 1, MODE_ELEMENT, limits), limits
            ).size
            expect = Fraction(ell * len(fam.members), m)
            if Fraction(fmax) != expect or expect.denominator != 1:
                fiber_ok = False
                fiber_ctx = f"fiber ({i},{mi})"
                fiber_lhs, fiber_rhs = str(fmax), str(expect)
                break
        if not fiber_ok:
            break
    if fiber_ok:
        sample = fiber_family(rel, 0, 0) if counts[(0, 0)] else None
        fiber_lhs = fiber_rhs = str(
            Fraction(ell * (len(sample.members) if sample else 0), m)
        )
    entries.append(IdentityEntry("fiber-max", fiber_ctx, fiber_lhs, fiber_rhs, fiber_ok))

    lower_counts = [0] * n
    for lm in rel.lower.members:
        for i in _indices(lm.bits):
            lower_counts[i] += 1
    degs = _degree_sums(rel)
    deg = degs[0] if degs and len(set(degs)) == 1 else None
    fib = counts[(0, 0)] if counts else 0
    if deg in (None, 0) or fib == 0:
        entries.append(
            IdentityEntry("lower-star", "degenerate relation", "-", "-", False)
        )
    else:
        closed = Fraction(
            ell * fib * len(rel.upper.members) * len(rel.relations), n * deg
        )
        bad = [a for a, c in enumerate(lower_counts) if Fraction(c) != closed]
        entries.append(
            IdentityEntry(
                "lower-star",
                f"all {n} elements" if not bad else f"element {bad[0]}",
                str(lower_counts[bad[0]] if bad else lower_counts[0]),
                str(closed),
                not bad and closed.denominator == 1,
            )
        )
    return IdentityReport(tuple(entries))


def _indices(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


# ---------------------------------------------------------------------------
# .rel text format: first line |I|; per relation a pair count, then that
# many "lower_index upper_index" lines.
# ---------------------------------------------------------------------------


def relations_to_text(rel: RelationFamily) -> str:
    lines = [str(len(rel.relations))]
    for relation in rel.relations:
        pairs = sorted(relation)
        lines.append(str(len(pairs)))
        lines.extend(f"{li} {mi}" for li, mi in pairs)
    return "\n".join(lines) + "\n"


def relations_from_text(
    text: str, lower: SetFamily, upper: SetFamily
) -> RelationFamily:
    tokens = text.split()
    pos = 0

    def take() -> int:
        nonlocal pos
        if pos >= len(tokens):
            raise FormatError("truncated .rel file")
        pos += 1
        return int(tokens[pos - 1])

    count = take()
    relations = []
    for _ in range(count):
        pairs = take()
        rel_set = set()
        for _ in range(pairs):
            li = take()
            mi = take()
            rel_set.add((li, mi))
        relations.append(frozenset(rel_set))
    if pos != len(tokens):
        raise FormatError("trailing tokens in .rel file")
    return RelationFamily(lower, upper, tuple(relations))


def write_rel(rel: RelationFamily, path: str | Path) -> None:
    Path(path).write_text(relations_to_text(rel))


def read_rel(path: str | Path, lower: SetFamily, upper: SetFamily) -> RelationFamily:
    return relations_from_text(Path(path).read_text(), lower, upper)
