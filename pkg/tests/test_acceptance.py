"""Acceptance gate: one test per criterion, each printing a PASS line and
enforcing its stated wall-clock budget (run with -s to see the lines).

Two sub-assertions about 4-cycles of K_{3,3} are provably false of the
instances (all nine 4-cycles pairwise share an edge, so the maximum
intersecting subfamily is the whole family and beats every star); they are
kept verbatim under strict xfail markers with the analysis inline, and the
theorem-compliant neighbouring instances are asserted to pass instead.
"""

import time
from itertools import combinations
from math import comb, factorial

import pytest

from bruteforce import brute_max_intersecting, star_count, structured_family_masks
from ekrcheck.ambient import complete, complete_uniform
from ekrcheck.chains import (
    check_counting_identities,
    check_ekr_chain,
    check_special_chain,
    inclusion_relation,
)
from ekrcheck.core import GroundSet, family_from_bits
from ekrcheck.decomp import (
    DecompositionError,
    bipartite_shift_matchings,
    circle_factorization,
    consecutive_unions,
    exact_cover_decomposition,
    verify_decomposition,
    walecki,
)
from ekrcheck.families import (
    bicliques,
    cliques_complete,
    cycle_pattern,
    cycles_bipartite,
    h_copies,
    k_cycles_complete,
    k_matchings,
    k_subsets,
    perfect_matchings_bipartite,
    separated_k_subsets,
)
from ekrcheck.gbalanced import bipartite_kit, check_g_balanced, symmetric_vertex_kit
from ekrcheck.solver import enumerate_maximum, is_intersecting, max_intersecting
from ekrcheck.verify import check_ekr, check_strong_ekr


class Clock:
    def __init__(self, limit_s):
        self.limit = limit_s
        self.start = time.perf_counter()

    def done(self, label):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"{label}: {elapsed:.1f}s over {self.limit}s budget"
        return elapsed


def announce(num, label, elapsed):
    print(f"\nACCEPTANCE {num}: PASS - {label} ({elapsed:.1f}s)")


def test_criterion_01_classical_sweep():
    clock = Clock(60)
    pairs = [(n, k) for k in range(2, 6) for n in range(2 * k, 11)]
    for n, k in pairs:
        fam = k_subsets(n, k)
        top = max_intersecting(fam)
        assert top.size == comb(n - 1, k - 1), (n, k)
        verdict = check_strong_ekr(fam)
        if n > 2 * k:
            assert verdict.status == "StrongEKR", (n, k, verdict.status)
        else:
            assert verdict.status == "EkrNotStrong", (n, k, verdict.status)
            witness = verdict.non_star_maximum
            assert witness is not None and len(witness) == top.size
            assert is_intersecting(fam, witness)
            masks = [fam.members[i].bits for i in witness]
            common = -1
            for b in masks:
                common &= b
            assert common == 0  # shares no element, so it is no star
    announce(1, f"classical sweep over {len(pairs)} (n,k) pairs", clock.done("c1"))


def test_criterion_02_wilson_t2():
    clock = Clock(5)
    fam = k_subsets(7, 3)
    top = max_intersecting(fam, t=2)
    assert top.size == comb(5, 1) == 5
    verdict = check_strong_ekr(fam, t=2)
    assert verdict.status == "StrongEKR"
    # exhaustive enumeration: the maxima are exactly the 21 pair stars
    enum = enumerate_maximum(fam, t=2)
    assert enum.exhaustive and enum.size == 5
    masks = [m.bits for m in fam.members]
    stars = set()
    for a, b in combinations(range(7), 2):
        need = (1 << a) | (1 << b)
        stars.add(tuple(i for i, m in enumerate(masks) if m & need == need))
    assert set(enum.witnesses) == stars and len(stars) == 21
    announce(2, "Wilson t=2 desk case with exhaustive enumeration", clock.done("c2"))


def test_criterion_03_permutations():
    clock = Clock(120)
    for n in (3, 4, 5):
        fam = perfect_matchings_bipartite(n)
        assert max_intersecting(fam).size == factorial(n - 1), n
    for n in (4, 5):
        verdict = check_strong_ekr(perfect_matchings_bipartite(n))
        assert verdict.status == "StrongEKR", n  # all maxima are edge stars
    announce(3, "intersecting permutations via perfect matchings", clock.done("c3"))


def test_criterion_04_triangles():
    clock = Clock(30)
    v6 = check_ekr(k_cycles_complete(6, 3))
    assert v6.status == "EKR" and v6.max_size == 4
    v7 = check_strong_ekr(k_cycles_complete(7, 3))
    assert v7.status == "StrongEKR" and v7.max_size == 5
    announce(4, "triangle families at n=6 (EKR) and n=7 (strong)", clock.done("c4"))


def test_criterion_05_bipartite_cycles_attainable_part():
    clock = Clock(120)
    for n in (4, 5):
        fam = cycles_bipartite(n, 4)
        brute_star = star_count([m.bits for m in fam.members], 0)
        assert brute_star == comb(n - 1, 1) ** 2, n
        verdict = check_ekr(fam)
        assert verdict.status == "EKR" and verdict.star_size == brute_star, n
    # strongness holds in the theorem's regime n > 2k, i.e. from n = 5 on
    assert check_strong_ekr(cycles_bipartite(5, 4)).status == "StrongEKR"
    announce(5, "bipartite 4-cycles EKR at n=4,5 and strong at n=5", clock.done("c5"))


@pytest.mark.xfail(
    strict=True,
    reason=(
        "unattainable as stated: at n=3 every two 2-subsets of [3] intersect, so all "
        "nine 4-cycles of K_{3,3} pairwise share an edge; the maximum "
        "intersecting subfamily is the whole family (9) while every star "
        "has size 4, hence the family is NotEKR (brute-force verifiable); "
        "the cited theorem requires n >= 2k = 4"
    ),
)
def test_criterion_05_bipartite_cycles_n3_as_stated():
    verdict = check_ekr(cycles_bipartite(3, 4))
    assert verdict.status == "EKR" and verdict.star_size == 4


@pytest.mark.xfail(
    strict=True,
    reason=(
        "unattainable as stated: the instance is not even EKR (see above), so "
        "it cannot be strongly EKR; the parenthetical 'n > 2k' is false "
        "arithmetic for n=3, k=2"
    ),
)
def test_criterion_05_bipartite_cycles_n3_strong_as_stated():
    assert check_strong_ekr(cycles_bipartite(3, 4)).status == "StrongEKR"


def _t2_chain(n):
    lower = k_matchings(complete(n), 2)
    upper = k_cycles_complete(n, n)
    return inclusion_relation(lower, upper)


def _biclique_chain(n):
    return inclusion_relation(cycles_bipartite(n, 4), bicliques(n, 2))


def test_criterion_06_chain_certificates():
    for n in (5, 6, 7):
        clock = Clock(30)
        verdict = check_ekr_chain(_t2_chain(n))
        assert verdict.is_chain, (n, verdict.failures)
        clock.done(f"c6 t2-chain n={n}")
    clock = Clock(30)
    verdict = check_ekr_chain(_biclique_chain(4))
    assert verdict.is_chain, verdict.failures
    special = check_special_chain(_biclique_chain(5))
    assert special.is_chain and special.is_special, special.failures
    elapsed = clock.done("c6 biclique")
    announce(6, "chain certificates (matchings-in-cycles, cycles-in-bicliques)", elapsed)


@pytest.mark.xfail(
    strict=True,
    reason=(
        "unattainable as stated: inclusion_relation(B_3(C_4), B_3(K_{2,2})) violates "
        "chain condition (i) because the upper family is not EKR at n=3 "
        "(max intersecting 9 > star 4); the quoted hypothesis 'whenever "
        "n >= 2k' requires n >= 4"
    ),
)
def test_criterion_06_biclique_chain_n3_as_stated():
    assert check_ekr_chain(_biclique_chain(3)).is_chain


def test_criterion_07_composition_cross_check():
    clock = Clock(120)
    for n in (5, 6, 7):
        rel = _t2_chain(n)
        assert check_ekr_chain(rel).is_chain
        assert check_ekr(rel.lower).status == "EKR", n
    rel = _biclique_chain(5)
    assert check_special_chain(rel).is_special
    assert check_strong_ekr(rel.lower).status == "StrongEKR"
    announce(7, "composition lemma cross-checks on all passing chains", clock.done("c7"))


def test_criterion_08_balanced_certificates():
    clock = Clock(60)
    fam = k_cycles_complete(5, 5)
    cover = [fam.index_of(b.bits) for b in walecki(5, fam.ambient).blocks]
    v = check_g_balanced(symmetric_vertex_kit(fam.ambient), fam, cover, 1)
    assert v.passed
    assert check_ekr(fam).status == "EKR"

    fam = k_cycles_complete(6, 6)
    unions = consecutive_unions(circle_factorization(6, fam.ambient))
    cover = [fam.index_of(b.bits) for b in unions.blocks]
    v = check_g_balanced(symmetric_vertex_kit(fam.ambient), fam, cover, 2)
    assert v.passed
    assert check_ekr(fam).status == "EKR"

    fam = perfect_matchings_bipartite(4)
    shifts = bipartite_shift_matchings(4, fam.ambient)
    cover = [fam.index_of(b.bits) for b in shifts.blocks]
    v = check_g_balanced(bipartite_kit(fam.ambient), fam, cover, 1)
    assert v.passed
    assert check_ekr(fam).status == "EKR"
    announce(8, "balanced covers (odd/even Hamiltonian, bipartite shifts)", clock.done("c8"))


def test_criterion_09_counting_identities():
    clock = Clock(10)
    for rel in (_t2_chain(5), _t2_chain(6), _t2_chain(7)):
        rep = check_counting_identities(rel)
        assert rep.entry("upper-star").holds
        assert rep.entry("fiber-max").holds
        assert rep.entry("lower-star").holds
    # both biclique chains of criterion 6, including the literal n=3 one:
    # the three listed identities are pure counting and hold there too
    for n in (3, 4):
        rep = check_counting_identities(_biclique_chain(n))
        assert rep.entry("upper-star").holds, n
        assert rep.entry("fiber-max").holds, n
        assert rep.entry("lower-star").holds, n
    announce(9, "exact integer counting identities on both chain types", clock.done("c9"))


def test_criterion_10_decompositions():
    clock = Clock(120)
    for n in (3, 5, 7, 9, 11):
        r = walecki(n)
        assert len(r.blocks) == (n - 1) // 2 and r.verified
        ok, _ = verify_decomposition(r.ambient.ground, r.blocks, 1)
        assert ok
    for n in (2, 4, 6, 8, 10, 12):
        r = circle_factorization(n)
        assert len(r.blocks) == n - 1 and r.verified
    for n in (4, 6, 8):
        u = consecutive_unions(circle_factorization(n))
        assert u.multiplicity == 2 and u.verified
    for n in (3, 4, 5, 6, 7, 8):
        u = consecutive_unions(bipartite_shift_matchings(n))
        assert u.multiplicity == 2 and u.verified
    r = exact_cover_decomposition(complete(9), cycle_pattern(4))
    assert r is not None and len(r.blocks) == 9
    ok, _ = verify_decomposition(r.ambient.ground, r.blocks, 1)
    assert ok
    with pytest.raises(DecompositionError, match="necessary condition fails"):
        exact_cover_decomposition(complete(4), cycle_pattern(4))
    announce(10, "decomposition constructions and exact-cover search", clock.done("c10"))


def test_criterion_11_talbot_boundary():
    clock = Clock(30)
    v8 = check_strong_ekr(separated_k_subsets(8, 3))
    assert v8.status == "EkrNotStrong"
    witness = v8.non_star_maximum
    fam = separated_k_subsets(8, 3)
    assert witness is not None and len(witness) == v8.max_size
    assert is_intersecting(fam, witness)
    v9 = check_strong_ekr(separated_k_subsets(9, 3))
    assert v9.status == "StrongEKR"
    announce(11, "separated families: n=2k+2 boundary and n=9 strongness", clock.done("c11"))


def test_criterion_12_oracle_equivalence():
    clock = Clock(60)
    checked = 0
    for index in range(200):
        ground, masks = structured_family_masks(index)
        fam = family_from_bits(masks, GroundSet.points(ground))
        member_masks = [m.bits for m in fam.members]
        want_size, want_sets = brute_max_intersecting(member_masks)
        got = max_intersecting(fam)
        assert got.size == want_size, index
        enum = enumerate_maximum(fam)
        assert enum.exhaustive and list(enum.witnesses) == want_sets, index
        checked += 1
    assert checked == 200
    announce(12, "solver equals 2^m brute-force scan on 200 families", clock.done("c12"))


def test_criterion_13_copies_route():
    clock = Clock(120)
    # triangles of K_6 built as pattern copies in K_6^(2) match criterion 4
    copies6 = h_copies(complete_uniform(6, 2), cycle_pattern(3))
    direct6 = k_cycles_complete(6, 3)
    ekr = check_ekr(copies6)
    assert ekr.status == "EKR" and ekr.max_size == 4
    via_copies = check_strong_ekr(copies6)
    via_direct = check_strong_ekr(direct6)
    assert via_copies.status == via_direct.status
    assert (via_copies.star_size, via_copies.max_size) == (
        via_direct.star_size,
        via_direct.max_size,
    )
    # chain machinery on a copies-built family: triangles inside 3-cliques
    # of K_7 form a special chain, certifying the strong instance of c4
    lower = h_copies(complete(7), cycle_pattern(3))
    rel = inclusion_relation(lower, cliques_complete(7, 3))
    special = check_special_chain(rel)
    assert special.is_chain and special.is_special
    strong = check_strong_ekr(lower)
    assert strong.status == "StrongEKR" and strong.max_size == 5
    announce(13, "pattern-copy route matches the direct triangle verdicts", clock.done("c13"))
