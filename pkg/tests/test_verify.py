import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bruteforce import brute_max_intersecting, star_count
from ekrcheck.ambient import complete
from ekrcheck.config import Limits
from ekrcheck.core import GroundSet, family_from_bits
from ekrcheck.families import (
    cycles_bipartite,
    k_cycles_complete,
    k_matchings,
    k_subsets,
    perfect_matchings_bipartite,
    separated_k_subsets,
)
from ekrcheck.verify import (
    check_admissible_ordering,
    check_ekr,
    check_strong_ekr,
    search_admissible_ordering,
    star_sizes,
)


def test_star_sizes_examples():
    assert {c for _, c in star_sizes(k_subsets(5, 2))} == {4}
    assert {c for _, c in star_sizes(k_cycles_complete(6, 3))} == {4}
    assert {c for _, c in star_sizes(perfect_matchings_bipartite(3))} == {2}


def test_star_sizes_agree_with_direct_count():
    f = cycles_bipartite(4, 4)
    masks = [m.bits for m in f.members]
    for x, c in star_sizes(f):
        assert c == star_count(masks, x)


def test_check_ekr_examples():
    v = check_ekr(k_cycles_complete(6, 3))
    assert v.status == "EKR" and v.max_size == 4
    v = check_ekr(separated_k_subsets(8, 3))
    assert v.status == "EKR" and v.max_size == 6
    v = check_ekr(perfect_matchings_bipartite(4))
    assert v.status == "EKR" and v.max_size == 6


def test_check_ekr_not_ekr_with_witness():
    # all nine 4-cycles of K_{3,3} pairwise share an edge, so the whole
    # family is intersecting and beats every star
    v = check_ekr(cycles_bipartite(3, 4))
    assert v.status == "NotEKR"
    assert v.star_size == 4 and v.max_size == 9
    assert v.counterexample is not None and len(v.counterexample) == 9


def test_check_ekr_unequal_stars():
    # two disjoint pairs plus a third overlapping pair: element 4 uncovered
    f = family_from_bits([0b00011, 0b01100, 0b00110], GroundSet.points(5))
    v = check_ekr(f)
    assert v.status == "NotEKR"
    assert v.unequal_stars is not None


def test_check_strong_examples():
    assert check_strong_ekr(k_cycles_complete(7, 3)).status == "StrongEKR"
    v = check_strong_ekr(k_subsets(6, 3))
    assert v.status == "EkrNotStrong"
    assert v.non_star_maximum is not None
    # witness really is a maximum intersecting subfamily that is no star
    masks = [m.bits for m in k_subsets(6, 3).members]
    size, _ = brute_max_intersecting([masks[i] for i in v.non_star_maximum])
    assert size == len(v.non_star_maximum) == v.max_size
    common = -1
    for i in v.non_star_maximum:
        common &= masks[i]
    assert common == 0
    v = check_strong_ekr(separated_k_subsets(8, 3))
    assert v.status == "EkrNotStrong"
    assert check_strong_ekr(separated_k_subsets(9, 3)).status == "StrongEKR"


def test_wilson_t2_strong():
    v = check_strong_ekr(k_subsets(7, 3), t=2)
    assert v.status == "StrongEKR"
    assert v.star_size == v.max_size == 5


def test_vertex_mode_verdict_matches_element_mode():
    # triangles share an edge exactly when their vertex sets share two
    # vertices, so both formulations give one verdict
    f = k_cycles_complete(5, 3)
    via_vertices = check_ekr(f, t=2, mode="vertex")
    via_elements = check_ekr(f, t=1, mode="element")
    assert via_vertices.status == via_elements.status
    assert via_vertices.max_size == via_elements.max_size


def test_verdict_json_keys():
    v = check_ekr(k_cycles_complete(6, 3))
    payload = v.to_json_dict(k_cycles_complete(6, 3))
    assert set(payload) == {
        "status", "star_size", "max_size", "witnesses", "exhaustive", "node_count",
    }


def test_matchings_are_ekr():
    for n in (4, 5, 6):
        v = check_ekr(k_matchings(complete(n), 2))
        assert v.status == "EKR"


def test_status_invariant_under_relabeling():
    f = k_cycles_complete(5, 3)
    masks = [m.bits for m in f.members]
    perm = [3, 1, 4, 0, 2, 9, 5, 8, 7, 6]  # permutation of the 10 edges
    relabeled = []
    for b in masks:
        nb = 0
        while b:
            low = b & -b
            nb |= 1 << perm[low.bit_length() - 1]
            b ^= low
        relabeled.append(nb)
    g = family_from_bits(relabeled, f.ground)
    assert check_ekr(g).status == check_ekr(f).status
    assert check_ekr(g).max_size == check_ekr(f).max_size


def test_budget_propagates_as_unknown():
    v = check_ekr(k_subsets(9, 4), limits=Limits(node_budget=500))
    assert v.status == "Unknown"


def test_empty_family_rejected():
    from ekrcheck.core import SetFamily

    with pytest.raises(ValueError):
        check_ekr(SetFamily(GroundSet.points(3), ()))


small_family = st.integers(min_value=2, max_value=7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(
            st.integers(min_value=1, max_value=(1 << n) - 1),
            min_size=1,
            max_size=10,
            unique=True,
        ),
    )
)


@given(small_family)
@settings(max_examples=100, deadline=None)
def test_strong_check_matches_brute_force(data):
    # the engine decides strongness by refuting scattered maxima; validate
    # that against literally enumerating all maxima and comparing to stars
    n, bits = data
    f = family_from_bits(bits, GroundSet.points(n))
    masks = [m.bits for m in f.members]
    want, maxima = brute_max_intersecting(masks)
    stars = set()
    for x in range(n):
        hit = tuple(i for i, b in enumerate(masks) if b >> x & 1)
        if len(hit) == want:
            stars.add(hit)
    all_stars = all(tuple(mx) in stars for mx in maxima)
    if check_ekr(f).status == "EKR":
        expected = "StrongEKR" if all_stars else "EkrNotStrong"
        assert check_strong_ekr(f).status == expected


@given(small_family)
@settings(max_examples=80, deadline=None)
def test_verdict_consistency_on_small_families(data):
    n, bits = data
    f = family_from_bits(bits, GroundSet.points(n))
    masks = [m.bits for m in f.members]
    want, _ = brute_max_intersecting(masks)
    ekr = check_ekr(f)
    assert ekr.max_size == want
    strong = check_strong_ekr(f)
    if strong.status == "StrongEKR":
        assert ekr.status == "EKR"
    if ekr.status == "NotEKR":
        assert strong.status == "NotEKR"
    # star sizes reported never exceed the true maximum
    assert ekr.star_size <= ekr.max_size


# ---------------------------------------------------------------------------
# admissible orderings
# ---------------------------------------------------------------------------


def test_admissible_identity_order_on_pairs():
    f = k_subsets(6, 2)
    ok, bad = check_admissible_ordering(list(range(6)), f, 2)
    assert ok and bad is None


def test_admissible_rejects_touching_edges():
    amb = complete(4)
    f = k_matchings(amb, 2)
    # identity edge order starts 0-1, 0-2 which share vertex 0
    ok, bad = check_admissible_ordering(list(range(6)), f, 2)
    assert not ok and bad == 0


def test_admissible_search_k6_matchings():
    # 2-matchings of K_6 admit an ordering (k < n/2 regime)
    f = k_matchings(complete(6), 2)
    order = search_admissible_ordering(f, 2)
    assert order is not None
    ok, bad = check_admissible_ordering(order, f, 2)
    assert ok and bad is None


def test_admissible_nonexistence_k5_matchings():
    # an admissible ordering for 2-matchings of K_5 would be a Hamiltonian
    # cycle of the Petersen graph; the search proves there is none
    f = k_matchings(complete(5), 2)
    assert search_admissible_ordering(f, 2) is None


def test_admissible_rejects_non_permutations():
    f = k_subsets(4, 2)
    with pytest.raises(ValueError):
        check_admissible_ordering([0, 1, 2, 2, 3, 5], f, 2)


def test_admissible_search_k1_requires_all_singletons():
    full = k_subsets(5, 1)
    assert search_admissible_ordering(full, 1) == (0, 1, 2, 3, 4)
    partial = family_from_bits([1, 2, 4, 8], GroundSet.points(5))
    assert search_admissible_ordering(partial, 1) is None
