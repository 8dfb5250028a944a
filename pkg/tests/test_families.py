from math import comb, factorial

import pytest

from bruteforce import (
    brute_cycles_bipartite,
    brute_cycles_complete,
    brute_k_matchings_complete,
    brute_separated,
)
from ekrcheck.ambient import complete, complete_bipartite, complete_uniform
from ekrcheck.config import Limits
from ekrcheck.core import FamilyTooLarge, canonicalize, star
from ekrcheck.families import (
    PatternGraph,
    bicliques,
    cliques_complete,
    cycle_pattern,
    cycles_bipartite,
    h_copies,
    k_cycles_complete,
    k_matchings,
    k_subsets,
    matching_pattern,
    pattern_from_text,
    pattern_to_text,
    perfect_matchings_bipartite,
    separated_k_subsets,
    single_edge_pattern,
)


def members_as_index_sets(f):
    return {m.indices() for m in f.members}


def test_k_subsets_counts():
    assert len(k_subsets(4, 2)) == 6
    assert len(k_subsets(5, 5)) == 1
    assert len(k_subsets(7, 3)) == 35
    with pytest.raises(ValueError):
        k_subsets(3, 4)


def test_k_subsets_stars_all_equal():
    f = k_subsets(6, 3)
    sizes = {len(star(f, x)) for x in range(6)}
    assert sizes == {comb(5, 2)}


def test_separated_counts_against_brute_force():
    assert len(separated_k_subsets(7, 2)) == len(brute_separated(7, 2)) == 14
    assert len(separated_k_subsets(8, 4)) == len(brute_separated(8, 4)) == 2
    assert len(separated_k_subsets(6, 1)) == 6
    got = {frozenset(m.indices()) for m in separated_k_subsets(9, 3).members}
    assert got == set(brute_separated(9, 3))
    with pytest.raises(ValueError):
        separated_k_subsets(5, 3)


def test_perfect_matchings_counts():
    assert len(perfect_matchings_bipartite(3)) == 6
    assert len(perfect_matchings_bipartite(1)) == 1
    assert len(perfect_matchings_bipartite(4)) == 24
    with pytest.raises(FamilyTooLarge):
        perfect_matchings_bipartite(5, Limits(member_cap=100))


def test_k_matchings_counts():
    assert len(k_matchings(complete(4), 2)) == 3
    assert len(k_matchings(complete(5), 2)) == 15
    assert len(k_matchings(complete_bipartite(2, 2), 2)) == 2
    brute = brute_k_matchings_complete(6, 3)
    assert len(k_matchings(complete(6), 3)) == len(brute)


def test_k_matchings_match_brute_edge_sets():
    amb = complete(6)
    got = set()
    for m in k_matchings(amb, 2).members:
        got.add(frozenset(amb.edge_of(i) for i in m.indices()))
    assert got == brute_k_matchings_complete(6, 2)


def test_k_cycles_counts():
    assert len(k_cycles_complete(5, 3)) == 10
    assert len(k_cycles_complete(5, 5)) == 12
    assert len(k_cycles_complete(6, 4)) == 45 == len(brute_cycles_complete(6, 4))
    count = comb(7, 5) * factorial(4) // 2
    assert len(k_cycles_complete(7, 5)) == count


def test_cycles_bipartite_counts():
    assert len(cycles_bipartite(2, 4)) == 1
    assert len(cycles_bipartite(3, 4)) == 9 == len(brute_cycles_bipartite(3, 4))
    assert len(cycles_bipartite(3, 6)) == 6
    assert len(cycles_bipartite(4, 6)) == len(brute_cycles_bipartite(4, 6))


def test_clique_and_biclique_counts():
    assert len(cliques_complete(5, 3)) == 10
    assert len(cliques_complete(4, 4)) == 1
    assert len(cliques_complete(6, 3)) == 20
    assert len(bicliques(3, 2)) == 9
    assert len(bicliques(2, 2)) == 1
    assert len(bicliques(4, 2)) == 36


def test_cycle_clique_ratio_invariant():
    for n, k in ((6, 3), (6, 4), (7, 5)):
        cycles = len(k_cycles_complete(n, k))
        cliques = len(cliques_complete(n, k))
        assert cycles == cliques * factorial(k - 1) // 2


def test_bipartite_cycle_biclique_ratio_invariant():
    for n, k in ((3, 2), (4, 2), (3, 3)):
        cycles = len(cycles_bipartite(n, 2 * k))
        bics = len(bicliques(n, k))
        assert cycles == bics * factorial(k - 1) * factorial(k) // 2


def test_h_copies_examples():
    assert len(h_copies(complete(4), cycle_pattern(3))) == 4
    assert len(h_copies(complete(5), cycle_pattern(5))) == 12
    assert len(h_copies(complete_bipartite(3, 3), matching_pattern(3))) == 6


def test_h_copies_matches_cycle_generator_member_for_member():
    direct = k_cycles_complete(6, 4)
    via_copies = h_copies(complete(6), cycle_pattern(4))
    assert [m.bits for m in direct.members] == [m.bits for m in via_copies.members]


def test_h_copies_single_hyperedge_is_k_subsets():
    copies = h_copies(complete_uniform(6, 3), single_edge_pattern(3))
    assert len(copies) == comb(6, 3)
    assert copies.uniform_size == 1


def test_h_copies_rejects_isolated_vertices():
    lonely = PatternGraph(3, ((0, 1),), 2)
    with pytest.raises(ValueError, match="isolated"):
        h_copies(complete(5), lonely)


def test_h_copies_rejects_uniformity_mismatch():
    with pytest.raises(ValueError):
        h_copies(complete_uniform(6, 3), cycle_pattern(3))


def test_pattern_validation():
    with pytest.raises(ValueError):
        PatternGraph(3, ((0, 0),), 2)
    with pytest.raises(ValueError):
        PatternGraph(3, ((0, 1), (0, 1)), 2)
    with pytest.raises(ValueError):
        PatternGraph(2, ((0, 2),), 2)


def test_pattern_round_trip(tmp_path):
    pat = cycle_pattern(5)
    text = pattern_to_text(pat)
    assert pattern_from_text(text) == pat


def test_generators_are_already_canonical():
    for f in (
        k_subsets(6, 3),
        separated_k_subsets(8, 3),
        k_cycles_complete(5, 4),
        cycles_bipartite(3, 4),
        perfect_matchings_bipartite(3),
    ):
        again = canonicalize(f.members, f.ground)
        assert [m.bits for m in again.members] == [m.bits for m in f.members]
        assert again.uniform_size == f.uniform_size


def test_member_cap_enforced():
    with pytest.raises(FamilyTooLarge):
        k_subsets(10, 5, Limits(member_cap=100))
