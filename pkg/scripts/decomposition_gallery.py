#!/usr/bin/env python3
"""Gallery of verified edge decompositions of small complete structures.

Shows the explicit constructions (Hamiltonian decompositions of odd K_n,
one-factorizations of even K_n, shifted matchings of K_{n,n}, consecutive
factor unions) and a few exact-cover searches, including a proved
non-existence (K_6 has no triangle decomposition).
"""

import time

from ekrcheck import (
    bipartite_shift_matchings,
    circle_factorization,
    consecutive_unions,
    exact_cover_decomposition,
    walecki,
)
from ekrcheck.ambient import complete, complete_bipartite
from ekrcheck.decomp import DecompositionError
from ekrcheck.families import cycle_pattern, matching_pattern


def show(label, result):
    if result is None:
        print(f"  {label:<44} none exists (search exhausted)")
    else:
        print(f"  {label:<44} {len(result.blocks)} blocks, "
              f"multiplicity {result.multiplicity}, verified {result.verified}")


def main() -> None:
    print("explicit constructions")
    for n in (5, 7, 9, 11):
        show(f"walecki(K_{n})", walecki(n))
    for n in (6, 8, 10, 12):
        show(f"circle_factorization(K_{n})", circle_factorization(n))
    for n in (6, 8):
        show(f"consecutive_unions(K_{n})", consecutive_unions(circle_factorization(n)))
    for n in (4, 6):
        show(f"shift matchings(K_{{{n},{n}}})", bipartite_shift_matchings(n))
        show(f"consecutive_unions(K_{{{n},{n}}})",
             consecutive_unions(bipartite_shift_matchings(n)))

    print("exact-cover searches")
    t0 = time.perf_counter()
    show("K_7 into triangles", exact_cover_decomposition(complete(7), cycle_pattern(3)))
    show("K_9 into 4-cycles", exact_cover_decomposition(complete(9), cycle_pattern(4)))
    show("K_13 into triangles", exact_cover_decomposition(complete(13), cycle_pattern(3)))
    show("K_6 into triangles", exact_cover_decomposition(complete(6), cycle_pattern(3)))
    show("K_{3,3} into perfect matchings",
         exact_cover_decomposition(complete_bipartite(3, 3), matching_pattern(3)))
    try:
        exact_cover_decomposition(complete(4), cycle_pattern(4))
    except DecompositionError as exc:
        print(f"  {'K_4 into 4-cycles':<44} {exc}")
    print(f"  searches took {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
