#!/usr/bin/env python3
"""Survey of cycle and matching families: verdicts, chains, balanced covers.

Runs the whole certificate stack on small complete and complete-bipartite
ambients: direct EKR/strong verdicts for triangle, cycle, matching and
biclique families; the matchings-inside-Hamiltonian-cycles and
cycles-inside-bicliques chains; and the balanced covers built from the
explicit decompositions.
"""

import argparse
import time

from ekrcheck import (
    bicliques,
    bipartite_kit,
    bipartite_shift_matchings,
    check_ekr,
    check_ekr_chain,
    check_g_balanced,
    check_special_chain,
    check_strong_ekr,
    circle_factorization,
    consecutive_unions,
    cycles_bipartite,
    inclusion_relation,
    k_cycles_complete,
    k_matchings,
    perfect_matchings_bipartite,
    symmetric_vertex_kit,
    walecki,
)
from ekrcheck.ambient import complete


def stamp(label, fn):
    t0 = time.perf_counter()
    out = fn()
    print(f"  {label:<52} {out}  [{time.perf_counter() - t0:.2f}s]")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=7,
                    help="largest complete-graph order to survey")
    args = ap.parse_args()

    print("direct verdicts")
    for n in range(6, args.n_max + 1):
        stamp(f"triangles of K_{n}",
              lambda n=n: check_strong_ekr(k_cycles_complete(n, 3)).status)
    for n in range(5, args.n_max + 1):
        stamp(f"Hamiltonian cycles of K_{n}",
              lambda n=n: check_ekr(k_cycles_complete(n, n)).status)
    for n in (3, 4, 5):
        stamp(f"perfect matchings of K_{{{n},{n}}}",
              lambda n=n: check_strong_ekr(perfect_matchings_bipartite(n)).status)
    for n in (4, 5):
        stamp(f"4-cycles of K_{{{n},{n}}}",
              lambda n=n: check_strong_ekr(cycles_bipartite(n, 4)).status)

    print("chain certificates")
    for n in range(5, args.n_max + 1):
        def chain(n=n):
            rel = inclusion_relation(
                k_matchings(complete(n), 2), k_cycles_complete(n, n)
            )
            v = check_ekr_chain(rel)
            return f"is_chain={v.is_chain} fiber={v.fiber_size} deg={v.degree_sum}"
        stamp(f"2-matchings inside Hamiltonian cycles, K_{n}", chain)
    def special(n=5):
        rel = inclusion_relation(cycles_bipartite(n, 4), bicliques(n, 2))
        return f"is_special={check_special_chain(rel).is_special}"
    stamp("4-cycles inside bicliques, K_{5,5}", special)

    print("balanced covers")
    def walecki_cover():
        fam = k_cycles_complete(5, 5)
        cover = [fam.index_of(b.bits) for b in walecki(5, fam.ambient).blocks]
        return check_g_balanced(symmetric_vertex_kit(fam.ambient), fam, cover, 1).passed
    stamp("Hamiltonian cycles of K_5 / Walecki, j=1", walecki_cover)

    def unions_cover():
        fam = k_cycles_complete(6, 6)
        unions = consecutive_unions(circle_factorization(6, fam.ambient))
        cover = [fam.index_of(b.bits) for b in unions.blocks]
        return check_g_balanced(symmetric_vertex_kit(fam.ambient), fam, cover, 2).passed
    stamp("Hamiltonian cycles of K_6 / factor unions, j=2", unions_cover)

    def shifts_cover():
        fam = perfect_matchings_bipartite(4)
        shifts = bipartite_shift_matchings(4, fam.ambient)
        cover = [fam.index_of(b.bits) for b in shifts.blocks]
        return check_g_balanced(bipartite_kit(fam.ambient), fam, cover, 1).passed
    stamp("perfect matchings of K_{4,4} / shifts, j=1", shifts_cover)


if __name__ == "__main__":
    main()
