#!/usr/bin/env python3
"""Solution dimensions of the isotropy system for maps J_nE -> DE.

For r = 1 and n = m the system has a nonzero solution; the script prints
a null vector for that case and checks it against the generic-form pairing.
"""

import argparse
from itertools import product

from omnilie.coeff import Poly
from omnilie.dirac import GeneratorSet, rigidity_system
from omnilie.forms import Derivation
from omnilie.gauge import gen_iota
from omnilie.jet import embed_generic

CASES = [(2, 1, 2, 0), (2, 2, 2, 0), (3, 1, 2, 0), (3, 1, 3, 0), (2, 1, 2, 1), (2, 2, 2, 1), (4, 1, 3, 0)]


def isotropic_top_degree_map(m: int):
    """vol (x) e -> s Id and vol_j ^ dd e -> d_j, with the sign s that makes it isotropic."""
    gens = GeneratorSet(m, 1, m).elements
    frames = [Derivation.frame(m, 1, j) for j in range(m)]
    embedded = [embed_generic(g) for g in gens]
    for s in (1, -1):
        B = [Derivation.identity(m, 1).scale(Poly.const(m, s))] + frames
        if all(
            (gen_iota(B[a], embedded[b]) + gen_iota(B[b], embedded[a])).is_zero()
            for a, b in product(range(len(gens)), repeat=2)
        ):
            return s
    return None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m", type=int, default=4, help="largest m for the top-degree example")
    args = ap.parse_args()

    print(f"{'m':>2} {'r':>2} {'n':>2} {'deg':>3} {'unknowns':>8} {'equations':>9} {'rank':>5} {'dim':>4}")
    for m, r, n, deg in CASES:
        s = rigidity_system(m, r, n, deg)
        print(f"{m:>2} {r:>2} {n:>2} {deg:>3} {s.unknowns:>8} {s.equations:>9} {s.rank:>5} {s.solution_dim:>4}")

    print("\nisotropic graph over J_mE for r = 1:")
    for m in range(2, args.max_m + 1):
        sign = isotropic_top_degree_map(m)
        label = "none found" if sign is None else f"vol(x)e -> {'+' if sign > 0 else '-'}Id, vol_j^dd e -> d_j"
        print(f"  m={m}: {label}")


if __name__ == "__main__":
    main()
