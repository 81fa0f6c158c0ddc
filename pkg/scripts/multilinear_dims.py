"""Dimensions of multilinear constants under sigma_(1..n) = 1, with timings.

Symbolic Q(t) points are used up to --symbolic-max; larger n use a random
rational point and a flint rank over Q.
"""
import argparse
import math
import time

from qdiff import classification as cl
from qdiff.qstructure import generic_params


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--symbolic-max", type=int, default=5, help="n = 6 over Q(t) exceeds 15 minutes")
    a = ap.parse_args()
    for n in range(3, a.n_max + 1):
        t0 = time.time()
        if n <= a.symbolic_max:
            p = cl.multilinear_point(n)
            dim = cl.dim_constants_multilinear(n, p)
            generic = cl.dim_constants_multilinear(n, generic_params(n))
            kind = "symbolic"
        else:
            p = cl.multilinear_rational_point(n)
            dim = cl.dim_constants_multilinear_rational(n, p)
            q = cl.multilinear_rational_point(n, constrained=False)
            generic = cl.dim_constants_multilinear_rational(n, q)
            kind = "rational"
        print(f"n={n} ({kind}): dim={dim} (n-2)!={math.factorial(n - 2)} generic={generic} "
              f"({time.time() - t0:.1f}s)", flush=True)


if __name__ == "__main__":
    main()
