"""Compare strongly closed and exact one-forms block by block at the A2 Serre point.

A strongly closed one-form that is not exact would be a nontrivial class.
The strongly closed condition is linear in the components, so both spaces
are computed as exact ranks.
"""
import argparse

from qdiff import kacmoody as km
from qdiff import linalg
from qdiff.constants import find_constants
from qdiff.freealg import FreePoly, degrees_of_total, sub_degree, word_basis
from qdiff.taylor import OneForm, _relevant_constants, constant_pairing


def one_form_basis(d, n):
    out = []
    for i in range(1, n + 1):
        if d[i - 1] == 0:
            continue
        for w in word_basis(sub_degree(d, i)):
            comps = [FreePoly(n) for _ in range(n)]
            comps[i - 1] = FreePoly.word(n, w)
            out.append(OneForm(tuple(comps)))
    return out


def block_report(d, params):
    n = params.n
    basis = one_form_basis(d, n)
    consts = _relevant_constants(d, params, True)
    # rows: coefficient of each (constant, word) in the pairing; columns: basis forms
    rows = {}
    for col, y in enumerate(basis):
        for k, c in enumerate(consts):
            for w, v in constant_pairing(c, y, params).terms.items():
                rows.setdefault((k, w), {})[col] = v
    closed = len(basis) - linalg.rank(list(rows.values()), len(basis))
    exact = len(word_basis(d)) - len(find_constants(d, params))
    return len(basis), closed, exact, len(consts)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-total", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    p = km.cartan_constraints(km.cartan_type("A", 2), seed=a.seed)
    print("block  forms  strongly-closed  exact  constants-used  gap")
    gaps = 0
    for total in range(2, a.max_total + 1):
        for d in degrees_of_total(2, total):
            forms, closed, exact, used = block_report(d, p)
            gap = closed - exact
            gaps += gap != 0
            print(f"{str(d):7s}{forms:5d}{closed:14d}{exact:9d}{used:12d}{gap:8d}")
    print("no nontrivial classes found" if not gaps else f"{gaps} blocks with closed non-exact forms")


if __name__ == "__main__":
    main()
