"""Grid search for a highest-root element at the B3 point, with the B2 control."""
import argparse
import time

from qdiff import kacmoody as km


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=6, help="max |exponent| per free parameter")
    ap.add_argument("--seed", type=int, default=0, help="seed of the symbolic point")
    a = ap.parse_args()

    t0 = time.time()
    p3 = km.cartan_constraints(km.cartan_type("B", 3), seed=a.seed)
    res = km.search_b3(p3, exponent_bound=a.bound)
    print(f"B3, bound {a.bound} ({time.time() - t0:.1f}s)")
    for note in res.notes:
        print("  " + note)
    for i in sorted(res.exact):
        print(f"  generator {i}: {len(res.candidates[i])} prefilter survivors, "
              f"exact: {[(lab, k) for _, lab, k in res.exact[i]]}")
    print(f"  simultaneous solutions: {res.solutions}")
    print(f"  qualifying elements: {len(res.qualifying)}")
    print(f"  zero-scalar control: {km.zero_scalar_control(p3)}")

    p2 = km.cartan_constraints(km.cartan_type("B", 2), seed=a.seed)
    ctrl = km.search_b2_control(p2, exponent_bound=min(a.bound, 4))
    exact = km.solve_b2(p2)
    print(f"B2 control: {len(ctrl.qualifying)} qualifying at labels {[q[0] for q in ctrl.qualifying]}")
    for e, a1, a2 in exact.survivors:
        print(f"  exact solver: a1 = {p2.scalar_text(a1)}, a2 = {p2.scalar_text(a2)}")


if __name__ == "__main__":
    main()
