"""Order-3 classification over a few seeds, printed as a table."""
import argparse

from qdiff import classification as cl


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=3)
    a = ap.parse_args()
    print(f"{'case':20s} {'#const':>6s} {'ideal':>6s} {'quot':>5s}  seeds-agree")
    for case in cl.TABLE:
        reps = [cl.classify_order3(cl.order3_point(case, seed=s)) for s in range(a.seeds)]
        r = reps[0]
        agree = all(x.matches_table for x in reps)
        print(f"{case:20s} {len(r.constants):6d} {r.ideal_dim:6d} {r.quotient_dim:5d}  {agree}")


if __name__ == "__main__":
    main()
