"""Census summary: counts, manifolds, valence bounds and H1 of the double.

    python3 scripts/census_table.py 3
"""

import argparse
import time
from collections import Counter

from tridouble import certify, edge_classes, enumerate_census, h1_double, is_manifold


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("n", type=int, nargs="?", default=2)
    ap.add_argument("--top", type=int, default=10, help="most common H1 groups to list")
    args = ap.parse_args()

    for n in range(1, args.n + 1):
        t0 = time.perf_counter()
        census = enumerate_census(n)
        secs = time.perf_counter() - t0
        groups = Counter()
        manifolds = 0
        kinds = Counter()
        for cf in census:
            T = cf.representative
            groups[str(h1_double(T))] += 1
            manifolds += is_manifold(T)[0]
            kinds[certify(T).kind] += 1
        print(f"n={n}: {len(census)} classes ({secs:.1f}s), {manifolds} manifolds")
        print("  certificates: " + ", ".join(f"{k}={v}" for k, v in sorted(kinds.items())))
        for g, c in groups.most_common(args.top):
            print(f"  {c:6d}  {g}")


if __name__ == "__main__":
    main()
