"""Per-operation timings against group order for q in {3, 9, 27, 81}.

Prints a markdown table; nothing here is gated.
"""

import argparse
import time

from hmst3.cli import bench
from hmst3.fieldtower import make_params, prime_power, tower


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--qs", type=int, nargs="+", default=[3, 9, 27, 81])
    ap.add_argument("--reps", type=int, default=20)
    args = ap.parse_args()

    print("| q | group order | tower build ms | op | per op us |")
    print("|---|---|---|---|---|")
    for q in args.qs:
        t0 = time.perf_counter()
        tower(make_params(*prime_power(q)))
        build_ms = (time.perf_counter() - t0) * 1000
        order = q**3 * (q * q - 1)
        for op, _, _, _, per in bench(q, args.reps):
            print(f"| {q} | {order} | {build_ms:.1f} | {op} | {per:.1f} |")


if __name__ == "__main__":
    main()
