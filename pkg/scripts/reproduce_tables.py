#!/usr/bin/env python3
"""Recompute the product tables for a family of parameter pairs.

For each pair (k, l) the script resolves the first factor, computes the
tensor and Tor, solves the extension problem, checks the result against
the printed product table, and reports the split behaviour.

    python3 scripts/reproduce_tables.py            # default pair list
    python3 scripts/reproduce_tables.py 4 4 2 6    # explicit pairs
"""

import sys
import time

sys.path.insert(0, "src")

from crtk.catalog import cuntz_module, cuntz_resolution, expected_product
from crtk.cli import render_module
from crtk.crt_core import crt_isomorphic
from crtk.kunneth import KunnethProblem, solve_middle
from crtk.tensor import tensor_and_tor

DEFAULT_PAIRS = [(3, 5), (3, 6), (2, 2), (2, 4), (4, 4), (2, 6), (4, 8)]


def run_pair(k: int, l: int) -> bool:
    t0 = time.time()
    tp = tensor_and_tor(cuntz_resolution(k), cuntz_module(l))
    sols = solve_middle(KunnethProblem(tp.tensor, tp.tor))
    elapsed = time.time() - t0
    print(f"== (k, l) = ({k}, {l})   [{elapsed:.2f}s]")
    if not sols:
        print("no consistent middle found")
        return False
    expected = expected_product(k, l)
    ok = all(crt_isomorphic(s.middle, expected) is not None for s in sols)
    print(f"solutions: {len(sols)}   split: {sols[0].split}   matches table: {ok}")
    print(render_module(sols[0].middle))
    print()
    return ok


def main() -> int:
    args = [int(a) for a in sys.argv[1:]]
    pairs = list(zip(args[::2], args[1::2])) if args else DEFAULT_PAIRS
    bad = [p for p in pairs if not run_pair(*p)]
    if bad:
        print("MISMATCHED PAIRS:", bad)
        return 1
    print("all pairs reproduce their tables")
    return 0


if __name__ == "__main__":
    sys.exit(main())
