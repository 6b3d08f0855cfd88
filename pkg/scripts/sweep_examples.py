"""Sweep every example loop over small inputs and verify all obligations.

For each example this instantiates the loop across an input grid, runs
the full obligation checker (space, initialization, termination order,
seed containment, exits, oracle postcondition, denotation agreement),
and prints a per-example tally. Default grids finish in seconds; raise
the limits to push further.
"""

import argparse
import itertools
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from noet.examples import instantiate
from noet.loops import verify


def grids(gcd_max, n_max, vals):
    yield "gcd", ({"a": a, "b": b}
                  for a in range(1, gcd_max + 1)
                  for b in range(1, gcd_max + 1))
    arrays = [t for n in range(n_max + 1)
              for t in itertools.product(range(vals), repeat=n)]
    for name in ("seq_search", "general_search_interval"):
        yield name, ({"t": t, "x": x} for t in arrays
                     for x in range(vals + 1))
    # the interval set space doubles per array cell; keep one size down
    small = [t for t in arrays if len(t) < n_max]
    yield "general_search_intervalset", ({"t": t, "x": x} for t in small
                                         for x in range(vals + 1))
    yield "partition", ({"t": t, "pivot": p} for t in arrays
                        for p in range(vals + 1))
    yield "lamsort", ({"t": t} for t in arrays)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gcd-max", type=int, default=10)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--vals", type=int, default=3)
    args = ap.parse_args()

    all_ok = True
    for name, grid in grids(args.gcd_max, args.n_max, args.vals):
        t0 = time.monotonic()
        total = failed = 0
        first_bad = None
        for params in grid:
            inst = instantiate(name, **params)
            report = verify(inst.loop, [inst.input], ctx=inst.ctx)
            total += 1
            if not report.passed:
                failed += 1
                if first_bad is None:
                    first_bad = (params, report.render())
        dt = time.monotonic() - t0
        status = "ok" if failed == 0 else f"{failed} FAILED"
        print(f"{name:<28} {total:>6} instances  {status}  ({dt:.1f}s)")
        if first_bad is not None:
            all_ok = False
            print(f"  first failure at {first_bad[0]}:")
            for line in first_bad[1].splitlines():
                print(f"    {line}")
    return 0 if all_ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
