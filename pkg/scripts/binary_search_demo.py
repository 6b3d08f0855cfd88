"""Watch the interval search model become binary search.

The loop body allows any strict shrink of the candidate interval; policy
lives entirely in the chooser. With the midpoint chooser on a sorted
array the run is a textbook binary search, and the same loop with the
canonical chooser still terminates on a correct answer, just slower.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from noet.examples import instantiate
from noet.loops import run


def show(tag, trace):
    print(f"{tag:>10}: {trace.render()}   ({trace.steps} steps)")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", default="1,3,5,7,9,11,13",
                    help="comma-separated sorted values")
    ap.add_argument("--x", type=int, default=9)
    args = ap.parse_args()

    t = tuple(int(v) for v in args.t.split(",") if v.strip())
    inst = instantiate("general_search_interval", t=t, x=args.x)

    print(f"searching for {args.x} in {t}")
    show("midpoint", run(inst.loop, inst.input, choose=inst.chooser))
    show("canonical", run(inst.loop, inst.input))

    terminals = {tr.terminal
                 for tr in run(inst.loop, inst.input, mode="all")}
    good = all(inst.oracle_check(inst.input, term) for term in terminals)
    print(f"all {len(terminals)} reachable terminals pass the membership "
          f"oracle: {good}")
    return 0 if good else 1


if __name__ == "__main__":
    raise SystemExit(main())
