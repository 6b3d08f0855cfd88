"""Run the claim audit at full sample size and print the report.

The audit property-tests three contested algebraic claims on randomly
sampled finite relations, always checking the deterministic regression
fixtures first so counterexamples do not depend on the seed. Exit code 0
means every finding re-verified from its own serialized evidence.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from noet.audit import render_report, report_json, reverify, run_audit


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--json-out", type=pathlib.Path, default=None,
                    help="also write the machine-readable report here")
    args = ap.parse_args()

    findings = run_audit(seed=args.seed, samples=args.samples)
    print(render_report(findings))
    if args.json_out is not None:
        args.json_out.write_text(report_json(findings), encoding="utf-8")
        print(f"wrote {args.json_out}")

    bad = [f.claim_id for f in findings if not reverify(f)]
    if bad:
        print(f"re-verification failed for: {', '.join(bad)}",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
