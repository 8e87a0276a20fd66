"""Run every property suite over a seed range and write one CSV per (suite, n).

    python scripts/run_audits.py --seeds 20 --n 1 2 --out audit_out
"""
from __future__ import annotations

import argparse
import time
from pathlib import Path

from sik.audit import SUITES, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suites", nargs="+", default=list(SUITES), choices=SUITES)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--first-seed", type=int, default=0)
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--out", default="audit_out")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seeds = range(args.first_seed, args.first_seed + args.seeds)
    failed = 0
    for suite in args.suites:
        for n in args.n:
            t0 = time.perf_counter()
            report = run_suite(suite, seeds, n)
            (out / f"{suite}_n{n}.csv").write_text(report.to_csv(), encoding="utf-8")
            summ = report.summary()
            total = sum(v["total"] for v in summ.values())
            ok = sum(v["passed"] for v in summ.values())
            failed += total - ok
            print(f"{suite:9s} n={n}  {ok:6d}/{total:<6d} checks  {time.perf_counter() - t0:6.1f}s")
            for name, v in sorted(summ.items()):
                if v["passed"] != v["total"]:
                    print(f"    {name}: {v['total'] - v['passed']} failures")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
