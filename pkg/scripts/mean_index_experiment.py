"""Run a mean-index config and print i_tau / tau against its a-priori band.

    python scripts/mean_index_experiment.py scripts/configs/quasi_periodic.json
"""
from __future__ import annotations

import argparse

from sik.io import config_from_json, read_json


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    args = ap.parse_args()

    cfg = config_from_json(read_json(args.config))
    reports = cfg.run()
    m = cfg.field.space.dim
    print(f"m = {m}, c = {reports[0].c:.6g}, step = {reports[0].step:.6g}")
    ok = True
    for j, rep in enumerate(reports):
        print(f"\nxi[{j}] = {list(rep.xi)}")
        print(f"{'tau':>8} {'i_tau':>7} {'i/tau':>10} {'band':>14}")
        for t, i, r, lo, hi in zip(rep.taus, rep.indices, rep.ratios, rep.band_lo, rep.band_hi):
            print(f"{t:8.1f} {i:7d} {r:10.6f} {f'[{lo}, {hi}]':>14}")
        print(f"estimate {rep.estimate:.6f}  in band: {rep.in_band}  "
              f"successive gaps within allowance: {rep.cauchy_ok}")
        ok = ok and rep.in_band
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
