"""Command line: ``sik <verb> [options]``.

Exit codes: 0 success, 1 a check failed (audit failure, disagreeing
methods, value outside its a-priori band), 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .audit import SUITES, run_suite
from .forms import FormConstructionError
from .indices import (
    InconsistentIndexError,
    NonRegularCrossingError,
    TrackingError,
    graph_nullity,
    hormander_index,
    hormander_via_paths,
    maslov_index,
    maslov_index_crossings,
    maslov_type_index,
    triple_index,
    triple_index_via_delta,
)
from .io import (
    InputError,
    config_from_json,
    dumps,
    frame_from_json,
    lagrangian_path_from_json,
    read_json,
    space_from_json,
    symplectic_path_from_json,
)
from .symplectic import Tolerances, doubled_space, is_lagrangian


class CheckFailed(RuntimeError):
    """Output was produced but a verification inside it failed."""


# --------------------------------------------------------------- helpers


def _tolerances(args) -> Tolerances:
    kw = {}
    for flag, name in (("tol_rank", "rank"), ("tol_inertia", "inertia"), ("tol_int", "integer")):
        val = getattr(args, flag)
        if val is not None:
            kw[name] = val
    try:
        return Tolerances(**kw)
    except ValueError as exc:
        raise InputError(f"tolerance misuse: {exc}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _space_for(args, first_file: str):
    J = read_json(args.J) if args.J else None
    if J is not None:
        return space_from_json(J)
    obj = read_json(first_file)
    rows = obj.get("rows") if isinstance(obj, dict) else None
    if rows is None and isinstance(obj, dict) and obj.get("samples"):
        rows = obj["samples"][0].get("matrix", {}).get("rows")
    if not isinstance(rows, int):
        raise InputError(f"malformed matrix file: cannot read the dimension from {first_file}")
    return space_from_json(None, rows)


def _lagrangians(space, tol, **files):
    out = []
    for name, path in files.items():
        frame = frame_from_json(read_json(path), space, name)
        if not is_lagrangian(frame, tol):
            raise InputError(f"{name} ({path}) is not Lagrangian: dimension {frame.k}, n = {space.n}")
        out.append(frame)
    return out


# ----------------------------------------------------------------- verbs


def cmd_index(args, tol: Tolerances) -> str:
    path = symplectic_path_from_json(read_json(args.path),
                                     space_from_json(read_json(args.J)) if args.J else None, tol)
    W = None
    if args.W:
        W = frame_from_json(read_json(args.W), doubled_space(path.source), "W")
        if not is_lagrangian(W, tol):
            raise InputError("W is not Lagrangian in the doubled space")
    rep = maslov_type_index(path, None if W is None else W.cols, tol)
    d = rep.to_dict()
    d["diagnostics"]["nullity"] = graph_nullity(path.end, W, path.source, path.target, tol)
    d["diagnostics"]["boundary"] = "graph-identity" if W is None else "given"
    return dumps(d)


def cmd_maslov(args, tol: Tolerances) -> str:
    space = _space_for(args, args.lam)
    lam = lagrangian_path_from_json(read_json(args.lam), space, "lam")
    mu = lagrangian_path_from_json(read_json(args.mu), space, "mu")
    if lam.constant and mu.constant:
        raise InputError("at least one of lam and mu must be a sampled path")
    for name, p in (("lam", lam), ("mu", mu)):
        for s in (p.a, p.b):
            if not is_lagrangian(p.subspace(s), tol):
                raise InputError(f"{name} is not Lagrangian at s={s:g}")
    sign = args.sign
    rep = maslov_index(lam, mu, tol, sign=sign)
    d = rep.to_dict()
    if args.method == "both":
        if lam.constant:
            raise InputError("the crossing method needs lam to be a path")
        try:
            cross = maslov_index_crossings(lam, mu, tol).value
        except NonRegularCrossingError as exc:
            d["diagnostics"]["crossings"] = f"not regular: {exc}"
        else:
            d["diagnostics"]["crossings"] = cross
            if sign == "+" and cross != rep.value:
                _emit(dumps(d), args.out)
                raise CheckFailed(f"crossing method gives {cross}, eigenphase {rep.value}")
    return dumps(d)


def cmd_triple(args, tol: Tolerances) -> str:
    space = _space_for(args, args.alpha)
    a, b, c = _lagrangians(space, tol, alpha=args.alpha, beta=args.beta, gamma=args.gamma)
    i = triple_index(a, b, c, tol)
    j = triple_index_via_delta(a, b, c, tol).value
    d = {"value": i, "method": "q-form", "diagnostics": {"via_transversal": j, "agree": i == j}}
    if i != j:
        _emit(dumps(d), args.out)
        raise CheckFailed(f"triple index formulas disagree: {i} vs {j}")
    return dumps(d)


def cmd_hormander(args, tol: Tolerances) -> str:
    space = _space_for(args, args.l1)
    l1, l2, m1, m2 = _lagrangians(space, tol, l1=args.l1, l2=args.l2, m1=args.m1, m2=args.m2)
    try:
        alg = hormander_index(l1, l2, m1, m2, tol)
    except InconsistentIndexError as exc:
        raise CheckFailed(str(exc)) from None
    p = hormander_via_paths(l1, l2, m1, m2, tol).value
    diag = {"first_formula": alg.diagnostics["first"], "second_formula": alg.diagnostics["second"],
            "paths": p, "agree": p == alg.value}
    d = {"value": alg.value, "method": "triple-index", "diagnostics": diag}
    if p != alg.value:
        _emit(dumps(d), args.out)
        raise CheckFailed(f"path method gives {p}, triple-index formulas {alg.value}")
    return dumps(d)


def cmd_audit(args, tol: Tolerances) -> str:
    if args.seeds < 1:
        raise InputError("--seeds must be positive")
    if args.n < 1:
        raise InputError("--n must be positive")
    seeds = range(args.seed, args.seed + args.seeds)
    report = run_suite(args.suite, seeds, args.n, tol)
    if args.jsonl:
        Path(args.jsonl).write_text(report.to_jsonl(), encoding="utf-8")
    summary = report.summary()
    bad = sum(v["total"] - v["passed"] for v in summary.values())
    total = sum(v["total"] for v in summary.values())
    sys.stderr.write(f"{args.suite}: {total - bad}/{total} checks passed over {args.seeds} seeds at n={args.n}\n")
    for inst, c in report.failures()[:20]:
        sys.stderr.write(f"  FAIL {inst} {c.name}: {c.lhs} {c.relation} {c.rhs_text()}\n")
    text = report.to_csv()
    if bad:
        _emit(text, args.out)
        raise CheckFailed(f"{bad} failed checks")
    return text


def _rotation_reference(cfg) -> Optional[float]:
    """``m a / 2 pi`` when the field is the constant ``a |J|``; otherwise ``None``."""
    terms = cfg.field.terms
    if len(terms) != 1 or any(terms[0].k) or np.any(terms[0].sin):
        return None
    absJ = cfg.field.space.abs_J
    a = float(np.real(np.trace(terms[0].cos @ np.linalg.inv(absJ)))) / cfg.field.space.dim
    if np.linalg.norm(terms[0].cos - a * absJ) > 1e-10 * max(1.0, np.linalg.norm(absJ)):
        return None
    return cfg.field.space.dim * a / (2 * np.pi)


def cmd_mean_index(args, tol: Tolerances) -> str:
    cfg = config_from_json(read_json(args.config))
    reports = cfg.run(tol)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["xi_id", "tau", "i_tau", "ratio", "band_lo", "band_hi"])
    for j, rep in enumerate(reports):
        for t, i, r, lo, hi in zip(rep.taus, rep.indices, rep.ratios, rep.band_lo, rep.band_hi):
            w.writerow([j, repr(t), i, repr(r), lo, hi])
    ref = _rotation_reference(cfg)
    tau_max = cfg.schedule[-1]
    m = cfg.field.space.dim
    summary = {
        "c": reports[0].c,
        "m": m,
        "step": reports[0].step,
        "tau_max": tau_max,
        "points": [dict(rep.to_dict(), xi_id=j) for j, rep in enumerate(reports)],
        "all_in_band": all(r.in_band for r in reports),
        "all_cauchy_within_allowance": all(r.cauchy_ok for r in reports),
    }
    ok = summary["all_in_band"]
    if ref is not None:
        dev = max(abs(r.estimate - ref) for r in reports)
        summary["rotation_reference"] = ref
        summary["max_deviation_from_reference"] = dev
        summary["reference_within_m_over_tau"] = bool(dev <= m / tau_max + 1e-12)
        ok = ok and summary["reference_within_m_over_tau"]
    if args.summary:
        Path(args.summary).write_text(dumps(summary), encoding="utf-8")
    elif args.out:
        Path(str(args.out) + ".summary.json").write_text(dumps(summary), encoding="utf-8")
    else:
        sys.stderr.write(dumps(summary))
    text = buf.getvalue()
    if not ok:
        _emit(text, args.out)
        raise CheckFailed("a value left its a-priori band")
    return text


# ----------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse's own exit code is 2 already
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=float, help="relative singular-value cut for ranks")
    common.add_argument("--tol-inertia", type=float, help="relative eigenvalue cut for inertia")
    common.add_argument("--tol-int", type=float, help="snapping window for phase/2pi near integers")
    common.add_argument("--seed", type=int, default=0, help="first seed (audit) or base seed")
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--J", help="matrix file with J (standard structure when omitted)")

    p = _Parser(prog="sik", description="Maslov, triple and Hormander indices; property audits; mean index.")
    p.add_argument("--version", action="version", version=f"sik {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    q = sub.add_parser("index", parents=[common], help="Maslov-type index i_W of a symplectic path")
    q.add_argument("--path", required=True)
    q.add_argument("--W", help="Lagrangian of the doubled space (graph of the identity when omitted)")

    q = sub.add_parser("maslov", parents=[common], help="Maslov index of a pair of Lagrangian paths")
    q.add_argument("--lam", required=True)
    q.add_argument("--mu", required=True)
    q.add_argument("--sign", choices=["+", "-"], default="+")
    q.add_argument("--method", choices=["eigenphase", "both"], default="eigenphase")

    q = sub.add_parser("triple", parents=[common], help="triple index i(alpha, beta, gamma)")
    for name in ("alpha", "beta", "gamma"):
        q.add_argument(f"--{name}", required=True)

    q = sub.add_parser("hormander", parents=[common], help="Hormander index s(l1, l2; m1, m2)")
    for name in ("l1", "l2", "m1", "m2"):
        q.add_argument(f"--{name}", required=True)

    q = sub.add_parser("audit", parents=[common], help="run a property suite")
    q.add_argument("--suite", required=True, choices=SUITES)
    q.add_argument("--seeds", type=int, default=100, help="number of seeds")
    q.add_argument("--n", type=int, default=2, help="half-dimension")
    q.add_argument("--jsonl", help="also write one JSON record per instance here")

    q = sub.add_parser("mean-index", parents=[common], help="mean-index experiment from a config file")
    q.add_argument("--config", required=True)
    q.add_argument("--summary", help="JSON summary path (default: <out>.summary.json, or stderr)")
    return p


_COMMANDS = {
    "index": cmd_index,
    "maslov": cmd_maslov,
    "triple": cmd_triple,
    "hormander": cmd_hormander,
    "audit": cmd_audit,
    "mean-index": cmd_mean_index,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = _tolerances(args)
        text = _COMMANDS[args.verb](args, tol)
    except InputError as exc:
        sys.stderr.write(f"sik {args.verb}: input error: {exc}\n")
        return 2
    except (FormConstructionError, ValueError) as exc:
        sys.stderr.write(f"sik {args.verb}: input error: {exc}\n")
        return 2
    except CheckFailed as exc:
        sys.stderr.write(f"sik {args.verb}: check failed: {exc}\n")
        return 1
    except TrackingError as exc:
        sys.stderr.write(f"sik {args.verb}: eigenphase tracking failed: {exc}\n")
        return 1
    _emit(text, args.out)
    return 0


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


__all__ = ["build_parser", "main", "run"]
