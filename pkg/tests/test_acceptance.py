"""Acceptance criteria; each test prints one ``ACCEPTANCE <k> PASS|FAIL`` line.

Counts, tolerances and time limits are fixed here and must not be relaxed
to make a run pass.
"""
import json
import math
import time
from pathlib import Path

import numpy as np

from sik.audit import (
    analytic_pair,
    law_dual_maslov,
    law_hormander,
    law_q_isotropic,
    law_q_lagrangian,
    law_triple,
    law_two_repeat,
    run_suite,
)
from sik.indices import e_ceil, hormander_index, hormander_via_paths, maslov_type_index
from sik.instances import isotropic_triple, lagrangian_family
from sik.io import config_from_json
from sik.mean_index import (
    FieldSpec,
    FlowSpec,
    default_step,
    flow_invariance_audit,
    monotonicity_audit,
    subadditivity_audit,
)
from sik.paths import rotation_path
from sik.report import AuditReport
from sik.symplectic import SymplecticSpace, dim_intersection
from sik.symplectic import _rng

CONFIGS = Path(__file__).resolve().parents[1] / "scripts" / "configs"


def _load(name):
    return config_from_json(json.loads((CONFIGS / name).read_text()))


def _first_failures(report: AuditReport, k: int = 3) -> str:
    return "; ".join(f"{i} {c.name}: {c.lhs} {c.relation} {c.rhs_text()}" for i, c in report.failures()[:k])


def test_rotation_closed_form(acceptance):
    t0 = time.perf_counter()
    bad = []
    cases = 0
    for n in (1, 2, 3):
        V = SymplecticSpace.standard(n)
        for c in (-2.5, -1.0, 1.0, 2.5, 2 * math.pi):
            for tau in (0.5, 1.0, 3.0):
                got = maslov_type_index(rotation_path(V, c, tau)).value
                want = 2 * n * e_ceil(c * tau / (2 * math.pi))
                cases += 1
                if got != want:
                    bad.append((2 * n, c, tau, got, want))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10.0
    acceptance(1, "rotation paths match m*E(c*tau/2pi)", ok,
               f"{cases - len(bad)}/{cases} exact, {dt:.2f}s of 10s" + (f"; first miss {bad[0]}" if bad else ""))
    assert not bad
    assert dt < 10.0


def test_hormander_three_ways(acceptance):
    t0 = time.perf_counter()
    bad = []
    degenerate = 0
    for n in (1, 2, 3, 4):
        V = SymplecticSpace.standard(n)
        for s in range(200):
            quad = lagrangian_family(V, 4, 10_000 * n + s)
            if any(dim_intersection(a, b) for i, a in enumerate(quad) for b in quad[i + 1:]):
                degenerate += 1
            h = hormander_index(*quad)
            p = hormander_via_paths(*quad).value
            if not (h.diagnostics["first"] == h.diagnostics["second"] == p):
                bad.append((n, s, h.diagnostics["first"], h.diagnostics["second"], p))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120.0
    acceptance(2, "Hormander index: two triple formulas and the path method agree", ok,
               f"{800 - len(bad)}/800 quadruples, {degenerate} with shared directions, {dt:.1f}s of 120s"
               + (f"; first miss {bad[0]}" if bad else ""))
    assert not bad
    assert dt < 120.0


def test_identity_suite(acceptance):
    t0 = time.perf_counter()
    report = AuditReport()
    for n in (1, 2, 3, 4):
        V = SymplecticSpace.standard(n)
        for s in range(100):
            rng = _rng(20_000 * n + s)
            a, b, c, d, e = lagrangian_family(V, 5, rng)
            tag = f"n={n}/seed={s}/"
            for rec in (law_triple(a, b, c, rng), law_hormander(a, b, c, d, e, paths=False),
                        law_two_repeat(a, b, c)):
                rec.instance = tag + rec.instance
                report.add(rec)
    dt = time.perf_counter() - t0
    checks = report.checks
    fails = report.failures()
    acceptance(3, "triple repeats, adjacent/opposite/front-back, repeated-endpoint bounds", not fails,
               f"{len(checks) - len(fails)}/{len(checks)} checks over 100 seeds x n=1..4, {dt:.1f}s"
               + (f"; {_first_failures(report)}" if fails else ""))
    assert not fails


def test_q_form_laws(acceptance):
    report = AuditReport()
    shared = 0
    for n in (1, 2, 3, 4):
        V = SymplecticSpace.standard(n)
        for s in range(100):
            rng = _rng(30_000 * n + s)
            # every fourth triple is forced to share a subspace
            a, b, c = lagrangian_family(V, 3, rng, degenerate=True if s % 4 == 0 else None)
            if dim_intersection(a, b) or dim_intersection(a, c) or dim_intersection(b, c):
                shared += 1
            tag = f"n={n}/seed={s}/"
            for rec in (law_q_isotropic(*isotropic_triple(V, rng)), law_q_lagrangian(a, b, c)):
                rec.instance = tag + rec.instance
                report.add(rec)
    fails = report.failures()
    ok = not fails and shared >= 100
    acceptance(4, "Q-form cyclic inertia, kernel span, dimension bound", ok,
               f"{len(report.checks) - len(fails)}/{len(report.checks)} checks, 400 triples, {shared} degenerate"
               + (f"; {_first_failures(report)}" if fails else ""))
    assert not fails
    assert shared >= 100


def test_dual_method_maslov(acceptance):
    report = AuditReport()
    touching = 0
    for k in range(50):
        n = 1 + k % 3
        V = SymplecticSpace.standard(n)
        lam, mu = analytic_pair(V, 40_000 + k)
        if dim_intersection(lam.subspace(lam.a), mu) or dim_intersection(lam.subspace(lam.b), mu):
            touching += 1
        rec = law_dual_maslov(lam, mu, instance=f"n={n}/path={k}")
        report.add(rec)
    fails = report.failures()
    acceptance(5, "crossing-form method equals eigenphase method; endpoint identity", not fails,
               f"{50 - len({i for i, _ in fails})}/50 paths, {touching} meeting mu at an endpoint"
               + (f"; {_first_failures(report)}" if fails else ""))
    assert not fails


def test_iteration_audits(acceptance):
    t0 = time.perf_counter()
    report = AuditReport()
    for n in (1, 2, 3):
        report.extend(run_suite("section4", range(100), n))
    dt = time.perf_counter() - t0
    fails = report.failures()
    ok = not fails and dt < 600.0
    acceptance(6, "iteration, brake and L0 audits", ok,
               f"{len(report.checks) - len(fails)}/{len(report.checks)} checks, 100 seeds x n=1..3, {dt:.0f}s of 600s"
               + (f"; {_first_failures(report)}" if fails else ""))
    assert not fails
    assert dt < 600.0


def test_mean_index(acceptance):
    t0 = time.perf_counter()
    const = _load("constant_rotation.json")
    assert const.field.space.dim == 4
    (rep,) = const.run()
    m = const.field.space.dim
    c = 2.5
    ref = m * c / (2 * math.pi)
    tau_max = const.schedule[-1]
    dev = abs(rep.estimate - ref)
    ok_a = tau_max == 2 ** 10 and dev <= m / tau_max

    quasi = _load("quasi_periodic.json")
    assert quasi.field.space.dim == 4
    reps = quasi.run()
    ok_b = all(r.in_band for r in reps) and all(r.cauchy_ok for r in reps)
    worst_gap = max(g / a for r in reps for g, a in zip(r.cauchy_gaps, r.cauchy_allowances))

    shift = AuditReport()
    for xi in quasi.xi:
        shift.extend(flow_invariance_audit(quasi.flow, quasi.field, xi, [1.0, 5.0], quasi.schedule[-1],
                                           quasi.step))
    ok_c = shift.passed
    dt = time.perf_counter() - t0
    ok = ok_a and ok_b and ok_c and dt < 300.0
    acceptance(7, "mean index: constant reference, band and Cauchy gaps, shift invariance", ok,
               f"(a) |F-mc/2pi|={dev:.2e} vs m/tau={m / tau_max:.2e}; "
               f"(b) {len(reps)} points in band={all(r.in_band for r in reps)}, worst gap/allowance={worst_gap:.2f}; "
               f"(c) {len(shift.checks) - len(shift.failures())}/{len(shift.checks)} shift checks; {dt:.0f}s of 300s")
    assert ok_a, (rep.estimate, ref)
    assert ok_b
    assert ok_c, _first_failures(shift)
    assert dt < 300.0


def test_monotone_and_subadditive(acceptance):
    flow = FlowSpec((1.0, math.sqrt(2.0)))
    mono, sub = AuditReport(), AuditReport()
    for k in range(50):
        rng = _rng(50_000 + k)
        n = 1 + k % 2
        V = SymplecticSpace.standard(n)
        low = FieldSpec.random(V, 2, rng, modes=2, scale=float(rng.uniform(0.2, 0.8)),
                               offset=float(rng.uniform(-1.5, 1.5)))
        if k % 5 == 0:
            low = FieldSpec.scaled_abs_j(V, float(rng.uniform(-3, 3)), 2)
        bump = float(rng.uniform(0.01, 1.0)) * np.eye(V.dim)
        high = low.shifted(bump)
        xi = rng.random(2)
        tau = float(rng.choice([4.0, 8.0, 16.0]))
        mono.extend(monotonicity_audit(flow, low, high, xi, tau, instance=f"monotone/{k}"))

        step = default_step(flow, low)
        grid = int(8.0 / step)
        pairs = [(step * int(rng.integers(0, grid)), step * int(rng.integers(0, grid))) for _ in range(2)]
        for r in subadditivity_audit(flow, low, xi, pairs, step).records:
            r.instance = f"subadditive/{k}/" + r.instance
            sub.add(r)
    fm, fs = mono.failures(), sub.failures()
    ok = not fm and not fs
    acceptance(8, "monotonicity under ordered fields; subadditivity splits", ok,
               f"monotone {50 - len(fm)}/50 instances, subadditive {len(sub.checks) - len(fs)}/{len(sub.checks)} checks"
               + (f"; {_first_failures(mono)} {_first_failures(sub)}" if not ok else ""))
    assert not fm
    assert not fs

