"""Seeded property suites.

Each law below takes concrete inputs and returns an :class:`AuditRecord` of
named checks.  The suites draw inputs from :mod:`sik.instances` per seed and
collect the records into an :class:`AuditReport`, ordered by seed whatever
the number of worker threads.

* ``section2``: Maslov index of pairs and Maslov-type index of paths.
* ``section3``: the form ``Q``, triple and Hormander indices.
* ``section4``: iteration and brake-symmetry statements.
* ``section5``: index along flows (subadditivity, ordering, shift bounds).
"""
from __future__ import annotations

import math
import os
import traceback
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .forms import form_on_basis, inertia, q_derivative_form, q_form, q_inertia
from .indices import (
    e_ceil,
    graph_nullity,
    hormander_index,
    hormander_via_paths,
    maslov_index,
    maslov_index_crossings,
    maslov_type_index,
    triple_index,
    triple_index_via_delta,
)
from .instances import (
    audit_path,
    doubled_lagrangian,
    isotropic_triple,
    l0_pair,
    lagrangian_family,
    lagrangian_meeting,
)
from .iteration import (
    BrakeStructure,
    audit_alpha2_alpha1,
    audit_brake_inequalities,
    audit_gcd_bounds,
    audit_iteration_bounds,
    audit_s_beta_alpha,
    audit_s_l0,
)
from .mean_index import (
    FieldSpec,
    FlowSpec,
    default_step,
    flow_invariance_audit,
    monotonicity_audit,
    subadditivity_audit,
)
from .paths import FunctionPath, GraphPath, LagrangianPath, geodesic_lagrangian_path, pointwise_product, rotation_path
from .report import AuditRecord, AuditReport, Check, check_eq, check_ge, check_in, check_le
from .symplectic import (
    DEFAULT_TOL,
    IsotropicReduction,
    SubspaceFrame,
    SymplecticSpace,
    Tolerances,
    _rng,
    apply,
    dim_intersection,
    doubled_space,
    intersect,
    random_hermitian,
    random_isotropic,
    random_lagrangian,
    random_lagrangian_containing,
    random_symplectic,
    rotate_lagrangian,
    same_subspace,
    subspace_sum,
)

SUITES = ("section2", "section3", "section4", "section5")


def _dim3(a, b, c, tol) -> int:
    return dim_intersection(intersect(a, b, tol), c, tol)


# =================================================== Maslov index (pairs/paths)


def analytic_pair(space: SymplecticSpace, seed, scale: float = 3.0) -> tuple:
    """``s -> exp(sA) L0`` against a fixed Lagrangian; sometimes touching at ``s = 0``."""
    rng = _rng(seed)
    A = -space.Jinv @ random_hermitian(space.dim, rng, scale)
    L0 = random_lagrangian(space, rng).cols
    lam = LagrangianPath(space, lambda s: sla.expm(A * s) @ L0, 0.0, 1.0, np.linspace(0.0, 1.0, 129))
    if rng.random() < 0.3:
        mu = lagrangian_meeting(SubspaceFrame(space, L0), rng)
    else:
        mu = random_lagrangian(space, rng)
    return lam, mu


def law_dual_maslov(lam: LagrangianPath, mu: SubspaceFrame, tol: Tolerances = DEFAULT_TOL,
                    instance: str = "dual-maslov") -> AuditRecord:
    plus = maslov_index(lam, mu, tol).value
    minus = maslov_index(lam, mu, tol, sign="-").value
    cross = maslov_index_crossings(lam, mu, tol).value
    da = dim_intersection(lam.subspace(lam.a), mu, tol)
    db = dim_intersection(lam.subspace(lam.b), mu, tol)
    return AuditRecord(instance, [
        check_eq("crossings=eigenphase", cross, plus),
        check_eq("plus-minus=endpoint-dims", plus - minus, da - db),
    ], {"mas_plus": plus, "mas_minus": minus})


def law_closed_form(space: SymplecticSpace, c: float, tau: float, tol: Tolerances = DEFAULT_TOL,
                    instance: str = "rotation") -> AuditRecord:
    i1 = maslov_type_index(rotation_path(space, c, tau), tol=tol).value
    return AuditRecord(instance, [check_eq("rotation-closed-form", i1, space.dim * e_ceil(c * tau / (2 * np.pi)))],
                       {"c": c, "tau": tau})


def law_multiplicativity(g1, g2, g3, W: SubspaceFrame, tol: Tolerances = DEFAULT_TOL,
                         instance: str = "product") -> AuditRecord:
    """``i_W(g3 g2 g1) = i_W'(g2) + i_W(g3 g2(0) g1)`` with ``W' = diag(g1(1), g3(1)^{-1}) W``."""
    space = g1.source
    D = doubled_space(space)
    lhs = maslov_type_index(pointwise_product([g1, g2, g3]), W.cols, tol).value
    G20 = g2(0.0)
    frozen = FunctionPath(space, lambda t: g3(t) @ G20 @ g1(t), g1.tau,
                          np.unique(np.concatenate([g1.tracking_grid(), g3.tracking_grid()])))
    T = sla.block_diag(g1.end, np.linalg.inv(g3.end))
    Wp = apply(T, W, D, tol)
    rhs = maslov_type_index(g2, Wp.cols, tol).value + maslov_type_index(frozen, W.cols, tol).value
    return AuditRecord(instance, [check_eq("product-splitting", lhs, rhs)])


def law_stability(path, W: Optional[SubspaceFrame], seed, eps: float = 1e-4,
                  tol: Tolerances = DEFAULT_TOL, instance: str = "perturb") -> AuditRecord:
    """A perturbation ``gamma(t) exp(t eps A)`` moves ``i_W`` by at most ``nu_W``, upward."""
    rng = _rng(seed)
    space = path.source
    A = -space.Jinv @ random_hermitian(space.dim, rng)
    A *= eps / np.linalg.norm(A, 2)
    near = FunctionPath(space, lambda t: path(t) @ sla.expm(A * t), path.tau, path.tracking_grid())
    Wc = None if W is None else W.cols
    i0 = maslov_type_index(path, Wc, tol).value
    i1 = maslov_type_index(near, Wc, tol).value
    nu = graph_nullity(path.end, W, path.source, path.target, tol)
    return AuditRecord(instance, [check_in("perturbation-window", i1 - i0, 0, nu)],
                       {"i": i0, "i_perturbed": i1, "nu": nu})


def law_symplectic_invariance(lam: LagrangianPath, mu: SubspaceFrame, T: np.ndarray,
                              tol: Tolerances = DEFAULT_TOL, instance: str = "transport") -> AuditRecord:
    space = lam.space
    moved = LagrangianPath(space, lambda s: T @ lam.frame(s), lam.a, lam.b, lam.grid)
    a = maslov_index(lam, mu, tol).value
    b = maslov_index(moved, apply(T, mu, tol=tol), tol).value
    return AuditRecord(instance, [check_eq("symplectic-invariance", b, a)])


def law_tangent_form(path, t: float, tol: Tolerances = DEFAULT_TOL,
                     instance: str = "tangent-form") -> AuditRecord:
    """Derivative form of a graph path: generator formula against finite differences."""
    g = GraphPath(path)
    an = q_derivative_form(g, t, tol, method="analytic")
    fd = q_derivative_form(g, t, tol, method="fd")
    F = an.basis.cols
    diff = float(np.max(np.abs(form_on_basis(an, F) - form_on_basis(fd, F))))
    scale = max(1.0, float(np.max(np.abs(an.matrix))))
    return AuditRecord(instance, [check_le("tangent-form-two-ways", diff / scale, 1e-6)])


def section2_instance(n: int, seed: int, tol: Tolerances = DEFAULT_TOL) -> List[AuditRecord]:
    rng = _rng(seed)
    V = SymplecticSpace.standard(n)
    D = doubled_space(V)
    lam, mu = analytic_pair(V, rng)
    c = float(rng.choice([-2.5, -1.0, 1.0, 2.5, 2 * np.pi, rng.uniform(-7, 7)]))
    tau = float(rng.choice([0.5, 1.0, 3.0]))
    g1, g2, g3 = audit_path(V, rng), audit_path(V, rng), audit_path(V, rng)
    g2 = g2.shifted_start(random_symplectic(V, rng, 0.5, factors=1))
    W = random_lagrangian(D, rng)
    stab_W = None if rng.random() < 0.5 else W
    return [
        law_dual_maslov(lam, mu, tol),
        law_closed_form(V, c, tau, tol),
        law_multiplicativity(g1, g2, g3, W, tol),
        law_stability(g1, stab_W, rng, tol=tol),
        law_symplectic_invariance(lam, mu, random_symplectic(V, rng, 0.5), tol),
        law_tangent_form(g1, float(rng.uniform(0.05, 0.95)), tol),
    ]


# ================================================= the form Q and triple index


def law_q_isotropic(alpha, beta, gamma, tol: Tolerances = DEFAULT_TOL,
                    instance: str = "q-isotropic") -> AuditRecord:
    """Hermitian output, cyclic inertia, antisymmetry in the last two slots."""
    Q1 = q_form(alpha, beta, gamma, tol)
    Q2 = q_form(beta, gamma, alpha, tol)
    Q3 = q_form(gamma, alpha, beta, tol)
    Qt = q_form(alpha, gamma, beta, tol)
    I1, I2, I3 = inertia(Q1, tol), inertia(Q2, tol), inertia(Q3, tol)
    scale = max(1.0, float(np.max(np.abs(Q1.matrix))) if Q1.dim else 1.0)
    herm = float(np.max(np.abs(Q1.matrix - Q1.matrix.conj().T))) if Q1.dim else 0.0
    anti = (float(np.max(np.abs(form_on_basis(Qt, Q1.basis.cols) + Q1.matrix))) if Q1.dim else 0.0)
    return AuditRecord(instance, [
        check_eq("cyclic:plus(1)=plus(2)", I1.plus, I2.plus),
        check_eq("cyclic:plus(2)=plus(3)", I2.plus, I3.plus),
        check_eq("cyclic:minus(1)=minus(2)", I1.minus, I2.minus),
        check_eq("cyclic:minus(2)=minus(3)", I2.minus, I3.minus),
        check_eq("swap:same-domain", Qt.dim, Q1.dim),
        check_le("swap:antisymmetric", anti / scale, 1e-8),
        check_le("hermitian", herm / scale, 1e-8),
    ], {"inertia": [I1.as_tuple(), I2.as_tuple(), I3.as_tuple()]})


def law_q_lagrangian(alpha, beta, gamma, tol: Tolerances = DEFAULT_TOL,
                     instance: str = "q-lagrangian") -> AuditRecord:
    """Kernel span and the dimension inequality with its equality case."""
    n = alpha.space.n
    Q = q_form(alpha, beta, gamma, tol)
    ker = Q.kernel(tol)
    expected = subspace_sum(intersect(alpha, beta, tol), intersect(alpha, gamma, tol), tol)
    ab, ag, bg = (dim_intersection(x, y, tol) for x, y in ((alpha, beta), (alpha, gamma), (beta, gamma)))
    abc = _dim3(alpha, beta, gamma, tol)
    zero_form = inertia(Q, tol).zero == Q.dim
    lhs, rhs = ab + ag + bg, n + 2 * abc
    return AuditRecord(instance, [
        check_eq("kernel-span", int(same_subspace(ker, expected, tol)), 1),
        check_le("dimension-bound", lhs, rhs),
        check_eq("equality-iff-zero-form", int(lhs == rhs), int(zero_form)),
    ], {"dims": [ab, ag, bg, abc], "q_dim": Q.dim})


def law_q_reduction(alpha, beta, gamma, seed, tol: Tolerances = DEFAULT_TOL,
                    instance: str = "q-reduction") -> AuditRecord:
    """``Q`` is unchanged by symplectic reduction along a subspace of ``beta``."""
    rng = _rng(seed)
    k = int(rng.integers(0, beta.k + 1))
    C = rng.standard_normal((beta.k, k)) + 1j * rng.standard_normal((beta.k, k))
    eps = SubspaceFrame(beta.space, np.linalg.qr(beta.cols @ C)[0] if k else np.zeros((beta.space.dim, 0)))
    red = IsotropicReduction(eps, tol)
    dom = intersect(intersect(alpha, subspace_sum(beta, gamma, tol), tol), red.eps_omega, tol)
    Q = q_form(alpha, beta, gamma, tol)
    Qr = q_form(red.project(alpha), red.project(beta), red.project(gamma), tol)
    if dom.k == 0:
        return AuditRecord(instance, [check_eq("reduction:domain", 0, 0)], {"eps": k})
    before = form_on_basis(Q, dom.cols)
    after = form_on_basis(Qr, red.coords(dom.cols))
    scale = max(1.0, float(np.max(np.abs(before))))
    diff = float(np.max(np.abs(before - after))) / scale
    ib, ia = inertia(before, tol), inertia(after, tol)
    return AuditRecord(instance, [
        check_le("reduction:values", diff, 1e-8),
        check_eq("reduction:plus", ia.plus, ib.plus),
        check_eq("reduction:minus", ia.minus, ib.minus),
    ], {"eps": k, "domain": dom.k})


def law_triple(alpha, beta, gamma, seed, tol: Tolerances = DEFAULT_TOL,
               instance: str = "triple") -> AuditRecord:
    """Both triple-index formulas, two transversal choices, upper bound and repeats."""
    rng = _rng(seed)
    n = alpha.space.n
    i = triple_index(alpha, beta, gamma, tol)
    d1 = triple_index_via_delta(alpha, beta, gamma, tol).value
    d2 = None
    for _ in range(16):
        delta = random_lagrangian(alpha.space, rng)
        try:
            d2 = triple_index_via_delta(alpha, beta, gamma, tol, delta=delta, margin=1e-3).value
            break
        except ValueError:
            continue
    ab, bg = dim_intersection(alpha, beta, tol), dim_intersection(beta, gamma, tol)
    checks = [
        check_eq("two-formulas", d1, i),
        check_le("upper-bound", i, n - ab - bg + _dim3(alpha, beta, gamma, tol)),
        check_ge("non-negative", i, 0),
        check_eq("repeat:first-two", triple_index(alpha, alpha, beta, tol), 0),
        check_eq("repeat:last-two", triple_index(beta, alpha, alpha, tol), 0),
        check_eq("repeat:outer", triple_index(alpha, beta, alpha, tol), n - ab),
    ]
    if d2 is not None:
        checks.append(check_eq("delta-independence", d2, d1))
    return AuditRecord(instance, checks, {"i": i})


def law_hormander(l1, l2, m1, m2, m3, tol: Tolerances = DEFAULT_TOL, paths: bool = True,
                  instance: str = "hormander") -> AuditRecord:
    """Three evaluations of ``s`` plus additivity, antisymmetry and the front/back swap."""
    s = hormander_index(l1, l2, m1, m2, tol)
    checks = [check_eq("two-triple-formulas", s.diagnostics["first"], s.diagnostics["second"])]
    data = {"s": s.value}
    if paths:
        p = hormander_via_paths(l1, l2, m1, m2, tol).value
        checks.append(check_eq("paths=triples", p, s.value))
        data["paths"] = p
    s12 = s.value
    s23 = hormander_index(l1, l2, m2, m3, tol).value
    s13 = hormander_index(l1, l2, m1, m3, tol).value
    s21 = hormander_index(l1, l2, m2, m1, tol).value
    back = hormander_index(m1, m2, l1, l2, tol).value
    corr = sum((-1) ** (j + k + 1) * dim_intersection(lj, mk, tol)
               for j, lj in ((1, l1), (2, l2)) for k, mk in ((1, m1), (2, m2)))
    checks += [
        check_eq("additive-last-pair", s13, s12 + s23),
        check_eq("antisymmetric-last-pair", s21, -s12),
        check_eq("front-back", s12 + back, corr),
    ]
    if all(dim_intersection(l, m, tol) == 0 for l in (l1, l2) for m in (m1, m2)):
        mm = q_inertia(l1, l2, m1, tol).minus - q_inertia(l1, l2, m2, tol).minus
        checks.append(check_eq("transversal-formula", s12, mm))
    return AuditRecord(instance, checks, data)


def law_two_repeat(la, lb, mu, tol: Tolerances = DEFAULT_TOL, instance: str = "endpoint-repeat") -> AuditRecord:
    """Hormander index with a repeated endpoint, and the resulting Maslov sandwich."""
    n = la.space.n
    s_a = hormander_index(la, lb, la, mu, tol).value
    s_b = hormander_index(la, lb, lb, mu, tol).value
    i_bam = triple_index(lb, la, mu, tol)
    i_abm = triple_index(la, lb, mu, tol)
    abm = _dim3(la, lb, mu, tol)
    bm = dim_intersection(lb, mu, tol)
    ab, am = dim_intersection(la, lb, tol), dim_intersection(la, mu, tol)
    lam = geodesic_lagrangian_path(la, lb)
    mas_b = maslov_index(lam, lb, tol).value
    mas_m = maslov_index(lam, mu, tol).value
    mas_a = maslov_index(lam, la, tol).value
    return AuditRecord(instance, [
        check_eq("repeat-first:value", s_a, -i_bam),
        check_le("repeat-first:upper", s_a, abm - bm),
        check_le("repeat-first:upper<=0", abm - bm, 0),
        check_ge("repeat-first:lower", s_a, ab + am - abm - n),
        check_eq("repeat-second:value", s_b, i_abm),
        check_ge("repeat-second:sign", s_b, 0),
        check_le("sandwich:lower", mas_b, mas_m),
        check_le("sandwich:upper", mas_m, mas_a),
    ], {"s_a": s_a, "s_b": s_b, "mas": [mas_b, mas_m, mas_a]})


def law_partial_transversal(la, lb, alpha, tol: Tolerances = DEFAULT_TOL,
                            instance: str = "partial-transversal") -> AuditRecord:
    """For ``alpha`` transversal to both ends: ``s(alpha, la; la, lb) = m^-(Q(la, alpha; lb))``."""
    s = hormander_index(alpha, la, la, lb, tol).value
    m = q_inertia(la, alpha, lb, tol).minus
    lam = geodesic_lagrangian_path(la, lb)
    lhs = maslov_index(LagrangianPath.constant_path(la), lam, tol).value
    rhs = maslov_index(LagrangianPath.constant_path(alpha), lam, tol).value + m
    return AuditRecord(instance, [check_eq("partial-transversal:s", s, m),
                                  check_eq("partial-transversal:mas", lhs, rhs)])


def law_small_rotation(la, lb, ma, mb, s: float = 1e-5, tol: Tolerances = DEFAULT_TOL,
                       instance: str = "small-rotation") -> AuditRecord:
    base = hormander_index(la, lb, ma, mb, tol).value
    moved = hormander_index(la, lb, rotate_lagrangian(ma, s), rotate_lagrangian(mb, s), tol).value
    return AuditRecord(instance, [check_eq("rotated-second-pair", moved, base)])


def _transversal_to(space, others, rng, tol, tries: int = 32):
    for _ in range(tries):
        a = random_lagrangian(space, rng)
        if all(dim_intersection(a, o, tol) == 0 for o in others):
            return a
    return None


def section3_instance(n: int, seed: int, tol: Tolerances = DEFAULT_TOL,
                      paths: bool = True) -> List[AuditRecord]:
    rng = _rng(seed)
    V = SymplecticSpace.standard(n)
    iso = isotropic_triple(V, rng)
    a, b, c, d = lagrangian_family(V, 4, rng)
    e = lagrangian_family(V, 1, rng)[0] if rng.random() < 0.5 else random_lagrangian_containing(
        random_isotropic(V, 1, rng), rng)
    recs = [
        law_q_isotropic(*iso, tol),
        law_q_lagrangian(a, b, c, tol),
        law_q_reduction(a, b, c, rng, tol),
        law_triple(a, b, c, rng, tol),
        law_hormander(a, b, c, d, e, tol, paths=paths),
        law_two_repeat(a, b, c, tol),
        law_small_rotation(a, b, c, d, tol=tol),
    ]
    alpha = _transversal_to(V, (a, b), rng, tol)
    if alpha is not None:
        recs.append(law_partial_transversal(a, b, alpha, tol))
    return recs


# ============================================================== iteration


def section4_instance(n: int, seed: int, tol: Tolerances = DEFAULT_TOL) -> List[AuditRecord]:
    rng = _rng(seed)
    V = SymplecticSpace.standard(n)
    br = BrakeStructure.standard(V)
    g1 = audit_path(V, rng)
    g2 = audit_path(V, rng, tau=float(rng.uniform(0.5, 1.5)))
    g3 = audit_path(V, rng)
    W = random_lagrangian(doubled_space(V), rng)
    alpha = lagrangian_family(V, 1, rng)[0]
    recs = [audit_iteration_bounds([g1, g2], tol, "iteration:two"),
            audit_iteration_bounds([g1, g2, g3], tol, "iteration:three")]
    for k1, k2 in ((1, 1), (2, 3), (2, 4)):
        recs.append(audit_gcd_bounds(g1, k1, k2, tol, f"gcd:{k1},{k2}"))
    recs.append(audit_brake_inequalities(g1, 3 + seed % 3, br, g2, alpha, W, tol, "brake"))
    recs.append(audit_alpha2_alpha1(g1, 1, br, tol, "alpha2-alpha1:k=1"))
    recs.append(audit_alpha2_alpha1(g1, 2, br, tol, "alpha2-alpha1:k=2"))
    mu1, mu2 = l0_pair(br, rng)
    lam = doubled_lagrangian(br, rng, (mu1, mu2, br.identity_graph))
    recs.append(audit_s_l0(lam, mu1, mu2, br, tol))
    beta = lagrangian_meeting(br.alpha1, rng)
    lam2 = doubled_lagrangian(br, rng, (br.tilde1, br.identity_graph))
    recs.append(audit_s_beta_alpha(lam2, beta, br, tol))
    return recs


# ============================================================ flows


def section5_instance(n: int, seed: int, tol: Tolerances = DEFAULT_TOL,
                      horizon: float = 8.0) -> List[AuditRecord]:
    rng = _rng(seed)
    V = SymplecticSpace.standard(n)
    flow = FlowSpec((1.0, math.sqrt(2.0)))
    field = FieldSpec.random(V, 2, rng, modes=2, scale=float(rng.uniform(0.2, 0.8)),
                             offset=float(rng.uniform(-1.5, 1.5)))
    xi = rng.random(2)
    step = default_step(flow, field)
    grid = int(horizon / step)
    pairs = [(step * int(rng.integers(0, grid)), step * int(rng.integers(0, grid))) for _ in range(2)]
    recs = []
    for r in subadditivity_audit(flow, field, xi, pairs, step, tol).records:
        r.instance = "subadditive:" + r.instance
        recs.append(r)
    upper = field.shifted(float(rng.uniform(0.05, 1.0)) * np.eye(V.dim))
    recs.extend(monotonicity_audit(flow, field, upper, xi, horizon, step, tol, "ordered-fields").records)
    for r in flow_invariance_audit(flow, field, xi, [1.0], horizon, step, tol).records:
        r.instance = "shift:" + r.instance
        recs.append(r)
    return recs


# ============================================================ runner


_SECTIONS: Dict[str, Callable[..., List[AuditRecord]]] = {
    "section2": section2_instance,
    "section3": section3_instance,
    "section4": section4_instance,
    "section5": section5_instance,
}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SIK_THREADS", "1")))
    except ValueError:
        return 1


def _guarded(name: str, n: int, seed: int, tol: Tolerances) -> List[AuditRecord]:
    prefix = f"{name}/n={n}/seed={seed}/"
    try:
        recs = _SECTIONS[name](n, seed, tol)
    except Exception as exc:  # a crash is a failed instance, never a silent skip
        return [AuditRecord(prefix + "error", [Check("no-exception", 1, 0, "==", False)],
                            {"error": f"{type(exc).__name__}: {exc}",
                             "trace": traceback.format_exc(limit=3)})]
    for r in recs:
        r.instance = prefix + r.instance
    return recs


def run_suite(name: str, seeds: Sequence[int], n: int, tol: Tolerances = DEFAULT_TOL,
              threads: Optional[int] = None) -> AuditReport:
    """All laws of one suite over the given seeds at half-dimension ``n``."""
    if name not in _SECTIONS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if n < 1:
        raise ValueError("n must be positive")
    threads = _threads() if threads is None else threads
    seeds = list(seeds)
    if threads > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda s: _guarded(name, n, s, tol), seeds))
    else:
        parts = [_guarded(name, n, s, tol) for s in seeds]
    return AuditReport([r for part in parts for r in part])


__all__ = [
    "SUITES",
    "analytic_pair",
    "law_closed_form",
    "law_dual_maslov",
    "law_hormander",
    "law_multiplicativity",
    "law_partial_transversal",
    "law_q_isotropic",
    "law_q_lagrangian",
    "law_q_reduction",
    "law_small_rotation",
    "law_stability",
    "law_symplectic_invariance",
    "law_tangent_form",
    "law_triple",
    "law_two_repeat",
    "run_suite",
    "section2_instance",
    "section3_instance",
    "section4_instance",
    "section5_instance",
]
