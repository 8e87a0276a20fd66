"""Iteration of symplectic paths, brake iteration and the inequalities relating
Maslov-type indices of iterated paths to those of their pieces."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .indices import (
    common_fixed_space,
    elliptic_height,
    graph_nullity,
    hormander_index,
    identity_graph,
    maslov_type_index,
    nu1,
    triple_index,
)
from .paths import FunctionPath, PiecewiseExpPath, SymplecticPath, concatenate_paths
from .report import AuditRecord, check_eq, check_ge, check_in, check_le
from .symplectic import (
    DEFAULT_TOL,
    SubspaceFrame,
    SymplecticSpace,
    Tolerances,
    annihilator,
    apply,
    diagonal_of,
    dim_intersection,
    doubled_space,
    graph_lagrangian,
    intersect,
    orth,
    product_subspace,
    require_lagrangian,
    swap_factors,
)


# ------------------------------------------------------------ concatenation


def concat(*paths: SymplecticPath) -> SymplecticPath:
    """Iteration path of ``gamma_1, ..., gamma_k`` (each starting at the identity)."""
    if len(paths) == 1 and isinstance(paths[0], (list, tuple)):
        paths = tuple(paths[0])
    for p in paths:
        if not np.allclose(p.start, np.eye(p.source.dim), atol=1e-10):
            raise ValueError("iteration pieces must start at the identity")
    return concatenate_paths(list(paths))


def iterate(path: SymplecticPath, k: int) -> SymplecticPath:
    if k < 1:
        raise ValueError("iteration count must be positive")
    return path if k == 1 else concat(*([path] * k))


@dataclass
class IterationData:
    """Endpoint maps ``M_l`` and the partial products ``M~_l = M_l ... M_1``."""
    durations: List[float]
    M: List[np.ndarray]

    @classmethod
    def from_paths(cls, paths: Sequence[SymplecticPath]) -> "IterationData":
        return cls([p.tau for p in paths], [p.end for p in paths])

    @cached_property
    def partial(self) -> List[np.ndarray]:
        out = [self.M[0]]
        for M in self.M[1:]:
            out.append(M @ out[-1])
        return out

    @property
    def T(self) -> np.ndarray:
        return np.cumsum(self.durations)

    def A(self, tol: Tolerances = DEFAULT_TOL) -> int:
        return common_fixed_space(self.M, tol).shape[1]

    def B(self, tol: Tolerances = DEFAULT_TOL) -> int:
        k = len(self.M)
        total = 0
        for l in range(1, k):
            total += common_fixed_space([self.M[l], self.partial[l - 1]], tol).shape[1]
        for l in range(1, k - 1):
            total -= nu1(self.partial[l], tol)
        return total


# ------------------------------------------------------------ brake symmetry


class BrakeStructure:
    """A splitting ``V = alpha1 + alpha2`` into transversal Lagrangians and the
    anti-symplectic involution ``N = (-1 on alpha1) + (1 on alpha2)``."""
    def __init__(self, alpha1: SubspaceFrame, alpha2: SubspaceFrame, tol: Tolerances = DEFAULT_TOL):
        require_lagrangian(alpha1, "alpha1", tol)
        require_lagrangian(alpha2, "alpha2", tol)
        if dim_intersection(alpha1, alpha2, tol):
            raise ValueError("alpha1 and alpha2 must be transversal")
        self.space = alpha1.space
        self.alpha1, self.alpha2 = alpha1, alpha2
        n = self.space.n
        basis = np.hstack([alpha1.cols, alpha2.cols])
        self.N = basis @ np.diag(np.r_[-np.ones(n), np.ones(n)]) @ np.linalg.inv(basis)
        self.doubled = doubled_space(self.space)

    @classmethod
    def standard(cls, space: SymplecticSpace) -> "BrakeStructure":
        n = space.n
        eye = np.eye(2 * n, dtype=complex)
        return cls(SubspaceFrame(space, eye[:, :n]), SubspaceFrame(space, eye[:, n:]))

    def pair(self, a: SubspaceFrame, b: SubspaceFrame) -> SubspaceFrame:
        return product_subspace(a, b, self.doubled)

    @cached_property
    def tilde1(self) -> SubspaceFrame:
        return self.pair(self.alpha1, self.alpha1)

    @cached_property
    def tilde2(self) -> SubspaceFrame:
        return self.pair(self.alpha2, self.alpha2)

    @cached_property
    def identity_graph(self) -> SubspaceFrame:
        return SubspaceFrame(self.doubled, identity_graph(self.space).cols)

    def NN(self) -> np.ndarray:
        return sla.block_diag(self.N, self.N)

    def poincare(self, path: SymplecticPath) -> np.ndarray:
        """``gamma(2 tau) = N gamma(tau)^{-1} N gamma(tau)``."""
        M = path.end
        return self.N @ np.linalg.solve(M, self.N @ M)


def brake_iterate(path: SymplecticPath, k: int, brake: BrakeStructure) -> SymplecticPath:
    """The ``k``-th ``N``-brake iteration: forward copies on ``[2j tau, (2j+1) tau]``,
    ``N``-reflected copies on ``[(2j-1) tau, 2j tau]``."""
    if k < 1:
        raise ValueError("iteration count must be positive")
    if not np.allclose(path.start, np.eye(path.source.dim), atol=1e-10):
        raise ValueError("brake iteration needs a path starting at the identity")
    if k == 1:
        return path
    N = brake.N
    tau = path.tau
    if isinstance(path, PiecewiseExpPath):
        fwd_b = path.breaks[1:]
        back_b = (tau - path.breaks[::-1])[1:]
        back_g = -np.einsum("ij,kjl,lm->kim", N, path.gens[::-1], N)
        breaks = [0.0]
        gens = []
        for piece in range(k):
            offset = piece * tau
            if piece % 2 == 0:
                breaks.extend(offset + fwd_b)
                gens.extend(path.gens)
            else:
                breaks.extend(offset + back_b)
                gens.extend(back_g)
        out = PiecewiseExpPath(path.source, breaks, np.array(gens))
    else:
        P2 = brake.poincare(path)

        def func(t: float) -> np.ndarray:
            piece = min(int(t // tau), k - 1)
            if piece % 2 == 0:
                j = piece // 2
                return path(t - 2 * j * tau) @ np.linalg.matrix_power(P2, j)
            j = (piece + 1) // 2
            return N @ path(2 * j * tau - t) @ N @ np.linalg.matrix_power(P2, j)

        grid = np.unique(np.concatenate([piece * tau + path.tracking_grid() for piece in range(k)]))
        out = FunctionPath(path.source, func, k * tau, grid)
    return out


def reversal_path(path: SymplecticPath) -> SymplecticPath:
    """``t -> gamma(0)^{-1} gamma(tau - t) gamma(tau)^{-1}``."""
    G0i = np.linalg.inv(path.start)
    Gti = np.linalg.inv(path.end)
    if isinstance(path, PiecewiseExpPath):
        return path.reversed().left_mul(G0i).right_mul(Gti)
    tau = path.tau
    return FunctionPath(path.source, lambda t: G0i @ path(tau - t) @ Gti, tau,
                        np.sort(tau - path.tracking_grid()))


# --------------------------------------------------------- L0 decomposition


class NotInL0Error(ValueError):
    """The subspace does not split along ``alpha~1 + alpha~2``."""


@dataclass
class L0Decomposition:
    p1: SubspaceFrame
    p2: SubspaceFrame
    S1: SubspaceFrame
    S2: SubspaceFrame


def in_l0(mu: SubspaceFrame, brake: BrakeStructure, tol: Tolerances = DEFAULT_TOL) -> bool:
    return (dim_intersection(mu, brake.tilde1, tol) + dim_intersection(mu, brake.tilde2, tol)) == mu.k


def l0_decomposition(mu: SubspaceFrame, brake: BrakeStructure, tol: Tolerances = DEFAULT_TOL) -> L0Decomposition:
    mu = SubspaceFrame(brake.doubled, mu.cols)
    require_lagrangian(mu, "mu", tol)
    if not in_l0(mu, brake, tol):
        raise NotInL0Error("mu is not the sum of its parts in alpha~1 and alpha~2")
    p1 = intersect(brake.tilde1, mu, tol)
    p2 = intersect(brake.tilde2, mu, tol)
    S1 = intersect(p1, diagonal_of(brake.alpha1, brake.doubled), tol)
    S2 = intersect(p2, diagonal_of(brake.alpha2, brake.doubled), tol)
    return L0Decomposition(p1, p2, S1, S2)


def l0_from_part(part2: SubspaceFrame, brake: BrakeStructure, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    """The member of ``L0`` whose ``alpha~2`` part is ``part2``."""
    p1 = intersect(brake.tilde1, annihilator(part2, tol), tol)
    return SubspaceFrame(brake.doubled, orth(np.hstack([p1.cols, part2.cols]), tol.rank))


# ------------------------------------------------------------------ audits


def _i(path: SymplecticPath, W: Optional[SubspaceFrame], tol: Tolerances) -> int:
    return maslov_type_index(path, W, tol).value


def _nu(path: SymplecticPath, W: Optional[SubspaceFrame], tol: Tolerances) -> int:
    return graph_nullity(path.end, W, path.source, path.target, tol)


def audit_iteration_bounds(paths: Sequence[SymplecticPath], tol: Tolerances = DEFAULT_TOL,
                           instance: str = "iteration-any") -> AuditRecord:
    k = len(paths)
    if k < 2:
        raise ValueError("need at least two paths")
    m = paths[0].source.dim
    data = IterationData.from_paths(paths)
    whole = concat(*paths)
    parts = [_i(p, None, tol) for p in paths]
    total = _i(whole, None, tol)
    A, B = data.A(tol), data.B(tol)
    diff = total - sum(parts)
    lower = sum(nu1(M, tol) for M in data.M) - B - m * (k - 1)
    upper = B - nu1(data.partial[-1], tol)
    rec = AuditRecord(instance, data={"i_parts": parts, "i_whole": total, "A": A, "B": B})
    rec.checks += [check_le("iteration-any:lower", lower, diff),
                   check_le("iteration-any:upper", diff, upper),
                   check_le("iteration-any:B<=A", B, A)]
    return rec


def audit_gcd_bounds(path: SymplecticPath, k1: int, k2: int, tol: Tolerances = DEFAULT_TOL,
                     instance: str = "gcd") -> AuditRecord:
    m = path.source.dim
    M = path.end
    g = math.gcd(k1, k2)

    def nuk(k: int) -> int:
        return nu1(np.linalg.matrix_power(M, k), tol)

    e = elliptic_height(M)
    i1, i2, i12 = (_i(iterate(path, k), None, tol) for k in (k1, k2, k1 + k2))
    diff = i12 - i1 - i2
    lower = nuk(k1) + nuk(k2) - nuk(g) - (e + m) // 2
    upper = nuk(g) - nuk(k1 + k2) + (e - m) // 2
    rec = AuditRecord(instance, data={"k": [k1, k2], "i": [i1, i2, i12], "e": e})
    rec.checks.append(check_in(f"gcd({k1},{k2})", diff, lower, upper))
    return rec


def audit_iteration_alpha(g1: SymplecticPath, g2: SymplecticPath, brake: BrakeStructure,
                          tol: Tolerances = DEFAULT_TOL, instance: str = "iteration-alpha") -> AuditRecord:
    n = brake.space.n
    t2 = brake.tilde2
    diff = _i(concat(g1, g2), t2, tol) - _i(g1, t2, tol) - _i(g2, None, tol)
    rec = AuditRecord(instance)
    rec.checks.append(check_in("iteration-alpha", diff, _nu(g2, None, tol) - 2 * n, 0))
    return rec


def audit_focal(g1: SymplecticPath, g2: SymplecticPath, alpha: SubspaceFrame, brake: BrakeStructure,
                tol: Tolerances = DEFAULT_TOL, instance: str = "focal") -> AuditRecord:
    n = brake.space.n
    a1 = brake.alpha1
    W = brake.pair(alpha, a1)
    lhs = _i(concat(g1, g2), W, tol) - _i(g1, W, tol) - _i(g2, brake.tilde1, tol)
    M1, M2 = g1.end, g2.end
    M1a = apply(M1, alpha, tol=tol)
    G2 = SubspaceFrame(brake.doubled, graph_lagrangian(M2, brake.space, tol=tol).cols)
    inner = brake.pair(intersect(a1, M1a, tol), a1)
    rhs = (dim_intersection(G2, brake.tilde1, tol) - dim_intersection(G2, inner, tol)
           + dim_intersection(M1a, a1, tol) - n)
    rec = AuditRecord(instance)
    rec.checks.append(check_ge("focal-type", lhs, rhs))
    return rec


def audit_brake_symmetry(path: SymplecticPath, k: int, brake: BrakeStructure,
                         tol: Tolerances = DEFAULT_TOL, instance: str = "brake-symmetry") -> AuditRecord:
    """Set membership of the k-th brake iterate index; only ``k >= 3`` is audited."""
    if k < 3:
        raise ValueError("the brake-symmetry bracket is audited for k >= 3")
    n = brake.space.n
    t2 = brake.tilde2
    p = (k - 1) // 2
    g2 = brake_iterate(path, 2, brake)
    base = _i(brake_iterate(path, k - 2 * p, brake), t2, tol) + p * _i(g2, None, tol)
    nu2 = _nu(g2, None, tol)
    nu2p = _nu(brake_iterate(path, 2 * p, brake), None, tol)
    val = _i(brake_iterate(path, k, brake), t2, tol)
    rec = AuditRecord(instance, data={"k": k, "value": val, "base": base})
    rec.checks.append(check_in(f"brake-symmetry(k={k})", val - base, p * (nu2 - 2 * n), nu2 - nu2p))
    return rec


def audit_alpha2_alpha1(path: SymplecticPath, k: int, brake: BrakeStructure,
                        tol: Tolerances = DEFAULT_TOL, instance: str = "alpha2-alpha1") -> AuditRecord:
    n = brake.space.n
    lhs = _i(brake_iterate(path, k, brake), brake.tilde2, tol)
    rhs = k * (_i(path, brake.tilde1, tol) + _nu(path, brake.tilde1, tol) - n)
    rec = AuditRecord(instance)
    rec.checks.append(check_ge(f"alpha2-alpha1(k={k})", lhs, rhs))
    return rec


def audit_alpha2_alpha1_odd(path: SymplecticPath, k: int, brake: BrakeStructure,
                            tol: Tolerances = DEFAULT_TOL, instance: str = "alpha2-alpha1-odd") -> AuditRecord:
    n = brake.space.n
    t1 = brake.tilde1
    g2 = brake_iterate(path, 2, brake)
    lhs = _i(brake_iterate(path, 2 * k + 1, brake), brake.pair(brake.alpha2, brake.alpha1), tol)
    rhs = _i(path, t1, tol) - n + k * (_i(g2, t1, tol) + _nu(g2, t1, tol) - n)
    rec = AuditRecord(instance)
    rec.checks += [check_ge(f"alpha2-alpha1-odd(k={k})", lhs, rhs),
                   check_ge("nu-gamma-2", _nu(g2, t1, tol), _nu(path, brake.pair(brake.alpha1, brake.alpha2), tol))]
    return rec


def audit_reverse(path: SymplecticPath, W: SubspaceFrame, tol: Tolerances = DEFAULT_TOL,
                  instance: str = "reverse") -> AuditRecord:
    space = path.source
    neg = space.negated()
    rev = reversal_path(path).with_spaces(neg)
    lhs = _i(rev, W.cols, tol)
    rhs = _i(path, swap_factors(SubspaceFrame(path.doubled, W.cols)), tol)
    rec = AuditRecord(instance)
    rec.checks.append(check_eq("reverse", lhs, rhs))
    return rec


def audit_n_reverse(path: SymplecticPath, W: SubspaceFrame, brake: BrakeStructure,
                    tol: Tolerances = DEFAULT_TOL, instance: str = "n-reverse") -> AuditRecord:
    N = brake.N
    rev = reversal_path(path)
    if isinstance(rev, PiecewiseExpPath):
        conj = rev.left_mul(N).right_mul(N)
    else:
        conj = FunctionPath(rev.source, lambda t: N @ rev(t) @ N, rev.tau, rev.tracking_grid())
    lhs = _i(conj, W.cols, tol)
    moved = apply(brake.NN(), SubspaceFrame(brake.doubled, W.cols), tol=tol)
    rhs = _i(path, swap_factors(moved), tol)
    rec = AuditRecord(instance)
    rec.checks.append(check_eq("n-reverse", lhs, rhs))
    return rec


def audit_s_l0(lam: SubspaceFrame, mu1: SubspaceFrame, mu2: SubspaceFrame, brake: BrakeStructure,
               tol: Tolerances = DEFAULT_TOL, instance: str = "s-L0") -> AuditRecord:
    d1, d2 = l0_decomposition(mu1, brake, tol), l0_decomposition(mu2, brake, tol)
    if not dim_intersection(d2.p2, d1.p2, tol) == d1.p2.k:
        raise ValueError("p2(mu1) must lie in p2(mu2)")
    G = brake.identity_graph
    s = hormander_index(G, lam, mu1, mu2, tol).value
    first = d2.S2.k - d1.S2.k - triple_index(lam, mu1, mu2, tol)
    second = triple_index(lam, mu2, mu1, tol) - d1.S1.k + d2.S1.k
    lm1 = intersect(lam, mu1, tol)
    bound = lm1.k - dim_intersection(lm1, mu2, tol) - d1.S1.k + d2.S1.k
    rec = AuditRecord(instance, data={"s": s})
    rec.checks += [check_eq("s-L0:first", s, first), check_eq("s-L0:second", s, second),
                   check_ge("s-L0:bound", s, bound)]
    return rec


def audit_s_beta_alpha(lam: SubspaceFrame, beta: SubspaceFrame, brake: BrakeStructure,
                       tol: Tolerances = DEFAULT_TOL, instance: str = "s-beta-alpha") -> AuditRecord:
    n = brake.space.n
    a1 = brake.alpha1
    s = hormander_index(brake.identity_graph, lam, brake.tilde1, brake.pair(beta, a1), tol).value
    la = intersect(lam, brake.tilde1, tol)
    ba = intersect(beta, a1, tol)
    bound = la.k - dim_intersection(lam, brake.pair(ba, a1), tol) + ba.k - n
    rec = AuditRecord(instance, data={"s": s})
    rec.checks.append(check_ge("s-beta-alpha", s, bound))
    return rec


def audit_brake_inequalities(path: SymplecticPath, k: int, brake: BrakeStructure,
                             second: SymplecticPath, alpha: SubspaceFrame, W: SubspaceFrame,
                             tol: Tolerances = DEFAULT_TOL, instance: str = "brake") -> AuditRecord:
    """Every brake-related statement on one instance, merged into a single record."""
    recs = [
        audit_iteration_alpha(path, second, brake, tol),
        audit_focal(path, second, alpha, brake, tol),
        audit_alpha2_alpha1(path, k, brake, tol),
        audit_alpha2_alpha1_odd(path, max(1, k // 2), brake, tol),
        audit_reverse(path, W, tol),
        audit_n_reverse(path, W, brake, tol),
    ]
    if k >= 3:
        recs.append(audit_brake_symmetry(path, k, brake, tol))
    out = AuditRecord(instance)
    for r in recs:
        out.checks.extend(r.checks)
    return out


__all__ = [
    "BrakeStructure",
    "IterationData",
    "L0Decomposition",
    "NotInL0Error",
    "audit_alpha2_alpha1",
    "audit_alpha2_alpha1_odd",
    "audit_brake_inequalities",
    "audit_brake_symmetry",
    "audit_focal",
    "audit_gcd_bounds",
    "audit_iteration_alpha",
    "audit_iteration_bounds",
    "audit_n_reverse",
    "audit_reverse",
    "audit_s_beta_alpha",
    "audit_s_l0",
    "brake_iterate",
    "concat",
    "in_l0",
    "iterate",
    "l0_decomposition",
    "l0_from_part",
    "reversal_path",
]
