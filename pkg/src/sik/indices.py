"""Maslov index of Lagrangian pairs, Maslov-type index of symplectic paths,
triple index and Hörmander index."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment, minimize_scalar

from .forms import crossing_form, inertia, q_inertia
from .paths import (
    GraphPath,
    LagrangianPath,
    SymplecticPath,
    geodesic_lagrangian_path,
)
from .symplectic import (
    DEFAULT_TOL,
    SubspaceFrame,
    SymplecticSpace,
    Tolerances,
    dim_intersection,
    doubled_space,
    intersect,
    is_lagrangian,
    null_space,
    orth,
    random_lagrangian,
    require_lagrangian,
    rotate_lagrangian,
)


class TrackingError(RuntimeError):
    """Eigenphase continuation could not be resolved within the sample budget."""


class NonRegularCrossingError(RuntimeError):
    """A crossing with a degenerate crossing form was met."""


class InconsistentIndexError(RuntimeError):
    """Two routes to the same index disagreed."""


@dataclass
class IndexReport:
    value: int
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __int__(self) -> int:
        return self.value

    def to_dict(self) -> dict:
        return {"value": int(self.value), "method": self.method, "diagnostics": self.diagnostics}


# ------------------------------------------------------------- integer parts


def e_ceil(x: float, tol: float = DEFAULT_TOL.integer) -> int:
    """``E(x)``: ``x`` when integral, else ``floor(x) + 1`` (integers snapped within ``tol``)."""
    r = round(x)
    if abs(x - r) <= tol:
        return int(r)
    return math.floor(x) + 1


def floor_snap(x: float, tol: float = DEFAULT_TOL.integer) -> int:
    r = round(x)
    if abs(x - r) <= tol:
        return int(r)
    return math.floor(x)


# ---------------------------------------------------------- phase tracking


def _generator(space: SymplecticSpace, F: np.ndarray) -> np.ndarray:
    _, _, Tinv = space.split
    Z = Tinv @ F
    n = space.n
    return np.linalg.solve(Z[:n].T, Z[n:].T).T


def _wrap(x: np.ndarray) -> np.ndarray:
    return (x + np.pi) % (2 * np.pi) - np.pi


def _match(theta: np.ndarray, eig: np.ndarray) -> tuple:
    diff = _wrap(np.angle(eig)[None, :] - theta[:, None])
    if len(theta) == 1:
        d = diff[0]
        return theta + d, float(abs(d[0]))
    rows, cols = linear_sum_assignment(np.abs(diff))
    step = diff[rows, cols]
    return theta + step, float(np.max(np.abs(step)))


@dataclass
class PhaseTrack:
    """Lifted eigenphases ``theta_j(s)`` of ``U(s) V(s)^{-1}`` at the accepted samples."""

    times: np.ndarray
    phases: np.ndarray
    max_jump: float
    refinements: int

    def at(self, s: float) -> np.ndarray:
        k = int(np.argmin(np.abs(self.times - s)))
        if abs(self.times[k] - s) > 1e-12 * max(1.0, abs(s)):
            raise KeyError(f"time {s} was not sampled")
        return self.phases[k]

    def mas(self, s0: Optional[float] = None, s1: Optional[float] = None, sign: str = "+",
            tol: Tolerances = DEFAULT_TOL) -> int:
        t0 = self.phases[0] if s0 is None else self.at(s0)
        t1 = self.phases[-1] if s1 is None else self.at(s1)
        part = e_ceil if sign == "+" else floor_snap
        return int(sum(part(b / (2 * np.pi), tol.integer) - part(a / (2 * np.pi), tol.integer)
                       for a, b in zip(t0, t1)))


def track_eigenphases(lam: LagrangianPath, mu: LagrangianPath, tol: Tolerances = DEFAULT_TOL,
                      extra_times: Optional[Sequence[float]] = None, max_jump: float = np.pi / 4,
                      budget: int = 2 ** 14) -> PhaseTrack:
    """Continue the eigenphases along the pair, bisecting steps whose matched jump
    reaches ``max_jump``.  ``budget`` caps the number of inserted samples."""
    space = lam.space
    a, b = lam.a, lam.b
    if abs(mu.a - a) > 1e-12 or abs(mu.b - b) > 1e-12:
        raise ValueError("paths live on different intervals")
    pieces = [lam.grid, [a, b]]
    if not mu.constant:
        pieces.append(mu.grid)
    if extra_times is not None:
        pieces.append(np.asarray(extra_times, dtype=float))
    grid = np.unique(np.clip(np.concatenate(pieces), a, b))

    Fl = lam.frame(a)
    Fm = mu.frame(a)
    Vinv = np.linalg.inv(_generator(space, Fm))
    theta = np.angle(np.linalg.eigvals(_generator(space, Fl) @ Vinv))
    times = [a]
    phases = [theta]
    worst = 0.0
    inserted = 0
    s_cur = a
    min_step = 1e-13 * max(1.0, b - a)
    for s_next in grid[1:]:
        stack = [s_next]
        while stack:
            s_t = stack[-1]
            Fl_t = lam.advance(s_cur, Fl, s_t)
            if mu.constant:
                Vinv_t = Vinv
                Fm_t = Fm
            else:
                Fm_t = mu.advance(s_cur, Fm, s_t)
                Vinv_t = np.linalg.inv(_generator(space, Fm_t))
            eig = np.linalg.eigvals(_generator(space, Fl_t) @ Vinv_t)
            new, jump = _match(theta, eig)
            if jump >= max_jump:
                if inserted < budget and s_t - s_cur > min_step:
                    stack.append(0.5 * (s_cur + s_t))
                    inserted += 1
                    continue
                raise TrackingError(
                    f"eigenphase jump {jump:.3f} unresolved near s={s_t:.6g} after {inserted} refinements"
                )
            worst = max(worst, jump)
            theta = new
            Fl, Fm, Vinv, s_cur = Fl_t, Fm_t, Vinv_t, s_t
            times.append(s_t)
            phases.append(theta)
            stack.pop()
    return PhaseTrack(np.array(times), np.array(phases).reshape(len(times), -1), worst, inserted)


def _as_path(x: Union[LagrangianPath, SubspaceFrame], like: Optional[LagrangianPath] = None) -> LagrangianPath:
    if isinstance(x, LagrangianPath):
        return x
    a, b = (like.a, like.b) if like is not None else (0.0, 1.0)
    return LagrangianPath.constant_path(x, a, b)


def maslov_index(lam: Union[LagrangianPath, SubspaceFrame], mu: Union[LagrangianPath, SubspaceFrame],
                 tol: Tolerances = DEFAULT_TOL, sign: str = "+", **track_kw) -> IndexReport:
    """``Mas_{+}`` (or ``Mas_{-}`` with ``sign="-"``) of a pair of Lagrangian paths."""
    if isinstance(lam, SubspaceFrame) and isinstance(mu, SubspaceFrame):
        return IndexReport(0, "eigenphase", {"samples": 1})
    if isinstance(lam, SubspaceFrame):
        lam = _as_path(lam, mu)
    mu = _as_path(mu, lam)
    track = track_eigenphases(lam, mu, tol, **track_kw)
    return IndexReport(
        track.mas(sign=sign, tol=tol),
        "eigenphase",
        {"samples": len(track.times), "refinements": track.refinements, "max_jump": track.max_jump},
    )


# ----------------------------------------------------------- crossing forms


def _sine_profile(lam: LagrangianPath, mu: LagrangianPath, s: float) -> np.ndarray:
    Fl = np.linalg.qr(lam.frame(s))[0]
    Fm = np.linalg.qr(mu.frame(s))[0]
    return np.linalg.svd(Fl - Fm @ (Fm.conj().T @ Fl), compute_uv=False)


def locate_crossings(lam: LagrangianPath, mu: LagrangianPath, tol: Tolerances = DEFAULT_TOL,
                     samples: int = 801) -> list:
    """Times where ``lam(s) ∩ mu(s)`` is non-trivial, located by minimising the
    smallest principal-angle sine."""
    a, b = lam.a, lam.b
    grid = np.linspace(a, b, samples)
    d = np.array([_sine_profile(lam, mu, s)[-1] for s in grid])
    found = []
    if d[0] < tol.angle:
        found.append(a)
    if d[-1] < tol.angle:
        found.append(b)
    for i in range(len(grid)):
        left = d[i - 1] if i > 0 else np.inf
        right = d[i + 1] if i < len(grid) - 1 else np.inf
        if not (d[i] <= left and d[i] <= right):
            continue
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        res = minimize_scalar(lambda s: _sine_profile(lam, mu, s)[-1], bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-14, "maxiter": 500})
        s_star = float(res.x)
        if res.fun >= tol.angle:
            continue
        if s_star - a < 1e-9 * (b - a):
            s_star = a
        elif b - s_star < 1e-9 * (b - a):
            s_star = b
        if all(abs(s_star - f) > 1e-9 * (b - a) for f in found):
            found.append(s_star)
    return sorted(found)


def maslov_index_crossings(lam: LagrangianPath, mu: Union[LagrangianPath, SubspaceFrame],
                           tol: Tolerances = DEFAULT_TOL, samples: int = 801,
                           meet_tol: float = 1e-6) -> IndexReport:
    """Crossing-form evaluation; every crossing must be regular."""
    mu = _as_path(mu, lam)
    total = 0
    crossings = []
    for s in locate_crossings(lam, mu, tol, samples):
        Fl = np.linalg.qr(lam.frame(s))[0]
        Fm = np.linalg.qr(mu.frame(s))[0]
        _, sv, Vh = np.linalg.svd(Fl - Fm @ (Fm.conj().T @ Fl))
        small = sv < meet_tol
        meet = SubspaceFrame(lam.space, Fl @ Vh[small].conj().T)
        gamma = crossing_form(lam, mu, s, tol, meet=meet)
        inn = inertia(gamma, tol)
        if inn.zero:
            raise NonRegularCrossingError(f"degenerate crossing form at s={s:.9g}")
        if s == lam.a:
            contrib = inn.plus
        elif s == lam.b:
            contrib = -inn.minus
        else:
            contrib = inn.plus - inn.minus
        total += contrib
        crossings.append({"s": s, "dim": meet.k, "contribution": contrib})
    return IndexReport(total, "crossing-form", {"crossings": crossings})


# ------------------------------------------------------ Maslov-type index


def identity_graph(space: SymplecticSpace) -> SubspaceFrame:
    eye = np.eye(space.dim, dtype=complex)
    return SubspaceFrame(doubled_space(space), np.vstack([eye, eye]) / np.sqrt(2.0))


def _w_frame(path: SymplecticPath, W: Optional[Union[SubspaceFrame, np.ndarray]]) -> SubspaceFrame:
    doubled = path.doubled
    if W is None:
        W = identity_graph(path.source)
    cols = W.cols if isinstance(W, SubspaceFrame) else np.asarray(W, dtype=complex)
    frame = SubspaceFrame(doubled, cols)
    require_lagrangian(frame, "W")
    return frame


def maslov_type_index(path: SymplecticPath, W: Optional[Union[SubspaceFrame, np.ndarray]] = None,
                      tol: Tolerances = DEFAULT_TOL, **track_kw) -> IndexReport:
    """``i_W(gamma) = Mas{Graph(gamma), W}`` in the doubled space; ``W`` defaults to ``Graph(I)``."""
    lam = GraphPath(path)
    mu = LagrangianPath.constant_path(_w_frame(path, W), 0.0, path.tau)
    track = track_eigenphases(lam, mu, tol, **track_kw)
    return IndexReport(
        track.mas(tol=tol),
        "eigenphase",
        {"samples": len(track.times), "refinements": track.refinements, "max_jump": track.max_jump},
    )


def maslov_type_series(path: SymplecticPath, times: Sequence[float],
                       W: Optional[Union[SubspaceFrame, np.ndarray]] = None,
                       tol: Tolerances = DEFAULT_TOL, **track_kw) -> np.ndarray:
    """``i_W`` of the restrictions ``gamma|[0, t]`` for every ``t`` in ``times`` in one sweep."""
    lam = GraphPath(path)
    mu = LagrangianPath.constant_path(_w_frame(path, W), 0.0, path.tau)
    track = track_eigenphases(lam, mu, tol, extra_times=times, **track_kw)
    return np.array([track.mas(0.0, t, tol=tol) for t in times], dtype=int)


def graph_nullity(M: np.ndarray, W: Optional[SubspaceFrame], source: SymplecticSpace,
                  target: Optional[SymplecticSpace] = None, tol: Tolerances = DEFAULT_TOL) -> int:
    """``dim(Graph(M) ∩ W)``; with ``W=None`` this is ``dim ker(M - I)``."""
    M = np.asarray(M, dtype=complex)
    if W is None:
        return fixed_space(M, tol).shape[1]
    target = source if target is None else target
    doubled = doubled_space(source, target)
    G = SubspaceFrame(doubled, np.linalg.qr(np.vstack([np.eye(source.dim), M]))[0])
    return dim_intersection(G, SubspaceFrame(doubled, W.cols), tol)


def fixed_space(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ``ker(M - I)``.

    Measured as ``Graph(M) ∩ Graph(I)`` with orthonormal frames, so the rank
    cut does not scale with ``|M|``; a cut relative to ``M - I`` either
    misses an exact identity or swallows real singular values of large powers.
    """
    M = np.asarray(M, dtype=complex)
    d = M.shape[0]
    eye = np.eye(d, dtype=complex)
    G = np.linalg.qr(np.vstack([eye, M]))[0]
    N = null_space(np.hstack([G, -np.vstack([eye, eye]) / np.sqrt(2.0)]), tol.rank)
    if N.shape[1] == 0:
        return np.zeros((d, 0), dtype=complex)
    return orth(N[d:], tol.rank)


def common_fixed_space(maps: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the intersection of the ``ker(M - I)``."""
    U = fixed_space(maps[0], tol)
    for M in maps[1:]:
        if U.shape[1] == 0:
            break
        V = fixed_space(M, tol)
        if V.shape[1] == 0:
            return V
        N = null_space(np.hstack([U, -V]), tol.rank)
        U = orth(U @ N[: U.shape[1]], tol.rank) if N.shape[1] else np.zeros((U.shape[0], 0), dtype=complex)
    return U


def nullity(path: SymplecticPath, W: Optional[SubspaceFrame] = None, tol: Tolerances = DEFAULT_TOL) -> int:
    """``nu_W(gamma) = dim(Graph(gamma(tau)) ∩ W)``."""
    return graph_nullity(path.end, W, path.source, path.target, tol)


def nu1(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    return graph_nullity(M, None, None, tol=tol)


def elliptic_height(M: np.ndarray, tol: float = 1e-6) -> int:
    """Number of eigenvalues on the unit circle, with algebraic multiplicity."""
    ev = np.linalg.eigvals(np.asarray(M, dtype=complex))
    return int(np.sum(np.abs(np.abs(ev) - 1.0) <= tol))


# ------------------------------------------------- triple and Hörmander


def triple_index(alpha: SubspaceFrame, beta: SubspaceFrame, gamma: SubspaceFrame,
                 tol: Tolerances = DEFAULT_TOL) -> int:
    """``m^+(Q(alpha, beta; gamma)) + dim(alpha ∩ gamma) - dim(alpha ∩ beta ∩ gamma)``."""
    for name, sub in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        require_lagrangian(sub, name, tol)
    plus = q_inertia(alpha, beta, gamma, tol).plus
    ag = intersect(alpha, gamma, tol)
    return plus + ag.k - dim_intersection(ag, beta, tol)


def _transversal(x: SubspaceFrame, others: Sequence[SubspaceFrame], margin: float) -> bool:
    for o in others:
        s = np.linalg.svd(x.cols - o.cols @ (o.cols.conj().T @ x.cols), compute_uv=False)
        if s[-1] < margin:
            return False
    return True


def triple_index_via_delta(alpha: SubspaceFrame, beta: SubspaceFrame, gamma: SubspaceFrame,
                           tol: Tolerances = DEFAULT_TOL, delta: Optional[SubspaceFrame] = None,
                           margin: float = 1e-4) -> IndexReport:
    """``m^-(Q(alpha, delta; beta)) + m^-(Q(beta, delta; gamma)) - m^-(Q(alpha, delta; gamma))``
    for a Lagrangian ``delta`` transversal to all three."""
    probes = [delta] if delta is not None else [
        rotate_lagrangian(gamma, s) for s in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    ]
    for d in probes:
        if not _transversal(d, (alpha, beta, gamma), margin if delta is None else tol.angle):
            continue
        val = (q_inertia(alpha, d, beta, tol).minus
               + q_inertia(beta, d, gamma, tol).minus
               - q_inertia(alpha, d, gamma, tol).minus)
        return IndexReport(val, "transversal-delta", {})
    if delta is not None:
        raise ValueError("delta is not transversal to the triple")
    # fall back to a random transversal Lagrangian
    for seed in range(64):
        d = random_lagrangian(alpha.space, seed)
        if _transversal(d, (alpha, beta, gamma), margin):
            return triple_index_via_delta(alpha, beta, gamma, tol, d)
    raise ValueError("no transversal Lagrangian found")


def hormander_index(l1: SubspaceFrame, l2: SubspaceFrame, m1: SubspaceFrame, m2: SubspaceFrame,
                    tol: Tolerances = DEFAULT_TOL) -> IndexReport:
    """``s(l1, l2; m1, m2)`` from both triple-index expressions; they must agree."""
    first = triple_index(l1, l2, m2, tol) - triple_index(l1, l2, m1, tol)
    second = triple_index(l1, m1, m2, tol) - triple_index(l2, m1, m2, tol)
    if first != second:
        raise InconsistentIndexError(f"triple-index expressions disagree: {first} vs {second}")
    return IndexReport(first, "triple-index", {"first": first, "second": second})


def hormander_via_paths(l1: SubspaceFrame, l2: SubspaceFrame, m1: SubspaceFrame, m2: SubspaceFrame,
                        tol: Tolerances = DEFAULT_TOL) -> IndexReport:
    """``Mas{lam, m2} - Mas{lam, m1}`` along a unitary geodesic ``lam`` from ``l1`` to ``l2``."""
    for name, sub in (("l1", l1), ("l2", l2), ("m1", m1), ("m2", m2)):
        require_lagrangian(sub, name, tol)
    lam = geodesic_lagrangian_path(l1, l2)
    a = maslov_index(lam, m2, tol).value
    b = maslov_index(lam, m1, tol).value
    return IndexReport(a - b, "paths", {"mas_m2": a, "mas_m1": b})


__all__ = [
    "IndexReport",
    "InconsistentIndexError",
    "NonRegularCrossingError",
    "PhaseTrack",
    "TrackingError",
    "e_ceil",
    "elliptic_height",
    "floor_snap",
    "common_fixed_space",
    "fixed_space",
    "graph_nullity",
    "hormander_index",
    "hormander_via_paths",
    "identity_graph",
    "is_lagrangian",
    "locate_crossings",
    "maslov_index",
    "maslov_index_crossings",
    "maslov_type_index",
    "maslov_type_series",
    "nu1",
    "nullity",
    "track_eigenphases",
    "triple_index",
    "triple_index_via_delta",
]
