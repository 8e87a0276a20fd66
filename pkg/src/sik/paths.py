"""Continuous paths of symplectic maps and of Lagrangian subspaces."""
from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .symplectic import (
    DEFAULT_TOL,
    SubspaceFrame,
    SymplecticSpace,
    Tolerances,
    _rng,
    doubled_space,
    is_symplectic,
    lagrangian_from_generator,
    random_hermitian,
    unitary_generator,
)


class SymplecticPath:
    """Path ``t -> gamma(t)`` in ``Sp(V1, V2)`` on ``[0, tau]``.

    Subclasses supply ``__call__``; ``increment(t0, t1)`` is
    ``gamma(t1) gamma(t0)^{-1}`` and is what frame propagation uses.
    """
    source: SymplecticSpace
    target: SymplecticSpace
    tau: float

    def __call__(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def increment(self, t0: float, t1: float) -> np.ndarray:
        return np.linalg.solve(self(t0).T, self(t1).T).T

    def tracking_grid(self, budget: float = np.pi / 16) -> np.ndarray:
        return np.linspace(0.0, self.tau, 65)

    def generator(self, t: float) -> Optional[np.ndarray]:
        """Left generator ``A`` with ``gamma'(t) = A gamma(t)`` if known."""
        return None

    @property
    def start(self) -> np.ndarray:
        return self(0.0)

    @property
    def end(self) -> np.ndarray:
        return self(self.tau)

    @property
    def doubled(self) -> SymplecticSpace:
        return doubled_space(self.source, self.target)

    def with_spaces(self, source: SymplecticSpace, target: Optional[SymplecticSpace] = None) -> "SymplecticPath":
        raise NotImplementedError

    def check(self, tol: Tolerances = DEFAULT_TOL, samples: int = 9) -> bool:
        return all(
            is_symplectic(self(t), self.source, self.target, tol)
            for t in np.linspace(0.0, self.tau, samples)
        )


class PiecewiseExpPath(SymplecticPath):
    """``gamma(t) = expm(A_k (t - t_k)) gamma(t_k)`` on ``[t_k, t_{k+1}]``."""
    def __init__(self, space: SymplecticSpace, breaks: Sequence[float], gens: np.ndarray,
                 start: Optional[np.ndarray] = None, target: Optional[SymplecticSpace] = None):
        self.source = space
        self.target = space if target is None else target
        self.breaks = np.asarray(breaks, dtype=float)
        self.gens = np.asarray(gens, dtype=complex).reshape(-1, self.target.dim, self.target.dim)
        if len(self.breaks) != len(self.gens) + 1:
            raise ValueError("need one generator per interval")
        if np.any(np.diff(self.breaks) < 0) or self.breaks[0] != 0.0:
            raise ValueError("breaks must start at 0 and be non-decreasing")
        self.tau = float(self.breaks[-1])
        self.g0 = (np.eye(self.target.dim, self.source.dim, dtype=complex)
                   if start is None else np.asarray(start, dtype=complex))
        self._steps: Optional[np.ndarray] = None
        self._cum: Optional[np.ndarray] = None

    @property
    def steps(self) -> np.ndarray:
        if self._steps is None:
            dt = np.diff(self.breaks)
            if len(dt) == 0:
                self._steps = np.zeros((0, self.target.dim, self.target.dim), dtype=complex)
            else:
                self._steps = sla.expm(self.gens * dt[:, None, None])
        return self._steps

    @property
    def cumulative(self) -> np.ndarray:
        if self._cum is None:
            cum = [self.g0]
            for S in self.steps:
                cum.append(S @ cum[-1])
            self._cum = np.array(cum)
        return self._cum

    def _piece(self, t: float) -> int:
        k = int(np.searchsorted(self.breaks, t, side="right")) - 1
        return min(max(k, 0), len(self.gens) - 1)

    def __call__(self, t: float) -> np.ndarray:
        if len(self.gens) == 0 or t <= 0.0:
            return self.g0.copy()
        k = self._piece(t)
        return sla.expm(self.gens[k] * (t - self.breaks[k])) @ self.cumulative[k]

    def generator(self, t: float) -> Optional[np.ndarray]:
        return None if len(self.gens) == 0 else self.gens[self._piece(t)]

    def propagate(self, t0: float, t1: float, X: np.ndarray) -> np.ndarray:
        """``increment(t0, t1) @ X`` for ``t0 <= t1`` without forming products of paths."""
        if t1 < t0:
            raise ValueError("propagation runs forward in time")
        if len(self.gens) == 0 or t1 == t0:
            return X
        k0, k1 = self._piece(t0), self._piece(t1)
        if k0 == k1:
            return sla.expm(self.gens[k0] * (t1 - t0)) @ X
        X = sla.expm(self.gens[k0] * (self.breaks[k0 + 1] - t0)) @ X
        steps = self.steps
        for k in range(k0 + 1, k1):
            X = steps[k] @ X
        return sla.expm(self.gens[k1] * (t1 - self.breaks[k1])) @ X

    def increment(self, t0: float, t1: float) -> np.ndarray:
        if t1 >= t0:
            return self.propagate(t0, t1, np.eye(self.target.dim, dtype=complex))
        return np.linalg.inv(self.increment(t1, t0))

    def tracking_grid(self, budget: float = np.pi / 16) -> np.ndarray:
        """Sub-grid of the breaks with at most ``budget`` of ``|A| dt`` between points."""
        if len(self.gens) == 0:
            return np.array([0.0, self.tau])
        # Frobenius norm bounds the operator norm, so the budget stays conservative
        cost = np.linalg.norm(self.gens, axis=(1, 2)) * np.diff(self.breaks)
        grid = [0.0]
        acc = 0.0
        for k, c in enumerate(cost):
            t0, t1 = self.breaks[k], self.breaks[k + 1]
            if c > budget:
                grid.extend(np.linspace(t0, t1, int(np.ceil(c / budget)) + 1)[1:])
                acc = 0.0
            elif acc + c > budget:
                if grid[-1] < t0:
                    grid.append(t0)
                acc = c
            else:
                acc += c
        if grid[-1] < self.tau:
            grid.append(self.tau)
        return np.unique(np.array(grid))

    # transformations staying inside the class

    def left_mul(self, C: np.ndarray, target: Optional[SymplecticSpace] = None) -> "PiecewiseExpPath":
        C = np.asarray(C, dtype=complex)
        Ci = np.linalg.inv(C)
        gens = np.einsum("ij,kjl,lm->kim", C, self.gens, Ci)
        return PiecewiseExpPath(self.source, self.breaks, gens, C @ self.g0,
                                self.target if target is None else target)

    def right_mul(self, C: np.ndarray, source: Optional[SymplecticSpace] = None) -> "PiecewiseExpPath":
        return PiecewiseExpPath(self.source if source is None else source, self.breaks,
                                self.gens, self.g0 @ np.asarray(C, dtype=complex), self.target)

    def reversed(self) -> "PiecewiseExpPath":
        """``t -> gamma(tau - t)``."""
        breaks = self.tau - self.breaks[::-1]
        breaks[0] = 0.0
        return PiecewiseExpPath(self.source, breaks, -self.gens[::-1], self.end, self.target)

    def shifted_start(self, G: np.ndarray) -> "PiecewiseExpPath":
        return PiecewiseExpPath(self.source, self.breaks, self.gens, G, self.target)

    def with_spaces(self, source: SymplecticSpace, target: Optional[SymplecticSpace] = None) -> "PiecewiseExpPath":
        return PiecewiseExpPath(source, self.breaks, self.gens, self.g0,
                                source if target is None else target)

    def restrict(self, t_end: float) -> "PiecewiseExpPath":
        """The path on ``[0, t_end]``."""
        if not 0 <= t_end <= self.tau:
            raise ValueError("restriction end outside the path")
        k = int(np.searchsorted(self.breaks, t_end, side="left"))
        breaks = np.append(self.breaks[:k], t_end) if self.breaks[k] != t_end else self.breaks[: k + 1]
        if len(breaks) == 1:
            return PiecewiseExpPath(self.source, [0.0], np.zeros((0,) + self.gens.shape[1:]), self.g0, self.target)
        out = PiecewiseExpPath(self.source, breaks, self.gens[: len(breaks) - 1], self.g0, self.target)
        if self._steps is not None and breaks[-1] == self.breaks[len(breaks) - 1]:
            out._steps = self._steps[: len(breaks) - 1]
        return out

    def __repr__(self) -> str:
        return f"PiecewiseExpPath(dim={self.target.dim}, pieces={len(self.gens)}, tau={self.tau:g})"


class FunctionPath(SymplecticPath):
    """Path given by an arbitrary callable."""
    def __init__(self, space: SymplecticSpace, func: Callable[[float], np.ndarray], tau: float,
                 grid: Optional[Sequence[float]] = None, target: Optional[SymplecticSpace] = None,
                 generator: Optional[Callable[[float], np.ndarray]] = None):
        self.source = space
        self.target = space if target is None else target
        self.func = func
        self.tau = float(tau)
        self.grid = np.linspace(0.0, self.tau, 129) if grid is None else np.asarray(grid, dtype=float)
        self._generator = generator

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.func(t), dtype=complex)

    def generator(self, t: float) -> Optional[np.ndarray]:
        return None if self._generator is None else self._generator(t)

    def tracking_grid(self, budget: float = np.pi / 16) -> np.ndarray:
        return self.grid

    def with_spaces(self, source: SymplecticSpace, target: Optional[SymplecticSpace] = None) -> "FunctionPath":
        return FunctionPath(source, self.func, self.tau, self.grid, source if target is None else target)


# ------------------------------------------------------------ constructors


def path_from_generator(space: SymplecticSpace, field: Callable[[float], np.ndarray], tau: float,
                        steps: int = 64) -> PiecewiseExpPath:
    """Fundamental solution of ``gamma' = -J^{-1} B(t) gamma`` with ``B`` frozen at step midpoints."""
    breaks = np.linspace(0.0, tau, steps + 1)
    mids = (breaks[:-1] + breaks[1:]) / 2
    gens = np.array([-space.Jinv @ np.asarray(field(t), dtype=complex) for t in mids])
    return PiecewiseExpPath(space, breaks, gens)


def constant_generator_path(space: SymplecticSpace, B: np.ndarray, tau: float) -> PiecewiseExpPath:
    """``t -> exp(-t J^{-1} B)`` as a single exact piece."""
    return PiecewiseExpPath(space, [0.0, tau], [-space.Jinv @ np.asarray(B, dtype=complex)])


def rotation_path(space: SymplecticSpace, c: float, tau: float) -> PiecewiseExpPath:
    """``t -> exp(c J1 t)`` with ``J1 = (-J^2)^{-1/2} J``."""
    return PiecewiseExpPath(space, [0.0, tau], [c * space.J1])


def random_path(space: SymplecticSpace, seed=None, tau: float = 1.0, pieces: int = 4,
                scale: float = 1.0) -> PiecewiseExpPath:
    """Piecewise constant random Hamiltonian field, starting at the identity."""
    rng = _rng(seed)
    breaks = np.linspace(0.0, tau, pieces + 1)
    gens = np.array([-space.Jinv @ random_hermitian(space.dim, rng, scale) for _ in range(pieces)])
    return PiecewiseExpPath(space, breaks, gens)


def pointwise_product(paths: Sequence[SymplecticPath]) -> FunctionPath:
    """``t -> paths[-1](t) ... paths[0](t)`` (same parameter interval)."""
    tau = paths[0].tau
    if any(abs(p.tau - tau) > 1e-12 for p in paths):
        raise ValueError("pointwise product needs a common interval")
    grid = np.unique(np.concatenate([p.tracking_grid() for p in paths]))

    def func(t: float) -> np.ndarray:
        M = paths[0](t)
        for p in paths[1:]:
            M = p(t) @ M
        return M

    return FunctionPath(paths[0].source, func, tau, grid, paths[-1].target)


def concatenate_paths(paths: Sequence[SymplecticPath]) -> SymplecticPath:
    """``t -> gamma_l(t - T_{l-1}) M_{l-1}`` glued along ``T_l = tau_1 + ... + tau_l``.

    Every piece is expected to start at the identity.
    """
    if not paths:
        raise ValueError("no paths to concatenate")
    space = paths[0].source
    if all(isinstance(p, PiecewiseExpPath) for p in paths):
        breaks = [0.0]
        gens = []
        offset = 0.0
        for p in paths:
            breaks.extend(offset + p.breaks[1:])
            gens.extend(p.gens)
            offset += p.tau
        gens_arr = np.array(gens) if gens else np.zeros((0, space.dim, space.dim), dtype=complex)
        return PiecewiseExpPath(space, breaks, gens_arr)
    offsets = np.concatenate([[0.0], np.cumsum([p.tau for p in paths])])
    ends = [np.eye(space.dim, dtype=complex)]
    for p in paths:
        ends.append(p.end @ ends[-1])

    def func(t: float) -> np.ndarray:
        l = int(np.clip(np.searchsorted(offsets, t, side="right") - 1, 0, len(paths) - 1))
        return paths[l](t - offsets[l]) @ ends[l]

    grid = np.unique(np.concatenate([offsets[l] + p.tracking_grid() for l, p in enumerate(paths)]))
    return FunctionPath(space, func, offsets[-1], grid)


# ------------------------------------------------------- Lagrangian paths


class LagrangianPath:
    """Path ``s -> frame(s)`` of Lagrangian subspaces on ``[a, b]``."""
    def __init__(self, space: SymplecticSpace, func: Callable[[float], np.ndarray], a: float = 0.0,
                 b: float = 1.0, grid: Optional[Sequence[float]] = None, constant: bool = False):
        self.space = space
        self.func = func
        self.a, self.b = float(a), float(b)
        self.grid = np.linspace(self.a, self.b, 65) if grid is None else np.asarray(grid, dtype=float)
        self.constant = constant

    @classmethod
    def constant_path(cls, frame: SubspaceFrame, a: float = 0.0, b: float = 1.0) -> "LagrangianPath":
        cols = frame.cols
        return cls(frame.space, lambda s: cols, a, b, np.array([a, b]), constant=True)

    def frame(self, s: float) -> np.ndarray:
        return np.asarray(self.func(s), dtype=complex)

    def advance(self, s0: float, F0: np.ndarray, s1: float) -> np.ndarray:
        return self.frame(s1)

    def subspace(self, s: float) -> SubspaceFrame:
        return SubspaceFrame(self.space, np.linalg.qr(self.frame(s))[0])

    def tangent_generator(self, s: float) -> Optional[tuple]:
        """``(G, H)`` when the frame at ``s`` is ``[I; G]``-type graph data with known
        tangent form ``H`` in first-factor coordinates; ``None`` otherwise."""
        return None


class GraphPath(LagrangianPath):
    """``s -> Graph(gamma(s))`` in the doubled space, propagated by increments."""
    def __init__(self, path: SymplecticPath):
        self.path = path
        d = path.source.dim
        self._top = np.eye(d, dtype=complex)
        super().__init__(path.doubled, self._frame_direct, 0.0, path.tau, path.tracking_grid())

    def _frame_direct(self, s: float) -> np.ndarray:
        return np.linalg.qr(np.vstack([self._top, self.path(s)]))[0]

    def advance(self, s0: float, F0: np.ndarray, s1: float) -> np.ndarray:
        if s1 < s0:
            return self.frame(s1)
        d = self.path.source.dim
        top, bot = F0[:d], F0[d:]
        if isinstance(self.path, PiecewiseExpPath):
            bot = self.path.propagate(s0, s1, bot)
        else:
            bot = self.path.increment(s0, s1) @ bot
        return np.linalg.qr(np.vstack([top, bot]))[0]

    def tangent_generator(self, s: float) -> Optional[tuple]:
        A = self.path.generator(s)
        if A is None:
            return None
        return self.path(s), A


def sampled_lagrangian_path(space: SymplecticSpace, times: Sequence[float],
                            frames: Sequence[np.ndarray]) -> LagrangianPath:
    """Continuous path through sampled frames, joined by unitary geodesics."""
    times = np.asarray(times, dtype=float)
    if len(times) < 2 or np.any(np.diff(times) <= 0):
        raise ValueError("need at least two strictly increasing sample times")
    gens = [unitary_generator(SubspaceFrame(space, np.linalg.qr(F)[0])) for F in frames]
    logs = []
    for U0, U1 in zip(gens[:-1], gens[1:]):
        logs.append(_unitary_log(U1 @ np.linalg.inv(U0)))

    def func(s: float) -> np.ndarray:
        k = int(np.clip(np.searchsorted(times, s, side="right") - 1, 0, len(times) - 2))
        theta = (s - times[k]) / (times[k + 1] - times[k])
        Z, phi = logs[k]
        U = (Z * np.exp(1j * phi * theta)) @ Z.conj().T @ gens[k]
        return lagrangian_from_generator(space, U).cols

    grid = np.unique(np.concatenate([np.linspace(times[k], times[k + 1], 9) for k in range(len(times) - 1)]))
    return LagrangianPath(space, func, times[0], times[-1], grid)


def _unitary_log(W: np.ndarray) -> tuple:
    """``(Z, phi)`` with ``W = Z diag(exp(i phi)) Z^H`` and ``phi`` in ``(-pi, pi]``."""
    T, Z = sla.schur(W, output="complex")
    return Z, np.angle(np.diag(T))


def geodesic_lagrangian_path(start: SubspaceFrame, end: SubspaceFrame, samples: int = 33) -> LagrangianPath:
    """``s -> Graph(exp(s L) U0)`` with ``exp(L) U0 = U1`` (principal logarithm)."""
    space = start.space
    U0 = unitary_generator(start)
    Z, phi = _unitary_log(unitary_generator(end) @ np.linalg.inv(U0))

    def func(s: float) -> np.ndarray:
        return lagrangian_from_generator(space, (Z * np.exp(1j * phi * s)) @ Z.conj().T @ U0).cols

    return LagrangianPath(space, func, 0.0, 1.0, np.linspace(0.0, 1.0, samples))
