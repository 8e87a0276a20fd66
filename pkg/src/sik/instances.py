"""Seeded random instances, mixing generic draws with constructed degenerate ones."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .iteration import l0_from_part
from .paths import PiecewiseExpPath, random_path
from .symplectic import (
    SubspaceFrame,
    SymplecticSpace,
    _rng,
    diagonal_of,
    is_isotropic,
    orth,
    random_hermitian,
    random_isotropic,
    random_lagrangian,
    random_lagrangian_containing,
    random_symplectic,
)


def _plane_indices(n: int, planes) -> np.ndarray:
    planes = np.asarray(planes, dtype=int)
    return np.concatenate([planes, n + planes])


def resonant_path(space: SymplecticSpace, rng, tau: float = 1.0, pieces: int = 3,
                  conjugate: bool = False) -> PiecewiseExpPath:
    """Rotation with rational winding on some coordinate planes, a random field on the rest.

    Needs the standard form.  Iterates of the endpoint have exact eigenvalue
    one on the rotating planes, which exercises the nullity terms.
    """
    n = space.n
    r = int(rng.integers(1, n + 1))
    planes = rng.permutation(n)
    rot, rest = planes[:r], planes[r:]
    c = 2 * np.pi * int(rng.integers(1, 4)) / (int(rng.integers(1, 5)) * tau)
    if rng.random() < 0.5:
        c = -c
    breaks = np.linspace(0.0, tau, pieces + 1)
    gens = []
    for _ in range(pieces):
        B = np.zeros((2 * n, 2 * n), dtype=complex)
        ir = _plane_indices(n, rot)
        B[np.ix_(ir, ir)] = c * np.eye(len(ir))
        if len(rest):
            io = _plane_indices(n, rest)
            B[np.ix_(io, io)] = random_hermitian(len(io), rng, rng.uniform(0.5, 2.0))
        gens.append(-space.Jinv @ B)
    path = PiecewiseExpPath(space, breaks, np.array(gens))
    if conjugate:
        P = random_symplectic(space, rng, 0.4, factors=1)
        path = path.left_mul(P).right_mul(np.linalg.inv(P))
    return path


def audit_path(space: SymplecticSpace, seed, tau: float = 1.0) -> PiecewiseExpPath:
    """One path in ``P_tau``: generic, resonant (aligned or conjugated), or real."""
    rng = _rng(seed)
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return random_path(space, rng, tau, pieces=3, scale=rng.uniform(0.3, 2.5))
    if kind in (1, 2):
        return resonant_path(space, rng, tau, conjugate=kind == 2)
    breaks = np.linspace(0.0, tau, 4)
    gens = []
    for _ in range(3):
        X = rng.standard_normal((space.dim, space.dim)) * rng.uniform(0.3, 2.0)
        gens.append(-space.Jinv @ ((X + X.T) / 2))
    return PiecewiseExpPath(space, breaks, np.array(gens))


def lagrangian_family(space: SymplecticSpace, count: int, seed, degenerate: Optional[bool] = None) -> list:
    """``count`` Lagrangians; degenerate draws share a common isotropic piece or
    contain vectors of one another."""
    rng = _rng(seed)
    if degenerate is None:
        degenerate = rng.random() < 0.5
    if not degenerate or space.n == 0:
        return [random_lagrangian(space, rng) for _ in range(count)]
    out = []
    shared_dim = int(rng.integers(1, space.n + 1))
    shared = random_isotropic(space, shared_dim, rng)
    for _ in range(count):
        mode = rng.random()
        if mode < 0.45:
            out.append(random_lagrangian_containing(shared, rng))
        elif mode < 0.6 and out:
            out.append(SubspaceFrame(space, out[int(rng.integers(0, len(out)))].cols.copy()))
        elif mode < 0.8 and out:
            prev = out[int(rng.integers(0, len(out)))]
            k = int(rng.integers(1, space.n + 1))
            sub = SubspaceFrame(space, orth(prev.cols @ rng.standard_normal((space.n, k))))
            out.append(random_lagrangian_containing(sub, rng))
        else:
            out.append(random_lagrangian(space, rng))
    return out


def isotropic_triple(space: SymplecticSpace, seed) -> tuple:
    """Three isotropic subspaces of random dimensions (possibly sharing vectors)."""
    rng = _rng(seed)
    lags = lagrangian_family(space, 3, rng)
    out = []
    for L in lags:
        k = int(rng.integers(0, space.n + 1)) if rng.random() < 0.5 else space.n
        C = rng.standard_normal((space.n, k)) + 1j * rng.standard_normal((space.n, k))
        out.append(SubspaceFrame(space, orth(L.cols @ C)) if k < space.n else L)
    return tuple(out)


def _mix(frame: SubspaceFrame, k: int, rng) -> np.ndarray:
    C = rng.standard_normal((frame.k, k)) + 1j * rng.standard_normal((frame.k, k))
    return frame.cols @ C


def l0_pair(brake, seed) -> tuple:
    """``(mu1, mu2)`` in ``L0`` with ``p2(mu1) ⊂ p2(mu2)``; the parts mix diagonal
    vectors of ``alpha2`` with generic vectors of ``alpha~2``."""
    rng = _rng(seed)
    n = brake.space.n
    diag2 = diagonal_of(brake.alpha2, brake.doubled)
    r_diag = int(rng.integers(0, n + 1))
    r_gen = int(rng.integers(0, 2 * n - r_diag + 1))
    parts = []
    if r_diag:
        parts.append(_mix(diag2, r_diag, rng))
    if r_gen:
        parts.append(_mix(brake.tilde2, r_gen, rng))
    S2 = SubspaceFrame(brake.doubled, orth(np.hstack(parts)) if parts else np.zeros((4 * n, 0)))
    keep = int(rng.integers(0, S2.k + 1))
    if keep and r_diag and rng.random() < 0.5:
        # keep some diagonal directions inside the smaller part
        d = min(keep, r_diag)
        cols = np.hstack([parts[0][:, :d], _mix(S2, keep - d, rng)])
    else:
        cols = _mix(S2, keep, rng)
    S1 = SubspaceFrame(brake.doubled, orth(cols) if keep else np.zeros((4 * n, 0)))
    return l0_from_part(S1, brake), l0_from_part(S2, brake)


def doubled_lagrangian(brake, seed, hints=()) -> SubspaceFrame:
    """Random Lagrangian of the doubled space, sometimes containing vectors of ``hints``."""
    rng = _rng(seed)
    space = brake.doubled
    hints = [h for h in hints if h.k]
    if not hints or rng.random() < 0.4:
        return random_lagrangian(space, rng)
    h = hints[int(rng.integers(0, len(hints)))]

    for _ in range(8):
        k = int(rng.integers(1, min(h.k, space.n) + 1))
        sub = SubspaceFrame(space, orth(_mix(h, k, rng)))
        if is_isotropic(sub):
            return random_lagrangian_containing(sub, rng)
    return random_lagrangian(space, rng)


def lagrangian_meeting(target: SubspaceFrame, seed) -> SubspaceFrame:
    """Random Lagrangian sharing a random-dimensional subspace with the Lagrangian ``target``."""
    rng = _rng(seed)
    n = target.space.n
    k = int(rng.integers(0, n + 1))
    if k == 0:
        return random_lagrangian(target.space, rng)
    return random_lagrangian_containing(SubspaceFrame(target.space, orth(_mix(target, k, rng))), rng)
