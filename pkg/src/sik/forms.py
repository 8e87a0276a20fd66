"""Hermitian forms on subspaces: inertia, the triple form ``Q(alpha, beta; gamma)``
and the derivative form of a path of Lagrangian subspaces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .paths import LagrangianPath
from .symplectic import (
    DEFAULT_TOL,
    SubspaceFrame,
    Tolerances,
    intersect,
    is_isotropic,
    subspace_sum,
    zero_subspace,
)


class FormConstructionError(ValueError):
    """Raised when a decomposition needed to build a form fails its residual check."""


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """Hermitian form on ``span(basis)``.

    With coordinates ``u = basis a`` and ``v = basis b`` the value is
    ``h(u, v) = b^H matrix a`` (linear in the first slot).
    """

    basis: SubspaceFrame
    matrix: np.ndarray

    def __post_init__(self) -> None:
        H = np.asarray(self.matrix, dtype=complex).reshape(self.basis.k, self.basis.k)
        object.__setattr__(self, "matrix", H)

    @property
    def dim(self) -> int:
        return self.basis.k

    def value(self, u: np.ndarray, v: np.ndarray) -> complex:
        B = self.basis.cols
        return complex((B.conj().T @ v).conj() @ self.matrix @ (B.conj().T @ u))

    def restrict(self, sub: SubspaceFrame) -> "HermitianForm":
        """Restriction to a subspace of ``span(basis)``."""
        K = self.basis.cols.conj().T @ sub.cols
        return HermitianForm(sub, K.conj().T @ self.matrix @ K)

    def __neg__(self) -> "HermitianForm":
        return HermitianForm(self.basis, -self.matrix)

    def __sub__(self, other: "HermitianForm") -> "HermitianForm":
        K = other.basis.cols.conj().T @ self.basis.cols
        return HermitianForm(self.basis, self.matrix - K.conj().T @ other.matrix @ K)

    def kernel(self, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
        w, E = np.linalg.eigh(_hermitian_part(self.matrix))
        cut = _inertia_cut(w, tol)
        return SubspaceFrame(self.basis.space, self.basis.cols @ E[:, np.abs(w) <= cut])


@dataclass(frozen=True)
class InertiaTriple:
    plus: int
    zero: int
    minus: int

    @property
    def total(self) -> int:
        return self.plus + self.zero + self.minus

    def as_tuple(self) -> tuple:
        return (self.plus, self.zero, self.minus)


def _hermitian_part(H: np.ndarray) -> np.ndarray:
    return (H + H.conj().T) / 2


def _inertia_cut(w: np.ndarray, tol: Tolerances) -> float:
    scale = np.max(np.abs(w)) if w.size else 0.0
    # below unit scale the threshold becomes absolute
    return tol.inertia * max(scale, 1.0)


def inertia(form, tol: Tolerances = DEFAULT_TOL) -> InertiaTriple:
    H = form.matrix if isinstance(form, HermitianForm) else np.asarray(form, dtype=complex)
    if H.size == 0:
        return InertiaTriple(0, 0, 0)
    w = np.linalg.eigvalsh(_hermitian_part(H))
    cut = _inertia_cut(w, tol)
    return InertiaTriple(int(np.sum(w > cut)), int(np.sum(np.abs(w) <= cut)), int(np.sum(w < -cut)))


def q_form(alpha: SubspaceFrame, beta: SubspaceFrame, gamma: SubspaceFrame,
           tol: Tolerances = DEFAULT_TOL) -> HermitianForm:
    """``Q(x1, x2) = omega(x1, y2)`` on ``alpha ∩ (beta + gamma)`` with ``x = -y + z``.

    The splitting ``x = -y + z`` (``y`` in ``beta``, ``z`` in ``gamma``) is the
    minimum-norm least-squares one; the form does not depend on the choice
    when the three subspaces are isotropic.
    """
    space = alpha.space
    for name, sub in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if not is_isotropic(sub, tol):
            raise FormConstructionError(f"{name} is not isotropic")
    dom = intersect(alpha, subspace_sum(beta, gamma, tol), tol)
    if dom.k == 0:
        return HermitianForm(zero_subspace(space), np.zeros((0, 0)))
    BC = np.hstack([beta.cols, gamma.cols])
    coef, *_ = np.linalg.lstsq(BC, dom.cols, rcond=None)
    resid = np.linalg.norm(BC @ coef - dom.cols, axis=0)
    if np.any(resid > 1e-8 * np.linalg.norm(dom.cols, axis=0)):
        raise FormConstructionError(f"decomposition residual {resid.max():.3e} too large")
    Y = -beta.cols @ coef[: beta.k]
    # matrix entry [i, j] = Q(x_j, x_i) = omega(x_j, y_i)
    H = Y.conj().T @ space.J @ dom.cols
    return HermitianForm(dom, _hermitian_part(H))


def q_inertia(alpha: SubspaceFrame, beta: SubspaceFrame, gamma: SubspaceFrame,
              tol: Tolerances = DEFAULT_TOL) -> InertiaTriple:
    """Inertia of ``Q(alpha, beta; gamma)`` for three Lagrangians.

    The kernel is ``(alpha ∩ beta) + (alpha ∩ gamma)``, so its dimension comes
    from principal angles; eigenvalue signs decide the rest. A relative
    eigenvalue cut would misread small genuine eigenvalues whenever ``beta``
    and ``gamma`` nearly meet and the form's entries grow large.
    """
    form = q_form(alpha, beta, gamma, tol)
    if form.dim == 0:
        return InertiaTriple(0, 0, 0)
    zero = subspace_sum(intersect(alpha, beta, tol), intersect(alpha, gamma, tol), tol).k
    w = np.linalg.eigvalsh(form.matrix)
    live = w[np.argsort(np.abs(w))[zero:]]
    return InertiaTriple(int(np.sum(live > 0)), zero, int(np.sum(live < 0)))


def _complement_frame(F0: np.ndarray, J1: np.ndarray) -> np.ndarray:
    return np.linalg.qr(J1 @ F0)[0]


def _graph_map(F0: np.ndarray, Fc: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Matrix of ``A`` with ``span(F) = {x + A x : x in span(F0)}``, ``A x`` in ``span(Fc)``."""
    coords = np.linalg.solve(np.hstack([F0, Fc]), F)
    k = F0.shape[1]
    return np.linalg.solve(coords[:k].T, coords[k:].T).T


def q_derivative_form(path: LagrangianPath, t: float, tol: Tolerances = DEFAULT_TOL,
                      h: float = 1e-5, method: str = "auto") -> HermitianForm:
    """Derivative form of a Lagrangian path at ``t`` on the whole subspace.

    ``method="analytic"`` uses the generator of a graph path, ``"fd"`` a
    second-order difference of the local graph map over a fixed Lagrangian
    complement, ``"auto"`` picks the analytic route when available.
    """
    space = path.space
    data = path.tangent_generator(t) if method in ("auto", "analytic") else None
    if method == "analytic" and data is None:
        raise ValueError("path carries no generator")
    if data is not None:
        return _graph_tangent_form(path, t, *data)
    F0 = np.linalg.qr(path.frame(t))[0]
    Fc = _complement_frame(F0, space.J1)
    a, b = path.a, path.b
    if t - h < a:
        D = (-3 * _graph_map(F0, Fc, F0) + 4 * _graph_map(F0, Fc, path.frame(t + h))
             - _graph_map(F0, Fc, path.frame(t + 2 * h))) / (2 * h)
    elif t + h > b:
        D = (3 * _graph_map(F0, Fc, F0) - 4 * _graph_map(F0, Fc, path.frame(t - h))
             + _graph_map(F0, Fc, path.frame(t - 2 * h))) / (2 * h)
    else:
        D = (_graph_map(F0, Fc, path.frame(t + h)) - _graph_map(F0, Fc, path.frame(t - h))) / (2 * h)
    H = D.conj().T @ (Fc.conj().T @ space.J @ F0)
    return HermitianForm(SubspaceFrame(space, F0), _hermitian_part(H))


def _graph_tangent_form(path: LagrangianPath, t: float, G: np.ndarray, A: np.ndarray) -> HermitianForm:
    # on (u, G u): Q = omega_1(-G^{-1} G' u, v) = -(G v)^H J_2 A (G u)
    d = G.shape[1]
    J2 = path.space.J[d:, d:]
    Hu = -G.conj().T @ J2 @ A @ G
    F = np.linalg.qr(np.vstack([np.eye(d, dtype=complex), G]))[0]
    T = F[:d]
    return HermitianForm(SubspaceFrame(path.space, F), _hermitian_part(T.conj().T @ Hu @ T))


def crossing_form(lam: LagrangianPath, mu: LagrangianPath, t: float,
                  tol: Tolerances = DEFAULT_TOL, meet: Optional[SubspaceFrame] = None,
                  method: str = "auto") -> HermitianForm:
    """``Q(lam, t) - Q(mu, t)`` restricted to ``lam(t) ∩ mu(t)``."""
    if meet is None:
        meet = intersect(lam.subspace(t), mu.subspace(t), tol)
    if meet.k == 0:
        return HermitianForm(meet, np.zeros((0, 0)))
    ql = q_derivative_form(lam, t, tol, method=method).restrict(meet)
    if mu.constant:
        return ql
    qm = q_derivative_form(mu, t, tol, method=method).restrict(meet)
    return HermitianForm(meet, ql.matrix - qm.matrix)


def form_on_basis(form: HermitianForm, vectors: np.ndarray) -> np.ndarray:
    """Matrix ``[i, j] = h(v_j, v_i)`` for vectors inside the form's domain."""
    K = form.basis.cols.conj().T @ vectors
    return K.conj().T @ form.matrix @ K


__all__ = [
    "FormConstructionError",
    "HermitianForm",
    "InertiaTriple",
    "crossing_form",
    "form_on_basis",
    "inertia",
    "q_derivative_form",
    "q_form",
    "q_inertia",
]
