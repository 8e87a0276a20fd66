"""Complex symplectic spaces, subspace frames and the arithmetic on them.

The symplectic form is ``omega(x, y) = <J x, y> = y^H J x`` with the standard
Hermitian inner product, where ``J`` is invertible and ``iJ`` is Hermitian
with zero signature.  Subspaces are carried as matrices with orthonormal
columns; all span-level operations go through an SVD with a relative rank cut.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg as sla


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    ``rank`` is relative to the largest singular value, ``inertia`` relative
    to the largest absolute eigenvalue (absolute once that is below one),
    ``integer`` is the snapping window for phases divided by ``2 pi``.
    """

    rank: float = 1e-8
    inertia: float = 1e-7
    integer: float = 1e-6
    sympl: float = 1e-8
    angle: float = 1e-7

    def __post_init__(self) -> None:
        for name in ("rank", "inertia", "integer", "sympl", "angle"):
            val = getattr(self, name)
            if not (0 < val < 1):
                raise ValueError(f"tolerance {name}={val!r} must lie in (0, 1)")


DEFAULT_TOL = Tolerances()

MatrixLike = Union[np.ndarray, Sequence[Sequence[complex]]]


class SymplecticSpace:
    """``C^{2n}`` equipped with ``omega(x, y) = y^H J x``."""

    def __init__(self, J: MatrixLike, check: bool = True):
        J = np.array(J, dtype=complex)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
            raise ValueError(f"J must be square of even size, got {J.shape}")
        self.J = J
        self.dim = J.shape[0]
        self.n = self.dim // 2
        if check:
            scale = max(np.linalg.norm(J, 2), 1.0)
            if np.linalg.norm(J + J.conj().T, 2) > 1e-10 * scale:
                raise ValueError("iJ is not Hermitian")
            w = np.linalg.eigvalsh(1j * J)
            if np.min(np.abs(w)) <= 1e-12 * scale:
                raise ValueError("J is singular")
            if np.sum(w > 0) != self.n:
                raise ValueError("iJ must have signature zero")

    @classmethod
    def standard(cls, n: int) -> "SymplecticSpace":
        if n < 0:
            raise ValueError("n must be non-negative")
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return cls(np.block([[zero, -eye], [eye, zero]]), check=n > 0)

    def omega(self, x: np.ndarray, y: np.ndarray) -> complex:
        return complex(np.vdot(y, self.J @ x))

    def gram(self, F: np.ndarray, G: Optional[np.ndarray] = None) -> np.ndarray:
        """Matrix ``M[i, j] = omega(F[:, j], G[:, i])``."""
        G = F if G is None else G
        return G.conj().T @ self.J @ F

    def negated(self) -> "SymplecticSpace":
        return SymplecticSpace(-self.J, check=False)

    def same_as(self, other: "SymplecticSpace") -> bool:
        return self is other or (
            self.dim == other.dim and np.allclose(self.J, other.J, atol=1e-12)
        )

    @cached_property
    def Jinv(self) -> np.ndarray:
        return np.linalg.inv(self.J)

    @cached_property
    def J1(self) -> np.ndarray:
        """``(-J^2)^{-1/2} J``; squares to ``-1`` and commutes with ``J``."""
        w, E = np.linalg.eigh(1j * self.J)
        return E @ np.diag(-1j * np.sign(w)) @ E.conj().T

    @cached_property
    def abs_J(self) -> np.ndarray:
        """``(-J^2)^{1/2}``, positive definite."""
        w, E = np.linalg.eigh(1j * self.J)
        return (E * np.abs(w)) @ E.conj().T

    @cached_property
    def split(self) -> tuple:
        """Scaled eigenbases of ``iJ``.

        Returns ``(P, R, Tinv)``: ``P`` spans the positive eigenspace with
        ``i omega`` equal to the identity on its coordinates, ``R`` the negative
        one with ``-i omega`` the identity, ``Tinv`` inverts ``[P R]``.
        """
        w, E = np.linalg.eigh(1j * self.J)
        pos = w > 0
        P = E[:, pos] / np.sqrt(w[pos])
        R = E[:, ~pos] / np.sqrt(-w[~pos])
        Tinv = np.vstack(
            [(E[:, pos] * np.sqrt(w[pos])).conj().T, (E[:, ~pos] * np.sqrt(-w[~pos])).conj().T]
        )
        return P, R, Tinv

    def __repr__(self) -> str:
        return f"SymplecticSpace(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class SubspaceFrame:
    """Orthonormal basis (columns of ``cols``) of a subspace of ``space``."""

    space: SymplecticSpace
    cols: np.ndarray

    def __post_init__(self) -> None:
        cols = np.asarray(self.cols, dtype=complex)
        if cols.ndim != 2 or cols.shape[0] != self.space.dim:
            raise ValueError(
                f"frame needs {self.space.dim} rows, got shape {cols.shape}"
            )
        object.__setattr__(self, "cols", cols)

    @property
    def k(self) -> int:
        return self.cols.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.cols @ self.cols.conj().T

    def __repr__(self) -> str:
        return f"SubspaceFrame(dim={self.space.dim}, k={self.k})"


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    """Linear map between two symplectic spaces preserving the forms."""

    source: SymplecticSpace
    target: SymplecticSpace
    matrix: np.ndarray

    def __post_init__(self) -> None:
        M = np.asarray(self.matrix, dtype=complex)
        if M.shape != (self.target.dim, self.source.dim):
            raise ValueError("matrix shape does not match the spaces")
        object.__setattr__(self, "matrix", M)


# ---------------------------------------------------------------- helpers


def orth(A: np.ndarray, tol: float = DEFAULT_TOL.rank) -> np.ndarray:
    """Orthonormal basis of the column space of ``A`` (relative SVD cut)."""
    A = np.asarray(A, dtype=complex)
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    return U[:, s > tol * s[0]]


def null_space(A: np.ndarray, tol: float = DEFAULT_TOL.rank) -> np.ndarray:
    """Orthonormal basis of the kernel of ``A`` (relative SVD cut)."""
    A = np.asarray(A, dtype=complex)
    ncol = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(ncol, dtype=complex)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    if s.size == 0 or s[0] == 0:
        return np.eye(ncol, dtype=complex)
    rank = int(np.sum(s > tol * s[0]))
    return Vh[rank:].conj().T


def matrix_rank(A: np.ndarray, tol: float = DEFAULT_TOL.rank) -> int:
    """Rank with cut ``tol * s_max``."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return 0 if s[0] == 0 else int(np.sum(s > tol * s[0]))


def _cols(x: Union[SubspaceFrame, np.ndarray]) -> np.ndarray:
    return x.cols if isinstance(x, SubspaceFrame) else np.asarray(x, dtype=complex)


def _mat(M: Union[SymplecticMap, np.ndarray]) -> np.ndarray:
    return M.matrix if isinstance(M, SymplecticMap) else np.asarray(M, dtype=complex)


def span(space: SymplecticSpace, vectors: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    return SubspaceFrame(space, orth(vectors, tol.rank))


def zero_subspace(space: SymplecticSpace) -> SubspaceFrame:
    return SubspaceFrame(space, np.zeros((space.dim, 0), dtype=complex))


def whole_space(space: SymplecticSpace) -> SubspaceFrame:
    return SubspaceFrame(space, np.eye(space.dim, dtype=complex))


# ------------------------------------------------------ subspace arithmetic


def intersect(a: SubspaceFrame, b: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    if a.k == 0 or b.k == 0:
        return zero_subspace(a.space)
    N = null_space(np.hstack([a.cols, -b.cols]), tol.rank)
    if N.shape[1] == 0:
        return zero_subspace(a.space)
    return SubspaceFrame(a.space, orth(a.cols @ N[: a.k], tol.rank))


def subspace_sum(a: SubspaceFrame, b: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    return SubspaceFrame(a.space, orth(np.hstack([a.cols, b.cols]), tol.rank))


def annihilator(a: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    """``{x : omega(x, f) = 0 for every f in a}``."""
    if a.k == 0:
        return whole_space(a.space)
    return SubspaceFrame(a.space, null_space(a.cols.conj().T @ a.space.J, tol.rank))


def orthogonal_complement(a: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    if a.k == 0:
        return whole_space(a.space)
    return SubspaceFrame(a.space, null_space(a.cols.conj().T, tol.rank))


def dim_intersection(a: SubspaceFrame, b: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> int:
    if a.k == 0 or b.k == 0:
        return 0
    return a.k + b.k - matrix_rank(np.hstack([a.cols, b.cols]), tol.rank)


def contains(big: SubspaceFrame, small: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> bool:
    return dim_intersection(big, small, tol) == small.k


def same_subspace(a: SubspaceFrame, b: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> bool:
    return a.k == b.k and contains(a, b, tol)


def apply(M: Union[SymplecticMap, np.ndarray], a: SubspaceFrame,
          target: Optional[SymplecticSpace] = None, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    """Image of the subspace ``a`` under ``M``."""
    if target is None:
        target = M.target if isinstance(M, SymplecticMap) else a.space
    return SubspaceFrame(target, orth(_mat(M) @ a.cols, tol.rank))


def is_isotropic(a: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> bool:
    if a.k == 0:
        return True
    scale = np.linalg.norm(a.space.J, 2)
    return bool(np.linalg.norm(a.space.gram(a.cols), 2) <= tol.rank * scale)


def is_lagrangian(a: SubspaceFrame, tol: Tolerances = DEFAULT_TOL) -> bool:
    return a.k == a.space.n and is_isotropic(a, tol)


def is_symplectic(M: np.ndarray, source: SymplecticSpace,
                  target: Optional[SymplecticSpace] = None, tol: Tolerances = DEFAULT_TOL) -> bool:
    target = source if target is None else target
    M = _mat(M)
    drift = np.linalg.norm(M.conj().T @ target.J @ M - source.J, 2)
    scale = np.linalg.norm(source.J, 2) * max(1.0, np.linalg.norm(M, 2) ** 2)
    return bool(drift <= tol.sympl * scale)


def require_lagrangian(a: SubspaceFrame, name: str = "subspace", tol: Tolerances = DEFAULT_TOL) -> None:
    if not is_lagrangian(a, tol):
        raise ValueError(f"{name} is not Lagrangian (k={a.k}, n={a.space.n})")


# ------------------------------------------------- constructions and maps


def doubled_space(space: SymplecticSpace, other: Optional[SymplecticSpace] = None) -> SymplecticSpace:
    """``V1 + V2`` with the form ``(-omega_1) + omega_2``."""
    other = space if other is None else other
    return SymplecticSpace(sla.block_diag(-space.J, other.J), check=False)


def graph_lagrangian(M: Union[SymplecticMap, np.ndarray], source: Optional[SymplecticSpace] = None,
                     target: Optional[SymplecticSpace] = None, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    """``{(x, Mx)}`` inside the doubled space."""
    if isinstance(M, SymplecticMap):
        source, target = M.source, M.target
    M = _mat(M)
    if source is None:
        raise ValueError("source space required for a bare matrix")
    target = source if target is None else target
    if not is_symplectic(M, source, target, tol):
        raise ValueError("map is not symplectic")
    F = np.vstack([np.eye(source.dim, dtype=complex), M])
    Q, _ = np.linalg.qr(F)
    return SubspaceFrame(doubled_space(source, target), Q)


def diagonal_of(a: SubspaceFrame, doubled: Optional[SymplecticSpace] = None) -> SubspaceFrame:
    """``{(x, x) : x in a}`` as a subspace of the doubled space."""
    doubled = doubled_space(a.space) if doubled is None else doubled
    return SubspaceFrame(doubled, np.vstack([a.cols, a.cols]) / np.sqrt(2.0))


def product_subspace(a: SubspaceFrame, b: SubspaceFrame,
                     doubled: Optional[SymplecticSpace] = None) -> SubspaceFrame:
    """``a x b`` inside ``V_a + V_b``."""
    doubled = doubled_space(a.space, b.space) if doubled is None else doubled
    return SubspaceFrame(doubled, sla.block_diag(a.cols, b.cols))


def swap_factors(a: SubspaceFrame) -> SubspaceFrame:
    """``{(y, x) : (x, y) in a}``; the spaces are assumed equal."""
    n = a.space.dim // 2
    return SubspaceFrame(a.space, np.vstack([a.cols[n:], a.cols[:n]]))


def rotate_lagrangian(a: SubspaceFrame, s: float) -> SubspaceFrame:
    """Image of ``a`` under ``exp(s J)``."""
    return SubspaceFrame(a.space, np.linalg.qr(sla.expm(s * a.space.J) @ a.cols)[0])


def unitary_generator(a: SubspaceFrame) -> np.ndarray:
    """The unitary ``U`` from the negative to the positive ``iJ`` part with ``a = Graph(U)``."""
    _, _, Tinv = a.space.split
    Z = Tinv @ a.cols
    n = a.space.n
    return np.linalg.solve(Z[:n].T, Z[n:].T).T


def lagrangian_from_generator(space: SymplecticSpace, U: np.ndarray) -> SubspaceFrame:
    P, R, _ = space.split
    return SubspaceFrame(space, np.linalg.qr(P + R @ U)[0])


# ------------------------------------------------------------- randomness


def _rng(seed: Union[int, np.random.Generator, None]) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_unitary(k: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    Z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian(k: int, seed=None, scale: float = 1.0) -> np.ndarray:
    rng = _rng(seed)
    Z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    return scale * (Z + Z.conj().T) / 2


def random_lagrangian(space: SymplecticSpace, seed=None) -> SubspaceFrame:
    """Haar-distributed Lagrangian: a random unitary applied to a reference one."""
    return lagrangian_from_generator(space, random_unitary(space.n, seed))


def random_symplectic(space: SymplecticSpace, seed=None, scale: float = 1.0, factors: int = 2) -> np.ndarray:
    """Product of exponentials of random Hamiltonian generators."""
    rng = _rng(seed)
    M = np.eye(space.dim, dtype=complex)
    for _ in range(factors):
        B = random_hermitian(space.dim, rng, scale)
        M = sla.expm(-space.Jinv @ B) @ M
    return M


def random_isotropic(space: SymplecticSpace, k: int, seed=None) -> SubspaceFrame:
    if not 0 <= k <= space.n:
        raise ValueError("isotropic dimension must be at most n")
    rng = _rng(seed)
    L = random_lagrangian(space, rng)
    C = random_unitary(space.n, rng)[:, :k]
    return SubspaceFrame(space, L.cols @ C)


class IsotropicReduction:
    """The quotient ``eps^omega / eps`` realised on the orthogonal complement
    of ``eps`` inside ``eps^omega``.

    ``basis`` has orthonormal columns; the quotient space carries the
    restricted form, so ``project`` is just a coordinate change.
    """

    def __init__(self, eps: SubspaceFrame, tol: Tolerances = DEFAULT_TOL):
        if not is_isotropic(eps, tol):
            raise ValueError("reduction needs an isotropic subspace")
        self.eps = eps
        self.tol = tol
        self.eps_omega = annihilator(eps, tol)
        E = self.eps_omega.cols
        self.basis = E @ null_space(eps.cols.conj().T @ E, tol.rank) if eps.k else E
        Jq = self.basis.conj().T @ eps.space.J @ self.basis
        self.space = SymplecticSpace((Jq - Jq.conj().T) / 2, check=self.basis.shape[1] > 0)

    def coords(self, x: np.ndarray) -> np.ndarray:
        return self.basis.conj().T @ x

    def lift(self, y: np.ndarray) -> np.ndarray:
        return self.basis @ y

    def project(self, delta: SubspaceFrame) -> SubspaceFrame:
        """``pi(delta)``: the image of ``delta`` intersected with ``eps^omega``."""
        inner = intersect(delta, self.eps_omega, self.tol)
        return SubspaceFrame(self.space, orth(self.coords(inner.cols), self.tol.rank))


def reduce_by_isotropic(eps: SubspaceFrame, delta: SubspaceFrame,
                        tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    return IsotropicReduction(eps, tol).project(delta)


def random_lagrangian_containing(iso: SubspaceFrame, seed=None, tol: Tolerances = DEFAULT_TOL) -> SubspaceFrame:
    """Random Lagrangian containing the isotropic subspace ``iso``."""
    red = IsotropicReduction(iso, tol)
    parts = [iso.cols]
    if red.space.n > 0:
        parts.append(red.lift(random_lagrangian(red.space, seed).cols))
    return SubspaceFrame(iso.space, orth(np.hstack(parts), tol.rank))
