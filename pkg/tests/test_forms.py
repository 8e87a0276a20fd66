import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import assume, given
from hypothesis import strategies as st

from sik.forms import (
    FormConstructionError,
    HermitianForm,
    InertiaTriple,
    crossing_form,
    form_on_basis,
    inertia,
    q_derivative_form,
    q_form,
    q_inertia,
)
from sik.instances import audit_path, lagrangian_family
from sik.paths import GraphPath, LagrangianPath
from sik.symplectic import (
    SubspaceFrame,
    SymplecticSpace,
    intersect,
    random_hermitian,
    random_lagrangian,
    rotate_lagrangian,
    same_subspace,
    subspace_sum,
    whole_space,
)

seeds = st.integers(0, 2**31 - 1)


def test_inertia_of_diagonal():
    assert inertia(np.diag([3.0, -1.0, 0.0, 2.0])) == InertiaTriple(2, 1, 1)
    assert inertia(np.zeros((0, 0))).total == 0


def test_inertia_cut_is_relative_above_unit_scale():
    assert inertia(np.diag([1e9, 1e-3])).zero == 1
    assert inertia(np.diag([1e-3, 1e-9])).as_tuple() == (1, 1, 0)


@given(st.integers(1, 6), seeds)
def test_sylvester_congruence(k, seed):
    rng = np.random.default_rng(seed)
    H = random_hermitian(k, rng)
    C = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    assert inertia(C.conj().T @ H @ C) == inertia(H)


def test_form_restrict_and_kernel():
    V = SymplecticSpace.standard(2)
    E = whole_space(V)
    h = HermitianForm(E, np.diag([1.0, 0.0, -2.0, 0.0]))
    ker = h.kernel()
    assert ker.k == 2
    assert np.allclose(form_on_basis(h, ker.cols), 0)
    sub = SubspaceFrame(V, np.eye(4)[:, :2])
    assert inertia(h.restrict(sub)).as_tuple() == (1, 1, 0)


@given(st.integers(1, 4), seeds)
def test_q_form_is_hermitian_with_expected_kernel(n, seed):
    V = SymplecticSpace.standard(n)
    a, b, c = lagrangian_family(V, 3, seed)
    Q = q_form(a, b, c)
    assert np.allclose(Q.matrix, Q.matrix.conj().T)
    ker = subspace_sum(intersect(a, b), intersect(a, c))
    assert same_subspace(Q.kernel(), ker)


@given(st.integers(1, 4), seeds)
def test_q_inertia_matches_plain_inertia_on_generic_triples(n, seed):
    V = SymplecticSpace.standard(n)
    a, b, c = (random_lagrangian(V, seed + k) for k in range(3))
    assert q_inertia(a, b, c) == inertia(q_form(a, b, c))


@given(st.integers(1, 4), seeds)
def test_q_inertia_cyclic(n, seed):
    V = SymplecticSpace.standard(n)
    a, b, c = lagrangian_family(V, 3, seed)
    assert q_inertia(a, b, c).plus == q_inertia(b, c, a).plus == q_inertia(c, a, b).plus


@pytest.mark.parametrize("seed", range(5))
def test_q_inertia_stable_as_gamma_approaches_beta(seed):
    # Q(a, b; rot(b, s)) blows up like 1/s; its signature must not change
    V = SymplecticSpace.standard(4)
    rng = np.random.default_rng(seed)
    a, b = random_lagrangian(V, rng), random_lagrangian(V, rng)
    counts = {q_inertia(a, b, rotate_lagrangian(b, s)).as_tuple() for s in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)}
    assert len(counts) == 1
    assert counts.pop()[1] == 0


def test_q_form_rejects_non_isotropic():
    V = SymplecticSpace.standard(1)
    with pytest.raises(FormConstructionError):
        q_form(whole_space(V), random_lagrangian(V, 0), random_lagrangian(V, 1))


@pytest.mark.parametrize("c", [-1.5, 0.7, 2.0])
def test_rotation_derivative_form_has_sign_of_speed(c):
    V = SymplecticSpace.standard(2)
    L = random_lagrangian(V, 3).cols
    lam = LagrangianPath(V, lambda s: sla.expm(c * s * V.J) @ L, 0.0, 1.0, np.linspace(0, 1, 9))
    got = inertia(q_derivative_form(lam, 0.4, method="fd"))
    assert got == (InertiaTriple(2, 0, 0) if c > 0 else InertiaTriple(0, 0, 2))


@given(st.integers(1, 3), seeds, st.floats(0.05, 0.95))
def test_graph_derivative_form_two_ways(n, seed, t):
    V = SymplecticSpace.standard(n)
    path = audit_path(V, seed)
    # the generator jumps at breaks, where a central difference averages both sides
    assume(np.min(np.abs(path.breaks - t)) > 1e-3)
    g = GraphPath(path)
    an = q_derivative_form(g, t, method="analytic")
    fd = q_derivative_form(g, t, method="fd")
    F = an.basis.cols
    scale = max(1.0, np.abs(an.matrix).max())
    assert np.abs(form_on_basis(an, F) - form_on_basis(fd, F)).max() / scale < 1e-6


def test_crossing_form_on_constant_target():
    V = SymplecticSpace.standard(1)
    L = np.array([[1.0], [0.0]], dtype=complex)
    lam = LagrangianPath(V, lambda s: sla.expm(s * V.J) @ L, -0.5, 0.5, np.linspace(-0.5, 0.5, 5))
    mu = LagrangianPath.constant_path(SubspaceFrame(V, L), -0.5, 0.5)
    G = crossing_form(lam, mu, 0.0)
    assert G.dim == 1 and inertia(G).plus == 1
    assert crossing_form(lam, mu, 0.3).dim == 0
