import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sik.indices import e_ceil, maslov_type_index, nu1
from sik.instances import audit_path, l0_pair
from sik.iteration import (
    BrakeStructure,
    IterationData,
    NotInL0Error,
    audit_gcd_bounds,
    audit_iteration_bounds,
    audit_n_reverse,
    audit_reverse,
    brake_iterate,
    concat,
    in_l0,
    iterate,
    l0_decomposition,
    reversal_path,
)
from sik.paths import FunctionPath, rotation_path
from sik.symplectic import SubspaceFrame, SymplecticSpace, contains, doubled_space, random_lagrangian

seeds = st.integers(0, 2**31 - 1)
slow = settings(max_examples=12)


def as_function_path(path):
    return FunctionPath(path.source, path, path.tau, path.tracking_grid())


@given(st.integers(1, 3), seeds)
def test_concat_and_iterate_endpoints(n, seed):
    V = SymplecticSpace.standard(n)
    g1, g2 = audit_path(V, seed), audit_path(V, seed + 1, tau=0.7)
    assert np.allclose(concat(g1, g2).end, g2.end @ g1.end, atol=1e-8)
    assert math.isclose(concat(g1, g2).tau, 1.7)
    assert np.allclose(iterate(g1, 3).end, np.linalg.matrix_power(g1.end, 3), atol=1e-6)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
@pytest.mark.parametrize("c", [-2.0, 0.9, 4.0])
def test_rotation_iterates(k, c):
    V = SymplecticSpace.standard(2)
    got = maslov_type_index(iterate(rotation_path(V, c, 1.0), k)).value
    assert got == 4 * e_ceil(k * c / (2 * math.pi))


@given(st.integers(1, 3), seeds, st.integers(2, 5))
def test_brake_iterate_piecewise_matches_closed_form(n, seed, k):
    V = SymplecticSpace.standard(n)
    br = BrakeStructure.standard(V)
    path = audit_path(V, seed)
    fast = brake_iterate(path, k, br)
    ref = brake_iterate(as_function_path(path), k, br)
    for t in np.linspace(0.0, k * path.tau, 7):
        assert np.allclose(fast(t), ref(t), atol=1e-7 * max(1.0, np.abs(ref(t)).max()))
    assert np.allclose(brake_iterate(path, 2, br).end, br.poincare(path), atol=1e-7)


def test_brake_structure_validation():
    V = SymplecticSpace.standard(2)
    L = random_lagrangian(V, 0)
    with pytest.raises(ValueError):
        BrakeStructure(L, L)
    br = BrakeStructure.standard(V)
    assert np.allclose(br.N @ br.N, np.eye(4))
    with pytest.raises(ValueError):
        brake_iterate(audit_path(V, 0), 0, br)


@given(st.integers(1, 3), seeds)
def test_reversal_endpoints(n, seed):
    V = SymplecticSpace.standard(n)
    path = audit_path(V, seed)
    rev = reversal_path(path)
    assert np.allclose(rev(0.0), np.eye(V.dim), atol=1e-8)
    assert np.allclose(rev.end, np.linalg.inv(path.end), atol=1e-8)


def test_iteration_data_counts():
    e = np.eye(4, dtype=complex)
    A = np.diag([1, 1, -1, -1]).astype(complex)
    B = np.diag([1, -1, 1, -1]).astype(complex)
    data = IterationData([1.0, 1.0], [A, B])
    assert data.A() == 1
    # ker(B - I) ∩ ker(A - I) is one-dimensional; no interior partial products for k = 2
    assert data.B() == 1
    assert IterationData([1.0, 1.0, 1.0], [e, e, e]).A() == 4
    assert nu1(B @ A) == 2


@slow
@given(st.integers(1, 3), seeds)
def test_iteration_bounds_two_and_three(n, seed):
    V = SymplecticSpace.standard(n)
    paths = [audit_path(V, seed + j) for j in range(3)]
    assert audit_iteration_bounds(paths[:2]).passed
    assert audit_iteration_bounds(paths).passed


@slow
@given(st.integers(1, 3), seeds, st.sampled_from([(1, 1), (2, 3), (2, 4), (3, 3)]))
def test_gcd_bounds(n, seed, ks):
    V = SymplecticSpace.standard(n)
    assert audit_gcd_bounds(audit_path(V, seed), *ks).passed


@slow
@given(st.integers(1, 3), seeds)
def test_reverse_identities(n, seed):
    V = SymplecticSpace.standard(n)
    path = audit_path(V, seed)
    W = random_lagrangian(doubled_space(V), seed)
    assert audit_reverse(path, W).passed
    assert audit_n_reverse(path, W, BrakeStructure.standard(V)).passed


@given(st.integers(1, 3), seeds)
def test_l0_decomposition(n, seed):
    V = SymplecticSpace.standard(n)
    br = BrakeStructure.standard(V)
    mu1, mu2 = l0_pair(br, seed)
    assert in_l0(mu1, br) and in_l0(mu2, br)
    d1, d2 = l0_decomposition(mu1, br), l0_decomposition(mu2, br)
    assert d1.p1.k + d1.p2.k == 2 * n
    assert contains(d2.p2, d1.p2)
    assert contains(d1.p1, d2.p1)


def test_generic_lagrangian_not_in_l0():
    V = SymplecticSpace.standard(2)
    br = BrakeStructure.standard(V)
    mu = random_lagrangian(br.doubled, 3)
    with pytest.raises(NotInL0Error):
        l0_decomposition(mu, br)
    diag = SubspaceFrame(br.doubled, br.identity_graph.cols)
    assert in_l0(diag, br)

