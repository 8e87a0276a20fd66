import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sik.indices import e_ceil
from sik.mean_index import (
    ExperimentConfig,
    FieldSpec,
    FieldTerm,
    FlowSpec,
    OrderingError,
    cauchy_allowance,
    certify_ordering,
    default_step,
    flow_invariance_audit,
    fundamental_solution,
    index_along_flow,
    index_band,
    indices_along_flow,
    mean_index_estimate,
    monotonicity_audit,
    shift_band,
    subadditivity_audit,
)
from sik.symplectic import SymplecticSpace, is_symplectic

seeds = st.integers(0, 2**31 - 1)
FLOW = FlowSpec((1.0, math.sqrt(2.0)))
V2 = SymplecticSpace.standard(2)


def test_flow_wraps_and_validates():
    assert np.allclose(FLOW.point([0.5, 0.5], 1.0), [0.5, (0.5 + math.sqrt(2)) % 1])
    assert FLOW.orbit([0.0, 0.0], np.array([0.0, 1.0, 2.0])).shape == (3, 2)
    with pytest.raises(ValueError):
        FlowSpec(())
    with pytest.raises(ValueError):
        FlowSpec((1.0, float("nan")))


def test_field_terms_validated():
    with pytest.raises(ValueError, match="Hermitian"):
        FieldTerm((1, 0), np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError, match="sine"):
        FieldTerm((0, 0), np.eye(2), np.eye(2))
    with pytest.raises(ValueError, match="does not match"):
        FieldSpec(V2, [FieldTerm((1, 0), np.eye(2))])


@given(seeds, st.integers(1, 3))
def test_bound_dominates_field(seed, n):
    V = SymplecticSpace.standard(n)
    field = FieldSpec.random(V, 2, seed, modes=3, scale=0.7, offset=0.4)
    c = field.bound()
    pts = np.random.default_rng(seed).random((40, 2))
    absJ = V.abs_J
    for B in field.at_points(pts):
        assert np.linalg.eigvalsh(c * absJ - B).min() >= -1e-9
        assert np.linalg.eigvalsh(c * absJ + B).min() >= -1e-9


def test_bound_of_scaled_abs_j_is_exact():
    assert math.isclose(FieldSpec.scaled_abs_j(V2, -2.5, 2).bound(), 2.5)
    assert FieldSpec.zero(V2, 2).bound() == 0.0


def test_default_step_is_dyadic():
    field = FieldSpec.random(V2, 2, 0, modes=2)
    h = default_step(FLOW, field)
    assert math.log2(h) == int(math.log2(h))
    assert h * 64 * field.max_frequency(FLOW) <= 1.0
    assert default_step(FLOW, FieldSpec.scaled_abs_j(V2, 1.0, 2)) == 1.0


@given(seeds)
@settings(max_examples=15)
def test_fundamental_solution_symplectic_and_cocycle(seed):
    field = FieldSpec.random(V2, 2, seed, modes=2, scale=0.5)
    h = default_step(FLOW, field)
    xi = np.random.default_rng(seed).random(2)
    s, t = 37 * h, 53 * h
    g = fundamental_solution(FLOW, field, xi, s + t, h)
    assert is_symplectic(g.end, V2)
    a = fundamental_solution(FLOW, field, xi, s, h).end
    b = fundamental_solution(FLOW, field, FLOW.point(xi, s), t, h).end
    assert np.allclose(g.end, b @ a, atol=1e-8 * max(1.0, np.abs(g.end).max()))


@pytest.mark.parametrize("c", [-2.5, -1.0, 0.5, 2.5])
@pytest.mark.parametrize("tau", [0.5, 3.0, 16.0])
def test_constant_field_matches_rotation_formula(c, tau):
    field = FieldSpec.scaled_abs_j(V2, c, 2)
    assert index_along_flow(FLOW, field, [0.1, 0.2], tau) == 4 * e_ceil(c * tau / (2 * math.pi))


def test_zero_field_and_zero_horizon():
    assert index_along_flow(FLOW, FieldSpec.zero(V2, 2), [0.0, 0.0], 5.0) == 0
    assert index_along_flow(FLOW, FieldSpec.random(V2, 2, 1), [0.0, 0.0], 0.0) == 0


@given(seeds)
@settings(max_examples=10)
def test_sweep_matches_single_horizons(seed):
    field = FieldSpec.random(V2, 2, seed, modes=2, scale=0.5, offset=1.0)
    xi = np.random.default_rng(seed).random(2)
    taus = [1.0, 2.5, 4.0, 8.0]
    got = indices_along_flow(FLOW, field, xi, taus)
    assert list(got) == [index_along_flow(FLOW, field, xi, t) for t in taus]


def test_bands():
    assert index_band(2.5, 4, 1.0) == (0, 4)
    assert index_band(2 * math.pi, 4, 1.0) == (-4, 4)
    assert shift_band(2.5, 4, 1.0) == (-4, 12)
    assert math.isclose(cauchy_allowance(2.5, 4, 8.0), (2 * 4 * 1 + 4) * 2 / 8.0)


@given(seeds, st.sampled_from([1.0, 4.0, 9.5, 20.0]))
@settings(max_examples=15)
def test_indices_respect_band(seed, tau):
    field = FieldSpec.random(V2, 2, seed, modes=2, scale=0.6, offset=float(seed % 5) - 2.0)
    i = index_along_flow(FLOW, field, [0.3, 0.7], tau)
    lo, hi = index_band(field.bound(), 4, tau)
    assert lo <= i <= hi


def test_report_fields():
    field = FieldSpec.scaled_abs_j(V2, 2.5, 2)
    rep = mean_index_estimate(FLOW, field, [0.0, 0.0], [16, 32, 64, 128], step=1.0)
    assert rep.in_band and rep.cauchy_ok
    assert len(rep.cauchy_gaps) == 3
    assert abs(rep.estimate - 4 * 2.5 / (2 * math.pi)) <= 4 / 128
    d = rep.to_dict()
    assert d["i_tau"] == rep.indices and d["estimate"] == rep.estimate
    with pytest.raises(ValueError):
        mean_index_estimate(FLOW, field, [0.0, 0.0], [4, 2])


@given(seeds)
@settings(max_examples=10)
def test_subadditivity_and_shift(seed):
    rng = np.random.default_rng(seed)
    field = FieldSpec.random(V2, 2, seed, modes=2, scale=0.5, offset=float(rng.uniform(-1, 1)))
    h = default_step(FLOW, field)
    xi = rng.random(2)
    pairs = [(h * int(rng.integers(0, 200)), h * int(rng.integers(0, 200))), (0.0, 1.0)]
    assert subadditivity_audit(FLOW, field, xi, pairs, h).passed
    assert flow_invariance_audit(FLOW, field, xi, [1.0, 5.0], 16.0, h).passed


def test_ordering_certificate():
    low = FieldSpec.random(V2, 2, 4, modes=2, scale=0.5)
    high = low.shifted(0.3 * np.eye(4))
    assert certify_ordering(FLOW, low, high, [0.1, 0.1], 4.0, 1 / 64) > 0.29
    with pytest.raises(OrderingError):
        certify_ordering(FLOW, high, low, [0.1, 0.1], 4.0, 1 / 64)
    assert monotonicity_audit(FLOW, low, high, [0.1, 0.1], 8.0).passed


def test_experiment_config_validation():
    field = FieldSpec.scaled_abs_j(V2, 1.0, 2)
    bad = ExperimentConfig(2, (1.0,), field, [(0.0, 0.0)], [1.0])
    with pytest.raises(ValueError):
        bad.validate()
    with pytest.raises(ValueError):
        ExperimentConfig(2, (1.0, 2.0), field, [(0.0,)], [1.0]).validate()
    with pytest.raises(ValueError):
        ExperimentConfig(1, (1.0, 2.0), field, [(0.0, 0.0)], [1.0]).validate()
    ok = ExperimentConfig(2, (1.0, 2.0), field, [(0.0, 0.0), (0.5, 0.5)], [8.0, 16.0], step=1.0)
    reps = ok.run()
    assert [r.indices for r in reps] == [[8, 12], [8, 12]]
