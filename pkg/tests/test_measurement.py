"""
遠隔射影測定モジュールのテスト
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.quantum.data_models import MeasurementSetting, Outcome, ThetaPState
from src.quantum.linalg import purity
from src.quantum.measurement import (
    conditional_purity,
    conditional_state,
    conditional_weight,
    dephase,
    is_degenerate,
    measure_dense,
    normalize_angle,
    outcome_probabilities,
    projectors,
    special_angles,
)
from src.quantum.states import make_theta_state, reduce
from src.utils.exceptions import ValidationError, ZeroProbabilityError

angles = st.floats(min_value=-math.pi, max_value=math.pi)
thetas = st.floats(min_value=0.0, max_value=math.pi)
weights = st.floats(min_value=0.0, max_value=1.0)


class TestProjectors:

    def test_complete_and_orthogonal(self):
        plus, minus = projectors(MeasurementSetting.xz(0.7))
        np.testing.assert_allclose(plus + minus, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(plus @ minus, np.zeros((2, 2)), atol=1e-15)
        np.testing.assert_allclose(plus @ plus, plus, atol=1e-15)

    def test_plus_projector_follows_direction(self):
        plus, minus = projectors(MeasurementSetting.xz(0.0))
        np.testing.assert_allclose(plus, np.diag([1.0, 0.0]), atol=1e-15)
        np.testing.assert_allclose(minus, np.diag([0.0, 1.0]), atol=1e-15)
        plus, _ = projectors(MeasurementSetting.direction([0.0, 1.0, 0.0]))
        np.testing.assert_allclose(plus, 0.5 * np.array([[1, -1j], [1j, 1]]), atol=1e-15)

    def test_direction_must_be_unit(self):
        with pytest.raises(ValidationError):
            MeasurementSetting.direction([0.0, 0.0, 0.9])

    def test_normalize_angle(self):
        assert normalize_angle(1.5 * math.pi) == pytest.approx(-0.5 * math.pi)
        assert normalize_angle(-math.pi) == pytest.approx(math.pi)
        assert normalize_angle(0.3) == pytest.approx(0.3)


class TestOutcomeProbabilities:

    def test_reference_values(self, balanced_state):
        assert outcome_probabilities(balanced_state, 0.0) == pytest.approx((0.75, 0.25))
        assert outcome_probabilities(balanced_state, math.pi / 3) == pytest.approx((0.625, 0.375))

    @settings(max_examples=100, deadline=None)
    @given(theta=thetas, p=weights, phi=angles)
    def test_probabilities_sum_to_one(self, theta, p, phi):
        r_plus, r_minus = outcome_probabilities(ThetaPState(theta, p), phi)
        assert r_plus + r_minus == pytest.approx(1.0)
        assert -1e-15 <= r_plus <= 1.0 + 1e-15


class TestConditionalStates:

    @settings(max_examples=50, deadline=None)
    @given(theta=st.floats(min_value=0.01, max_value=3.13), p=weights)
    def test_zero_angle_keeps_weights(self, theta, p):
        s = ThetaPState(theta, p)
        assert conditional_weight(s, 0.0, Outcome.PLUS) == pytest.approx(p, abs=1e-12)
        assert conditional_weight(s, 0.0, Outcome.MINUS) == pytest.approx(p, abs=1e-12)

    def test_purifying_angles(self, balanced_state):
        theta = balanced_state.theta
        assert conditional_weight(balanced_state, theta, '-') == pytest.approx(0.0, abs=1e-15)
        assert conditional_purity(balanced_state, theta, '-') == pytest.approx(1.0)
        assert conditional_weight(balanced_state, math.pi - theta, '+') == pytest.approx(1.0)
        assert conditional_purity(balanced_state, math.pi - theta, '+') == pytest.approx(1.0)

    def test_zero_probability_branch(self):
        s = ThetaPState(math.pi / 3, 1.0)
        with pytest.raises(ZeroProbabilityError) as excinfo:
            conditional_purity(s, math.pi / 3, Outcome.MINUS)
        assert excinfo.value.outcome == '-'
        assert excinfo.value.probability <= 1e-12

    def test_state_purity_matches_closed_form(self, biased_state):
        branch = conditional_state(biased_state, 0.9, Outcome.PLUS)
        assert purity(branch.state) == pytest.approx(branch.purity, abs=1e-12)
        assert np.trace(branch.state).real == pytest.approx(1.0)

    @pytest.mark.parametrize('phi', [-2.5, -0.4, 0.0, 0.9, 2.0])
    def test_dense_measurement_agrees(self, biased_state, phi):
        rho = make_theta_state(biased_state)
        branches = measure_dense(rho, MeasurementSetting.xz(phi))
        expected = outcome_probabilities(biased_state, phi)
        for branch, r in zip(branches, expected):
            assert branch.r == pytest.approx(r, abs=1e-12)
            closed = conditional_state(biased_state, phi, branch.outcome)
            np.testing.assert_allclose(branch.state, closed.state, atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(theta=st.floats(min_value=0.0, max_value=math.pi), p=weights, phi=angles)
    def test_branches_reassemble_local_state(self, theta, p, phi):
        s = ThetaPState(theta, p)
        total = np.zeros((2, 2), dtype=complex)
        for outcome, r in zip(Outcome, outcome_probabilities(s, phi)):
            if r <= 1e-12:
                continue
            branch = conditional_state(s, phi, outcome)
            total += branch.r * branch.state
        np.testing.assert_allclose(total, reduce(make_theta_state(s), 'A'), atol=1e-11)

    def test_dephasing_preserves_trace(self, biased_state):
        post = dephase(make_theta_state(biased_state), MeasurementSetting.xz(0.4))
        assert np.trace(post).real == pytest.approx(1.0)


class TestSpecialAngles:

    def test_degenerate_inputs(self):
        assert is_degenerate(ThetaPState(0.0, 0.5))
        assert is_degenerate(ThetaPState(1.0, 1.0))
        result = special_angles(ThetaPState(0.0, 0.5))
        assert result.degenerate
        assert result.purifying == [] and result.equilibrating == []

    def test_purifying_angles_are_pure(self, biased_state):
        for angle in special_angles(biased_state).purifying:
            assert conditional_weight(biased_state, angle.phi, angle.outcome) == pytest.approx(angle.p_prime, abs=1e-12)
            assert conditional_purity(biased_state, angle.phi, angle.outcome) == pytest.approx(1.0)

    def test_equilibrating_roots(self, biased_state):
        result = special_angles(biased_state)
        for angle in result.equilibrating:
            assert conditional_weight(biased_state, angle.phi, angle.outcome) == pytest.approx(0.5, abs=1e-12)

        minus = sorted(a.phi for a in result.equilibrating if a.outcome is Outcome.MINUS)
        plus = sorted(a.phi for a in result.equilibrating if a.outcome is Outcome.PLUS)
        assert minus[0] == pytest.approx(0.23984, abs=1e-4)
        assert minus[1] == pytest.approx(2.448, abs=1e-3)
        assert plus[0] == pytest.approx(-2.9017, abs=1e-3)
        assert plus[1] == pytest.approx(-0.6937, abs=1e-3)
        assert len(result.equilibrating_angles()) == 4

    def test_probability_extremum(self, biased_state):
        h = 1e-6
        for phi in special_angles(biased_state).prob_extremum:
            derivative = (
                outcome_probabilities(biased_state, phi + h)[0]
                - outcome_probabilities(biased_state, phi - h)[0]
            ) / (2 * h)
            assert abs(derivative) < 1e-6
