"""
状態生成モジュールのテスト
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.quantum.data_models import GroundStateSpec, PureQubit, ThetaPState
from src.quantum.linalg import density_to_bloch, purity, trace_distance
from src.quantum.states import (
    apply_local_unitaries,
    bloch_angle,
    bloch_to_lab,
    canonicalize,
    eigvals_ab,
    eigvals_b,
    gs_reduced_pair,
    lab_to_bloch,
    local_purity,
    make_theta_state,
    mixture_state,
    purity_ab,
    reduce,
    reduced_theta_state,
)
from src.utils.exceptions import AngleMismatchError, ValidationError

SWAP = np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
], dtype=complex)

thetas = st.floats(min_value=0.0, max_value=math.pi)
weights = st.floats(min_value=0.0, max_value=1.0)


class TestThetaState:

    @settings(max_examples=50, deadline=None)
    @given(theta=thetas, p=weights)
    def test_density_properties(self, theta, p):
        rho = make_theta_state(ThetaPState(theta, p))
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.allclose(rho, rho.conj().T)
        assert np.allclose(SWAP @ rho @ SWAP, rho)
        assert np.linalg.matrix_rank(rho, tol=1e-10) <= 2

    @settings(max_examples=50, deadline=None)
    @given(theta=thetas, p=weights)
    def test_closed_form_purities(self, theta, p):
        s = ThetaPState(theta, p)
        rho = make_theta_state(s)
        assert purity_ab(s) == pytest.approx(purity(rho), abs=1e-12)
        assert local_purity(s) == pytest.approx(purity(reduce(rho, 'B')), abs=1e-12)

    def test_reference_values(self, balanced_state, biased_state):
        assert purity_ab(balanced_state) == pytest.approx(0.53125)
        assert local_purity(biased_state) == pytest.approx(0.685)
        assert purity_ab(biased_state) == pytest.approx(0.60625)

    def test_reduced_state_bloch_vector(self, biased_state):
        rho_b = reduce(make_theta_state(biased_state), 'B')
        np.testing.assert_allclose(rho_b, reduced_theta_state(biased_state), atol=1e-14)
        np.testing.assert_allclose(reduce(make_theta_state(biased_state), 'A'), rho_b, atol=1e-14)

        r = density_to_bloch(rho_b)
        assert r.x == pytest.approx(0.346410, abs=1e-6)
        assert r.y == pytest.approx(0.0, abs=1e-15)
        assert r.z == pytest.approx(0.5)

    def test_eigenvalues_match_spectrum(self, biased_state):
        spectrum = np.sort(np.linalg.eigvalsh(make_theta_state(biased_state)))[::-1]
        lam_plus, lam_minus = eigvals_ab(biased_state)
        assert lam_plus == pytest.approx(spectrum[0], abs=1e-12)
        assert lam_minus == pytest.approx(spectrum[1], abs=1e-12)

    def test_reduced_eigenvalues(self, biased_state):
        spectrum = np.sort(np.linalg.eigvalsh(reduced_theta_state(biased_state)))[::-1]
        assert eigvals_b(biased_state) == pytest.approx(tuple(spectrum), abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(theta=thetas, p=weights)
    def test_local_state_majorizes_global(self, theta, p):
        s = ThetaPState(theta, p)
        assert local_purity(s) >= purity_ab(s) - 1e-12
        assert eigvals_b(s)[0] >= eigvals_ab(s)[0] - 1e-12

    def test_zero_aperture_is_pure_product(self):
        rho = make_theta_state(ThetaPState(0.0, 0.3))
        assert purity(rho) == pytest.approx(1.0)

    def test_out_of_range_parameters(self):
        with pytest.raises(ValidationError):
            ThetaPState(4.0, 0.5)
        with pytest.raises(ValidationError):
            ThetaPState(1.0, -0.1)

    def test_lab_angle_convention(self):
        assert lab_to_bloch(math.pi / 6) == pytest.approx(math.pi / 3)
        assert bloch_to_lab(math.pi / 3) == pytest.approx(math.pi / 6)


class TestCanonicalize:

    def test_recovers_standard_form(self):
        first = PureQubit(1.0, 0.3)
        second = PureQubit(2.0, -0.4)
        rho = mixture_state(first, first, second, second, 0.7)

        result = canonicalize(first, first, second, second, 0.7)
        angle = bloch_angle(first.bloch().as_array(), second.bloch().as_array())
        assert result.state.theta == pytest.approx(0.5 * angle)
        assert result.state.p == 0.7

        rotated = apply_local_unitaries(rho, result.rotation_a, result.rotation_b)
        np.testing.assert_allclose(rotated, make_theta_state(result.state), atol=1e-12)

    def test_rotations_are_unitary(self):
        result = canonicalize(PureQubit(0.4), PureQubit(0.4), PureQubit(1.9, 1.0), PureQubit(1.9, 1.0), 0.5)
        for u in (result.rotation_a, result.rotation_b):
            np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-12)

    def test_unequal_angles_rejected(self):
        with pytest.raises(AngleMismatchError) as excinfo:
            canonicalize(PureQubit(0.0), PureQubit(0.0), PureQubit(1.0), PureQubit(0.5), 0.5)
        assert excinfo.value.angle_a == pytest.approx(1.0)
        assert excinfo.value.angle_b == pytest.approx(0.5)


class TestGroundStatePair:

    def test_two_sites_is_pure(self):
        theta = math.pi / 3
        amplitude = 1 / math.sqrt(2)
        rho = gs_reduced_pair(GroundStateSpec(amplitude, amplitude, theta, 2))

        plus = np.kron(PureQubit(theta).ket(), PureQubit(theta).ket())
        minus = np.kron(PureQubit(-theta).ket(), PureQubit(-theta).ket())
        psi = amplitude * plus + amplitude * minus
        psi = psi / np.linalg.norm(psi)
        np.testing.assert_allclose(rho, np.outer(psi, psi.conj()), atol=1e-12)

    def test_normalized_for_long_chain(self):
        rho = gs_reduced_pair(GroundStateSpec(0.6, 0.8, math.pi / 4, 9))
        assert np.trace(rho).real == pytest.approx(1.0)

    def test_approaches_mixture_exponentially(self):
        theta = math.pi / 3
        amplitude = 1 / math.sqrt(2)
        target = make_theta_state(ThetaPState(theta, 0.5))
        chain = np.arange(6, 25)
        distances = [
            trace_distance(gs_reduced_pair(GroundStateSpec(amplitude, amplitude, theta, int(n))), target)
            for n in chain
        ]
        slope = np.polyfit(chain, np.log(distances), 1)[0]
        assert slope == pytest.approx(math.log(math.cos(theta)), rel=0.05)

    def test_invalid_specs(self):
        with pytest.raises(ValidationError):
            GroundStateSpec(1.0, 0.0, 0.5, 1)
        with pytest.raises(ValidationError):
            GroundStateSpec(1.0, -1.0, 0.0, 4)
