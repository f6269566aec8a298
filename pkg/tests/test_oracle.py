"""
オラクルモジュールのテスト
"""

import math

import numpy as np
import pytest

from src.core.verifier import SPHERE_POINTS
from src.quantum import correlations as corr
from src.quantum import oracle
from src.quantum.data_models import PureQubit, ThetaPState
from src.quantum.measurement import conditional_weight, outcome_probabilities
from src.quantum.states import canonicalize, make_theta_state, mixture_state
from src.utils.exceptions import NonFiniteObjectiveError, ValidationError


def circular_distance(a, b):
    return abs(math.remainder(a - b, 2 * math.pi))


class TestOneDimensional:

    def test_golden_section(self):
        x, fx, iterations, width = oracle.golden_section_minimize(lambda t: (t - 1.0) ** 2, 0.0, 3.0, tol=1e-10)
        assert x == pytest.approx(1.0, abs=1e-8)
        assert fx == pytest.approx(0.0, abs=1e-15)
        assert width <= 1e-10
        assert iterations > 0

    def test_non_finite_objective(self):
        with pytest.raises(NonFiniteObjectiveError) as excinfo:
            oracle.minimize_over_phi(lambda phi: math.nan if phi > 0 else 0.0, grid_points=16)
        assert excinfo.value.location > 0

    def test_minimize_over_circle(self):
        result = oracle.minimize_over_phi(math.cos)
        assert circular_distance(result.arg_opt, math.pi) < 1e-6
        assert result.value_opt == pytest.approx(-1.0, abs=1e-12)
        assert len(result.grid) == 720

    def test_maximize_over_circle(self):
        result = oracle.maximize_over_phi(lambda phi: math.cos(phi - 0.4))
        assert result.arg_opt == pytest.approx(0.4, abs=1e-6)
        assert result.value_opt == pytest.approx(1.0, abs=1e-12)

    def test_phi_grid_covers_half_open_circle(self):
        grid = oracle.phi_grid(8)
        assert grid[-1] == pytest.approx(math.pi)
        assert grid[0] > -math.pi

    def test_locate_jump(self):
        location = oracle.locate_jump(lambda x: 0.0 if x < 1.2345 else math.pi / 2, 1.0, 1.5)
        assert location == pytest.approx(1.2345, abs=1e-8)


class TestClosedFormAgreement:

    @pytest.mark.parametrize('theta,p', [(math.pi / 3, 0.5), (math.pi / 3, 0.7), (0.2 * math.pi, 0.9)])
    def test_bruteforce_discord(self, theta, p):
        s = ThetaPState(theta, p)
        value, phi_star = corr.discord(s)
        brute = oracle.bruteforce_discord(s)
        assert brute.value_opt == pytest.approx(value, abs=1e-8)
        assert abs(math.remainder(brute.arg_opt - phi_star, math.pi)) < 1e-6

    @pytest.mark.parametrize('phi', [-2.0, 0.0, 0.9, 1.7])
    def test_dense_recompute(self, biased_state, phi):
        record = oracle.dense_recompute(biased_state, phi)
        r_plus, r_minus = outcome_probabilities(biased_state, phi)

        assert record.r_plus == pytest.approx(r_plus, abs=1e-12)
        assert record.r_minus == pytest.approx(r_minus, abs=1e-12)
        assert record.p_prime_plus == pytest.approx(conditional_weight(biased_state, phi, '+'), abs=1e-10)
        assert record.avg_cond_purity == pytest.approx(corr.avg_conditional_purity(biased_state, phi), abs=1e-10)
        assert record.discord_phi == pytest.approx(corr.discord_phi(biased_state, phi), abs=1e-10)
        assert record.global_post_purity == pytest.approx(corr.global_post_purity(biased_state, phi), abs=1e-10)
        assert record.info_deficit == pytest.approx(corr.info_deficit_phi(biased_state, phi), abs=1e-10)
        assert record.renyi_deficit == pytest.approx(corr.renyi_deficit_phi(biased_state, phi), abs=1e-10)

    def test_dense_recompute_zero_probability_branch(self):
        s = ThetaPState(math.pi / 3, 1.0)
        record = oracle.dense_recompute(s, math.pi / 3)
        assert math.isnan(record.p_prime_minus)
        assert math.isnan(record.purity_cond_minus)
        assert record.r_minus == pytest.approx(0.0, abs=1e-12)
        assert record.avg_cond_purity == pytest.approx(1.0)


class TestBlochSphere:

    def test_fibonacci_directions_are_unit(self):
        directions = oracle.fibonacci_sphere(500)
        np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0)

    @pytest.mark.parametrize('theta,p', SPHERE_POINTS)
    def test_out_of_plane_never_better(self, theta, p):
        s = ThetaPState(theta, p)
        tensor = corr.correlation_tensor(s)
        result = oracle.scan_bloch_sphere(
            lambda k: corr.avg_conditional_purity_direction(tensor, k), resolution=10000, maximize=True
        )
        in_plane = corr.max_avg_conditional_purity(s)
        assert result.value_opt <= in_plane + 1e-6
        assert result.value_opt == pytest.approx(in_plane, abs=1e-6)
        assert abs(result.y_component) < 1e-4

    @pytest.mark.parametrize('theta,p', SPHERE_POINTS)
    def test_global_post_purity_optimum_in_plane(self, theta, p):
        s = ThetaPState(theta, p)
        tensor = corr.correlation_tensor(s)
        result = oracle.scan_bloch_sphere(
            lambda k: corr.global_post_purity_direction(tensor, k), resolution=10000, maximize=True
        )
        in_plane = corr.global_post_purity(s, corr.optimal_phi_deficit(s))
        assert result.value_opt == pytest.approx(in_plane, abs=1e-6)
        assert abs(result.y_component) < 1e-4

    def test_known_optimum_at_pole(self):
        result = oracle.scan_bloch_sphere(lambda k: -k[2], resolution=1000)
        assert result.direction.z == pytest.approx(1.0, abs=1e-8)
        assert result.value_opt == pytest.approx(-1.0, abs=1e-12)

    def test_dense_objectives_match_tensor_forms(self, biased_state):
        rho = make_theta_state(biased_state)
        tensor = corr.correlation_tensor(biased_state)
        for k in oracle.fibonacci_sphere(40):
            assert oracle.dense_avg_conditional_purity(rho, k) == pytest.approx(
                corr.avg_conditional_purity_direction(tensor, k), abs=1e-10)
            assert oracle.dense_global_post_purity(rho, k) == pytest.approx(
                corr.global_post_purity_direction(tensor, k), abs=1e-10)

    @pytest.mark.parametrize('kind', ['conditional', 'deficit'])
    def test_dense_sphere_optimum(self, biased_state, kind):
        result = oracle.sphere_optimum(biased_state, kind, resolution=2000)
        expected_angle = {
            'conditional': corr.optimal_phi_conditional(biased_state),
            'deficit': corr.optimal_phi_deficit(biased_state),
        }[kind]
        expected_value = {
            'conditional': corr.max_avg_conditional_purity(biased_state),
            'deficit': corr.global_post_purity(biased_state, expected_angle),
        }[kind]
        assert result.value_opt == pytest.approx(expected_value, abs=1e-6)
        assert abs(result.y_component) < 1e-4
        assert abs(math.remainder(corr.direction_angle(result.direction) - expected_angle, math.pi)) < 1e-3

    def test_unknown_sphere_objective(self, biased_state):
        with pytest.raises(ValidationError):
            oracle.sphere_optimum(biased_state, 'entropy', resolution=100)

    def test_dense_discord(self, balanced_state):
        result = oracle.dense_discord(make_theta_state(balanced_state), resolution=2000)
        assert result.value_opt == pytest.approx(0.140289, abs=1e-6)
        assert abs(result.direction.x) == pytest.approx(1.0, abs=1e-3)

    def test_dense_discord_invariant_under_local_rotation(self):
        first, second = PureQubit(0.8, 0.5), PureQubit(2.1, -0.3)
        rho = mixture_state(first, first, second, second, 0.7)
        canonical = canonicalize(first, first, second, second, 0.7).state

        result = oracle.dense_discord(rho, resolution=2000)
        assert result.value_opt == pytest.approx(corr.discord(canonical)[0], abs=1e-6)
