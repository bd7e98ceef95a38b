import math

import pytest
from hypothesis import given, settings

from coin_model import ModelParams
from conftest import model_params
from qw_errors import BranchAbsentError
from sgf_spectral import (
    decay_ratio,
    eigen_residual,
    eigenpair,
    eigenvalues,
    eigenvector,
    is_summable,
    normalizing_scale,
    stationary_measure,
    stationary_total_mass,
    theta_roots,
)

SQRT2 = math.sqrt(2.0)


class TestEigenvalues:
    def test_example_two_values(self, example_two):
        pairs = eigenvalues(example_two)
        assert pairs[0].lam == pytest.approx((1 + 3j) / math.sqrt(10.0))
        assert pairs[1].lam == pytest.approx(-(1 + 3j) / math.sqrt(10.0))
        assert pairs[2].lam == pytest.approx(complex(-1.0, 1.0) / SQRT2)
        assert pairs[3].lam == pytest.approx(complex(1.0, -1.0) / SQRT2)

    def test_signs(self, example_one):
        signs = [(p.branch_sign, p.root_sign) for p in eigenvalues(example_one)]
        assert signs == [(1, 1), (1, -1), (-1, 1), (-1, -1)]

    def test_bad_index(self, example_one):
        with pytest.raises(ValueError):
            eigenpair(example_one, 5)

    @given(model_params())
    def test_unit_modulus(self, params):
        for pair in eigenvalues(params):
            assert abs(pair.lam) == pytest.approx(1.0, abs=1e-12)


class TestEigenvector:
    @pytest.mark.parametrize("j", [1, 2, 3, 4])
    def test_residual_example_one(self, example_one, j):
        pair = eigenpair(example_one, j)
        assert eigen_residual(pair, example_one, 20) < 1e-12

    @pytest.mark.parametrize("j", [1, 2, 3, 4])
    def test_residual_generic(self, generic_params, j):
        pair = eigenpair(generic_params, j, 0.4 - 0.3j)
        assert eigen_residual(pair, generic_params, 20, relative=True) < 1e-12

    def test_shifted_phase_fails_off_lattice(self, generic_params):
        pair = eigenpair(generic_params, 1)
        assert eigen_residual(pair, generic_params, 5, relative=True, shifted_phase=True) > 1e-6

    def test_shifted_phase_exact_when_sigma_minus_is_pi(self, example_two):
        for pair in eigenvalues(example_two):
            assert eigen_residual(pair, example_two, 5, relative=True, shifted_phase=True) < 1e-12

    def test_window_must_contain_origin(self, example_one):
        with pytest.raises(ValueError):
            eigenvector(eigenpair(example_one, 1), example_one, 1, 4)

    def test_residual_radius_too_small(self, example_one):
        with pytest.raises(ValueError):
            eigen_residual(eigenpair(example_one, 1), example_one, 1)


class TestStationaryMeasure:
    def test_example_two_fixture(self, example_two):
        pair = eigenpair(example_two, 1, 2.0)
        assert stationary_measure(pair, example_two, 0) == pytest.approx(4.0)
        assert stationary_measure(pair, example_two, 1) == pytest.approx(3.0 * 4.0 / 5.0)
        assert stationary_measure(pair, example_two, -2) == pytest.approx(3.0 * 4.0 / 25.0)

    @pytest.mark.parametrize("j", [1, 2, 3, 4])
    def test_matches_eigenvector(self, generic_params, j):
        pair = eigenpair(generic_params, j, 1.3j)
        window = eigenvector(pair, generic_params, -6, 6)
        for x in range(-6, 7):
            assert stationary_measure(pair, generic_params, x) == pytest.approx(
                window.at(x).norm_sq, rel=1e-12
            )

    def test_decay_ratio(self, generic_params):
        pair = eigenpair(generic_params, 3)
        rho = decay_ratio(generic_params, -1)
        ratio = stationary_measure(pair, generic_params, 5) / stationary_measure(
            pair, generic_params, 4
        )
        assert ratio == pytest.approx(rho)

    def test_normalizing_scale(self, example_one):
        pair = eigenpair(example_one, 1)
        c = normalizing_scale(pair, example_one)
        assert c**2 == pytest.approx(1.0 / 3.0)
        assert stationary_total_mass(pair.with_scale(c), example_one) == pytest.approx(1.0)

    def test_not_summable_on_boundary(self, example_two):
        pair = eigenpair(example_two, 3)
        assert not is_summable(pair, example_two)
        with pytest.raises(BranchAbsentError):
            normalizing_scale(pair, example_two)

    def test_total_mass_matches_partial_sum(self, generic_params):
        pair = eigenpair(generic_params, 1, 0.7)
        partial = sum(stationary_measure(pair, generic_params, x) for x in range(-200, 201))
        assert stationary_total_mass(pair, generic_params) == pytest.approx(partial, rel=1e-12)

    def test_even_in_x(self, generic_params):
        for j in (1, 3):
            pair = eigenpair(generic_params, j, 0.8)
            for x in range(1, 6):
                assert stationary_measure(pair, generic_params, -x) == pytest.approx(
                    stationary_measure(pair, generic_params, x), rel=1e-14
                )

    @pytest.mark.parametrize("j", [1, 3])
    def test_shifted_phase_negative_side(self, generic_params, j):
        pair = eigenpair(generic_params, j, 0.8)
        eps = pair.branch_sign
        rho = decay_ratio(generic_params, eps)
        phase = (generic_params.sigma_plus + 3.0 * generic_params.sigma_minus) / 2.0
        for x in range(1, 6):
            expected = (2.0 + eps * SQRT2 * math.sin(phase)) * 0.64 * rho**x
            got = stationary_measure(pair, generic_params, -x, shifted_phase=True)
            assert got == pytest.approx(expected, rel=1e-12)
            assert stationary_measure(pair, generic_params, x, shifted_phase=True) == (
                stationary_measure(pair, generic_params, x)
            )
        assert stationary_measure(pair, generic_params, 0, shifted_phase=True) == pytest.approx(
            0.64
        )

    def test_shifted_phase_matches_its_eigenvector(self, generic_params):
        pair = eigenpair(generic_params, 3, 1.1)
        window = eigenvector(pair, generic_params, -5, 0, shifted_phase=True)
        for x in range(-5, 1):
            got = stationary_measure(pair, generic_params, x, shifted_phase=True)
            assert got == pytest.approx(window.at(x).norm_sq, rel=1e-12)

    def test_shifted_phase_is_asymmetric(self, generic_params):
        for j in (1, 3):
            pair = eigenpair(generic_params, j)
            plus = stationary_measure(pair, generic_params, 1, shifted_phase=True)
            minus = stationary_measure(pair, generic_params, -1, shifted_phase=True)
            assert abs(plus - minus) > 0.1

    def test_shifted_phase_coincides_when_sigma_minus_is_pi(self, example_two):
        pair = eigenpair(example_two, 1, 2.0)
        for x in range(-4, 5):
            assert stationary_measure(pair, example_two, x, shifted_phase=True) == pytest.approx(
                stationary_measure(pair, example_two, x), rel=1e-12
            )

    @pytest.mark.parametrize("j", [1, 3])
    def test_shifted_phase_total_mass(self, generic_params, j):
        pair = eigenpair(generic_params, j, 0.7)
        partial = math.fsum(
            stationary_measure(pair, generic_params, x, shifted_phase=True)
            for x in range(-200, 201)
        )
        total = stationary_total_mass(pair, generic_params, shifted_phase=True)
        assert total == pytest.approx(partial, rel=1e-12)
        assert total != pytest.approx(stationary_total_mass(pair, generic_params), rel=1e-3)


class TestThetaRoots:
    def test_product_is_minus_one(self, generic_params):
        for pair in eigenvalues(generic_params):
            roots = theta_roots(pair.lam)
            assert roots.theta_s * roots.theta_l == pytest.approx(-1.0)
            assert abs(roots.theta_s) <= abs(roots.theta_l)

    def test_small_root_gives_decay(self, generic_params):
        for pair in eigenvalues(generic_params):
            if is_summable(pair, generic_params):
                roots = theta_roots(pair.lam)
                rho = decay_ratio(generic_params, pair.branch_sign)
                assert abs(roots.theta_s) ** 2 == pytest.approx(rho)

    def test_degenerate_on_unit_circle(self):
        roots = theta_roots(1.0 + 0j)
        assert roots.degenerate

    def test_rejects_off_circle(self):
        with pytest.raises(ValueError):
            theta_roots(1.5 + 0j)


@settings(max_examples=30, deadline=None)
@given(model_params())
def test_every_eigenpair_solves_the_eigen_equation(params):
    for pair in eigenvalues(params, 0.6 + 0.8j):
        assert eigen_residual(pair, params, 12, relative=True) < 1e-12


def test_normalized_mass_formula():
    params = ModelParams(0.9, 0.1)
    for pair in eigenvalues(params):
        if not is_summable(pair, params):
            continue
        c = normalizing_scale(pair, params)
        assert stationary_total_mass(pair.with_scale(c), params) == pytest.approx(1.0)
