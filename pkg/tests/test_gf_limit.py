import cmath
import math

import numpy as np
import pytest

from coin_model import ModelParams, QubitState
from gf_limit import (
    MINUS,
    PLUS,
    THETA1,
    THETA2,
    GFKernel,
    capital_lambda,
    correspondence_rows,
    f0,
    f0_interior,
    lambda_tilde,
    limit_branches,
    limit_measure,
    limit_measure_from_residues,
    limit_total_mass,
    numeric_residue,
    phi_derivative,
    remark_cross_terms,
    residue_norm_sq,
    residue_norm_sq_from_derivative,
    residue_vector,
    scan_mismatches,
    scan_singular_points,
    singular_points,
    sufficient_correspondence_condition,
    tilde_phi,
    truncated_series,
    xi_tilde_interior,
    xi_tilde_matrix,
)
from qw_errors import BranchAbsentError, OutOfBranchError, PoleError

SQRT2 = math.sqrt(2.0)
# sin(sigma) < -1/sqrt2: only the theta1 branch exists
ONE_BRANCH = ModelParams(0.3, 2.0)


class TestKernels:
    def test_off_arc_rejected(self, example_one):
        with pytest.raises(OutOfBranchError):
            f0(0.0, example_one, PLUS)

    def test_bad_side(self, example_one):
        with pytest.raises(ValueError):
            f0(math.pi / 2, example_one, "left")

    def test_f0_unit_modulus(self, generic_params):
        for theta in (0.3 * math.pi, 0.5 * math.pi, 1.4 * math.pi):
            assert abs(f0(theta, generic_params, PLUS)) == pytest.approx(1.0)
            assert abs(f0(theta, generic_params, MINUS)) == pytest.approx(1.0)

    def test_lambda_tilde_sides(self, generic_params):
        theta = 0.6 * math.pi
        plus = lambda_tilde(theta, generic_params, PLUS)
        minus = lambda_tilde(theta, generic_params, MINUS)
        assert minus == pytest.approx(-plus)

    def test_capital_lambda_closed_form(self, generic_params):
        kernel = GFKernel(generic_params)
        theta = 0.35 * math.pi
        phase = math.atan2(
            math.sqrt(2.0 * math.sin(theta) ** 2 - 1.0), SQRT2 * math.cos(theta)
        )
        expected = 1.0 + cmath.exp(2j * (theta + generic_params.sigma + phase))
        assert kernel.capital_lambda(theta) == pytest.approx(expected)

    def test_phi_derivative_routes_agree(self):
        for theta in (1.2, 2.0, 4.4):
            closed = phi_derivative(theta)
            numeric = phi_derivative(theta, method="finite_difference")
            assert numeric == pytest.approx(closed, rel=1e-6)

    def test_phi_derivative_unknown_method(self):
        with pytest.raises(ValueError):
            phi_derivative(1.2, method="spline")

    @pytest.mark.parametrize(
        "theta, expected",
        [
            (math.pi / 2, math.pi / 2),
            (-math.pi / 2, -math.pi / 2),
            (1.5 * math.pi, -math.pi / 2),
        ],
    )
    def test_tilde_phi_values(self, theta, expected):
        assert tilde_phi(theta) == pytest.approx(expected, abs=1e-12)

    def test_tilde_phi_at_arc_endpoint(self):
        theta = 3 * math.pi / 4
        assert tilde_phi(theta) == pytest.approx(math.pi, abs=1e-7)
        # the float 3pi/4 sits 0.75 (pi - fl(pi)) inside the arc
        inside = 0.75 * math.sin(math.pi)
        assert math.sin(tilde_phi(theta)) == pytest.approx(math.sqrt(2.0 * inside), rel=1e-6)

    def test_f0_at_quarter_turn(self, example_one):
        assert f0(math.pi / 2, example_one, PLUS) == pytest.approx(-1.0, abs=1e-12)
        assert f0(math.pi / 2, example_one, MINUS) == pytest.approx(-1.0, abs=1e-12)

    def test_lambda_tilde_modulus(self, generic_params):
        for theta in (0.3 * math.pi, 0.5 * math.pi, 0.7 * math.pi, 1.4 * math.pi, 1.6 * math.pi):
            expected = 1.0 / (3.0 - 2.0 * SQRT2 * math.cos(theta + tilde_phi(theta)))
            for side in (PLUS, MINUS):
                value = abs(lambda_tilde(theta, generic_params, side)) ** 2
                assert value == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("params", [ModelParams(0.0, 0.0), ModelParams(0.3, 1.0)])
    def test_lambda_tilde_at_singular_points(self, params):
        s = params.sin_sigma
        expected = {THETA1: 1.0 / (3.0 - 2.0 * SQRT2 * s), THETA2: 1.0 / (3.0 + 2.0 * SQRT2 * s)}
        sset = singular_points(params)
        for which in (THETA1, THETA2):
            for z in sset.branch_points(which):
                value = abs(lambda_tilde(cmath.phase(z), params, PLUS)) ** 2
                assert value == pytest.approx(expected[which], rel=1e-9)

    def test_lambda_tilde_example_two(self, example_two):
        points = singular_points(example_two).branch_points(THETA2)
        assert len(points) == 2
        for z in points:
            value = abs(lambda_tilde(cmath.phase(z), example_two, PLUS)) ** 2
            assert value == pytest.approx(0.2, rel=1e-12)


class TestSingularPoints:
    def test_example_one_closed_form(self, example_one):
        sset = singular_points(example_one)
        assert sset.theta1_present and sset.theta2_present
        assert sset.theta1[0] == pytest.approx(complex(1.0, SQRT2) / math.sqrt(3.0))
        assert sset.theta2[0] == pytest.approx(complex(1.0, -SQRT2) / math.sqrt(3.0))
        assert sset.theta1[1] == pytest.approx(-sset.theta1[0])
        assert len(sset.points()) == 4

    def test_branch_absent(self):
        sset = singular_points(ONE_BRANCH)
        assert sset.theta1_present
        assert not sset.theta2_present
        assert sset.branch_points(THETA2) == ()
        with pytest.raises(BranchAbsentError):
            residue_norm_sq(ONE_BRANCH, THETA2)

    def test_unknown_branch(self, example_one):
        with pytest.raises(ValueError):
            singular_points(example_one).branch_points("theta3")

    @pytest.mark.parametrize(
        "params", [ModelParams(0.0, 0.0), ModelParams(0.3, 1.0), ONE_BRANCH]
    )
    def test_points_are_zeros_of_lambda(self, params):
        for _, z in singular_points(params).points():
            assert abs(z) == pytest.approx(1.0)
            assert abs(capital_lambda(cmath.phase(z), params)) < 1e-12

    def test_xi_raises_at_pole(self, example_one):
        z = singular_points(example_one).theta1[0]
        with pytest.raises(PoleError):
            xi_tilde_matrix(cmath.phase(z), example_one, 0)

    @pytest.mark.parametrize("params", [ModelParams(0.0, 0.0), ModelParams(0.3, 1.0)])
    def test_scan_finds_exactly_the_closed_form(self, params):
        scanned = scan_singular_points(params, 200_000)
        mismatch = scan_mismatches(scanned, singular_points(params))
        assert mismatch == {"extra": [], "missed": []}

    def test_scan_finds_pole_next_to_arc_endpoint(self):
        # sin(sigma) = 1/sqrt2 - 1e-6 puts the theta1 poles ~1e-12 inside the arcs
        sigma = math.asin(1.0 / SQRT2 - 1e-6)
        params = ModelParams(2.0 * sigma, 0.0)
        sset = singular_points(params)
        assert sset.theta1_present
        scanned = scan_singular_points(params, 1_000_000)
        assert scan_mismatches(scanned, sset) == {"extra": [], "missed": []}


class TestResidues:
    def test_example_one_norms(self, example_one):
        assert residue_norm_sq(example_one, THETA1) == pytest.approx(1.0 / 36.0)
        assert residue_norm_sq(example_one, THETA2) == pytest.approx(1.0 / 36.0)

    @pytest.mark.parametrize("which", [THETA1, THETA2])
    def test_derivative_route(self, generic_params, which):
        assert residue_norm_sq_from_derivative(generic_params, which) == pytest.approx(
            residue_norm_sq(generic_params, which), rel=1e-10
        )

    def test_numeric_residue_matches_closed_form(self, generic_params, polar_state):
        for _, z0 in singular_points(generic_params).points():
            for x in (-1, 0, 2):
                closed = residue_vector(generic_params, z0, polar_state, x)
                numeric = numeric_residue(generic_params, z0, polar_state, x)
                np.testing.assert_allclose(numeric, closed, atol=1e-7)

    def test_numeric_residue_needs_three_distances(self, example_one, left_state):
        z0 = singular_points(example_one).theta1[0]
        with pytest.raises(ValueError):
            numeric_residue(example_one, z0, left_state, 0, distances=(1e-3, 1e-4))


class TestGeneratingFunction:
    @pytest.mark.parametrize("x", [-3, -1, 0, 1, 2])
    def test_interior_matches_series(self, generic_params, polar_state, x):
        z = 0.4 * cmath.exp(0.9j)
        closed = xi_tilde_interior(z, generic_params, x) @ polar_state.as_array()
        series = truncated_series(generic_params, polar_state, z, x)
        np.testing.assert_allclose(closed, series, atol=1e-10)

    def test_interior_branch_vanishes_at_origin(self, example_one):
        assert f0_interior(0j, example_one, PLUS) == 0

    def test_interior_approaches_unit_circle(self, generic_params):
        theta = 0.5 * math.pi
        z = (1.0 - 1e-10) * cmath.exp(1j * theta)
        for side in (PLUS, MINUS):
            assert f0_interior(z, generic_params, side) == pytest.approx(
                f0(theta, generic_params, side), abs=1e-6
            )

    def test_interior_rejects_unit_circle(self, example_one):
        with pytest.raises(ValueError):
            xi_tilde_interior(1.0 + 0j, example_one, 0)


class TestLimitMeasure:
    @pytest.mark.parametrize(
        "phi0", [QubitState(1.0, 0.0), QubitState(1j / SQRT2, 1.0 / SQRT2)]
    )
    def test_example_one_origin(self, example_one, phi0):
        assert limit_measure(example_one, phi0, 0) == pytest.approx(2.0 / 9.0)

    def test_example_one_profile(self, example_one, left_state):
        assert limit_measure(example_one, left_state, 1) == pytest.approx(4.0 / 27.0)
        assert limit_measure(example_one, left_state, -2) == pytest.approx(4.0 / 81.0)

    def test_example_two(self, example_two, left_state):
        assert limit_measure(example_two, left_state, 0) == pytest.approx(4.0 / 25.0)
        assert limit_measure(example_two, left_state, 1) == pytest.approx(12.0 / 125.0)
        _, nu_minus = limit_branches(example_two, left_state, 0)
        assert (nu_minus or 0.0) == pytest.approx(0.0, abs=1e-24)

    def test_missing_branch_reported_as_none(self, left_state):
        nu_plus, nu_minus = limit_branches(ONE_BRANCH, left_state, 3)
        assert nu_plus is None
        assert nu_minus is not None and nu_minus > 0.0

    def test_total_mass(self, example_one, left_state):
        assert limit_total_mass(example_one, left_state) == pytest.approx(2.0 / 3.0)

    @pytest.mark.parametrize("route", ["closed_form", "derivative"])
    def test_residue_pipeline(self, generic_params, polar_state, route):
        for x in range(-5, 6):
            assembled = limit_measure_from_residues(generic_params, polar_state, x, route=route)
            assert assembled == pytest.approx(
                limit_measure(generic_params, polar_state, x), abs=1e-12
            )

    def test_residue_pipeline_unknown_route(self, generic_params, polar_state):
        with pytest.raises(ValueError):
            limit_measure_from_residues(generic_params, polar_state, 0, route="guess")

    def test_remark_cross_terms(self, generic_params, polar_state):
        terms = remark_cross_terms(generic_params, polar_state)
        assert len(terms) == 4
        for term in terms:
            assert term.computed == pytest.approx(term.predicted, abs=1e-12)


class TestCorrespondence:
    def test_example_one_matches_stationary(self, example_one, left_state):
        for row in correspondence_rows(example_one, left_state, 5):
            assert row.gap_plus < 1e-15
            assert row.gap_minus < 1e-15

    def test_example_two_matches_stationary(self, example_two, left_state):
        rows = correspondence_rows(example_two, left_state, 10)
        for row in rows:
            assert row.gap_plus < 1e-12
            assert row.gap_minus < 1e-12
            assert row.nu_minus == pytest.approx(0.0, abs=1e-20)
            assert row.stationary_j3_scaled == pytest.approx(0.0, abs=1e-20)
        origin = rows[10]
        assert origin.x == 0
        assert origin.nu_plus == pytest.approx(4.0 / 25.0)
        assert origin.stationary_j1_scaled == pytest.approx(4.0 / 25.0)
        assert rows[11].nu_plus == pytest.approx(12.0 / 125.0)

    def test_sufficient_condition(self, example_one, example_two, generic_params):
        assert sufficient_correspondence_condition(example_one)
        assert sufficient_correspondence_condition(example_two)
        assert not sufficient_correspondence_condition(generic_params)
