import math

import numpy as np
import pytest
from hypothesis import given

from coin_model import (
    DEFECT_COIN,
    CoinOperator,
    ModelParams,
    QubitState,
    check_unitary,
    coin_arrays,
    coin_at,
    split_coin,
)
from conftest import model_params
from qw_errors import NormalizationError


class TestModelParams:
    def test_derived_angles(self):
        params = ModelParams(1.5 * math.pi, math.pi)
        assert params.sigma == pytest.approx(math.pi / 4)
        assert params.sigma_tilde == pytest.approx(1.25 * math.pi)
        assert params.sin_sigma == pytest.approx(1.0 / math.sqrt(2.0))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            ModelParams(math.nan, 0.0)
        with pytest.raises(ValueError):
            ModelParams(0.0, math.inf)

    def test_as_dict_keys(self):
        assert set(ModelParams(0.1, 0.2).as_dict()) == {
            "sigma_plus",
            "sigma_minus",
            "sigma",
            "sigma_tilde",
        }


class TestCoins:
    def test_defect_at_origin(self, generic_params):
        assert coin_at(generic_params, 0) == DEFECT_COIN

    def test_phase_coins(self):
        params = ModelParams(0.4, -1.2)
        right = coin_at(params, 3).matrix
        left = coin_at(params, -1).matrix
        s = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(
            right, s * np.array([[1, np.exp(0.4j)], [np.exp(-0.4j), -1]]), atol=1e-15
        )
        np.testing.assert_allclose(
            left, s * np.array([[1, np.exp(-1.2j)], [np.exp(1.2j), -1]]), atol=1e-15
        )

    @given(model_params())
    def test_unitary_everywhere(self, params):
        for x in (-2, -1, 0, 1, 2):
            coin = coin_at(params, x)
            assert check_unitary(coin, 1e-14)
            assert abs(coin.determinant + 1.0) < 1e-14

    def test_split_sums_back(self, generic_params):
        coin = coin_at(generic_params, 2)
        p, q = split_coin(coin)
        assert p + q == coin
        assert p.c == 0 and p.d == 0
        assert q.a == 0 and q.b == 0

    def test_check_unitary_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            check_unitary(DEFECT_COIN, 0.0)

    def test_non_unitary_detected(self):
        assert not check_unitary(CoinOperator(1, 1, 0, 1), 1e-12)

    def test_coin_arrays_match_scalar_coins(self, generic_params):
        positions = np.arange(-4, 5)
        a, b, c, d = coin_arrays(generic_params, positions)
        for i, x in enumerate(positions):
            coin = coin_at(generic_params, int(x))
            assert (a[i], b[i], c[i], d[i]) == (coin.a, coin.b, coin.c, coin.d)


class TestQubitState:
    def test_polar_round_trip(self):
        state = QubitState.from_polar(0.6, 0.2, 0.8, -1.0)
        polar = state.polar()
        assert polar.a == pytest.approx(0.6)
        assert polar.b == pytest.approx(0.8)
        assert polar.phi12 == pytest.approx(1.2)

    def test_require_normalized(self):
        QubitState(1.0, 0.0).require_normalized()
        with pytest.raises(NormalizationError):
            QubitState(1.0, 1.0).require_normalized()

    def test_normalized(self):
        state = QubitState(3.0, 4.0j).normalized()
        assert state.norm_sq == pytest.approx(1.0)
        assert state.left_amp == pytest.approx(0.6)

    def test_zero_state_cannot_be_normalized(self):
        with pytest.raises(NormalizationError):
            QubitState(0j, 0j).normalized()
