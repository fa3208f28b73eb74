import cmath
import math

import numpy as np
import pytest

from coins import (
    make_galton_coin,
    make_hadamard,
    make_konno_coin,
    raw_beamsplitter,
    require_valid_coin,
    validate_coin,
)
from exceptions import InvalidCoinError
from models import CoinOperator


def _is_unitary(coin: CoinOperator, tol: float) -> bool:
    u = coin.matrix
    return np.allclose(u @ u.conj().T, np.eye(2), atol=tol, rtol=0.0)


def test_hadamard_entries(tolerance):
    h = make_hadamard()
    s = 1.0 / math.sqrt(2.0)
    assert np.allclose(h.matrix, [[s, s], [s, -s]], atol=tolerance)
    assert validate_coin(h).valid
    assert h.delta == pytest.approx(-1.0, abs=tolerance)


def test_konno_coin_derives_second_row(tolerance):
    a, b, unit = 0.6 + 0j, 0.8j, cmath.exp(0.3j)
    coin = make_konno_coin(a, b, unit)
    assert coin.c == pytest.approx(-unit * b.conjugate(), abs=tolerance)
    assert coin.d == pytest.approx(unit * a.conjugate(), abs=tolerance)
    assert coin.delta == pytest.approx(unit, abs=tolerance)
    assert _is_unitary(coin, tolerance)


def test_konno_parameters_of_the_hadamard_coin(tolerance):
    s = 1.0 / math.sqrt(2.0)
    coin = make_konno_coin(s, s, -1)
    assert np.allclose(coin.matrix, make_hadamard().matrix, atol=tolerance)


@pytest.mark.parametrize("delta", [0.0, math.pi / 10, math.pi / 5, 3 * math.pi / 10])
def test_konno_parameters_of_the_galton_coin(delta, tolerance):
    coin = make_konno_coin(complex(math.cos(delta)), -1j * math.sin(delta), 1)
    assert np.allclose(coin.matrix, make_galton_coin(delta).matrix, atol=tolerance)


def test_konno_identity_coin():
    coin = make_konno_coin(1, 0, 1)
    assert np.allclose(coin.matrix, np.eye(2))


@pytest.mark.parametrize(
    "a, b, unit, failing",
    [
        (0.6, 0.6, 1.0, "row_norm"),
        (0.6, 0.8, 1.1, "unit_determinant"),
    ],
)
def test_konno_coin_rejects_bad_parameters(a, b, unit, failing):
    with pytest.raises(InvalidCoinError) as excinfo:
        make_konno_coin(a, b, unit)
    assert failing in excinfo.value.residuals
    assert "Suggestion" in str(excinfo.value)


def test_konno_coin_rejects_non_finite():
    with pytest.raises(InvalidCoinError):
        make_konno_coin(complex(math.nan, 0), 0, 1)


@pytest.mark.parametrize("delta", [0.0, math.pi / 10, math.pi / 5, math.pi / 2, 2.5, -1.0])
def test_galton_coin_is_unitary(delta, tolerance):
    coin = make_galton_coin(delta)
    assert validate_coin(coin).valid
    assert _is_unitary(coin, tolerance)
    assert coin.b == pytest.approx(-1j * math.sin(delta), abs=tolerance)


def test_galton_coin_at_zero_is_identity():
    assert np.allclose(make_galton_coin(0.0).matrix, np.eye(2))


def test_raw_beamsplitter(tolerance):
    bs = raw_beamsplitter()
    assert validate_coin(bs).valid
    assert abs(bs.b) ** 2 == pytest.approx(0.5, abs=tolerance)
    assert bs.b == pytest.approx(1j / math.sqrt(2.0), abs=tolerance)


def test_validate_reports_every_residual():
    report = validate_coin(CoinOperator(1 + 0j, 1 + 0j, 1 + 0j, 1 + 0j))
    assert not report.valid
    assert not report
    assert set(report.residuals) == {
        "row1_norm",
        "row2_norm",
        "row_orthogonality",
        "unit_determinant",
        "c_relation",
        "d_relation",
    }
    assert "row1_norm" in report.failed
    assert report.residuals["row1_norm"] == pytest.approx(1.0)


def test_validate_flags_non_finite_entries():
    report = validate_coin(CoinOperator(complex(math.inf, 0), 0j, 0j, 1 + 0j))
    assert not report.valid
    assert report.failed[0] == "finite"


def test_require_valid_coin_raises_with_residuals():
    with pytest.raises(InvalidCoinError) as excinfo:
        require_valid_coin(CoinOperator(1 + 0j, 0j, 0j, 2 + 0j))
    assert "row2_norm" in excinfo.value.residuals


def test_validation_accepts_global_phase():
    h = make_hadamard()
    assert validate_coin(h.scaled(1j)).valid


def test_random_konno_coins_are_valid(random_coins, tolerance):
    for coin in random_coins(20):
        assert validate_coin(coin).valid
        assert abs(coin.b) <= 0.9
        assert _is_unitary(coin, tolerance)
