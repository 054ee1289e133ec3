import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cartan.polytable import PolyTable, sqrt_series, variables

coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
exps2 = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys2 = st.dictionaries(exps2, coeff, max_size=5).map(lambda d: PolyTable(2, d))
points2 = st.tuples(coeff, coeff).map(lambda t: np.array(t) * 0.3)


def test_cleaning_and_degree():
    P = PolyTable(2, {(1, 0): 1e-20, (0, 2): 2.0, (0, 0): 1.0})
    assert len(P) == 2
    assert P.degree == 2
    assert P.constant_term() == 1
    assert PolyTable.zero(3).is_zero()


def test_rejects_bad_exponents():
    with pytest.raises(ValueError):
        PolyTable(2, {(1,): 1.0})
    with pytest.raises(ValueError):
        PolyTable(1, {(-1,): 1.0})
    with pytest.raises(ValueError):
        PolyTable(1, {(1,): float("nan")})


def test_binomial_square():
    z, w = variables(2)
    P = (z + w) ** 2
    assert P.coeff((1, 1)) == 2
    assert P.homogeneous_part(2) == P
    assert P.is_homogeneous()


@given(polys2, polys2, points2)
def test_arithmetic_matches_evaluation(P, Q, x):
    assert abs((P + Q)(x) - (P(x) + Q(x))) < 1e-9
    assert abs((P * Q)(x) - P(x) * Q(x)) < 1e-9 * (1 + abs(P(x) * Q(x)))
    assert abs((P - Q)(x) - (P(x) - Q(x))) < 1e-9


@given(polys2, points2, points2)
def test_shift(P, x, a):
    assert abs(P.shift(a)(x) - P(x + a)) < 1e-8 * (1 + abs(P(x + a)))


@given(polys2, polys2, polys2, points2)
def test_compose(P, A, B, x):
    y = np.array([A(x), B(x)])
    if np.max(np.abs(y)) > 5:
        return
    assert abs(P.compose([A, B])(x) - P(y)) < 1e-7 * (1 + abs(P(y)))


@given(polys2, polys2)
def test_exact_division_recovers_factor(P, Q):
    if Q.is_zero() or P.is_zero():
        return
    R = (P * Q).exact_div(Q)
    assert R is not None
    assert R.allclose(P, 1e-8 * max(1.0, P.max_abs_coeff()))


def test_inexact_division():
    z, w = variables(2)
    assert (z * z + 1).exact_div(w) is None
    with pytest.raises(ZeroDivisionError):
        z.exact_div(PolyTable.zero(2))


def test_proportional():
    z, w = variables(2)
    assert ((z + w) * 3).proportional_to(z + w) == pytest.approx(3)
    assert (z + w).proportional_to(z - w) is None


def test_batch_evaluation(rng):
    z, w = variables(2)
    P = z * w + w * w * 2 + 1
    Z = rng.standard_normal((7, 2)) + 1j * rng.standard_normal((7, 2))
    assert np.allclose(P(Z), Z[:, 0] * Z[:, 1] + 2 * Z[:, 1] ** 2 + 1)
    with pytest.raises(ValueError):
        P(np.zeros(3))


@given(polys2)
def test_json_round_trip(P):
    data = json.loads(json.dumps(P.to_json()))
    assert PolyTable.from_json(2, data) == P


def test_extend_vars_and_conj():
    z, w = variables(2)
    P = (z * 1j + w).extend_vars(3, [2, 0])
    assert P.coeff((0, 0, 1)) == 1j
    assert P.conj().coeff((0, 0, 1)) == -1j


@given(st.dictionaries(exps2, st.floats(-1, 1), max_size=4))
def test_sqrt_series_of_square(d):
    Q = PolyTable(2, d) + PolyTable.constant(2, 1.0) - PolyTable.constant(2, PolyTable(2, d).constant_term())
    P = Q * Q
    P = P * (1 / P.constant_term())
    R = sqrt_series(P, Q.degree)
    assert R.allclose(Q * (1 / Q.constant_term()), 1e-8) or R.allclose(Q * (-1 / Q.constant_term()), 1e-8)


def test_sqrt_series_needs_unit_constant():
    with pytest.raises(ValueError):
        sqrt_series(PolyTable.constant(1, 4.0), 2)
