from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from covercalc.exact import QSeries, divisors, rat, rat_from_str, rat_to_str, series_mul, sigma1

rationals = st.fractions(min_value=-(10**6), max_value=10**6, max_denominator=10**6)


def test_series_mul_difference_of_squares():
    one_plus_q = QSeries.from_coeffs([1, 1], order=5)
    one_minus_q = QSeries.from_coeffs([1, -1], order=5)
    prod = series_mul(one_plus_q, one_minus_q)
    assert prod == QSeries.from_coeffs([1, 0, -1], order=5)


def test_series_mul_convolution_against_double_sum():
    # coefficient of q^k in (sum sigma1(n) q^n)^2 equals the direct double sum
    n = 8
    s = QSeries.from_coeffs([0] + [sigma1(k) for k in range(1, n + 1)])
    sq = series_mul(s, s)
    for k in range(n + 1):
        direct = sum(
            sigma1(d1) * sigma1(k - d1) for d1 in range(1, k) if k - d1 >= 1
        )
        assert sq.coefficient(k) == direct
    assert sq.coefficient(2) == 1  # sigma1(1)*sigma1(1)


def test_series_mul_zero_annihilates():
    a = QSeries.from_coeffs([3, -2, 7], order=4)
    z = QSeries.zero(4)
    assert series_mul(a, z).is_zero()


def test_series_truncation_to_min_order():
    a = QSeries.from_coeffs([1, 1, 1, 1])  # order 3
    b = QSeries.from_coeffs([1, 2])  # order 1
    assert (a * b).order == 1
    assert (a + b).order == 1


def test_sigma1_examples():
    assert sigma1(1) == 1
    assert sigma1(2) == 3
    assert sigma1(6) == 12  # divisors 1,2,3,6
    with pytest.raises(ValueError):
        sigma1(0)


def test_sigma1_multiplicative_on_coprime():
    from math import gcd

    for m in range(1, 51):
        for n in range(1, 51):
            if gcd(m, n) == 1:
                assert sigma1(m * n) == sigma1(m) * sigma1(n)


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


@given(rationals)
def test_rational_field_inverse(a):
    if a != 0:
        assert a * (1 / a) == 1


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)


@given(st.lists(rationals, min_size=1, max_size=6),
       st.lists(rationals, min_size=1, max_size=6),
       st.lists(rationals, min_size=1, max_size=6))
def test_series_mul_associative_commutative(xs, ys, zs):
    n = min(len(xs), len(ys), len(zs)) - 1
    a = QSeries.from_coeffs(xs, order=n)
    b = QSeries.from_coeffs(ys, order=n)
    c = QSeries.from_coeffs(zs, order=n)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


def test_serialization_round_trip():
    assert rat_to_str(rat(-3, 6)) == "-1/2"
    assert rat_to_str(rat(4, 2)) == "2"
    assert rat_from_str("7/3") == Fraction(7, 3)
    s = QSeries.from_coeffs([rat(1), rat(-1, 2)], order=3)
    assert QSeries.from_json(s.to_json()) == s
