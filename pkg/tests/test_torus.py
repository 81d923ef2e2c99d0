from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ergotope.torus import (
    GOLDEN,
    SQRT2M1,
    FloatValue,
    QuadraticIrrational,
    Rational,
    TorusPoint,
    frac,
    frac_multiples,
    orbit_points,
    orbit_y,
    parse_base_value,
    parse_coordinate,
    format_base_value,
    format_coordinate,
    skew_map,
)

# frac(i * (sqrt5 - 1)/2) at 50 digits (mpmath)
GOLDEN_ORBIT = [0.0, 0.6180339887498948482, 0.23606797749978969641]


def test_skew_map_examples():
    assert skew_map(TorusPoint(Rational(0), 0.3)) == TorusPoint(Rational(0), 0.3)
    assert skew_map(TorusPoint(Rational(1, 2), Fraction(1, 4))).y == Fraction(3, 4)
    assert skew_map(TorusPoint(Rational(2, 3), Fraction(2, 3))).y == Fraction(1, 3)


def test_skew_map_keeps_x_object():
    p = TorusPoint(GOLDEN, 0.1)
    assert skew_map(p).x is p.x


def test_orbit_quarter_returns():
    pts = orbit_points(TorusPoint(Rational(1, 4), 0), 5)
    assert [p.y for p in pts] == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 0]


def test_orbit_fixed_fiber():
    pts = orbit_points(TorusPoint(Rational(0), Fraction(3, 10)), 6)
    assert all(p == TorusPoint(Rational(0), Fraction(3, 10)) for p in pts)


def test_orbit_golden_against_extended_precision():
    ys = orbit_y(TorusPoint(GOLDEN, 0), 3)
    assert np.allclose(ys, GOLDEN_ORBIT, atol=1e-12, rtol=0)


def test_orbit_rejects_zero_length():
    with pytest.raises(ValueError):
        orbit_points(TorusPoint(GOLDEN, 0), 0)


def test_large_index_accuracy():
    import mpmath as mp

    mp.mp.dps = 40
    g = (mp.sqrt(5) - 1) / 2
    ks = np.array([10**7 - 1, 9_876_543, 123_456_789])
    got = frac_multiples(GOLDEN, ks)
    want = [float(mp.frac(int(k) * g)) for k in ks]
    assert np.max(np.abs(got - want)) < 1e-12


def test_double_mode_is_selectable(monkeypatch):
    monkeypatch.setenv("ERGOTOPE_PRECISION", "double")
    naive = frac_multiples(GOLDEN, np.array([10**7]))
    monkeypatch.setenv("ERGOTOPE_PRECISION", "extended")
    careful = frac_multiples(GOLDEN, np.array([10**7]))
    assert abs(naive[0] - careful[0]) < 1e-8
    monkeypatch.setenv("ERGOTOPE_PRECISION", "quad")
    with pytest.raises(ValueError):
        frac_multiples(GOLDEN, np.array([1]))


@given(st.integers(0, 40), st.integers(1, 40), st.fractions(0, 1).filter(lambda f: f < 1),
       st.integers(1, 60))
def test_closed_form_matches_iteration_exactly(p, q, y0, n):
    point = TorusPoint(Rational(p, q), y0)
    pts = orbit_points(point, n)
    cur = point
    for got in pts:
        assert got == cur
        cur = skew_map(cur)


@given(st.sampled_from([GOLDEN, SQRT2M1, QuadraticIrrational(1, 2, 7, 5)]),
       st.floats(0, 1, exclude_max=True), st.integers(1, 300))
def test_closed_form_matches_iteration_float(x, y0, n):
    pts = orbit_points(TorusPoint(x, y0), n)
    cur = TorusPoint(x, y0)
    for got in pts:
        d = abs(got.y - cur.y)
        assert min(d, 1 - d) < 1e-12
        cur = skew_map(cur)


@given(st.integers(0, 1000), st.integers(1, 1000))
def test_periodicity_rational(p, q):
    point = TorusPoint(Rational(p, q), Fraction(p + 3, 7 * q + 1) % 1)
    cur = point
    for _ in range(Rational(p, q).q):
        cur = skew_map(cur)
    assert cur == point


@given(st.floats(-1e6, 1e6))
def test_frac_range(v):
    r = frac(v)
    assert 0.0 <= r < 1.0


def test_frac_exact_on_integers():
    assert frac(7) == 0 and frac(-3.0) == 0.0 and frac(Fraction(-1, 3)) == Fraction(2, 3)


def test_parse_base_values():
    assert parse_base_value("2/4") == Rational(1, 2)
    assert parse_base_value("7/3") == Rational(1, 3)
    assert parse_base_value("golden") == GOLDEN
    assert parse_base_value("sqrt2m1") == SQRT2M1
    assert parse_base_value("(1+sqrt(5))/2") == GOLDEN
    assert parse_base_value("(-1+1*sqrt(5))/2") == GOLDEN
    assert parse_base_value("(-2+sqrt(8))/2") == SQRT2M1
    assert isinstance(parse_base_value("0.25"), FloatValue)
    with pytest.raises(ValueError):
        parse_base_value("1/0")
    with pytest.raises(ValueError):
        parse_base_value("(1+sqrt(4))/2")
    with pytest.raises(ValueError):
        parse_base_value("pi")


def test_base_value_round_trip_text():
    for x in [Rational(3, 8), GOLDEN, SQRT2M1, QuadraticIrrational(3, -2, 7, 5), FloatValue(0.125)]:
        assert parse_base_value(format_base_value(x)) == x


def test_quadratic_irrational_is_normalized():
    x = QuadraticIrrational(3, -2, 7, 5)
    assert 0 <= float(x) < 1
    assert x.c > 0
    assert abs(float(x) - ((3 - 2 * 7**0.5) / 5 % 1)) < 1e-15


def test_compare_is_exact():
    assert GOLDEN.compare(Fraction(55, 89)) > 0  # 0.61797... < golden
    assert GOLDEN.compare(Fraction(34, 55)) < 0  # 0.61818... > golden
    assert SQRT2M1.compare(Fraction(5, 12)) < 0


def test_coordinates_read_exactly():
    assert parse_coordinate("0.1") == Fraction(1, 10)
    assert parse_coordinate("1/3") == Fraction(1, 3)
    assert parse_coordinate("1.25") == Fraction(1, 4)
    assert format_coordinate(Fraction(1, 10)) == "0.1"
    assert format_coordinate(Fraction(1, 3)) == "1/3"
    assert format_coordinate(Fraction(0)) == "0"
