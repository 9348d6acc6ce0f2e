from fractions import Fraction
import random

from hypothesis import given, strategies as st
import pytest

import oracles
from qmagnus.errors import DomainMismatch, NotInvertible, PrecisionExhausted
from qmagnus.scalars import GF, QQ, TruncatedPadic, Zmod
from qmagnus.series import SeriesRing, TruncatedSeries
from qmagnus.wordexpr import PadicLiteral

R = SeriesRing(2, 4)


@st.composite
def series(draw, ring=R, unit=False):
    n = draw(st.integers(0, 6))
    terms = {}
    for _ in range(n):
        deg = draw(st.integers(1 if unit else 0, ring.N - 1))
        mon = tuple(draw(st.lists(st.integers(0, ring.d - 1), min_size=deg, max_size=deg)))
        terms[mon] = draw(st.fractions(-9, 9, max_denominator=5))
    if unit:
        terms[()] = 1
    return ring.from_terms(terms)


def test_simple_arithmetic():
    s = R.generator(0)
    assert s + R.zero() == s
    assert s - s == R.zero()
    assert s.scale(2) == R.from_terms({(): 2, (0,): 2})
    assert R.generator(0) * R.generator(1) == R.from_terms({(): 1, (0,): 1, (1,): 1, (0, 1): 1})


@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * R.one() == a == R.one() * a


@given(series(), series())
def test_mul_matches_split_oracle(a, b):
    want = oracles.mul(oracles.series_dict(a), oracles.series_dict(b), R.d, R.N)
    assert oracles.series_dict(a * b) == want


def test_geometric_series():
    ring = SeriesRing(1, 5)
    geo = ring.from_terms({(0,) * m: (-1) ** m for m in range(5)})
    assert ring.generator(0) * geo == ring.one()
    assert ring.generator(0).invert_unit() == geo


def test_invert_sum_of_generators():
    ring = SeriesRing(2, 3)
    s = ring.from_terms({(): 1, (0,): 1, (1,): 1})
    want = ring.from_terms(
        {(): 1, (0,): -1, (1,): -1, (0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): 1}
    )
    assert s.invert_unit() == want
    assert s * want == ring.one()
    assert ring.one().invert_unit() == ring.one()


def test_invert_non_unit():
    with pytest.raises(NotInvertible):
        R.y(0).invert_unit()
    with pytest.raises(NotInvertible):
        SeriesRing(1, 3, GF(3)).from_terms({(): 3, (0,): 1}).invert_unit()


@given(series(unit=True))
def test_inverse_is_two_sided(s):
    t = s.invert_unit()
    assert s * t == R.one() == t * s


def test_integer_power_agrees_with_product():
    s = R.generator(0)
    assert s.binomial_power(2) == s * s == R.from_terms({(): 1, (0,): 2, (0, 0): 1})
    assert s.binomial_power(-1) == s.invert_unit()


def test_square_root_series():
    ring = SeriesRing(1, 4)
    got = ring.generator(0).binomial_power(Fraction(1, 2))
    want = ring.from_terms({(): 1, (0,): Fraction(1, 2), (0, 0): Fraction(-1, 8),
                            (0, 0, 0): Fraction(1, 16)})
    assert got == want


@pytest.mark.parametrize("domain", [QQ, GF(3), GF(5), Zmod(3, 3)])
def test_square_root_squares_back(domain):
    for N in (2, 5, 9):
        ring = SeriesRing(2, N, domain)
        g = ring.generator(0)
        assert g.binomial_power(Fraction(1, 2)).binomial_power(2) == g


@given(series(unit=True), st.fractions(-3, 3, max_denominator=6))
def test_binomial_power_matches_oracle(s, a):
    want = oracles.binomial_power(oracles.series_dict(s), a, R.d, R.N)
    assert oracles.series_dict(s.binomial_power(a)) == want


def test_binomial_power_needs_unit():
    with pytest.raises(NotInvertible):
        R.y(0).binomial_power(Fraction(1, 2))


def test_padic_exponent():
    ring = SeriesRing(1, 4, Zmod(2, 2))
    g = ring.generator(0)
    # a = 3 exactly: the result must agree with the integer power
    got = g.binomial_power(TruncatedPadic(2, 10, 3))
    assert got == g * g * g
    with pytest.raises(PrecisionExhausted):
        g.binomial_power(TruncatedPadic(2, 2, 3))
    with pytest.raises(DomainMismatch):
        SeriesRing(1, 3).generator(0).binomial_power(PadicLiteral(3, 5))


def test_truncate_examples():
    s = SeriesRing(2, 4).from_terms({(): 1, (0,): 1, (0, 1): 1})
    assert s.truncate(4) == s
    assert s.truncate(2) == SeriesRing(2, 2).from_terms({(): 1, (0,): 1})
    assert s.truncate(1) == SeriesRing(2, 1).one()
    with pytest.raises(ValueError):
        s.truncate(5)


@given(series(), series())
def test_truncation_is_a_ring_map(a, b):
    for M in (1, 2, 3):
        assert (a * b).truncate(M) == a.truncate(M) * b.truncate(M)
        assert (a + b).truncate(M) == a.truncate(M) + b.truncate(M)


@given(series(unit=True), st.fractions(-2, 2, max_denominator=4))
def test_truncation_commutes_with_powers(s, a):
    assert s.binomial_power(a).truncate(3) == s.truncate(3).binomial_power(a)


def test_lowest_term():
    assert R.zero().lowest_term() is None
    s = R.from_terms({(0, 1): 1, (1, 0): -1, (0, 0, 0): 1})
    deg, comp = s.lowest_term()
    assert deg == 2 and comp == R.from_terms({(0, 1): 1, (1, 0): -1})
    assert R.generator(0).lowest_term() == (0, R.one())


@given(series(), series())
def test_reduction_mod_p_is_a_ring_map(a, b):
    F = GF(7)
    a7, b7 = a.reduce_mod(F), b.reduce_mod(F)
    assert (a * b).reduce_mod(F) == a7 * b7
    assert oracles.reduce_mod(oracles.series_dict(a * b), 7) == {
        m: c for m, c in (a7 * b7).terms.items()}


def test_ring_mismatch():
    with pytest.raises(DomainMismatch):
        R.one() * SeriesRing(2, 5).one()
    with pytest.raises(DomainMismatch):
        R.one() + R.with_domain(GF(3)).one()


def test_json_round_trip():
    rng = random.Random(1)
    for dom in (QQ, GF(5), Zmod(3, 2)):
        ring = SeriesRing(3, 4, dom)
        s = ring.from_terms({
            tuple(rng.randrange(3) for _ in range(rng.randrange(4))): rng.randint(-9, 9)
            for _ in range(8)})
        assert TruncatedSeries.from_json(s.to_json()) == s
