import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from qident.halfint import HalfInt
from qident.series import (
    ChargeRankMismatch,
    QSeries,
    TruncationError,
    euler_product,
    inv_pochhammer,
    pochhammer,
    series_eq,
    series_leq,
)


def qs(order, terms, rank=0):
    return QSeries(order, rank, terms)


def u(order, **coeffs):
    """Uncharged series from integer exponents: u(10, e0=1, e2=-1)."""
    return QSeries(order, 0, {(int(k[1:]), ()): v for k, v in coeffs.items()})


class TestHalfInt:
    def test_arithmetic_is_exact_on_doubled_ints(self):
        a = HalfInt(3)   # 3/2
        b = HalfInt(1)   # 1/2
        assert (a + b).twice == 4
        assert (a - b) == 1
        assert (a * 3).twice == 9
        assert a > b and b < 1 and a == Fraction(3, 2)

    def test_coerce(self):
        assert HalfInt.coerce(2).twice == 4
        assert HalfInt.coerce(Fraction(5, 2)).twice == 5
        with pytest.raises(ValueError):
            HalfInt.coerce(Fraction(1, 3))

    def test_str(self):
        assert str(HalfInt(4)) == "2"
        assert str(HalfInt(5)) == "5/2"


class TestAddMul:
    def test_add_cancellation(self):
        a = u(10, e0=1, e1=1)
        b = u(10, e0=1, e1=-1)
        assert (a + b).terms == {(0, ()): 2}

    def test_add_half_exponents(self):
        h = QSeries(5, 0, {(HalfInt(1), ()): 1})
        s = h + h
        assert s.coeff(HalfInt(1)) == 2

    def test_add_truncates_to_min_order(self):
        a = u(5, e0=1)
        b = u(8, e0=1, e6=7)
        s = a + b
        assert s.truncation_order == 5
        assert (6, ()) not in s.terms

    def test_mul_difference_of_squares(self):
        assert ((u(10, e0=1, e1=1) * u(10, e0=1, e1=-1)).terms
                == {(0, ()): 1, (4, ()): -1})

    def test_geometric_inverse(self):
        geom = QSeries(10, 0, {(k, ()): 1 for k in range(10)})
        one_minus_q = u(10, e0=1, e1=-1)
        assert (one_minus_q * geom).is_one()

    def test_charge_monomials_multiply(self):
        a = QSeries(10, 2, {(1, (1, 0)): 1})
        b = QSeries(10, 2, {(2, (0, 3)): 2})
        p = a * b
        assert p.terms == {(6, (1, 3)): 2}

    def test_charge_rank_mismatch(self):
        with pytest.raises(ChargeRankMismatch):
            qs(5, {(0, (1,)): 1}, rank=1) + u(5, e0=1)
        with pytest.raises(ChargeRankMismatch):
            qs(5, {(0, (1,)): 1}, rank=1) * u(5, e0=1)


class TestCoeff:
    def test_basic(self):
        s = u(5, e0=1, e1=2)
        assert s.coeff(1) == 2
        assert s.coeff(2) == 0

    def test_out_of_range_is_an_error_not_zero(self):
        s = u(5, e0=1, e1=2)
        with pytest.raises(TruncationError):
            s.coeff(5)
        with pytest.raises(TruncationError):
            s.coeff(7)


class TestCompare:
    def test_equal(self):
        a = u(10, e0=1, e1=1)
        assert series_eq(a, a).equal

    def test_mismatch_location(self):
        r = series_eq(u(10, e0=1, e1=1), u(10, e0=1, e1=2))
        assert not r.equal
        assert r.mismatch.qexp == 1
        assert (r.mismatch.coeff_a, r.mismatch.coeff_b) == (1, 2)

    def test_compares_only_below_min_order(self):
        a = u(5, e0=1, e1=1)
        b = u(8, e0=1, e1=1, e6=9)
        assert series_eq(a, b).equal

    def test_leq(self):
        assert series_leq(u(9, e0=1, e1=1), u(9, e0=1, e1=2)).equal
        r = series_leq(u(9, e0=1, e1=2), u(9, e0=1, e1=1))
        assert not r.equal and r.mismatch.qexp == 1
        a = u(9, e0=1, e3=5)
        assert series_leq(a, a).equal


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(0, 8).is_one()

    def test_n1(self):
        assert pochhammer(1, 8).terms == {(0, ()): 1, (2, ()): -1}

    def test_n3_expansion(self):
        # (1-q)(1-q^2)(1-q^3) = 1 - q - q^2 + q^4 + q^5 - q^6
        want = {(0, ()): 1, (2, ()): -1, (4, ()): -1, (8, ()): 1,
                (10, ()): 1, (12, ()): -1}
        assert pochhammer(3, 10).terms == want

    def test_inverse_geometric(self):
        s = inv_pochhammer(1, 4)
        assert s.terms == {(2 * k, ()): 1 for k in range(4)}

    def test_inverse_property(self):
        for n in range(13):
            assert (pochhammer(n, 30) * inv_pochhammer(n, 30)).is_one()

    def test_inv_pochhammer_nonnegative(self):
        for n in range(8):
            assert all(c >= 0 for c in inv_pochhammer(n, 25).terms.values())


class TestEulerProduct:
    def test_q_pochhammer_infinite(self):
        # (q;q)_inf to order 6: pentagonal-number pattern
        s = euler_product([(-1, 1, 1, 1)], 6)
        assert s.terms == {(0, ()): 1, (2, ()): -1, (4, ()): -1, (10, ()): 1}

    def test_neg_q_pochhammer(self):
        s = euler_product([(1, 1, 1, 1)], 3)
        assert s.terms == {(0, ()): 1, (2, ()): 1, (4, ()): 1}

    def test_modular_product_first_coefficient(self):
        s = euler_product([(1, 1, 1, 1), (1, 1, 2, 2),
                           (-1, 1, 5, -1), (-1, 4, 5, -1)], 4)
        assert s.coeff(1) == 4

    def test_divergent_factor_refused(self):
        with pytest.raises(ValueError):
            euler_product([(1, 0, 1, 1)], 5)


class TestRender:
    def test_canonical_form(self):
        s = QSeries(6, 1, {(0, (0,)): 1, (1, (0,)): 2, (2, (1,)): 3})
        assert s.render() == "1 + 2*q + 3*q^2*y1"

    def test_half_integer_and_signs(self):
        s = QSeries(6, 0, {(HalfInt(3), ()): -1, (0, ()): 1})
        assert s.render() == "1 - q^(3/2)"

    def test_sorted_by_exponent_then_charges(self):
        s = QSeries(6, 1, {(1, (2,)): 1, (1, (1,)): 4})
        assert s.render() == "4*q*y1 + q*y1^2"


# ---------------------------------------------------------------------------
# randomized ring laws (criterion: >= 200 cases, exact at fixed truncation)
# ---------------------------------------------------------------------------

def _series_strategy(rank=0, order=12):
    keys = st.tuples(st.integers(min_value=0, max_value=2 * order - 1),
                     st.tuples(*([st.integers(-2, 2)] * rank)))
    return st.dictionaries(keys, st.integers(-9, 9), max_size=6).map(
        lambda d: QSeries._raw(2 * order, rank,
                               {(e2, ch): c for (e2, ch), c in d.items() if c}))


@settings(max_examples=200, deadline=None)
@given(_series_strategy(), _series_strategy(), _series_strategy())
def test_ring_laws(a, b, c):
    assert series_eq((a + b) + c, a + (b + c)).equal
    assert series_eq(a + b, b + a).equal
    assert series_eq(a * b, b * a).equal
    assert series_eq((a * b) * c, a * (b * c)).equal
    assert series_eq(a * (b + c), a * b + a * c).equal


@settings(max_examples=200, deadline=None)
@given(_series_strategy(order=7), _series_strategy(order=5))
def test_mul_truncation_closure(a, b):
    p = a * b
    assert p.order2 == min(a.order2, b.order2)
    assert all(e2 < p.order2 for (e2, _ch) in p.terms)


@settings(max_examples=200, deadline=None)
@given(_series_strategy(rank=1), _series_strategy(rank=1))
def test_charged_mul_matches_bruteforce(a, b):
    p = a * b
    brute = {}
    for (e1, c1), v1 in a.terms.items():
        for (e2, c2), v2 in b.terms.items():
            if e1 + e2 < p.order2:
                key = (e1 + e2, (c1[0] + c2[0],))
                brute[key] = brute.get(key, 0) + v1 * v2
    assert p.terms == {k: v for k, v in brute.items() if v}
