from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from otcert.errors import PreconditionError
from otcert.poly import (
    Irreducibility,
    RationalPoly,
    complex_roots,
    degree_pattern_mod_p,
    irreducibility_status,
    isolate_real_roots,
    poly_gcd,
    poly_xgcd,
    sturm_count,
)

P = RationalPoly
X3M2 = P([-2, 0, 0, 1])
X6M2 = P([-2, 0, 0, 0, 0, 0, 1])

small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=6)
polys = st.lists(small_fracs, min_size=1, max_size=6).map(P)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def test_canonical_form():
    p = P([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert P([]).degree == -1
    assert P([Fraction(2, 4)]).coeffs == (Fraction(1, 2),)


def test_gcd_common_factor():
    assert poly_gcd(P([-1, 0, 1]), P([-1, 1])) == P([-1, 1])


def test_mod_by_linear_is_evaluation():
    assert X3M2 % P([-2, 1]) == P([6])


def test_multiply_by_zero():
    assert (X3M2 * P([])).is_zero()


def test_xgcd_bezout():
    p, q = P([1, 0, 1]), P([-1, 1, 1])
    g, s, t = poly_xgcd(p, q)
    assert s * p + t * q == g
    assert g == P([1])


@pytest.mark.parametrize("f,count", [(X3M2, 1), (P([1, 0, 1]), 0), (X6M2, 2)])
def test_sturm_counts(f, count):
    assert sturm_count(f, -10, 10) == count


def test_isolation_x3m2():
    (iv,) = isolate_real_roots(X3M2)
    assert iv.lo < Fraction(12599, 10000) < iv.hi
    r = iv.refine_to(Fraction(1, 2**80))
    assert abs(float(r.midpoint) - 2 ** (1 / 3)) < 1e-15


def test_isolation_pairs():
    lo, hi = isolate_real_roots(P([-1, 0, 1]))
    assert lo.contains(-1) and hi.contains(1)
    neg, pos = isolate_real_roots(X6M2)
    assert neg.hi <= 0 <= pos.lo
    assert abs(float(pos.refine_to(Fraction(1, 2**60)).midpoint) - 2 ** (1 / 6)) < 1e-15


def test_isolation_needs_squarefree():
    with pytest.raises(PreconditionError):
        isolate_real_roots(P([1, -2, 1]))


def test_complex_roots_x2p1():
    roots = complex_roots(P([1, 0, 1]), 128)
    assert len(roots) == 2
    for r in roots:
        assert abs(abs(r.value) - 1) < mpmath.mpf(2) ** -64
        assert r.radius < mpmath.mpf(2) ** -64
    assert {round(complex(r.value).imag) for r in roots} == {1, -1}


@pytest.mark.parametrize("f,n,modulus", [(X3M2, 3, 2 ** (1 / 3)), (X6M2, 6, 2 ** (1 / 6))])
def test_complex_root_moduli(f, n, modulus):
    roots = complex_roots(f, 128)
    assert len(roots) == n
    assert sum(r.is_real for r in roots) == sturm_count(f, -10, 10)
    for r in roots:
        assert abs(float(abs(r.value)) - modulus) < 1e-15
    # reals first by decreasing value, then upper half by increasing argument
    reals = [r.value.real for r in roots if r.is_real]
    assert reals == sorted(reals, reverse=True)


def test_complex_roots_precision_guard():
    with pytest.raises(PreconditionError):
        complex_roots(X3M2, 16)


def test_irreducibility():
    assert irreducibility_status(X3M2).status is Irreducibility.IRREDUCIBLE
    st_ = irreducibility_status(P([-1, 0, 1]))
    assert st_.is_reducible and st_.factor is not None
    assert (P([-1, 0, 1]) % st_.factor).is_zero()
    assert irreducibility_status(X6M2).status is not Irreducibility.REDUCIBLE


def test_x3m2_has_a_root_mod_5():
    # 3^3 = 27 = 2 mod 5, so the pattern splits off a linear factor
    assert 1 in degree_pattern_mod_p([-2, 0, 0, 1], 5)
    assert degree_pattern_mod_p([-2, 0, 0, 1], 7) == [3]


@given(nonzero_polys, nonzero_polys)
def test_product_degree_and_remainder(p, q):
    assert (p * q).degree == p.degree + q.degree
    assert ((p * q) % q).is_zero()


@given(polys, nonzero_polys)
def test_division_identity(p, q):
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.degree < q.degree


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=6).map(lambda c: P(c + [1])))
def test_sturm_matches_isolation(f):
    f = f.squarefree_part()
    if f.degree < 1:
        return
    bound = f.cauchy_bound()
    assert sturm_count(f, -bound, bound) == len(isolate_real_roots(f))
