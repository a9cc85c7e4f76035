from fractions import Fraction

import mpmath
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp

from otcert.balls import Ball, ball_det


def test_exact_fraction_keeps_precision():
    b = Ball.exact(Fraction(1, 3), 256)
    with mp.workprec(300):
        assert b.contains(mpmath.mpf(1) / 3)
        assert b.rad < mpmath.mpf(2) ** -250


def test_operations_run_at_ball_precision():
    # outside any workprec block the ambient precision is 53 bits
    a = Ball.exact(Fraction(1, 3), 200)
    b = Ball.exact(Fraction(2, 3), 200)
    s = a + b - 1
    assert s.contains_zero()
    assert s.rad < mpmath.mpf(2) ** -190


def test_conjugate_keeps_precision():
    with mp.workprec(200):
        z = Ball(mpmath.mpc(1, 1) / 3, mpmath.mpf(2) ** -180)
    w = z.conj().conj()
    assert w.overlaps(z)
    with mp.workprec(200):
        assert abs(w.mid - z.mid) < mpmath.mpf(2) ** -190


def test_zero_exclusion():
    assert Ball(0, 1e-10).contains_zero()
    assert not Ball(1, 0.5).contains_zero()


def test_log_abs_encloses():
    with mp.workprec(160):
        b = Ball(mpmath.mpf(2), mpmath.mpf(2) ** -150)
        assert b.log_abs().contains(mpmath.log(2))


def test_det():
    rows = [[Ball.exact(2), Ball.exact(1)], [Ball.exact(1), Ball.exact(3)]]
    assert ball_det(rows).contains(5)
    singular = [[Ball.exact(1), Ball.exact(2)], [Ball.exact(2), Ball.exact(4)]]
    assert ball_det(singular).contains_zero()


fr = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


@given(fr, fr)
def test_arithmetic_encloses_exact_result(x, y):
    bx, by = Ball.exact(x, 128), Ball.exact(y, 128)
    with mp.workprec(256):
        assert (bx * by).contains(mpmath.mpf(x.numerator) / x.denominator * y.numerator / y.denominator)
        assert (bx - by).contains(mpmath.mpf((x - y).numerator) / (x - y).denominator)
        if y:
            q = x / y
            assert (bx / by).contains(mpmath.mpf(q.numerator) / q.denominator)
