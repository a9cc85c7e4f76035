from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from otcert.balls import Ball
from otcert.embeddings import (
    all_embedding_values,
    coordinate_values,
    eval_complex,
    eval_real,
    log_vector,
    sign_real,
    signature,
)
from otcert.errors import PreconditionError
from otcert.numfield import NumberField

K3 = NumberField([-2, 0, 0, 1])
K6 = NumberField([-2, 0, 0, 0, 0, 0, 1])


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def test_signatures():
    assert signature(K3) == (1, 1)
    assert signature(K6) == (2, 2)
    assert signature(NumberField([1, 0, 1])) == (0, 1)


def test_eval_real_widths_and_values():
    lo, hi = eval_real(K3.theta, 0, 100)
    assert hi - lo <= Fraction(1, 2**100)
    with mp.workprec(200):
        assert _mpf(lo) <= mpmath.cbrt(2) <= _mpf(hi)
    assert eval_real(K3.one, 0) == (1, 1)


def test_real_order_is_decreasing():
    with mp.workprec(200):
        r = mpmath.root(2, 6)
        lo0, hi0 = eval_real(K6.theta, 0, 120)
        lo1, hi1 = eval_real(K6.theta, 1, 120)
        assert _mpf(lo0) <= r <= _mpf(hi0)
        assert _mpf(lo1) <= -r <= _mpf(hi1)


def test_signs():
    assert sign_real(K3.theta - 1, 0) == 1
    assert sign_real(K3.zero, 0) == 0
    assert sign_real(K6.theta - 1, 1) == -1
    assert sign_real(K6.theta - 1, 0) == 1
    assert sign_real(K6.theta**3 - 2, 0) == -1


def test_complex_values():
    with mp.workprec(200):
        z = eval_complex(K3.theta, 0, 150)
        expected = mpmath.cbrt(2) * mpmath.expjpi(mpmath.mpf(2) / 3)
        assert z.contains(expected)
        assert eval_complex(K3.element(5), 0).contains(5)
        w = eval_complex(K6.theta, 1, 150)
        assert abs(abs(w.mid) - mpmath.root(2, 6)) <= w.rad
    with pytest.raises(PreconditionError):
        eval_complex(K3.theta, 1)


def test_conjugate_mask():
    plain = coordinate_values(K6.theta, 128)
    masked = coordinate_values(K6.theta, 128, [False, True])
    assert masked[3].overlaps(plain[3].conj())
    assert masked[2].overlaps(plain[2])


def test_u2_log_entry():
    u2 = (K6.theta - 1) ** 2
    with mp.workprec(260):
        oracle = 2 * mpmath.log(mpmath.root(2, 6) - 1)
        assert abs(log_vector(u2, 192)[0].mid - oracle) < mpmath.mpf(2) ** -150


def test_log_vector_of_one():
    for b in log_vector(K6.one, 128):
        assert b.contains(0)


def test_log_vector_zero_rejected():
    with pytest.raises(PreconditionError):
        log_vector(K6.zero)


small = st.lists(st.integers(-3, 3), min_size=6, max_size=6)


@settings(max_examples=50)
@given(small, small)
def test_homomorphism_and_norm(a, b):
    x, y = K6.element(a), K6.element(b)
    vx, vy, vxy = (all_embedding_values(e, 96) for e in (x, y, x * y))
    for p, q, r in zip(vx, vy, vxy):
        assert (p * q).overlaps(r)
    prod = Ball.exact(1, 96)
    for v in vx:
        prod = prod * v
    nrm = x.norm()
    assert prod.real().contains(nrm)
