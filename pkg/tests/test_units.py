import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from otcert.config import DEFAULT_CONFIG
from otcert.embeddings import log_vector
from otcert.errors import DatumRejected, PreconditionError
from otcert.numfield import NumberField
from otcert.units import (
    admissibility_check,
    find_multiplicative_relation,
    is_totally_positive,
    is_unit,
    make_ot_datum,
)

K3 = NumberField([-2, 0, 0, 1])
K6 = NumberField([-2, 0, 0, 0, 0, 0, 1])
U1 = K6.theta**2 - 1
U2 = (K6.theta - 1) ** 2


def test_unit_checks():
    ev = is_unit(K3.theta - 1)
    assert ev.is_unit and ev.norm == 1 and ev.inverse == K3.theta**2 + K3.theta + 1
    assert not is_unit(K3.element(2))
    assert is_unit(U2)
    assert not is_unit(K6.theta)


def test_total_positivity():
    assert is_totally_positive(K3.theta - 1)
    assert not is_totally_positive(K6.theta - 1)
    assert is_totally_positive(U2)


def test_inoue_admissibility():
    ev = admissibility_check(K3, [K3.theta - 1])
    assert ev.status == "pass"
    with mp.workprec(400):
        assert ev.determinant.contains(mpmath.log(mpmath.cbrt(2) - 1))


def test_example_matrix():
    ev = admissibility_check(K6, [U1, U2])
    assert ev.status == "pass"
    assert not ev.determinant.contains_zero()
    assert ev.condition_number < 10


def test_duplicate_generators_fail():
    ev = admissibility_check(K6, [U2, U2])
    assert ev.status == "fail"
    assert ev.relation in ([1, -1], [-1, 1])


def test_admissibility_preconditions():
    with pytest.raises(PreconditionError):
        admissibility_check(K6, [U2])
    with pytest.raises(PreconditionError):
        admissibility_check(K6, [U2, K6.theta - 1])


def test_multiplicative_relation():
    assert find_multiplicative_relation([U1, U2]) is None
    rel = find_multiplicative_relation([U1, U1**2])
    assert rel is not None and (U1 ** rel[0]) * (U1 ** (2 * rel[1])) == 1


def test_make_datum():
    d = make_ot_datum([-2, 0, 0, 1], [[-1, 1, 0]])
    assert (d.s, d.t) == (1, 1)
    assert d.order == "Z[theta]"
    d6 = make_ot_datum(K6, [U1, U2], DEFAULT_CONFIG, [False, True])
    assert (d6.s, d6.t) == (2, 2)


@pytest.mark.parametrize(
    "poly,gens,fragment",
    [
        ([-3, 0, 1], [[2, 1]], "t = 0"),
        ([1, 0, 1], [], "s = 0"),
        ([-1, 0, 1], [[1, 1]], "reducible"),
        ([-2, 0, 0, 1], [[2, 0, 0]], "not a unit"),
        ([-2, 0, 0, 0, 0, 0, 1], [[-1, 1, 0, 0, 0, 0], [1, -2, 1, 0, 0, 0]], "not totally positive"),
        ([-2, 0, 0, 0, 0, 0, 1], [[1, -2, 1, 0, 0, 0]] * 2, "singular"),
        ([-2, 0, 0, 1], [[1, 0, 0]], "root of unity"),
    ],
)
def test_rejections(poly, gens, fragment):
    with pytest.raises(DatumRejected) as exc:
        make_ot_datum(poly, gens)
    assert any(fragment in r for r in exc.value.reasons), exc.value.reasons


def test_rejection_lists_every_reason():
    with pytest.raises(DatumRejected) as exc:
        make_ot_datum([-3, 0, 1], [[2, 1], [0, 1]])
    assert len(exc.value.reasons) >= 2


exps = st.integers(-6, 6)


@settings(max_examples=40)
@given(exps, exps)
def test_unit_log_sum_vanishes(a, b):
    u = U1**a * U2**b
    assert is_unit(u)
    with mp.workprec(256):
        total = sum((x.mid for x in log_vector(u, 192)), mpmath.mpf(0))
        assert abs(total) < mpmath.mpf(2) ** -150
