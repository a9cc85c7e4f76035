import mpmath
import numpy as np
from mpmath import mp

from otcert.lattice import integer_relation_candidates, lll_reduce


def test_lll_reduces_classic_basis():
    basis = [[1, 1, 1], [-1, 0, 2], [3, 5, 6]]
    red = lll_reduce(basis)
    assert sorted(sum(c * c for c in v) for v in red)[0] <= 2
    # same lattice: unimodular change of basis
    assert round(abs(np.linalg.det(np.array(red, dtype=float)))) == round(abs(np.linalg.det(np.array(basis, dtype=float))))


def test_relation_among_logs():
    with mp.workprec(256):
        cols = [[mpmath.log(2)], [mpmath.log(3)], [mpmath.log(12)]]
        cands = integer_relation_candidates(cols, 120)
    assert [2, 1, -1] in cands or [-2, -1, 1] in cands


def test_no_relation_for_independent_logs():
    with mp.workprec(256):
        cols = [[mpmath.log(2)], [mpmath.log(3)]]
        cands = integer_relation_candidates(cols, 120, max_coeff=1000)
    assert cands == []
