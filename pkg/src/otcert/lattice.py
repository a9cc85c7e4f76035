"""LLL reduction over the integers and integer-relation candidates."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce the rows of an integer matrix (exact rational Gram-Schmidt)."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return b

    def gram_schmidt():
        bstar: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms: list[Fraction] = []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = _dot(b[i], bstar[j]) / norms[j] if norms[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(_dot(v, v))
        return mu, norms

    mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return b


def integer_relation_candidates(
    columns: Sequence[Sequence[float]],
    scale_bits: int,
    error: float = 0.0,
    max_coeff: int | None = None,
    max_candidates: int = 32,
) -> list[list[int]]:
    """Short integer vectors a with sum_k a_k * columns[k] close to zero.

    ``columns[k]`` is the real vector attached to variable k. The lattice
    spanned by rows (e_k | 2^scale_bits * columns[k]) is LLL-reduced; the
    coefficient parts of reduced rows with small tail are returned, shortest
    first. ``error`` bounds the absolute error of the column entries and sets
    how much tail is tolerated; vectors with an entry above ``max_coeff``
    (default 2^(scale_bits / 2m)) are treated as precision noise. The candidates still need exact verification.
    """
    m = len(columns)
    if m == 0:
        return []
    scale = 2**scale_bits
    if max_coeff is None:
        max_coeff = 2 ** max(1, scale_bits // (2 * m))
    rows = []
    with mp.workprec(scale_bits + 64):
        for k, col in enumerate(columns):
            tail = [int(mpmath.nint(mpmath.mpf(x) * scale)) for x in col]
            rows.append([1 if j == k else 0 for j in range(m)] + tail)
    reduced = lll_reduce(rows)
    out = []
    for row in reduced:
        coeffs, tail = row[:m], row[m:]
        if not any(coeffs) or max(abs(c) for c in coeffs) > max_coeff:
            continue
        bound = sum(abs(c) for c in coeffs) * (1 + scale * error) + 1
        if all(abs(x) <= bound for x in tail):
            if next(c for c in coeffs if c) < 0:
                coeffs = [-c for c in coeffs]
            out.append(coeffs)
    out.sort(key=lambda v: sum(c * c for c in v))
    return out[:max_candidates]
