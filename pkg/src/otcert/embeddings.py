"""Archimedean embeddings of K: certified values, signs and log vectors.

Indexing conventions (0-based in code):

* real embeddings ``sigma_0 .. sigma_{s-1}`` are ordered by *decreasing*
  real root of f, so for X^6 - 2 ``sigma_0(theta) = +2^(1/6)``;
* complex embeddings ``tau_0 .. tau_{t-1}`` are the roots with positive
  imaginary part, ordered by increasing argument. A coordinate system may
  replace ``tau_j`` by its conjugate through a boolean ``conjugate`` mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import mpmath
from mpmath import mp

from .balls import Ball, ball_poly_eval
from .errors import PreconditionError, SignUndetermined
from .numfield import FieldElement, NumberField
from .poly import ComplexRoot, IsolatingInterval, complex_roots, isolate_real_roots, poly_gcd, sturm_count

DEFAULT_PRECISION = 192


class Signature(NamedTuple):
    s: int
    t: int


@lru_cache(maxsize=128)
def _real_intervals(field: NumberField) -> tuple[IsolatingInterval, ...]:
    return tuple(reversed(isolate_real_roots(field.poly)))


@lru_cache(maxsize=1024)
def _refined_interval(field: NumberField, i: int, bits: int) -> IsolatingInterval:
    return _real_intervals(field)[i].refine_to(Fraction(1, 2**bits))


@lru_cache(maxsize=256)
def _complex_roots(field: NumberField, bits: int) -> tuple[ComplexRoot, ...]:
    return tuple(complex_roots(field.poly, bits))


def signature(field: NumberField) -> Signature:
    s = len(_real_intervals(field))
    return Signature(s, (field.degree - s) // 2)


@dataclass(frozen=True)
class EmbeddingSet:
    """Root data of f backing sigma_i and tau_j at a given precision."""

    field: NumberField
    real_roots: tuple[IsolatingInterval, ...]
    complex_roots: tuple[ComplexRoot, ...]
    precision_bits: int

    @property
    def signature(self) -> Signature:
        return Signature(len(self.real_roots), len(self.complex_roots))

    def refine(self, precision_bits: int) -> "EmbeddingSet":
        return embedding_set(self.field, precision_bits)


def embedding_set(field: NumberField, precision_bits: int = DEFAULT_PRECISION) -> EmbeddingSet:
    sig = signature(field)
    reals = tuple(_refined_interval(field, i, precision_bits) for i in range(sig.s))
    roots = _complex_roots(field, max(64, precision_bits))
    uppers = tuple(r for r in roots if not r.is_real)[: sig.t]
    return EmbeddingSet(field, reals, uppers, precision_bits)


def _interval_horner(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction):
    alo = ahi = Fraction(0)
    for c in reversed(coeffs):
        prods = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(prods) + c, max(prods) + c
    return alo, ahi


def _derivative_bound(coeffs: Sequence[Fraction], radius: Fraction) -> Fraction:
    return sum((k * abs(c) * radius ** (k - 1) for k, c in enumerate(coeffs) if k), Fraction(0))


@lru_cache(maxsize=8192)
def eval_real(a: FieldElement, i: int, precision_bits: int = DEFAULT_PRECISION) -> tuple[Fraction, Fraction]:
    """Rational interval of width <= 2^-precision_bits containing sigma_i(a)."""
    field = a.field
    s = signature(field).s
    if not 0 <= i < s:
        raise PreconditionError(f"real embedding index {i} out of range (s = {s})")
    coeffs = a.poly().coeffs
    if len(coeffs) <= 1:
        c = coeffs[0] if coeffs else Fraction(0)
        return c, c
    target = Fraction(1, 2**precision_bits)
    base = _real_intervals(field)[i]
    radius = max(abs(base.lo), abs(base.hi))
    slope = _derivative_bound(coeffs, radius)
    bits = precision_bits + max(0, math.ceil(math.log2(float(slope) + 1))) + 2
    while True:
        iv = _refined_interval(field, i, bits)
        lo, hi = _interval_horner(coeffs, iv.lo, iv.hi)
        if hi - lo <= target:
            return lo, hi
        bits += 8


def sign_real(a: FieldElement, i: int, max_bits: int = 4096) -> int:
    """Exact sign of sigma_i(a)."""
    if a.is_zero():
        return 0
    g = poly_gcd(a.poly(), a.field.poly)
    if g.degree > 0:
        iv = _real_intervals(a.field)[i]
        if sturm_count(g, iv.lo, iv.hi) > 0:
            return 0
    bits = 32
    while bits <= max_bits:
        lo, hi = eval_real(a, i, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    raise SignUndetermined(f"could not decide the sign of sigma_{i}({a}) within {max_bits} bits")


@lru_cache(maxsize=8192)
def eval_complex(
    a: FieldElement,
    j: int,
    precision_bits: int = DEFAULT_PRECISION,
    conjugate: bool = False,
) -> Ball:
    """Ball enclosure of tau_j(a) (or its conjugate) with radius about 2^-precision_bits."""
    field = a.field
    t = signature(field).t
    if not 0 <= j < t:
        raise PreconditionError(f"complex embedding index {j} out of range (t = {t})")
    coeffs = a.poly().coeffs
    if len(coeffs) <= 1:
        return Ball.exact(coeffs[0] if coeffs else 0, precision_bits + 64)
    target = mpmath.ldexp(1, -precision_bits)
    # cancellation in Horner's rule costs about log2 of the coefficient size
    height = max(abs(c) for c in coeffs)
    bits = precision_bits + 16 + math.ceil(math.log2(height.numerator + 1)) + 2 * len(coeffs)
    while True:
        # evaluation precision must track the root precision or rounding slop dominates
        with mp.workprec(bits + 64):
            root = [r for r in _complex_roots(field, bits) if not r.is_real][j]
            z = Ball(mpmath.mpc(root.value), root.radius)
            val = ball_poly_eval(coeffs, z)
            if val.rad <= target * max(1, abs(val.mid)) or bits > 8 * (precision_bits + 64):
                break
        bits *= 2
    return val.conj() if conjugate else val


@lru_cache(maxsize=8192)
def real_ball(a: FieldElement, i: int, precision_bits: int = DEFAULT_PRECISION) -> Ball:
    lo, hi = eval_real(a, i, precision_bits)
    with mp.workprec(precision_bits + 64):
        return Ball.from_interval(lo, hi)


def coordinate_values(
    a: FieldElement,
    precision_bits: int = DEFAULT_PRECISION,
    conjugate: Sequence[bool] | None = None,
) -> list[Ball]:
    """Values (sigma_0(a), ..., sigma_{s-1}(a), tau_0(a), ..., tau_{t-1}(a)).

    These are the s + t coordinates on which the OT group acts; ``conjugate``
    selects which member of each complex pair serves as tau_j.
    """
    s, t = signature(a.field)
    conjugate = list(conjugate) if conjugate is not None else [False] * t
    if len(conjugate) != t:
        raise PreconditionError(f"conjugate mask needs {t} entries")
    return [real_ball(a, i, precision_bits) for i in range(s)] + [
        eval_complex(a, j, precision_bits, conjugate[j]) for j in range(t)
    ]


def all_embedding_values(a: FieldElement, precision_bits: int = DEFAULT_PRECISION) -> list[Ball]:
    """All n embedding values: reals, then tau_j, then conj(tau_j)."""
    s, t = signature(a.field)
    reals = [real_ball(a, i, precision_bits) for i in range(s)]
    ups = [eval_complex(a, j, precision_bits) for j in range(t)]
    return reals + ups + [u.conj() for u in ups]


def embedding_labels(field: NumberField) -> list[str]:
    s, t = signature(field)
    return (
        [f"sigma{i}" for i in range(s)]
        + [f"tau{j}" for j in range(t)]
        + [f"conj(tau{j})" for j in range(t)]
    )


def log_vector(
    u: FieldElement,
    precision_bits: int = DEFAULT_PRECISION,
    conjugate: Sequence[bool] | None = None,
) -> list[Ball]:
    """(log|sigma_i(u)|, ..., 2 log|tau_j(u)|, ...) as balls.

    For totally positive u the real entries are log sigma_i(u).
    """
    s, t = signature(u.field)
    if u.is_zero():
        raise PreconditionError("log vector of zero")
    out = []
    with mp.workprec(precision_bits + 64):
        for i in range(s):
            if sign_real(u, i) == 0:
                raise PreconditionError(f"sigma_{i}({u}) = 0")
            # log needs relative accuracy: add bits for small |sigma_i(u)|
            lo, hi = eval_real(u, i, 32)
            small = min(abs(lo), abs(hi))
            extra = max(0, -math.floor(math.log2(small))) if small else 64
            out.append(real_ball(u, i, precision_bits + 8 + extra).log_abs())
        for j in range(t):
            val = eval_complex(u, j, precision_bits + 8)
            if val.contains_zero():
                raise PreconditionError(f"tau_{j}({u}) is not separated from zero")
            if val.abs_lower() < 1:
                extra = max(0, -math.floor(float(mpmath.log(val.abs_lower(), 2))))
                val = eval_complex(u, j, precision_bits + 8 + extra)
            out.append(val.log_abs() * 2)
    return out
