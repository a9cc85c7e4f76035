"""Midpoint-radius enclosures over mpmath numbers.

A ``Ball`` holds a (real or complex) mpmath midpoint and a nonnegative radius
such that the true value lies within ``radius`` of ``mid``. Each ball records
the precision it was created at; binary operations run at the larger of the
two operand precisions (and never below the ambient mpmath precision) and
inflate the radius by a rounding allowance.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp


def _ulp(x) -> mpmath.mpf:
    return abs(x) * mpmath.ldexp(1, -mp.prec + 2)


def _prec(*balls) -> int:
    return max([mp.prec] + [b.prec for b in balls])


def mpf_from_fraction(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


class Ball:
    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=0, prec=None):
        self.prec = prec or mp.prec
        with mp.workprec(self.prec):
            self.mid = mid if isinstance(mid, (mpmath.mpf, mpmath.mpc)) else mpmath.mpmathify(mid)
            self.rad = mpmath.mpf(rad)

    @classmethod
    def exact(cls, x, prec: int | None = None) -> "Ball":
        if isinstance(x, Fraction):
            return cls.from_interval(x, x, prec)
        with mp.workprec(max(mp.prec, prec or 0)):
            m = mpmath.mpmathify(x)
            if isinstance(x, int) and mpmath.mpf(x) != x:
                return cls(m, _ulp(m))
            return cls(m, 0)

    @classmethod
    def from_interval(cls, lo: Fraction, hi: Fraction, prec: int | None = None) -> "Ball":
        with mp.workprec(max(mp.prec, prec or 0)):
            mid = mpf_from_fraction((lo + hi) / 2)
            half = mpf_from_fraction((hi - lo) / 2)
            return cls(mid, half + _ulp(mid) + _ulp(half))

    def __repr__(self):
        return f"Ball({mpmath.nstr(self.mid, 20)} +/- {mpmath.nstr(self.rad, 3)})"

    def _lift(self, other) -> "Ball":
        if isinstance(other, Ball):
            return other
        return Ball.exact(other, self.prec)

    def __add__(self, other):
        o = self._lift(other)
        with mp.workprec(_prec(self, o)):
            m = self.mid + o.mid
            return Ball(m, self.rad + o.rad + _ulp(m))

    __radd__ = __add__

    def __neg__(self):
        with mp.workprec(self.prec):
            return Ball(-self.mid, self.rad, self.prec)

    def __sub__(self, other):
        o = self._lift(other)
        with mp.workprec(_prec(self, o)):
            m = self.mid - o.mid
            return Ball(m, self.rad + o.rad + _ulp(m))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        with mp.workprec(_prec(self, o)):
            m = self.mid * o.mid
            r = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
            return Ball(m, r + _ulp(m) + _ulp(r))

    __rmul__ = __mul__

    def inverse(self) -> "Ball":
        with mp.workprec(_prec(self)):
            lower = abs(self.mid) - self.rad
            if lower <= 0:
                raise ZeroDivisionError("ball contains zero")
            m = 1 / self.mid
            r = self.rad / (abs(self.mid) * lower)
            return Ball(m, r + _ulp(m) + _ulp(r))

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return (self ** (-e)).inverse()
        result = Ball.exact(1, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def abs_upper(self) -> mpmath.mpf:
        with mp.workprec(self.prec):
            a = abs(self.mid)
            return a + self.rad + _ulp(a)

    def abs_lower(self) -> mpmath.mpf:
        with mp.workprec(self.prec):
            a = abs(self.mid)
            return max(mpmath.mpf(0), a - self.rad - _ulp(a))

    def contains_zero(self) -> bool:
        return self.abs_lower() == 0

    def contains(self, x) -> bool:
        with mp.workprec(self.prec):
            x = mpf_from_fraction(x) if isinstance(x, Fraction) else mpmath.mpmathify(x)
            d = abs(self.mid - x)
            return d - _ulp(d) <= self.rad

    def overlaps(self, other: "Ball") -> bool:
        with mp.workprec(_prec(self, other)):
            d = abs(self.mid - other.mid)
            return d - _ulp(d) <= self.rad + other.rad

    def real(self) -> "Ball":
        with mp.workprec(self.prec):
            return Ball(mpmath.re(self.mid), self.rad, self.prec)

    def imag(self) -> "Ball":
        with mp.workprec(self.prec):
            return Ball(mpmath.im(self.mid), self.rad, self.prec)

    def conj(self) -> "Ball":
        with mp.workprec(self.prec):
            return Ball(mpmath.conj(self.mid), self.rad, self.prec)

    def log_abs(self) -> "Ball":
        """Enclosure of log|x| (requires the ball to exclude zero)."""
        with mp.workprec(_prec(self)):
            a = abs(self.mid)
            lower = a - self.rad
            if lower <= 0:
                raise ZeroDivisionError("log of a ball containing zero")
            m = mpmath.log(a)
            r = self.rad / lower
            return Ball(m, r + _ulp(m) + _ulp(r) + mpmath.ldexp(1, -mp.prec + 2))

    def to_float(self) -> complex | float:
        m = self.mid
        if isinstance(m, mpmath.mpc):
            return complex(m)
        return float(m)


def ball_poly_eval(coeffs, x: Ball) -> Ball:
    """Horner evaluation of a polynomial with exact rational coefficients at a ball."""
    acc = Ball.exact(0, x.prec)
    for c in reversed(coeffs):
        acc = acc * x + Ball.exact(c, x.prec)
    return acc


def ball_det(rows: list[list[Ball]]) -> Ball:
    """Determinant by Gaussian elimination with largest-midpoint pivoting."""
    a = [list(r) for r in rows]
    n = len(a)
    det = Ball.exact(1, max(b.prec for r in rows for b in r))
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(a[i][col].mid))
        if a[piv][col].contains_zero():
            # Fall back to cofactor expansion, which never divides.
            return _cofactor_det([r[col:] for r in a[col:]]) * det
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for i in range(col + 1, n):
            f = a[i][col] / p
            for j in range(col + 1, n):
                a[i][j] = a[i][j] - f * a[col][j]
    return det


def _cofactor_det(a: list[list[Ball]]) -> Ball:
    n = len(a)
    if n == 1:
        return a[0][0]
    total = Ball.exact(0, a[0][0].prec)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        term = a[0][j] * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
