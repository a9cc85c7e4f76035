"""Exact univariate polynomials over Q, real root isolation and complex roots.

Coefficients are stored constant term first, so ``RationalPoly([-2, 0, 0, 1])``
is X^3 - 2.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mp

from .errors import NonConvergence, PreconditionError

Rational = Fraction | int


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact coefficients")
    return Fraction(x)


class RationalPoly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Rational] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: Rational) -> "RationalPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lc == 1

    def has_integer_coeffs(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.has_integer_coeffs():
            raise PreconditionError(f"{self} has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPoly([other])
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mon = "X" if k == 1 else f"X^{k}"
                body = mon if a == 1 else f"{a}*{mon}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return RationalPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = RationalPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        if len(rem) - 1 < dq:
            return RationalPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return RationalPoly(quot), RationalPoly(rem[:dq])

    def __divmod__(self, other):
        return self.divmod(other)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "RationalPoly":
        if self.is_zero():
            return self
        lc = self.lc
        return RationalPoly([c / lc for c in self.coeffs])

    def derivative(self) -> "RationalPoly":
        return RationalPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; works for any ring supporting + and *."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "RationalPoly") -> "RationalPoly":
        acc = RationalPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def shift(self, c: Rational) -> "RationalPoly":
        """Return p(X + c)."""
        return self.compose(RationalPoly([c, 1]))

    def gcd(self, other: "RationalPoly") -> "RationalPoly":
        return poly_gcd(self, other)

    def squarefree_part(self) -> "RationalPoly":
        g = poly_gcd(self, self.derivative())
        return (self // g).monic() if g.degree > 0 else self.monic()

    def is_squarefree(self) -> bool:
        return poly_gcd(self, self.derivative()).degree <= 0

    def cauchy_bound(self) -> Fraction:
        """1 + max|a_i|/|a_n|; every complex root is strictly inside this radius."""
        if self.degree < 1:
            return Fraction(1)
        lc = abs(self.lc)
        return 1 + max(abs(c) for c in self.coeffs[:-1]) / lc


def poly_gcd(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    """Monic gcd (zero only if both inputs are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(p: RationalPoly, q: RationalPoly):
    """Return (g, s, t) with s*p + t*q = g and g monic."""
    r0, r1 = p, q
    s0, s1 = RationalPoly([1]), RationalPoly()
    t0, t1 = RationalPoly(), RationalPoly([1])
    while not r1.is_zero():
        quo, rem = r0.divmod(r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lc
    return r0.monic(), s0 * (1 / lc), t0 * (1 / lc)


def arith(p: RationalPoly, q: RationalPoly, op: str):
    """Dispatch the basic operations by name: add, sub, mul, divmod, gcd."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "divmod":
        return p.divmod(q)
    if op == "gcd":
        return poly_gcd(p, q)
    raise ValueError(f"unknown operation {op!r}")


# Sturm sequences and real root isolation ----------------------------------


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_chain(f: RationalPoly) -> list[RationalPoly]:
    if f.is_zero():
        raise PreconditionError("Sturm chain of the zero polynomial")
    f = f.squarefree_part()
    chain = [f, f.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return [p for p in chain if not p.is_zero()]


def sign_variations(chain: Sequence[RationalPoly], x) -> int:
    signs = [s for s in (_sign(p(x)) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(f: RationalPoly, a: Rational, b: Rational, chain=None) -> int:
    """Number of distinct real roots of f in (a, b]."""
    chain = chain or sturm_chain(f)
    return sign_variations(chain, _frac(a)) - sign_variations(chain, _frac(b))


@dataclass(frozen=True)
class IsolatingInterval:
    """Open interval (lo, hi) containing exactly one real root of ``poly``."""

    poly: RationalPoly
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise PreconditionError("isolating interval needs lo < hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo < x < self.hi

    def refine(self) -> "IsolatingInterval":
        """Halve the interval, keeping the half that holds the root."""
        f = self.poly
        mid = self.midpoint
        fm = f(mid)
        if fm == 0:
            q = self.width / 4
            return IsolatingInterval(f, mid - q, mid + q)
        if _sign(f(self.lo)) * _sign(fm) < 0:
            return IsolatingInterval(f, self.lo, mid)
        return IsolatingInterval(f, mid, self.hi)

    def refine_to(self, width: Fraction) -> "IsolatingInterval":
        iv = self
        slo = _sign(self.poly(self.lo))
        f = self.poly
        lo, hi = iv.lo, iv.hi
        while hi - lo > width:
            mid = (lo + hi) / 2
            fm = _sign(f(mid))
            if fm == 0:
                q = (hi - lo) / 4
                return IsolatingInterval(f, mid - min(q, width / 4), mid + min(q, width / 4))
            if fm == slo:
                lo = mid
            else:
                hi = mid
        return IsolatingInterval(f, lo, hi)


def isolate_real_roots(f: RationalPoly) -> list[IsolatingInterval]:
    """Disjoint isolating intervals for the real roots of f, increasing order."""
    if f.degree < 1:
        return []
    g = f.squarefree_part()
    if g.degree != f.monic().degree:
        raise PreconditionError(f"{f} is not squarefree")
    chain = sturm_chain(g)
    bound = g.cauchy_bound()
    out: list[IsolatingInterval] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        count = sturm_count(g, lo, hi, chain)
        if count == 0:
            continue
        if count == 1 and g(hi) != 0:
            out.append(IsolatingInterval(g, lo, hi))
            continue
        mid = (lo + hi) / 2
        step = 3
        while g(mid) == 0:
            mid = lo + (hi - lo) * Fraction(step - 1, 2 * step - 1)
            step += 1
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort(key=lambda iv: iv.lo)
    return out


# complex roots -------------------------------------------------------------


@dataclass(frozen=True)
class ComplexRoot:
    """Root approximation with a certified inclusion radius."""

    value: mpmath.mpc
    radius: mpmath.mpf
    is_real: bool

    def __iter__(self):
        return iter((self.value, self.radius))


def _horner_c(coeffs, z):
    p = mpmath.mpc(0)
    dp = mpmath.mpc(0)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def complex_roots(
    f: RationalPoly,
    precision_bits: int = 128,
    max_iter: int = 500,
    max_precision: int = 8192,
) -> list[ComplexRoot]:
    """All complex roots of a squarefree f with certified inclusion radii.

    Aberth-Ehrlich simultaneous iteration; radii come from the Weierstrass
    inclusion theorem (n*|W_i| disks, pairwise disjoint, one root each).
    Ordering: real roots by decreasing value, then roots with positive
    imaginary part by increasing argument, then their conjugates in the
    same order.
    """
    if precision_bits < 64:
        raise PreconditionError("precision_bits must be at least 64")
    n = f.degree
    if n < 1:
        raise PreconditionError("constant polynomial has no roots")
    if not f.is_squarefree():
        raise PreconditionError(f"{f} is not squarefree")
    n_real = len(isolate_real_roots(f)) if n > 1 else 1
    target = mpmath.mpf(2) ** (-(precision_bits // 2))
    wp = precision_bits + 32
    z = None
    diagnostics = {}
    while wp <= max_precision:
        with mp.workprec(wp):
            lc = mpmath.mpf(f.lc.numerator) / f.lc.denominator
            coeffs = [mpmath.mpf(c.numerator) / c.denominator / lc for c in f.coeffs]
            abs_coeffs = [abs(c) for c in coeffs]
            if z is None:
                radius = max(
                    (abs(coeffs[k]) ** (mpmath.mpf(1) / (n - k)) for k in range(n) if coeffs[k] != 0),
                    default=mpmath.mpf(1),
                )
                z = [
                    radius * mpmath.expj(2 * mpmath.pi * k / n + mpmath.mpf("0.4")) for k in range(n)
                ]
            else:
                z = [mpmath.mpc(v) for v in z]
            tol = mpmath.mpf(2) ** (-wp + 8)
            converged = False
            for it in range(max_iter):
                biggest = mpmath.mpf(0)
                for i in range(n):
                    p, dp = _horner_c(coeffs, z[i])
                    if p == 0:
                        continue
                    ratio = p / dp if dp != 0 else mpmath.mpc(1e-3)
                    s = mpmath.fsum(1 / (z[i] - z[j]) for j in range(n) if j != i)
                    w = ratio / (1 - ratio * s)
                    z[i] -= w
                    scale = max(mpmath.mpf(1), abs(z[i]))
                    biggest = max(biggest, abs(w) / scale)
                if biggest <= tol:
                    converged = True
                    break
            diagnostics = {"iterations": it + 1, "working_precision": wp, "last_step": float(biggest)}
            if converged:
                radii = _weierstrass_radii(coeffs, abs_coeffs, z, wp)
                if radii is not None and all(r < target for r in radii):
                    return _order_roots(z, radii, n_real, f)
        wp *= 2
    raise NonConvergence(
        f"complex root iteration for {f} did not converge", diagnostics=diagnostics
    )


def _weierstrass_radii(coeffs, abs_coeffs, z, wp):
    n = len(z)
    u = mpmath.mpf(2) ** (-wp)
    radii = []
    for i in range(n):
        p, _ = _horner_c(coeffs, z[i])
        mag = abs(z[i])
        # Horner rounding error bound (generous constant)
        err = 4 * (n + 1) * u * mpmath.fsum(a * mag**k for k, a in enumerate(abs_coeffs))
        denom = mpmath.mpf(1)
        for j in range(n):
            if j != i:
                denom *= abs(z[i] - z[j])
        denom *= 1 - 4 * n * u
        if denom <= 0:
            return None
        radii.append(n * (abs(p) + err) / denom)
    for i, j in itertools.combinations(range(n), 2):
        if abs(z[i] - z[j]) <= radii[i] + radii[j]:
            return None
    return radii


def _order_roots(z, radii, n_real, f):
    n = len(z)
    near_axis = [i for i in range(n) if abs(z[i].imag) <= radii[i]]
    if len(near_axis) != n_real:
        raise NonConvergence(
            f"real root count mismatch for {f}: {len(near_axis)} disks meet the axis, "
            f"Sturm count {n_real}"
        )
    reals = sorted(near_axis, key=lambda i: -z[i].real)
    upper = sorted(
        (i for i in range(n) if i not in near_axis and z[i].imag > 0),
        key=lambda i: mpmath.arg(z[i]),
    )
    lower = [i for i in range(n) if i not in near_axis and z[i].imag < 0]
    if len(upper) != len(lower):
        raise NonConvergence(f"unmatched conjugate pairs for {f}")
    out = [
        ComplexRoot(mpmath.mpc(z[i].real, 0), radii[i] + abs(z[i].imag), True) for i in reals
    ]
    ups = []
    for i in upper:
        j = min(lower, key=lambda k: abs(z[k] - mpmath.conj(z[i])))
        lower.remove(j)
        mid = (z[i] + mpmath.conj(z[j])) / 2
        r = max(radii[i], radii[j]) + abs(z[i] - mpmath.conj(z[j])) / 2
        ups.append(ComplexRoot(mid, r, False))
    out.extend(ups)
    out.extend(ComplexRoot(mpmath.conj(c.value), c.radius, False) for c in ups)
    return out


# irreducibility -------------------------------------------------------------


class Irreducibility(enum.Enum):
    IRREDUCIBLE = "irreducible"
    REDUCIBLE = "reducible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class IrreducibilityStatus:
    status: Irreducibility
    factor: RationalPoly | None = None
    reason: str = ""

    @property
    def is_irreducible(self) -> bool:
        return self.status is Irreducibility.IRREDUCIBLE

    @property
    def is_reducible(self) -> bool:
        return self.status is Irreducibility.REDUCIBLE


def _small_primes(count: int, start: int = 2):
    found = 0
    p = start
    while found < count:
        if all(p % q for q in range(2, math.isqrt(p) + 1)):
            yield p
            found += 1
        p += 1


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod_divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _trim(a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * inv % p
        q[k] = c
        if c:
            for j, x in enumerate(b):
                a[k + j] = (a[k + j] - c * x) % p
    return _trim(q), _trim(a[:db])


def _mod_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _mod_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _mod_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _mod_powmod(base, e, mod, p):
    result = [1]
    base = _mod_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _mod_divmod(_mod_mul(result, base, p), mod, p)[1]
        base = _mod_divmod(_mod_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _mod_sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def degree_pattern_mod_p(coeffs: Sequence[int], p: int) -> list[int] | None:
    """Degrees of the irreducible factors of f mod p (distinct-degree factorization).

    Returns None when f mod p is not squarefree or drops degree.
    """
    g = _trim([c % p for c in coeffs])
    if len(g) != len(coeffs):
        return None
    dg = _trim([(k * c) % p for k, c in enumerate(g)][1:])
    if len(_mod_gcd(g, dg, p)) > 1:
        return None
    inv = pow(g[-1], -1, p)
    g = [x * inv % p for x in g]
    pattern: list[int] = []
    h = [0, 1]
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _mod_powmod(h, p, g, p)
        common = _mod_gcd(g, _mod_sub(h, [0, 1], p), p)
        if len(common) > 1:
            pattern.extend([d] * ((len(common) - 1) // d))
            g = _mod_divmod(g, common, p)[0]
            h = _mod_divmod(h, g, p)[1]
    if len(g) > 1:
        pattern.append(len(g) - 1)
    return sorted(pattern)


def _subset_sums(pattern: Sequence[int]) -> set[int]:
    sums = {0}
    for d in pattern:
        sums |= {s + d for s in sums}
    return sums


def _eisenstein(coeffs: Sequence[int]) -> int | None:
    a0 = abs(coeffs[0])
    if a0 == 0:
        return None
    g = 0
    for c in coeffs[:-1]:
        g = math.gcd(g, c)
    for p in _prime_factors(g):
        if coeffs[-1] % p and coeffs[0] % (p * p):
            return p
    return None


def _prime_factors(m: int, limit: int = 10**5) -> list[int]:
    m = abs(m)
    out = []
    q = 2
    while q * q <= m and q <= limit:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1 and m <= limit * limit:
        out.append(m)
    return out


def _integer_root(coeffs: Sequence[int]) -> int | None:
    a0 = coeffs[0]
    if a0 == 0:
        return 0
    if abs(a0) > 10**7:
        return None
    f = RationalPoly(coeffs)
    for d in range(1, math.isqrt(abs(a0)) + 1):
        if a0 % d == 0:
            for cand in (d, -d, a0 // d, -(a0 // d)):
                if f(cand) == 0:
                    return cand
    return None


def irreducibility_status(f: RationalPoly, n_primes: int = 10) -> IrreducibilityStatus:
    """Decide irreducibility over Q where cheap criteria suffice.

    Tries, in order: integer roots, Eisenstein (also at shifts X -> X+c for
    small c), and mod-p degree patterns over the first ``n_primes`` primes
    where f stays squarefree. Irreducible is returned only with proof.
    """
    if not (f.is_monic() and f.has_integer_coeffs()):
        raise PreconditionError("irreducibility_status expects a monic integer polynomial")
    n = f.degree
    if n < 1:
        raise PreconditionError("constant polynomial")
    if n == 1:
        return IrreducibilityStatus(Irreducibility.IRREDUCIBLE, reason="linear")
    coeffs = f.int_coeffs()
    r = _integer_root(coeffs)
    if r is not None:
        return IrreducibilityStatus(
            Irreducibility.REDUCIBLE, RationalPoly([-r, 1]), reason=f"integer root {r}"
        )
    g = poly_gcd(f, f.derivative())
    if g.degree > 0:
        return IrreducibilityStatus(Irreducibility.REDUCIBLE, g, reason="repeated factor")
    for c in (0, 1, -1, 2, -2):
        p = _eisenstein(f.shift(c).int_coeffs())
        if p is not None:
            why = f"Eisenstein at {p}" + (f" after X -> X{c:+d}" if c else "")
            return IrreducibilityStatus(Irreducibility.IRREDUCIBLE, reason=why)
    possible = set(range(1, n))
    used = []
    for p in _small_primes(60):
        if len(used) >= n_primes:
            break
        pattern = degree_pattern_mod_p(coeffs, p)
        if pattern is None:
            continue
        used.append((p, pattern))
        if pattern == [n]:
            return IrreducibilityStatus(Irreducibility.IRREDUCIBLE, reason=f"irreducible mod {p}")
        possible &= _subset_sums(pattern)
        if not possible:
            return IrreducibilityStatus(
                Irreducibility.IRREDUCIBLE,
                reason="degree patterns mod " + ", ".join(str(q) for q, _ in used) + " are incompatible",
            )
    return IrreducibilityStatus(
        Irreducibility.UNKNOWN, reason=f"possible factor degrees {sorted(possible)}"
    )
