"""Arithmetic in K = Q[X]/(f) in the power basis 1, theta, ..., theta^(n-1)."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import PreconditionError, ReducibleField
from .poly import RationalPoly, irreducibility_status, poly_xgcd


class RationalSpan:
    """Incrementally built Q-subspace of Q^n with exact membership tests.

    Rows are kept in reduced echelon form together with the combination of
    inserted vectors that produced them, so a dependent vector can be
    expressed in terms of the originals.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[tuple[int, list[Fraction], list[Fraction]]] = []
        self._count = 0

    def __len__(self):
        return len(self._rows)

    def _reduce(self, v: Sequence[Fraction]):
        v = list(v)
        combo = [Fraction(0)] * self._count
        for pivot, row, rcombo in self._rows:
            c = v[pivot]
            if c:
                for k in range(self.dim):
                    if row[k]:
                        v[k] -= c * row[k]
                for k, x in enumerate(rcombo):
                    if x:
                        combo[k] -= c * x
        return v, combo

    def express(self, v: Sequence[Fraction]) -> list[Fraction] | None:
        """Coefficients of v over the inserted vectors, or None if v is outside the span."""
        red, combo = self._reduce(v)
        if any(red):
            return None
        return [-c for c in combo]

    def __contains__(self, v) -> bool:
        red, _ = self._reduce(v)
        return not any(red)

    def add(self, v: Sequence[Fraction]) -> list[Fraction] | None:
        """Insert v. Returns None if v was independent, else its expression."""
        red, combo = self._reduce(v)
        if not any(red):
            return [-c for c in combo]
        pivot = next(k for k, x in enumerate(red) if x)
        inv = 1 / red[pivot]
        row = [x * inv for x in red]
        combo = [c * inv for c in combo] + [inv]
        # Keep previous rows reduced against the new pivot.
        new_rows = []
        for p, r, rc in self._rows:
            c = r[pivot]
            if c:
                r = [a - c * b for a, b in zip(r, row)]
                rc = rc + [Fraction(0)]
                rc = [a - c * b for a, b in zip(rc, combo)]
            else:
                rc = rc + [Fraction(0)]
            new_rows.append((p, r, rc))
        self._count += 1
        new_rows.append((pivot, row, combo))
        self._rows = new_rows
        return None


def rational_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for i in range(col + 1, n):
            f = a[i][col] / p
            if f:
                for j in range(col, n):
                    a[i][j] -= f * a[col][j]
    return det


class NumberField:
    """K = Q[X]/(f) for a monic integer polynomial f of degree at least 2."""

    def __init__(self, poly: RationalPoly | Sequence[int], check_irreducible: bool = True):
        if not isinstance(poly, RationalPoly):
            poly = RationalPoly(poly)
        if poly.degree < 2:
            raise PreconditionError("defining polynomial must have degree >= 2")
        if not poly.is_monic() or not poly.has_integer_coeffs():
            raise PreconditionError(f"defining polynomial {poly} must be monic with integer coefficients")
        self.poly = poly
        self.degree = poly.degree
        self.irreducibility = irreducibility_status(poly) if check_irreducible else None
        if self.irreducibility is not None and self.irreducibility.is_reducible:
            raise ReducibleField(self.irreducibility.factor)
        n = self.degree
        # theta^k reduced mod f, for k < 2n - 1
        table = []
        cur = [Fraction(0)] * n
        cur[0] = Fraction(1)
        tail = [-c for c in poly.coeffs[:-1]]
        for _ in range(2 * n - 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                cur = [a + top * b for a, b in zip(cur, tail)]
        self._powers = tuple(table)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(("NumberField", self.poly))

    def __repr__(self):
        return f"NumberField({self.poly})"

    def __call__(self, x) -> "FieldElement":
        return self.element(x)

    def element(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field != self:
                raise PreconditionError("element belongs to a different field")
            return x
        if isinstance(x, RationalPoly):
            return FieldElement.from_poly(self, x)
        if isinstance(x, (int, Fraction)):
            return FieldElement(self, [x] + [0] * (self.degree - 1))
        coords = list(x)
        if len(coords) > self.degree:
            return FieldElement.from_poly(self, RationalPoly(coords))
        return FieldElement(self, coords + [0] * (self.degree - len(coords)))

    @property
    def theta(self) -> "FieldElement":
        return self.element([0, 1])

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    def power_basis(self) -> list["FieldElement"]:
        return [self.element([0] * k + [1]) for k in range(self.degree)]

    def _reduce(self, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
        n = self.degree
        out = list(coeffs[:n]) + [Fraction(0)] * max(0, n - len(coeffs))
        for k in range(n, len(coeffs)):
            c = coeffs[k]
            if c:
                row = self._powers[k] if k < len(self._powers) else None
                if row is None:
                    raise AssertionError("product degree exceeds reduction table")
                for i in range(n):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(out)


class FieldElement:
    """Immutable element of a NumberField, stored by power-basis coordinates."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field: NumberField, coords: Iterable):
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != field.degree:
            raise PreconditionError(f"expected {field.degree} coordinates, got {len(cs)}")
        self.field = field
        self.coords = cs
        self._hash = None

    @classmethod
    def from_poly(cls, field: NumberField, p: RationalPoly) -> "FieldElement":
        r = p % field.poly
        cs = list(r.coeffs) + [Fraction(0)] * (field.degree - len(r.coeffs))
        return cls(field, cs)

    def poly(self) -> RationalPoly:
        return RationalPoly(self.coords)

    def __repr__(self):
        return f"FieldElement({self}; mod {self.field.poly})"

    def __str__(self):
        return str(self.poly()).replace("X", "t")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords == self.field.element(other).coords
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.poly, self.coords))
        return self._hash

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise PreconditionError("field mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b = self.coords, o.coords
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a / Fraction(other) for a in self.coords])
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = poly_xgcd(self.poly(), self.field.poly)
        if g.degree > 0:
            raise ReducibleField(g)
        return FieldElement.from_poly(self.field, s)

    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of x -> self*x in the power basis (column j = self*theta^j)."""
        n = self.field.degree
        cols = [(self * self.field.element([0] * j + [1])).coords for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self) -> Fraction:
        return rational_det(self.mult_matrix())

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def minimal_polynomial(self) -> RationalPoly:
        return minimal_polynomial(self)

    def is_primitive(self) -> bool:
        return is_primitive(self)

    def is_algebraic_integer(self) -> bool:
        return is_algebraic_integer(self)

    def in_order(self) -> bool:
        """Membership in Z[theta] (integer power-basis coordinates)."""
        return all(c.denominator == 1 for c in self.coords)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise PreconditionError("field mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def inverse(a: FieldElement) -> FieldElement:
    return a.inverse()


def norm(a: FieldElement) -> Fraction:
    return a.norm()


def trace(a: FieldElement) -> Fraction:
    return a.trace()


@lru_cache(maxsize=4096)
def minimal_polynomial(a: FieldElement) -> RationalPoly:
    """Least-degree monic rational polynomial annihilating a.

    Found as the first linear dependency among 1, a, a^2, ...
    """
    span = RationalSpan(a.field.degree)
    power = a.field.one
    k = 0
    while True:
        rel = span.add(power.coords)
        if rel is not None:
            return RationalPoly([-c for c in rel] + [1])
        power = power * a
        k += 1


def is_primitive(a: FieldElement) -> bool:
    return minimal_polynomial(a).degree == a.field.degree


def is_algebraic_integer(a: FieldElement) -> bool:
    return minimal_polynomial(a).has_integer_coeffs()


def subalgebra_basis(elements: Sequence[FieldElement]) -> list[FieldElement]:
    """A Q-basis of Q[elements], the smallest subalgebra containing them."""
    if not elements:
        raise PreconditionError("need at least one element")
    field = elements[0].field
    span = RationalSpan(field.degree)
    span.add(field.one.coords)
    basis = [field.one]
    frontier = [field.one]
    while frontier:
        nxt = []
        for b in frontier:
            for g in elements:
                x = b * g
                if span.add(x.coords) is None:
                    basis.append(x)
                    nxt.append(x)
        frontier = nxt
    return basis


def subalgebra_degree(elements: Sequence[FieldElement]) -> int:
    return len(subalgebra_basis(elements))
