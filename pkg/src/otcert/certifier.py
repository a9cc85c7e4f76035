"""Primitivity certification for OT data and witnesses when it fails.

The no-subvariety criterion asks that every u in U minus {1} generate K.
That quantifies over an infinite group, so the verdict comes in three
strengths:

* ``CertifiedNoSubvarieties``: exact, from prime degree (the only proper
  subfield is Q, and U meets Q only in 1);
* ``HypothesisRefuted``: an exactly verified u != 1 in U with deg minpoly < n;
* ``HeuristicallyCertified``: no witness in any subfield found by a bounded
  search, with the bounds recorded.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from mpmath import mp

from .balls import Ball
from .config import DEFAULT_CONFIG, Config
from .embeddings import all_embedding_values, coordinate_values, embedding_labels, signature, _complex_roots
from .errors import NoFixedPoint, PreconditionError
from .lattice import integer_relation_candidates
from .numfield import FieldElement, NumberField, RationalSpan, minimal_polynomial, subalgebra_degree
from .poly import RationalPoly
from .units import OTDatum

log = logging.getLogger(__name__)


class Status(enum.Enum):
    CERTIFIED = "CertifiedNoSubvarieties"
    REFUTED = "HypothesisRefuted"
    HEURISTIC = "HeuristicallyCertified"

    @property
    def exit_code(self) -> int:
        return {Status.CERTIFIED: 0, Status.REFUTED: 1, Status.HEURISTIC: 2}[self]


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


# subfields ---------------------------------------------------------------------


@dataclass
class Subfield:
    """Q(generator) as a subfield of K, with an exact membership test."""

    generator: FieldElement
    minpoly: RationalPoly
    partition: tuple[tuple[int, ...], ...]
    source: str = "search"
    _span: RationalSpan | None = field(default=None, repr=False)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def span(self) -> RationalSpan:
        if self._span is None:
            sp = RationalSpan(self.generator.field.degree)
            power = self.generator.field.one
            for _ in range(self.degree):
                sp.add(power.coords)
                power = power * self.generator
            self._span = sp
        return self._span

    def contains(self, x: FieldElement) -> bool:
        return x.coords in self.span

    def as_dict(self) -> dict:
        return {
            "generator": [str(c) for c in self.generator.coords],
            "minpoly": [str(c) for c in self.minpoly.coeffs],
            "degree": self.degree,
            "partition": [list(b) for b in self.partition],
            "source": self.source,
        }


def _numeric_roots(field_: NumberField) -> np.ndarray:
    """All n roots as complex128 in embedding order: reals, tau_j, conj(tau_j)."""
    roots = _complex_roots(field_, 64)
    s, t = signature(field_)
    reals = [complex(r.value) for r in roots if r.is_real]
    ups = [complex(r.value) for r in roots if not r.is_real][:t]
    return np.array(reals + ups + [z.conjugate() for z in ups])


def coincidence_partition(u: FieldElement, precision_bits: int = 128, max_precision: int = 2048) -> tuple[tuple[int, ...], ...]:
    """Group the n embeddings by equal value of u, certified exactly.

    Enclosures are clustered by overlap; the clustering is accepted once the
    number of clusters equals deg minpoly(u), since the n values are exactly
    the roots of minpoly(u), each hit n/m times, and disjoint clusters hold
    distinct values.
    """
    n = u.field.degree
    m = minimal_polynomial(u).degree
    prec = precision_bits
    while prec <= max_precision:
        vals = all_embedding_values(u, prec)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in itertools.combinations(range(n), 2):
            if vals[i].overlaps(vals[j]):
                parent[find(i)] = find(j)
        blocks: dict[int, list[int]] = {}
        for i in range(n):
            blocks.setdefault(find(i), []).append(i)
        groups = sorted(tuple(b) for b in blocks.values())
        if len(groups) == m and all(len(b) == n // m for b in groups):
            return tuple(groups)
        if len(groups) > m:
            raise AssertionError("more distinct embedding values than the minimal polynomial degree")
        prec *= 2
    raise PreconditionError(f"could not separate the embedding values of {u} within {max_precision} bits")


def _candidate_vectors(n: int, height: int):
    rng = range(-height, height + 1)
    for v in itertools.product(rng, repeat=n):
        if not any(v[1:]):
            continue
        first = next(c for c in v if c)
        if first < 0:
            continue
        yield v


def _pair_masks(values: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    n = values.shape[1]
    masks = np.zeros(values.shape[0], dtype=np.int64)
    scale = 1 + np.abs(values).max(axis=1)
    bit = 0
    for i, j in itertools.combinations(range(n), 2):
        close = np.abs(values[:, i] - values[:, j]) < tol * scale
        masks |= close.astype(np.int64) << bit
        bit += 1
    return masks


def make_subfield(beta: FieldElement, source: str = "search") -> Subfield:
    return Subfield(beta, minimal_polynomial(beta), coincidence_partition(beta), source)


def _add_subfield(found: list[Subfield], sub: Subfield) -> bool:
    n = sub.generator.field.degree
    if not 1 < sub.degree < n:
        return False
    for other in found:
        if other.degree == sub.degree and other.contains(sub.generator):
            return False
    found.append(sub)
    return True


def subfield_candidates(
    field_: NumberField,
    height_bound: int = 3,
    hints: Sequence[FieldElement] = (),
    max_scan: int = 2_000_000,
    batch: int = 100_000,
) -> list[Subfield]:
    """Proper subfields Q < F < K found by a bounded-height search (possibly incomplete).

    Scans elements of Z[theta] with coordinates in [-h, h], plus theta^k and
    any user hints, keeps those whose embeddings collide (non-primitive),
    dedupes by the induced partition of embeddings and exact containment,
    then closes the list under composita.
    """
    n = field_.degree
    found: list[Subfield] = []
    for h in hints:
        _add_subfield(found, make_subfield(field_.element(h), "hint"))
    if is_prime(n):
        return found
    h = height_bound
    while h > 0 and (2 * h + 1) ** n > max_scan:
        h -= 1
    if h < height_bound:
        log.warning("height bound %d exceeds the scan cap; searching height %d", height_bound, h)
    roots = _numeric_roots(field_)
    vand = np.vander(roots, n, increasing=True)  # row i: 1, r_i, ..., r_i^(n-1)
    reps: dict[int, tuple] = {}
    extra = [tuple((field_.theta**k).coords) for k in range(2, 2 * n)]
    extra_int = [tuple(int(c) for c in v) for v in extra if all(c.denominator == 1 for c in v)]
    gen = itertools.chain(_candidate_vectors(n, h) if h > 0 else iter(()), extra_int)
    while True:
        chunk = list(itertools.islice(gen, batch))
        if not chunk:
            break
        coords = np.array(chunk, dtype=float)
        values = coords @ vand.T
        masks = _pair_masks(values)
        for idx in np.nonzero(masks)[0]:
            key = int(masks[idx])
            if key not in reps:
                reps[key] = chunk[idx]
    for key, vec in sorted(reps.items(), key=lambda kv: (sum(map(abs, kv[1])), kv[1])):
        beta = field_.element(list(vec))
        m = minimal_polynomial(beta).degree
        if 1 < m < n:
            _add_subfield(found, make_subfield(beta))
    # composita of pairs
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(found), 2):
            d = subalgebra_degree([a.generator, b.generator])
            if d >= n:
                continue
            for c in range(1, 2 * n):
                gamma = a.generator + b.generator * c
                if minimal_polynomial(gamma).degree == d:
                    if _add_subfield(found, make_subfield(gamma, "compositum")):
                        changed = True
                    break
    found.sort(key=lambda sf: (sf.degree, sf.generator.coords))
    return found


# intersections -------------------------------------------------------------------


@dataclass
class IntersectionResult:
    subfield: Subfield
    witness: bool
    exponents: list[int] | None
    element: FieldElement | None
    bound: int
    lattice_candidates: int
    scanned: int
    method: str
    warnings: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "Witness" if self.witness else "TrivialUpToBound"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "subfield_degree": self.subfield.degree,
            "subfield_generator": [str(c) for c in self.subfield.generator.coords],
            "exponents": self.exponents,
            "element": None if self.element is None else [str(c) for c in self.element.coords],
            "element_minpoly": None
            if self.element is None
            else [str(c) for c in minimal_polynomial(self.element).coeffs],
            "exponent_bound": self.bound,
            "lattice_candidates": self.lattice_candidates,
            "scanned": self.scanned,
            "method": self.method,
            "warnings": self.warnings,
        }


def _constraint_matrix(datum: OTDatum, partition, precision_bits):
    """Rows: log|emb_i(u_k)| - log|emb_j(u_k)| for i, j in the same block."""
    with mp.workprec(precision_bits + 64):
        logs = []
        for u in datum.generators:
            vals = all_embedding_values(u, precision_bits)
            logs.append([v.log_abs() for v in vals])
        rows = []
        for block in partition:
            for i, j in zip(block, block[1:]):
                rows.append([logs[k][i] - logs[k][j] for k in range(len(datum.generators))])
    return rows


class _PowerCache:
    def __init__(self, gens):
        self.gens = gens
        self.cache = {}

    def power(self, k, e):
        key = (k, e)
        if key not in self.cache:
            self.cache[key] = self.gens[k] ** e
        return self.cache[key]

    def product(self, exps):
        out = self.gens[0].field.one
        for k, e in enumerate(exps):
            if e:
                out = out * self.power(k, e)
        return out


def unit_subfield_intersection(
    datum: OTDatum,
    subfield: Subfield,
    exponent_bound: int = 10,
    precision_bits: int = 192,
    max_scan: int = 2_000_000,
) -> IntersectionResult:
    """Search for a nontrivial prod u_k^a_k lying in ``subfield``.

    Lattice reduction proposes exponent vectors on which the log-absolute
    embedding values agree across every block of the subfield; an
    exhaustive scan over max|a_k| <= exponent_bound (with a certified
    numerical prefilter) follows. Every witness is verified exactly.
    """
    if subfield.degree >= datum.degree:
        raise PreconditionError("subfield must be proper")
    gens = datum.generators
    s = len(gens)
    powers = _PowerCache(gens)
    warnings: list[str] = []
    rows = _constraint_matrix(datum, subfield.partition, precision_bits)
    witnesses: list[list[int]] = []
    lattice_hits: list[list[int]] = []

    def verify(a) -> bool:
        if not any(a):
            return False
        x = powers.product(a)
        return x != 1 and subfield.contains(x)

    # lattice layer
    n_lattice = 0
    if rows:
        err = max(float(b.rad) for r in rows for b in r)
        scale_bits = precision_bits // 2
        if err * 2**scale_bits > 1:
            warnings.append("precision too low for the lattice step; relying on the exhaustive scan")
        else:
            cols = [[rows[r][k].mid for r in range(len(rows))] for k in range(s)]
            cands = integer_relation_candidates(cols, scale_bits, error=err, max_coeff=10**3)
            n_lattice = len(cands)
            for a in cands:
                for mult in range(1, 7):
                    v = [mult * c for c in a]
                    if verify(v):
                        witnesses.append(v)
                        lattice_hits.append(v)
                        break
    else:
        # every embedding is its own block: the subfield is K itself
        raise PreconditionError("subfield partition has no nontrivial block")
    # exhaustive layer
    bound = exponent_bound
    while bound > 0 and (2 * bound + 1) ** s > max_scan:
        bound -= 1
    if bound < exponent_bound:
        warnings.append(f"exhaustive scan capped at exponent bound {bound}")
    scanned = 0
    if rows and bound > 0:
        mids = np.array([[float(b.mid) for b in r] for r in rows])
        rads = np.array([[float(b.rad) for b in r] for r in rows])
        grid = np.array(
            [v for v in itertools.product(range(-bound, bound + 1), repeat=s) if any(v) and next(c for c in v if c) > 0],
            dtype=float,
        ).reshape(-1, s)
        scanned = len(grid)
        if scanned:
            vals = grid @ mids.T
            slack = np.abs(grid) @ (rads.T + 1e-12 * np.abs(mids.T))
            passing = np.all(np.abs(vals) <= slack + 1e-9, axis=1)
            for row in grid[passing]:
                a = [int(x) for x in row]
                if verify(a):
                    witnesses.append(a)
    if witnesses:
        best = min(witnesses, key=lambda v: (max(abs(c) for c in v), [abs(c) for c in v], v))
        if next(c for c in best if c) < 0:
            best = [-c for c in best]
        method = "lattice" if best in lattice_hits or [-c for c in best] in lattice_hits else "scan"
        return IntersectionResult(
            subfield, True, best, powers.product(best), bound, n_lattice, scanned, method, warnings
        )
    return IntersectionResult(subfield, False, None, None, bound, n_lattice, scanned, "lattice+scan", warnings)


# certificates -------------------------------------------------------------------


@dataclass
class PrimitivityRow:
    index: int
    element: FieldElement
    minpoly: RationalPoly
    primitive: bool

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "element": [str(c) for c in self.element.coords],
            "minpoly": [str(c) for c in self.minpoly.coeffs],
            "minpoly_degree": self.minpoly.degree,
            "primitive": self.primitive,
        }


@dataclass
class Witness:
    exponents: list[int]
    element: FieldElement
    minpoly: RationalPoly
    source: str
    subfield: Subfield | None = None

    def as_dict(self) -> dict:
        return {
            "exponents": self.exponents,
            "element": [str(c) for c in self.element.coords],
            "minpoly": [str(c) for c in self.minpoly.coeffs],
            "minpoly_degree": self.minpoly.degree,
            "source": self.source,
            "subfield": None if self.subfield is None else self.subfield.as_dict(),
        }


@dataclass
class Certificate:
    status: Status
    evidence: dict
    diagnostics: dict
    witness: Witness | None = None

    @property
    def exit_code(self) -> int:
        return self.status.exit_code

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "evidence": self.evidence,
            "diagnostics": self.diagnostics,
            "witness": None if self.witness is None else self.witness.as_dict(),
        }


def _t_one_note(datum: OTDatum) -> str | None:
    if datum.t == 1:
        return (
            "t = 1: X(K, U) has no proper complex subvarieties by an independent argument, "
            "so a failed primitivity hypothesis does not by itself produce subvarieties"
        )
    return None


def prime_degree_shortcut(datum: OTDatum) -> Certificate | None:
    n = datum.degree
    if not is_prime(n):
        return None
    return Certificate(
        Status.CERTIFIED,
        {
            "shortcut": "prime degree",
            "degree": n,
            "argument": "the only proper subfield of a prime-degree field is Q, and a torsion-free "
            "totally positive U meets Q only in 1, so every u != 1 is primitive",
        },
        {"order": datum.order},
    )


def generator_primitivity(datum: OTDatum) -> list[PrimitivityRow]:
    rows = []
    for k, u in enumerate(datum.generators):
        mp_ = minimal_polynomial(u)
        rows.append(PrimitivityRow(k, u, mp_, mp_.degree == datum.degree))
    return rows


def certify(datum: OTDatum, config: Config = DEFAULT_CONFIG, subfield_hints: Sequence = ()) -> Certificate:
    """Prime shortcut, then generator primitivity, then per-subfield search."""
    diagnostics: dict = {
        "order": datum.order,
        "precision_bits": config.precision_bits,
        "exponent_bound": config.exponent_bound,
        "height_bound": config.height_bound,
    }
    note = _t_one_note(datum)
    if note:
        diagnostics["note"] = note
    prim = generator_primitivity(datum)
    diagnostics["generator_primitivity"] = [r.as_dict() for r in prim]
    cert = prime_degree_shortcut(datum)
    if cert is not None:
        cert.diagnostics.update(diagnostics)
        if not all(r.primitive for r in prim):
            raise AssertionError("prime-degree field with a non-primitive unit generator")
        return cert
    for r in prim:
        if not r.primitive:
            exps = [1 if k == r.index else 0 for k in range(len(datum.generators))]
            w = Witness(exps, r.element, r.minpoly, "generator")
            return Certificate(
                Status.REFUTED,
                {"reason": f"generator {r.index} is not primitive (minpoly degree {r.minpoly.degree} < {datum.degree})"},
                diagnostics,
                w,
            )
    subfields = subfield_candidates(
        datum.field, config.height_bound, [datum.field.element(h) for h in subfield_hints], config.max_scan
    )
    diagnostics["subfields"] = [sf.as_dict() for sf in subfields]
    diagnostics["subfield_search_complete"] = False
    results = []
    for sf in subfields:
        res = unit_subfield_intersection(datum, sf, config.exponent_bound, config.precision_bits, config.max_scan)
        results.append(res)
        if res.witness:
            diagnostics["intersections"] = [r.as_dict() for r in results]
            w = Witness(res.exponents, res.element, minimal_polynomial(res.element), res.method, sf)
            return Certificate(
                Status.REFUTED,
                {"reason": f"a product of generators lies in a subfield of degree {sf.degree}"},
                diagnostics,
                w,
            )
    diagnostics["intersections"] = [r.as_dict() for r in results]
    return Certificate(
        Status.HEURISTIC,
        {
            "reason": "no non-primitive element of U found",
            "subfields_examined": len(subfields),
            "exponent_bound": config.exponent_bound,
            "height_bound": config.height_bound,
        },
        diagnostics,
    )


# flat subspace witness -------------------------------------------------------------


@dataclass
class CandidateSubvariety:
    """Affine subspace through the fixed point P0 of (u, a), invariant under it.

    Its direction is spanned by the indicator vectors of coordinate blocks on
    which u takes equal values; coordinates outside those blocks are fixed at
    c_j = sigma_j(a) / (1 - sigma_j(u)).
    """

    witness_unit: FieldElement
    translation: FieldElement
    coincidence_partition: tuple[tuple[int, ...], ...]
    embedding_labels: list[str]
    coordinate_blocks: tuple[tuple[int, ...], ...]
    free_coordinates: tuple[int, ...]
    fixed_coordinates: dict[int, Ball]
    fixed_point: list[Ball]
    directions: list[tuple[int, ...]]
    identity_residuals: list[Ball]
    identity_holds: bool
    direction_invariant: bool

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def as_dict(self) -> dict:
        from .report import ball_to_dict

        return {
            "witness_unit": [str(c) for c in self.witness_unit.coords],
            "translation": [str(c) for c in self.translation.coords],
            "coincidence_partition": [[self.embedding_labels[i] for i in b] for b in self.coincidence_partition],
            "coordinate_blocks": [list(b) for b in self.coordinate_blocks],
            "free_coordinates": list(self.free_coordinates),
            "fixed_coordinates": {str(j): ball_to_dict(b) for j, b in self.fixed_coordinates.items()},
            "fixed_point": [ball_to_dict(b) for b in self.fixed_point],
            "directions": [list(d) for d in self.directions],
            "dimension": self.dimension,
            "identity_holds": self.identity_holds,
            "direction_invariant": self.direction_invariant,
        }


def flat_subspace_witness(
    datum: OTDatum,
    u: FieldElement,
    a: FieldElement | None = None,
    precision_bits: int = 128,
) -> CandidateSubvariety:
    field_ = datum.field
    u = field_.element(u)
    a = field_.zero if a is None else field_.element(a)
    if u == 1:
        raise NoFixedPoint("u = 1 has every embedding equal to 1")
    if minimal_polynomial(u).degree == datum.degree:
        raise PreconditionError(f"{u} is primitive: all its embeddings are distinct")
    s, t = datum.s, datum.t
    partition = coincidence_partition(u, precision_bits)
    block_of = {i: b for b, block in enumerate(partition) for i in block}
    # coordinate slot -> embedding index among the n embeddings
    slot_emb = list(range(s)) + [s + j + (t if datum.conjugate[j] else 0) for j in range(t)]
    groups: dict[int, list[int]] = {}
    for slot, e in enumerate(slot_emb):
        groups.setdefault(block_of[e], []).append(slot)
    coord_blocks = tuple(sorted(tuple(g) for g in groups.values()))
    free = tuple(sorted(j for b in coord_blocks if len(b) > 1 for j in b))
    directions = [tuple(1 if j in b else 0 for j in range(s + t)) for b in coord_blocks if len(b) > 1]
    with mp.workprec(precision_bits + 64):
        uv = coordinate_values(u, precision_bits, datum.conjugate)
        av = coordinate_values(a, precision_bits, datum.conjugate)
        p0 = []
        for j in range(s + t):
            denom = 1 - uv[j]
            if denom.contains_zero():
                raise NoFixedPoint(f"sigma_{j}(u) is not separated from 1")
            p0.append(av[j] / denom)
        residuals = [p0[j] - (uv[j] * p0[j] + av[j]) for j in range(s + t)]
    identity_ok = all(r.contains_zero() for r in residuals)
    invariant = all(uv[i].overlaps(uv[j]) for b in coord_blocks for i, j in zip(b, b[1:]))
    fixed = {j: p0[j] for j in range(s + t) if j not in free}
    return CandidateSubvariety(
        witness_unit=u,
        translation=a,
        coincidence_partition=partition,
        embedding_labels=embedding_labels(field_),
        coordinate_blocks=coord_blocks,
        free_coordinates=free,
        fixed_coordinates=fixed,
        fixed_point=p0,
        directions=directions,
        identity_residuals=residuals,
        identity_holds=identity_ok,
        direction_invariant=invariant,
    )
