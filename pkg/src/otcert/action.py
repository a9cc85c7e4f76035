"""The affine action of U x| H on H^s x C^t.

Coordinates are ordered (y_0, ..., y_{s-1}, x_0, ..., x_{t-1}): the s
upper half-plane factors first, then the t complex factors. A group element
(u, a) acts by

    y_i -> sigma_i(u) * y_i + sigma_i(a),    x_j -> tau_j(u) * x_j + tau_j(a),

so (u, a) is "scale by u, then translate by a" and the group law is
(u, a) * (u', a') = (u u', a + u a').
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp

from .balls import Ball
from .embeddings import coordinate_values
from .errors import PreconditionError
from .numfield import FieldElement, NumberField, RationalSpan
from .units import OTDatum, is_totally_positive, is_unit

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupElement:
    """Exact element (u, a) of U x| H."""

    u: FieldElement
    a: FieldElement

    @classmethod
    def identity(cls, field_: NumberField) -> "GroupElement":
        return cls(field_.one, field_.zero)

    @classmethod
    def translation(cls, a: FieldElement) -> "GroupElement":
        return cls(a.field.one, a)

    @classmethod
    def scaling(cls, u: FieldElement) -> "GroupElement":
        return cls(u, u.field.zero)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        return invert(self)

    def is_translation(self) -> bool:
        return self.u == 1

    def is_identity(self) -> bool:
        return self.u == 1 and self.a.is_zero()


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(g.u * h.u, g.a + g.u * h.a)


def invert(g: GroupElement) -> GroupElement:
    ui = g.u.inverse()
    return GroupElement(ui, -(ui * g.a))


@dataclass(frozen=True)
class AffineMap:
    """Numerical diagonal affine map z -> diagonal * z + translation."""

    element: GroupElement
    diagonal: tuple[Ball, ...]
    translation: tuple[Ball, ...]
    s: int

    def __call__(self, point, precision_bits: int = 128):
        return apply(self, point, precision_bits)


def affine_map(datum: OTDatum, g: GroupElement, precision_bits: int = 128) -> AffineMap:
    diag = coordinate_values(g.u, precision_bits, datum.conjugate)
    trans = coordinate_values(g.a, precision_bits, datum.conjugate)
    return AffineMap(g, tuple(diag), tuple(trans), datum.s)


def translation_map(datum: OTDatum, zeta: FieldElement, precision_bits: int = 128) -> AffineMap:
    zeta = datum.field.element(zeta)
    if not zeta.in_order():
        raise PreconditionError(f"{zeta} is not in {datum.order}")
    return affine_map(datum, GroupElement.translation(zeta), precision_bits)


def unit_map(datum: OTDatum, xi: FieldElement, precision_bits: int = 128) -> AffineMap:
    xi = datum.field.element(xi)
    if not is_unit(xi):
        raise PreconditionError(f"{xi} is not a unit")
    if not is_totally_positive(xi):
        raise PreconditionError(f"{xi} is not totally positive")
    return affine_map(datum, GroupElement.scaling(xi), precision_bits)


def _as_ball(z, prec) -> Ball:
    if isinstance(z, Ball):
        return z
    with mp.workprec(prec):
        return Ball(mpmath.mpc(z), 0)


def in_domain(point: Sequence[Ball], s: int) -> bool:
    """True when the first s coordinates certainly have positive imaginary part."""
    return all(mpmath.im(p.mid) - p.rad > 0 for p in point[:s])


def apply(m: AffineMap, point, precision_bits: int = 128) -> list[Ball]:
    prec = precision_bits + 32
    pts = [_as_ball(z, prec) for z in point]
    if len(pts) != len(m.diagonal):
        raise PreconditionError(f"point has {len(pts)} coordinates, expected {len(m.diagonal)}")
    if not in_domain(pts, m.s):
        raise PreconditionError("point is outside H^s x C^t")
    out = [d * z + c for d, z, c in zip(m.diagonal, pts, m.translation)]
    if not in_domain(out, m.s):
        raise AssertionError("image left the domain; diagonal is not positive on the H block")
    return out


# word enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    name: str
    element: GroupElement
    inverse_name: str


def group_generators(datum: OTDatum) -> list[Generator]:
    """R_k^{+-1} for each unit generator and T_l^{+-1} for the power basis of H."""
    gens = []
    for k, u in enumerate(datum.generators):
        g = GroupElement.scaling(u)
        gens.append(Generator(f"R{k}", g, f"R{k}^-1"))
        gens.append(Generator(f"R{k}^-1", invert(g), f"R{k}"))
    for l, b in enumerate(datum.field.power_basis()):
        g = GroupElement.translation(b)
        gens.append(Generator(f"T{l}", g, f"T{l}^-1"))
        gens.append(Generator(f"T{l}^-1", invert(g), f"T{l}"))
    return gens


def count_reduced_words(n_gens: int, length: int) -> int:
    return 1 + sum(n_gens * (n_gens - 1) ** (k - 1) for k in range(1, length + 1))


@dataclass
class WordTable:
    words: list[str]
    elements: list[GroupElement]
    duplicates: int


def enumerate_elements(datum: OTDatum, max_word_length: int, max_words: int = 200_000) -> WordTable:
    """Distinct group elements given by reduced words of length <= max_word_length.

    Words are grown by prepending generators; duplicate elements (distinct
    words, same exact element) are counted and dropped.
    """
    gens = group_generators(datum)
    total = count_reduced_words(len(gens), max_word_length)
    if total > max_words:
        raise PreconditionError(
            f"{total} reduced words of length <= {max_word_length} exceed the cap of {max_words}"
        )
    ident = GroupElement.identity(datum.field)
    words = [""]
    elements = [ident]
    seen = {ident: 0}
    duplicates = 0
    frontier = [("", None, ident)]
    for _ in range(max_word_length):
        nxt = []
        for word, first, elem in frontier:
            for g in gens:
                if first is not None and g.inverse_name == first:
                    continue
                new = compose(g.element, elem)
                w = g.name if not word else f"{g.name}.{word}"
                nxt.append((w, g.name, new))
                if new in seen:
                    duplicates += 1
                else:
                    seen[new] = len(words)
                    words.append(w)
                    elements.append(new)
        frontier = nxt
    return WordTable(words, elements, duplicates)


@dataclass
class OrbitSample:
    points: list[list[Ball]]
    words: list[str]
    min_distance: float | None
    duplicate_words: int
    closest_pair: tuple[int, int] | None = None

    def as_array(self) -> np.ndarray:
        return np.array([[complex(z.mid) for z in p] for p in self.points])


def _numeric_pair(datum: OTDatum, g: GroupElement):
    d = [complex(b.mid) for b in coordinate_values(g.u, 64, datum.conjugate)]
    t = [complex(b.mid) for b in coordinate_values(g.a, 64, datum.conjugate)]
    return np.array(d), np.array(t)


def _min_pairwise(arr: np.ndarray):
    best, pair = None, None
    for i in range(len(arr) - 1):
        dist = np.linalg.norm(arr[i + 1 :] - arr[i], axis=1)
        j = int(np.argmin(dist))
        if best is None or dist[j] < best:
            best, pair = float(dist[j]), (i, i + 1 + j)
    return best, pair


def orbit_sample(
    datum: OTDatum,
    point,
    max_word_length: int,
    precision_bits: int = 96,
    max_words: int = 200_000,
) -> OrbitSample:
    """Images of ``point`` under all group elements of word length <= the bound."""
    table = enumerate_elements(datum, max_word_length, max_words)
    points = []
    for g in table.elements:
        points.append(apply(affine_map(datum, g, precision_bits), point, precision_bits))
    arr = np.array([[complex(z.mid) for z in p] for p in points])
    if len(points) < 2:
        return OrbitSample(points, table.words, None, table.duplicates)
    dist, pair = _min_pairwise(arr)
    if dist == 0.0:
        log.warning("orbit sample has coincident points %s", pair)
    return OrbitSample(points, table.words, dist, table.duplicates, pair)


# the diagonal embedding of an Inoue surface into the sextic datum -------------------


def field_embedding_image(small: NumberField, big: NumberField) -> FieldElement:
    """An image of the small field's generator in the big field: theta^k with f_small(theta^k) = 0."""
    if big.degree % small.degree:
        raise PreconditionError("degree of the small field must divide the big one")
    for k in range(1, big.degree):
        cand = big.theta**k
        if small.poly(cand) == 0:
            return cand
    raise PreconditionError(f"no power of theta in {big} is a root of {small.poly}")


def map_element(x: FieldElement, image: FieldElement) -> FieldElement:
    """Image of x under the field embedding theta_small -> image."""
    return x.poly()(image)


def compatible_conjugation(small: OTDatum | NumberField, big: NumberField, image: FieldElement, small_conjugate=None):
    """Conjugation mask on the big field so each tau^big restricts to some tau^small.

    Returns (mask, slot_map) where slot_map[k] is the coordinate of the small
    field that big-field coordinate k restricts to.
    """
    from .embeddings import signature

    if isinstance(small, OTDatum):
        small_conjugate = small.conjugate
        small = small.field
    s_small, t_small = signature(small)
    s_big, t_big = signature(big)
    theta_s = small.theta
    small_vals = coordinate_values(theta_s, 64, small_conjugate)
    real_vals = coordinate_values(image, 64, [False] * t_big)
    conj_vals = coordinate_values(image, 64, [True] * t_big)
    slot_map = []
    for i in range(s_big):
        match = [k for k in range(s_small) if real_vals[i].overlaps(small_vals[k])]
        if len(match) != 1:
            raise PreconditionError(f"real embedding {i} of the big field does not restrict to a real one")
        slot_map.append(match[0])
    mask = []
    for j in range(t_big):
        plain = [k for k in range(s_small, s_small + t_small) if real_vals[s_big + j].overlaps(small_vals[k])]
        conj = [k for k in range(s_small, s_small + t_small) if conj_vals[s_big + j].overlaps(small_vals[k])]
        if plain:
            mask.append(False)
            slot_map.append(plain[0])
        elif conj:
            mask.append(True)
            slot_map.append(conj[0])
        else:
            raise PreconditionError(f"complex embedding {j} of the big field restricts to a real place")
    return tuple(mask), tuple(slot_map)


@dataclass
class InjectivityReport:
    samples: int
    word_bound: int
    seed: int
    elements_small: int
    elements_big: int
    false_identifications: int
    equivalent_pairs: int
    identified_equivalent_pairs: int
    mechanism_checks: int
    mechanism_violations: int
    identity_pair_identified: bool
    slot_map: tuple[int, ...]
    details: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.false_identifications == 0
            and self.identified_equivalent_pairs == self.equivalent_pairs
            and self.mechanism_violations == 0
            and self.identity_pair_identified
        )

    def as_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "details"}
        d["slot_map"] = list(self.slot_map)
        d["passed"] = self.passed
        return d


def _numeric_tables(datum: OTDatum, table: WordTable):
    diag = np.empty((len(table.elements), datum.s + datum.t), dtype=complex)
    trans = np.empty_like(diag)
    for idx, g in enumerate(table.elements):
        diag[idx], trans[idx] = _numeric_pair(datum, g)
    return diag, trans


def _identifying(diag, trans, p, q, rtol=1e-9):
    """Indices of elements g with g(p) = q numerically."""
    img = diag * p + trans
    scale = 1 + np.abs(diag) * np.abs(p) + np.abs(trans)
    err = np.max(np.abs(img - q) / scale, axis=1)
    return np.nonzero(err < rtol)[0]


def _random_point(rng: random.Random, s: int, t: int) -> np.ndarray:
    ys = [complex(rng.uniform(-1, 1), rng.uniform(0.25, 2)) for _ in range(s)]
    xs = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(t)]
    return np.array(ys + xs)


def diagonal_embedding_injectivity(
    datum_small: OTDatum,
    datum_big: OTDatum,
    n_samples: int = 100,
    word_bound: int = 3,
    seed: int = 0,
    max_words: int = 200_000,
) -> InjectivityReport:
    """Spot-check that the diagonal map X(L, U_L) -> X(K, U_K) is injective.

    Random pairs p, p' (not equivalent under the small group up to the word
    bound) must never be identified after the diagonal embedding by a
    big-group element of bounded word length. For constructed equivalent
    pairs p' = g(p), every identifying big-group element (u, a) must have u
    and a inside the small field, so sigma_i(u) agree across each block.
    """
    image = field_embedding_image(datum_small.field, datum_big.field)
    mask, slot_map = compatible_conjugation(datum_small, datum_big.field, image)
    if tuple(mask) != tuple(datum_big.conjugate):
        raise PreconditionError(
            f"big datum uses conjugation mask {datum_big.conjugate}; the diagonal map needs {mask}"
        )
    for u in datum_small.generators:
        if map_element(u, image) not in datum_big.generators:
            log.info("small generator %s is not among the big generators", u)
    small_table = enumerate_elements(datum_small, word_bound, max_words)
    big_table = enumerate_elements(datum_big, word_bound, max_words)
    sd, st = _numeric_tables(datum_small, small_table)
    bd, bt = _numeric_tables(datum_big, big_table)
    sub_span = RationalSpan(datum_big.degree)
    for k in range(datum_small.degree):
        sub_span.add((image**k).coords)
    slot_map_arr = np.array(slot_map)

    def embed(p):
        return p[slot_map_arr]

    rng = random.Random(seed)
    false_ids = 0
    details = []
    # identity pair
    p0 = _random_point(rng, datum_small.s, datum_small.t)
    identity_ok = len(_identifying(bd, bt, embed(p0), embed(p0))) > 0
    done = 0
    while done < n_samples:
        p = _random_point(rng, datum_small.s, datum_small.t)
        q = _random_point(rng, datum_small.s, datum_small.t)
        if len(_identifying(sd, st, p, q)):
            continue
        hits = _identifying(bd, bt, embed(p), embed(q))
        if len(hits):
            false_ids += 1
            details.append({"pair": done, "words": [big_table.words[h] for h in hits]})
        done += 1
    equivalent = identified = checks = violations = 0
    nontrivial = list(range(1, len(small_table.elements)))
    for _ in range(n_samples):
        p = _random_point(rng, datum_small.s, datum_small.t)
        idx = rng.choice(nontrivial)
        q = sd[idx] * p + st[idx]
        equivalent += 1
        hits = _identifying(bd, bt, embed(p), embed(q))
        if len(hits):
            identified += 1
        for h in hits:
            g = big_table.elements[h]
            checks += 1
            inside = g.u.coords in sub_span and g.a.coords in sub_span
            vals = coordinate_values(g.u, 96, datum_big.conjugate)
            agree = all(
                vals[i].overlaps(vals[j])
                for i, j in itertools.combinations(range(len(slot_map)), 2)
                if slot_map[i] == slot_map[j]
            )
            if not (inside and agree):
                violations += 1
                details.append({"equivalent_word": small_table.words[idx], "big_word": big_table.words[h]})
    return InjectivityReport(
        samples=n_samples,
        word_bound=word_bound,
        seed=seed,
        elements_small=len(small_table.elements),
        elements_big=len(big_table.elements),
        false_identifications=false_ids,
        equivalent_pairs=equivalent,
        identified_equivalent_pairs=identified,
        mechanism_checks=checks,
        mechanism_violations=violations,
        identity_pair_identified=identity_ok,
        slot_map=slot_map,
        details=details,
    )
