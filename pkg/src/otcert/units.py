"""Unit verification, total positivity, admissibility and OT datum assembly.

The additive lattice acted on is H = Z[theta], the order generated by the
root of the defining polynomial. It agrees with the ring of integers up to
finite index, which changes the resulting manifold only up to isogeny.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from mpmath import mp

from .balls import Ball, ball_det
from .config import DEFAULT_CONFIG, Config
from .embeddings import Signature, log_vector, sign_real, signature
from .errors import DatumRejected, OTCertError, PreconditionError, ReducibleField
from .lattice import integer_relation_candidates
from .numfield import FieldElement, NumberField

log = logging.getLogger(__name__)

ORDER_DESCRIPTION = "Z[theta]"


@dataclass(frozen=True)
class UnitEvidence:
    element: FieldElement
    algebraic_integer: bool
    norm: Fraction
    inverse: FieldElement | None
    inverse_integral: bool

    @property
    def is_unit(self) -> bool:
        return self.algebraic_integer and abs(self.norm) == 1 and self.inverse_integral

    def __bool__(self):
        return self.is_unit

    def as_dict(self) -> dict:
        return {
            "element": [str(c) for c in self.element.coords],
            "algebraic_integer": self.algebraic_integer,
            "norm": str(self.norm),
            "inverse": None if self.inverse is None else [str(c) for c in self.inverse.coords],
            "inverse_integral": self.inverse_integral,
            "is_unit": self.is_unit,
        }


def is_unit(a: FieldElement) -> UnitEvidence:
    if a.is_zero():
        return UnitEvidence(a, True, Fraction(0), None, False)
    integral = a.is_algebraic_integer()
    nrm = a.norm()
    inv = a.inverse()
    return UnitEvidence(a, integral, nrm, inv, inv.is_algebraic_integer())


def is_totally_positive(u: FieldElement) -> bool:
    s = signature(u.field).s
    return all(sign_real(u, i) == 1 for i in range(s))


@dataclass
class AdmissibilityEvidence:
    """Outcome of the maximal-rank test on M[i][k] = log sigma_i(u_k)."""

    status: str  # "pass" | "fail" | "indeterminate"
    matrix: list[list[Ball]]
    determinant: Ball
    condition_number: float
    precision_bits: int
    tolerance: float
    attempts: list[int] = field(default_factory=list)
    relation: list[int] | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        from .report import ball_to_dict

        return {
            "status": self.status,
            "matrix": [[ball_to_dict(b) for b in row] for row in self.matrix],
            "determinant": ball_to_dict(self.determinant),
            "certified_nonzero": not self.determinant.contains_zero(),
            "condition_number": self.condition_number if np.isfinite(self.condition_number) else None,
            "precision_bits": self.precision_bits,
            "precision_attempts": list(self.attempts),
            "tolerance": self.tolerance,
            "relation": self.relation,
        }


def _log_matrix(generators, s, precision_bits):
    cols = [log_vector(u, precision_bits)[:s] for u in generators]
    return [[cols[k][i] for k in range(len(generators))] for i in range(s)]


def _condition_number(matrix) -> float:
    a = np.array([[float(b.mid) for b in row] for row in matrix])
    try:
        return float(np.linalg.cond(a))
    except np.linalg.LinAlgError:
        return float("inf")


def find_multiplicative_relation(generators: Sequence[FieldElement], precision_bits: int = 192) -> list[int] | None:
    """Nontrivial exponents a with prod u_k^a_k = 1, verified exactly, if one is found."""
    if not generators:
        return None
    for u in generators:
        if u == 1:
            return [1 if v is u else 0 for v in generators]
    with mp.workprec(precision_bits + 64):
        full = [log_vector(u, precision_bits) for u in generators]
        err = max(float(b.rad) for col in full for b in col)
        cols = [[b.mid for b in col] for col in full]
        cands = integer_relation_candidates(cols, precision_bits // 2, error=err, max_coeff=10**4)
    for a in cands:
        if power_product(generators, a) == 1:
            return a
    return None


def power_product(generators: Sequence[FieldElement], exponents: Sequence[int]) -> FieldElement:
    field_ = generators[0].field
    out = field_.one
    for u, e in zip(generators, exponents):
        if e:
            out = out * u**e
    return out


def admissibility_check(
    field_: NumberField,
    generators: Sequence[FieldElement],
    precision_bits: int = 192,
    tolerance: float = 1e-30,
    max_precision: int = 1024,
) -> AdmissibilityEvidence:
    """Certify that the s x s matrix of log sigma_i(u_k) is nonsingular.

    ``pass`` when the determinant ball excludes 0; ``fail`` when the ball
    contains 0 and its radius is already below ``tolerance`` (singular to
    working accuracy); otherwise precision is doubled up to ``max_precision``
    and ``indeterminate`` is reported if that is not enough.
    """
    s = signature(field_).s
    if len(generators) != s:
        raise PreconditionError(f"expected {s} generators, got {len(generators)}")
    for u in generators:
        if not is_unit(u):
            raise PreconditionError(f"{u} is not a unit")
        if not is_totally_positive(u):
            raise PreconditionError(f"{u} is not totally positive")
    prec = precision_bits
    attempts = []
    while True:
        attempts.append(prec)
        with mp.workprec(prec + 64):
            matrix = _log_matrix(generators, s, prec)
            det = ball_det(matrix)
        cond = _condition_number(matrix)
        if not det.contains_zero():
            return AdmissibilityEvidence("pass", matrix, det, cond, prec, tolerance, attempts)
        if det.rad <= tolerance:
            rel = find_multiplicative_relation(generators, prec)
            return AdmissibilityEvidence("fail", matrix, det, cond, prec, tolerance, attempts, rel)
        if prec * 2 > max_precision:
            return AdmissibilityEvidence("indeterminate", matrix, det, cond, prec, tolerance, attempts)
        prec *= 2


@dataclass(frozen=True)
class OTDatum:
    """A validated pair (K, U) with U given by s totally positive units of Z[theta].

    ``conjugate[j]`` selects conj(tau_j) instead of tau_j as the j-th complex
    coordinate of H^s x C^t.
    """

    field: NumberField
    signature: Signature
    generators: tuple[FieldElement, ...]
    admissibility: AdmissibilityEvidence
    conjugate: tuple[bool, ...]
    unit_evidence: tuple[UnitEvidence, ...]
    order: str = ORDER_DESCRIPTION

    @property
    def degree(self) -> int:
        return self.field.degree

    @property
    def s(self) -> int:
        return self.signature.s

    @property
    def t(self) -> int:
        return self.signature.t


def make_ot_datum(
    field_: NumberField | Sequence[int],
    generators: Sequence,
    config: Config = DEFAULT_CONFIG,
    conjugate: Sequence[bool] | None = None,
) -> OTDatum:
    """Run every validation step; raise DatumRejected listing all failures."""
    reasons: list[str] = []
    evidence: dict = {}
    if not isinstance(field_, NumberField):
        try:
            field_ = NumberField(field_)
        except ReducibleField as exc:
            raise DatumRejected([f"defining polynomial is reducible (factor {exc.factor})"]) from exc
        except PreconditionError as exc:
            raise DatumRejected([str(exc)]) from exc
    if field_.irreducibility is not None and not field_.irreducibility.is_irreducible:
        log.warning("irreducibility of %s not proven: %s", field_.poly, field_.irreducibility.reason)
    sig = signature(field_)
    evidence["signature"] = sig
    if sig.s == 0:
        reasons.append("s = 0: the field has no real embedding")
    if sig.t == 0:
        reasons.append("t = 0: the field is totally real")
    try:
        gens = tuple(field_.element(g) for g in generators)
    except (PreconditionError, TypeError, ValueError) as exc:
        raise DatumRejected(reasons + [f"bad generator: {exc}"], evidence) from exc
    if len(gens) != sig.s:
        reasons.append(f"rank: expected s = {sig.s} generators, got {len(gens)}")
    if conjugate is None:
        conjugate = (False,) * sig.t
    conjugate = tuple(bool(c) for c in conjugate)
    if len(conjugate) != sig.t:
        reasons.append(f"conjugate mask has {len(conjugate)} entries, expected t = {sig.t}")
    unit_ev = []
    all_units_ok = True
    for k, u in enumerate(gens):
        if u == 1 or u == -1:
            reasons.append(f"generator {k} is a root of unity ({u})")
            all_units_ok = False
            continue
        try:
            ev = is_unit(u)
        except ReducibleField as exc:
            raise DatumRejected(reasons + [f"defining polynomial is reducible (factor {exc.factor})"]) from exc
        unit_ev.append(ev)
        if not ev:
            reasons.append(f"generator {k} ({u}) is not a unit (norm {ev.norm})")
            all_units_ok = False
            continue
        if sig.s > 0 and not is_totally_positive(u):
            reasons.append(f"generator {k} ({u}) is not totally positive")
            all_units_ok = False
    adm = None
    if not reasons and all_units_ok:
        try:
            adm = admissibility_check(
                field_, gens, config.precision_bits, config.tolerance, config.max_precision
            )
        except OTCertError as exc:
            reasons.append(f"admissibility check failed to run: {exc}")
        else:
            evidence["admissibility"] = adm
            if adm.status == "fail":
                detail = f" (exact relation {adm.relation})" if adm.relation else ""
                reasons.append("admissibility: log matrix is singular" + detail)
            elif adm.status == "indeterminate":
                reasons.append(
                    f"admissibility: indeterminate up to {adm.precision_bits} bits"
                )
    if reasons:
        raise DatumRejected(reasons, evidence)
    return OTDatum(field_, sig, gens, adm, conjugate, tuple(unit_ev))
