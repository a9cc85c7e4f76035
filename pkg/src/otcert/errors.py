"""Exception hierarchy shared across the package."""


class OTCertError(Exception):
    """Base class for all errors raised by otcert."""


class ReducibleField(OTCertError):
    """The defining polynomial turned out to have a nontrivial factor.

    ``factor`` is an exact monic proper factor of the defining polynomial.
    """

    def __init__(self, factor, message=None):
        self.factor = factor
        super().__init__(message or f"defining polynomial is reducible: factor {factor}")


class NonConvergence(OTCertError):
    """A numerical iteration did not reach its target within budget."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class SignUndetermined(OTCertError):
    """Interval refinement could not separate a value from zero within budget."""


class DatumRejected(OTCertError):
    """An OT datum failed validation; ``reasons`` lists every failed condition."""

    def __init__(self, reasons, evidence=None):
        self.reasons = list(reasons)
        self.evidence = evidence or {}
        super().__init__("; ".join(self.reasons))


class NoFixedPoint(OTCertError):
    """An embedding of the witness unit equals 1, so no affine fixed point exists."""


class PreconditionError(OTCertError, ValueError):
    """An operation was called on inputs outside its domain."""


class ParseError(OTCertError, ValueError):
    """Malformed job specification; carries the offending line and field."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
