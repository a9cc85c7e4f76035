"""Command-line front end.

    otcert certify example inoue
    otcert analyze myfield.txt --json
    otcert witness example ot6 --exponents "1 0"
    otcert orbit example inoue --word-bound 2 > orbit.tsv
    otcert example ot6 > ot6.txt

Exit codes: 0 certified (or success), 1 hypothesis refuted, 2 heuristic
certificate, 3 invalid input or datum, 4 internal or precision failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from contextlib import contextmanager

from . import certifier
from .action import orbit_sample
from .config import DEFAULT_CONFIG, Config
from .embeddings import embedding_labels
from .errors import DatumRejected, NoFixedPoint, OTCertError, ParseError, PreconditionError, ReducibleField
from .jobspec import BUILTIN_TEXT, JobSpec, builtin, parse_jobspec
from .numfield import minimal_polynomial
from .report import SCHEMA_VERSION, poly_to_list
from .units import is_totally_positive, make_ot_datum, power_product

log = logging.getLogger("otcert")

EXIT_CERTIFIED, EXIT_REFUTED, EXIT_HEURISTIC, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3, 4

# flag name -> (environment variable, type)
OVERRIDABLE = {
    "precision_bits": ("OTCERT_PRECISION_BITS", int),
    "exponent_bound": ("OTCERT_EXPONENT_BOUND", int),
    "height_bound": ("OTCERT_HEIGHT_BOUND", int),
    "tolerance": ("OTCERT_TOLERANCE", float),
    "seed": ("OTCERT_SEED", int),
    "word_bound": ("OTCERT_WORD_BOUND", int),
}


class _Parser(argparse.ArgumentParser):
    # argparse's default usage-error code (2) would collide with "heuristic"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("source", nargs="+", help="'example NAME', a job file path, or '-' for stdin")
    p.add_argument("--precision-bits", type=int, help="working precision in bits (default 192)")
    p.add_argument("--exponent-bound", type=int, help="exhaustive exponent search bound (default 10)")
    p.add_argument("--height-bound", type=int, help="coordinate bound for the subfield search (default 3)")
    p.add_argument("--tolerance", type=float, help="determinant radius below which a singular verdict is final")
    p.add_argument("--seed", type=int, help="seed for random sampling (default 0)")
    p.add_argument("--word-bound", type=int, help="maximal word length for orbit enumeration (default 3)")
    p.add_argument("--json", action="store_true", help="emit the JSON report instead of text")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="otcert", description="Exact validation and primitivity certification for OT manifold data.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("analyze", help="validate the datum and tabulate generator primitivity")
    _common(p)
    p = sub.add_parser("certify", help="run the full primitivity certification")
    _common(p)
    p.add_argument("--subfield", action="append", default=[], help="extra subfield generator (coordinates)")
    p = sub.add_parser("witness", help="fixed point and flat subspace for a non-primitive unit of U")
    _common(p)
    p.add_argument("--exponents", help="exponents a_k selecting prod u_k^a_k (default: certifier's witness)")
    p.add_argument("--translation", help="coordinates of the translation part a (default 0)")
    p = sub.add_parser("orbit", help="dump an orbit sample as tab-separated text")
    _common(p)
    p.add_argument("--point", help="';'-separated complex coordinates, e.g. '1j;0.5+0.2j'")
    p = sub.add_parser("example", help="list built-in examples or print one as a job file")
    p.add_argument("name", nargs="?")
    return parser


def load_spec(source: list[str]) -> JobSpec:
    if source[0] == "example":
        if len(source) != 2:
            raise ParseError("usage: example NAME")
        return builtin(source[1])
    if len(source) != 1:
        raise ParseError(f"expected one job file, got {len(source)} arguments")
    if source[0] == "-":
        return parse_jobspec(sys.stdin.read())
    try:
        with open(source[0], encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {source[0]}: {exc.strerror}") from None
    return parse_jobspec(text)


def resolve_config(args, spec: JobSpec | None, environ=None) -> Config:
    """Flags beat environment variables, which beat job-file settings."""
    environ = os.environ if environ is None else environ
    values = dict(spec.settings) if spec is not None else {}
    for name, (var, typ) in OVERRIDABLE.items():
        if var in environ:
            try:
                values[name] = typ(environ[var])
            except ValueError:
                raise ParseError(f"malformed value {environ[var]!r}", None, var) from None
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return DEFAULT_CONFIG.updated(**values)


def _vector(text: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").strip("[] ").split()]
    except ValueError:
        raise ParseError(f"malformed integer vector {text!r}", None, what) from None


def _parse_point(text: str, dim: int) -> list[complex]:
    parts = [p for p in text.split(";") if p.strip()]
    if len(parts) != dim:
        raise ParseError(f"point needs {dim} coordinates, got {len(parts)}", None, "point")
    try:
        return [complex(p.strip().replace(" ", "")) for p in parts]
    except ValueError:
        raise ParseError(f"malformed complex number in {text!r}", None, "point") from None


@contextmanager
def _timed(timings: dict, key: str):
    start = time.perf_counter()
    yield
    timings[key] = round(time.perf_counter() - start, 4)


# report assembly ---------------------------------------------------------------


def new_report(command: str, spec: JobSpec | None, config: Config | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": None,
        "exit_code": None,
        "spec": None if spec is None else spec.as_dict(),
        "config": None if config is None else config.as_dict(),
        "field": None,
        "signature": None,
        "units": [],
        "admissibility": None,
        "primitivity": [],
        "certificate": None,
        "witness": None,
        "orbit": None,
        "errors": [],
    }


def _describe_datum(report: dict, datum) -> None:
    report["field"] = {
        "poly": poly_to_list(datum.field.poly),
        "degree": datum.degree,
        "irreducibility": datum.field.irreducibility.reason if datum.field.irreducibility else None,
        "order": datum.order,
        "embeddings": embedding_labels(datum.field),
        "conjugate": [int(c) for c in datum.conjugate],
    }
    report["signature"] = {"s": datum.s, "t": datum.t}
    report["units"] = [
        dict(ev.as_dict(), totally_positive=is_totally_positive(ev.element)) for ev in datum.unit_evidence
    ]
    report["admissibility"] = datum.admissibility.as_dict()
    report["primitivity"] = [r.as_dict() for r in certifier.generator_primitivity(datum)]


def run(args, environ=None) -> tuple[dict, int]:
    """Execute one command and return (report, exit code); never raises OTCertError."""
    timings: dict = {}
    spec = config = None
    report = new_report(args.command, None, None)
    try:
        spec = load_spec(args.source)
        config = resolve_config(args, spec, environ)
        report = new_report(args.command, spec, config)
        with _timed(timings, "validation"):
            datum = make_ot_datum(spec.poly, spec.units, config, spec.conjugate)
        _describe_datum(report, datum)
        code = EXIT_CERTIFIED
        status = "Valid"
        if args.command == "certify":
            hints = list(spec.subfields) + [_vector(h, "subfield") for h in args.subfield]
            with _timed(timings, "certify"):
                cert = certifier.certify(datum, config, hints)
            report["certificate"] = cert.as_dict()
            status, code = cert.status.value, cert.exit_code
        elif args.command == "witness":
            status, code = _witness(args, datum, config, report, timings)
        elif args.command == "orbit":
            _orbit(args, datum, config, report, timings)
            status = "Sampled"
        report["status"], report["exit_code"] = status, code
    except (ParseError, DatumRejected, ReducibleField, PreconditionError, NoFixedPoint) as exc:
        reasons = getattr(exc, "reasons", None) or [str(exc)]
        report["errors"] = [f"{type(exc).__name__}: {r}" for r in reasons]
        report["status"], report["exit_code"] = "Invalid", EXIT_INVALID
        if isinstance(exc, DatumRejected) and "admissibility" in exc.evidence:
            report["admissibility"] = exc.evidence["admissibility"].as_dict()
        if isinstance(exc, DatumRejected) and "signature" in exc.evidence:
            sig = exc.evidence["signature"]
            report["signature"] = {"s": sig.s, "t": sig.t}
    except OTCertError as exc:
        report["errors"] = [f"{type(exc).__name__}: {exc}"]
        report["status"], report["exit_code"] = "InternalError", EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - mapped to an exit code, never silent
        log.exception("internal failure")
        report["errors"] = [f"{type(exc).__name__}: {exc}"]
        report["status"], report["exit_code"] = "InternalError", EXIT_INTERNAL
    if getattr(args, "timings", False):
        report["timings"] = timings
    return report, report["exit_code"]


def _witness(args, datum, config, report, timings) -> tuple[str, int]:
    s = len(datum.generators)
    if args.exponents:
        exps = _vector(args.exponents, "exponents")
        if len(exps) != s:
            raise ParseError(f"expected {s} exponents, got {len(exps)}", None, "exponents")
        u = power_product(datum.generators, exps)
    else:
        with _timed(timings, "certify"):
            cert = certifier.certify(datum, config)
        report["certificate"] = cert.as_dict()
        if cert.witness is None:
            raise PreconditionError(f"no non-primitive unit found ({cert.status.value}); pass --exponents")
        exps, u = cert.witness.exponents, cert.witness.element
    if u == 1:
        raise NoFixedPoint("the selected product of generators is 1")
    translation = datum.field.zero
    if args.translation:
        coords = _vector(args.translation, "translation")
        if len(coords) != datum.degree:
            raise ParseError(f"translation needs {datum.degree} coordinates", None, "translation")
        translation = datum.field.element(coords)
    with _timed(timings, "witness"):
        cand = certifier.flat_subspace_witness(datum, u, translation, config.precision_bits)
    report["witness"] = dict(
        cand.as_dict(),
        exponents=exps,
        witness_minpoly=poly_to_list(minimal_polynomial(u)),
    )
    return certifier.Status.REFUTED.value, EXIT_REFUTED


def _orbit(args, datum, config, report, timings) -> None:
    dim = datum.s + datum.t
    point = _parse_point(args.point, dim) if args.point else [1j] * datum.s + [0j] * datum.t
    if any(z.imag <= 0 for z in point[: datum.s]):
        raise PreconditionError("the first s coordinates must lie in the upper half-plane")
    with _timed(timings, "orbit"):
        sample = orbit_sample(datum, point, config.word_bound, max_words=config.max_words)
    report["orbit"] = {
        "point": [[z.real, z.imag] for z in point],
        "word_bound": config.word_bound,
        "size": len(sample.points),
        "duplicate_words": sample.duplicate_words,
        "min_distance": sample.min_distance,
        "closest_pair": None if sample.closest_pair is None else list(sample.closest_pair),
        "words": sample.words,
        "points": [[[complex(z.mid).real, complex(z.mid).imag] for z in p] for p in sample.points],
        "max_radius": max((float(z.rad) for p in sample.points for z in p), default=0.0),
    }


# rendering ---------------------------------------------------------------------


def render_text(report: dict) -> str:
    out = []
    spec = report.get("spec") or {}
    out.append(f"otcert {report['command']}: {spec.get('name') or 'job'}")
    if report["field"]:
        f = report["field"]
        out.append(f"  field      poly {f['poly']} (constant first), degree {f['degree']}, order {f['order']}")
    if report["signature"]:
        out.append(f"  signature  (s, t) = ({report['signature']['s']}, {report['signature']['t']})")
    for k, u in enumerate(report["units"]):
        out.append(
            f"  unit {k}     {u['element']}  norm {u['norm']}  unit={u['is_unit']}  totally_positive={u['totally_positive']}"
        )
    adm = report["admissibility"]
    if adm:
        out.append(f"  admissibility {adm['status']} at {adm['precision_bits']} bits")
        for row in adm["matrix"]:
            out.append("    " + "  ".join(f"{e['value'][:22]:>24} (2^{e['error_exponent']})" for e in row))
        d = adm["determinant"]
        out.append(f"    det = {d['value'][:22]} +/- {d['radius']}")
    for r in report["primitivity"]:
        out.append(f"  generator {r['index']}: minpoly degree {r['minpoly_degree']}, primitive={r['primitive']}")
    cert = report["certificate"]
    if cert:
        out.append(f"  certificate {cert['status']}")
        for key, val in cert["evidence"].items():
            out.append(f"    {key}: {val}")
        if "note" in cert["diagnostics"]:
            out.append(f"    note: {cert['diagnostics']['note']}")
        w = cert["witness"]
        if w:
            out.append(f"    witness exponents {w['exponents']}: {w['element']}, minpoly degree {w['minpoly_degree']}")
    w = report["witness"]
    if w:
        out.append(f"  witness unit {w['witness_unit']} (exponents {w['exponents']})")
        out.append(f"    coincidence partition {w['coincidence_partition']}")
        out.append(f"    coordinate blocks {w['coordinate_blocks']}, free {w['free_coordinates']}")
        for j, c in w["fixed_coordinates"].items():
            out.append(f"    c_{j} = {c['value']} +/- {c['radius']}")
        out.append(f"    directions {w['directions']}; identity holds {w['identity_holds']}")
    orb = report["orbit"]
    if orb:
        out.append(
            f"  orbit      {orb['size']} points, word bound {orb['word_bound']}, "
            f"min distance {orb['min_distance']}, duplicate words {orb['duplicate_words']}"
        )
    for e in report["errors"]:
        out.append(f"  error: {e}")
    if "timings" in report:
        out.append(f"  timings {report['timings']}")
    out.append(f"status {report['status']} (exit {report['exit_code']})")
    return "\n".join(out)


def render_orbit_tsv(report: dict) -> str:
    orb = report["orbit"]
    dim = len(orb["point"])
    header = ["word"] + [f"{c}{k}_{part}" for k in range(dim) for c in ("z",) for part in ("re", "im")]
    lines = [
        f"# orbit sample: {orb['size']} points, word bound {orb['word_bound']}, seed {report['config']['seed']}",
        f"# min_distance {orb['min_distance']}, duplicate_words {orb['duplicate_words']}, max_radius {orb['max_radius']:.3g}",
        "\t".join(header),
    ]
    for word, pt in zip(orb["words"], orb["points"]):
        lines.append("\t".join([word or "e"] + [f"{x:.17g}" for z in pt for x in z]))
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "example":
        if args.name is None:
            print("\n".join(sorted(BUILTIN_TEXT)))
            return 0
        if args.name not in BUILTIN_TEXT:
            print(f"unknown example {args.name!r}; choose from {', '.join(sorted(BUILTIN_TEXT))}", file=sys.stderr)
            return EXIT_INVALID
        print(BUILTIN_TEXT[args.name], end="")
        return 0
    report, code = run(args)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    elif args.command == "orbit" and report["orbit"]:
        print(render_orbit_tsv(report))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
