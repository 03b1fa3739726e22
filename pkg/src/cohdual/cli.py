"""Command-line front end.

Every subcommand prints a JSON document on stdout by default (mode
"document"), or a short plain-text rendering with ``--mode human``.
Element arguments are either expression text (parsed against the chosen
shape, box, and field) or ``@path`` pointing at an element document.

Shapes are spelled ``R`` (all series), ``E`` (all inverse), ``H:i``
(inverse on the first i variables), ``D:i`` (its dual), or an explicit
comma list of roles; the single-letter forms need ``-n``.

A JSON config file named by the ``COHDUAL_CONFIG`` environment variable
may preset the common options (field, trunc, mode, seed); explicit flags
win over the file.

Exit codes: 0 success (or certificate issued), 1 a verification failed,
2 the window was too short to conclude, 64 usage or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algebra import (
    INVERSE,
    SERIES,
    ModuleShape,
    TruncationBox,
    derivation_act,
    ring_act,
)
from .cech import verify_realization
from .checks import DEFAULT_SEED, run_suite, suite_names
from .duality import gamma_of_shape, matlis_pair, regular_on_dual_check
from .exprio import (
    ParseError,
    SchemaError,
    certificate_to_document,
    check_report_to_document,
    default_variable_names,
    delta_to_document,
    element_from_document,
    element_to_document,
    new_document,
    parse_element,
    read_document,
    realization_to_document,
    regularity_to_document,
    serialize_element,
    write_document,
)
from .fields import RATIONAL, field_from_descriptor
from .independence import (
    CertificateError,
    DegenerateInputError,
    InconclusiveWindowError,
    delta as delta_profile,
    fit_shift_form,
    independence_certificate,
    make_d,
)

USAGE_EXIT = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems as exceptions."""

    def error(self, message):
        raise _UsageError(message)


def parse_shape_spec(spec: str, n: int | None = None) -> ModuleShape:
    """Read a shape from its command-line spelling."""
    spec = spec.strip()
    if "," in spec or spec in (SERIES, INVERSE):
        shape = ModuleShape(tuple(part.strip() for part in spec.split(",")))
        if n is not None and shape.nvars != n:
            raise ValueError(f"shape {spec!r} has {shape.nvars} variables, not {n}")
        return shape
    if n is None:
        raise ValueError(f"shape {spec!r} needs the variable count (-n)")
    if spec == "R":
        return ModuleShape.series_shape(n)
    if spec == "E":
        return ModuleShape.inverse_shape(n)
    if spec.startswith(("H:", "D:")):
        try:
            i = int(spec[2:])
        except ValueError:
            raise ValueError(f"cannot read the position in {spec!r}") from None
        shape = ModuleShape.cohomology_shape(n, i)
        return shape.dual() if spec.startswith("D:") else shape
    raise ValueError(f"cannot read shape {spec!r}")


def _parse_box_spec(spec: str) -> TruncationBox:
    try:
        bounds = tuple(int(part) for part in spec.split(","))
    except ValueError:
        raise ValueError(f"cannot read box bounds from {spec!r}") from None
    return TruncationBox(bounds)


_CONFIG_KEYS = ("field", "trunc", "mode", "seed")


def _config_defaults() -> dict:
    path = os.environ.get("COHDUAL_CONFIG")
    if not path:
        return {}
    try:
        config = json.loads(Path(path).read_text())
    except OSError as exc:
        raise _UsageError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise _UsageError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise _UsageError("config file must hold a JSON object")
    unknown = set(config) - set(_CONFIG_KEYS)
    if unknown:
        raise _UsageError(f"unknown config keys: {sorted(unknown)}")
    return config


class _Session:
    """Resolved common options plus the element-loading helpers."""

    def __init__(self, args, config):
        self.args = args
        self.field_text = args.field or config.get("field", "rational")
        self.field = field_from_descriptor(self.field_text)
        trunc = args.trunc if args.trunc is not None else config.get("trunc", 8)
        self.trunc = int(trunc)
        if self.trunc < 0:
            raise ValueError("truncation bound must be nonnegative")
        self.mode = args.mode or config.get("mode", "document")
        if self.mode not in ("document", "human"):
            raise _UsageError(f"unknown mode {self.mode!r}")
        seed = args.seed if getattr(args, "seed", None) is not None else None
        if seed is None:
            seed = config.get("seed", DEFAULT_SEED)
        self.seed = int(seed)

    def shape_and_box(self, nvars_default=2):
        args = self.args
        n = getattr(args, "nvars", None) or nvars_default
        shape = parse_shape_spec(getattr(args, "shape", None) or "D:1", n)
        box_spec = getattr(args, "box", None)
        if box_spec is not None:
            box = _parse_box_spec(box_spec)
        else:
            box = TruncationBox.uniform(shape.nvars, self.trunc)
        return shape, box

    def load_element(self, token, shape, box):
        if token.startswith("@"):
            return element_from_document(read_document(token[1:]))
        names = default_variable_names(shape.nvars)
        return parse_element(token, shape, box, self.field, names)

    def emit(self, doc, human_lines) -> None:
        if self.mode == "document":
            payload = write_document(doc, path=self.args.out)
            sys.stdout.write(payload.decode("ascii"))
        else:
            text = "\n".join(human_lines) + "\n"
            if self.args.out:
                Path(self.args.out).write_text(text)
            sys.stdout.write(text)

    def emit_element(self, element) -> None:
        names = default_variable_names(element.shape.nvars)
        doc = element_to_document(element, self.field, names)
        self.emit(doc, [serialize_element(element, names)])


def _cmd_cohomology(session: _Session) -> int:
    args = session.args
    report = verify_realization(args.nvars, args.index, args.window)
    lines = [
        f"degree {degree}: dims {dims}"
        for degree, dims in report.table.entries
        if any(dims)
    ]
    lines.append(f"nonzero slices: {report.nonzero_count}")
    lines.append("verified: " + ("yes" if report.passed else "no"))
    session.emit(realization_to_document(report), lines)
    return 0 if report.passed else 1


def _cmd_dfam(session: _Session) -> int:
    args = session.args
    box = _parse_box_spec(args.box) if args.box else None
    session.emit_element(make_d(args.power, args.lmax, box))
    return 0


def _cmd_delta(session: _Session) -> int:
    args = session.args
    shape, box = session.shape_and_box()
    element = session.load_element(args.element, shape, box)
    window = None
    if args.window:
        lo, _, hi = args.window.partition(":")
        window = (int(lo), int(hi))
    profile = delta_profile(element, window)
    doc = delta_to_document(profile)
    lines = [f"window [{profile.start}, {profile.end}]"]
    lines += [
        f"degree {profile.start + k}: "
        + ("zero coefficient" if v is None else str(v))
        for k, v in enumerate(profile.entries)
    ]
    exit_code = 0
    if args.fit is not None:
        if args.tail_start is None:
            raise _UsageError("--fit needs --tail-start")
        fit = fit_shift_form(profile, args.fit, args.tail_start)
        doc["fit"] = None if fit is None else list(fit)
        doc["fit_power"] = args.fit
        doc["tail_start"] = args.tail_start
        lines.append(f"fit: {fit}")
        if fit is None:
            exit_code = 1
    session.emit(doc, lines)
    return exit_code


def _cmd_act(session: _Session) -> int:
    args = session.args
    shape, box = session.shape_and_box()
    element = session.load_element(args.element, shape, box)
    n = element.shape.nvars
    poly_shape = ModuleShape.series_shape(n)
    poly = session.load_element(args.poly, poly_shape,
                                TruncationBox.uniform(n, session.trunc))
    session.emit_element(ring_act(poly, element))
    return 0


def _cmd_derive(session: _Session) -> int:
    args = session.args
    shape, box = session.shape_and_box()
    element = session.load_element(args.element, shape, box)
    session.emit_element(derivation_act(args.variable, element))
    return 0


def _cmd_pair(session: _Session) -> int:
    args = session.args
    shape, box = session.shape_and_box()
    dual = session.load_element(args.dual, shape.dual(), box)
    element = session.load_element(args.element, shape, box)
    out_box = _parse_box_spec(args.out_box) if args.out_box else None
    session.emit_element(matlis_pair(dual, element, out_box))
    return 0


def _cmd_gamma(session: _Session) -> int:
    args = session.args
    n = args.nvars
    if n is None and ("," in args.shape or args.shape in (SERIES, INVERSE)):
        shape = parse_shape_spec(args.shape)
    else:
        shape = parse_shape_spec(args.shape, n or 2)
    gens = tuple(int(part) for part in args.gens.split(","))
    result = gamma_of_shape(shape, gens)
    doc = new_document("torsion_support", {
        "roles": list(shape.roles),
        "generators": list(gens),
        "result": result,
    })
    session.emit(doc, [f"torsion support: {result}"])
    return 0


def _cmd_regular(session: _Session) -> int:
    args = session.args
    report = regular_on_dual_check(args.nvars, args.index, args.bound)
    lines = [
        f"variable {step.variable}: domain {step.domain_dim}, "
        f"kernel {step.kernel_dim}"
        for step in report.steps
    ]
    lines.append(f"final quotient: roles {report.final_roles}, "
                 f"dimension {report.final_dim}")
    lines.append("verified: " + ("yes" if report.passed else "no"))
    session.emit(regularity_to_document(report), lines)
    return 0 if report.passed else 1


def _cmd_check(session: _Session) -> int:
    args = session.args
    report = run_suite(args.suite, session.seed)
    lines = []
    for line in report.lines:
        mark = "ok  " if line.passed else "FAIL"
        text = f"{mark} {line.name} ({line.instances} instances)"
        if line.detail:
            text += f": {line.detail}"
        lines.append(text)
    lines.append(f"suite {report.suite} with seed {report.seed}: "
                 + ("all passed" if report.passed else "FAILED"))
    session.emit(check_report_to_document(report), lines)
    return 0 if report.passed else 1


def _cmd_indep(session: _Session) -> int:
    args = session.args
    shape = ModuleShape.series_shape(2)
    box = TruncationBox.uniform(2, session.trunc)
    r_list = tuple(session.load_element(token, shape, box) for token in args.polys)
    try:
        cert = independence_certificate(r_list, args.lmax)
    except InconclusiveWindowError as exc:
        doc = new_document("inconclusive_window", {
            "lmax": args.lmax,
            "required_lmax": exc.required_lmax,
        })
        session.emit(doc, [f"inconclusive: {exc}"])
        return 2
    names = default_variable_names(2)
    doc = certificate_to_document(cert, session.field, names)
    lines = [
        f"top index: {cert.m0}",
        f"shifts: a={cert.a}, b={cert.b}",
        f"tail verified from degree {cert.tail_start} to {cert.lmax}",
        "combination is nonzero: yes",
    ]
    session.emit(doc, lines)
    return 0


def _add_common(sub) -> None:
    sub.add_argument("--field", help="coefficient field: rational or prime:p")
    sub.add_argument("--trunc", type=int,
                     help="uniform truncation bound for parsed expressions")
    sub.add_argument("--out", help="also write the output to this file")
    sub.add_argument("--mode", choices=("document", "human"),
                     help="output as a JSON document (default) or plain text")


def _add_element_options(sub) -> None:
    sub.add_argument("-n", "--nvars", type=int, help="number of variables")
    sub.add_argument("--shape", help="element shape (default D:1)")
    sub.add_argument("--box", help="comma-separated box bounds")


def build_parser() -> _Parser:
    parser = _Parser(prog="cohdual", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("cohomology",
                              help="sweep a degree window and verify the support")
    sub.add_argument("-n", "--nvars", type=int, required=True)
    sub.add_argument("-i", "--index", type=int, required=True)
    sub.add_argument("--window", type=int, default=3)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_cohomology)

    sub = commands.add_parser("dfam", help="emit a truncation of the d-family")
    sub.add_argument("--power", type=int, required=True)
    sub.add_argument("--lmax", type=int, required=True)
    sub.add_argument("--box", help="comma-separated box bounds")
    _add_common(sub)
    sub.set_defaults(handler=_cmd_dfam)

    sub = commands.add_parser("delta",
                              help="minimal-exponent profile of an element")
    sub.add_argument("element", help="expression or @document")
    sub.add_argument("--window", help="degree window LO:HI")
    sub.add_argument("--fit", type=int,
                     help="fit the tail against this power")
    sub.add_argument("--tail-start", type=int)
    _add_element_options(sub)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_delta)

    sub = commands.add_parser("act", help="act by a polynomial on an element")
    sub.add_argument("poly", help="polynomial expression or @document")
    sub.add_argument("element", help="expression or @document")
    _add_element_options(sub)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_act)

    sub = commands.add_parser("derive",
                              help="apply the derivation along one variable")
    sub.add_argument("-j", "--variable", type=int, required=True)
    sub.add_argument("element", help="expression or @document")
    _add_element_options(sub)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_derive)

    sub = commands.add_parser("pair",
                              help="Matlis pairing of a dual element against an element")
    sub.add_argument("dual", help="dual-shape expression or @document")
    sub.add_argument("element", help="expression or @document")
    sub.add_argument("--out-box", help="bounds for the paired result")
    _add_element_options(sub)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_pair)

    sub = commands.add_parser("gamma",
                              help="torsion support of a shape under chosen variables")
    sub.add_argument("--shape", required=True)
    sub.add_argument("-n", "--nvars", type=int)
    sub.add_argument("--gens", required=True,
                     help="comma-separated variable indices")
    _add_common(sub)
    sub.set_defaults(handler=_cmd_gamma)

    sub = commands.add_parser("regular",
                              help="check the variables form a regular sequence on the dual")
    sub.add_argument("-n", "--nvars", type=int, required=True)
    sub.add_argument("-i", "--index", type=int, required=True)
    sub.add_argument("--bound", type=int, default=4)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_regular)

    sub = commands.add_parser("check", help="run a named verification suite")
    sub.add_argument("--suite", choices=suite_names(), default="all")
    sub.add_argument("--seed", type=int)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_check)

    sub = commands.add_parser("indep",
                              help="certify a combination of the d-family is nonzero")
    sub.add_argument("polys", nargs="+",
                     help="coefficient polynomials, lowest power first")
    sub.add_argument("--lmax", type=int, default=12)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_indep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        config = _config_defaults()
        args = parser.parse_args(argv)
        session = _Session(args, config)
        return args.handler(session)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    except (ParseError, SchemaError, DegenerateInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except CertificateError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())
