"""Command line interface.

Exit codes: 0 success or pass, 1 validation or verification failure,
2 decomposition failure, 3 parse or usage error. Results go to standard
output, diagnostics to standard error.

Example::

    rpsurf gen dodecahedron | rpsurf info -
    rpsurf decompose slab.rps --family square-oct -o slab.cert.yaml
    rpsurf verify slab.rps --cert slab.cert.yaml
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Sequence

from dotenv import load_dotenv

from .bands import all_bands
from .decompose import Family, curvature_audit_5n, decompose, verify_certificate
from .errors import BandError, DecompositionError, FormatError, RpsError, SurgeryError
from .generators import (
    COUNTEREXAMPLES,
    SolidKind,
    box,
    counterexample,
    dodecahedral_torus,
    great_dodecahedron,
    make_solid,
    slab,
)
from .geometry import facial_curvature, gauss_bonnet_check, validate_realization, vertex_curvature
from .io_formats import (
    dump_certificate,
    export_obj,
    import_off,
    load_certificate,
    load_pairing,
    parse_rps,
    read_surface,
    serialize_rps,
)
from .labels import Labels
from .settings import Settings
from .surface_core import euler_characteristic, genus, validate_proper

logger = logging.getLogger("rpsurf")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DECOMPOSITION = 2
EXIT_USAGE = 3

_COLORS = {"DEBUG": "36", "INFO": "32", "WARNING": "33", "ERROR": "31", "CRITICAL": "35"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class _ColorFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        color = _COLORS.get(record.levelname)
        if color:
            text = text.replace(record.levelname, f"\033[{color}m{record.levelname}\033[0m", 1)
        return text


def _configure_logging(verbose: int, quiet: bool) -> None:
    level = logging.getLevelName(str(Settings().get(Labels.LOG_LEVEL, default="WARNING")).upper())
    if not isinstance(level, int):
        level = logging.WARNING
    if quiet:
        level = logging.ERROR
    elif verbose:
        level = max(logging.DEBUG, min(level, logging.WARNING) - 10 * verbose)
    for handler in [h for h in logger.handlers if getattr(h, "_rpsurf_cli", False)]:
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler._rpsurf_cli = True
    fmt = "%(levelname)s %(name)s: %(message)s"
    use_color = sys.stderr.isatty() and "NO_COLOR" not in os.environ
    handler.setFormatter(_ColorFormatter(fmt) if use_color else logging.Formatter(fmt))
    logger.addHandler(handler)
    logger.setLevel(level)


##################################################################################
# Input and output
##################################################################################


def _load(path: str):
    if path == "-":
        text = sys.stdin.read()
        head = text.lstrip().split(None, 1)
        if head and head[0].endswith("OFF"):
            return import_off(text)
        return parse_rps(text)
    return read_surface(path)


def _write(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text)
        logger.info("Wrote %s", output)
    else:
        sys.stdout.write(text)


##################################################################################
# Subcommands
##################################################################################


def _cmd_validate(args) -> int:
    S, R = _load(args.file)
    proper = validate_proper(S)
    realization = validate_realization(S, R)
    for name, report in (("proper", proper), ("realization", realization)):
        print(f"{name}: {'ok' if report.ok else f'{len(report)} violation(s)'}")
        for violation in report.violations:
            print(f"  {violation}")
    return EXIT_OK if proper.ok and realization.ok else EXIT_FAILED


def _cmd_info(args) -> int:
    S, _ = _load(args.file)
    gb = gauss_bonnet_check(S)
    histogram = " ".join(f"{k}:{n}" for k, n in sorted(S.degree_histogram().items()))
    print(f"vertices: {S.n_vertices}")
    print(f"edges: {S.n_edges}")
    print(f"faces: {S.n_faces}")
    print(f"euler_characteristic: {euler_characteristic(S)}")
    print(f"genus: {genus(S)}")
    print(f"degrees: {histogram}")
    print(f"gauss_bonnet: {'pass' if gb.equal else 'fail'} (total {gb.total}, expected {gb.target})")
    return EXIT_OK if gb.equal else EXIT_FAILED


def _cmd_curvature(args) -> int:
    S, _ = _load(args.file)
    if args.per_vertex:
        for v in range(S.n_vertices):
            print(f"vertex {v}: {vertex_curvature(S, v).describe()}")
    else:
        for f in range(S.n_faces):
            print(f"face {f}: {facial_curvature(S, f).describe()}")
    print(f"total: {gauss_bonnet_check(S).total.describe()}")
    return EXIT_OK


def _cmd_bands(args) -> int:
    S, R = _load(args.file)
    bands = all_bands(S, R)
    print(f"bands: {len(bands)}")
    for i, band in enumerate(bands):
        print(f"band {i}: {' '.join(str(f) for f in band.faces)}")
    return EXIT_OK


def _cmd_audit(args) -> int:
    S, _ = _load(args.file)
    report = curvature_audit_5n(S)
    counts = report.counts()
    print(f"genus: {report.genus}")
    print(" ".join(f"{label}: {counts[label]}" for label in counts))
    for region in report.regions:
        bound = "-" if region.bound is None else str(region.bound)
        print(f"region {region.face}: {region.total.describe()} bound {bound}")
    for violation in report.violations.violations:
        print(f"violation: {violation}")
    claim = report.genus_zero_contradiction
    if claim is not None:
        print(f"genus_zero_contradiction: {'yes' if claim else 'no'}")
    return EXIT_OK if report.ok else EXIT_FAILED


def _cmd_decompose(args) -> int:
    S, R = _load(args.file)
    cert = decompose(S, R, args.family)
    text = dump_certificate(cert)
    if args.output:
        _write(text, args.output)
        print(f"bricks: {len(cert)}")
        for kind, n in cert.kinds().items():
            print(f"  {kind}: {n}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    S, R = _load(args.file)
    cert = load_certificate(Path(args.cert).read_text())
    report = verify_certificate(cert, S, R)
    if report.ok:
        print(f"pass: {len(cert)} bricks, {report.cancelled} facet pair(s) cancelled")
        return EXIT_OK
    print(f"fail: {report.witness}")
    return EXIT_FAILED


GENERATED: dict[str, Callable] = {
    "box": lambda args: box(),
    "slab": lambda args: slab(),
    "great-dodecahedron": lambda args: great_dodecahedron(),
    "dodecahedral-torus": lambda args: dodecahedral_torus(args.n or 8),
}


def _cmd_gen(args) -> int:
    name = args.name
    if name in COUNTEREXAMPLES:
        pairing = load_pairing(Path(args.pairing).read_text()) if args.pairing else None
        S, R = counterexample(name, pairing)
    elif name in GENERATED:
        S, R = GENERATED[name](args)
    else:
        S, R = make_solid(SolidKind(name))
    _write(serialize_rps(S, R), args.output)
    return EXIT_OK


def _cmd_export_obj(args) -> int:
    S, R = _load(args.file)
    _write(export_obj(S, R), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rpsurf", description="Regular polygon surfaces")
    parser.add_argument("--eps", type=float, help="coordinate tolerance (geometry.eps_coord)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output (repeatable)")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, func: Callable, help: str, file: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        if file:
            p.add_argument("file", help="RPS or OFF file, '-' for standard input")
        p.set_defaults(func=func)
        return p

    command("validate", _cmd_validate, "check the surface and its realization")
    command("info", _cmd_info, "counts, genus, degree histogram and Gauss-Bonnet")
    p = command("curvature", _cmd_curvature, "exact curvature per face or vertex")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--per-face", action="store_true", help="facial curvature (default)")
    group.add_argument("--per-vertex", action="store_true", help="vertex curvature")
    command("bands", _cmd_bands, "list the bands of a (4,8)-surface")
    command("audit", _cmd_audit, "curvature audit of a (5,7,8,9,10)-surface")
    p = command("decompose", _cmd_decompose, "decompose into bricks and write a certificate")
    p.add_argument("--family", choices=[f.value for f in Family], default=Family.AUTO.value)
    p.add_argument("-o", "--output", help="certificate file (standard output if omitted)")
    p = command("verify", _cmd_verify, "check a certificate against a surface")
    p.add_argument("--cert", required=True, help="certificate file")
    names = sorted([k.value for k in SolidKind] + list(GENERATED) + list(COUNTEREXAMPLES))
    p = command("gen", _cmd_gen, "write a named surface", file=False)
    p.add_argument("name", choices=names)
    p.add_argument("--n", type=int, help="ring length of the dodecahedral torus")
    p.add_argument("--pairing", help="YAML tube pairing for a counterexample")
    p.add_argument("-o", "--output", help="output file (standard output if omitted)")
    p = command("export-obj", _cmd_export_obj, "write a Wavefront OBJ file")
    p.add_argument("-o", "--output", help="output file (standard output if omitted)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code."""
    load_dotenv()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"rpsurf: {e}", file=sys.stderr)
        return EXIT_USAGE
    _configure_logging(args.verbose, args.quiet)
    if args.eps is not None:
        Settings().set(Labels.EPS_COORD, args.eps)
    try:
        return args.func(args)
    except (FormatError, FileNotFoundError, UsageError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except (DecompositionError, SurgeryError, BandError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_DECOMPOSITION
    except RpsError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_FAILED
