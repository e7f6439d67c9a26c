"""Command-line front end: generation, computation, verification and audit.

Exit codes are a stable contract: 0 success, 1 usage or I/O error,
2 generation failure, 3 vanishing denominator, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .amplitudes import PathMismatch, PartialAmplitudes, basis_orderings, full_amplitude, tensor_amplitudes
from .colour import StructureConstants, abelian, builtin_su2, builtin_su3, random_algebra, sc_from_json, validate_jacobi
from .currents import MODES, THEORIES, CurrentTable
from .kinematics import (
    DegenerateKinematics,
    GenerationError,
    config_from_json,
    config_to_json,
    random_kinematics,
    validate,
)
from .scalars import EXACT, FLOAT, format_scalar
from .verify import SUITES, run_suites
from .words import word_from_str, word_to_str

EXIT_OK, EXIT_USAGE, EXIT_GENERATION, EXIT_DEGENERATE, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for generation failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# helpers ----------------------------------------------------------------------

def to_jsonable(value):
    """Nested tuples of scalars into lists of canonical JSON scalars."""
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if value is None or isinstance(value, (bool, int, str)):
        return value
    return format_scalar(value)


def _dump(obj, path: Optional[str]) -> None:
    text = json.dumps(to_jsonable(obj), indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def resolve_field(flag: Optional[str]):
    mode = os.environ.get("BGDC_MODE") or flag or "exact"
    if mode not in ("exact", "float"):
        raise UsageError(f"unknown mode {mode!r} (expected exact or float)")
    return EXACT if mode == "exact" else FLOAT


def _load_config(path: str, field):
    data = _load_json(path)
    try:
        return config_from_json(data, field)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: malformed configuration ({exc})") from None


def load_algebra(spec: str, field) -> StructureConstants:
    """``su2``, ``su3``, ``u1:N``, ``random:SEED`` or a path to a JSON file."""
    try:
        if spec == "su2":
            sc = builtin_su2(field)
        elif spec == "su3":
            sc = builtin_su3()
        elif spec.startswith("u1:"):
            sc = abelian(int(spec[3:]), field)
        elif spec.startswith("random:"):
            sc = random_algebra(int(spec[7:]))
        else:
            sc = sc_from_json(_load_json(spec), field)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad colour algebra {spec!r}: {exc}") from None
    if not field.exact and sc.field.exact:
        sc = sc.to_float()
    if not sc.field.exact and field.exact:
        raise UsageError(f"colour algebra {sc.name} has irrational constants; use float mode")
    rep = validate_jacobi(sc)
    if not rep.passed:
        raise UsageError(f"colour algebra {sc.name} is not a Lie algebra: {rep.failures[0]}")
    return sc


def _parse_word(text: str):
    try:
        return word_from_str(text)
    except ValueError as exc:
        raise UsageError(f"bad word {text!r}: {exc}") from None


# commands ---------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.n < 3:
        raise UsageError("--n must be at least 3")
    try:
        cfg = random_kinematics(
            args.n,
            args.seed,
            conserve_momentum=not args.no_conserve,
            independent_eps_bar=args.independent_eps_bar,
            complex_polarizations=args.complex_polarizations,
            colour_dim=args.colour_dim,
        )
    except GenerationError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    rep = validate(cfg)
    if not rep.passed:
        print(f"generation produced an invalid configuration: {rep.failures}", file=sys.stderr)
        return EXIT_GENERATION
    _dump(config_to_json(cfg), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    field = resolve_field(args.mode)
    cfg, omegas = _load_config(args.input, field)
    rep = validate(cfg, omegas)
    _dump(rep.to_json(), None)
    if rep.passed:
        return EXIT_OK
    return EXIT_DEGENERATE if all(f.startswith("denominator") for f in rep.failures) else EXIT_VERIFY


def cmd_currents(args) -> int:
    field = resolve_field(args.mode_field)
    cfg, _ = _load_config(args.input, field)
    P = _parse_word(args.word)
    theory = args.theory
    sc = load_algebra(args.algebra, field) if theory in ("cd", "zc") else None
    sc_bar = load_algebra(args.algebra_bar, field) if theory == "zc" and args.algebra_bar else None
    try:
        table = CurrentTable(cfg, theory, args.mode, sc, sc_bar)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if theory == "double":
        if not args.word2:
            raise UsageError("--theory double needs --word2")
        Q = _parse_word(args.word2)
        table.get(P, Q)
        keys = list(table.entries) if args.all else [(P, Q)]
        out = {f"{word_to_str(a)}|{word_to_str(b)}": table.get(a, b) for a, b in keys}
    else:
        table.get(P)
        keys = list(table.entries) if args.all else [P]
        keys.sort(key=lambda w: (len(w), w))
        out = {word_to_str(w): table.get(w) for w in keys}
    _dump(out, args.output)
    return EXIT_OK


def cmd_amplitude(args) -> int:
    field = resolve_field(args.mode_field)
    cfg, _ = _load_config(args.input, field)
    if not cfg.conserve_momentum:
        raise UsageError("amplitudes need a momentum-conserving configuration")
    sc = load_algebra(args.algebra, field)
    n = cfg.n
    amps = PartialAmplitudes(cfg)
    orderings = {word_to_str((1,) + P + (n,)): amps((1,) + P) for P in basis_orderings(n)}
    try:
        full = full_amplitude(cfg, sc)
        tensor = tensor_amplitudes(cfg)
    except PathMismatch as exc:
        print(f"independent paths disagree: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    _dump({"n": n, "orderings": orderings, "full": full, "tensor": tensor}, args.output)
    return EXIT_OK


def _suite_names(values: List[str]) -> List[str]:
    names: List[str] = []
    for v in values or ["all"]:
        for name in v.split(","):
            name = name.strip()
            if name == "all":
                names.extend(SUITES)
            elif name in SUITES:
                names.append(name)
            elif name:
                raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return list(dict.fromkeys(names))


def audit_table(details: dict) -> List[str]:
    lines = ["n  sigma  (-1)^n"]
    for n, s in sorted(details.get("sigma", {}).items()):
        lines.append(f"{n}  {s:+d}     {details['alternating_sign'][n]:+d}")
    lines.append(f"sigma on the three-particle fixture: {details.get('sigma_k3'):+d}")
    for theory, row in details.get("rho", {}).items():
        note = " (deviates from printed)" if row["deviates"] else ""
        lines.append(f"rho_{theory} = {row['measured']} printed {row['printed']}{note}")
    return lines


def cmd_verify(args) -> int:
    field = resolve_field(args.mode)
    names = _suite_names(args.suite)
    if args.nmax < 3:
        raise UsageError("--nmax must be at least 3")
    if args.seeds < 1:
        raise UsageError("--seeds must be positive")
    reports = run_suites(names, args.nmax, range(args.seeds), field)
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status} {rep.name}: {rep.checks} checks in {rep.details['wall_time_s']} s", file=sys.stderr)
        for msg in rep.failures[:5]:
            print(f"  {msg}", file=sys.stderr)
        if rep.name == "audit":
            for line in audit_table(rep.details):
                print(f"  {line}", file=sys.stderr)
    passed = all(r.passed for r in reports)
    _dump({"passed": passed, "suites": [r.to_json() for r in reports]}, args.output)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_audit(args) -> int:
    args.suite = ["audit"]
    return cmd_verify(args)


# parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bgdc", description="Berends-Giele currents, double copy and KLT checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a random exact kinematic configuration")
    g.add_argument("--n", type=int, required=True, help="number of particles (>= 3)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", help="output path (default stdout)")
    g.add_argument("--no-conserve", action="store_true", help="do not impose momentum conservation")
    g.add_argument("--independent-eps-bar", action="store_true", help="draw a separate barred polarization")
    g.add_argument("--complex-polarizations", action="store_true")
    g.add_argument("--colour-dim", type=int, default=3, help="range of random colour labels")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="check a configuration file")
    v.add_argument("-i", "--input", required=True)
    v.add_argument("--mode", choices=("exact", "float"))
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("compute", help="currents or amplitudes for a configuration")
    csub = c.add_subparsers(dest="what", required=True, parser_class=_Parser)

    cu = csub.add_parser("currents", help="current table as JSON {word: value}")
    cu.add_argument("-i", "--input", required=True)
    cu.add_argument("--theory", choices=THEORIES + ("double",), default="cs")
    cu.add_argument("--word", required=True, help="word such as 123, or 10,11,12 for letters above 9")
    cu.add_argument("--word2", help="second word for --theory double")
    cu.add_argument("--mode", choices=MODES, default="direct", help="recursion or tree-replacement form")
    cu.add_argument("--field", dest="mode_field", choices=("exact", "float"), help="arithmetic (default exact)")
    cu.add_argument("--algebra", default="su2", help="su2, su3, u1:N, random:SEED or a JSON file")
    cu.add_argument("--algebra-bar", help="second colour algebra for zc (default: same as --algebra)")
    cu.add_argument("--all", action="store_true", help="emit every sub-word entry that was computed")
    cu.add_argument("-o", "--output")
    cu.set_defaults(func=cmd_currents)

    am = csub.add_parser("amplitude", help="partial, full and tensor amplitudes")
    am.add_argument("-i", "--input", required=True)
    am.add_argument("--field", dest="mode_field", choices=("exact", "float"))
    am.add_argument("--algebra", default="su2")
    am.add_argument("-o", "--output")
    am.set_defaults(func=cmd_amplitude)

    for name, func, help_ in (
        ("verify", cmd_verify, "run verification suites"),
        ("audit", cmd_audit, "measure the global sign and per-vertex constants"),
    ):
        p = sub.add_parser(name, help=help_)
        if name == "verify":
            p.add_argument("--suite", action="append", help=f"comma list of {', '.join(SUITES)} or all")
        p.add_argument("--nmax", type=int, default=5)
        p.add_argument("--seeds", type=int, default=3, help="number of random configurations (seeds 0..N-1)")
        p.add_argument("--mode", choices=("exact", "float"))
        p.add_argument("-o", "--output", help="JSON report path (default stdout)")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bgdc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateKinematics as exc:
        print(f"bgdc: degenerate kinematics: {exc} (sub-word {word_to_str(exc.word)})", file=sys.stderr)
        return EXIT_DEGENERATE
    except (KeyError, ValueError) as exc:
        print(f"bgdc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
