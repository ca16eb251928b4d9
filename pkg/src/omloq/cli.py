"""Command-line front end.

Subcommands: check, sasaki, linmaps, tmonoid, toda, equiv, witness.
Exit codes: 0 pass, 1 axiom or property failure, 2 input error,
3 resource cap exceeded.  Reports are deterministic for a fixed seed; the
OMLOQ_SEED environment variable overrides the configured seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import hilbert3
from .dynalg import (
    DEFAULT_SEED,
    EXHAUSTIVE_THRESHOLD,
    DynAlgebra,
    SamplePolicy,
    verify_ida,
    verify_module,
    verify_toda,
)
from .equivalence import SuiteFailure, round_trip_report
from .errors import LatticeParseError, SizeExceeded
from .linmap import (
    DEFAULT_LIN_CAP,
    enumerate_lin,
    sasaki_projection_lattice,
    verify_foulis,
    verify_left_module_on_M,
)
from .oml import (
    Oml,
    OrthoIso,
    check_ortho_iso,
    load_lattice,
    sasaki_hook,
    sasaki_projection,
    validate_oml,
)
from .report import ValidationReport
from .testmonoid import DEFAULT_MONOID_CAP, export_cayley_csv, generate_T

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_CAP = 3


@dataclass
class RunConfig:
    command: str
    seed: int = DEFAULT_SEED
    lin_cap: int = DEFAULT_LIN_CAP
    monoid_cap: int = DEFAULT_MONOID_CAP
    exhaustive_threshold: int = EXHAUSTIVE_THRESHOLD
    samples: int = 200
    json_output: bool = False
    verbose: bool = False

    def policy(self) -> SamplePolicy:
        return SamplePolicy(
            seed=self.seed,
            n_random=self.samples,
            exhaustive_threshold=self.exhaustive_threshold,
        )

    def to_dict(self) -> dict:
        return {
            "lin_cap": self.lin_cap,
            "monoid_cap": self.monoid_cap,
            "exhaustive_threshold": self.exhaustive_threshold,
            "samples": self.samples,
        }


class _Outcome:
    def __init__(self, exit_code: int, data: dict, reports: list[ValidationReport], text: list[str]):
        self.exit_code = exit_code
        self.data = data
        self.reports = reports
        self.text = text


def _verdict(exit_code: int) -> str:
    return {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_INPUT: "input-error", EXIT_CAP: "cap-exceeded"}[
        exit_code
    ]


def _flatten(reports: list[ValidationReport]) -> list[dict]:
    out = []
    for rep in reports:
        for c in rep.checks:
            d = c.to_dict()
            if rep.title:
                d["suite"] = rep.title
            out.append(d)
    return out


def _parse_morphism_file(path: str, l: Oml) -> OrthoIso:
    tbl = [-1] * l.n
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if tokens[0] != "iso" or len(tokens) != 3:
                raise LatticeParseError(f"expected 'iso <src> <dst>', got {line!r}", lineno)
            try:
                src = l.index(tokens[1])
                dst = l.index(tokens[2])
            except KeyError as e:
                raise LatticeParseError(str(e), lineno) from None
            if tbl[src] != -1:
                raise LatticeParseError(f"duplicate mapping for {tokens[1]!r}", lineno)
            tbl[src] = dst
    missing = [l.names[i] for i in range(l.n) if tbl[i] == -1]
    if missing:
        raise LatticeParseError(f"morphism does not cover elements: {missing}")
    if sorted(tbl) != list(range(l.n)):
        raise LatticeParseError("morphism is not a bijection")
    name = os.path.splitext(os.path.basename(path))[0]
    return OrthoIso(l, l, tuple(tbl), name=name)


# ---------------------------------------------------------------------------
# commands


def cmd_check(args, cfg: RunConfig) -> _Outcome:
    l = load_lattice(args.file)
    rep = validate_oml(l)
    code = EXIT_PASS if rep.ok else EXIT_FAIL
    data = {"lattice": l.name, "elements": list(l.names)}
    return _Outcome(code, data, [rep], rep.lines())


def cmd_sasaki(args, cfg: RunConfig) -> _Outcome:
    l = load_lattice(args.file)
    try:
        m = l.index(args.m)
        x = l.index(args.n)
    except KeyError as e:
        raise LatticeParseError(str(e)) from None
    pi = sasaki_projection(l, m, x)
    hook = sasaki_hook(l, m, x)
    data = {"lattice": l.name, "m": args.m, "n": args.n, "pi": l.names[pi], "hook": l.names[hook]}
    return _Outcome(EXIT_PASS, data, [], [f"pi={l.names[pi]} hook={l.names[hook]}"])


def cmd_linmaps(args, cfg: RunConfig) -> _Outcome:
    l = load_lattice(args.file)
    rep0 = validate_oml(l)
    if not rep0.ok:
        return _Outcome(EXIT_FAIL, {"lattice": l.name}, [rep0], rep0.lines())
    maps = enumerate_lin(l, cap=cfg.lin_cap)
    foulis = verify_foulis(l, maps)
    module = verify_left_module_on_M(l, maps)
    _, _, extraction = sasaki_projection_lattice(l, maps)
    reports = [foulis, module, extraction]
    code = EXIT_PASS if all(r.ok for r in reports) else EXIT_FAIL
    data = {"lattice": l.name, "carrier_size": len(maps)}
    text = [f"carrier: {len(maps)} maps"]
    for r in reports:
        text.extend(r.lines())
    return _Outcome(code, data, reports, text)


def cmd_tmonoid(args, cfg: RunConfig) -> _Outcome:
    l = load_lattice(args.file)
    rep0 = validate_oml(l)
    if not rep0.ok:
        return _Outcome(EXIT_FAIL, {"lattice": l.name}, [rep0], rep0.lines())
    monoid = generate_T(l, cap=cfg.monoid_cap)
    data = {
        "lattice": l.name,
        "size": monoid.size,
        "closure_complete": monoid.complete,
        "generators": l.n,
        "max_witness_length": max(len(e.witness) for e in monoid.elems),
    }
    text = [f"monoid size {monoid.size} over {l.n} generators (closure complete)"]
    if args.cayley_csv:
        export_cayley_csv(monoid, args.cayley_csv)
        data["cayley_csv"] = args.cayley_csv
        text.append(f"cayley table written to {args.cayley_csv}")
    return _Outcome(EXIT_PASS, data, [], text)


def cmd_toda(args, cfg: RunConfig) -> _Outcome:
    l = load_lattice(args.file)
    rep0 = validate_oml(l)
    if not rep0.ok:
        return _Outcome(EXIT_FAIL, {"lattice": l.name}, [rep0], rep0.lines())
    policy = cfg.policy()
    monoid = generate_T(l, cap=cfg.monoid_cap)
    alg = DynAlgebra(monoid)
    _, _, tl_rep = alg.test_lattice()
    reports = [
        tl_rep,
        verify_ida(alg, policy),
        verify_toda(alg, policy),
        verify_module(alg, policy),
    ]
    code = EXIT_PASS if all(r.ok for r in reports) else EXIT_FAIL
    data = {"lattice": l.name, "monoid_size": monoid.size}
    text = []
    for r in reports:
        text.extend(r.lines())
    return _Outcome(code, data, reports, text)


def cmd_equiv(args, cfg: RunConfig) -> _Outcome:
    l = load_lattice(args.file)
    rep0 = validate_oml(l)
    if not rep0.ok:
        return _Outcome(EXIT_FAIL, {"lattice": l.name}, [rep0], rep0.lines())
    morphisms = []
    for path in args.morphisms:
        iso = _parse_morphism_file(path, l)
        iso_rep = check_ortho_iso(iso)
        if not iso_rep.ok:
            raise LatticeParseError(
                f"{path}: not an ortholattice isomorphism "
                f"({'; '.join(c.name for c in iso_rep.failures)})"
            )
        morphisms.append(iso)
    rep = round_trip_report(l, morphisms, cfg.policy(), monoid_cap=cfg.monoid_cap)
    code = EXIT_PASS if rep.ok else EXIT_FAIL
    data = {"lattice": l.name, "morphisms": [m.name for m in morphisms]}
    return _Outcome(code, data, [rep], rep.lines())


def cmd_witness(args, cfg: RunConfig) -> _Outcome:
    def parse_sub(text):
        if text is None:
            return None
        vectors = [hilbert3.parse_vector(part) for part in text.split(";") if part.strip()]
        return hilbert3.span(*vectors)

    try:
        u = parse_sub(args.u)
        v = parse_sub(args.v)
        x = parse_sub(args.x)
    except ValueError as e:
        raise LatticeParseError(str(e)) from None
    rep = hilbert3.witness_report(u, v, x)
    vr = ValidationReport(title="hilbert witness")
    for name, value in rep.facts():
        vr.add(name, value)
    code = EXIT_PASS if rep.ok else EXIT_FAIL
    text = vr.lines()
    text.append(f"pi_u(x) = {rep.pi_u_x}")
    text.append(f"pi_v(x) = {rep.pi_v_x}")
    if not rep.monotone_violation and rep.u_below_v:
        text.append("non-witness input: the projections are nested (monotone case)")
    return _Outcome(code, rep.to_dict(), [vr], text)


# ---------------------------------------------------------------------------
# wiring


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # global flags are accepted both before and after the subcommand; the
    # per-subcommand copies default to SUPPRESS so they never clobber values
    # given up front
    d = (lambda _: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", help="emit a JSON report",
                        **({"default": argparse.SUPPRESS} if suppress else {}))
    parser.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help="sampling seed")
    parser.add_argument("--lin-cap", type=int, default=d(DEFAULT_LIN_CAP))
    parser.add_argument("--monoid-cap", type=int, default=d(DEFAULT_MONOID_CAP))
    parser.add_argument("--exhaustive-threshold", type=int, default=d(EXHAUSTIVE_THRESHOLD))
    parser.add_argument("--samples", type=int, default=d(200), help="random subsets per suite")
    parser.add_argument("-v", "--verbose", action="store_true",
                        **({"default": argparse.SUPPRESS} if suppress else {}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omloq",
        description="verify orthomodular lattices and their dynamic algebras",
    )
    _add_global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate the ortholattice axioms of a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sasaki", parents=[common], help="print the projection and hook of two elements")
    p.add_argument("file")
    p.add_argument("m")
    p.add_argument("n")
    p.set_defaults(func=cmd_sasaki)

    p = sub.add_parser("linmaps", parents=[common], help="enumerate the linear maps and verify the quantale axioms")
    p.add_argument("file")
    p.set_defaults(func=cmd_linmaps)

    p = sub.add_parser("tmonoid", parents=[common], help="generate the projection monoid")
    p.add_argument("file")
    p.add_argument("--cayley-csv", metavar="PATH", help="export the product table as CSV")
    p.set_defaults(func=cmd_tmonoid)

    p = sub.add_parser("toda", parents=[common], help="run the dynamic-algebra axiom suites")
    p.add_argument("file")
    p.set_defaults(func=cmd_toda)

    p = sub.add_parser("equiv", parents=[common], help="run the full equivalence round trip")
    p.add_argument("file")
    p.add_argument("morphisms", nargs="*", help="automorphism files (iso <src> <dst> lines)")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("witness", parents=[common], help="reproduce the rational 3-space non-monotonicity witness")
    p.add_argument("--u", help="semicolon-separated integer vectors spanning u")
    p.add_argument("--v", help="vectors spanning v")
    p.add_argument("--x", help="vectors spanning x")
    p.set_defaults(func=cmd_witness)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    seed = args.seed
    env_seed = os.environ.get("OMLOQ_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            print(f"error: OMLOQ_SEED must be an integer, got {env_seed!r}", file=sys.stderr)
            return EXIT_INPUT

    cfg = RunConfig(
        command=args.command,
        seed=seed,
        lin_cap=args.lin_cap,
        monoid_cap=args.monoid_cap,
        exhaustive_threshold=args.exhaustive_threshold,
        samples=args.samples,
        json_output=args.json,
        verbose=args.verbose,
    )

    try:
        outcome = args.func(args, cfg)
    except (LatticeParseError, OSError, ValueError) as e:
        outcome = _Outcome(EXIT_INPUT, {"error": str(e)}, [], [f"error: {e}"])
    except SizeExceeded as e:
        outcome = _Outcome(EXIT_CAP, {"error": str(e)}, [], [f"cap exceeded: {e}"])
    except SuiteFailure as e:
        outcome = _Outcome(EXIT_FAIL, {"error": str(e)}, [e.report], [f"suite failure: {e}"])

    if cfg.json_output:
        envelope = {
            "schema": "omloq.report/1",
            "command": cfg.command,
            "seed": cfg.seed,
            "config": cfg.to_dict(),
            "verdict": _verdict(outcome.exit_code),
            "exit_code": outcome.exit_code,
            "data": outcome.data,
            "checks": _flatten(outcome.reports),
        }
        print(json.dumps(envelope, indent=2))
    else:
        if cfg.verbose:
            for key in sorted(outcome.data):
                print(f"# {key}: {outcome.data[key]}")
        for line in outcome.text:
            print(line)
        print(f"verdict: {_verdict(outcome.exit_code)}")
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
