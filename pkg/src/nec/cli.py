"""Command-line front end: ``nec gen|analyze|construct|verify|random|simulate``.

Exit status is 0 on success, 1 when construction or decoding fails, and 2
on invalid input.  Tables go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, codec, codefile, generators, patterns, randomcode
from .construct import construct_code
from .errors import (Ambiguous, BadParams, CodeFormatError, FieldTooSmall, NecError,
                     Undecodable)
from .galois import Field
from .netgraph import dump_network, parse_network


class UsageError(Exception):
    pass


def parse_beta(text: str):
    """``2``, ``max`` or ``t1=2,t2=max``."""
    text = text.strip()
    if text == "max":
        return "max"
    if "=" not in text:
        try:
            return int(text)
        except ValueError:
            raise UsageError(f"bad --beta {text!r}") from None
    out = {}
    for item in text.split(","):
        sink, _, value = item.partition("=")
        if not sink or not value:
            raise UsageError(f"bad --beta item {item!r}")
        value = value.strip()
        try:
            out[sink.strip()] = "max" if value == "max" else int(value)
        except ValueError:
            raise UsageError(f"bad --beta value {value!r}") from None
    return out


def parse_field(text: str):
    if text == "auto":
        return "auto"
    try:
        return Field(int(text))
    except ValueError as exc:
        raise UsageError(f"bad --field {text!r}: {exc}") from None


def parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def parse_errors(text: str) -> dict[str, int]:
    out = {}
    for item in text.split(","):
        cid, _, value = item.partition("=")
        try:
            out[cid.strip()] = int(value)
        except ValueError:
            raise UsageError(f"bad --errors item {item!r}") from None
    return out


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_gen(args) -> int:
    net = generators.generate(args.kind, args.N, args.k)
    _emit(dump_network(net), args.output)
    return 0


def cmd_analyze(args) -> int:
    net = parse_network(_read(args.network))
    beta = parse_beta(args.beta)
    report = patterns.family_sizes(net, args.rate, beta)
    _emit(report.to_json() if args.json else report.to_text(), args.output)
    return 0


def cmd_construct(args) -> int:
    net = parse_network(_read(args.network))
    code = construct_code(net, args.rate, parse_beta(args.beta), parse_field(args.field),
                          check_invariants=args.check)
    _emit(codefile.dump_code(code), args.output)
    print(f"constructed code over F_{code.field.q}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    code = codefile.parse_code(_read(args.code))
    reports = analysis.code_report(code)
    text = analysis.reports_to_json(reports) if args.json else analysis.reports_to_text(reports)
    _emit(text, args.output)
    return 0


def cmd_random(args) -> int:
    net = parse_network(_read(args.network))
    field = parse_field(args.field)
    if field == "auto":
        raise UsageError("random coding needs an explicit --field")
    if args.recommend is not None:
        rec = randomcode.field_size_recommendation(net, args.rate, args.recommend)
        _emit(json.dumps(rec.to_dict(), indent=2), args.output)
        return 0
    cfg = randomcode.TrialConfig(net, args.rate, field, parse_beta(args.beta),
                                 args.trials, args.seed)
    rep = randomcode.estimate_failures(cfg)
    _emit(rep.to_json() if args.json else rep.to_text(), args.output)
    return 0


def cmd_simulate(args) -> int:
    code = codefile.parse_code(_read(args.code))
    X = parse_ints(args.message) if args.message else [0] * code.rate
    if args.errors and args.pattern:
        raise UsageError("give --errors or --pattern, not both")
    if args.errors:
        verdicts = codec.roundtrip(code, X, errors=parse_errors(args.errors))
    else:
        pattern = [p.strip() for p in args.pattern.split(",") if p.strip()] if args.pattern else []
        verdicts = codec.roundtrip(code, X, pattern, seed=args.seed)
    doc = {"message": X, "sinks": [v.to_dict() for v in verdicts]}
    _emit(json.dumps(doc, indent=2), args.output)
    return 0 if all(v.success for v in verdicts) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nec", description="Linear network error-correction codes.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit a network document")
    g.add_argument("kind", choices=["combination", "g1", "g2", "g3"])
    g.add_argument("--N", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="pattern-family sizes and field bound")
    a.add_argument("network")
    a.add_argument("--rate", type=int, required=True)
    a.add_argument("--beta", default="max")
    a.add_argument("--json", action="store_true")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("construct", help="deterministic code construction")
    c.add_argument("network")
    c.add_argument("--rate", type=int, required=True)
    c.add_argument("--beta", default="max")
    c.add_argument("--field", default="auto")
    c.add_argument("--check", action="store_true", help="verify cut invariants after each step")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="minimum distance and MDS verdict per sink")
    v.add_argument("code")
    v.add_argument("--json", action="store_true")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("random", help="random coding failure rates against the bounds")
    r.add_argument("network")
    r.add_argument("--rate", type=int, required=True)
    r.add_argument("--field", required=True)
    r.add_argument("--beta", default="max")
    r.add_argument("--trials", type=int, default=1000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--recommend", type=int, metavar="D",
                   help="print the field-size recommendation for degradation D instead")
    r.add_argument("--json", action="store_true")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_random)

    s = sub.add_parser("simulate", help="encode, inject errors, decode at every sink")
    s.add_argument("code")
    s.add_argument("--message")
    s.add_argument("--errors", help="channel=value,...")
    s.add_argument("--pattern", help="channel,channel,... with random nonzero values")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FieldTooSmall, Ambiguous, Undecodable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, BadParams, CodeFormatError, NecError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
