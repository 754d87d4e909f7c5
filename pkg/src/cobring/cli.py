"""Command-line driver: ``verify``, ``table`` and ``fracture-demo``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .report import Status

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _truncation(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--trunc expects an integer, got {text!r}") from None
    if n < 3:
        raise argparse.ArgumentTypeError(f"--trunc must be at least 3, got {n}")
    return n


def _kmax(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--kmax expects an integer, got {text!r}") from None
    if k < 2:
        raise argparse.ArgumentTypeError(f"--kmax must be at least 2, got {k}")
    return k


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cobring", description="Exact desk-scale checks for the ring R and its maps.")
    p.add_argument("--version", action="version", version=f"cobring {__version__}")
    sub = p.add_subparsers(dest="command", metavar="{verify,table,fracture-demo}")
    sub.required = True

    v = sub.add_parser("verify", help="run the certificate checks")
    v.add_argument("--trunc", type=_truncation, default=5, metavar="N")
    v.add_argument("--kmax", type=_kmax, default=5, metavar="K")
    v.add_argument("--check", action="append", default=[], metavar="ID",
                   help="run only this check (repeatable)")
    v.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    v.add_argument("--format", choices=("human", "json"), default="human")
    v.add_argument("--canonical", action="store_true", help="omit timing fields")
    v.add_argument("--mutate", metavar="MAP:GEN[:DELTA]",
                   help="perturb one generator image (negative control), e.g. phi:t1")
    v.add_argument("--list", action="store_true", help="list check ids and exit")

    t = sub.add_parser("table", help="print coefficient tables and generator images")
    t.add_argument("--trunc", type=_truncation, default=5, metavar="N")
    what = t.add_mutually_exclusive_group(required=True)
    what.add_argument("--fgl", action="store_true", help="a(i,j) for i+j <= N+1")
    what.add_argument("--two-series", action="store_true", help="coefficients of [2](e)")
    what.add_argument("--image", metavar="GEN", help="image of a generator, e.g. t1 or s(1,2)")
    t.add_argument("--map", choices=("phi", "theta", "epsilon", "pi"), default="phi")
    t.add_argument("--k", type=int, default=2, help="k for --map pi")

    f = sub.add_parser("fracture-demo", help="run the fracture-square suite on small rings")
    f.add_argument("--deg-cap", type=int, default=4)
    f.add_argument("--coeff-cap", type=int, default=4)
    f.add_argument("--precision", type=int, default=8)
    return p


# --- report serialisation ---------------------------------------------------

def report_document(config, reports, canonical: bool = False) -> dict:
    checks = []
    for r in reports:
        entry = {"id": r.id, "paper_anchor": r.anchor, "status": str(r.status)}
        if r.witness is not None:
            entry["witness"] = r.witness
        if not canonical:
            entry["elapsed_ms"] = r.elapsed_ms
        checks.append(entry)
    return {
        "tool_version": __version__,
        "config": {"N": config.N, "k_max": config.k_max, "filter": list(config.checks)},
        "checks": checks,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def format_human(config, reports, canonical: bool = False) -> str:
    lines = [f"cobring {__version__}  N={config.N}  k_max={config.k_max}"]
    width = max((len(r.id) for r in reports), default=0)
    for r in reports:
        timing = "" if canonical else f"  {r.elapsed_ms:9.1f} ms"
        line = f"{str(r.status).upper():12s} {r.id:<{width}}{timing}"
        if r.witness:
            line += f"  {r.witness}"
        lines.append(line)
    counts = {s: sum(r.status is s for r in reports) for s in Status}
    lines.append(f"{counts[Status.PASS]} pass, {counts[Status.FAIL]} fail, "
                 f"{counts[Status.INCONCLUSIVE]} inconclusive")
    return "\n".join(lines) + "\n"


def exit_code(reports) -> int:
    if any(r.status is Status.FAIL for r in reports):
        return EXIT_FAIL
    if any(r.status is Status.INCONCLUSIVE for r in reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands --------------------------------------------------------------

def _parse_mutation(parser, text: str):
    from .maps import MapSuite
    from .rings import parse_generator

    parts = text.split(":")
    if len(parts) not in (2, 3):
        parser.error(f"--mutate expects MAP:GEN[:DELTA], got {text!r}")
    name, gen = parts[0], parts[1]
    if name not in MapSuite.MAPS and name != "pi":
        parser.error(f"--mutate: unknown map {name!r}")
    try:
        word = parse_generator(gen)
        delta = int(parts[2]) if len(parts) == 3 else 1
    except ValueError as exc:
        parser.error(f"--mutate: {exc}")
    return (name, word, delta)


def cmd_verify(args, parser) -> int:
    from .certificate import REGISTRY, CertificateConfig, run_certificate

    if args.list:
        for cid, spec in REGISTRY.items():
            print(f"{cid}: {spec.anchor}")
        return EXIT_OK
    unknown = [c for c in args.check if c not in REGISTRY]
    if unknown:
        parser.error(f"--check: unknown check id {', '.join(map(repr, unknown))}")
    mutation = _parse_mutation(parser, args.mutate) if args.mutate else None
    config = CertificateConfig(N=args.trunc, k_max=args.kmax, checks=tuple(args.check))
    reports = run_certificate(config, mutation=mutation)
    if args.format == "json":
        text = dumps(report_document(config, reports, args.canonical))
    else:
        text = format_human(config, reports, args.canonical)
    _emit(text, args.out)
    return exit_code(reports)


def cmd_table(args, parser) -> int:
    from .exactpoly import Truncation
    from .lazard import fgl, two_series
    from .maps import map_suite
    from .rings import parse_generator

    tr = Truncation(args.trunc)
    lines = []
    if args.fgl:
        law = fgl(tr)
        for n in range(tr.N + 2):
            for i in range(n + 1):
                lines.append(f"a({i},{n - i}) = {law.a(i, n - i)}")
    elif args.two_series:
        series = two_series(tr)
        for n in range(tr.N + 2):
            lines.append(f"[2](e)[e^{n}] = {series.coeff(n)}")
    else:
        try:
            word = parse_generator(args.image)
        except ValueError as exc:
            parser.error(f"--image: {exc}")
        suite = map_suite(tr)
        if args.map == "pi":
            if not 2 <= args.k <= tr.N:
                parser.error(f"--k must satisfy 2 <= k <= {tr.N}")
            assignment = suite.pi(args.k)
            label = f"pi_{args.k}"
        else:
            assignment = getattr(suite, args.map)
            label = args.map
        try:
            value = assignment.apply(word)
        except (IndexError, ValueError) as exc:
            parser.error(f"--image: {exc}")
        lines.append(f"{label}({args.image}) = {value}")
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def cmd_fracture_demo(args, parser) -> int:
    from .exactpoly import Truncation
    from .fracture import (
        desk_suite, kernel_probe, rhat_torsion_instance, round_trip, torsion_exponent,
    )

    ok = True
    for S, d, expected in desk_suite(args.deg_cap, args.coeff_cap):
        elements = S.elements()
        N = torsion_exponent(S, d, elements=elements)
        if not isinstance(N, int):
            print(f"{S.name:12s} d={d}: torsion {N}")
            ok = False
            continue
        problems = [p for s in elements for p in round_trip(S, d, N, s, args.precision)]
        probe = kernel_probe(S, d, args.precision, 6, elements)
        good = not problems and not probe and N == expected
        ok &= good
        print(f"{S.name:12s} d={d}: torsion exponent {N}, {len(elements)} elements, "
              f"round trip {'ok' if not problems else problems[0]}, "
              f"kernel {'empty' if not probe else probe}")
    agree, j = rhat_torsion_instance(Truncation(5))
    ok &= agree
    print(f"Rhat, u = 0, v = [2](e)/e: {'agree' if agree else 'disagree'} (j = {j})")
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    handler = {"verify": cmd_verify, "table": cmd_table, "fracture-demo": cmd_fracture_demo}
    return handler[args.command](args, sub)


if __name__ == "__main__":
    sys.exit(main())
