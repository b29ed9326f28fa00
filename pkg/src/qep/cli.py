"""Command line interface.

Exit codes: 0 success, 1 unsatisfiable, 2 parse error, 3 semantic input
error, 4 oracle mismatch, 5 the two readings diverge.  The environment
variable QEP_MAX_VARS overrides every enumeration cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .elimination import ThetaPair, equilibrium_policies
from .errors import (
    CapExceededError,
    NonConformingPolicyError,
    NonCrispError,
    ParseError,
    QepError,
    UndefinedAtomError,
)
from .figures import save_policy_figures
from .formula import QuantifiedTheory, parse_theory, variables
from .oracle import DEFAULT_ORACLE_CAP, brute_equilibrium_policies
from .policy import (
    DEFAULT_ENUM_CAP,
    Policy,
    compact,
    enumerate_policies,
    render,
    sort_policies,
    to_dot,
    to_json_dict,
)
from .qasp import DEFAULT_BINDER_CAP, SemanticsKind, accepted_policies, compare_semantics, sat_qasp
from .semantics import (
    DEFAULT_DOMAIN_CAP,
    EPSILON,
    Interp,
    equilibrium_models,
    eval_qg3,
    eval_theory,
    format_value,
)

EXIT_OK = 0
EXIT_UNSAT = 1
EXIT_PARSE = 2
EXIT_INPUT = 3
EXIT_ORACLE_MISMATCH = 4
EXIT_DIVERGENCE = 5


def _cap(default: int) -> int:
    raw = os.environ.get("QEP_MAX_VARS")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"QEP_MAX_VARS must be an integer, got {raw!r}") from None


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load(args: argparse.Namespace) -> QuantifiedTheory:
    # Passing --at supplies values for free atoms, so it implies --allow-free.
    allow_free = getattr(args, "allow_free", False) or getattr(args, "at", None) is not None
    return parse_theory(_read_source(args.source), allow_free=allow_free)


def _parse_at(text: str | None) -> Interp:
    if text is None:
        return EPSILON
    try:
        return Interp.parse(text)
    except ValueError as exc:
        raise ParseError(f"bad interpretation: {exc}") from None


def _interp_str(m: Interp) -> str:
    return str(m) or "(empty)"


def _print_policies(policies: list[Policy], fmt: str, extra: dict | None = None) -> None:
    if fmt == "json":
        payload = {"count": len(policies), "policies": [to_json_dict(p) for p in policies]}
        if extra:
            payload.update(extra)
        print(json.dumps(payload, indent=2))
    elif fmt == "dot":
        print(to_dot(policies))
    else:
        for i, pi in enumerate(policies, start=1):
            if i > 1:
                print()
            print(f"policy {i}:")
            print(render(pi, "text"))


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_eval(args: argparse.Namespace) -> int:
    theory = _load(args)
    m = _parse_at(args.at)
    lines: list[tuple[str, str]] = []
    if m.defined_on(variables(theory.matrix)):
        try:
            lines.append(("g2", format_value(eval_theory(m, theory.matrix, "classical"))))
        except NonCrispError:
            pass
        lines.append(("g3", format_value(eval_theory(m, theory.matrix, "g3"))))
    if theory.binder:
        free = theory.free_atoms()
        missing = free - m.domain
        if missing:
            names = ", ".join(str(a) for a in sorted(missing))
            raise UndefinedAtomError(f"free atoms need values (use --at): {names}")
        lines.append(("qg3", format_value(eval_qg3(m.restrict(free), theory.binder, theory.matrix))))
    if not lines:
        raise UndefinedAtomError("interpretation does not cover the matrix atoms (use --at)")
    if args.format == "json":
        print(json.dumps(dict(lines), indent=2))
    else:
        for key, value in lines:
            print(f"{key}: {value}")
    return EXIT_OK


def _cmd_models(args: argparse.Namespace) -> int:
    theory = _load(args)
    domain = variables(theory.matrix) | theory.binder.atoms()
    found = equilibrium_models(theory.matrix, domain, cap=_cap(DEFAULT_DOMAIN_CAP))
    ordered = sorted(found, key=str)
    if args.format == "json":
        print(json.dumps({"count": len(ordered), "models": [str(m) for m in ordered]}, indent=2))
    else:
        for m in ordered:
            print(_interp_str(m))
        if not ordered:
            print("UNSAT (no equilibrium model)")
    return EXIT_OK if ordered else EXIT_UNSAT


def _cmd_sat(args: argparse.Namespace) -> int:
    theory = _load(args)
    kind = SemanticsKind(args.semantics)
    ok = sat_qasp(theory, kind, cap=_cap(DEFAULT_BINDER_CAP))
    if args.format == "json":
        print(json.dumps({"semantics": kind.value, "satisfiable": ok}, indent=2))
    else:
        print("SAT" if ok else "UNSAT")
    return EXIT_OK if ok else EXIT_UNSAT


def _cmd_policies(args: argparse.Namespace) -> int:
    theory = _load(args)
    conditioning = _parse_at(args.at)
    extra: dict = {}
    if args.game:
        if args.oracle:
            raise ValueError("--oracle only applies to equilibrium policy extraction, not --game")
        kind = SemanticsKind(args.semantics)
        found = accepted_policies(theory, kind, cap=_cap(DEFAULT_BINDER_CAP))
        extra["semantics"] = kind.value
    else:
        trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
        pair: ThetaPair = equilibrium_policies(
            theory,
            conditioning,
            cap=_cap(DEFAULT_BINDER_CAP),
            prune=args.prune_hc,
            trace=trace,
        )
        found = pair.policies
        extra["noncrisp"] = [str(h) for h in sorted(pair.noncrisp, key=str)]
        if args.oracle:
            reference = brute_equilibrium_policies(
                theory.binder, theory.matrix, conditioning, cap=_cap(DEFAULT_ORACLE_CAP)
            )
            if reference.policies != found:
                only_fast = sort_policies(found - reference.policies)
                only_brute = sort_policies(reference.policies - found)
                print("oracle mismatch", file=sys.stderr)
                for pi in only_fast:
                    print(f"  elimination only: {compact(pi)}", file=sys.stderr)
                for pi in only_brute:
                    print(f"  oracle only: {compact(pi)}", file=sys.stderr)
                return EXIT_ORACLE_MISMATCH
    ordered = sort_policies(found)
    if args.figures and ordered:
        save_policy_figures(ordered, args.figures, titles=[compact(p) for p in ordered])
    if ordered:
        _print_policies(ordered, args.format, extra)
        return EXIT_OK
    if args.format == "text":
        print("UNSAT (no equilibrium policy)")
    else:
        _print_policies([], args.format, extra)
    return EXIT_UNSAT


def _cmd_oracle(args: argparse.Namespace) -> int:
    theory = _load(args)
    conditioning = _parse_at(args.at)
    result = brute_equilibrium_policies(
        theory.binder, theory.matrix, conditioning, cap=_cap(DEFAULT_ORACLE_CAP)
    )
    ordered = result.sorted_policies()
    if args.format == "json":
        payload = {
            "count": len(ordered),
            "policies": [to_json_dict(p) for p in ordered],
            "witness": [
                {
                    "policy": to_json_dict(p),
                    "models": sorted(str(m) for m in result.witness[p]),
                }
                for p in ordered
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for i, pi in enumerate(ordered, start=1):
            print(f"policy {i}: {compact(pi)}")
            for m in sorted(result.witness[pi], key=str):
                print(f"  model: {_interp_str(m)}")
        if not ordered:
            print("UNSAT (no equilibrium policy)")
    return EXIT_OK if ordered else EXIT_UNSAT


def _cmd_compare(args: argparse.Namespace) -> int:
    theory = _load(args)
    report = compare_semantics(theory, cap=_cap(DEFAULT_BINDER_CAP))
    if args.format == "json":
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        print(f"fandinno: {'SAT' if report.fandinno_sat else 'UNSAT'} "
              f"({len(report.fandinno_policies)} policies)")
        print(f"stephan: {'SAT' if report.stephan_sat else 'UNSAT'} "
              f"({len(report.stephan_policies)} policies)")
        for pi in sort_policies(report.only_stephan):
            print(f"only stephan: {compact(pi)}")
        for pi in sort_policies(report.only_fandinno):
            print(f"only fandinno: {compact(pi)}")
    return EXIT_OK if report.identical() else EXIT_DIVERGENCE


def _cmd_enumerate(args: argparse.Namespace) -> int:
    theory = _load(args)
    found = list(enumerate_policies(theory.binder, ternary=args.ternary, cap=_cap(DEFAULT_ENUM_CAP)))
    _print_policies(found, args.format)
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    theory = _load(args)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    qg3 = eval_qg3(EPSILON, theory.binder, theory.matrix)
    domain = variables(theory.matrix) | theory.binder.atoms()
    models = sorted(equilibrium_models(theory.matrix, domain, cap=_cap(DEFAULT_DOMAIN_CAP)), key=str)
    pair = equilibrium_policies(theory, cap=_cap(DEFAULT_BINDER_CAP))
    ordered = sort_policies(pair.policies)
    report = compare_semantics(theory, cap=_cap(DEFAULT_BINDER_CAP))

    figures = save_policy_figures(ordered, outdir, titles=[compact(p) for p in ordered])
    written.extend(figures)

    summary = outdir / "summary.csv"
    with summary.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["section", "item", "value"])
        writer.writerow(["value", "qg3", format_value(qg3)])
        for i, m in enumerate(models, start=1):
            writer.writerow(["equilibrium_model", str(i), _interp_str(m)])
        for i, pi in enumerate(ordered, start=1):
            writer.writerow(["equilibrium_policy", str(i), compact(pi)])
        for i, path in enumerate(figures, start=1):
            writer.writerow(["figure", str(i), path.name])
        writer.writerow(["qasp", "fandinno_sat", str(report.fandinno_sat).lower()])
        writer.writerow(["qasp", "stephan_sat", str(report.stephan_sat).lower()])
        writer.writerow(["qasp", "divergent", str(not report.identical()).lower()])
    written.append(summary)

    details = outdir / "report.json"
    payload = {
        "qg3": format_value(qg3),
        "models": [str(m) for m in models],
        "policies": [to_json_dict(p) for p in ordered],
        "noncrisp": [str(h) for h in sorted(pair.noncrisp, key=str)],
        "compare": report.to_json_dict(),
        "figures": [p.name for p in figures],
    }
    details.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    written.append(details)

    for path in sorted(written):
        print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def _add_common(sub: argparse.ArgumentParser, formats: tuple[str, ...] = ("text", "json")) -> None:
    sub.add_argument("source", help="path to a theory file, or - for stdin")
    sub.add_argument("--format", choices=formats, default="text", help="output format")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qep",
        description="Evaluate quantified propositional theories, decide their "
        "satisfiability over equilibrium models and extract equilibrium policies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a theory under an interpretation")
    _add_common(p)
    p.add_argument("--at", help="interpretation, e.g. \"x=1/2, z=0\"")
    p.add_argument("--allow-free", action="store_true", help="permit free matrix atoms")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("models", help="equilibrium models of the matrix")
    _add_common(p)
    p.add_argument("--allow-free", action="store_true", help="permit free matrix atoms")
    p.set_defaults(func=_cmd_models)

    p = sub.add_parser("sat", help="satisfiability over equilibrium models")
    _add_common(p)
    p.add_argument("--semantics", choices=[k.value for k in SemanticsKind],
                   default=SemanticsKind.FANDINNO.value,
                   help="reading of fixed variables (default: fandinno)")
    p.set_defaults(func=_cmd_sat)

    p = sub.add_parser("policies", help="extract equilibrium policies")
    _add_common(p, formats=("text", "json", "dot"))
    p.add_argument("--game", action="store_true",
                   help="list policies accepted by the chosen satisfiability reading instead")
    p.add_argument("--semantics", choices=[k.value for k in SemanticsKind],
                   default=SemanticsKind.FANDINNO.value,
                   help="reading used with --game (default: fandinno)")
    p.add_argument("--oracle", action="store_true",
                   help="cross check the result against the brute force reference")
    p.add_argument("--prune-hc", action="store_true",
                   help="prune dominated carried models at each step")
    p.add_argument("--trace", action="store_true", help="print elimination steps to stderr")
    p.add_argument("--at", help="conditioning interpretation for free atoms")
    p.add_argument("--allow-free", action="store_true", help="permit free matrix atoms")
    p.add_argument("--figures", metavar="DIR", help="also render one image per policy into DIR")
    p.set_defaults(func=_cmd_policies)

    p = sub.add_parser("oracle", help="brute force equilibrium policies with witnesses")
    _add_common(p)
    p.add_argument("--at", help="conditioning interpretation for free atoms")
    p.add_argument("--allow-free", action="store_true", help="permit free matrix atoms")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("compare", help="run both satisfiability readings side by side")
    _add_common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("enumerate", help="list all conforming policies of the binder")
    _add_common(p, formats=("text", "json", "dot"))
    p.add_argument("--ternary", action="store_true", help="use the three valued alphabet")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("report", help="write figures plus CSV and JSON summaries")
    _add_common(p)
    p.add_argument("-o", "--outdir", required=True, help="output directory")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UndefinedAtomError, NonCrispError, CapExceededError, NonConformingPolicyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
