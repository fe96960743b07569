"""Command-line surface.

Subcommands: ``run`` a program file (writing trace and ledger files),
``verify`` a ledger file, ``check`` a program for safety or capability
bounds, and the campaign drivers ``coherence``, ``conformance``,
``boundary``, and ``diff``. Every command is deterministic given
``--seed`` (default: the ``GOVTREE_SEED`` environment variable, else 0).

Exit codes: 0 success / value produced, 1 verification or suite failure,
2 governance denial, 3 fuel exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .algebra import operator_by_name, render_report, run_conformance
from .boundary import render_coterminous, run_coterminous
from .capability import format_caps, within_caps_check
from .category import check_hexagon, check_pentagon, check_triangle
from .directives import ResponseSampler, derive_rng, mock_handler
from .gen import gen_input, gen_policy, gen_program_ast
from .governance import gov_safe_check, govern, interpret_governed, policy_by_name
from .ledger import format_ledger, ledger_valid, parse_ledger, trace_to_ledger
from .program import format_value, parse_program
from .reference import run_reference
from .trace import format_trace

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DENIED = 2
EXIT_FUEL = 3

DEFAULT_FUEL = 100_000


def _default_seed() -> int:
    return int(os.environ.get("GOVTREE_SEED", "0"))


@dataclass
class DiffReport:
    trials: int
    disagreements: list

    @property
    def passed(self) -> bool:
        return not self.disagreements

    def render(self) -> str:
        lines = [f"differential campaign: {self.trials} trials"]
        for key, detail in sorted(self.disagreements)[:10]:
            lines.append(f"disagreement at trial {key}: {detail}")
        lines.append(
            f"disagreements={len(self.disagreements)} "
            + ("PASS" if self.passed else "FAIL")
        )
        return "".join(line + "\n" for line in lines)


def diff_campaign(trials: int, seed: int, fuel: int, bug: str | None = None) -> DiffReport:
    """Run random programs through both pipelines and compare outcomes.

    Each trial draws a program, input, policy, and handler seed; the tree
    pipeline and the reference interpreter must agree on completion,
    value, denial, and the exact trace.
    """
    disagreements = []
    for i in range(trials):
        rng = derive_rng("diff", seed, i)
        ast = gen_program_ast(rng, allow_register=True)
        input_value = gen_input(rng)
        policy = gen_policy(rng)
        handler_seed = rng.randrange(2**32)

        from .program import compile_ast

        tree_out = interpret_governed(
            govern(mock_handler(handler_seed)), policy, compile_ast(ast)(input_value), fuel
        )
        ref_out = run_reference(ast, input_value, policy, handler_seed, bug=bug)
        same = (
            tree_out.completed == ref_out.completed
            and tree_out.value == ref_out.value
            and tree_out.denied == ref_out.denied
            and tree_out.trace == ref_out.trace
        )
        if not same:
            detail = (
                f"tree=({tree_out.completed}, {tree_out.value!r}, denied={tree_out.denied}, "
                f"{len(tree_out.trace)} events) "
                f"ref=({ref_out.completed}, {ref_out.value!r}, denied={ref_out.denied}, "
                f"{len(ref_out.trace)} events) policy={policy.name}"
            )
            disagreements.append((i, detail))
    return DiffReport(trials, disagreements)


def _cmd_run(args) -> int:
    program = parse_program(_read(args.program))
    policy = policy_by_name(args.policy)
    gh = govern(mock_handler(args.handler_seed))
    outcome = interpret_governed(gh, policy, program.compile()(program.input_value), args.fuel)
    if args.trace_out:
        _write(args.trace_out, format_trace(outcome.trace))
    if args.ledger_out:
        _write(args.ledger_out, format_ledger(trace_to_ledger(outcome.trace)))
    if outcome.completed:
        print(format_value(outcome.value))
        return EXIT_OK
    if outcome.denied:
        print("denied", file=sys.stderr)
        return EXIT_DENIED
    print("fuel exhausted", file=sys.stderr)
    return EXIT_FUEL


def _cmd_verify(args) -> int:
    try:
        ledger = parse_ledger(_read(args.ledger))
    except ValueError as e:
        print(f"invalid ledger file: {e}", file=sys.stderr)
        return EXIT_FAIL
    ok, index = ledger_valid(ledger)
    if ok:
        print(f"valid ({len(ledger.entries)} entries)")
        return EXIT_OK
    print(f"invalid at index {index}")
    return EXIT_FAIL


def _cmd_check(args) -> int:
    program = parse_program(_read(args.program))
    sampler = ResponseSampler(seed=args.seed)
    if args.mode == "caps":
        caps = program.caps()
        verdict = within_caps_check(
            caps, program.compile()(program.input_value), args.fuel, sampler
        )
        print(f"caps {format_caps(caps)}: {verdict.describe()}")
        return EXIT_OK if not verdict.is_fails else EXIT_FAIL
    gh = govern(mock_handler(args.handler_seed))
    verdict = gov_safe_check(
        gh.transform(program.compile()(program.input_value)), False, args.fuel, sampler
    )
    print(f"safety: {verdict.describe()}")
    return EXIT_OK if not verdict.is_fails else EXIT_FAIL


def _cmd_coherence(args) -> int:
    rng = derive_rng("coherence", args.seed)

    def nested(depth):
        if depth == 0:
            return rng.randrange(100)
        return (nested(depth - 1), nested(depth - 1))

    pent = check_pentagon([(((rng.randrange(100), rng.randrange(100)), nested(1)), nested(1)) for _ in range(args.samples)])
    tri = check_triangle([((rng.randrange(100), None), rng.randrange(100)) for _ in range(args.samples)])
    hexa = check_hexagon([((nested(1), rng.randrange(100)), nested(1)) for _ in range(args.samples)])
    ok = True
    for name, verdict in (("pentagon", pent), ("triangle", tri), ("hexagon", hexa)):
        print(f"{name:<9} {verdict.describe()}")
        ok = ok and verdict.is_holds
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_conformance(args) -> int:
    op = operator_by_name(args.operator)
    sampler = ResponseSampler(seed=args.seed)
    report = run_conformance(op, args.trials, args.fuel, sampler, args.seed)
    print(render_report(report), end="")
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_boundary(args) -> int:
    sampler = ResponseSampler(seed=args.seed)
    report = run_coterminous(args.trials, args.fuel, sampler, args.seed)
    print(render_coterminous(report), end="")
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_diff(args) -> int:
    report = diff_campaign(args.trials, args.seed, args.fuel)
    print(report.render(), end="")
    return EXIT_OK if report.passed else EXIT_FAIL


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _add_common(p, fuel_default=DEFAULT_FUEL):
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--fuel", type=int, default=fuel_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="govtree", description="governed interaction-tree runtime"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a program file under governance")
    p_run.add_argument("program")
    p_run.add_argument("--policy", default="permissive",
                       help="permissive | denying | tags:TAG,TAG,...")
    p_run.add_argument("--handler-seed", type=int, default=0)
    p_run.add_argument("--trace-out")
    p_run.add_argument("--ledger-out")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="verify a ledger file")
    p_verify.add_argument("ledger")
    p_verify.set_defaults(func=_cmd_verify)

    p_check = sub.add_parser("check", help="check a program for safety or caps")
    p_check.add_argument("program")
    p_check.add_argument("--mode", choices=("safety", "caps"), default="safety")
    p_check.add_argument("--handler-seed", type=int, default=0)
    _add_common(p_check, fuel_default=4096)
    p_check.set_defaults(func=_cmd_check)

    p_coh = sub.add_parser("coherence", help="pentagon/triangle/hexagon checks")
    p_coh.add_argument("--samples", type=int, default=1000)
    _add_common(p_coh)
    p_coh.set_defaults(func=_cmd_coherence)

    p_conf = sub.add_parser("conformance", help="axiom conformance for an operator")
    p_conf.add_argument("--operator", default="bundled",
                        help="bundled | no-check | mangle-results | fingerprint")
    p_conf.add_argument("--trials", type=int, default=200)
    _add_common(p_conf, fuel_default=4096)
    p_conf.set_defaults(func=_cmd_conformance)

    p_bound = sub.add_parser("boundary", help="coterminous boundary campaign")
    p_bound.add_argument("--trials", type=int, default=200)
    _add_common(p_bound, fuel_default=4096)
    p_bound.set_defaults(func=_cmd_boundary)

    p_diff = sub.add_parser("diff", help="differential test against the reference interpreter")
    p_diff.add_argument("--trials", type=int, default=1000)
    _add_common(p_diff)
    p_diff.set_defaults(func=_cmd_diff)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
