"""Conformance harness for governance operators.

An operator is anything that turns a base handler into a governed
handler. The three axioms are checked statistically over seeded random
programs; a reported failure is a real counterexample, a clean run is
evidence, not proof.

* G1 (safety): the governed image of any program passes the bounded
  safety check with the approval flag down.
* G2 (transparency): under a permissive policy, a governed run and an
  ungoverned run of the same program through the same handler agree on
  the result and on the I/O events (governance entries erased).
* G3 (properness): two extensionally equal handlers produce governed
  runs that agree on result and full trace.

Three adversarial operators are bundled to show the axioms are
independent: one inserts no checks (breaks G1 only), one tweaks
permitted answers (breaks G2 only), one stamps a per-handler token into
its check stages (breaks G3 only).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

from .directives import (
    Handler,
    ResponseSampler,
    derive_rng,
    mock_answer,
    mock_handler,
)
from .governance import (
    PERMISSIVE,
    Gov,
    GovCheck,
    GovernedHandler,
    Io,
    gov_safe_check,
    govern,
    interpret_governed,
    interpret_ungoverned,
    stage_of,
)
from .itree import ITree, Fuel, Ret, Tau, Vis, ret, spin, vis
from .trace import IoEntry
from .gen import gen_input, gen_program_ast, gen_register_program
from .category import translate_register_program
from .program import compile_ast


@dataclass(frozen=True)
class GovernanceOperator:
    name: str
    transform: Callable[[Handler], GovernedHandler]


BUNDLED_OPERATOR = GovernanceOperator("bundled", govern)


def _rewrap(h: Handler, on_vis) -> GovernedHandler:
    """Build a governed handler whose tree transform maps each directive
    node through ``on_vis(directive, continuation, recurse)``."""

    def transform(t: ITree) -> ITree:
        def step():
            node = t.step()
            kind = type(node)
            if kind is Ret:
                return node
            if kind is Tau:
                return Tau(transform(node.rest))
            return on_vis(node.event, node.cont, transform)

        return ITree(step)

    return GovernedHandler(base=h, transform=transform)


def no_check_operator() -> GovernanceOperator:
    """Forwards I/O without inserting any checks; violates G1."""

    def make(h: Handler) -> GovernedHandler:
        def on_vis(d, cont, rec):
            return Vis(Io(d), lambda x: rec(cont(x)))

        return _rewrap(h, on_vis)

    return GovernanceOperator("no-check", make)


def result_mangling_operator() -> GovernanceOperator:
    """Checks properly but nudges every permitted record answer before
    handing it to the continuation; violates G2."""

    def mangle(x):
        return x if x is None else replace(x, status=x.status + 1)

    def make(h: Handler) -> GovernedHandler:
        def on_vis(d, cont, rec):
            def after_check(approved):
                if not approved:
                    return spin()
                return vis(Io(d), lambda x: rec(cont(mangle(x))))

            return Vis(Gov(GovCheck(stage_of(d), d)), after_check)

        return _rewrap(h, on_vis)

    return GovernanceOperator("mangle-results", make)


def fingerprinting_operator() -> GovernanceOperator:
    """Stamps a per-handler token into every check stage, distinguishing
    extensionally equal handlers; violates G3."""
    tokens: dict[int, int] = {}

    def make(h: Handler) -> GovernedHandler:
        token = tokens.setdefault(id(h), len(tokens))

        def on_vis(d, cont, rec):
            stage = f"{stage_of(d)}#h{token}"

            def after_check(approved):
                if not approved:
                    return spin()
                return vis(Io(d), lambda x: rec(cont(x)))

            return Vis(Gov(GovCheck(stage, d)), after_check)

        return _rewrap(h, on_vis)

    return GovernanceOperator("fingerprint", make)


ADVERSARIAL_OPERATORS = {
    "no-check": no_check_operator,
    "mangle-results": result_mangling_operator,
    "fingerprint": fingerprinting_operator,
}


def operator_by_name(name: str) -> GovernanceOperator:
    if name == "bundled":
        return BUNDLED_OPERATOR
    if name in ADVERSARIAL_OPERATORS:
        return ADVERSARIAL_OPERATORS[name]()
    raise ValueError(f"unknown operator {name!r}")


@dataclass
class CheckSummary:
    """Tally of verdicts over a campaign, with reproducible failure keys."""

    name: str
    trials: int = 0
    holds: int = 0
    fails: int = 0
    unknowns: int = 0
    expect_fails: bool = False
    fail_witnesses: list = field(default_factory=list)

    def record(self, verdict, key) -> None:
        self.trials += 1
        if verdict.is_fails:
            self.fails += 1
            if len(self.fail_witnesses) < 5:
                self.fail_witnesses.append((key, verdict.describe()))
        elif verdict.is_unknown:
            self.unknowns += 1
        else:
            self.holds += 1

    @property
    def passed(self) -> bool:
        if self.expect_fails:
            return self.trials > 0 and self.fails == self.trials
        return self.fails == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name:<18} trials={self.trials:<6} holds={self.holds:<6} "
            f"fails={self.fails:<6} unknowns={self.unknowns:<6} {status}"
        )


def _trial_program(seed: int, label: str, i: int, **gen_kwargs):
    rng = derive_rng(label, seed, i)
    ast = gen_program_ast(rng, **gen_kwargs)
    input_value = gen_input(rng)
    handler_seed = rng.randrange(2**32)
    return ast, input_value, handler_seed


def check_G1(
    op: GovernanceOperator,
    trials: int,
    fuel: Fuel,
    sampler: ResponseSampler,
    seed: int,
    force_effectful: bool = False,
) -> CheckSummary:
    """Safety: governed images of random programs never fail the bounded
    safety check with the approval flag down."""
    summary = CheckSummary(f"G1[{op.name}]")
    for i in range(trials):
        ast, input_value, handler_seed = _trial_program(
            seed, "g1", i, force_effectful=force_effectful
        )
        gh = op.transform(mock_handler(handler_seed))
        tree = gh.transform(compile_ast(ast)(input_value))
        summary.record(gov_safe_check(tree, False, fuel, sampler), (seed, i))
    return summary


def _erase_gov(trace) -> tuple:
    return tuple(ev for ev in trace if type(ev) is IoEntry)


def check_G2(
    op: GovernanceOperator,
    trials: int,
    fuel: Fuel,
    sampler: ResponseSampler,
    seed: int,
    values_only: bool = False,
) -> CheckSummary:
    """Transparency: permissive governed runs match ungoverned runs on
    value and, unless ``values_only``, on the erased event sequence."""
    from .itree import fails, holds, unknown

    summary = CheckSummary(f"G2[{op.name}]")
    for i in range(trials):
        ast, input_value, handler_seed = _trial_program(seed, "g2", i)
        h = mock_handler(handler_seed)
        tree = compile_ast(ast)(input_value)
        governed = interpret_governed(op.transform(h), PERMISSIVE, tree, fuel)
        plain = interpret_ungoverned(h, compile_ast(ast)(input_value), fuel)
        if not governed.completed or not plain.completed:
            summary.record(unknown("fuel-exhausted"), (seed, i))
            continue
        same = governed.value == plain.value and (
            values_only or _erase_gov(governed.trace) == plain.trace
        )
        verdict = holds() if same else fails(
            (f"governed {governed.value!r} vs ungoverned {plain.value!r}",)
        )
        summary.record(verdict, (seed, i))
    return summary


def check_G3(
    op: GovernanceOperator,
    trials: int,
    fuel: Fuel,
    sampler: ResponseSampler,
    seed: int,
) -> CheckSummary:
    """Properness: extensionally equal handlers give identical governed
    runs (value and full trace, check stages included)."""
    from .itree import fails, holds, unknown

    summary = CheckSummary(f"G3[{op.name}]")
    for i in range(trials):
        ast, input_value, handler_seed = _trial_program(seed, "g3", i)
        h1 = mock_handler(handler_seed)
        h2 = mock_handler(handler_seed)
        out1 = interpret_governed(op.transform(h1), PERMISSIVE, compile_ast(ast)(input_value), fuel)
        out2 = interpret_governed(op.transform(h2), PERMISSIVE, compile_ast(ast)(input_value), fuel)
        if out1.completed != out2.completed:
            summary.record(fails(("one run completed, the other did not",)), (seed, i))
            continue
        if not out1.completed:
            summary.record(unknown("fuel-exhausted"), (seed, i))
            continue
        if out1.value == out2.value and out1.trace == out2.trace:
            summary.record(holds(), (seed, i))
        else:
            summary.record(fails(("equal handlers, different governed runs",)), (seed, i))
    return summary


def filtering_handler(seed: int) -> Handler:
    """A base handler with content governance baked in: answers are
    seeded mocks with their content censored."""

    def h(d):
        answer = mock_answer(seed, d)
        if answer is not None:
            answer = replace(answer, content="[filtered]")
        return ret(answer)

    return h


def check_derived(
    op: GovernanceOperator,
    trials: int,
    fuel: Fuel,
    sampler: ResponseSampler,
    seed: int,
) -> dict:
    """The derived properties, re-checked on top of the axioms."""
    from .governance import bare_io
    from .gen import gen_directive

    # Convergence: safety again, over fuel-unrolled register programs.
    convergence = CheckSummary(f"convergence[{op.name}]")
    for i in range(trials):
        rng = derive_rng("conv", seed, i)
        program = gen_register_program(rng)
        gh = op.transform(mock_handler(rng.randrange(2**32)))
        tree = gh.transform(translate_register_program(program, rng.randrange(1, 16)))
        convergence.record(gov_safe_check(tree, False, fuel, sampler), (seed, i))

    # Positive subsumption: content-filtering handlers are still governed.
    subsumption_pos = CheckSummary(f"subsumption_pos[{op.name}]")
    for i in range(trials):
        ast, input_value, handler_seed = _trial_program(seed, "subpos", i)
        gh = op.transform(filtering_handler(handler_seed))
        tree = gh.transform(compile_ast(ast)(input_value))
        subsumption_pos.record(gov_safe_check(tree, False, fuel, sampler), (seed, i))

    # Negative subsumption: bare I/O is unsafe, whatever the operator.
    subsumption_neg = CheckSummary("subsumption_neg", expect_fails=True)
    for i in range(max(1, trials // 10)):
        rng = derive_rng("subneg", seed, i)
        d = gen_directive(rng)
        subsumption_neg.record(
            gov_safe_check(bare_io(d), False, fuel, sampler), (seed, i)
        )

    goal_preservation = check_G2(op, trials, fuel, sampler, seed, values_only=True)
    goal_preservation.name = f"goal_preservation[{op.name}]"

    return {
        "convergence": convergence,
        "subsumption_pos": subsumption_pos,
        "subsumption_neg": subsumption_neg,
        "goal_preservation": goal_preservation,
    }


@dataclass
class ConformanceReport:
    operator: str
    g1: CheckSummary
    g2: CheckSummary
    g3: CheckSummary
    derived: dict

    @property
    def passed(self) -> bool:
        return (
            self.g1.passed
            and self.g2.passed
            and self.g3.passed
            and all(s.passed for s in self.derived.values())
        )


def run_conformance(
    op: GovernanceOperator,
    trials: int,
    fuel: Fuel,
    sampler: ResponseSampler,
    seed: int,
    include_derived: bool = True,
) -> ConformanceReport:
    g1 = check_G1(op, trials, fuel, sampler, seed)
    g2 = check_G2(op, trials, fuel, sampler, seed)
    g3 = check_G3(op, trials, fuel, sampler, seed)
    derived = (
        check_derived(op, max(1, trials // 5), fuel, sampler, seed)
        if include_derived
        else {}
    )
    return ConformanceReport(op.name, g1, g2, g3, derived)


def render_report(report: ConformanceReport) -> str:
    lines = [f"conformance report for operator {report.operator!r}"]
    lines.append(report.g1.line())
    lines.append(report.g2.line())
    lines.append(report.g3.line())
    for key in sorted(report.derived):
        lines.append(report.derived[key].line())
    lines.append("overall: " + ("PASS" if report.passed else "FAIL"))
    return "".join(line + "\n" for line in lines)
