"""The boundary report: expressibility and governedness coincide.

Five bundled checks, run as one campaign:

* safety: random expressible programs are governed (no safety failures).
* nontrivial: a bare I/O node for every effectful directive variant is
  demonstrably unsafe; here the failures are the point.
* turing: fuel-unrolled register machine programs are governed too, so
  staying governed costs no computational power.
* subsumption: handlers with content filtering baked in stay governed
  (positive), while unmediated I/O stays excluded (negative).
* cognitive: each of the four primitive roles appears in some generated,
  governed, terminating program.

The reverse inclusion, that every governed program is the image of an
expressible one, holds by construction: the governance wrapper only
accepts directive trees, which are exactly what the primitives and
combinators build. That is an interface fact, documented rather than
tested.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import BUNDLED_OPERATOR, CheckSummary, check_G1, check_derived
from .directives import DIRECTIVE_TYPES, ResponseSampler, derive_rng, mock_handler
from .gen import ast_kind_count, gen_directive, gen_input, gen_program_ast
from .governance import PERMISSIVE, bare_io, gov_safe_check, govern, interpret_governed
from .itree import Fuel, fails, holds
from .program import compile_ast

EFFECTFUL_VARIANTS = tuple(
    t for t in DIRECTIVE_TYPES if t.__name__ not in ("RecordStep", "Observability")
)

_PRIMITIVE_ROLES = ("code", "reason", "memory", "call")


@dataclass
class CoterminousReport:
    safety: CheckSummary
    nontrivial: CheckSummary
    turing: CheckSummary
    subsumption_pos: CheckSummary
    subsumption_neg: CheckSummary
    cognitive: CheckSummary

    @property
    def passed(self) -> bool:
        return all(
            s.passed
            for s in (
                self.safety,
                self.nontrivial,
                self.turing,
                self.subsumption_pos,
                self.subsumption_neg,
                self.cognitive,
            )
        )


def run_coterminous(
    trials: int, fuel: Fuel, sampler: ResponseSampler, seed: int
) -> CoterminousReport:
    derived = check_derived(BUNDLED_OPERATOR, trials, fuel, sampler, seed)

    safety = check_G1(BUNDLED_OPERATOR, trials, fuel, sampler, seed)
    safety.name = "safety"

    nontrivial = CheckSummary("nontrivial", expect_fails=True)
    for i, variant in enumerate(EFFECTFUL_VARIANTS):
        rng = derive_rng("nontrivial", seed, i)
        d = gen_directive(rng, variant.__name__)
        nontrivial.record(gov_safe_check(bare_io(d), False, fuel, sampler), (seed, i))

    turing = derived["convergence"]
    turing.name = "turing"

    subsumption_pos = derived["subsumption_pos"]
    subsumption_pos.name = "subsumption_pos"
    subsumption_neg = derived["subsumption_neg"]

    cognitive = CheckSummary("cognitive")
    for i in range(trials):
        role = _PRIMITIVE_ROLES[i % len(_PRIMITIVE_ROLES)]
        rng = derive_rng("cognitive", seed, i)
        kwargs = {"must_include": role} if role != "code" else {}
        ast = gen_program_ast(rng, **kwargs)
        if role == "code" and ast_kind_count(ast, "code") == 0:
            ast = {"kind": "seq", "steps": [ast, {"kind": "code", "expr": {"op": "input"}}]}
        input_value = gen_input(rng)
        handler_seed = rng.randrange(2**32)
        gh = govern(mock_handler(handler_seed))
        tree = compile_ast(ast)(input_value)
        outcome = interpret_governed(gh, PERMISSIVE, tree, fuel)
        verdict = gov_safe_check(gh.transform(compile_ast(ast)(input_value)), False, fuel, sampler)
        if not outcome.completed:
            cognitive.record(fails((f"{role} program did not terminate",)), (seed, i))
        elif verdict.is_fails:
            cognitive.record(verdict, (seed, i))
        else:
            cognitive.record(holds() if verdict.is_holds else verdict, (seed, i))

    return CoterminousReport(
        safety=safety,
        nontrivial=nontrivial,
        turing=turing,
        subsumption_pos=subsumption_pos,
        subsumption_neg=subsumption_neg,
        cognitive=cognitive,
    )


def render_coterminous(report: CoterminousReport) -> str:
    lines = ["boundary report"]
    for s in (
        report.safety,
        report.nontrivial,
        report.turing,
        report.subsumption_pos,
        report.subsumption_neg,
        report.cognitive,
    ):
        lines.append(s.line())
    lines.append("overall: " + ("PASS" if report.passed else "FAIL"))
    return "".join(line + "\n" for line in lines)
