"""The governance layer: check-before-effect wrapping of handlers.

``govern`` turns a base handler into a governed handler. The governed
tree emits a boolean check event before every directive; an approving
answer releases the I/O event and the program continues with the
handler's answer, a denying answer sends the computation into silent
divergence. Denial therefore never produces a wrong value, it produces
no value, and the driver reports it operationally (a detected Tau
self-loop, or fuel running out after a deny).

``gov_safe_check`` is the bounded safety checker over governed trees:
an I/O node is legal only under an approval flag that is set by a passing
check and cleared again after every I/O node. Check events are explored
on both answers; I/O answers are sampled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Union

from .directives import (
    DirectiveEvent,
    Handler,
    ResponseSampler,
    directive_tag,
    encode_directive,
)
from .itree import (
    BoundedVerdict,
    Fuel,
    ITree,
    Ret,
    Tau,
    Vis,
    combine_verdicts,
    fails,
    holds,
    ret,
    skip_taus,
    spin,
    unknown,
    vis,
)
from .trace import GovEntry, IoEntry, Trace

GovernanceStage = str


@dataclass(frozen=True, slots=True)
class GovCheck:
    """A pending governance decision: the checkpoint stage plus the
    directive awaiting release. The stage label is the directive tag."""

    stage: GovernanceStage
    directive: DirectiveEvent


@dataclass(frozen=True, slots=True)
class Gov:
    check: GovCheck


@dataclass(frozen=True, slots=True)
class Io:
    directive: DirectiveEvent


GovernedEvent = Union[Gov, Io]


def stage_of(d: DirectiveEvent) -> GovernanceStage:
    return directive_tag(d)


@dataclass(frozen=True)
class GovernancePolicy:
    """A pure decision function from (stage, directive) to allow/deny."""

    name: str
    decide: Callable[[GovernanceStage, DirectiveEvent], bool]


PERMISSIVE = GovernancePolicy("permissive", lambda stage, d: True)
DENYING = GovernancePolicy("denying", lambda stage, d: False)


def tag_filter(allowed: Iterable[str]) -> GovernancePolicy:
    allow = frozenset(allowed)
    return GovernancePolicy(
        "tags:" + ",".join(sorted(allow)), lambda stage, d: stage in allow
    )


def policy_by_name(spec: str) -> GovernancePolicy:
    if spec == "permissive":
        return PERMISSIVE
    if spec == "denying":
        return DENYING
    if spec.startswith("tags:"):
        rest = spec[len("tags:"):]
        return tag_filter(t for t in rest.split(",") if t)
    raise ValueError(f"unknown policy {spec!r}")


@dataclass(frozen=True)
class GovernedHandler:
    """A base handler together with its governance wrapping.

    ``transform`` maps a directive program to the governed tree;
    ``base`` answers the released I/O events when the tree is driven.
    """

    base: Handler
    transform: Callable[[ITree], ITree]


def govern(h: Handler) -> GovernedHandler:
    """Wrap a base handler so every directive is check-gated.

    For each directive ``d`` in the source tree the governed tree emits
    ``Gov(GovCheck(stage, d))``; on a true answer it emits ``Io(d)`` and
    continues the source continuation with the I/O answer, on false it
    diverges. Ret and Tau pass through.
    """

    def transform(t: ITree) -> ITree:
        def step():
            node = t.step()
            kind = type(node)
            if kind is Ret:
                return node
            if kind is Tau:
                return Tau(transform(node.rest))
            d = node.event
            cont = node.cont

            def after_check(approved: bool) -> ITree:
                if not approved:
                    return spin()
                return vis(Io(d), lambda x: transform(cont(x)))

            return Vis(Gov(GovCheck(stage_of(d), d)), after_check)

        return ITree(step)

    return GovernedHandler(base=h, transform=transform)


@dataclass(frozen=True)
class RunOutcome:
    """Result of driving a tree: ``completed`` distinguishes a genuine
    Ret (whose value may be None) from divergence or exhaustion."""

    completed: bool
    value: Any
    trace: Trace
    denied: bool


def _drive_answer_tree(t: ITree, fuel: Fuel) -> "tuple[bool, Any, Fuel]":
    node, fuel, looped = skip_taus(t, fuel)
    if node is None or looped or type(node) is not Ret:
        return False, None, fuel
    return True, node.value, fuel


def interpret_governed(
    gh: GovernedHandler, policy: GovernancePolicy, t: ITree, fuel: Fuel
) -> RunOutcome:
    """Drive the governed image of ``t``, recording a trace.

    Check events are answered by the policy, I/O events by the base
    handler. Every Tau, check, and I/O step costs one fuel. The run is
    ``denied`` when it failed to complete after at least one denying
    answer (divergence is detected early for the canonical spin loop).
    """
    tree = gh.transform(t)
    events: list = []
    deny_seen = False
    while True:
        node, fuel, looped = skip_taus(tree, fuel)
        if node is None or looped:
            break
        if type(node) is Ret:
            return RunOutcome(True, node.value, tuple(events), False)
        ev = node.event
        if fuel <= 0:
            break
        fuel -= 1
        if type(ev) is Gov:
            answer = bool(policy.decide(ev.check.stage, ev.check.directive))
            events.append(GovEntry(ev.check.stage, answer))
            deny_seen = deny_seen or not answer
            tree = node.cont(answer)
        elif type(ev) is Io:
            d = ev.directive
            ok, answer, fuel = _drive_answer_tree(gh.base(d), fuel)
            if not ok:
                break
            events.append(IoEntry(encode_directive(d)))
            tree = node.cont(answer)
        else:
            raise TypeError(f"not a governed event: {ev!r}")
    return RunOutcome(False, None, tuple(events), deny_seen)


def interpret_ungoverned(h: Handler, t: ITree, fuel: Fuel) -> RunOutcome:
    """Drive a directive tree directly through the base handler, with no
    checks inserted; records only I/O entries."""
    events: list = []
    while True:
        node, fuel, looped = skip_taus(t, fuel)
        if node is None or looped:
            return RunOutcome(False, None, tuple(events), False)
        if type(node) is Ret:
            return RunOutcome(True, node.value, tuple(events), False)
        if fuel <= 0:
            return RunOutcome(False, None, tuple(events), False)
        fuel -= 1
        d = node.event
        ok, answer, fuel = _drive_answer_tree(h(d), fuel)
        if not ok:
            return RunOutcome(False, None, tuple(events), False)
        events.append(IoEntry(encode_directive(d)))
        t = node.cont(answer)


def gov_safe_check(
    t: ITree,
    approved: bool,
    fuel: Fuel,
    sampler: ResponseSampler,
) -> BoundedVerdict:
    """Bounded check of the safety predicate over a governed tree.

    Ret is safe. Check events must be safe on both answers: the true
    branch with the flag set, the false branch with it cleared. An I/O
    event fails outright unless the flag is set, and its continuation is
    checked on sampled answers with the flag cleared again. A detected
    Tau self-loop is proven silent divergence and is safe for any flag;
    fuel running out anywhere else yields unknown.
    """

    def go(t: ITree, approved: bool, fuel: Fuel, path: tuple) -> BoundedVerdict:
        node, fuel, looped = skip_taus(t, fuel)
        if looped:
            return holds()
        if node is None:
            return unknown("fuel-exhausted")
        if type(node) is Ret:
            return holds()
        ev = node.event
        if type(ev) is Gov:
            if fuel <= 0:
                return unknown("fuel-exhausted")
            stage = ev.check.stage
            on_true = go(node.cont(True), True, fuel - 1, path + (f"check({stage})=true",))
            if on_true.is_fails:
                return on_true
            on_false = go(node.cont(False), False, fuel - 1, path + (f"check({stage})=false",))
            return combine_verdicts((on_true, on_false))
        if type(ev) is Io:
            tag = directive_tag(ev.directive)
            if not approved:
                return fails(path + (f"io({tag}) without approval",))
            if fuel <= 0:
                return unknown("fuel-exhausted")
            results = [
                go(node.cont(x), False, fuel - 1, path + (f"io({tag}) answered",))
                for x in sampler.answers(ev.directive)
            ]
            return combine_verdicts(results)
        raise TypeError(f"not a governed event: {ev!r}")

    return go(t, approved, fuel, ())


@dataclass(frozen=True)
class GovernedSampler:
    """Answer sampling over governed events: checks are booleans, I/O
    events delegate to the wrapped directive sampler."""

    inner: ResponseSampler

    def answers(self, event: GovernedEvent) -> tuple:
        if type(event) is Gov:
            return (True, False)
        return self.inner.answers(event.directive)


def bare_io(d: DirectiveEvent) -> ITree:
    """A governed-signature tree performing ``d`` with no preceding check;
    the canonical unsafe tree."""
    return vis(Io(d), lambda x: ret(None))
