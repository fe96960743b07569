"""Capability sets, the trust order, and capability-bounded morphisms.

A capability set is a finite subset of the nine-member capability
universe; union is join, the empty set is bottom, the full universe is
top. ``within_caps_check`` walks a directive tree and fails on the first
event whose required capability is missing; bookkeeping directives need
none and always pass.

Trust is a six-level total order. ``allowed_cap_set`` converts a trust
level plus a declared capability list into the set actually granted:
the top two levels get everything, untrusted code keeps at most the LLM
capability, and the middle levels keep exactly what they declared.

A ``CapMorphism`` pairs a morphism with its capability bound and the
evidence for it: ``Constructed`` when built from primitives with known
profiles (composition unions the bounds), ``Checked`` when verified by
bounded checking on sampled inputs. ``principality_check`` brute-forces
every strict subset of the bound to show the bound is tight, and
``dual_guarantee_check`` confirms that staying within the bound and
passing governance safety hold at the same time.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, Union

from .directives import (
    Capability,
    Handler,
    ResponseSampler,
    capability_for_directive,
    directive_tag,
)
from .governance import (
    GovernancePolicy,
    gov_safe_check,
    govern,
    interpret_governed,
)
from .itree import (
    BoundedVerdict,
    Fuel,
    ITree,
    Ret,
    bind,
    combine_verdicts,
    fails,
    holds,
    skip_taus,
    unknown,
)
from . import category
from .category import Morphism
from .trace import well_governed

CapSet = frozenset

CAP_UNIVERSE = tuple(Capability)


def cap_empty() -> CapSet:
    return frozenset()


def cap_singleton(c: Capability) -> CapSet:
    return frozenset((c,))


def cap_union(s1: CapSet, s2: CapSet) -> CapSet:
    return s1 | s2


def cap_full() -> CapSet:
    return frozenset(CAP_UNIVERSE)


def cap_subset(s1: CapSet, s2: CapSet) -> bool:
    return s1 <= s2


def format_caps(caps: CapSet) -> str:
    return "[" + ",".join(sorted(c.value for c in caps)) + "]"


def within_caps_check(
    caps: CapSet, t: ITree, fuel: Fuel, sampler: ResponseSampler
) -> BoundedVerdict:
    """Every directive in the tree requires a capability in ``caps`` or
    none at all. Continuations are explored on sampled answers."""

    def go(t: ITree, fuel: Fuel, path: tuple) -> BoundedVerdict:
        node, fuel, looped = skip_taus(t, fuel)
        if looped:
            return holds()
        if node is None:
            return unknown("fuel-exhausted")
        if type(node) is Ret:
            return holds()
        d = node.event
        needed = capability_for_directive(d)
        if needed is not None and needed not in caps:
            return fails(path + (f"{directive_tag(d)} needs {needed.value}",))
        if fuel <= 0:
            return unknown("fuel-exhausted")
        results = [
            go(node.cont(x), fuel - 1, path + (directive_tag(d),))
            for x in sampler.answers(d)
        ]
        return combine_verdicts(results)

    return go(t, fuel, ())


def sample_returns(t: ITree, fuel: Fuel, sampler: ResponseSampler, limit: int = 16) -> list:
    """Return values reachable in ``t`` under sampled answers, up to a
    limit; used to instantiate continuations in compositional checks."""
    found: list = []

    def go(t: ITree, fuel: Fuel):
        if len(found) >= limit:
            return
        node, fuel, looped = skip_taus(t, fuel)
        if node is None or looped:
            return
        if type(node) is Ret:
            found.append(node.value)
            return
        if fuel <= 0:
            return
        for x in sampler.answers(node.event):
            go(node.cont(x), fuel - 1)

    go(t, fuel)
    return found


def check_bind_within_caps(
    t: ITree,
    k: Callable[[Any], ITree],
    caps1: CapSet,
    caps2: CapSet,
    fuel: Fuel,
    sampler: ResponseSampler,
) -> BoundedVerdict:
    """Capability bounds compose under bind: if ``t`` stays within caps1
    and every continuation within caps2, the bind stays within the union.
    Also re-checks weakening into the union and the full-set bound."""
    pre_t = within_caps_check(caps1, t, fuel, sampler)
    if not pre_t.is_holds:
        return unknown("precondition on the first component did not hold")
    union = cap_union(caps1, caps2)
    for r in sample_returns(t, fuel, sampler):
        pre_k = within_caps_check(caps2, k(r), fuel, sampler)
        if not pre_k.is_holds:
            return unknown("precondition on the continuation did not hold")
    bound = bind(t, k)
    results = [
        within_caps_check(union, bound, fuel, sampler),
        within_caps_check(union, t, fuel, sampler),  # weakening caps1 -> union
        within_caps_check(cap_full(), bound, fuel, sampler),
    ]
    return combine_verdicts(results)


def no_ambient_effects_check(
    t: ITree, fuel: Fuel, sampler: ResponseSampler
) -> BoundedVerdict:
    """A tree within the empty capability set emits only capability-free
    directives (observability-class bookkeeping)."""

    def go(t: ITree, fuel: Fuel, path: tuple) -> BoundedVerdict:
        node, fuel, looped = skip_taus(t, fuel)
        if looped:
            return holds()
        if node is None:
            return unknown("fuel-exhausted")
        if type(node) is Ret:
            return holds()
        d = node.event
        if capability_for_directive(d) is not None:
            return fails(path + (f"ambient effect {directive_tag(d)}",))
        if fuel <= 0:
            return unknown("fuel-exhausted")
        results = [
            go(node.cont(x), fuel - 1, path + (directive_tag(d),))
            for x in sampler.answers(d)
        ]
        return combine_verdicts(results)

    return go(t, fuel, ())


class TrustLevel(Enum):
    UNTRUSTED = 0
    TESTED = 1
    EVALUATED = 2
    REVIEWED = 3
    STDLIB = 4
    SYSTEM = 5


def trust_value(t: TrustLevel) -> int:
    return t.value


def trust_le(t1: TrustLevel, t2: TrustLevel) -> bool:
    return t1.value <= t2.value


def trust_max(t1: TrustLevel, t2: TrustLevel) -> TrustLevel:
    return t2 if t1.value <= t2.value else t1


def trust_min(t1: TrustLevel, t2: TrustLevel) -> TrustLevel:
    return t1 if t1.value <= t2.value else t2


def allowed_cap_set(level: TrustLevel, declared: Iterable[Capability]) -> CapSet:
    """Grant capabilities by trust: the top two levels get everything,
    untrusted keeps at most the LLM capability, the rest keep exactly
    their declaration."""
    declared_set = frozenset(declared)
    if level in (TrustLevel.SYSTEM, TrustLevel.STDLIB):
        return cap_full()
    if level is TrustLevel.UNTRUSTED:
        return declared_set & cap_singleton(Capability.LLM_REASON)
    return declared_set


@dataclass(frozen=True)
class Constructed:
    pass


@dataclass(frozen=True)
class Checked:
    samples: int
    fuel: int


Evidence = Union[Constructed, Checked]


@dataclass(frozen=True)
class CapMorphism:
    morph: Morphism
    caps: CapSet
    evidence: Evidence


def cap_code(f) -> CapMorphism:
    return CapMorphism(category.code(f), cap_empty(), Constructed())


def cap_reason(build, extract) -> CapMorphism:
    return CapMorphism(
        category.reason(build, extract),
        cap_singleton(Capability.LLM_REASON),
        Constructed(),
    )


def cap_memory(build, extract) -> CapMorphism:
    return CapMorphism(
        category.memory(build, extract), cap_singleton(Capability.MEMORY), Constructed()
    )


def cap_call(build, extract) -> CapMorphism:
    return CapMorphism(
        category.call(build, extract),
        cap_singleton(Capability.MACHINE_CALL),
        Constructed(),
    )


def checked_cap_morphism(
    morph: Morphism,
    caps: CapSet,
    inputs: Iterable,
    fuel: Fuel,
    sampler: ResponseSampler,
) -> CapMorphism:
    """Bundle a morphism with a bound verified by bounded checking on the
    given inputs; raises if any check fails outright."""
    count = 0
    for a in inputs:
        count += 1
        v = within_caps_check(caps, morph(a), fuel, sampler)
        if v.is_fails:
            raise ValueError("morphism exceeds the declared capability set: " + v.describe())
    return CapMorphism(morph, caps, Checked(count, fuel))


def cap_seq_compose(f: CapMorphism, g: CapMorphism) -> CapMorphism:
    return CapMorphism(
        category.seq_compose(f.morph, g.morph), cap_union(f.caps, g.caps), Constructed()
    )


def cap_tensor(f: CapMorphism, g: CapMorphism) -> CapMorphism:
    return CapMorphism(
        category.tensor(f.morph, g.morph), cap_union(f.caps, g.caps), Constructed()
    )


def cap_branch(pred, f: CapMorphism, g: CapMorphism) -> CapMorphism:
    """Either arm may execute, so the bound is the union of both."""
    return CapMorphism(
        category.branch(pred, f.morph, g.morph),
        cap_union(f.caps, g.caps),
        Constructed(),
    )


def _strict_subsets(caps: CapSet):
    members = sorted(caps, key=lambda c: c.value)
    import itertools as it

    for r in range(len(members)):
        for combo in it.combinations(members, r):
            yield frozenset(combo)


def principality_check(
    cm: CapMorphism, inputs: Iterable, fuel: Fuel, sampler: ResponseSampler
) -> BoundedVerdict:
    """The declared bound is minimal: every strict subset fails on some
    input. Holds vacuously for the empty bound."""
    inputs = list(inputs)
    pending = None
    for subset in _strict_subsets(cm.caps):
        refuted = False
        saw_unknown = False
        for a in inputs:
            v = within_caps_check(subset, cm.morph(a), fuel, sampler)
            if v.is_fails:
                refuted = True
                break
            if v.is_unknown:
                saw_unknown = True
        if refuted:
            continue
        if saw_unknown:
            pending = unknown("could not resolve a strict subset")
            continue
        return fails((f"strict subset {format_caps(subset)} suffices",))
    return pending if pending is not None else holds()


def dual_guarantee_check(
    cm: CapMorphism,
    handler: Handler,
    policy: GovernancePolicy,
    inputs: Iterable,
    fuel: Fuel,
    sampler: ResponseSampler,
) -> BoundedVerdict:
    """Capability bound and governance safety hold simultaneously.

    For each input: the raw tree stays within ``cm.caps``, the governed
    image passes the safety check, and for good measure the governed run
    under the given policy leaves a well-governed trace.
    """
    gh = govern(handler)
    verdicts = []
    for a in inputs:
        tree = cm.morph(a)
        v1 = within_caps_check(cm.caps, tree, fuel, sampler)
        if v1.is_fails:
            return fails((f"capability bound violated on {a!r}",) + v1.witness)
        v2 = gov_safe_check(gh.transform(cm.morph(a)), False, fuel, sampler)
        if v2.is_fails:
            return fails((f"governance safety violated on {a!r}",) + v2.witness)
        outcome = interpret_governed(gh, policy, cm.morph(a), fuel)
        if not well_governed(outcome.trace):
            return fails((f"run trace not well governed on {a!r}",))
        verdicts.extend((v1, v2))
    return combine_verdicts(verdicts)
