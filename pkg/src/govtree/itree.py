"""Lazy interaction trees with fuel-bounded observation and equivalence.

A program is a potentially infinite tree with three node shapes:

* ``Ret(value)``   -- the computation is done,
* ``Tau(rest)``    -- one silent step, then ``rest``,
* ``Vis(event, cont)`` -- a visible event; ``cont`` maps the event's
  answer to the rest of the tree.

Nothing below a node is built until the node is observed, and every
observed node is memoized, so observation is pure: two observations of
the same tree yield the very same node objects.

Because trees may be infinite, every analysis here is bounded by an
explicit ``fuel`` budget (a per-path step count) and reports a
three-valued ``BoundedVerdict``:

* ``fails``   -- a concrete counterexample path was found; always sound.
* ``holds``   -- the reachable region was exhausted with no discrepancy.
* ``unknown`` -- fuel or sampling ran out before the question resolved.

The one place we go beyond plain bounded unfolding is the canonical
divergent tree built by :func:`spin`: it is a self-referential Tau loop,
which the tau-skipping loop recognizes by object identity. Callers can
therefore treat it as *proven* divergence rather than burning fuel on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, NamedTuple, Sequence

Fuel = int


class Ret(NamedTuple):
    value: Any


class Tau(NamedTuple):
    rest: "ITree"


class Vis(NamedTuple):
    event: Any
    cont: Callable[[Any], "ITree"]


class FuelExhausted(NamedTuple):
    """Marker returned by ``observe`` when the step budget ran out."""


FUEL_EXHAUSTED = FuelExhausted()


class ITree:
    """A lazily unfolded interaction tree.

    ``step()`` forces and memoizes exactly one node. The constructor takes
    a thunk producing that node; use the module-level helpers (``ret``,
    ``tau``, ``vis``, ``defer``) rather than calling this directly.
    """

    __slots__ = ("_thunk", "_node")

    def __init__(self, thunk: Callable[[], Any] | None):
        self._thunk = thunk
        self._node = None

    def step(self):
        node = self._node
        if node is None:
            node = self._thunk()
            self._node = node
            self._thunk = None
        return node


def _of_node(node) -> ITree:
    t = ITree(None)
    t._node = node
    return t


def ret(value: Any) -> ITree:
    return _of_node(Ret(value))


def tau(rest: ITree) -> ITree:
    return _of_node(Tau(rest))


def vis(event: Any, cont: Callable[[Any], ITree]) -> ITree:
    return _of_node(Vis(event, cont))


def defer(thunk: Callable[[], ITree]) -> ITree:
    """A tree equal to ``thunk()`` but not built until observed."""
    return ITree(lambda: thunk().step())


def spin() -> ITree:
    """The canonical divergent tree: an infinite stream of Tau steps.

    The returned tree is its own child, so tau-skipping loops can detect
    it by identity (see ``skip_taus``). ``bind(spin(), k)`` wraps it in
    fresh nodes and is *not* detectable; bounded checks on it stay
    ``unknown``, which is the honest answer.
    """
    t = ITree(None)
    t._node = Tau(t)
    return t


def bind(t: ITree, k: Callable[[Any], ITree]) -> ITree:
    """Sequence ``t`` with ``k``; the monadic bind.

    ``bind(ret(x), k)`` steps directly to ``k(x)``'s head (no extra Tau),
    so the left unit law is definitional, not merely up-to-tau.
    """

    def step():
        node = t.step()
        kind = type(node)
        if kind is Ret:
            return k(node.value).step()
        if kind is Tau:
            return Tau(bind(node.rest, k))
        cont = node.cont
        return Vis(node.event, lambda x: bind(cont(x), k))

    return ITree(step)


def skip_taus(t: ITree, fuel: Fuel) -> "tuple[Any, Fuel, bool]":
    """Unfold through Tau nodes, spending one fuel per skip.

    Returns ``(node, fuel_left, looped)``. ``node`` is the first non-Tau
    node, or ``None`` if fuel ran out or a Tau self-loop was detected;
    ``looped`` is True only in the self-loop case (proven divergence).
    """
    node = t.step()
    while type(node) is Tau:
        if node.rest is t:
            return None, fuel, True
        if fuel <= 0:
            return None, 0, False
        fuel -= 1
        t = node.rest
        node = t.step()
    return node, fuel, False


def observe(t: ITree, fuel: Fuel):
    """Force the head of ``t``: the first Ret or Vis node.

    Ret and Vis cost no fuel to report; each Tau skipped on the way costs
    one. Returns ``FUEL_EXHAUSTED`` if the budget runs out first (a Tau
    self-loop exhausts immediately rather than spinning).
    """
    node, _, looped = skip_taus(t, fuel)
    if node is None or looped:
        return FUEL_EXHAUSTED
    return node


HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class BoundedVerdict:
    """Outcome of a bounded check over a possibly infinite tree."""

    status: str
    witness: tuple[str, ...] = ()
    reason: str = ""

    @property
    def is_holds(self) -> bool:
        return self.status == HOLDS

    @property
    def is_fails(self) -> bool:
        return self.status == FAILS

    @property
    def is_unknown(self) -> bool:
        return self.status == UNKNOWN

    def describe(self) -> str:
        if self.is_fails:
            return "fails: " + " / ".join(self.witness)
        if self.is_unknown:
            return f"unknown ({self.reason})"
        return "holds"


def holds() -> BoundedVerdict:
    return BoundedVerdict(HOLDS)


def fails(witness: Sequence[str]) -> BoundedVerdict:
    return BoundedVerdict(FAILS, witness=tuple(witness))


def unknown(reason: str) -> BoundedVerdict:
    return BoundedVerdict(UNKNOWN, reason=reason)


def combine_verdicts(verdicts) -> BoundedVerdict:
    """All-of combination: any fails wins, else any unknown, else holds."""
    pending = None
    for v in verdicts:
        if v.is_fails:
            return v
        if v.is_unknown and pending is None:
            pending = v
    return pending if pending is not None else holds()


def eutt_bounded(t1: ITree, t2: ITree, fuel: Fuel, sampler) -> BoundedVerdict:
    """Bounded equivalence up to taus.

    Tau nodes on either side are skipped (one fuel each). Ret nodes must
    carry equal values. Vis nodes must carry equal events, and the
    continuations are compared on every answer the sampler provides for
    the event (one fuel per Vis step). A detected Tau self-loop counts as
    proven divergence: two loops are equivalent, a loop against anything
    convergent is a failure.

    ``sampler`` is any object with ``answers(event) -> sequence``.
    """

    def go(a: ITree, b: ITree, fuel: Fuel, path: tuple) -> BoundedVerdict:
        n1, fuel, loop1 = skip_taus(a, fuel)
        n2, fuel, loop2 = skip_taus(b, fuel)
        if loop1 or loop2:
            if loop1 and loop2:
                return holds()
            if n1 is None and n2 is None:
                return unknown("fuel-exhausted")
            side = "left" if loop1 else "right"
            return fails(path + (f"{side} side diverges, other side does not",))
        if n1 is None or n2 is None:
            return unknown("fuel-exhausted")
        k1, k2 = type(n1), type(n2)
        if k1 is Ret and k2 is Ret:
            if n1.value == n2.value:
                return holds()
            return fails(path + (f"Ret {n1.value!r} != Ret {n2.value!r}",))
        if k1 is Vis and k2 is Vis:
            if n1.event != n2.event:
                return fails(path + (f"events differ: {n1.event!r} != {n2.event!r}",))
            if fuel <= 0:
                return unknown("fuel-exhausted")
            answers = sampler.answers(n1.event)
            if not answers:
                return unknown("sample-limited")
            results = [
                go(n1.cont(x), n2.cont(x), fuel - 1, path + (f"{n1.event!r} answered {x!r}",))
                for x in answers
            ]
            return combine_verdicts(results)
        return fails(path + (f"node shapes differ: {k1.__name__} vs {k2.__name__}",))

    return go(t1, t2, fuel, ())


def run_pure(t: ITree, fuel: Fuel) -> "tuple[bool, Any]":
    """Drive a tree expected to contain no events down to its value.

    Returns ``(True, value)`` on Ret, ``(False, description)`` when fuel
    runs out, the tree diverges, or an event shows up after all.
    """
    node, _, looped = skip_taus(t, fuel)
    if looped:
        return False, "diverges"
    if node is None:
        return False, "fuel-exhausted"
    if type(node) is Vis:
        return False, f"unexpected event {node.event!r}"
    return True, node.value
