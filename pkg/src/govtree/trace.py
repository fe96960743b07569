"""Linear execution traces and the well-governed trace predicate.

A trace is the ordered record of what a governed run did: one entry per
governance check (stage plus the boolean decision) and one entry per
performed I/O event (the canonical directive encoding). Pure steps and
silent steps leave no record.

A trace is *well governed* when every I/O entry is preceded by a passing
check. By default the "passing check seen" flag resets after each I/O
entry, making the predicate the linear shadow of the tree-level safety
check, which re-requires approval after every effect; pass
``reset_after_io=False`` for the looser once-is-enough reading.

Trace file format: one entry per line, UTF-8, LF endings.
``GOV <stage> <pass|fail>`` or ``IO <canonical-directive>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .itree import BoundedVerdict, fails, holds, unknown


@dataclass(frozen=True, slots=True)
class GovEntry:
    stage: str
    passed: bool


@dataclass(frozen=True, slots=True)
class IoEntry:
    directive: str  # canonical TAG{...} encoding

    @property
    def tag(self) -> str:
        return self.directive.split("{", 1)[0]


TraceEvent = Union[GovEntry, IoEntry]
Trace = tuple


def well_governed(trace: Iterable[TraceEvent], reset_after_io: bool = True) -> bool:
    """True when every I/O entry is preceded by a passing check."""
    approved = False
    for ev in trace:
        if type(ev) is GovEntry:
            if ev.passed:
                approved = True
        else:
            if not approved:
                return False
            if reset_after_io:
                approved = False
    return True


def trace_of_run(outcome) -> Trace:
    """The trace recorded by a governed run (see ``interpret_governed``)."""
    return outcome.trace


def check_trace_of_bind(t, k, policy, handler, fuel: int) -> BoundedVerdict:
    """Check that sequential composition concatenates traces.

    Runs ``t``, then ``k(value)``, then ``bind(t, k)``, all under the same
    policy and handler, and compares the bind trace with the concatenation
    element-wise. Unknown if the first run does not complete within fuel.
    """
    from .governance import govern, interpret_governed
    from .itree import bind

    gh = govern(handler)
    first = interpret_governed(gh, policy, t, fuel)
    if not first.completed:
        return unknown("fuel-exhausted" if not first.denied else "denied")
    second = interpret_governed(gh, policy, k(first.value), fuel)
    if not second.completed:
        return unknown("fuel-exhausted" if not second.denied else "denied")
    whole = interpret_governed(gh, policy, bind(t, k), fuel)
    if not whole.completed:
        return unknown("bind run did not complete")
    expected = first.trace + second.trace
    if whole.trace == expected:
        return holds()
    return fails((f"trace {whole.trace!r} != concatenation {expected!r}",))


def format_trace(trace: Iterable[TraceEvent]) -> str:
    lines = []
    for ev in trace:
        if type(ev) is GovEntry:
            lines.append(f"GOV {ev.stage} {'pass' if ev.passed else 'fail'}")
        else:
            lines.append(f"IO {ev.directive}")
    return "".join(line + "\n" for line in lines)


def parse_trace(text: str) -> Trace:
    events: list[TraceEvent] = []
    for line_no, line in enumerate(text.splitlines(), 1):
        if not line:
            continue
        if line.startswith("GOV "):
            stage, _, verdict = line[4:].rpartition(" ")
            if verdict not in ("pass", "fail") or not stage:
                raise ValueError(f"line {line_no}: malformed GOV entry")
            events.append(GovEntry(stage, verdict == "pass"))
        elif line.startswith("IO "):
            events.append(IoEntry(line[3:]))
        else:
            raise ValueError(f"line {line_no}: unknown trace entry")
    return tuple(events)
