"""Program combinators: the four primitives, composition, and coherence.

A morphism is any function from an input value to a directive tree.
Identity is ``ret``, sequential composition is monadic bind, and four
primitives generate everything: ``code`` for pure functions, ``reason``
for one LLM call, ``memory`` for one memory operation, ``call`` for one
machine invocation. ``tensor`` runs two morphisms on the halves of a
pair, left side first (sequential-independent, not concurrent), and
``branch`` picks one of two morphisms by a pure predicate.

The structural morphisms (associator, unitors, braiding) are all pure
tuple rearrangements, so the pentagon, triangle, and hexagon coherence
checks reduce to comparing concrete values on sampled tuples.

The register machine at the bottom of the module is the Turing-complete
core used to demonstrate that unbounded computation stays inside
governance: programs over Inc / DecJz / Halt translate, fuel-unrolled,
into directive trees that log every executed step as an observability
directive. A separate direct interpreter over the same instruction set
serves as the independent reference for the translation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence, Union

from .directives import (
    CallMachine,
    Handler,
    LLMCall,
    MemoryOp,
    Observability,
    ResponseSampler,
)
from .governance import (
    PERMISSIVE,
    GovernancePolicy,
    govern,
    interpret_governed,
)
from .itree import (
    BoundedVerdict,
    Fuel,
    ITree,
    Ret,
    Vis,
    bind,
    combine_verdicts,
    fails,
    holds,
    ret,
    run_pure,
    unknown,
    vis,
)

Morphism = Callable[[Any], ITree]

identity: Morphism = ret


def code(f: Callable[[Any], Any]) -> Morphism:
    """Pure computation: ``code(f)(a)`` is ``ret(f(a))``; no events."""
    return lambda a: ret(f(a))


def _primitive(directive_type, build, extract) -> Morphism:
    def morph(a):
        d = build(a)
        if type(d) is not directive_type:
            raise TypeError(
                f"builder produced {type(d).__name__}, expected {directive_type.__name__}"
            )
        return vis(d, lambda x: ret(extract(x)))

    return morph


def reason(build: Callable[[Any], LLMCall], extract) -> Morphism:
    """One LLM call: build the directive from the input, extract from the
    response."""
    return _primitive(LLMCall, build, extract)


def memory(build: Callable[[Any], MemoryOp], extract) -> Morphism:
    return _primitive(MemoryOp, build, extract)


def call(build: Callable[[Any], CallMachine], extract) -> Morphism:
    return _primitive(CallMachine, build, extract)


def seq_compose(f: Morphism, g: Morphism) -> Morphism:
    return lambda a: bind(f(a), g)


def _as_pair(p):
    return p if type(p) is tuple and len(p) == 2 else (p, p)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """Independent composition on pairs: f's tree runs to completion,
    then g's, then the results are paired."""

    def morph(p):
        a, c = _as_pair(p)
        return bind(f(a), lambda b: bind(g(c), lambda d: ret((b, d))))

    return morph


def branch(pred: Callable[[Any], bool], f: Morphism, g: Morphism) -> Morphism:
    return lambda a: f(a) if pred(a) else g(a)


# Structural morphisms. All pure; inverses compose to identity.

associator: Morphism = code(lambda p: (p[0][0], (p[0][1], p[1])))
associator_inv: Morphism = code(lambda p: ((p[0], p[1][0]), p[1][1]))
left_unitor: Morphism = code(lambda p: p[1])
left_unitor_inv: Morphism = code(lambda a: (None, a))
right_unitor: Morphism = code(lambda p: p[0])
right_unitor_inv: Morphism = code(lambda a: (a, None))
braiding: Morphism = code(lambda p: (p[1], p[0]))


def _compare_paths(
    path1: Morphism, path2: Morphism, samples: Iterable, fuel: Fuel, label: str
) -> BoundedVerdict:
    for s in samples:
        ok1, v1 = run_pure(path1(s), fuel)
        ok2, v2 = run_pure(path2(s), fuel)
        if not ok1 or not ok2:
            return unknown(f"{label}: {v1 if not ok1 else v2}")
        if v1 != v2:
            return fails((f"{label} diverges on {s!r}: {v1!r} != {v2!r}",))
    return holds()


def check_pentagon(samples: Iterable, fuel: Fuel = 64) -> BoundedVerdict:
    """Both re-association routes from ((A,B),C),D agree on every sample."""
    path1 = seq_compose(associator, associator)
    path2 = seq_compose(
        seq_compose(tensor(associator, identity), associator),
        tensor(identity, associator),
    )
    return _compare_paths(path1, path2, samples, fuel, "pentagon")


def check_triangle(samples: Iterable, fuel: Fuel = 64) -> BoundedVerdict:
    """Re-associating past the unit agrees with dropping it directly."""
    path1 = seq_compose(associator, tensor(identity, left_unitor))
    path2 = tensor(right_unitor, identity)
    return _compare_paths(path1, path2, samples, fuel, "triangle")


def check_hexagon(samples: Iterable, fuel: Fuel = 64) -> BoundedVerdict:
    """The two braiding routes around the associator agree."""
    path1 = seq_compose(seq_compose(associator, braiding), associator)
    path2 = seq_compose(
        seq_compose(tensor(braiding, identity), associator),
        tensor(identity, braiding),
    )
    return _compare_paths(path1, path2, samples, fuel, "hexagon")


def interp_tensor_distribute_check(
    f: Morphism,
    g: Morphism,
    handler: Handler,
    inputs: Iterable,
    fuel: Fuel,
    policy: GovernancePolicy = PERMISSIVE,
) -> BoundedVerdict:
    """Interpretation of ``tensor(f, g)`` equals interpreting ``f``, then
    ``g`` with the first result paired in: values and traces both match."""
    gh = govern(handler)
    for p in inputs:
        a, c = _as_pair(p)
        whole = interpret_governed(gh, policy, tensor(f, g)((a, c)), fuel)
        first = interpret_governed(gh, policy, f(a), fuel)
        if not first.completed:
            return unknown("left component did not complete")
        b = first.value
        second = interpret_governed(
            gh, policy, bind(g(c), lambda d: ret((b, d))), fuel
        )
        if not whole.completed or not second.completed:
            return unknown("tensor run did not complete")
        if whole.value != second.value or whole.trace != first.trace + second.trace:
            return fails((f"tensor interpretation differs on {p!r}",))
    return holds()


# Register machine.

@dataclass(frozen=True, slots=True)
class Inc:
    reg: int


@dataclass(frozen=True, slots=True)
class DecJz:
    reg: int
    target: int


@dataclass(frozen=True, slots=True)
class Halt:
    pass


Instruction = Union[Inc, DecJz, Halt]


@dataclass(frozen=True)
class RegisterProgram:
    instructions: tuple
    registers: int

    def __post_init__(self):
        n = len(self.instructions)
        for i, ins in enumerate(self.instructions):
            if type(ins) is Inc or type(ins) is DecJz:
                if not 0 <= ins.reg < self.registers:
                    raise ValueError(f"instruction {i}: register out of range")
            if type(ins) is DecJz and not 0 <= ins.target < n:
                raise ValueError(f"instruction {i}: jump target out of range")


def _step(ins: Instruction, pc: int, regs: tuple) -> "tuple[int, tuple] | None":
    """One executed instruction; None means halt."""
    if type(ins) is Halt:
        return None
    if type(ins) is Inc:
        regs = regs[: ins.reg] + (regs[ins.reg] + 1,) + regs[ins.reg + 1:]
        return pc + 1, regs
    if regs[ins.reg] == 0:
        return ins.target, regs
    regs = regs[: ins.reg] + (regs[ins.reg] - 1,) + regs[ins.reg + 1:]
    return pc + 1, regs


def _step_message(pc: int, regs: tuple) -> str:
    return f"pc={pc};regs={','.join(str(r) for r in regs)}"


def parse_step_message(message: str) -> "tuple[int, tuple]":
    pc_part, regs_part = message.split(";", 1)
    regs = tuple(int(r) for r in regs_part[len("regs="):].split(","))
    return int(pc_part[len("pc="):]), regs


def translate_register_program(p: RegisterProgram, fuel: int, pc: int = 0) -> ITree:
    """Fuel-unrolled translation into a directive tree.

    Each executed instruction emits one observability directive recording
    the program counter and the post-step registers. Halt, running past
    the end, or running out of fuel all return unit.
    """
    return _translate(p, fuel, pc, (0,) * p.registers)


def _translate(p: RegisterProgram, fuel: int, pc: int, regs: tuple) -> ITree:
    def step():
        if fuel <= 0 or not 0 <= pc < len(p.instructions):
            return Ret(None)
        outcome = _step(p.instructions[pc], pc, regs)
        if outcome is None:
            return Ret(None)
        pc2, regs2 = outcome
        d = Observability(_step_message(pc, regs2))
        return Vis(d, lambda _x: _translate(p, fuel - 1, pc2, regs2))

    return ITree(step)


def reference_register_run(p: RegisterProgram, fuel: int) -> "tuple[tuple, list]":
    """Direct loop over the instruction set; the independent oracle for
    the tree translation. Returns final registers and the per-step log of
    (pc, post-step registers)."""
    regs = (0,) * p.registers
    pc = 0
    steps = []
    while fuel > 0 and 0 <= pc < len(p.instructions):
        outcome = _step(p.instructions[pc], pc, regs)
        if outcome is None:
            break
        steps.append((pc, outcome[1]))
        pc, regs = outcome
        fuel -= 1
    return regs, steps


def register_tree_steps(p: RegisterProgram, fuel: int, drive_fuel: int) -> "list | None":
    """The (pc, registers) log read off the translated tree by a direct
    walk, or None if the walk did not complete."""
    from .itree import skip_taus

    tree = translate_register_program(p, fuel)
    steps = []
    while True:
        node, drive_fuel, looped = skip_taus(tree, drive_fuel)
        if node is None or looped:
            return None
        if type(node) is Ret:
            return steps
        if drive_fuel <= 0:
            return None
        drive_fuel -= 1
        steps.append(parse_step_message(node.event.message))
        tree = node.cont(None)


def enumerate_register_programs(
    max_len: int, registers: int = 2, targets: Sequence[int] = (0, 1)
) -> "Iterable[RegisterProgram]":
    """Every program up to ``max_len`` instructions over a small alphabet:
    Inc and DecJz on each register, jumps to the given targets (where in
    bounds), and Halt."""
    for n in range(1, max_len + 1):
        symbols: list[Instruction] = [Inc(r) for r in range(registers)]
        symbols += [
            DecJz(r, t) for r in range(registers) for t in targets if t < n
        ]
        symbols.append(Halt())
        for combo in itertools.product(symbols, repeat=n):
            yield RegisterProgram(combo, registers)


def check_register_agreement(
    programs: Iterable[RegisterProgram],
    fuel: int,
    sampler: ResponseSampler,
    check_governed: bool = True,
    gov_fuel: int = 4096,
) -> BoundedVerdict:
    """Translated trees agree step-for-step with the reference interpreter,
    and (optionally) their governed images pass the safety check."""
    from .governance import gov_safe_check
    from .directives import mock_handler

    gh = govern(mock_handler(0))
    verdicts = []
    for p in programs:
        _, expected = reference_register_run(p, fuel)
        actual = register_tree_steps(p, fuel, drive_fuel=4 * fuel + 8)
        if actual != expected:
            return fails((f"register trace mismatch for {p!r}",))
        if check_governed:
            v = gov_safe_check(
                gh.transform(translate_register_program(p, fuel)),
                False,
                gov_fuel,
                sampler,
            )
            if v.is_fails:
                return fails((f"governed register program unsafe: {p!r}",) + v.witness)
            verdicts.append(v)
    return combine_verdicts(verdicts) if verdicts else holds()
