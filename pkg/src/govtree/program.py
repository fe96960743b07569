"""Program files: a serializable AST compiled into directive trees.

A program file is a JSON document::

    {"version": 1, "input": <value>, "body": <node>}

Values are ints, strings, booleans, null (unit), or two-element lists
(pairs, possibly nested). Node kinds are ``code``, ``reason``,
``memory``, ``call``, ``seq``, ``tensor``, ``branch``, and
``register_machine``; unknown kinds are rejected at parse time.

Pure functions inside nodes are written in a tiny total expression
language evaluated against the node's input value. Operations never
raise; mixed types go through fixed coercions:

* to_int: ints as-is, booleans 0/1, strings their length, unit 0,
  pairs the sum of both halves.
* to_str: strings as-is, ints decimal, booleans ``true``/``false``,
  unit empty, pairs ``left:right``.
* to_bool: nonzero, nonempty; pairs are true, unit is false.
* fst/snd on a non-pair return the value unchanged; tensor applied to a
  non-pair duplicates it.
* mod/div by zero yield 0.

A directive answer enters its extract expression as the pair
``(status, content)``.

The compiler in this module is the production pipeline: it builds
interaction trees. The independent small-step evaluator lives in
``reference`` and deliberately shares none of this evaluation code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .capability import CapSet, cap_empty, cap_singleton, cap_union
from .category import (
    DecJz,
    Halt,
    Inc,
    Morphism,
    RegisterProgram,
    branch,
    call,
    code,
    memory,
    reason,
    seq_compose,
    tensor,
    translate_register_program,
)
from .directives import Capability, CallMachine, LLMCall, MemoryOp


class ProgramError(ValueError):
    """Raised for malformed program documents."""


def to_int(v) -> int:
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return len(v)
    if isinstance(v, tuple):
        return to_int(v[0]) + to_int(v[1])
    return 0


def to_str(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, tuple):
        return f"{to_str(v[0])}:{to_str(v[1])}"
    return ""


def to_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v != 0
    if isinstance(v, str):
        return v != ""
    if isinstance(v, tuple):
        return True
    return False


_BINARY = ("add", "sub", "mul", "mod", "concat", "pair", "eq", "lt", "and", "or")
_UNARY = ("fst", "snd", "len", "not")
_LEAF = ("input", "int", "str", "unit")


def validate_expr(expr) -> None:
    if not isinstance(expr, dict) or "op" not in expr:
        raise ProgramError(f"expression must be an object with an op: {expr!r}")
    op = expr["op"]
    if op in _LEAF:
        if op == "int" and not isinstance(expr.get("value"), int):
            raise ProgramError("int literal needs an integer value")
        if op == "str" and not isinstance(expr.get("value"), str):
            raise ProgramError("str literal needs a string value")
        return
    args = expr.get("args")
    if op in _UNARY:
        if not isinstance(args, list) or len(args) != 1:
            raise ProgramError(f"{op} takes one argument")
    elif op in _BINARY:
        if not isinstance(args, list) or len(args) != 2:
            raise ProgramError(f"{op} takes two arguments")
    else:
        raise ProgramError(f"unknown expression op {op!r}")
    for a in args:
        validate_expr(a)


def eval_expr(expr: dict, x):
    op = expr["op"]
    if op == "input":
        return x
    if op == "int" or op == "str":
        return expr["value"]
    if op == "unit":
        return None
    args = expr["args"]
    if op == "pair":
        return (eval_expr(args[0], x), eval_expr(args[1], x))
    if op == "fst":
        v = eval_expr(args[0], x)
        return v[0] if isinstance(v, tuple) else v
    if op == "snd":
        v = eval_expr(args[0], x)
        return v[1] if isinstance(v, tuple) else v
    if op == "len":
        return to_int(eval_expr(args[0], x))
    if op == "not":
        return not to_bool(eval_expr(args[0], x))
    a = eval_expr(args[0], x)
    b = eval_expr(args[1], x)
    if op == "add":
        return to_int(a) + to_int(b)
    if op == "sub":
        return to_int(a) - to_int(b)
    if op == "mul":
        return to_int(a) * to_int(b)
    if op == "mod":
        n = to_int(b)
        return to_int(a) % n if n != 0 else 0
    if op == "concat":
        return to_str(a) + to_str(b)
    if op == "eq":
        return a == b
    if op == "lt":
        return to_int(a) < to_int(b)
    if op == "and":
        return to_bool(a) and to_bool(b)
    return to_bool(a) or to_bool(b)


_NODE_KINDS = (
    "code", "reason", "memory", "call", "seq", "tensor", "branch",
    "register_machine",
)


def validate_ast(node) -> None:
    if not isinstance(node, dict) or "kind" not in node:
        raise ProgramError(f"node must be an object with a kind: {node!r}")
    kind = node["kind"]
    if kind not in _NODE_KINDS:
        raise ProgramError(f"unknown node kind {kind!r}")
    if kind == "code":
        validate_expr(node.get("expr"))
    elif kind == "reason":
        _require_str(node, "model")
        validate_expr(node.get("prompt"))
        validate_expr(node.get("extract"))
    elif kind == "memory":
        _require_str(node, "mop")
        validate_expr(node.get("key"))
        validate_expr(node.get("value"))
        validate_expr(node.get("extract"))
    elif kind == "call":
        _require_str(node, "machine")
        validate_expr(node.get("payload"))
        validate_expr(node.get("extract"))
    elif kind == "seq":
        steps = node.get("steps")
        if not isinstance(steps, list) or not steps:
            raise ProgramError("seq needs a nonempty list of steps")
        for s in steps:
            validate_ast(s)
    elif kind == "tensor":
        validate_ast(node.get("left"))
        validate_ast(node.get("right"))
    elif kind == "branch":
        validate_expr(node.get("pred"))
        validate_ast(node.get("then"))
        validate_ast(node.get("else"))
    else:
        _parse_register(node)  # validates


def _require_str(node: dict, key: str) -> str:
    v = node.get(key)
    if not isinstance(v, str):
        raise ProgramError(f"{node.get('kind')} needs a string {key!r}")
    return v


def _parse_register(node: dict) -> "tuple[RegisterProgram, int]":
    registers = node.get("registers")
    fuel = node.get("fuel")
    listing = node.get("program")
    if not isinstance(registers, int) or registers < 1:
        raise ProgramError("register_machine needs a positive register count")
    if not isinstance(fuel, int) or fuel < 0:
        raise ProgramError("register_machine needs a non-negative fuel")
    if not isinstance(listing, list):
        raise ProgramError("register_machine needs an instruction list")
    instructions = []
    for ins in listing:
        if not isinstance(ins, list) or not ins:
            raise ProgramError(f"malformed instruction {ins!r}")
        name = ins[0]
        if name == "inc" and len(ins) == 2:
            instructions.append(Inc(ins[1]))
        elif name == "decjz" and len(ins) == 3:
            instructions.append(DecJz(ins[1], ins[2]))
        elif name == "halt" and len(ins) == 1:
            instructions.append(Halt())
        else:
            raise ProgramError(f"unknown instruction {ins!r}")
    try:
        program = RegisterProgram(tuple(instructions), registers)
    except ValueError as e:
        raise ProgramError(str(e)) from None
    return program, fuel


def _answer_value(answer):
    return (answer.status, answer.content)


def compile_ast(node: dict) -> Morphism:
    """Compile a validated AST into a morphism over interaction trees."""
    kind = node["kind"]
    if kind == "code":
        expr = node["expr"]
        return code(lambda a: eval_expr(expr, a))
    if kind == "reason":
        model, prompt, extract = node["model"], node["prompt"], node["extract"]
        return reason(
            lambda a: LLMCall(model=model, prompt=to_str(eval_expr(prompt, a))),
            lambda ans: eval_expr(extract, _answer_value(ans)),
        )
    if kind == "memory":
        mop, key, value, extract = node["mop"], node["key"], node["value"], node["extract"]
        return memory(
            lambda a: MemoryOp(
                op=mop, key=to_str(eval_expr(key, a)), value=to_str(eval_expr(value, a))
            ),
            lambda ans: eval_expr(extract, _answer_value(ans)),
        )
    if kind == "call":
        machine, payload, extract = node["machine"], node["payload"], node["extract"]
        return call(
            lambda a: CallMachine(machine=machine, payload=to_str(eval_expr(payload, a))),
            lambda ans: eval_expr(extract, _answer_value(ans)),
        )
    if kind == "seq":
        morphs = [compile_ast(s) for s in node["steps"]]
        composed = morphs[0]
        for m in morphs[1:]:
            composed = seq_compose(composed, m)
        return composed
    if kind == "tensor":
        return tensor(compile_ast(node["left"]), compile_ast(node["right"]))
    if kind == "branch":
        pred = node["pred"]
        return branch(
            lambda a: to_bool(eval_expr(pred, a)),
            compile_ast(node["then"]),
            compile_ast(node["else"]),
        )
    program, fuel = _parse_register(node)
    return lambda a: translate_register_program(program, fuel)


def ast_caps(node: dict) -> CapSet:
    """The capability bound a program requires, by construction."""
    kind = node["kind"]
    if kind == "reason":
        return cap_singleton(Capability.LLM_REASON)
    if kind == "memory":
        return cap_singleton(Capability.MEMORY)
    if kind == "call":
        return cap_singleton(Capability.MACHINE_CALL)
    caps = cap_empty()
    if kind == "seq":
        for s in node["steps"]:
            caps = cap_union(caps, ast_caps(s))
    elif kind == "tensor":
        caps = cap_union(ast_caps(node["left"]), ast_caps(node["right"]))
    elif kind == "branch":
        caps = cap_union(ast_caps(node["then"]), ast_caps(node["else"]))
    return caps


def _value_from_json(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, list) and len(v) == 2:
        return (_value_from_json(v[0]), _value_from_json(v[1]))
    raise ProgramError(f"unsupported value {v!r} (pairs are 2-element lists)")


def value_to_json(v):
    if isinstance(v, tuple):
        return [value_to_json(v[0]), value_to_json(v[1])]
    return v


def format_value(v) -> str:
    """Canonical printable form of a run result."""
    return json.dumps(value_to_json(v), sort_keys=True)


@dataclass(frozen=True)
class Program:
    input_value: Any
    body: dict

    def compile(self) -> Morphism:
        return compile_ast(self.body)

    def caps(self) -> CapSet:
        return ast_caps(self.body)


def parse_program(text: str) -> Program:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProgramError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict) or doc.get("version") != 1:
        raise ProgramError("program document must have version 1")
    if "body" not in doc:
        raise ProgramError("program document needs a body")
    validate_ast(doc["body"])
    return Program(_value_from_json(doc.get("input")), doc["body"])


def serialize_program(program: Program) -> str:
    return json.dumps(
        {
            "version": 1,
            "input": value_to_json(program.input_value),
            "body": program.body,
        },
        indent=2,
    ) + "\n"
