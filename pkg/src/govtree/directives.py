"""The fixed directive signature: every effect the runtime can request.

There are exactly 14 directive variants. Each one is a frozen dataclass
whose fields are printable scalars (strings and ints), each declares the
type of answer the environment produces for it, and each maps to at most
one capability. ``RecordStep`` and ``Observability`` are bookkeeping and
require no capability at all.

This module also owns the canonical textual encoding used by traces,
ledger entries, and seeded answer generation: ``TAG{field=value,...}``
with fields in declaration order and no added whitespace. Delimiter
characters and backslashes inside string values are backslash-escaped so
the encoding stays injective.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, fields
from enum import Enum
from typing import Callable, Union

from .itree import ITree, ret


@dataclass(frozen=True, slots=True)
class LLMCall:
    model: str
    prompt: str


@dataclass(frozen=True, slots=True)
class HTTPRequest:
    method: str
    url: str
    body: str


@dataclass(frozen=True, slots=True)
class FileOp:
    op: str
    path: str


@dataclass(frozen=True, slots=True)
class CallMachine:
    machine: str
    payload: str


@dataclass(frozen=True, slots=True)
class MemoryOp:
    op: str
    key: str
    value: str


@dataclass(frozen=True, slots=True)
class DBOp:
    query: str


@dataclass(frozen=True, slots=True)
class ExecOp:
    command: str


@dataclass(frozen=True, slots=True)
class RecordStep:
    step: str


@dataclass(frozen=True, slots=True)
class Broadcast:
    channel: str
    message: str


@dataclass(frozen=True, slots=True)
class EmitEvent:
    name: str
    payload: str


@dataclass(frozen=True, slots=True)
class GraphQLRequest:
    endpoint: str
    query: str


@dataclass(frozen=True, slots=True)
class WebSocketOp:
    op: str
    url: str
    message: str


@dataclass(frozen=True, slots=True)
class MCPCall:
    server: str
    method: str


@dataclass(frozen=True, slots=True)
class Observability:
    message: str


DirectiveEvent = Union[
    LLMCall, HTTPRequest, FileOp, CallMachine, MemoryOp, DBOp, ExecOp,
    RecordStep, Broadcast, EmitEvent, GraphQLRequest, WebSocketOp, MCPCall,
    Observability,
]

DIRECTIVE_TYPES = (
    LLMCall, HTTPRequest, FileOp, CallMachine, MemoryOp, DBOp, ExecOp,
    RecordStep, Broadcast, EmitEvent, GraphQLRequest, WebSocketOp, MCPCall,
    Observability,
)


# Answer records. Unit-valued directives answer with None.

@dataclass(frozen=True, slots=True)
class LLMResponse:
    status: int
    content: str


@dataclass(frozen=True, slots=True)
class HTTPResponse:
    status: int
    content: str


@dataclass(frozen=True, slots=True)
class FileResult:
    status: int
    content: str


@dataclass(frozen=True, slots=True)
class CallMachineResult:
    status: int
    content: str


@dataclass(frozen=True, slots=True)
class MemoryResult:
    status: int
    content: str


@dataclass(frozen=True, slots=True)
class DBResult:
    status: int
    content: str


@dataclass(frozen=True, slots=True)
class ExecResult:
    status: int
    content: str


@dataclass(frozen=True, slots=True)
class WebSocketResult:
    status: int
    content: str


ANSWER_TYPES: dict[type, type | None] = {
    LLMCall: LLMResponse,
    HTTPRequest: HTTPResponse,
    FileOp: FileResult,
    CallMachine: CallMachineResult,
    MemoryOp: MemoryResult,
    DBOp: DBResult,
    ExecOp: ExecResult,
    RecordStep: None,
    Broadcast: None,
    EmitEvent: None,
    GraphQLRequest: HTTPResponse,
    WebSocketOp: WebSocketResult,
    MCPCall: CallMachineResult,
    Observability: None,
}


class Capability(Enum):
    """The finite capability universe gating effectful directives."""

    LLM_REASON = "llm_reason"
    MEMORY = "memory"
    MACHINE_CALL = "machine_call"
    HTTP = "http"
    FILE = "file"
    DB = "db"
    EXEC = "exec"
    BROADCAST = "broadcast"
    WEBSOCKET = "websocket"


_CAPABILITY_FOR: dict[type, Capability | None] = {
    LLMCall: Capability.LLM_REASON,
    MemoryOp: Capability.MEMORY,
    CallMachine: Capability.MACHINE_CALL,
    MCPCall: Capability.MACHINE_CALL,
    HTTPRequest: Capability.HTTP,
    GraphQLRequest: Capability.HTTP,
    FileOp: Capability.FILE,
    DBOp: Capability.DB,
    ExecOp: Capability.EXEC,
    Broadcast: Capability.BROADCAST,
    EmitEvent: Capability.BROADCAST,
    WebSocketOp: Capability.WEBSOCKET,
    RecordStep: None,
    Observability: None,
}


def directive_tag(d: DirectiveEvent) -> str:
    """The variant name of a directive; injective over the 14 variants."""
    return type(d).__name__


def is_observability(d: DirectiveEvent) -> bool:
    return type(d) is Observability


def capability_for_directive(d: DirectiveEvent) -> Capability | None:
    """The capability a directive requires, or None for bookkeeping ones."""
    return _CAPABILITY_FOR[type(d)]


_ESCAPES = {
    "\\": "\\\\",
    "{": "\\{",
    "}": "\\}",
    ",": "\\,",
    "=": "\\=",
    "\n": "\\n",
}


def _escape(s: str) -> str:
    if not any(c in s for c in _ESCAPES):
        return s
    return "".join(_ESCAPES.get(c, c) for c in s)


def encode_directive(d: DirectiveEvent) -> str:
    """Canonical text form ``TAG{field=value,...}``; injective."""
    parts = []
    for f in fields(d):
        v = getattr(d, f.name)
        parts.append(f"{f.name}={_escape(v) if isinstance(v, str) else v}")
    return f"{directive_tag(d)}{{{','.join(parts)}}}"


def derive_rng(*parts) -> random.Random:
    """A deterministic RNG keyed by the given parts, stable across runs."""
    key = "\x1f".join(str(p) for p in parts).encode("utf-8")
    seed = int.from_bytes(hashlib.sha256(key).digest()[:8], "big")
    return random.Random(seed)


def _make_answer(rng: random.Random, answer_type: type | None):
    if answer_type is None:
        return None
    return answer_type(
        status=rng.randrange(100, 600),
        content=f"{answer_type.__name__.lower()}-{rng.randrange(1_000_000)}",
    )


def mock_answer(seed: int, d: DirectiveEvent):
    """The deterministic answer a seeded mock environment gives ``d``."""
    return _make_answer(
        derive_rng("mock", seed, encode_directive(d)), ANSWER_TYPES[type(d)]
    )


Handler = Callable[[DirectiveEvent], ITree]


def mock_handler(seed: int) -> Handler:
    """A pure base handler: answers every directive from a seeded generator.

    The returned trees contain no events; same seed and directive always
    produce the same answer.
    """
    return lambda d: ret(mock_answer(seed, d))


@dataclass(frozen=True)
class ResponseSampler:
    """Finite, deterministic answer sampling for directive events.

    Unit-answered directives have exactly one answer. Record-answered
    directives get ``samples_per_event`` distinct seeded samples. Used by
    bounded checkers wherever a property quantifies over all answers.
    """

    seed: int = 0
    samples_per_event: int = 2

    def answers(self, event: DirectiveEvent) -> tuple:
        answer_type = ANSWER_TYPES[type(event)]
        if answer_type is None:
            return (None,)
        enc = encode_directive(event)
        return tuple(
            _make_answer(derive_rng("sample", self.seed, i, enc), answer_type)
            for i in range(self.samples_per_event)
        )
