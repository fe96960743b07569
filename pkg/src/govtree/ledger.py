"""Hash-chained, tamper-evident ledger over trace events.

Every trace event has an injective byte encoding (one type byte, then
length-prefixed UTF-8 fields in fixed order). A ledger entry stores the
event, its encoding, the previous entry's hash, and
``sha256(prev_hash || data)``. The chain is rooted at 32 zero bytes.

An entry is well formed when its stored data matches its event's
encoding and its stored hash satisfies the hash equation; a ledger is
valid when every entry is well formed and consecutively linked. Changing
a recorded event while keeping the stored hashes breaks well-formedness,
up to SHA-256 collisions, which the tamper checker treats as unreachable
at this scale.

File format (UTF-8, LF): header line ``GOVLEDGER v1 sha256``, then one
line per entry: ``hex(prev_hash) hex(hash) base64(data)``.
"""

from __future__ import annotations

import base64
import hashlib
import struct
from dataclasses import dataclass
from typing import Iterable

from .trace import GovEntry, IoEntry, Trace, TraceEvent

GENESIS_HASH = bytes(32)

_TYPE_GOV = 0x01
_TYPE_IO = 0x02


def _field(data: str) -> bytes:
    raw = data.encode("utf-8")
    return struct.pack(">I", len(raw)) + raw


def encode_event(ev: TraceEvent) -> bytes:
    if type(ev) is GovEntry:
        return bytes([_TYPE_GOV]) + _field(ev.stage) + bytes([1 if ev.passed else 0])
    if type(ev) is IoEntry:
        return bytes([_TYPE_IO]) + _field(ev.directive)
    raise TypeError(f"not a trace event: {ev!r}")


def decode_event(data: bytes) -> TraceEvent:
    if len(data) < 5:
        raise ValueError("truncated event data")
    kind = data[0]
    (n,) = struct.unpack(">I", data[1:5])
    text = data[5:5 + n].decode("utf-8")
    if len(data[5:5 + n]) != n:
        raise ValueError("truncated event field")
    rest = data[5 + n:]
    if kind == _TYPE_GOV:
        if len(rest) != 1 or rest[0] not in (0, 1):
            raise ValueError("malformed governance entry")
        return GovEntry(text, rest[0] == 1)
    if kind == _TYPE_IO:
        if rest:
            raise ValueError("trailing bytes after io entry")
        return IoEntry(text)
    raise ValueError(f"unknown event type byte {kind:#x}")


def entry_hash(prev_hash: bytes, data: bytes) -> bytes:
    return hashlib.sha256(prev_hash + data).digest()


@dataclass(frozen=True, slots=True)
class LedgerEntry:
    event: TraceEvent
    data: bytes
    prev_hash: bytes
    hash: bytes

    def well_formed(self) -> bool:
        return self.data == encode_event(self.event) and self.hash == entry_hash(
            self.prev_hash, self.data
        )


@dataclass(frozen=True)
class Ledger:
    entries: tuple

    def events(self) -> Trace:
        return tuple(e.event for e in self.entries)


def trace_to_ledger(trace: Iterable[TraceEvent]) -> Ledger:
    entries = []
    prev = GENESIS_HASH
    for ev in trace:
        data = encode_event(ev)
        h = entry_hash(prev, data)
        entries.append(LedgerEntry(ev, data, prev, h))
        prev = h
    return Ledger(tuple(entries))


def ledger_valid(ledger: Ledger) -> "tuple[bool, int | None]":
    """(True, None) for a valid ledger, else (False, first bad index)."""
    prev = GENESIS_HASH
    for i, entry in enumerate(ledger.entries):
        if entry.prev_hash != prev or not entry.well_formed():
            return False, i
        prev = entry.hash
    return True, None


@dataclass(frozen=True)
class TamperReport:
    mutations: int
    detected: int

    @property
    def all_detected(self) -> bool:
        return self.detected == self.mutations


def _substitute(entries: list, idx: int, new_event: TraceEvent, keep_data: bool) -> Ledger:
    old = entries[idx]
    data = old.data if keep_data else encode_event(new_event)
    entries = list(entries)
    entries[idx] = LedgerEntry(new_event, data, old.prev_hash, old.hash)
    return Ledger(tuple(entries))


def tamper_check(ledger: Ledger, mutations: int, seed: int) -> TamperReport:
    """Substitute random events into random entries, keeping the stored
    hashes, and count how many substitutions break validity. Every one
    must be detected."""
    from .directives import derive_rng
    from .gen import gen_trace_event

    if not ledger.entries:
        raise ValueError("tamper_check needs a nonempty ledger")
    rng = derive_rng("tamper", seed)
    detected = 0
    for _ in range(mutations):
        idx = rng.randrange(len(ledger.entries))
        current = ledger.entries[idx].event
        new_event = gen_trace_event(rng)
        while new_event == current:
            new_event = gen_trace_event(rng)
        mutated = _substitute(list(ledger.entries), idx, new_event, rng.random() < 0.5)
        ok, _ = ledger_valid(mutated)
        if not ok:
            detected += 1
    return TamperReport(mutations, detected)


LEDGER_HEADER = "GOVLEDGER v1 sha256"


def format_ledger(ledger: Ledger) -> str:
    lines = [LEDGER_HEADER]
    for e in ledger.entries:
        lines.append(
            f"{e.prev_hash.hex()} {e.hash.hex()} "
            f"{base64.b64encode(e.data).decode('ascii')}"
        )
    return "".join(line + "\n" for line in lines)


def parse_ledger(text: str) -> Ledger:
    lines = text.splitlines()
    if not lines or lines[0] != LEDGER_HEADER:
        raise ValueError("missing ledger header")
    entries = []
    for line_no, line in enumerate(lines[1:], 2):
        if not line:
            continue
        parts = line.split(" ")
        if len(parts) != 3:
            raise ValueError(f"line {line_no}: malformed ledger entry")
        prev_hash = bytes.fromhex(parts[0])
        h = bytes.fromhex(parts[1])
        data = base64.b64decode(parts[2], validate=True)
        entries.append(LedgerEntry(decode_event(data), data, prev_hash, h))
    return Ledger(tuple(entries))
