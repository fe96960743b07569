#!/usr/bin/env python3
"""Micro-benchmark: governed vs ungoverned interpretation cost.

Informational only; there is no pass/fail bound. Reports median
per-run latency for a few program shapes under both interpreters.
"""

import argparse
import statistics
import time

from govtree.directives import mock_handler
from govtree.governance import PERMISSIVE, govern, interpret_governed, interpret_ungoverned
from govtree.program import compile_ast

SHAPES = {
    "pure": {"kind": "code", "expr": {"op": "add", "args": [{"op": "input"}, {"op": "int", "value": 1}]}},
    "one-call": {
        "kind": "reason", "model": "m", "prompt": {"op": "input"},
        "extract": {"op": "fst", "args": [{"op": "input"}]},
    },
    "pipeline": {
        "kind": "seq",
        "steps": [
            {"kind": "reason", "model": "m", "prompt": {"op": "input"},
             "extract": {"op": "fst", "args": [{"op": "input"}]}},
            {"kind": "memory", "mop": "put", "key": {"op": "str", "value": "k"},
             "value": {"op": "input"}, "extract": {"op": "fst", "args": [{"op": "input"}]}},
            {"kind": "call", "machine": "calc", "payload": {"op": "input"},
             "extract": {"op": "fst", "args": [{"op": "input"}]}},
        ],
    },
}


def bench(fn, iterations, warmup):
    for i in range(warmup):
        fn(i)
    samples = []
    for i in range(iterations):
        t0 = time.perf_counter()
        fn(i)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples) * 1e6


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iterations", type=int, default=2000)
    parser.add_argument("--warmup", type=int, default=200)
    args = parser.parse_args()

    h = mock_handler(0)
    gh = govern(h)
    print(f"{'shape':<10} {'governed us':>12} {'ungoverned us':>14} {'ratio':>7}")
    for name, ast in SHAPES.items():
        governed = bench(
            lambda i: interpret_governed(gh, PERMISSIVE, compile_ast(ast)(i), 10_000),
            args.iterations, args.warmup,
        )
        plain = bench(
            lambda i: interpret_ungoverned(h, compile_ast(ast)(i), 10_000),
            args.iterations, args.warmup,
        )
        print(f"{name:<10} {governed:>12.1f} {plain:>14.1f} {governed / plain:>7.2f}")


if __name__ == "__main__":
    main()
