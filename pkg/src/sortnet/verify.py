"""Correctness checks for comparator networks.

Exhaustive checks rely on the 0-1 principle: a network sorts every input iff
it sorts every binary input. Input ``k`` of an exhaustive scan sets channel
``c`` to bit ``n-1-c`` of ``k``, so scanning ``k`` upward visits inputs in
lexicographic order.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from sortnet import kernels
from sortnet.core import BitVector, Network, check, pack_codes

EXHAUSTIVE_LIMIT = 26
SORTS_ALL = "sorts-all"
COUNTEREXAMPLE = "counterexample"


class ExhaustiveLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: BitVector | None = None
    inputs_checked: int = 0

    @property
    def sorts(self) -> bool:
        return self.status == SORTS_ALL

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else str(self.witness),
            "inputs_checked": self.inputs_checked,
        }


def is_sorted(v: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(v, v[1:]))


def unsorted_width(v: Sequence[int]) -> int:
    """Length of ``y`` when ``v`` is written as ``0^a y 1^b`` with maximal a, b."""
    n = len(v)
    a = 0
    while a < n and v[a] == 0:
        a += 1
    b = 0
    while b < n - a and v[n - 1 - b] == 1:
        b += 1
    return n - a - b


def _window_codes(n: int, w: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Codes of all inputs with unsorted width exactly ``w``, ascending."""
    if w < 2 or w > n:
        return
    middle = 1 << (w - 2)
    # fewer leading zeros means a higher leading 1, hence a larger code
    for a in range(n - w, -1, -1):
        b = n - w - a
        base = ((1 << b) - 1) | (1 << (b + w - 1))
        for z0 in range(0, middle, chunk):
            z = np.arange(z0, min(middle, z0 + chunk), dtype=np.uint64)
            yield np.uint64(base) | (z << np.uint64(b + 1))


@dataclass(frozen=True)
class InputFamily:
    """A set of binary inputs to test; enumerated fewest unsorted bits first,
    then lexicographically. Sorted inputs are never produced."""

    kind: str = "all-binary"
    window_bound: int | None = None
    vectors: tuple[BitVector, ...] | None = None

    @classmethod
    def all_binary(cls) -> "InputFamily":
        return cls("all-binary")

    @classmethod
    def windowed(cls, bound: int) -> "InputFamily":
        return cls("windowed", window_bound=bound)

    @classmethod
    def explicit(cls, vectors) -> "InputFamily":
        return cls("explicit-set", vectors=tuple(BitVector(v) for v in vectors))

    @classmethod
    def parse(cls, text: str) -> "InputFamily":
        """``all``, ``window:<k>`` or a comma-separated list of bitstrings."""
        if text in ("all", "all-binary"):
            return cls.all_binary()
        if text.startswith("window:"):
            return cls.windowed(int(text.split(":", 1)[1]))
        return cls.explicit(BitVector.from_str(s) for s in text.split(",") if s.strip())

    def batches(self, n: int) -> Iterator[np.ndarray]:
        if self.kind == "explicit-set":
            for v in self.vectors:
                if len(v) != n:
                    raise ValueError(f"family vector {v} has width {len(v)}, expected {n}")
            vecs = sorted({v for v in self.vectors if not v.is_sorted()}, key=lambda v: (unsorted_width(v), v))
            if vecs:
                yield np.array([v.code for v in vecs], dtype=np.uint64)
            return
        bound = n if self.kind == "all-binary" else min(n, self.window_bound)
        for w in range(2, bound + 1):
            yield from _window_codes(n, w)

    def vectors_for(self, n: int) -> list[BitVector]:
        return [BitVector.from_code(int(c), n) for batch in self.batches(n) for c in batch]


def _first_unsorted(network: Network, codes: np.ndarray) -> int:
    n = network.n
    words = pack_codes(codes, n)
    kernels.apply_network(words, network.comparator_array())
    bad = np.zeros(words.shape[1], dtype=np.uint64)
    for c in range(n - 1):
        bad |= words[c] & ~words[c + 1]
    tail = codes.size % 64
    if tail:
        bad[-1] &= np.uint64((1 << tail) - 1)
    hits = np.flatnonzero(bad)
    if not hits.size:
        return -1
    word = int(bad[hits[0]])
    return int(hits[0]) * 64 + (word & -word).bit_length() - 1


def _ranges(total: int, parts: int) -> list[tuple[int, int]]:
    # keep boundaries word aligned so workers never share a word
    words = -(-total // 64)
    step = -(-words // parts) * 64
    return [(s, min(total, s + step)) for s in range(0, total, step)]


def _workers(workers: int | None) -> int:
    if workers is None:
        workers = os.cpu_count() or 1
    return max(1, workers) if kernels.RELEASES_GIL else 1


def verify_01(network: Network, limit: int = EXHAUSTIVE_LIMIT, workers: int | None = None) -> Verdict:
    check(network)
    n = network.n
    if n > limit:
        raise ExhaustiveLimitError(f"n={n} exceeds the exhaustive limit {limit}; use a windowed or explicit family")
    total = 1 << n
    comps = network.comparator_array()
    parts = _workers(workers) if n >= 16 else 1
    if parts == 1:
        found = kernels.first_failure(n, comps, 0, total)
    else:
        with ThreadPoolExecutor(parts) as pool:
            hits = list(pool.map(lambda r: kernels.first_failure(n, comps, *r), _ranges(total, parts)))
        found = min((h for h in hits if h >= 0), default=-1)
    if found < 0:
        return Verdict(SORTS_ALL, None, total)
    return Verdict(COUNTEREXAMPLE, BitVector.from_code(found, n), found + 1)


def find_counterexample(network: Network, family: InputFamily | None = None,
                        limit: int = EXHAUSTIVE_LIMIT, backend=None) -> BitVector | None:
    """First input of ``family`` the network leaves unsorted, or ``None``.

    Enumerable families are scanned in order. An all-binary (or windowed)
    family on more than ``limit`` channels is searched with a SAT solver
    instead, using the same ordering.
    """
    check(network)
    family = family or InputFamily.all_binary()
    n = network.n
    if n > limit and family.kind != "explicit-set":
        bound = n if family.kind == "all-binary" else family.window_bound
        return sat_counterexample(network, window_bound=bound, backend=backend)
    return check_family(network, family).witness


def check_family(network: Network, family: InputFamily) -> Verdict:
    """Scan an enumerable family; ``inputs_checked`` counts unsorted inputs
    examined up to and including the witness."""
    check(network)
    checked = 0
    for codes in family.batches(network.n):
        i = _first_unsorted(network, codes)
        if i >= 0:
            return Verdict(COUNTEREXAMPLE, BitVector.from_code(int(codes[i]), network.n), checked + i + 1)
        checked += codes.size
    return Verdict(SORTS_ALL, None, checked)


def sat_counterexample(network: Network, window_bound: int | None = None, backend=None) -> BitVector | None:
    """Counterexample search with a SAT solver over the fixed network.

    Returns the input with the fewest unsorted bits, lexicographically
    smallest among those, or ``None`` if the network sorts every input with
    at most ``window_bound`` unsorted bits.
    """
    from sortnet.backend import SAT, EmbeddedBackend
    from sortnet.encode import CnfFormula

    backend = backend or EmbeddedBackend()
    n = network.n
    if n < 2:
        return None
    bound = n if window_bound is None else min(n, window_bound)
    f = CnfFormula()
    xs = [f.new_var() for _ in range(n)]
    cur = list(xs)
    for lo, hi in network.comparators():
        a, b = cur[lo], cur[hi]
        mn, mx = f.new_var(), f.new_var()
        f.add(-mn, a)
        f.add(-mn, b)
        f.add(mn, -a, -b)
        f.add(mx, -a)
        f.add(mx, -b)
        f.add(-mx, a, b)
        cur[lo], cur[hi] = mn, mx
    breaks = []
    for i in range(n - 1):
        s = f.new_var()
        f.add(-s, cur[i])
        f.add(-s, -cur[i + 1])
        breaks.append(s)
    f.add(*breaks)

    # width selectors: w_sel[w] -> unsorted part fits in a window of length w
    w_sel = {}
    for w in range(2, bound + 1):
        sel = f.new_var()
        starts = []
        for a in range(n - w + 1):
            p = f.new_var()
            starts.append(p)
            for k in range(a):
                f.add(-p, -xs[k])
            for k in range(a + w, n):
                f.add(-p, xs[k])
        f.add(-sel, *starts)
        w_sel[w] = sel

    for w in range(2, bound + 1):
        res = backend.solve(f, assumptions=[w_sel[w]])
        if res.status != SAT:
            continue
        fixed = [w_sel[w]]
        for x in xs:
            trial = backend.solve(f, assumptions=fixed + [-x])
            fixed.append(-x if trial.status == SAT else x)
        return BitVector(1 if lit > 0 else 0 for lit in fixed[1:])
    return None


def check_reachability(network: Network) -> bool:
    """True iff every input channel can influence every output channel."""
    n = network.n
    full = (1 << n) - 1
    reach = [1 << j for j in range(n)]
    for layer in network.layers:
        for lo, hi in layer:
            reach[lo] = reach[hi] = reach[lo] | reach[hi]
    return all(r == full for r in reach)


def output_codes(network: Network, limit: int = EXHAUSTIVE_LIMIT) -> np.ndarray:
    """Sorted distinct output codes over all binary inputs."""
    check(network)
    n = network.n
    if n > limit:
        raise ExhaustiveLimitError(f"n={n} exceeds the exhaustive limit {limit}")
    comps = network.comparator_array()
    total = 1 << n
    step = 1 << 22
    seen = np.zeros(0, dtype=np.uint64)
    for start in range(0, total, step):
        chunk = kernels.output_codes(n, comps, start, min(total, start + step))
        seen = np.union1d(seen, chunk)
    return seen


def output_set(network: Network, limit: int = EXHAUSTIVE_LIMIT) -> set[BitVector]:
    return {BitVector.from_code(int(c), network.n) for c in output_codes(network, limit)}
