"""Comparator networks: data model, evaluation and structural checks.

Channels are numbered from 0 (the topmost wire). A comparator ``(low, high)``
routes the minimum of its two inputs to ``low`` and the maximum to ``high``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from sortnet import kernels


class Comparator(NamedTuple):
    low: int
    high: int

    @classmethod
    def of(cls, a: int, b: int) -> "Comparator":
        """Build a comparator in normalized orientation (``low < high``)."""
        return cls(a, b) if a <= b else cls(b, a)


class BitVector(tuple):
    """An immutable 0/1 word; element 0 is channel 0.

    Tuple ordering is lexicographic with channel 0 most significant, which
    coincides with ordering by :attr:`code`.
    """

    __slots__ = ()

    def __new__(cls, bits: Iterable[int] = ()):
        values = tuple(int(b) for b in bits)
        for b in values:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b}")
        return super().__new__(cls, values)

    @classmethod
    def from_str(cls, text: str) -> "BitVector":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"not a bitstring: {text!r}")
        return cls(int(ch) for ch in text)

    @classmethod
    def from_code(cls, code: int, n: int) -> "BitVector":
        return cls((code >> (n - 1 - c)) & 1 for c in range(n))

    @property
    def n(self) -> int:
        return len(self)

    @property
    def code(self) -> int:
        value = 0
        for b in self:
            value = (value << 1) | b
        return value

    def is_sorted(self) -> bool:
        return all(a <= b for a, b in zip(self, self[1:]))

    def __str__(self) -> str:
        return "".join(map(str, self))

    def __repr__(self) -> str:
        return f"BitVector('{self}')"


@dataclass(frozen=True)
class Layer:
    comparators: tuple[Comparator, ...] = ()

    def __post_init__(self):
        comps = tuple(sorted(Comparator(*c) for c in self.comparators))
        object.__setattr__(self, "comparators", comps)

    @classmethod
    def of(cls, pairs: Iterable[Sequence[int]]) -> "Layer":
        return cls(tuple(Comparator.of(a, b) for a, b in pairs))

    def channels(self) -> set[int]:
        return {ch for c in self.comparators for ch in c}

    def __len__(self) -> int:
        return len(self.comparators)

    def __iter__(self):
        return iter(self.comparators)


@dataclass(frozen=True)
class Network:
    """A comparator network on ``n`` channels, applied layer by layer.

    Construction does not enforce validity; call :func:`validate`.
    """

    n: int
    layers: tuple[Layer, ...] = ()

    def __post_init__(self):
        layers = tuple(l if isinstance(l, Layer) else Layer.of(l) for l in self.layers)
        object.__setattr__(self, "layers", layers)

    @classmethod
    def from_layers(cls, n: int, layers: Iterable[Iterable[Sequence[int]]]) -> "Network":
        return cls(n, tuple(Layer.of(l) for l in layers))

    def depth(self) -> int:
        return len(self.layers)

    def size(self) -> int:
        return sum(len(l) for l in self.layers)

    def comparators(self) -> list[Comparator]:
        return [c for layer in self.layers for c in layer]

    def comparator_array(self) -> np.ndarray:
        """All comparators in evaluation order as an ``(m, 2)`` int32 array."""
        arr = np.array(self.comparators(), dtype=np.int32).reshape(-1, 2)
        return np.ascontiguousarray(arr)

    def prefix(self, k: int) -> "Network":
        return Network(self.n, self.layers[:k])

    def extend(self, other: "Network") -> "Network":
        if other.n != self.n:
            raise ValueError(f"channel count mismatch: {self.n} vs {other.n}")
        return Network(self.n, self.layers + other.layers)

    def as_lists(self) -> list[list[list[int]]]:
        return [[[c.low, c.high] for c in layer] for layer in self.layers]


def validate(network: Network) -> str | None:
    """Return ``None`` if the network is well formed, else a description of
    the first violated invariant."""
    n = network.n
    if n < 0:
        return f"negative channel count {n}"
    for t, layer in enumerate(network.layers):
        if len(layer) == 0:
            return f"layer {t} is empty"
        seen: set[int] = set()
        for c in layer:
            if not c.low < c.high:
                return f"comparator ({c.low},{c.high}) in layer {t} is not normalized (low < high)"
            for ch in c:
                if not 0 <= ch < n:
                    return f"channel {ch} out of range in layer {t} (n={n})"
                if ch in seen:
                    return f"channel {ch} used twice in layer {t}"
                seen.add(ch)
    return None


def check(network: Network) -> Network:
    """Raise ``ValueError`` unless ``network`` is valid; return it unchanged."""
    problem = validate(network)
    if problem is not None:
        raise ValueError(problem)
    return network


def evaluate(network: Network, x: Sequence[int]) -> BitVector:
    if len(x) != network.n:
        raise ValueError(f"input width {len(x)} does not match network width {network.n}")
    v = list(x)
    for layer in network.layers:
        for lo, hi in layer:
            a, b = v[lo], v[hi]
            if a > b:
                v[lo], v[hi] = b, a
    return BitVector(v)


def pack_codes(codes: np.ndarray, n: int) -> np.ndarray:
    """Pack input codes into per-channel words: bit ``b`` of word ``w`` of
    channel ``c`` is channel ``c`` of input ``64*w + b``."""
    codes = np.asarray(codes, dtype=np.uint64)
    m = codes.size
    nwords = max(1, -(-m // 64))
    words = np.zeros((n, nwords), dtype=np.uint64)
    for c in range(n):
        bits = ((codes >> np.uint64(n - 1 - c)) & np.uint64(1)).astype(np.uint8)
        packed = np.packbits(bits, bitorder="little")
        buf = np.zeros(nwords * 8, dtype=np.uint8)
        buf[: packed.size] = packed
        words[c] = buf.view(np.uint64)
    return words


def unpack_codes(words: np.ndarray, n: int, m: int) -> np.ndarray:
    """Inverse of :func:`pack_codes` for the first ``m`` inputs."""
    codes = np.zeros(m, dtype=np.uint64)
    for c in range(n):
        bits = np.unpackbits(words[c].view(np.uint8), bitorder="little")[:m]
        codes |= bits.astype(np.uint64) << np.uint64(n - 1 - c)
    return codes


def evaluate_codes(network: Network, codes: np.ndarray) -> np.ndarray:
    """Bit-parallel evaluation on integer input codes (channel 0 = MSB)."""
    codes = np.asarray(codes, dtype=np.uint64)
    if codes.size == 0:
        return codes.copy()
    words = pack_codes(codes, network.n)
    kernels.apply_network(words, network.comparator_array())
    return unpack_codes(words, network.n, codes.size)


def evaluate_batch(network: Network, inputs: Sequence[Sequence[int]]) -> list[BitVector]:
    n = network.n
    for x in inputs:
        if len(x) != n:
            raise ValueError(f"input width {len(x)} does not match network width {n}")
    if not inputs:
        return []
    if n == 0:
        return [BitVector() for _ in inputs]
    bits = np.asarray(inputs, dtype=np.uint8).reshape(len(inputs), n)
    words = np.zeros((n, -(-len(inputs) // 64)), dtype=np.uint64)
    for c in range(n):
        packed = np.packbits(bits[:, c], bitorder="little")
        buf = np.zeros(words.shape[1] * 8, dtype=np.uint8)
        buf[: packed.size] = packed
        words[c] = buf.view(np.uint64)
    kernels.apply_network(words, network.comparator_array())
    out = np.empty_like(bits)
    for c in range(n):
        out[:, c] = np.unpackbits(words[c].view(np.uint8), bitorder="little")[: len(inputs)]
    return [BitVector(row) for row in out.tolist()]


def _drop_empty(n: int, layers: Iterable[Iterable[Comparator]]) -> Network:
    return Network(n, tuple(Layer(tuple(l)) for l in layers if l))


def remove_channel(network: Network, channel: int) -> Network:
    """Delete one channel, fixing its input to the maximum value.

    Comparators that meet the fixed value either leave it in place (dropped)
    or would move it to their max side, in which case the two wires trade
    names for the rest of the network. The resulting generalized network is
    then re-normalized so every comparator routes its minimum upwards. If the
    input network sorts, so does the result; depth never grows.
    """
    n = network.n
    if not 0 <= channel < n:
        raise ValueError(f"channel {channel} out of range for n={n}")

    # physical[w]: the wire currently carrying what the original network calls w
    physical = list(range(n))
    where = {w: w for w in range(n)}
    kept: list[list[tuple[int, int]]] = []
    for layer in network.layers:
        out = []
        for lo, hi in layer:
            a, b = physical[lo], physical[hi]
            if b == channel:
                continue
            if a == channel:
                wa, wb = where[a], where[b]
                physical[wa], physical[wb] = b, a
                where[a], where[b] = wb, wa
                continue
            out.append((a, b))
        kept.append(out)

    # original output rank w sits on wire physical[w]; for a sorter the fixed
    # max ends at rank n-1
    rank_of = {wire: r for r, wire in enumerate(w for w in physical if w != channel)}
    relabeled = [[(rank_of[a], rank_of[b]) for a, b in layer] for layer in kept]

    # untangle comparators whose min side now points downward
    label = list(range(n - 1))
    result: list[list[Comparator]] = []
    for layer in relabeled:
        out = []
        swaps = []
        for a, b in layer:
            la, lb = label[a], label[b]
            if la < lb:
                out.append(Comparator(la, lb))
            else:
                out.append(Comparator(lb, la))
                swaps.append((a, b))
        for a, b in swaps:
            label[a], label[b] = label[b], label[a]
        result.append(out)
    return _drop_empty(n - 1, result)
