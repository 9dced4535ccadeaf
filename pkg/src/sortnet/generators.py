"""Baseline constructions and transcriptions of published networks."""
from __future__ import annotations

import re
from functools import lru_cache

from sortnet.core import Comparator, Layer, Network, remove_channel

# 1-indexed, one layer per line, as printed.
PAPER17D10 = """
(1,2)(3,4)(5,6)(7,8)(9,10)(11,12)(13,14)(15,16)
(1,3)(2,4)(5,7)(6,8)(9,11)(10,12)(13,15)(14,16)
(1,5)(2,6)(3,7)(4,8)(9,13)(10,14)(11,15)(12,16)
(1,9)(2,3)(4,16)(5,11)(6,12)(7,15)(10,13)(14,17)
(1,16)(2,10)(3,13)(4,17)(6,7)(8,9)(11,14)(12,15)
(2,8)(3,5)(4,11)(6,10)(7,12)(9,15)(13,14)(16,17)
(2,15)(4,6)(5,8)(7,13)(9,14)(10,11)(12,16)
(2,4)(3,5)(6,7)(8,10)(9,12)(11,13)(14,16)(15,17)
(2,3)(4,5)(6,8)(7,10)(9,11)(12,13)(14,15)(16,17)
(1,2)(3,4)(5,6)(7,8)(9,10)(11,12)(13,14)(15,16)
"""

PAPER20D11 = """
(1,2)(3,4)(5,6)(7,8)(9,10)(11,12)(13,14)(15,16)(17,18)(19,20)
(1,3)(2,4)(5,7)(6,8)(9,11)(10,12)(13,15)(14,16)(17,19)(18,20)
(1,5)(2,6)(3,7)(4,8)(10,11)(13,17)(14,18)(15,19)(16,20)
(1,13)(2,14)(3,15)(4,16)(5,17)(6,18)(7,19)(8,20)
(1,18)(2,3)(4,9)(5,15)(6,11)(7,10)(8,14)(12,17)(16,19)
(1,20)(2,19)(3,4)(5,13)(6,12)(7,8)(9,10)(11,15)(14,18)(16,17)
(2,3)(4,7)(5,20)(6,13)(8,11)(9,12)(10,14)(15,16)(17,19)
(1,2)(3,6)(4,5)(7,13)(8,9)(10,15)(11,12)(14,17)(16,18)(19,20)
(2,4)(3,19)(5,8)(6,7)(9,11)(10,13)(12,16)(14,15)(17,18)
(1,2)(3,4)(5,6)(7,8)(9,10)(11,13)(12,14)(15,16)(17,19)(18,20)
(4,5)(6,7)(8,9)(10,11)(12,13)(14,15)(16,17)(18,19)
"""


def parse_one_indexed(n: int, text: str) -> Network:
    layers = []
    for line in text.strip().splitlines():
        pairs = re.findall(r"\((\d+),(\d+)\)", line)
        layers.append(Layer.of((int(a) - 1, int(b) - 1) for a, b in pairs))
    return Network(n, tuple(layers))


def best_removal(network: Network) -> tuple[int, Network]:
    """Channel whose removal leaves the fewest comparators (lowest index on ties)."""
    best = None
    for ch in range(network.n):
        reduced = remove_channel(network, ch)
        if best is None or reduced.size() < best[1].size():
            best = (ch, reduced)
    return best


@lru_cache(maxsize=None)
def known_network(name: str) -> Network:
    if name == "paper17d10":
        return parse_one_indexed(17, PAPER17D10)
    if name == "paper20d11":
        return parse_one_indexed(20, PAPER20D11)
    if name == "paper19d11":
        return best_removal(known_network("paper20d11"))[1]
    raise KeyError(f"unknown network {name!r}; known: {', '.join(KNOWN)}")


KNOWN = ("paper17d10", "paper19d11", "paper20d11")


def _schedule(n: int, comparators: list[tuple[int, int]]) -> Network:
    # as-soon-as-possible layering keeps comparator order on each channel
    ready = [0] * n
    layers: list[list[Comparator]] = []
    for a, b in comparators:
        t = max(ready[a], ready[b])
        if t == len(layers):
            layers.append([])
        layers[t].append(Comparator.of(a, b))
        ready[a] = ready[b] = t + 1
    return Network(n, tuple(Layer(tuple(l)) for l in layers))


def _merge_pow2(seq: list, out: list[tuple[int, int]]) -> None:
    """Odd-even merge of the two sorted halves of ``seq`` (length a power of 2).

    ``None`` entries are virtual wires; comparators touching them are dropped.
    """
    if len(seq) == 2:
        if None not in seq:
            out.append((seq[0], seq[1]))
        return
    _merge_pow2(seq[0::2], out)
    _merge_pow2(seq[1::2], out)
    for i in range(1, len(seq) - 1, 2):
        if seq[i] is not None and seq[i + 1] is not None:
            out.append((seq[i], seq[i + 1]))


def _merge(left: list[int], right: list[int], out: list[tuple[int, int]]) -> None:
    # pad left with -inf in front and right with +inf behind; both stay sorted
    # and the virtual values never move, so their comparators can be dropped
    size = 1
    while size < max(len(left), len(right)):
        size *= 2
    seq = [None] * (size - len(left)) + left + right + [None] * (size - len(right))
    _merge_pow2(seq, out)


def _sort(channels: list[int], out: list[tuple[int, int]]) -> None:
    if len(channels) < 2:
        return
    half = (len(channels) + 1) // 2
    left, right = channels[:half], channels[half:]
    _sort(left, out)
    _sort(right, out)
    _merge(left, right, out)


def batcher_oddeven_sort(n: int) -> Network:
    if n < 1:
        raise ValueError("n must be positive")
    comps: list[tuple[int, int]] = []
    _sort(list(range(n)), comps)
    return _schedule(n, comps)
