"""Hand-crafted first layers handed to the encoder as fixed prefixes."""
from __future__ import annotations

from typing import Sequence

from sortnet.core import Comparator, Layer, Network, check
from sortnet.generators import known_network

# Per block size, the layers of the partial-order gadget on channels 0..size-1.
POSET_GADGETS = {
    2: [[(0, 1)]],
    4: [[(0, 1), (2, 3)], [(0, 2), (1, 3)]],
    8: [
        [(0, 1), (2, 3), (4, 5), (6, 7)],
        [(0, 2), (1, 3), (4, 6), (5, 7)],
        [(0, 4), (1, 5), (2, 6), (3, 7)],
    ],
}

FIGURE_PREFIXES = {
    "fig2-3layer": ("paper17d10", 3),
    "fig3-4layer": ("paper20d11", 4),
}


def poset_prefix(block_size: int, n: int, placement: Sequence[int]) -> Network:
    """Place copies of the poset gadget at the given starting channels.

    Blocks run side by side, so the prefix depth is that of one gadget.
    """
    if block_size not in POSET_GADGETS:
        raise ValueError(f"block size must be 2, 4 or 8, got {block_size}")
    used: set[int] = set()
    for start in placement:
        block = set(range(start, start + block_size))
        if start < 0 or start + block_size > n:
            raise ValueError(f"block at channel {start} does not fit in n={n}")
        if block & used:
            raise ValueError(f"block at channel {start} overlaps another block")
        used |= block
    gadget = POSET_GADGETS[block_size]
    layers = []
    for pattern in gadget:
        layers.append(Layer(tuple(Comparator(s + a, s + b) for s in placement for a, b in pattern)))
    return check(Network(n, tuple(layers) if placement else ()))


def canonical_first_layer(n: int) -> Layer:
    if n < 2:
        raise ValueError("a first layer needs at least two channels")
    return Layer(tuple(Comparator(i, i + 1) for i in range(0, n - 1, 2)))


def canonical_prefix(n: int) -> Network:
    return Network(n, (canonical_first_layer(n),) if n >= 2 else ())


def figure_prefix(name: str) -> Network:
    if name not in FIGURE_PREFIXES:
        raise KeyError(f"unknown prefix {name!r}; known: {', '.join(FIGURE_PREFIXES)}")
    source, depth = FIGURE_PREFIXES[name]
    return known_network(source).prefix(depth)


def is_maximal_layer(layer: Layer, n: int) -> bool:
    """No comparator can be added without reusing a channel."""
    return n - len(layer.channels()) < 2


def named_prefix(name: str, n: int) -> Network:
    """Resolve a prefix name used by the CLI and configs."""
    if name in ("none", "empty"):
        return Network(n)
    if name == "canonical":
        return canonical_prefix(n)
    net = figure_prefix(name)
    if net.n != n:
        raise ValueError(f"prefix {name!r} is for n={net.n}, not n={n}")
    return net
