import itertools
import random
import sys
from pathlib import Path

import numpy as np
import pytest

from sortnet.core import Comparator, Layer, Network

FIXTURES = Path(__file__).parent / "fixtures"


def naive_eval(network, values):
    """Reference interpreter: one comparator at a time on a Python list."""
    v = list(values)
    for layer in network.layers:
        for lo, hi in layer:
            if v[lo] > v[hi]:
                v[lo], v[hi] = v[hi], v[lo]
    return v


def int_eval(network, matrix):
    """Integer-vector evaluator (rows are inputs); used as the 0-1 principle oracle."""
    out = np.array(matrix, copy=True)
    for lo, hi in network.comparators():
        a, b = out[:, lo].copy(), out[:, hi].copy()
        out[:, lo] = np.minimum(a, b)
        out[:, hi] = np.maximum(a, b)
    return out


def brute_first_unsorted(network):
    """Lexicographically first binary input left unsorted, by plain enumeration."""
    for bits in itertools.product((0, 1), repeat=network.n):
        out = naive_eval(network, bits)
        if any(a > b for a, b in zip(out, out[1:])):
            return tuple(bits)
    return None


def path_reachable(network):
    """Graph search on (channel, time) nodes; independent of the bitset recurrence."""
    n, d = network.n, network.depth()
    adj = {}
    for t, layer in enumerate(network.layers):
        partner = {}
        for lo, hi in layer:
            partner[lo], partner[hi] = hi, lo
        for c in range(n):
            nxt = [(c, t + 1)]
            if c in partner:
                nxt.append((partner[c], t + 1))
            adj[(c, t)] = nxt
    for i in range(n):
        seen = {(i, 0)}
        stack = [(i, 0)]
        while stack:
            node = stack.pop()
            for m in adj.get(node, ()):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        if any((j, d) not in seen for j in range(n)):
            return False
    return True


def random_network(rng, n, depth, density=1.0):
    layers = []
    for _ in range(depth):
        ch = list(range(n))
        rng.shuffle(ch)
        k = rng.randint(min(1, n // 2), n // 2) if density < 1.0 else n // 2
        layer = [Comparator.of(ch[2 * i], ch[2 * i + 1]) for i in range(k)]
        if layer:
            layers.append(Layer(tuple(layer)))
    return Network(n, tuple(layers))


def matchings(n):
    """All non-empty sets of channel-disjoint comparators on n channels."""
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for k in range(1, n // 2 + 1):
        for combo in itertools.combinations(pairs, k):
            chans = [c for p in combo for c in p]
            if len(set(chans)) == len(chans):
                out.append(Layer.of(combo))
    return out


@pytest.fixture
def rng():
    return random.Random(20240617)


@pytest.fixture
def fake_solver():
    return str(FIXTURES / "fake_solver.py")


@pytest.fixture
def python_exe():
    return sys.executable


_CRITERIA: list[str] = []


def record_criterion(line):
    _CRITERIA.append(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
