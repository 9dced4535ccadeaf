import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import int_eval, naive_eval, random_network
from sortnet import netfile
from sortnet.core import (
    BitVector,
    Comparator,
    Layer,
    Network,
    evaluate,
    evaluate_batch,
    evaluate_codes,
    remove_channel,
    validate,
)
from sortnet.generators import batcher_oddeven_sort, known_network
from sortnet.prefix import poset_prefix
from sortnet.verify import verify_01


@st.composite
def networks(draw, max_n=10, max_depth=6):
    n = draw(st.integers(0, max_n))
    depth = draw(st.integers(0, max_depth))
    layers = []
    for _ in range(depth):
        perm = draw(st.permutations(range(n)))
        k = draw(st.integers(0, n // 2))
        pairs = [Comparator.of(perm[2 * i], perm[2 * i + 1]) for i in range(k)]
        if pairs:
            layers.append(Layer(tuple(pairs)))
    return Network(n, tuple(layers))


def bits(n):
    return st.lists(st.integers(0, 1), min_size=n, max_size=n).map(BitVector)


class TestValidate:
    def test_empty_network_is_valid(self):
        assert validate(Network(5)) is None

    def test_channel_reuse_in_layer(self):
        net = Network.from_layers(4, [[(0, 1), (1, 2)]])
        assert validate(net) == "channel 1 used twice in layer 0"

    def test_paper17d10_valid(self):
        assert validate(known_network("paper17d10")) is None

    def test_empty_layer_rejected(self):
        net = Network(3, (Layer.of([(0, 1)]), Layer()))
        assert "layer 1 is empty" in validate(net)

    def test_out_of_range(self):
        assert "out of range" in validate(Network.from_layers(2, [[(0, 2)]]))

    def test_unnormalized(self):
        net = Network(3, (Layer((Comparator(2, 1),)),))
        assert "not normalized" in validate(net)

    def test_degenerate_sizes(self):
        for n in (0, 1):
            assert validate(Network(n)) is None
            assert verify_01(Network(n)).sorts


class TestEvaluate:
    def test_all_zeros_fixed_point(self):
        net = known_network("paper20d11")
        assert evaluate(net, [0] * 20) == BitVector([0] * 20)

    def test_single_comparator(self):
        net = Network.from_layers(2, [[(0, 1)]])
        assert evaluate(net, (1, 0)) == BitVector((0, 1))

    def test_fig3_reverse_sorted(self):
        net = known_network("paper20d11")
        x = [1] * 10 + [0] * 10
        expected = [0] * 10 + [1] * 10
        assert naive_eval(net, x) == expected
        assert list(evaluate(net, x)) == expected

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            evaluate(Network(3), (0, 1))

    def test_batch_empty(self):
        assert evaluate_batch(known_network("paper17d10"), []) == []

    def test_batch_width_mismatch(self):
        with pytest.raises(ValueError):
            evaluate_batch(Network(3), [(0, 1, 0), (1, 0)])

    def test_batch_poset4_has_six_outputs(self):
        net = poset_prefix(4, 4, [0])
        inputs = list(itertools.product((0, 1), repeat=4))
        assert len(set(evaluate_batch(net, inputs))) == 6

    def test_batch_matches_loop_n17(self):
        rng = random.Random(7)
        net = known_network("paper17d10").prefix(6)
        inputs = [tuple(rng.randint(0, 1) for _ in range(17)) for _ in range(1000)]
        assert evaluate_batch(net, inputs) == [evaluate(net, x) for x in inputs]

    def test_codes_roundtrip(self):
        net = known_network("paper19d11")
        codes = np.arange(0, 1 << 19, 997, dtype=np.uint64)
        out = evaluate_codes(net, codes)
        for c, o in zip(codes[:50], out[:50]):
            assert BitVector.from_code(int(o), 19) == evaluate(net, BitVector.from_code(int(c), 19))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_evaluation_conserves_bits(data):
    net = data.draw(networks())
    x = data.draw(bits(net.n))
    y = evaluate(net, x)
    assert sorted(y) == sorted(x)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_evaluation_monotone(data):
    net = data.draw(networks())
    x = data.draw(bits(net.n))
    mask = data.draw(bits(net.n))
    y = BitVector(a | b for a, b in zip(x, mask))
    assert all(p <= q for p, q in zip(evaluate(net, x), evaluate(net, y)))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_batch_equals_pointwise(data):
    net = data.draw(networks(max_n=14))
    batch = data.draw(st.lists(bits(net.n), max_size=150))
    assert evaluate_batch(net, batch) == [evaluate(net, x) for x in batch]


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_layer_canonicalization(data):
    net = data.draw(networks())
    shuffled = Network(net.n, tuple(Layer(tuple(reversed(l.comparators))) for l in net.layers))
    assert shuffled == net
    again = Network(net.n, tuple(Layer(l.comparators) for l in shuffled.layers))
    assert again == shuffled
    for x in itertools.islice(itertools.product((0, 1), repeat=net.n), 64):
        assert evaluate(shuffled, x) == evaluate(net, x)


def test_integer_oracle_agrees_with_evaluate(rng):
    net = known_network("paper17d10")
    vals = np.array([[rng.randint(0, 1) for _ in range(17)] for _ in range(100)])
    out = int_eval(net, vals)
    for row, o in zip(vals, out):
        assert list(evaluate(net, row)) == list(o)


class TestRemoveChannel:
    def test_untouched_last_channel(self):
        net = Network.from_layers(4, [[(0, 1)], [(1, 2)]])
        assert remove_channel(net, 3) == Network.from_layers(3, [[(0, 1)], [(1, 2)]])

    def test_single_comparator_channel0(self):
        net = Network.from_layers(2, [[(0, 1)]])
        reduced = remove_channel(net, 0)
        assert reduced == Network(1)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            remove_channel(Network(3), 3)

    def test_fig3_every_channel(self):
        net = known_network("paper20d11")
        for ch in (0, 7, 12, 19):
            reduced = remove_channel(net, ch)
            assert reduced.n == 19
            assert reduced.depth() <= 11
            assert validate(reduced) is None
            assert verify_01(reduced).sorts

    @pytest.mark.parametrize("n", range(2, 13))
    def test_all_channels_of_sorters(self, n):
        net = batcher_oddeven_sort(n)
        for ch in range(n):
            reduced = remove_channel(net, ch)
            assert validate(reduced) is None
            assert reduced.depth() <= net.depth()
            assert verify_01(reduced).sorts, (n, ch)

    def test_sorters_from_random_search(self, rng):
        # small sorters found by random search, then every channel removed
        found = 0
        while found < 15:
            n = rng.randint(3, 6)
            net = random_network(rng, n, rng.randint(3, 8))
            if not verify_01(net).sorts:
                continue
            found += 1
            for ch in range(n):
                assert verify_01(remove_channel(net, ch)).sorts


def test_text_format_roundtrip():
    net = known_network("paper17d10")
    text = netfile.format_text(net, "fixture")
    assert netfile.parse_text(text) == net
    assert netfile.from_json(netfile.to_json(net)) == net
    assert netfile.loads('{"n": 2, "layers": [[[0, 1]]]}') == Network.from_layers(2, [[(0, 1)]])


def test_text_format_example():
    text = "n 4\n0:1,2:3\n0:2,1:3\n1:2\n"
    net = netfile.parse_text(text)
    assert net == batcher_oddeven_sort(4)
    assert netfile.format_text(net) == text


@pytest.mark.parametrize("text", ["", "0:1\n", "n x\n", "n 3\n0-1\n", "n 3\n0:1,1:2\n", "n 2\n0:5\n"])
def test_text_format_errors(text):
    with pytest.raises(netfile.NetworkFormatError):
        netfile.parse_text(text)


def test_bitvector_order_matches_code():
    vecs = [BitVector.from_code(c, 5) for c in range(32)]
    assert vecs == sorted(vecs)
    assert all(v.code == c for c, v in enumerate(vecs))
    assert str(BitVector.from_str("0110")) == "0110"
    with pytest.raises(ValueError):
        BitVector((0, 2))
