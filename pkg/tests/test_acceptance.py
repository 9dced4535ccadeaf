"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line; the lines are repeated in
the terminal summary so they show up without ``-s``.
"""
import itertools
import random
import time

import numpy as np
import pytest

from conftest import int_eval, naive_eval, random_network, record_criterion
from sortnet.backend import SAT, EmbeddedBackend
from sortnet.cegis import FOUND, INFEASIBLE, SynthesisConfig, synthesize
from sortnet.core import BitVector, Network, validate
from sortnet.encode import add_reachability, add_sortedness, decode_model, encode_structure, induced_assignment
from sortnet.generators import batcher_oddeven_sort, known_network
from sortnet.prefix import canonical_prefix, poset_prefix
from sortnet.verify import check_reachability, is_sorted, output_set, verify_01

SYNTH_BUDGET = 60.0


def report(number, title, failures, detail=""):
    ok = not failures
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
    if detail:
        line += f" [{detail}]"
    if failures:
        line += " :: " + "; ".join(failures[:5])
    print(line)
    record_criterion(line)
    assert ok, line


def test_criterion_1_fixture_verification():
    failures, timings = [], []
    for name, n in (("paper17d10", 17), ("paper20d11", 20), ("paper19d11", 19)):
        net = known_network(name)
        start = time.perf_counter()
        verdict = verify_01(net)
        timings.append(f"{name} {(time.perf_counter() - start) * 1000:.0f}ms")
        if not verdict.sorts or verdict.inputs_checked != 1 << n or net.n != n:
            failures.append(f"{name}: {verdict.status}, {verdict.inputs_checked} inputs")
    report(1, "fixture networks sort all binary inputs", failures, ", ".join(timings))


def test_criterion_2_depth_bookkeeping():
    failures = []
    if known_network("paper17d10").depth() != 10:
        failures.append("paper17d10 depth")
    if known_network("paper20d11").depth() != 11:
        failures.append("paper20d11 depth")
    if known_network("paper19d11").depth() > 11:
        failures.append("paper19d11 depth")
    depths = [known_network(k).depth() for k in ("paper17d10", "paper20d11", "paper19d11")]
    report(2, "fixture depths", failures, f"depths {depths}")


def test_criterion_3_poset_facts():
    failures = []
    four = output_set(poset_prefix(4, 4, [0]))
    eight = output_set(poset_prefix(8, 8, [0]))
    listed = {BitVector(s) for s in ("0000", "0001", "0011", "0101", "0111", "1111")}
    if len(four) != 6:
        failures.append(f"4-poset has {len(four)} outputs")
    if len(eight) != 20:
        failures.append(f"8-poset has {len(eight)} outputs")
    if four != listed:
        failures.append(f"4-poset outputs {sorted(map(str, four))}")
    report(3, "poset prefix output sets", failures, f"{len(four)} and {len(eight)} outputs")


FEASIBLE = [(2, 1), (3, 3), (4, 3), (5, 5), (6, 5), (7, 6), (8, 6)]
INFEASIBLE_CASES = [(4, 2), (5, 4), (6, 4)]


def test_criterion_4_desk_scale_synthesis():
    failures, timings = [], []
    for (n, d), expected in [(c, FOUND) for c in FEASIBLE] + [(c, INFEASIBLE) for c in INFEASIBLE_CASES]:
        start = time.perf_counter()
        out = synthesize(SynthesisConfig(n, d, timeout=SYNTH_BUDGET))
        elapsed = time.perf_counter() - start
        timings.append(f"({n},{d}) {elapsed:.1f}s")
        if out.status != expected or elapsed > SYNTH_BUDGET:
            failures.append(f"({n},{d}) -> {out.status} in {elapsed:.1f}s")
        elif expected == FOUND and not (verify_01(out.network).sorts and out.network.depth() <= d):
            failures.append(f"({n},{d}) network does not verify")
    report(4, "desk-scale synthesis", failures, ", ".join(timings))


def test_criterion_5_batcher_baseline():
    failures = []
    for n in range(1, 17):
        net = batcher_oddeven_sort(n)
        if validate(net) is not None or not verify_01(net).sorts:
            failures.append(f"n={n} fails")
    for k in range(0, 5):
        depth = batcher_oddeven_sort(2**k).depth()
        if depth != k * (k + 1) // 2:
            failures.append(f"n={2**k} depth {depth}")
    report(5, "Batcher networks n<=16 sort; power-of-two depths", failures)


def _matchings(n):
    pairs = list(itertools.combinations(range(n), 2))
    for k in range(1, n // 2 + 1):
        for combo in itertools.combinations(pairs, k):
            chans = [c for p in combo for c in p]
            if len(set(chans)) == len(chans):
                yield combo


def test_criterion_6_encoding_soundness():
    rng = random.Random(6)
    solver = EmbeddedBackend()
    failures = []
    sat_count = 0
    for i in range(200):
        n, d = rng.randint(2, 5), rng.randint(1, 4)
        pool = [x for x in itertools.product((0, 1), repeat=n) if not is_sorted(x)]
        inputs = rng.sample(pool, rng.randint(1, len(pool)))
        f, vm = encode_structure(n, d)
        for x in inputs:
            add_sortedness(f, vm, x)
        res = solver.solve(f)
        if res.status != SAT:
            continue
        sat_count += 1
        net = decode_model(vm, res.model)
        if not f.is_satisfied_by(res.model) or validate(net) or net.depth() > d:
            failures.append(f"instance {i}: bad model")
        elif not all(is_sorted(naive_eval(net, x)) for x in inputs):
            failures.append(f"instance {i}: decoded network misses an input")

    enumerated = 0
    for n in range(2, 5):
        layers = [Network.from_layers(n, [m]).layers[0] for m in _matchings(n)]
        nets = [Network(n, combo) for depth in (1, 2) for combo in itertools.product(layers, repeat=depth)]
        pool = [x for x in itertools.product((0, 1), repeat=n) if not is_sorted(x)]
        for _ in range(5):
            inputs = rng.sample(pool, rng.randint(1, len(pool)))
            f, vm = encode_structure(n, 2)
            for x in inputs:
                add_sortedness(f, vm, x)
            for net in nets:
                enumerated += 1
                sorts = all(is_sorted(naive_eval(net, x)) for x in inputs)
                if f.is_satisfied_by(induced_assignment(vm, net)) != sorts:
                    failures.append(f"n={n} {net.as_lists()}")
    report(6, "encoding agrees with brute force", failures, f"{sat_count}/200 SAT, {enumerated} enumerated checks")


def test_criterion_7_reachability_necessity():
    rng = random.Random(7)
    failures = []
    corpus = [batcher_oddeven_sort(n) for n in range(2, 17)]
    corpus += [known_network(k) for k in ("paper17d10", "paper20d11", "paper19d11")]
    while len(corpus) < 120:
        n = rng.randint(2, 6)
        net = random_network(rng, n, rng.randint(3, 7))
        if verify_01(net).sorts:
            corpus.append(net)
    for net in corpus:
        if verify_01(net).sorts and not check_reachability(net):
            failures.append(f"n={net.n} depth={net.depth()}")
    for name in ("paper17d10", "paper20d11"):
        net = known_network(name)
        f, vm = encode_structure(net.n, net.depth())
        add_reachability(f, vm)
        if not f.is_satisfied_by(induced_assignment(vm, net)):
            failures.append(f"{name} violates reachability clauses")
    report(7, "sorting implies reachability", failures, f"{len(corpus)} sorters")


def test_criterion_8_zero_one_principle():
    rng = random.Random(8)
    np_rng = np.random.default_rng(8)
    nets = [batcher_oddeven_sort(n) for n in range(2, 9)]
    while len(nets) < 60:
        n = rng.randint(2, 8)
        nets.append(random_network(rng, n, rng.randint(1, 8)))
    failures = []
    sorters = 0
    for i, net in enumerate(nets):
        vals = np_rng.integers(0, 1_000_000, size=(10_000, net.n))
        out = int_eval(net, vals)
        sorts_ints = bool(np.all(out[:, :-1] <= out[:, 1:]))
        verdict = verify_01(net).sorts
        sorters += verdict
        if sorts_ints != verdict:
            failures.append(f"network {i}: ints {sorts_ints}, binary {verdict}")
    if not 0 < sorters < len(nets):
        failures.append("corpus lacks sorters or non-sorters")
    report(8, "0-1 verdict matches integer sorting", failures, f"{len(nets)} networks, {sorters} sorters")


def test_criterion_9_determinism():
    failures = []
    for cfg in (SynthesisConfig(6, 5), SynthesisConfig(7, 6, seed=3), SynthesisConfig(5, 4)):
        a, b = synthesize(cfg), synthesize(cfg)
        if a.trace != b.trace or a.network != b.network or a.status != b.status:
            failures.append(f"({cfg.n},{cfg.d}) seed {cfg.seed}")
    report(9, "identical config and seed give identical runs", failures)


@pytest.mark.slow
@pytest.mark.skip(reason="stretch target, 30 minute budget; run manually")
@pytest.mark.parametrize("n,d", [(9, 7), (10, 7)])
def test_stretch_targets(n, d):
    out = synthesize(SynthesisConfig(n, d, prefix=canonical_prefix(n), timeout=1800))
    assert out.status == FOUND and verify_01(out.network).sorts
