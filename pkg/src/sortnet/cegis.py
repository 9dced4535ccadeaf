"""Counterexample-guided synthesis of sorting networks.

Each iteration asks the solver for a network of depth ``d`` (extending the
prefix) that sorts every input collected so far, then searches for an input
the candidate leaves unsorted. That input joins the set and the loop repeats
until the candidate sorts everything or the solver reports that no network
sorts the collected inputs.
"""
from __future__ import annotations

import json
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from sortnet.backend import SAT, UNKNOWN, UNSAT, EmbeddedBackend, Limits
from sortnet.core import BitVector, Network, check, evaluate
from sortnet.encode import EncodingError, add_reachability, add_sortedness, decode_model, encode_structure
from sortnet.verify import EXHAUSTIVE_LIMIT, InputFamily, find_counterexample, is_sorted, verify_01

log = logging.getLogger(__name__)

FOUND = "network-found"
INFEASIBLE = "infeasible"
RESOURCE_LIMIT = "resource-limit"


class ReplayMismatch(ValueError):
    pass


@dataclass
class SynthesisConfig:
    n: int
    d: int
    prefix: Network | None = None
    use_reachability: bool = True
    seed_inputs: InputFamily | Sequence[Sequence[int]] | None = field(
        default_factory=lambda: InputFamily.windowed(2)
    )
    counterexample_family: InputFamily = field(default_factory=InputFamily.all_binary)
    call_limits: Limits = field(default_factory=Limits)
    timeout: float | None = None
    seed: int = 0
    exhaustive_limit: int = EXHAUSTIVE_LIMIT

    def __post_init__(self):
        if self.prefix is None:
            self.prefix = Network(self.n)
        check(self.prefix)
        if self.prefix.n != self.n:
            raise ValueError(f"prefix has {self.prefix.n} channels, expected {self.n}")
        if self.prefix.depth() > self.d:
            raise ValueError(f"prefix depth {self.prefix.depth()} exceeds d={self.d}")

    def seed_vectors(self) -> list[BitVector]:
        if self.seed_inputs is None:
            return []
        if isinstance(self.seed_inputs, InputFamily):
            vecs = self.seed_inputs.vectors_for(self.n)
        else:
            vecs = [BitVector(v) for v in self.seed_inputs]
        for v in vecs:
            if len(v) != self.n:
                raise ValueError(f"seed input {v} has width {len(v)}, expected {self.n}")
        return vecs


@dataclass
class IterationRecord:
    iteration: int
    counterexample: BitVector | None
    solver_status: str
    conflicts: int
    decisions: int
    wall_ms: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        return {
            "iteration": self.iteration,
            "counterexample": None if self.counterexample is None else str(self.counterexample),
            "solver_status": self.solver_status,
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "wall_ms": round(self.wall_ms, 3),
        }

    @classmethod
    def from_json(cls, data: dict) -> "IterationRecord":
        cex = data.get("counterexample")
        return cls(
            iteration=int(data["iteration"]),
            counterexample=None if cex is None else BitVector.from_str(cex),
            solver_status=data["solver_status"],
            conflicts=int(data.get("conflicts", 0)),
            decisions=int(data.get("decisions", 0)),
            wall_ms=float(data.get("wall_ms", 0.0)),
        )


@dataclass
class SynthesisOutcome:
    status: str
    network: Network | None = None
    trace: list[IterationRecord] = field(default_factory=list)
    inputs: list[BitVector] = field(default_factory=list)
    elapsed: float = field(default=0.0, compare=False)

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def counterexamples(self) -> list[BitVector]:
        return [r.counterexample for r in self.trace if r.counterexample is not None]


def write_trace(trace: Iterable[IterationRecord], fp: TextIO) -> None:
    for rec in trace:
        fp.write(json.dumps(rec.to_json()) + "\n")


def read_trace(fp: TextIO) -> list[IterationRecord]:
    return [IterationRecord.from_json(json.loads(line)) for line in fp if line.strip()]


def _phases(config: SynthesisConfig, vm) -> list[int]:
    # seed 0 keeps the solver's default polarity
    if not config.seed:
        return []
    rng = random.Random(config.seed)
    return [var if rng.random() < 0.5 else -var for var in sorted(vm.g.values())]


def _independent_check(network: Network, config: SynthesisConfig, backend) -> BitVector | None:
    if network.n <= config.exhaustive_limit:
        return verify_01(network, limit=config.exhaustive_limit).witness
    return find_counterexample(network, InputFamily.all_binary(), limit=config.exhaustive_limit, backend=backend)


def synthesize(config: SynthesisConfig, backend=None) -> SynthesisOutcome:
    return _run(config, backend or EmbeddedBackend(), script=None)


def replay(trace: Sequence[IterationRecord], config: SynthesisConfig, backend=None) -> SynthesisOutcome:
    """Re-run a recorded loop, taking counterexamples from ``trace`` instead
    of searching for them. Once the recorded sequence is used up the loop
    continues with a live search, so a trace replayed under a more permissive
    config still ends with a verified result."""
    script = []
    for rec in trace:
        if rec.counterexample is None:
            continue
        if len(rec.counterexample) != config.n:
            raise ReplayMismatch(
                f"trace counterexample {rec.counterexample} has width {len(rec.counterexample)}, config n={config.n}"
            )
        script.append(rec.counterexample)
    return _run(config, backend or EmbeddedBackend(), script=script)


def _run(config: SynthesisConfig, backend, script: list[BitVector] | None) -> SynthesisOutcome:
    start = time.perf_counter()
    n, d = config.n, config.d
    formula, vm = encode_structure(n, d, config.prefix)
    if config.use_reachability and n >= 2:
        add_reachability(formula, vm)
    added: list[BitVector] = []
    for x in config.seed_vectors():
        if not x.is_sorted() and x not in added:
            add_sortedness(formula, vm, x)
            added.append(x)
    known = set(added)
    pending = list(script) if script is not None else None

    outcome = SynthesisOutcome(RESOURCE_LIMIT, inputs=added)
    session = backend.session(formula, _phases(config, vm)) if hasattr(backend, "session") else None
    try:
        while True:
            limits = config.call_limits
            if config.timeout is not None:
                remaining = config.timeout - (time.perf_counter() - start)
                if remaining <= 0:
                    outcome.status = RESOURCE_LIMIT
                    break
                wall = remaining if limits.wall_time is None else min(limits.wall_time, remaining)
                limits = Limits(wall_time=wall, conflicts=limits.conflicts)
            t0 = time.perf_counter()
            res = session.solve(limits) if session is not None else backend.solve(formula, limits)
            record = IterationRecord(
                iteration=len(outcome.trace) + 1,
                counterexample=None,
                solver_status=res.status,
                conflicts=res.stats.conflicts,
                decisions=res.stats.decisions,
            )
            outcome.trace.append(record)
            if res.status == UNKNOWN:
                record.wall_ms = (time.perf_counter() - t0) * 1000
                outcome.status = RESOURCE_LIMIT
                break
            if res.status == UNSAT:
                record.wall_ms = (time.perf_counter() - t0) * 1000
                outcome.status = INFEASIBLE
                break
            if not formula.is_satisfied_by(res.model):
                raise EncodingError("solver model violates the formula")
            candidate = decode_model(vm, res.model)
            for x in added:
                if not is_sorted(evaluate(candidate, x)):
                    raise EncodingError(f"decoded network does not sort registered input {x}")

            if pending:
                cex = pending.pop(0)
            else:
                cex = find_counterexample(
                    candidate, config.counterexample_family, limit=config.exhaustive_limit, backend=backend
                )
                if cex is None:
                    # never trust the loop's own family: re-verify independently
                    cex = _independent_check(candidate, config, backend)
                    if cex is not None:
                        log.info("candidate passed the search family but fails on %s", cex)
                if cex is not None and is_sorted(evaluate(candidate, cex)):
                    raise EncodingError(f"counterexample {cex} is sorted by the candidate")
            record.counterexample = cex
            record.wall_ms = (time.perf_counter() - t0) * 1000
            if cex is None:
                outcome.status = FOUND
                outcome.network = candidate
                break
            if cex in known:
                if script is None:
                    raise EncodingError(f"counterexample {cex} was already registered")
                continue
            known.add(cex)
            add_sortedness(formula, vm, cex)
            added.append(cex)
            log.debug("iteration %d: added %s", record.iteration, cex)
    finally:
        if session is not None:
            session.close()
    outcome.elapsed = time.perf_counter() - start
    return outcome
