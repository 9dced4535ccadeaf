"""SAT solving behind one interface: an embedded solver (MiniSat 2.2 via
python-sat) and an external DIMACS process.

Backend selection for callers that do not pass one explicitly:
``SORTNET_BACKEND`` (``embedded`` or ``external``) and ``SORTNET_SOLVER``
(path to the external executable).
"""
from __future__ import annotations

import os
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from pysat.solvers import Solver

from sortnet.encode import CnfFormula, emit_dimacs

SAT = "satisfiable"
UNSAT = "unsatisfiable"
UNKNOWN = "unknown"


class SolverError(RuntimeError):
    """The solver crashed or produced output we cannot trust."""


@dataclass(frozen=True)
class Limits:
    wall_time: float | None = None
    conflicts: int | None = None


@dataclass
class SolverStats:
    conflicts: int = 0
    decisions: int = 0
    wall_time: float = 0.0


@dataclass
class SolverResult:
    status: str
    model: tuple[int, ...] | None = None
    stats: SolverStats = field(default_factory=SolverStats)

    @property
    def satisfiable(self) -> bool:
        return self.status == SAT

    def value(self, var: int) -> bool:
        if self.model is None:
            raise ValueError("no model")
        return self.model[var - 1] > 0


def _complete(model: Sequence[int] | None, num_vars: int) -> tuple[int, ...]:
    # variables absent from every clause are unconstrained; report them false
    values = {abs(l): l for l in model or ()}
    return tuple(values.get(v, -v) for v in range(1, num_vars + 1))


Preprocessor = Callable[[CnfFormula], CnfFormula]


class EmbeddedBackend:
    """In-process solver. Deterministic for a fixed formula and limits."""

    name = "embedded"

    def __init__(self, solver: str = "minisat22", preprocess: Preprocessor | None = None):
        self.solver = solver
        self.preprocess = preprocess

    def solve(self, formula: CnfFormula, limits: Limits | None = None, assumptions: Sequence[int] = ()) -> SolverResult:
        limits = limits or Limits()
        if self.preprocess is not None:
            formula = self.preprocess(formula)
        start = time.perf_counter()
        with Solver(name=self.solver, bootstrap_with=formula.clauses) as s:
            timer = None
            if limits.conflicts is not None:
                s.conf_budget(limits.conflicts)
            if limits.wall_time is not None:
                timer = threading.Timer(limits.wall_time, s.interrupt)
                timer.start()
            try:
                limited = limits.conflicts is not None or limits.wall_time is not None
                if limited:
                    outcome = s.solve_limited(assumptions=list(assumptions), expect_interrupt=True)
                else:
                    outcome = s.solve(assumptions=list(assumptions))
            finally:
                if timer is not None:
                    timer.cancel()
            raw = s.accum_stats()
            stats = SolverStats(raw.get("conflicts", 0), raw.get("decisions", 0), time.perf_counter() - start)
            if outcome is None:
                return SolverResult(UNKNOWN, None, stats)
            if not outcome:
                return SolverResult(UNSAT, None, stats)
            return SolverResult(SAT, _complete(s.get_model(), formula.num_vars), stats)

    def session(self, formula: CnfFormula, phases: Sequence[int] = ()) -> "EmbeddedSession | OneShotSession":
        if self.preprocess is not None:
            return OneShotSession(self, formula)
        return EmbeddedSession(self, formula, phases)


class EmbeddedSession:
    """Keeps one solver alive while ``formula`` grows by appended clauses.

    Only clauses appended since the previous call are handed to the solver,
    so learnt clauses carry over between calls.
    """

    def __init__(self, backend: EmbeddedBackend, formula: CnfFormula, phases: Sequence[int] = ()):
        self.formula = formula
        self._solver = Solver(name=backend.solver)
        self._fed = 0
        self._phases = list(phases)
        self._seen = {"conflicts": 0, "decisions": 0}

    def solve(self, limits: Limits | None = None) -> SolverResult:
        limits = limits or Limits()
        s = self._solver
        clauses = self.formula.clauses
        s.append_formula(clauses[self._fed:])
        self._fed = len(clauses)
        if self._phases:
            s.set_phases(self._phases)
        start = time.perf_counter()
        timer = None
        if limits.conflicts is not None:
            s.conf_budget(limits.conflicts)
        if limits.wall_time is not None:
            timer = threading.Timer(limits.wall_time, s.interrupt)
            timer.start()
        try:
            if limits.conflicts is not None or limits.wall_time is not None:
                outcome = s.solve_limited(expect_interrupt=True)
                s.clear_interrupt()
            else:
                outcome = s.solve()
        finally:
            if timer is not None:
                timer.cancel()
        raw = s.accum_stats()
        stats = SolverStats(
            raw.get("conflicts", 0) - self._seen["conflicts"],
            raw.get("decisions", 0) - self._seen["decisions"],
            time.perf_counter() - start,
        )
        self._seen = {"conflicts": raw.get("conflicts", 0), "decisions": raw.get("decisions", 0)}
        if outcome is None:
            return SolverResult(UNKNOWN, None, stats)
        if not outcome:
            return SolverResult(UNSAT, None, stats)
        return SolverResult(SAT, _complete(s.get_model(), self.formula.num_vars), stats)

    def close(self) -> None:
        self._solver.delete()


class OneShotSession:
    """Session interface over a backend that solves from scratch each call."""

    def __init__(self, backend, formula: CnfFormula):
        self.backend = backend
        self.formula = formula

    def solve(self, limits: Limits | None = None) -> SolverResult:
        return self.backend.solve(self.formula, limits)

    def close(self) -> None:
        pass


class ExternalBackend:
    """Run an executable on a DIMACS file and parse ``s``/``v`` lines."""

    name = "external"

    def __init__(self, path: str, args: Sequence[str] = ()):
        self.path = path
        self.args = list(args)

    def session(self, formula: CnfFormula, phases: Sequence[int] = ()) -> OneShotSession:
        return OneShotSession(self, formula)

    def solve(self, formula: CnfFormula, limits: Limits | None = None, assumptions: Sequence[int] = ()) -> SolverResult:
        limits = limits or Limits()
        if assumptions:
            formula = formula.copy()
            for lit in assumptions:
                formula.add(lit)
        with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as fp:
            emit_dimacs(formula, fp)
            cnf_path = fp.name
        start = time.perf_counter()
        try:
            proc = subprocess.run(
                [self.path, *self.args, cnf_path],
                capture_output=True,
                text=True,
                timeout=limits.wall_time,
            )
        except subprocess.TimeoutExpired:
            return SolverResult(UNKNOWN, None, SolverStats(wall_time=time.perf_counter() - start))
        except OSError as exc:
            raise SolverError(f"cannot run {self.path}: {exc}") from exc
        finally:
            os.unlink(cnf_path)
        elapsed = time.perf_counter() - start
        return parse_solver_output(proc.stdout, proc.returncode, formula.num_vars, elapsed)


def parse_solver_output(stdout: str, returncode: int, num_vars: int, elapsed: float = 0.0) -> SolverResult:
    status = None
    lits: list[int] = []
    terminated = False
    stats = SolverStats(wall_time=elapsed)
    for line in stdout.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip()
            status = {"SATISFIABLE": SAT, "UNSATISFIABLE": UNSAT, "UNKNOWN": UNKNOWN, "INDETERMINATE": UNKNOWN}.get(word)
            if status is None:
                raise SolverError(f"unrecognized status line {line!r}")
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit == 0:
                    terminated = True
                else:
                    lits.append(lit)
        elif line.startswith("c ") and "conflicts" in line:
            digits = [int(t) for t in line.replace(":", " ").split() if t.isdigit()]
            if digits:
                stats.conflicts = digits[0]
    if status is None:
        raise SolverError(f"solver exited with code {returncode} and no status line")
    expected = {SAT: (0, 10), UNSAT: (0, 20), UNKNOWN: (0,)}[status]
    if returncode not in expected:
        raise SolverError(f"solver reported {status} with unexpected exit code {returncode}")
    if status != SAT:
        return SolverResult(status, None, stats)
    if not terminated:
        raise SolverError("model truncated: missing terminating 0 on 'v' lines")
    seen = {abs(l) for l in lits}
    missing = [v for v in range(1, num_vars + 1) if v not in seen]
    if missing:
        raise SolverError(f"model truncated: {len(missing)} variables unassigned (first {missing[0]})")
    return SolverResult(SAT, _complete(lits, num_vars), stats)


def solve_external(path: str, formula: CnfFormula, limits: Limits | None = None) -> SolverResult:
    return ExternalBackend(path).solve(formula, limits)


def solve(formula: CnfFormula, limits: Limits | None = None, backend=None) -> SolverResult:
    return (backend or default_backend()).solve(formula, limits)


def default_backend(name: str | None = None, path: str | None = None):
    name = name or os.environ.get("SORTNET_BACKEND", "embedded")
    if name == "embedded":
        return EmbeddedBackend()
    if name == "external":
        path = path or os.environ.get("SORTNET_SOLVER")
        if not path:
            raise SolverError("external backend selected but no solver path given (set SORTNET_SOLVER)")
        return ExternalBackend(path)
    raise SolverError(f"unknown backend {name!r}")
