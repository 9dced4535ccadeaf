"""CNF encoding of "a depth-d comparator network extending a fixed prefix
sorts a given set of binary inputs".

Variables:

* ``g[t,i,j]``  comparator ``(i, j)`` sits in layer ``t``
* ``u[t,i]``    channel ``i`` is touched in layer ``t``
* ``v[x,t,i]``  value on channel ``i`` after ``t`` layers for input ``x``
* ``r[t,i,j]``  input ``i`` can influence channel ``j`` after ``t`` layers

Layers and boundaries are counted from 0; boundary 0 is the input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence, TextIO

from sortnet.core import BitVector, Comparator, Layer, Network, check


class EncodingError(RuntimeError):
    pass


@dataclass
class CnfFormula:
    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, *lits: int) -> None:
        if not lits:
            raise EncodingError("refusing to add an empty clause")
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise EncodingError(f"literal {lit} outside 1..{self.num_vars}")
        self.clauses.append(list(lits))

    def extend(self, clauses: Iterable[Sequence[int]]) -> None:
        for c in clauses:
            self.add(*c)

    def is_satisfied_by(self, model: Sequence[int]) -> bool:
        """``model`` is a sequence of signed literals (DIMACS ``v`` style)."""
        true = {lit for lit in model if lit > 0}
        false = {-lit for lit in model if lit < 0}
        for clause in self.clauses:
            if not any((lit in true) if lit > 0 else (-lit in false) for lit in clause):
                return False
        return True

    def copy(self) -> "CnfFormula":
        return CnfFormula(self.num_vars, [list(c) for c in self.clauses])


@dataclass
class VarMap:
    n: int
    depth: int
    prefix_depth: int
    g: dict[tuple[int, int, int], int] = field(default_factory=dict)
    u: dict[tuple[int, int], int] = field(default_factory=dict)
    v: dict[tuple[BitVector, int, int], int] = field(default_factory=dict)
    r: dict[tuple[int, int, int], int] = field(default_factory=dict)
    inputs: list[BitVector] = field(default_factory=list)
    names: dict[int, tuple] = field(default_factory=dict)
    has_reachability: bool = False

    def _bind(self, formula: CnfFormula, table: dict, key, kind: str) -> int:
        var = formula.new_var()
        table[key] = var
        self.names[var] = (kind, *key)
        return var

    def lookup(self, var: int) -> tuple:
        return self.names[var]

    def pair(self, t: int, a: int, b: int) -> int:
        return self.g[(t, min(a, b), max(a, b))]


def encode_structure(n: int, d: int, prefix: Network | None = None) -> tuple[CnfFormula, VarMap]:
    prefix = prefix if prefix is not None else Network(n)
    check(prefix)
    if prefix.n != n:
        raise EncodingError(f"prefix has {prefix.n} channels, expected {n}")
    if prefix.depth() > d:
        raise EncodingError(f"prefix depth {prefix.depth()} exceeds target depth {d}")
    formula = CnfFormula()
    vm = VarMap(n=n, depth=d, prefix_depth=prefix.depth())
    pairs = list(combinations(range(n), 2))
    for t in range(d):
        for i, j in pairs:
            vm._bind(formula, vm.g, (t, i, j), "g")
    for t in range(d):
        for i in range(n):
            vm._bind(formula, vm.u, (t, i), "u")

    for t in range(d):
        for i in range(n):
            incident = [vm.pair(t, i, j) for j in range(n) if j != i]
            for a, b in combinations(incident, 2):
                formula.add(-a, -b)
            u = vm.u[(t, i)]
            formula.add(-u, *incident)
            for g in incident:
                formula.add(-g, u)

    for t, layer in enumerate(prefix.layers):
        present = set(layer.comparators)
        for i, j in pairs:
            var = vm.g[(t, i, j)]
            formula.add(var if Comparator(i, j) in present else -var)
    return formula, vm


def add_sortedness(formula: CnfFormula, vm: VarMap, x: Sequence[int]) -> None:
    x = BitVector(x)
    if len(x) != vm.n:
        raise EncodingError(f"input width {len(x)} does not match n={vm.n}")
    if x in vm.inputs:
        return
    vm.inputs.append(x)
    n, d = vm.n, vm.depth
    val = {}
    for t in range(d + 1):
        for i in range(n):
            val[t, i] = vm._bind(formula, vm.v, (x, t, i), "v")
    for i, bit in enumerate(x):
        formula.add(val[0, i] if bit else -val[0, i])
    for t in range(d):
        for i, j in combinations(range(n), 2):
            g = vm.g[(t, i, j)]
            a, b = val[t, i], val[t, j]
            lo, hi = val[t + 1, i], val[t + 1, j]
            formula.add(-g, -lo, a)
            formula.add(-g, -lo, b)
            formula.add(-g, lo, -a, -b)
            formula.add(-g, hi, -a)
            formula.add(-g, hi, -b)
            formula.add(-g, -hi, a, b)
        for i in range(n):
            u = vm.u[(t, i)]
            formula.add(u, -val[t + 1, i], val[t, i])
            formula.add(u, val[t + 1, i], -val[t, i])
    for i in range(n - 1):
        formula.add(-val[d, i], val[d, i + 1])


def add_reachability(formula: CnfFormula, vm: VarMap) -> None:
    """Require every input channel to be able to influence every output.

    The influence relation is unrolled layer by layer; a comparator lets
    influence cross in both directions.
    """
    if vm.has_reachability:
        return
    vm.has_reachability = True
    n, d = vm.n, vm.depth
    for t in range(d + 1):
        for i in range(n):
            for j in range(n):
                vm._bind(formula, vm.r, (t, i, j), "r")
    r = vm.r
    for i in range(n):
        for j in range(n):
            formula.add(r[0, i, j] if i == j else -r[0, i, j])
    for t in range(1, d + 1):
        for i in range(n):
            for j in range(n):
                cur, prev = r[t, i, j], r[t - 1, i, j]
                formula.add(-prev, cur)
                partners = [(k, vm.pair(t - 1, j, k)) for k in range(n) if k != j]
                # at most one partner per channel, so "cur and not prev" picks
                # out exactly one comparator whose other end was reached
                formula.add(-cur, prev, *(g for _, g in partners))
                for k, g in partners:
                    formula.add(-g, -r[t - 1, i, k], cur)
                    formula.add(-cur, prev, -g, r[t - 1, i, k])
    for i in range(n):
        for j in range(n):
            formula.add(r[d, i, j])


def decode_model(vm: VarMap, model: Sequence[int]) -> Network:
    """Extract the network from a model; empty layers are dropped."""
    true = {lit for lit in model if lit > 0}
    assigned = {abs(lit) for lit in model}
    layers = []
    for t in range(vm.depth):
        comps = []
        used: set[int] = set()
        for i, j in combinations(range(vm.n), 2):
            var = vm.g[(t, i, j)]
            if var not in assigned:
                raise EncodingError(f"model does not assign comparator variable {var}")
            if var in true:
                if i in used or j in used:
                    raise EncodingError(f"model places two comparators on one channel in layer {t}")
                used.update((i, j))
                comps.append(Comparator(i, j))
        if comps:
            layers.append(Layer(tuple(comps)))
    return check(Network(vm.n, tuple(layers)))


def induced_assignment(vm: VarMap, network: Network) -> list[int]:
    """The full assignment a concrete network of depth <= d induces on every
    variable of ``vm`` (shallower networks are padded with empty layers)."""
    if network.n != vm.n or network.depth() > vm.depth:
        raise EncodingError("network does not fit the encoding dimensions")
    n, d = vm.n, vm.depth
    layers = list(network.layers) + [Layer()] * (d - network.depth())
    value: dict[int, bool] = {}
    for (t, i, j), var in vm.g.items():
        value[var] = Comparator(i, j) in layers[t].comparators
    for (t, i), var in vm.u.items():
        value[var] = i in layers[t].channels()
    for x in vm.inputs:
        cur = list(x)
        for t in range(d + 1):
            for i in range(n):
                value[vm.v[(x, t, i)]] = bool(cur[i])
            if t < d:
                for lo, hi in layers[t]:
                    a, b = cur[lo], cur[hi]
                    cur[lo], cur[hi] = min(a, b), max(a, b)
    if vm.r:
        reach = [1 << j for j in range(n)]  # reach[j]: inputs influencing channel j
        for t in range(d + 1):
            for i in range(n):
                for j in range(n):
                    value[vm.r[(t, i, j)]] = bool((reach[j] >> i) & 1)
            if t < d:
                for lo, hi in layers[t]:
                    both = reach[lo] | reach[hi]
                    reach[lo] = reach[hi] = both
    return [var if value.get(var, False) else -var for var in range(1, max(vm.names, default=0) + 1)]


def emit_dimacs(formula: CnfFormula, sink: TextIO, vm: VarMap | None = None) -> None:
    if vm is not None:
        sink.write(f"c sorting network instance n={vm.n} d={vm.depth} prefix_depth={vm.prefix_depth}\n")
        for (t, i, j), var in sorted(vm.g.items()):
            sink.write(f"c g {t} {i} {j} {var}\n")
    sink.write(f"p cnf {formula.num_vars} {len(formula.clauses)}\n")
    for clause in formula.clauses:
        sink.write(" ".join(map(str, clause)) + " 0\n")


def read_dimacs(source: TextIO) -> tuple[CnfFormula, dict[tuple[int, int, int], int]]:
    """Parse DIMACS; also return the ``c g`` legend so models can be decoded."""
    formula = None
    legend: dict[tuple[int, int, int], int] = {}
    pending: list[int] = []
    for line in source:
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 6 and parts[1] == "g":
                t, i, j, var = map(int, parts[2:])
                legend[(t, i, j)] = var
            continue
        if line.startswith("p"):
            _, kind, nv, _nc = line.split()
            if kind != "cnf":
                raise EncodingError(f"unsupported problem type {kind!r}")
            formula = CnfFormula(int(nv))
            continue
        if formula is None:
            raise EncodingError("clause before 'p cnf' header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                formula.add(*pending)
                pending = []
            else:
                pending.append(lit)
    if formula is None:
        raise EncodingError("missing 'p cnf' header")
    if pending:
        raise EncodingError("unterminated final clause")
    return formula, legend


def network_from_legend(legend: dict[tuple[int, int, int], int], n: int, d: int, model: Sequence[int]) -> Network:
    vm = VarMap(n=n, depth=d, prefix_depth=0, g=dict(legend))
    return decode_model(vm, model)
