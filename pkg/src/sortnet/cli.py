"""Command-line interface.

Exit codes: 0 success / sorts-all, 1 negative result (counterexample or
infeasible), 2 usage or parse error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from sortnet import netfile
from sortnet.backend import Limits, SolverError, default_backend
from sortnet.cegis import FOUND, INFEASIBLE, SynthesisConfig, synthesize, write_trace
from sortnet.core import BitVector, Network
from sortnet.encode import EncodingError, add_reachability, add_sortedness, emit_dimacs, encode_structure
from sortnet.generators import KNOWN, batcher_oddeven_sort, known_network
from sortnet.prefix import FIGURE_PREFIXES, named_prefix
from sortnet.verify import EXHAUSTIVE_LIMIT, InputFamily, check_family, verify_01

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read_network(path: str) -> Network:
    try:
        if path == "-":
            return netfile.load(sys.stdin)
        return netfile.read(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except netfile.NetworkFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        with open(out, "w") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _family(text: str, n: int) -> InputFamily:
    if os.path.isfile(text):
        with open(text) as fp:
            vecs = [BitVector.from_str(line.split("#")[0]) for line in fp if line.split("#")[0].strip()]
        return InputFamily.explicit(vecs)
    try:
        return InputFamily.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad input family {text!r}: {exc}") from None


def _prefix(spec: str | None, n: int) -> Network:
    spec = spec or "canonical"
    if os.path.isfile(spec):
        net = _read_network(spec)
        if net.n != n:
            raise UsageError(f"prefix file has n={net.n}, expected {n}")
        return net
    try:
        return named_prefix(spec, n)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args) -> int:
    net = _read_network(args.network)
    start = time.perf_counter()
    if args.family in (None, "all", "all-binary"):
        if net.n > args.limit:
            raise UsageError(f"n={net.n} exceeds the exhaustive limit {args.limit}; pass --family")
        verdict = verify_01(net, limit=args.limit, workers=args.threads)
    else:
        verdict = check_family(net, _family(args.family, net.n))
    elapsed = time.perf_counter() - start
    if args.json:
        report = verdict.to_json() | {"n": net.n, "depth": net.depth(), "size": net.size(), "wall_ms": round(elapsed * 1000, 3)}
        print(json.dumps(report))
    else:
        print(f"{verdict.inputs_checked} inputs, {verdict.status} (n={net.n}, depth={net.depth()}, "
              f"size={net.size()}, {elapsed:.3f}s)")
        if verdict.witness is not None:
            print(f"witness: {verdict.witness}")
    return EXIT_OK if verdict.sorts else EXIT_NEGATIVE


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fp:
            return json.load(fp)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None


def _pick(flag, config: dict, key: str, default=None):
    # flags win over the config file, which wins over the default
    if flag is not None:
        return flag
    return config.get(key, default)


def cmd_synth(args) -> int:
    config = _load_config(args.config)
    n = _pick(args.n, config, "n")
    d = _pick(args.depth, config, "depth")
    if n is None or d is None:
        raise UsageError("--n and --depth are required")
    if n < 0 or d < 0:
        raise UsageError("--n and --depth must be non-negative")
    prefix = _prefix(_pick(args.prefix, config, "prefix"), n) if n >= 2 else Network(n)
    if prefix.depth() > d:
        raise UsageError(f"prefix depth {prefix.depth()} exceeds --depth {d}")
    reach = not args.no_reachability and config.get("reachability", True)
    seeds = _pick(args.seeds, config, "seeds", "window:2")
    seed_family = None if seeds == "none" else _family(seeds, n)
    family = _family(_pick(args.family, config, "family", "all"), n)
    timeout = _pick(args.timeout, config, "timeout")
    try:
        backend = default_backend(_pick(args.backend, config, "backend"), _pick(args.solver, config, "solver"))
    except SolverError as exc:
        raise UsageError(str(exc)) from None

    cfg = SynthesisConfig(
        n=n, d=d, prefix=prefix, use_reachability=reach, seed_inputs=seed_family,
        counterexample_family=family, timeout=timeout, seed=_pick(args.seed, config, "seed", 0),
    )
    outcome = synthesize(cfg, backend=backend)
    trace_out = _pick(args.trace_out, config, "trace_out")
    if trace_out:
        with open(trace_out, "w") as fp:
            write_trace(outcome.trace, fp)
    summary = {
        "status": outcome.status,
        "n": n,
        "depth": d,
        "iterations": outcome.iterations,
        "inputs": len(outcome.inputs),
        "elapsed_s": round(outcome.elapsed, 3),
    }
    if outcome.status == FOUND:
        net = outcome.network
        summary["network"] = netfile.to_json(net)
        _emit(netfile.format_text(net, comment=f"synthesized n={n} depth={net.depth()} "
                                  f"size={net.size()} iterations={outcome.iterations}"), args.out)
    print(json.dumps(summary) if args.json else
          f"{outcome.status}: n={n} depth={d} iterations={outcome.iterations} ({outcome.elapsed:.2f}s)",
          file=sys.stderr)
    if outcome.status == FOUND:
        return EXIT_OK
    return EXIT_NEGATIVE if outcome.status == INFEASIBLE else EXIT_LIMIT


def cmd_emit_cnf(args) -> int:
    if args.n < 0 or args.depth < 0:
        raise UsageError("--n and --depth must be non-negative")
    prefix = _prefix(args.prefix, args.n) if args.prefix else Network(args.n)
    try:
        formula, vm = encode_structure(args.n, args.depth, prefix)
    except EncodingError as exc:
        raise UsageError(str(exc)) from None
    if args.inputs != "none":
        for x in _family(args.inputs, args.n).vectors_for(args.n):
            add_sortedness(formula, vm, x)
    if args.reachability and args.n >= 2:
        add_reachability(formula, vm)
    if args.out and args.out != "-":
        with open(args.out, "w") as fp:
            emit_dimacs(formula, fp, vm)
    else:
        emit_dimacs(formula, sys.stdout, vm)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "batcher":
        if args.arg is None or not args.arg.isdigit() or int(args.arg) < 1:
            raise UsageError("gen batcher needs a positive channel count")
        net = batcher_oddeven_sort(int(args.arg))
        comment = f"Batcher odd-even mergesort, n={net.n}"
    else:
        try:
            net = known_network(args.arg or "")
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        comment = args.arg
    if args.json:
        _emit(json.dumps(netfile.to_json(net)) + "\n", args.out)
    else:
        _emit(netfile.format_text(net, comment), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sortnet", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="check that a network sorts")
    v.add_argument("network", help="network file, or - for stdin")
    v.add_argument("--family", help="all (default), window:<k>, comma-separated bitstrings, or a file")
    v.add_argument("--json", action="store_true")
    v.add_argument("--threads", type=int, default=None)
    v.add_argument("--limit", type=int, default=EXHAUSTIVE_LIMIT, help="largest n checked exhaustively")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("synth", help="counterexample-guided synthesis")
    s.add_argument("--n", type=int)
    s.add_argument("--depth", type=int)
    s.add_argument("--prefix", help=f"canonical (default), none, {', '.join(FIGURE_PREFIXES)}, or a network file")
    s.add_argument("--no-reachability", action="store_true")
    s.add_argument("--timeout", type=float, help="global wall-clock budget in seconds")
    s.add_argument("--seed", type=int)
    s.add_argument("--seeds", help="initial inputs: window:<k> (default window:2), none, bitstrings or file")
    s.add_argument("--family", help="counterexample family (default all)")
    s.add_argument("--backend", choices=["embedded", "external"])
    s.add_argument("--solver", help="external solver executable")
    s.add_argument("--config", help="JSON config; flags override it")
    s.add_argument("--trace-out")
    s.add_argument("--out", help="write the network here instead of stdout")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_synth)

    e = sub.add_parser("emit-cnf", help="write a DIMACS instance")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--depth", type=int, required=True)
    e.add_argument("--prefix", help="none (default), canonical, a figure prefix, or a network file")
    e.add_argument("--inputs", default="all", help="all (default), window:<k>, none, bitstrings or file")
    e.add_argument("--reachability", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_emit_cnf)

    g = sub.add_parser("gen", help="generate a baseline or published network")
    g.add_argument("kind", choices=["batcher", "known"])
    g.add_argument("arg", nargs="?", help=f"channel count for batcher; one of {', '.join(KNOWN)} for known")
    g.add_argument("--n", dest="n_flag", help=argparse.SUPPRESS)
    g.add_argument("--json", action="store_true")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "n_flag", None) is not None:
            args.arg = args.n_flag
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
        return args.func(args)
    except UsageError as exc:
        print(f"sortnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"sortnet: solver error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
