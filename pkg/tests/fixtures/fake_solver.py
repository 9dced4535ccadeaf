#!/usr/bin/env python3
"""Stand-in external SAT solver speaking the DIMACS competition protocol.

Usage: fake_solver.py [--sleep S] [--crash] [--truncate] [--no-status] FILE
"""
import argparse
import sys
import time

from pysat.formula import CNF
from pysat.solvers import Solver


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("file")
    ap.add_argument("--sleep", type=float, default=0.0)
    ap.add_argument("--crash", action="store_true")
    ap.add_argument("--truncate", action="store_true")
    ap.add_argument("--no-status", action="store_true")
    args = ap.parse_args()
    if args.sleep:
        time.sleep(args.sleep)
    if args.crash:
        print("c segmentation fault", flush=True)
        return 139
    if args.no_status:
        print("c nothing to say")
        return 0
    cnf = CNF(from_file=args.file)
    with Solver(name="cadical153", bootstrap_with=cnf.clauses) as s:
        ok = s.solve()
        model = s.get_model() if ok else None
    if not ok:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    values = {abs(l): l for l in model}
    lits = [values.get(v, -v) for v in range(1, cnf.nv + 1)]
    if args.truncate:
        lits = lits[: len(lits) // 2]
        print("v " + " ".join(map(str, lits)))
        return 10
    for i in range(0, len(lits), 10):
        print("v " + " ".join(map(str, lits[i:i + 10])))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
