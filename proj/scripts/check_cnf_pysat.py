#!/usr/bin/env python3
"""Solve a DIMACS file written by `lrc encode` with an external SAT solver.

Prints SAT (with the decoded speeds) or UNSAT. With --expect, exits 1 when
the answer differs.
"""

import argparse
import re
import sys

from pysat.formula import CNF
from pysat.solvers import Solver

VAR_LINE = re.compile(r"^c var (\d+) = speed (\d+)$")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("cnf", help="DIMACS file")
    ap.add_argument("--solver", default="cadical153")
    ap.add_argument("--expect", choices=["sat", "unsat"])
    args = ap.parse_args()

    var_map = {}
    with open(args.cnf, encoding="ascii") as f:
        for line in f:
            m = VAR_LINE.match(line.strip())
            if m:
                var_map[int(m.group(1))] = int(m.group(2))

    formula = CNF(from_file=args.cnf)
    with Solver(name=args.solver, bootstrap_with=formula.clauses) as s:
        sat = s.solve()
        if sat:
            speeds = sorted(var_map[v] for v in s.get_model() if v > 0 and v in var_map)
            print("SAT", " ".join(map(str, speeds)))
        else:
            print("UNSAT")

    if args.expect and (args.expect == "sat") != sat:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
