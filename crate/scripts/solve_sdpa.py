#!/usr/bin/env python3
"""Solve a sparse SDPA problem with cvxpy and write the solution in the
CSDP layout (dual vector on the first line, then `matrix block i j value`
lines, matrix 2 being the primal block matrix).

usage: solve_sdpa.py problem.dat-s solution.sol [--solver CLARABEL]
"""
import argparse
import sys

import cvxpy as cp
import numpy as np


def data_lines(path):
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line and line[0] not in "*\"":
                yield line


def tokens(line):
    for ch in ",{}()":
        line = line.replace(ch, " ")
    return line.split()


def read_sdpa(path):
    lines = data_lines(path)
    m = int(tokens(next(lines))[0])
    nblocks = int(tokens(next(lines))[0])
    sizes = [int(t) for t in tokens(next(lines))[:nblocks]]
    rhs = [float(t) for t in tokens(next(lines))[:m]]
    entries = []
    for line in lines:
        t = tokens(line)
        entries.append((int(t[0]), int(t[1]) - 1, int(t[2]) - 1, int(t[3]) - 1, float(t[4])))
    return m, sizes, rhs, entries


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("problem")
    ap.add_argument("solution")
    ap.add_argument("--solver", default="CLARABEL")
    args = ap.parse_args()

    m, sizes, rhs, entries = read_sdpa(args.problem)
    blocks = []
    for s in sizes:
        if s > 0:
            blocks.append(cp.Variable((s, s), PSD=True))
        else:
            blocks.append(cp.Variable(-s, nonneg=True))

    def term(blk, i, j, v):
        x = blocks[blk]
        if sizes[blk] < 0:
            return v * x[i] if i == j else 0
        return v * x[i, j] if i == j else 2 * v * x[i, j]

    rows = [[] for _ in range(m + 1)]
    for mat, blk, i, j, v in entries:
        rows[mat].append(term(blk, i, j, v))
    objective = cp.Maximize(sum(rows[0]) if rows[0] else 0)
    constraints = [sum(rows[k]) == rhs[k - 1] for k in range(1, m + 1)]
    prob = cp.Problem(objective, constraints)
    prob.solve(solver=args.solver)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        print(f"solver status: {prob.status}", file=sys.stderr)
        return 1

    with open(args.solution, "w") as out:
        duals = [float(np.asarray(c.dual_value).ravel()[0]) for c in constraints]
        out.write(" ".join(f"{y:.17g}" for y in duals) + "\n")
        for b, (s, x) in enumerate(zip(sizes, blocks)):
            val = np.asarray(x.value)
            if s > 0:
                for i in range(s):
                    for j in range(i, s):
                        if val[i, j] != 0:
                            out.write(f"2 {b + 1} {i + 1} {j + 1} {val[i, j]:.17g}\n")
            else:
                for i in range(-s):
                    out.write(f"2 {b + 1} {i + 1} {i + 1} {val[i]:.17g}\n")
    print(f"status {prob.status}, objective {prob.value:.12g}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
