"""Solve an SDPA sparse file with cvxpy and compare against an expected optimum.

Reads the dual form: maximize <F0, Y> subject to <Fk, Y> = c_k and Y psd per block.
"""
import re
import sys

import cvxpy as cp
import numpy as np


def parse(path):
    numbers = []
    for line in open(path):
        if line.startswith('"') or line.startswith("*"):
            continue
        line = re.sub(r"[,{}()=]", " ", line)
        for tok in line.split():
            try:
                numbers.append(float(tok))
            except ValueError:
                pass
    it = iter(numbers)
    m = int(next(it))
    nblocks = int(next(it))
    sizes = [abs(int(next(it))) for _ in range(nblocks)]
    c = np.array([next(it) for _ in range(m)])
    mats = [[np.zeros((s, s)) for s in sizes] for _ in range(m + 1)]
    rest = list(it)
    for k in range(0, len(rest), 5):
        mat, blk, i, j, v = rest[k : k + 5]
        a = mats[int(mat)][int(blk) - 1]
        a[int(i) - 1, int(j) - 1] = v
        a[int(j) - 1, int(i) - 1] = v
    return sizes, c, mats


def main():
    path, expected = sys.argv[1], float(sys.argv[2])
    sizes, c, mats = parse(path)
    ys = [cp.Variable((s, s), symmetric=True) for s in sizes]
    inner = lambda k: sum(cp.trace(mats[k][b] @ ys[b]) for b in range(len(sizes)))
    cons = [y >> 0 for y in ys] + [inner(k + 1) == c[k] for k in range(len(c))]
    prob = cp.Problem(cp.Maximize(inner(0)), cons)
    prob.solve(solver=cp.SCS, eps=1e-8)
    print(f"status {prob.status} value {prob.value:.8f} expected {expected:.8f}")
    return 0 if abs(prob.value - expected) < 1e-4 else 1


if __name__ == "__main__":
    sys.exit(main())
