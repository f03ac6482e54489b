"""Pure-NumPy fallback for the compiled inertia kernels.

Same contracts as ``_sturm.pyx``; see that file for the algorithm notes.
The tridiagonal pass degrades to a plain Python loop (the recurrence is
sequential), the banded pass to per-column NumPy slice updates — both are
correct but much slower than the extension; ``benchmarks/bench_kernels.py``
quantifies the gap.
"""

from __future__ import annotations

import numpy as np


def tridiag_inertia(diag, off, pivmin: float):
    d = np.ascontiguousarray(diag, dtype=float)
    e = np.ascontiguousarray(off, dtype=float)
    n = d.shape[0]
    if n == 0:
        return 0, 0
    if e.shape[0] != n - 1:
        raise ValueError("off-diagonal must have length n-1")
    dl = d.tolist()
    el = e.tolist()
    neg = 0
    zero_hits = 0
    p = dl[0]
    if abs(p) < pivmin:
        zero_hits += 1
        p = pivmin if p > 0.0 else -pivmin
    if p < 0.0:
        neg += 1
    for i in range(1, n):
        p = dl[i] - el[i - 1] * el[i - 1] / p
        if abs(p) < pivmin:
            zero_hits += 1
            p = pivmin if p > 0.0 else -pivmin
        if p < 0.0:
            neg += 1
    return neg, zero_hits


def banded_inertia(ab, pivmin: float):
    ab = np.array(ab, dtype=float, order="C")  # own copy; updated in place
    bw = ab.shape[0] - 1
    n = ab.shape[1]
    neg = 0
    zero_hits = 0
    for j in range(n):
        p = ab[0, j]
        if abs(p) < pivmin:
            zero_hits += 1
            p = pivmin if p > 0.0 else -pivmin
        if p < 0.0:
            neg += 1
        w = min(bw, n - 1 - j)
        col = ab[: w + 1, j]
        for c in range(1, w + 1):
            acj = col[c] / p
            if acj != 0.0:
                ab[: w - c + 1, j + c] -= acj * col[c : w + 1]
    return neg, zero_hits
