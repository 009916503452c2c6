"""Exact phase-one simplex for ``A y = b, y >= 0`` over the rationals.

Returns either a feasible ``y`` or a Farkas certificate ``pi`` with
``A^T pi <= 0`` and ``b^T pi > 0``. Bland's rule guarantees termination.
Intended for few rows (``m <= ~10``) and up to a few thousand columns.
"""
from __future__ import annotations

from fractions import Fraction


def feasibility(A, b):
    """Solve ``A y = b, y >= 0`` exactly.

    ``A`` is a list of ``m`` rows of length ``n``. Returns
    ``("feasible", y)`` or ``("infeasible", pi)``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    flip = [1 if bi >= 0 else -1 for bi in b]
    width = n + m
    T = []
    for i in range(m):
        row = [Fraction(flip[i] * a) for a in A[i]] + [Fraction(0)] * m + [Fraction(flip[i] * b[i])]
        row[n + i] = Fraction(1)
        T.append(row)
    basis = [n + i for i in range(m)]
    # reduced costs of the phase-one objective (sum of artificials)
    cost = [Fraction(0)] * (width + 1)
    for j in range(n):
        cost[j] = -sum(T[i][j] for i in range(m))
    cost[width] = -sum(T[i][width] for i in range(m))

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # cannot happen: the phase-one objective is bounded below by zero
            raise RuntimeError("unbounded phase-one problem")
        piv = T[leave][enter]
        prow = [v / piv for v in T[leave]]
        T[leave] = prow
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f:
                    T[i] = [v - f * p for v, p in zip(T[i], prow)]
        f = cost[enter]
        cost = [v - f * p for v, p in zip(cost, prow)]
        basis[leave] = enter

    objective = sum(T[i][width] for i in range(m) if basis[i] >= n)
    if objective == 0:
        y = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                y[j] = T[i][width]
        return "feasible", y
    # pi' = c_B^T B^{-1}; the artificial columns of the tableau hold B^{-1}
    pi = []
    for k in range(m):
        s = sum(T[i][n + k] for i in range(m) if basis[i] >= n)
        pi.append(flip[k] * s)
    return "infeasible", pi
