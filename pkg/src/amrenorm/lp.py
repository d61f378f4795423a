"""Exact rational simplex for small packing LPs.

Solves ``max c.x`` subject to ``A x <= b``, ``x >= 0`` with ``b >= 0``, so
the origin is feasible and no phase one is needed. Pivoting uses Bland's
rule, which terminates without cycling. All arithmetic is Fraction.
"""
from .rational import Fraction


class UnboundedLP(ArithmeticError):
    pass


def maximize(c, A, b):
    """Return ``(value, x)`` for the LP ``max c.x, A x <= b, x >= 0``.

    ``A`` is a list of rows. Raises :class:`UnboundedLP` when the objective
    is unbounded.
    """
    n = len(c)
    m = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("constraint rows must match the objective length")
    if any(bi < 0 for bi in b):
        raise ValueError("right-hand side must be nonnegative")
    # tableau rows: [A | I | b]; objective row holds reduced costs
    width = n + m
    rows = []
    for i, row in enumerate(A):
        r = [Fraction(v) for v in row] + [Fraction(0)] * m + [Fraction(b[i])]
        r[n + i] = Fraction(1)
        rows.append(r)
    obj = [Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = list(range(n, n + m))

    while True:
        entering = next((j for j in range(width) if obj[j] > 0), None)
        if entering is None:
            break
        leave = None
        best = None
        for i, r in enumerate(rows):
            if r[entering] > 0:
                ratio = r[-1] / r[entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise UnboundedLP("objective is unbounded")
        _pivot(rows, obj, leave, entering)
        basis[leave] = entering

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][-1]
    return -obj[-1], x


def _pivot(rows, obj, i, j):
    pivot_row = rows[i]
    piv = pivot_row[j]
    if piv != 1:
        pivot_row[:] = [v / piv for v in pivot_row]
    for k, r in enumerate(rows):
        if k != i and r[j] != 0:
            f = r[j]
            r[:] = [v - f * w for v, w in zip(r, pivot_row)]
    if obj[j] != 0:
        f = obj[j]
        obj[:] = [v - f * w for v, w in zip(obj, pivot_row)]
