"""Self-contained exact simplex for small LPs.

Solves  max c.x  subject to  A.x <= b, x >= 0  with all data rational and
b >= 0, so the all-slack basis is feasible and no phase-1 is needed.  Bland's
rule guarantees termination.  Instances here are tiny (tens of variables), so
a dense Fraction tableau is both exact and fast enough.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import CardboundError
from .rational import as_rational


class UnboundedLp(CardboundError):
    pass


def maximize(c, rows, rhs):
    """Return (optimal value, primal solution) for max c.x, A.x <= b, x >= 0.

    `rows` is a list of constraint coefficient lists, `rhs` the right-hand
    sides (all >= 0).  Raises UnboundedLp if the objective is unbounded.
    """
    n = len(c)
    m = len(rows)
    c = [as_rational(v) for v in c]
    b = [as_rational(v) for v in rhs]
    if any(v < 0 for v in b):
        raise CardboundError("rhs must be non-negative for slack-basis start")
    # tableau rows: [A | I | b]; objective row holds reduced costs for max.
    tab = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise CardboundError("constraint arity mismatch")
        r = [as_rational(v) for v in row]
        r += [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        r.append(b[i])
        tab.append(r)
    obj = c + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]

    while True:
        enter = next((j for j in range(n + m) if obj[j] > 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise UnboundedLp("objective unbounded above")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, tab[leave])]
        basis[leave] = enter

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return value, x
