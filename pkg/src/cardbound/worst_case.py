"""Construction of value tensors and worst-case tensors.

For unbounded tuple multiplicity the worst-case tensor comes from a linear
greedy sweep that matches the heaviest remaining ranks across dimensions.
For two dimensions with a finite multiplicity cap b, the value tensor has a
closed form: V(p,q) is the minimum over dual cut points (s,t) of
F(p)-F(s)+G(q)-G(t)+s*t*b, which a running-minimum recurrence evaluates in
O(n^2); the worst-case tensor is its second discrete difference.  For other
finite-b shapes an exact rational LP recovers V box by box (budget-gated:
entries may be negative for three or more dimensions, so this path is for
verification and small inputs, not production evaluation).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import simplex
from .degrees import DegreeSequence, cdf
from .errors import BudgetError, ShapeError, UnsupportedConstruction
from .rational import INF, is_infinite
from .tensor import SparseTensor
from .tensor import contract as _contract_sparse

DEFAULT_CELL_BUDGET = 64


class Construction(Enum):
    GREEDY_INFINITE_B = "greedy-infinite-b"
    DUAL_FORMULA_1D = "dual-formula-1d"
    DUAL_FORMULA_2D = "dual-formula-2d"
    LP_ORACLE = "lp-oracle"


@dataclass(frozen=True)
class WorstCaseTensor:
    tensor: SparseTensor
    source_seqs: tuple[DegreeSequence, ...]
    b: object
    construction: Construction

    @property
    def dims(self):
        return self.tensor.dims


def value_at_infinite_b(cdfs, m) -> Fraction:
    """V at prefix box m when b is unbounded: min over the per-axis CDFs."""
    cdfs = list(cdfs)
    if len(m) != len(cdfs):
        raise ShapeError(f"box {m} has arity {len(m)}, expected {len(cdfs)}")
    vals = []
    for F, mi in zip(cdfs, m):
        if mi < 0 or mi > F.n:
            raise ShapeError(f"box index {mi} outside [0,{F.n}]")
        vals.append(F.at(mi))
    return min(vals)


def build_greedy_infinite_b(seqs) -> WorstCaseTensor:
    """Linear-time worst-case tensor for unbounded multiplicity.

    Pointer sweep: repeatedly place the minimum remaining degree at the
    current corner, deplete it in every dimension, and advance the pointer of
    the dimension that hit zero (lowest axis wins ties, for determinism).
    Runs until any pointer passes its end, which also covers inputs whose
    totals differ.
    """
    seqs = tuple(seqs)
    if not seqs:
        raise ShapeError("need at least one degree sequence")
    dims = tuple(s.length for s in seqs)
    remaining = [list(s.padded()) for s in seqs]
    pointers = [1] * len(seqs)
    entries = {}
    while all(p <= n for p, n in zip(pointers, dims)):
        current = [remaining[i][pointers[i] - 1] for i in range(len(seqs))]
        d_min = min(current)
        p_min = current.index(d_min)
        if d_min > 0:
            entries[tuple(pointers)] = d_min
            for i in range(len(seqs)):
                remaining[i][pointers[i] - 1] -= d_min
        pointers[p_min] += 1
    tensor = SparseTensor(dims, entries)
    return WorstCaseTensor(tensor, seqs, INF, Construction.GREEDY_INFINITE_B)


def build_finite_b_1d(f: DegreeSequence, b) -> WorstCaseTensor:
    """Worst-case vector under a finite cap: each rank holds min(degree, b).

    One-dimensional specialization of the dual cut-point formula; V(p) is
    min over s <= p of F(p)-F(s)+s*b, whose difference is min(f(p), b).
    """
    if is_infinite(b):
        raise UnsupportedConstruction("b is infinite; use build_greedy_infinite_b")
    entries = {}
    for rank in range(1, f.length + 1):
        v = min(f.at(rank), b)
        if v != 0:
            entries[(rank,)] = v
    tensor = SparseTensor((f.length,), entries)
    return WorstCaseTensor(tensor, (f,), b, Construction.DUAL_FORMULA_1D)


def build_finite_b_2d(f: DegreeSequence, g: DegreeSequence, b) -> WorstCaseTensor:
    """Exact worst-case matrix under a finite multiplicity cap.

    The dual optimum over sorted 0-1 multiplier vectors reduces V(p,q) to a
    minimum over cut points (s,t); with W(p,q) = min_{s<=p,t<=q}
    (-F(s)-G(t)+s*t*b) the recurrence W(p,q) = min(W(p-1,q), W(p,q-1),
    -F(p)-G(q)+p*q*b) is exact, and V = F(p)+G(q)+W.  The result is
    integral and non-negative for integral inputs but may exceed b.
    """
    if is_infinite(b):
        raise UnsupportedConstruction("b is infinite; use build_greedy_infinite_b")
    n1, n2 = f.length, g.length
    F = cdf(f).prefix
    G = cdf(g).prefix
    W = [[Fraction(0)] * (n2 + 1) for _ in range(n1 + 1)]
    for q in range(1, n2 + 1):
        W[0][q] = min(W[0][q - 1], -G[q])
    for p in range(1, n1 + 1):
        W[p][0] = min(W[p - 1][0], -F[p])
        for q in range(1, n2 + 1):
            W[p][q] = min(W[p - 1][q], W[p][q - 1], -F[p] - G[q] + p * q * b)
    V = [[F[p] + G[q] + W[p][q] for q in range(n2 + 1)] for p in range(n1 + 1)]
    entries = {}
    for p in range(1, n1 + 1):
        for q in range(1, n2 + 1):
            c = V[p][q] - V[p - 1][q] - V[p][q - 1] + V[p - 1][q - 1]
            if c != 0:
                entries[(p, q)] = c
    tensor = SparseTensor((n1, n2), entries)
    return WorstCaseTensor(tensor, (f, g), b, Construction.DUAL_FORMULA_2D)


def lp_prefix_value(seqs, b, box) -> Fraction:
    """Exact optimum of the primal LP for one prefix box.

    Maximizes the total mass of a tensor supported on the box, subject to
    per-rank marginal caps and (when finite) the per-cell cap b.
    """
    seqs = tuple(seqs)
    if len(box) != len(seqs):
        raise ShapeError(f"box {box} has arity {len(box)}, expected {len(seqs)}")
    for mi, s in zip(box, seqs):
        if mi < 0 or mi > s.length:
            raise ShapeError(f"box index {mi} outside [0,{s.length}]")
    if any(mi == 0 for mi in box):
        return Fraction(0)
    cells = list(itertools.product(*(range(1, mi + 1) for mi in box)))
    index = {cell: j for j, cell in enumerate(cells)}
    rows, rhs = [], []
    for axis, seq in enumerate(seqs):
        for rank in range(1, box[axis] + 1):
            row = [Fraction(0)] * len(cells)
            for cell, j in index.items():
                if cell[axis] == rank:
                    row[j] = Fraction(1)
            rows.append(row)
            rhs.append(seq.at(rank))
    if not is_infinite(b):
        for j in range(len(cells)):
            row = [Fraction(0)] * len(cells)
            row[j] = Fraction(1)
            rows.append(row)
            rhs.append(b)
    value, _ = simplex.maximize([Fraction(1)] * len(cells), rows, rhs)
    return value


def build_lp_oracle(seqs, b, cell_budget: int = DEFAULT_CELL_BUDGET) -> WorstCaseTensor:
    """Worst-case tensor from the exact LP, any dimension, finite b only."""
    seqs = tuple(seqs)
    if not seqs:
        raise ShapeError("need at least one degree sequence")
    if is_infinite(b):
        raise UnsupportedConstruction("b is infinite; use build_greedy_infinite_b")
    dims = tuple(s.length for s in seqs)
    ncells = 1
    for n in dims:
        ncells *= n
    if ncells > cell_budget:
        raise BudgetError(f"{ncells} cells exceed budget {cell_budget}")
    V = {}
    for box in itertools.product(*(range(n + 1) for n in dims)):
        V[box] = lp_prefix_value(seqs, b, box)
    entries = {}
    d = len(dims)
    for coord in itertools.product(*(range(1, n + 1) for n in dims)):
        c = Fraction(0)
        for drop in itertools.product((0, 1), repeat=d):
            corner = tuple(ci - di for ci, di in zip(coord, drop))
            sign = -1 if sum(drop) % 2 else 1
            c += sign * V[corner]
        if c != 0:
            entries[coord] = c
    tensor = SparseTensor(dims, entries)
    return WorstCaseTensor(tensor, seqs, b, Construction.LP_ORACLE)


def contract(t, vectors):
    """Contract a worst-case tensor with per-axis sorted vectors."""
    tensor = t.tensor if isinstance(t, WorstCaseTensor) else t
    return _contract_sparse(tensor, vectors)
