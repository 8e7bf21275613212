"""Subset dynamic program over atom bitmasks, shared by the cover bounds.

COST(S) is the cheaper of (a) the product over S's connected components of a
caller-supplied per-component cost, and (b) any binary split of S; the answer
is the minimum COST over variable-covering subsets.  This is the cover
minimization used by both the polymatroid bound and the functional bound.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BudgetError, CardboundError
from .query import QuerySpec, connected_components

MAX_SUBSET_ATOMS = 16


def min_cover_cost(q: QuerySpec, component_cost, max_atoms: int = MAX_SUBSET_ATOMS) -> Fraction:
    """Minimize the product cost over covers of q.

    `component_cost(frozenset_of_aliases)` prices one connected subquery
    (already minimized over roots by the caller).
    """
    aliases = list(q.aliases())
    m = len(aliases)
    if m > max_atoms:
        raise BudgetError(f"{m} atoms exceed the subset-DP budget of {max_atoms}")
    all_vars = set(q.variables)
    var_bits = {v: i for i, v in enumerate(sorted(all_vars))}
    full_var_mask = (1 << len(var_bits)) - 1
    atom_var_mask = []
    for a in q.atoms:
        mask = 0
        for v in a.vars:
            mask |= 1 << var_bits[v]
        atom_var_mask.append(mask)

    cost = [None] * (1 << m)
    covered = [0] * (1 << m)
    best = None
    for mask in range(1, 1 << m):
        low = mask & (-mask)
        covered[mask] = covered[mask ^ low] | atom_var_mask[low.bit_length() - 1]
        subset = frozenset(aliases[i] for i in range(m) if mask >> i & 1)
        acc = Fraction(1)
        for comp in connected_components(q, subset):
            acc *= component_cost(comp)
        sub = (mask - 1) & mask
        while sub:
            other = mask ^ sub
            if sub < other:  # each unordered split once
                c = cost[sub] * cost[other]
                if c < acc:
                    acc = c
            sub = (sub - 1) & mask
        cost[mask] = acc
        if covered[mask] == full_var_mask and (best is None or acc < best):
            best = acc
    if best is None:
        raise CardboundError("query has no covering atom subset")
    return best
