"""Independent brute-force verifiers: bag joins, exact LP optima, instance generation.

These exist to check the fast paths at desk scale; none of them shares code
with the evaluators they validate (the LP is the one sanctioned exception:
a single exact simplex backs both the oracle and the LP-based construction).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .degrees import DegreeSequence
from .errors import BudgetError, FeasibilityError, ShapeError
from .query import QuerySpec
from .rational import is_infinite
from .worst_case import lp_prefix_value

DEFAULT_JOIN_BUDGET = 10_000_000
DEFAULT_LP_CELLS = 64


@dataclass(frozen=True)
class BagInstance:
    """A bag relation: tuple -> multiplicity (>= 1), fixed arity."""

    arity: int
    tuples: dict = field(default_factory=dict)

    def __post_init__(self):
        for t, m in self.tuples.items():
            if len(t) != self.arity:
                raise ShapeError(f"tuple {t} has arity {len(t)}, expected {self.arity}")
            if not isinstance(m, int) or m < 1:
                raise ShapeError(f"multiplicity of {t} must be a positive int, got {m!r}")

    def cardinality(self) -> int:
        return sum(self.tuples.values())

    def column_degrees(self, col: int) -> DegreeSequence:
        freq = {}
        for t, m in self.tuples.items():
            freq[t[col]] = freq.get(t[col], 0) + m
        return DegreeSequence.of(sorted(freq.values(), reverse=True))

    def max_tuple_multiplicity(self) -> int:
        return max(self.tuples.values(), default=1)


def brute_force_join(instances: dict, q: QuerySpec, budget: int = DEFAULT_JOIN_BUDGET):
    """Exact bag-join count by summing multiplicity products over assignments.

    Joins on variables bound to data columns; private wildcard variables have
    no column and are already aggregated into the bag multiplicities.  The
    cross product of the active domains must stay within budget.
    """
    bound_vars = []
    for v in q.variables:
        if any(a.position_of(v) is not None for a in q.atoms if v in a.vars):
            bound_vars.append(v)
    # per-atom lookup keyed by the atom's bound-variable values
    atom_keys = {}
    tables = {}
    for a in q.atoms:
        keys = [(v, a.position_of(v)) for v in a.vars if a.position_of(v) is not None]
        atom_keys[a.alias] = tuple(v for v, _ in keys)
        table = {}
        inst = instances[a.alias]
        for t, m in inst.tuples.items():
            k = tuple(t[p] for _, p in keys)
            table[k] = table.get(k, 0) + m
        tables[a.alias] = table
    domains = {}
    for v in bound_vars:
        dom = None
        for a in q.atoms:
            if v in a.vars and a.position_of(v) is not None:
                vals = {t[a.position_of(v)] for t in instances[a.alias].tuples}
                dom = vals if dom is None else dom & vals
        if not dom:
            return 0
        domains[v] = sorted(dom, key=repr)
    size = 1
    for v in bound_vars:
        size *= len(domains[v])
        if size > budget:
            raise BudgetError(f"active-domain cross product exceeds budget {budget}")
    # atoms become ready once their last bound variable is assigned
    ready_at = {a.alias: 0 for a in q.atoms}
    for a in q.atoms:
        idxs = [bound_vars.index(v) for v in atom_keys[a.alias]]
        ready_at[a.alias] = max(idxs) + 1 if idxs else 0
    by_depth = [[] for _ in range(len(bound_vars) + 1)]
    for alias, d in ready_at.items():
        by_depth[d].append(alias)

    assignment = {}
    total = 0

    def recurse(depth, product):
        nonlocal total
        for alias in by_depth[depth]:
            key = tuple(assignment[v] for v in atom_keys[alias])
            m = tables[alias].get(key, 0)
            if m == 0:
                return
            product *= m
        if depth == len(bound_vars):
            total += product
            return
        v = bound_vars[depth]
        for val in domains[v]:
            assignment[v] = val
            recurse(depth + 1, product)
        del assignment[v]

    recurse(0, 1)
    return total


def lp_max_prefix(seqs, b, m, cell_budget: int = DEFAULT_LP_CELLS) -> Fraction:
    """Exact optimum of the prefix-box mass LP (budget-gated)."""
    cells = 1
    for mi in m:
        cells *= max(mi, 1)
    if cells > cell_budget:
        raise BudgetError(f"{cells} cells exceed budget {cell_budget}")
    return lp_prefix_value(seqs, b, m)


def _generate_one(seqs, b, rng: random.Random) -> BagInstance:
    caps = []
    for s in seqs:
        if not s.is_integral():
            raise FeasibilityError("instance generation needs integral degree sequences")
        caps.append([int(d) for d in s.padded()])
    total_mass = min((sum(c) for c in caps), default=0)
    if total_mass == 0:
        return BagInstance(arity=len(seqs), tuples={})
    if not is_infinite(b) and b < 1:
        raise FeasibilityError(f"cap {b} below 1 with nonzero mass")
    b_int = None if is_infinite(b) else int(b)
    available = [[r for r, c in enumerate(cap) if c > 0] for cap in caps]
    tuples = {}
    placed = 0
    misses = 0
    while placed < total_mass and misses < 4 * total_mass + 16:
        if any(not av for av in available):
            break
        coord = tuple(rng.choice(av) for av in available)
        key = tuple(c + 1 for c in coord)  # 1-based values
        allowed = min(caps[p][coord[p]] for p in range(len(seqs)))
        if b_int is not None:
            allowed = min(allowed, b_int - tuples.get(key, 0))
        if allowed < 1:
            misses += 1
            continue
        m = rng.randint(1, allowed)
        tuples[key] = tuples.get(key, 0) + m
        placed += m
        for p in range(len(seqs)):
            caps[p][coord[p]] -= m
            if caps[p][coord[p]] == 0:
                available[p].remove(coord[p])
    return BagInstance(arity=len(seqs), tuples=tuples)


def generate_consistent_instance(per_relation: dict, seed: int) -> dict:
    """Random bag instances whose statistics are dominated by the inputs.

    `per_relation` maps a name to (degree sequences, max multiplicity).
    Greedy mass placement with randomized value matching; deterministic for a
    given seed.  Extracted degree sequences are pointwise <= the inputs and
    every tuple multiplicity is <= the cap.
    """
    out = {}
    for name in sorted(per_relation):
        seqs, b = per_relation[name]
        rng = random.Random(f"{seed}:{name}")
        out[name] = _generate_one(list(seqs), b, rng)
    return out
