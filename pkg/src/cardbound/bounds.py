"""Cardinality and max-degree bounds: AGM (integral covers) and the
polymatroid bound's closed form for tree-shaped queries.

PB prices a connected subquery at min over roots of
N_root * prod(max degree of each non-root atom on its parent variable),
then minimizes the product over covers; AGM is the special case where every
max degree is replaced by the relation cardinality, which collapses the
per-part price to the plain product of cardinalities.
"""

from __future__ import annotations

from fractions import Fraction

from .catalog import StatsCatalog, atom_max_degree
from .covers import MAX_SUBSET_ATOMS, min_cover_cost
from .query import QuerySpec, orient
from .result import AGM, PB, BoundValue


def pb_rooted(q: QuerySpec, catalog: StatsCatalog, root) -> BoundValue:
    """Chain product for one root: cardinality at the root, max degrees below."""
    tree = orient(q, root)
    rel = catalog.relation(q.atom(tree.root).relation)
    value = rel.cardinality
    for atom in q.atoms:
        if atom.alias == tree.root:
            continue
        value *= atom_max_degree(catalog, atom, tree.parent_var[atom.alias])
    return BoundValue(value, PB, root_used=tree.root)


def pb(q: QuerySpec, catalog: StatsCatalog, max_atoms: int = MAX_SUBSET_ATOMS) -> BoundValue:
    def component_cost(comp):
        sub = q.subquery(comp)
        return min(pb_rooted(sub, catalog, r).value for r in sorted(comp))

    value = min_cover_cost(q, component_cost, max_atoms=max_atoms)
    return BoundValue(value, PB)


def agm_acyclic(q: QuerySpec, catalog: StatsCatalog, max_atoms: int = MAX_SUBSET_ATOMS) -> BoundValue:
    """AGM bound via integral covers (sufficient for Berge-acyclic queries)."""
    def component_cost(comp):
        acc = Fraction(1)
        for alias in comp:
            acc *= catalog.relation(q.atom(alias).relation).cardinality
        return acc

    value = min_cover_cost(q, component_cost, max_atoms=max_atoms)
    return BoundValue(value, AGM)
