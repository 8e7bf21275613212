"""Exact Degree Sequence Bound: bottom-up tree contraction over worst-case tensors.

Every atom is replaced by its worst-case tensor, then the join size of the
resulting (possibly unconventional) instance is computed by contracting the
incidence tree bottom-up: leaf variables carry all-ones vectors, each atom
contracts its tensor against its child-variable vectors, and the root
contraction yields the bound.  Exact arithmetic makes the result identical
for every root choice.
"""

from __future__ import annotations

from fractions import Fraction

from .catalog import StatsCatalog, atom_sequences
from .degrees import pad_to
from .errors import CardboundError, NotCyclic, SortError, UnsupportedMaterialization
from .oracle import BagInstance
from .query import QuerySpec, check_berge_acyclic, orient, spanning_trees
from .rational import INF, is_infinite
from .result import DSB, BoundValue
from .tensor import contract, contract_all
from .worst_case import build_finite_b_1d, build_finite_b_2d, build_greedy_infinite_b


def variable_extents(q: QuerySpec, catalog: StatsCatalog) -> dict:
    """Common domain size per variable: max sequence length over its atoms."""
    extents = {}
    for atom in q.atoms:
        seqs = atom_sequences(catalog, atom)
        for var, seq in zip(atom.vars, seqs):
            extents[var] = max(extents.get(var, 0), seq.length)
    return extents


def atom_tensor(catalog: StatsCatalog, atom, extents, b_override=None):
    """Worst-case tensor for one atom, sequences padded to shared extents.

    Returns (tensor, b_effective).  Finite caps are honored exactly for
    arity 1 and 2; for arity >= 3 the construction falls back to the
    unbounded tensor, which stays a sound upper bound.
    """
    rel = catalog.relation(atom.relation)
    b = rel.max_multiplicity if b_override is None else b_override
    seqs = [pad_to(s, extents[v]) for v, s in zip(atom.vars, atom_sequences(catalog, atom))]
    if is_infinite(b):
        return build_greedy_infinite_b(seqs), INF
    if len(seqs) == 1:
        return build_finite_b_1d(seqs[0], b), b
    if len(seqs) == 2:
        return build_finite_b_2d(seqs[0], seqs[1], b), b
    return build_greedy_infinite_b(seqs), INF


def _assert_sorted(vec, context):
    prev = None
    for v in vec:
        if v < 0 or (prev is not None and v > prev):
            raise SortError(f"{context}: contraction result not sorted non-negative: {vec}")
        prev = v


def _dsb_tree(q: QuerySpec, catalog: StatsCatalog, root, b_overrides) -> BoundValue:
    tree = orient(q, root)
    extents = variable_extents(q, catalog)
    tensors = {}
    b_eff = {}
    for atom in q.atoms:
        tensors[atom.alias], b_eff[atom.alias] = atom_tensor(
            catalog, atom, extents, (b_overrides or {}).get(atom.alias))
    a_vec = {}
    w_vec = {}
    value = None
    for kind, name in tree.bottom_up:
        if kind == "var":
            children = tree.child_atoms[name]
            if children:
                acc = list(w_vec[children[0]])
                for child in children[1:]:
                    acc = [x * y for x, y in zip(acc, w_vec[child])]
                a_vec[name] = tuple(acc)
            else:
                a_vec[name] = (Fraction(1),) * extents[name]
        else:
            atom = q.atom(name)
            wct = tensors[name]
            if name == tree.root:
                vectors = {axis: a_vec[v] for axis, v in enumerate(atom.vars)}
                value = contract_all(wct.tensor, vectors)
            else:
                parent = tree.parent_var[name]
                vectors = {axis: a_vec[v] for axis, v in enumerate(atom.vars) if v != parent}
                w = contract(wct.tensor, vectors)
                _assert_sorted(w, f"atom {name}")
                w_vec[name] = w
    return BoundValue(value, DSB, root_used=tree.root, b_effective=b_eff)


def dsb(q: QuerySpec, catalog: StatsCatalog, root=None, b_overrides=None) -> BoundValue:
    """Degree Sequence Bound of a tree or forest query.

    Forests are bounded by the product over connected components, which is
    exact for Cartesian products.  The result does not depend on the root;
    `root` only selects the evaluation order (and must lie in a tree query).
    """
    cls = check_berge_acyclic(q)
    if cls.is_cyclic:
        raise CardboundError("query is cyclic; use dsb_cyclic")
    if cls.is_tree:
        return _dsb_tree(q, catalog, root or min(q.aliases()), b_overrides)
    if root is not None:
        raise CardboundError("root selection is only meaningful for tree queries")
    total = Fraction(1)
    b_eff = {}
    for comp in cls.components:
        sub = q.subquery(comp)
        part = _dsb_tree(sub, catalog, min(comp), b_overrides)
        total *= part.value
        b_eff.update(part.b_effective)
    return BoundValue(total, DSB, root_used=None, b_effective=b_eff)


def dsb_cyclic(q: QuerySpec, catalog: StatsCatalog) -> BoundValue:
    """Minimum bound over spanning-tree relaxations of a cyclic query.

    Atoms that lose a variable occurrence keep their per-attribute sequences
    (projection preserves them under bag semantics) but their multiplicity
    cap is lifted to infinity, since projection can merge tuples.
    """
    cls = check_berge_acyclic(q)
    if not cls.is_cyclic:
        raise NotCyclic(f"query is {cls.kind}")
    best = None
    for tree_q in spanning_trees(q):
        overrides = {}
        for orig, reduced in zip(q.atoms, tree_q.atoms):
            if len(reduced.vars) < len(orig.vars):
                overrides[orig.alias] = INF
        cand = dsb(tree_q, catalog, b_overrides=overrides)
        if best is None or cand.value < best.value:
            best = BoundValue(cand.value, DSB, root_used=cand.root_used,
                              b_effective=cand.b_effective,
                              notes=("spanning-tree relaxation",))
    return best


def materialize_worst_case(q: QuerySpec, catalog: StatsCatalog) -> dict:
    """Emit the worst-case database instance as bag relations, one per atom.

    Only valid when every atom's multiplicity cap is infinite (the tensor is
    then non-negative) and the degree sequences are integral.  Tuple values
    are the 1-based rank coordinates, so the matching principle aligns the
    heavy ranks of shared variables across atoms; the brute-force join of the
    result equals the bound.
    """
    cls = check_berge_acyclic(q)
    if cls.is_cyclic:
        raise CardboundError("query is cyclic; materialization needs a tree or forest")
    extents = variable_extents(q, catalog)
    instances = {}
    for atom in q.atoms:
        rel = catalog.relation(atom.relation)
        if not is_infinite(rel.max_multiplicity):
            raise UnsupportedMaterialization(
                f"relation {rel.name} has finite max multiplicity; its worst-case "
                "tensor may violate the cap or go negative")
        seqs = [pad_to(s, extents[v]) for v, s in zip(atom.vars, atom_sequences(catalog, atom))]
        for s in seqs:
            if not s.is_integral():
                raise CardboundError(f"relation {rel.name}: materialization needs integral degrees")
        wct = build_greedy_infinite_b(seqs)
        # lay tuples out by catalog attribute position; wildcard dimensions
        # are private and aggregate into the bag multiplicity
        bound = sorted(
            (pos, axis) for axis, pos in enumerate(atom.positions) if pos is not None)
        tuples = {}
        for coord, mult in wct.tensor.entries.items():
            assert mult > 0 and mult.denominator == 1
            key = tuple(coord[axis] for _, axis in bound)
            tuples[key] = tuples.get(key, 0) + int(mult)
        instances[atom.alias] = BagInstance(arity=len(bound), tuples=tuples)
    return instances
