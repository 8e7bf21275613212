"""Functional Degree Sequence Bound: the exact bound's staircase counterpart.

The bottom-up contraction is replayed on staircase representations.  An
atom's outgoing function is

    w(x) = f1(x) * prod_p  a_p( max(1, Fp^inverse( F1(x - 1) )) )

where f1 is the staircase toward the parent, Fp are the piecewise-linear
integrals of the atom's staircases and a_p are the child-variable functions.
Because the a_p are piecewise constant, each factor is a staircase whose
separators are the points where the inner argument crosses an a_p separator;
those are found by mass comparison (arg <= u iff F1(x-1) <= Fp(u)) without
materializing any inverse.  The root step sums a staircase over the integer
ranks 1..N_root segment by segment.

Everything here assumes unbounded tuple multiplicity; finite caps either
raise or, on request, are lifted to infinity (which keeps the bound sound,
only looser).
"""

from __future__ import annotations

from fractions import Fraction

from .catalog import StatsCatalog, atom_staircases
from .covers import MAX_SUBSET_ATOMS, min_cover_cost
from .errors import UnsupportedForFdsb
from .query import QuerySpec, orient
from .rational import INF, is_infinite
from .result import FDSB, BoundValue
from .staircase import PwlCdf, Staircase, integer_sum, staircase_multiply


def _clean_segments(pairs, domain_end):
    """Threshold list -> staircase on (0, domain_end], dropping empty pieces."""
    cleaned = []
    prev = Fraction(0)
    for end, level in pairs:
        end = min(end, domain_end)
        if end > prev:
            cleaned.append((end, level))
            prev = end
    if prev < domain_end:
        cleaned.append((domain_end, Fraction(0)))
    return Staircase.make(cleaned)


def _compose_child(a_fn: Staircase, F1: PwlCdf, Fp: PwlCdf, domain_end) -> Staircase:
    """Staircase x -> a_fn(max(1, Fp^inverse(F1(x - 1)))) on (0, domain_end].

    With the leftmost-preimage inverse, the argument stays <= u exactly while
    F1(x-1) <= Fp(u), so each a_fn separator u maps to the threshold
    1 + (rightmost y with F1(y) <= Fp(u)).
    """
    if domain_end <= 0:
        return Staircase(())
    pairs = []
    for u, level in a_fn.segments:
        if u < 1:
            continue
        w = Fp.value_at(u)
        pairs.append((1 + F1.rightmost_arg_at_or_below(w), level))
    return _clean_segments(pairs, domain_end)


def _root_factor(a_fn: Staircase, Fp: PwlCdf, n_root) -> Staircase:
    """Staircase i -> a_fn(max(1, Fp^inverse(i - 1))) on (0, n_root]."""
    if n_root <= 0:
        return Staircase(())
    pairs = []
    for u, level in a_fn.segments:
        if u < 1:
            continue
        pairs.append((1 + Fp.value_at(u), level))
    return _clean_segments(pairs, n_root)


def _atom_caps(q: QuerySpec, catalog: StatsCatalog, lift_finite_b: bool):
    b_eff = {}
    notes = []
    for atom in q.atoms:
        b = catalog.relation(atom.relation).max_multiplicity
        if not is_infinite(b):
            if not lift_finite_b:
                raise UnsupportedForFdsb(
                    f"relation {atom.relation} has finite max multiplicity {b}; "
                    "the functional bound needs it unbounded")
            notes.append(f"cap on {atom.alias} lifted to infinity")
        b_eff[atom.alias] = INF
    return b_eff, tuple(notes)


def fdsb_rooted(q: QuerySpec, catalog: StatsCatalog, root,
                lift_finite_b: bool = False) -> BoundValue:
    """Functional bound for one root, bottom-up over the incidence tree."""
    b_eff, notes = _atom_caps(q, catalog, lift_finite_b)
    tree = orient(q, root)
    stairs = {a.alias: dict(zip(a.vars, atom_staircases(catalog, a))) for a in q.atoms}
    extents = {}
    for a in q.atoms:
        for v in a.vars:
            extents[v] = max(extents.get(v, Fraction(0)), stairs[a.alias][v].end)
    a_fn = {}
    w_fn = {}
    value = None
    for kind, name in tree.bottom_up:
        if kind == "var":
            children = tree.child_atoms[name]
            if children:
                a_fn[name] = staircase_multiply([w_fn[c] for c in children])
            else:
                e = extents[name]
                a_fn[name] = Staircase.constant(1, e) if e > 0 else Staircase(())
        elif name != tree.root:
            atom = q.atom(name)
            parent = tree.parent_var[name]
            f1 = stairs[name][parent]
            F1 = PwlCdf.from_staircase(f1)
            factors = [f1]
            budget = f1.num_segments
            for v in atom.vars:
                if v == parent:
                    continue
                Fp = PwlCdf.from_staircase(stairs[name][v])
                factors.append(_compose_child(a_fn[v], F1, Fp, f1.end))
                budget += stairs[name][v].num_segments + a_fn[v].num_segments
            w = staircase_multiply(factors)
            assert w.num_segments <= max(budget, 1), "separator budget exceeded"
            w_fn[name] = w
        else:
            rel = catalog.relation(q.atom(name).relation)
            n_root = rel.cardinality
            factors = []
            for v in q.atom(name).vars:
                Fp = PwlCdf.from_staircase(stairs[name][v])
                factors.append(_root_factor(a_fn[v], Fp, n_root))
            g = staircase_multiply(factors) if factors else Staircase(())
            value = integer_sum(g, n_root)
    return BoundValue(value, FDSB, root_used=tree.root, b_effective=b_eff, notes=notes)


def fdsb(q: QuerySpec, catalog: StatsCatalog, max_atoms: int = MAX_SUBSET_ATOMS,
         lift_finite_b: bool = False) -> BoundValue:
    """Cover-minimized functional bound (subset dynamic program)."""
    b_eff, notes = _atom_caps(q, catalog, lift_finite_b)
    memo = {}

    def component_cost(comp):
        if comp not in memo:
            sub = q.subquery(comp)
            memo[comp] = min(
                fdsb_rooted(sub, catalog, r, lift_finite_b=lift_finite_b).value
                for r in sorted(comp))
        return memo[comp]

    value = min_cover_cost(q, component_cost, max_atoms=max_atoms)
    return BoundValue(value, FDSB, b_effective=b_eff, notes=notes)
