"""Shared test utilities: catalogs, random query/statistics generators, and
small independent oracles (dense prefix sums, cover enumeration)."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from cardbound.catalog import AttributeStats, RelationStats, StatsCatalog
from cardbound.degrees import DegreeSequence, cdf
from cardbound.oracle import BagInstance
from cardbound.query import Atom, QuerySpec, connected_components, is_cover
from cardbound.rational import INF
from cardbound.tensor import SparseTensor
from cardbound.worst_case import value_at_infinite_b


def make_catalog(spec):
    """spec: {name: (cardinality, b, [(attr, degrees), ...])}"""
    rels = []
    for name, (card, b, attrs) in spec.items():
        rels.append(RelationStats(
            name, Fraction(card), b,
            tuple(AttributeStats(a, degrees=DegreeSequence.of(d)) for a, d in attrs)))
    return StatsCatalog(rels)


def example1_catalog(b_s=INF):
    return make_catalog({
        "R": (7, INF, [("X", [3, 2, 2])]),
        "S": (6, b_s, [("X", [5, 1]), ("Y", [3, 2, 1])]),
        "T": (5, INF, [("Y", [2, 1, 1, 1])]),
    })


def random_partition(rng: random.Random, total: int, max_parts: int):
    """Random composition of `total` into at most max_parts positive parts,
    sorted descending."""
    if total == 0:
        return []
    k = rng.randint(1, min(max_parts, total))
    cuts = sorted(rng.sample(range(1, total), k - 1)) if k > 1 else []
    bounds = [0] + cuts + [total]
    parts = [b - a for a, b in zip(bounds, bounds[1:])]
    return sorted(parts, reverse=True)


def random_tree_query(rng: random.Random, max_atoms=4, max_arity=3,
                      ensure_private=True):
    """Random query whose incidence graph is a tree.

    Each atom after the first connects through exactly one existing variable;
    with ensure_private, every atom keeps one fresh variable that is never
    shared, so covers must retain every atom (honest bag modeling).
    """
    m = rng.randint(1, max_atoms)
    counter = itertools.count(1)

    def fresh():
        return f"V{next(counter)}"

    atoms = []
    shareable = []
    for i in range(m):
        if i == 0:
            lo = 2 if (ensure_private and m > 1) else 1
            arity = rng.randint(lo, max(lo, max_arity))
            vars_ = [fresh() for _ in range(arity)]
        else:
            share = rng.choice(shareable)
            extra = rng.randint(1, max_arity - 1) if ensure_private else rng.randint(0, max_arity - 1)
            vars_ = [share] + [fresh() for _ in range(extra)]
            rng.shuffle(vars_)
        reserve = rng.choice([v for v in vars_ if v not in shareable]) if ensure_private else None
        for v in vars_:
            if v not in shareable and v != reserve:
                shareable.append(v)
        atoms.append(Atom(f"A{i+1}", f"Rel{i+1}", tuple(vars_)))
    return QuerySpec(tuple(atoms))


def random_acyclic_query(rng: random.Random, max_atoms=4, max_arity=3,
                         forest_prob=0.15):
    """Tree query, or occasionally a two-component forest (both honest)."""
    if rng.random() < forest_prob and max_atoms >= 2:
        left = random_tree_query(rng, max_atoms=max_atoms - 1, max_arity=max_arity)
        right = random_tree_query(rng, max_atoms=max_atoms - len(left.atoms),
                                  max_arity=max_arity)
        atoms = list(left.atoms)
        for i, a in enumerate(right.atoms):
            vars_ = tuple(f"W{i}_{v}" for v in a.vars)
            atoms.append(Atom(f"B{i+1}", f"RelB{i+1}", vars_, a.positions))
        return QuerySpec(tuple(atoms))
    return random_tree_query(rng, max_atoms=max_atoms, max_arity=max_arity)


def random_catalog_for(q: QuerySpec, rng: random.Random, max_domain=6,
                       max_cardinality=10, b_choices=(INF,)):
    """Catalog with consistent random stats: all attributes of one relation
    share the relation's total."""
    spec = {}
    for atom in q.atoms:
        n = rng.randint(0, max_cardinality)
        attrs = [(f"c{i}", random_partition(rng, n, max_domain))
                 for i in range(len(atom.vars))]
        spec[atom.relation] = (n, rng.choice(list(b_choices)), attrs)
    return make_catalog(spec)


def instance_tensor(inst: BagInstance, dims):
    entries = {t: Fraction(m) for t, m in inst.tuples.items() if m}
    return SparseTensor(tuple(dims), entries)


def dense_prefix_check(wct, seqs):
    """Every prefix-box sum of the tensor equals the min-of-CDFs value."""
    cdfs = [cdf(s) for s in seqs]
    dims = wct.tensor.dims
    for box in itertools.product(*(range(n + 1) for n in dims)):
        expect = value_at_infinite_b(cdfs, box)
        if wct.tensor.prefix_sum(box) != expect:
            return False, box, wct.tensor.prefix_sum(box), expect
    return True, None, None, None


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for i, part in enumerate(smaller):
            yield smaller[:i] + [[first] + part] + smaller[i + 1:]
        yield [[first]] + smaller


def brute_force_cover_min(q: QuerySpec, component_cost):
    """Exhaustive minimum over covering atom subsets and their partitions
    into connected parts; the independent check for the subset DP."""
    aliases = list(q.aliases())
    m = len(aliases)
    best = None
    for mask in range(1, 1 << m):
        subset = [aliases[i] for i in range(m) if mask >> i & 1]
        if not is_cover(q, subset):
            continue
        for partition in set_partitions(subset):
            ok = True
            cost = Fraction(1)
            for part in partition:
                comps = connected_components(q, part)
                if len(comps) != 1:
                    ok = False
                    break
                cost *= component_cost(frozenset(part))
            if ok and (best is None or cost < best):
                best = cost
    return best


def staircase_samples(rng: random.Random, sc, count=20):
    """Random rational sample points within a staircase's domain."""
    if sc.end <= 0:
        return []
    out = []
    for _ in range(count):
        num = rng.randint(1, int(sc.end * 12))
        x = Fraction(num, 12)
        if 0 < x <= sc.end:
            out.append(x)
    return out
