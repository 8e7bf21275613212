"""Join query text, incidence graphs and tree machinery.

Grammar (one query per file, whitespace insignificant):

    Q = alias1:Rel1(V1,V2,...), alias2:Rel2(...), ...

The ``alias:`` prefix is optional when relation names are unique.  ``_``
denotes a fresh private variable; it does not consume a catalog attribute
position and is given all-ones statistics downstream.  Identifiers are
``[A-Za-z][A-Za-z0-9_]*``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .errors import (
    CardboundError,
    DuplicateAlias,
    DuplicateVariableInAtom,
    NotCyclic,
    QuerySyntaxError,
)

TREE = "tree"
FOREST = "forest"
CYCLIC = "cyclic"


@dataclass(frozen=True)
class Atom:
    """One query atom: alias, catalog relation key and ordered variables.

    positions[i] is the catalog attribute index bound to vars[i]; None marks
    a private variable born from a ``_`` wildcard (all-ones statistics).
    """

    alias: str
    relation: str
    vars: tuple[str, ...]
    positions: tuple = None

    def __post_init__(self):
        if not self.vars:
            raise CardboundError(f"atom {self.alias} has no variables")
        if len(set(self.vars)) != len(self.vars):
            raise CardboundError(f"atom {self.alias} repeats a variable")
        if self.positions is None:
            object.__setattr__(self, "positions", tuple(range(len(self.vars))))
        if len(self.positions) != len(self.vars):
            raise CardboundError(f"atom {self.alias}: positions/vars arity mismatch")

    def position_of(self, var: str):
        return self.positions[self.vars.index(var)]


@dataclass(frozen=True)
class QuerySpec:
    atoms: tuple[Atom, ...]
    name: str = "Q"

    def __post_init__(self):
        seen = set()
        for a in self.atoms:
            if a.alias in seen:
                raise CardboundError(f"duplicate atom alias {a.alias}")
            seen.add(a.alias)

    @property
    def variables(self) -> tuple[str, ...]:
        out = []
        for a in self.atoms:
            for v in a.vars:
                if v not in out:
                    out.append(v)
        return tuple(out)

    def atom(self, alias: str) -> Atom:
        for a in self.atoms:
            if a.alias == alias:
                return a
        raise CardboundError(f"no atom with alias {alias}")

    def aliases(self) -> tuple[str, ...]:
        return tuple(a.alias for a in self.atoms)

    def atoms_of_var(self, var: str) -> tuple[str, ...]:
        return tuple(a.alias for a in self.atoms if var in a.vars)

    def subquery(self, aliases) -> "QuerySpec":
        keep = set(aliases)
        return QuerySpec(tuple(a for a in self.atoms if a.alias in keep), name=self.name)

    def edges(self):
        """Incidence edges as (alias, variable) pairs, in atom order."""
        return [(a.alias, v) for a in self.atoms for v in a.vars]


_TOKEN = re.compile(r"[A-Za-z][A-Za-z0-9_]*|[=:(),_]|\S")


def _tokenize(text):
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for m in _TOKEN.finditer(line):
            tokens.append((m.group(0), lineno, m.start() + 1))
    return tokens


def parse_query(text: str) -> QuerySpec:
    tokens = _tokenize(text)
    if not tokens:
        raise QuerySyntaxError("empty query", 1, 1)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def loc():
        if pos < len(tokens):
            return tokens[pos][1], tokens[pos][2]
        return tokens[-1][1], tokens[-1][2] + len(tokens[-1][0])

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            line, col = loc()
            raise QuerySyntaxError(f"unexpected end of input, expected {expected}", line, col)
        tok, line, col = tokens[pos]
        if expected is not None and tok != expected:
            raise QuerySyntaxError(f"expected {expected!r}, found {tok!r}", line, col)
        pos += 1
        return tok, line, col

    def is_ident(tok):
        return tok is not None and re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", tok)

    name = "Q"
    if len(tokens) >= 2 and is_ident(tokens[0][0]) and tokens[1][0] == "=":
        name = take()[0]
        take("=")

    fresh = itertools.count(1)
    atoms = []
    aliases = set()
    while True:
        tok, line, col = take()
        if not is_ident(tok):
            raise QuerySyntaxError(f"expected relation name, found {tok!r}", line, col)
        first = tok
        if peek() == ":":
            take(":")
            rel, line2, col2 = take()
            if not is_ident(rel):
                raise QuerySyntaxError(f"expected relation name, found {rel!r}", line2, col2)
            alias, relation = first, rel
        else:
            alias, relation = first, first
        if alias in aliases:
            raise DuplicateAlias(f"duplicate alias {alias!r}", line, col)
        aliases.add(alias)
        take("(")
        vars_ = []
        positions = []
        next_pos = 0
        while True:
            vtok, vline, vcol = take()
            if vtok == "_":
                vars_.append(f"_{next(fresh)}")
                positions.append(None)
            elif is_ident(vtok):
                if vtok in vars_:
                    raise DuplicateVariableInAtom(
                        f"variable {vtok!r} repeated in atom {alias!r}", vline, vcol)
                vars_.append(vtok)
                positions.append(next_pos)
                next_pos += 1
            else:
                raise QuerySyntaxError(f"expected variable, found {vtok!r}", vline, vcol)
            sep, sline, scol = take()
            if sep == ")":
                break
            if sep != ",":
                raise QuerySyntaxError(f"expected ',' or ')', found {sep!r}", sline, scol)
        atoms.append(Atom(alias, relation, tuple(vars_), tuple(positions)))
        if peek() is None:
            break
        take(",")
    return QuerySpec(tuple(atoms), name=name)


@dataclass(frozen=True)
class Classification:
    kind: str
    components: tuple
    witness: tuple = None

    @property
    def is_tree(self):
        return self.kind == TREE

    @property
    def is_forest(self):
        return self.kind == FOREST

    @property
    def is_cyclic(self):
        return self.kind == CYCLIC


def _adjacency(q: QuerySpec):
    """Bipartite adjacency over nodes ('atom', alias) / ('var', name)."""
    adj = {}
    for a in q.atoms:
        adj.setdefault(("atom", a.alias), [])
        for v in a.vars:
            adj.setdefault(("var", v), [])
            adj[("atom", a.alias)].append(("var", v))
            adj[("var", v)].append(("atom", a.alias))
    for node in adj:
        adj[node].sort()
    return adj


def check_berge_acyclic(q: QuerySpec) -> Classification:
    """Classify the incidence graph as tree, forest or cyclic.

    On a cyclic query, returns one witness cycle as an alternating
    atom/variable alias sequence closing on its first atom.
    """
    adj = _adjacency(q)
    seen = {}
    parents = {}
    components = []
    cycle = None
    for start in sorted(adj):
        if start in seen:
            continue
        comp = set()
        stack = [(start, None)]
        seen[start] = True
        parents[start] = None
        while stack:
            node, parent = stack.pop()
            comp.add(node)
            for nb in adj[node]:
                if nb == parent:
                    continue
                if nb in seen:
                    if cycle is None:
                        cycle = _recover_cycle(parents, node, nb)
                    continue
                seen[nb] = True
                parents[nb] = node
                stack.append((nb, node))
        components.append(frozenset(alias for kind, alias in comp if kind == "atom"))
    if cycle is not None:
        return Classification(CYCLIC, tuple(components), witness=cycle)
    if len(components) > 1:
        return Classification(FOREST, tuple(components))
    return Classification(TREE, tuple(components))


def _recover_cycle(parents, u, v):
    """Close the cycle formed by tree paths to u and v plus the edge (u,v)."""
    path_u = []
    x = u
    while x is not None:
        path_u.append(x)
        x = parents[x]
    anc = set(path_u)
    path_v = []
    x = v
    while x not in anc:
        path_v.append(x)
        x = parents[x]
    meet = x
    cycle_nodes = path_u[: path_u.index(meet) + 1] + list(reversed(path_v))
    # rotate to start at an atom, then flatten to alias names and close.
    start = next(i for i, n in enumerate(cycle_nodes) if n[0] == "atom")
    rotated = cycle_nodes[start:] + cycle_nodes[:start]
    names = tuple(n[1] for n in rotated)
    return names + (names[0],)


def is_berge_cycle_witness(q: QuerySpec, witness) -> bool:
    """Validate an alternating atom/variable cycle against the definition:
    distinct atoms, distinct variables, length >= 2 atoms, consecutive
    incidence, and closure on the first atom."""
    if len(witness) < 5 or witness[0] != witness[-1]:
        return False
    body = witness[:-1]
    atoms = body[0::2]
    vars_ = body[1::2]
    if len(atoms) != len(vars_) or len(atoms) < 2:
        return False
    if len(set(atoms)) != len(atoms) or len(set(vars_)) != len(vars_):
        return False
    try:
        atom_vars = {a: set(q.atom(a).vars) for a in atoms}
    except CardboundError:
        return False
    for i, v in enumerate(vars_):
        if v not in atom_vars[atoms[i]]:
            return False
        nxt = atoms[(i + 1) % len(atoms)]
        if v not in atom_vars[nxt]:
            return False
    return True


@dataclass(frozen=True)
class IncidenceTree:
    """Rooted orientation of a tree-shaped incidence graph."""

    query: QuerySpec
    root: str
    parent_var: dict = field(default_factory=dict)  # alias -> variable toward root
    child_vars: dict = field(default_factory=dict)  # alias -> variables below it
    child_atoms: dict = field(default_factory=dict)  # variable -> aliases below it
    bottom_up: tuple = ()  # ('var'|'atom', name) with children first


def orient(q: QuerySpec, root) -> IncidenceTree:
    """Orient the incidence tree away from the root atom.

    Traversal uses name-sorted adjacency, so the result does not depend on
    the order atoms were written in.
    """
    root_alias = root.alias if isinstance(root, Atom) else root
    q.atom(root_alias)
    cls = check_berge_acyclic(q)
    if not cls.is_tree:
        raise CardboundError(f"query is {cls.kind}, not a tree")
    adj = _adjacency(q)
    root_node = ("atom", root_alias)
    parent = {root_node: None}
    order = [root_node]
    i = 0
    while i < len(order):
        node = order[i]
        i += 1
        for nb in adj[node]:
            if nb not in parent:
                parent[nb] = node
                order.append(nb)
    parent_var = {}
    child_vars = {a.alias: [] for a in q.atoms}
    child_atoms = {v: [] for v in q.variables}
    for node, par in parent.items():
        if par is None:
            continue
        kind, name = node
        if kind == "atom":
            parent_var[name] = par[1]
            child_atoms[par[1]].append(name)
        else:
            child_vars[par[1]].append(name)
    bottom_up = tuple(order[::-1])
    return IncidenceTree(
        query=q,
        root=root_alias,
        parent_var=parent_var,
        child_vars={k: tuple(v) for k, v in child_vars.items()},
        child_atoms={k: tuple(v) for k, v in child_atoms.items()},
        bottom_up=bottom_up,
    )


def connected_components(q: QuerySpec, subset) -> list[frozenset]:
    """Partition an atom subset into maximal connected pieces."""
    subset = [a for a in q.aliases() if a in set(subset)]
    parent = {a: a for a in subset}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_var = {}
    for alias in subset:
        for v in q.atom(alias).vars:
            by_var.setdefault(v, []).append(alias)
    for members in by_var.values():
        for other in members[1:]:
            ra, rb = find(members[0]), find(other)
            if ra != rb:
                parent[ra] = rb
    groups = {}
    for a in subset:
        groups.setdefault(find(a), set()).add(a)
    return sorted((frozenset(g) for g in groups.values()), key=lambda s: sorted(s))


def is_cover(q: QuerySpec, subset) -> bool:
    covered = set()
    keep = set(subset)
    for a in q.atoms:
        if a.alias in keep:
            covered.update(a.vars)
    return covered >= set(q.variables)


def spanning_trees(q: QuerySpec):
    """Yield relaxations of a cyclic query whose incidence graphs are
    spanning trees, obtained by dropping variable occurrences from atoms."""
    cls = check_berge_acyclic(q)
    if not cls.is_cyclic:
        raise NotCyclic(f"query is {cls.kind}; spanning-tree relaxation needs a cycle")
    edges = q.edges()
    nodes = {("atom", a.alias) for a in q.atoms} | {("var", v) for v in q.variables}
    want = len(nodes) - 1
    for keep in itertools.combinations(range(len(edges)), want):
        kept = [edges[i] for i in keep]
        parent = {n: n for n in nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for alias, v in kept:
            ra, rb = find(("atom", alias)), find(("var", v))
            if ra == rb:
                acyclic = False
                break
            parent[ra] = rb
        if not acyclic:
            continue
        roots = {find(n) for n in nodes}
        if len(roots) != 1:
            continue
        kept_set = set(kept)
        atoms = []
        for a in q.atoms:
            pairs = [(v, p) for v, p in zip(a.vars, a.positions) if (a.alias, v) in kept_set]
            atoms.append(Atom(a.alias, a.relation, tuple(v for v, _ in pairs),
                              tuple(p for _, p in pairs)))
        yield QuerySpec(tuple(atoms), name=q.name)
