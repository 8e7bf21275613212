"""Relation statistics: extraction from tabular data and exact JSON persistence.

Catalog file schema (all numbers encoded as exact strings, "7" or "3/4";
max_multiplicity also accepts "inf"):

    { "relations": [ { "name": ...,
                       "cardinality": "6",
                       "max_multiplicity": "3",
                       "attributes": [ { "name": "X", "degrees": ["5","1"] },
                                       { "name": "Y", "staircase": [["1","3"],["3","1"]] } ] } ] }

An attribute carries a full degree sequence, a staircase, or both.  Staircase-
only attributes serve the functional bound; the exact bound needs the full
sequence and refuses otherwise.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .degrees import DegreeSequence
from .errors import CatalogError, CatalogFormatError, MissingFullSequence, ParseError
from .rational import as_rational, format_exact, parse_multiplicity
from .staircase import Staircase


@dataclass(frozen=True)
class AttributeStats:
    name: str
    degrees: DegreeSequence | None = None
    staircase: Staircase | None = None

    def __post_init__(self):
        if self.degrees is None and self.staircase is None:
            raise CatalogError(f"attribute {self.name}: neither degrees nor staircase")

    def max_degree(self) -> Fraction:
        if self.degrees is not None:
            return self.degrees.max_degree()
        return self.staircase.first_level()

    def exact_staircase(self) -> Staircase:
        if self.staircase is not None:
            return self.staircase
        return Staircase.from_degree_sequence(self.degrees)


@dataclass(frozen=True)
class RelationStats:
    name: str
    cardinality: Fraction
    max_multiplicity: object  # Fraction or INF
    attributes: tuple[AttributeStats, ...]

    @property
    def arity(self) -> int:
        return len(self.attributes)


class StatsCatalog:
    """Per-relation statistics, addressed by relation name."""

    def __init__(self, relations=()):
        self.relations = {}
        for r in relations:
            if r.name in self.relations:
                raise CatalogError(f"duplicate relation {r.name!r}")
            self.relations[r.name] = r

    def add(self, rel: RelationStats):
        self.relations[rel.name] = rel

    def relation(self, name: str) -> RelationStats:
        try:
            return self.relations[name]
        except KeyError:
            raise CatalogError(f"relation {name!r} not in catalog") from None

    def names(self):
        return sorted(self.relations)

    def __eq__(self, other):
        return isinstance(other, StatsCatalog) and self.relations == other.relations


def extract_stats(rows, schema, name: str) -> RelationStats:
    """Degree sequences, bag cardinality and max tuple multiplicity from rows.

    Values are compared as exact strings; the empty string is a regular
    value.  Row order does not matter.
    """
    rows = [tuple(r) for r in rows]
    for i, r in enumerate(rows):
        if len(r) != len(schema):
            raise ParseError(f"row has {len(r)} fields, expected {len(schema)}", i + 2)
    n = len(rows)
    tuple_counts = Counter(rows)
    b = max(tuple_counts.values()) if tuple_counts else 1
    attrs = []
    for col, attr_name in enumerate(schema):
        freq = Counter(r[col] for r in rows)
        degs = sorted(freq.values(), reverse=True)
        attrs.append(AttributeStats(attr_name, degrees=DegreeSequence.of(degs)))
    return RelationStats(name, Fraction(n), Fraction(b), tuple(attrs))


def load_csv(path):
    """RFC-4180 CSV with a header row; returns (schema, rows of strings)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            schema = next(reader)
        except StopIteration:
            raise ParseError("file has no header row", 1) from None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(schema):
                raise ParseError(f"row has {len(row)} fields, expected {len(schema)}", lineno)
            rows.append(tuple(row))
    return schema, rows


def _fmt_loc(*parts):
    return ".".join(str(p) for p in parts)


def _load_rational(value, loc):
    try:
        return as_rational(value)
    except (ValueError, TypeError) as exc:
        raise CatalogFormatError(f"{loc}: {exc}") from None


def save_catalog(catalog: StatsCatalog, path):
    doc = {"relations": []}
    for name in catalog.names():
        rel = catalog.relations[name]
        attrs = []
        for a in rel.attributes:
            entry = {"name": a.name}
            if a.degrees is not None:
                entry["degrees"] = [format_exact(d) for d in a.degrees.degrees]
                if a.degrees.length != len(a.degrees.degrees):
                    entry["length"] = a.degrees.length
            if a.staircase is not None:
                entry["staircase"] = [[format_exact(e), format_exact(l)]
                                      for e, l in a.staircase.segments]
            attrs.append(entry)
        doc["relations"].append({
            "name": rel.name,
            "cardinality": format_exact(rel.cardinality),
            "max_multiplicity": format_exact(rel.max_multiplicity),
            "attributes": attrs,
        })
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_catalog(path) -> StatsCatalog:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "relations" not in doc:
        raise CatalogFormatError("top level must be an object with a 'relations' list")
    catalog = StatsCatalog()
    for ri, rel in enumerate(doc["relations"]):
        rloc = _fmt_loc("relations[%d]" % ri)
        for key in ("name", "cardinality", "max_multiplicity", "attributes"):
            if key not in rel:
                raise CatalogFormatError(f"{rloc}: missing {key!r}")
        card = _load_rational(rel["cardinality"], _fmt_loc(rloc, "cardinality"))
        if card < 0 or card.denominator != 1:
            raise CatalogFormatError(f"{rloc}.cardinality: must be a non-negative integer")
        try:
            b = parse_multiplicity(rel["max_multiplicity"])
        except ValueError as exc:
            raise CatalogFormatError(f"{rloc}.max_multiplicity: {exc}") from None
        attrs = []
        for ai, attr in enumerate(rel["attributes"]):
            aloc = _fmt_loc(rloc, "attributes[%d]" % ai)
            if "name" not in attr:
                raise CatalogFormatError(f"{aloc}: missing 'name'")
            degrees = None
            stair = None
            if "degrees" in attr:
                vals = [_load_rational(v, _fmt_loc(aloc, "degrees[%d]" % i))
                        for i, v in enumerate(attr["degrees"])]
                for i, v in enumerate(vals):
                    if v < 0:
                        raise CatalogFormatError(f"{aloc}.degrees[{i}]: negative degree {v}")
                    if i and v > vals[i - 1]:
                        raise CatalogFormatError(f"{aloc}.degrees[{i}]: not non-increasing")
                length = attr.get("length")
                try:
                    degrees = DegreeSequence.of(vals, length=length)
                except Exception as exc:
                    raise CatalogFormatError(f"{aloc}.degrees: {exc}") from None
                if degrees.total() != card:
                    raise CatalogFormatError(
                        f"{aloc}.degrees: total {degrees.total()} != cardinality {card}")
            if "staircase" in attr:
                try:
                    pairs = [(_load_rational(e, _fmt_loc(aloc, "staircase[%d][0]" % i)),
                              _load_rational(l, _fmt_loc(aloc, "staircase[%d][1]" % i)))
                             for i, (e, l) in enumerate(attr["staircase"])]
                    stair = Staircase.make(pairs)
                except CatalogFormatError:
                    raise
                except Exception as exc:
                    raise CatalogFormatError(f"{aloc}.staircase: {exc}") from None
                if stair.total_mass() < card:
                    raise CatalogFormatError(
                        f"{aloc}.staircase: mass {stair.total_mass()} below cardinality {card}")
            if degrees is None and stair is None:
                raise CatalogFormatError(f"{aloc}: needs 'degrees' or 'staircase'")
            attrs.append(AttributeStats(attr["name"], degrees=degrees, staircase=stair))
        catalog.add(RelationStats(rel["name"], card, b, tuple(attrs)))
    return catalog


# -- resolution of atom statistics against the catalog ----------------------

def atom_sequences(catalog: StatsCatalog, atom):
    """Full degree sequences for an atom's variables, in variable order.

    Private (wildcard-born) variables get the all-ones sequence of length
    N_R.  Raises MissingFullSequence for staircase-only attributes.
    """
    rel = catalog.relation(atom.relation)
    out = []
    for var, pos in zip(atom.vars, atom.positions):
        if pos is None:
            out.append(DegreeSequence.ones(int(rel.cardinality)))
            continue
        if pos >= rel.arity:
            raise CatalogError(
                f"atom {atom.alias}: variable {var} needs attribute #{pos + 1} "
                f"but relation {rel.name} has {rel.arity}")
        a = rel.attributes[pos]
        if a.degrees is None:
            raise MissingFullSequence(
                f"atom {atom.alias}: attribute {a.name} of {rel.name} is staircase-only")
        out.append(a.degrees)
    return out


def atom_staircases(catalog: StatsCatalog, atom):
    """Staircases for an atom's variables (exact ones derived if needed)."""
    rel = catalog.relation(atom.relation)
    out = []
    for var, pos in zip(atom.vars, atom.positions):
        if pos is None:
            n = int(rel.cardinality)
            out.append(Staircase.constant(1, n) if n else Staircase(()))
            continue
        if pos >= rel.arity:
            raise CatalogError(
                f"atom {atom.alias}: variable {var} needs attribute #{pos + 1} "
                f"but relation {rel.name} has {rel.arity}")
        out.append(rel.attributes[pos].exact_staircase())
    return out


def atom_max_degree(catalog: StatsCatalog, atom, var) -> Fraction:
    rel = catalog.relation(atom.relation)
    pos = atom.position_of(var)
    if pos is None:
        return Fraction(1) if rel.cardinality > 0 else Fraction(0)
    if pos >= rel.arity:
        raise CatalogError(
            f"atom {atom.alias}: variable {var} needs attribute #{pos + 1} "
            f"but relation {rel.name} has {rel.arity}")
    return rel.attributes[pos].max_degree()
