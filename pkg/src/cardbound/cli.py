"""Command-line front end.

    cardbound stats  --input a.csv b.csv --out catalog.json [--compress S --strategy ...]
    cardbound bound  --catalog c.json --query q.txt --method all|dsb|fdsb|pb|agm
                     [--root ALIAS] [--json out.json]
    cardbound verify --catalog c.json --query q.txt [--data-dir d/] [--seed K]

Exit codes: 0 ok, 2 parse error, 3 catalog/query mismatch, 4 budget
exceeded, 5 bound violated by the true count (the alarm condition).
Warnings go to stderr; results to stdout.  Machine output never rounds:
values are exact rational strings, with a decimal rendering alongside.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import catalog as catalog_mod
from .bounds import agm_acyclic, pb
from .dsb import dsb, dsb_cyclic
from .fdsb import fdsb
from .oracle import BagInstance, brute_force_join, generate_consistent_instance
from .errors import (
    BudgetError,
    CardboundError,
    CatalogError,
    CatalogFormatError,
    ParseError,
    QuerySyntaxError,
)
from .query import check_berge_acyclic, parse_query, spanning_trees
from .rational import format_decimal, format_exact, is_infinite
from .result import AGM, DSB, FDSB, METHODS, PB
from .staircase import STRATEGIES, compress

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_BUDGET = 4
EXIT_VIOLATION = 5

REPORT_SCHEMA_VERSION = 1


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def cmd_stats(args) -> int:
    catalog = catalog_mod.StatsCatalog()
    for path in args.input:
        name = os.path.splitext(os.path.basename(path))[0]
        schema, rows = catalog_mod.load_csv(path)
        rel = catalog_mod.extract_stats(rows, schema, name)
        if args.compress:
            attrs = tuple(
                catalog_mod.AttributeStats(
                    a.name, staircase=compress(a.degrees, args.compress, args.strategy))
                for a in rel.attributes)
            rel = catalog_mod.RelationStats(rel.name, rel.cardinality,
                                            rel.max_multiplicity, attrs)
        catalog.add(rel)
        tops = []
        for a in rel.attributes:
            head = (a.degrees.degrees[:3] if a.degrees is not None
                    else tuple(l for _, l in a.staircase.segments[:3]))
            tops.append(f"{a.name}:{'/'.join(format_exact(d) for d in head) or '-'}")
        print(f"{rel.name}: N={format_exact(rel.cardinality)} "
              f"B={format_exact(rel.max_multiplicity)} top degrees {' '.join(tops)}")
    catalog_mod.save_catalog(catalog, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _read_query(path):
    with open(path, encoding="utf-8") as fh:
        return parse_query(fh.read())


def _compute_one(q, catalog, method, root=None, tree=True):
    if method == DSB:
        return dsb(q, catalog, root=root if tree else None)
    if method == FDSB:
        bv = fdsb(q, catalog, lift_finite_b=True)
        for note in bv.notes:
            _warn(f"fdsb: {note}")
        return bv
    if method == PB:
        return pb(q, catalog)
    if method == AGM:
        return agm_acyclic(q, catalog)
    raise CardboundError(f"unknown method {method}")


def _compute_bounds(q, catalog, methods, root=None):
    cls = check_berge_acyclic(q)
    trees = None
    if cls.is_cyclic:
        _warn("query is cyclic; every bound falls back to the minimum over "
              "spanning-tree relaxations (atoms that lose a variable occurrence "
              "also lose their multiplicity cap)")
        trees = list(spanning_trees(q))
    results = {}
    timings = {}
    for method in methods:
        t0 = time.perf_counter()
        if trees is None:
            bv = _compute_one(q, catalog, method, root=root, tree=cls.is_tree)
        elif method == DSB:
            bv = dsb_cyclic(q, catalog)
        else:
            bv = min((_compute_one(tq, catalog, method) for tq in trees),
                     key=lambda b: b.value)
        timings[method] = int((time.perf_counter() - t0) * 1_000_000)
        results[method] = bv
    return results, timings


def _all_infinite_b(q, catalog):
    return all(is_infinite(catalog.relation(a.relation).max_multiplicity) for a in q.atoms)


def _every_atom_private(q):
    """True when each atom owns a variable no other atom shares.

    This is exactly the condition under which every cover keeps every atom,
    making the cover-based set-semantics bounds (AGM, PB, FDSB) comparable
    with the bag-exact DSB.  Bag relations should declare their private
    attributes with `_`.
    """
    for a in q.atoms:
        if not any(len(q.atoms_of_var(v)) == 1 for v in a.vars):
            return False
    return True


def _report(q, query_text, results, timings, true_count=None):
    doc = {"schema_version": REPORT_SCHEMA_VERSION, "query": query_text.strip(), "bounds": {}}
    for method, bv in results.items():
        doc["bounds"][method] = {
            "value": format_exact(bv.value),
            "value_decimal": format_decimal(bv.value),
            "root": bv.root_used,
            "b_effective": {k: format_exact(v) for k, v in sorted(bv.b_effective.items())},
            "micros": timings[method],
        }
    if true_count is not None:
        doc["true_count"] = str(true_count)
    return doc


def cmd_bound(args) -> int:
    catalog = catalog_mod.load_catalog(args.catalog)
    with open(args.query, encoding="utf-8") as fh:
        query_text = fh.read()
    q = parse_query(query_text)
    methods = list(METHODS) if args.method == "all" else [args.method]
    results, timings = _compute_bounds(q, catalog, methods, root=args.root)
    if args.method == "all" and _all_infinite_b(q, catalog) and not check_berge_acyclic(q).is_cyclic:
        order = [results[m].value for m in (DSB, FDSB, PB, AGM)]
        if _every_atom_private(q):
            assert order == sorted(order), f"bound ordering violated: {order}"
        elif order != sorted(order):
            _warn("DSB exceeds a cover-based bound; some atom declares no private "
                  "variable, so the set-semantics bounds (AGM/PB/FDSB) may drop "
                  "atoms that the bag-exact DSB must keep. Declare private "
                  "attributes with '_' if the relations are bags.")
    for method in METHODS:
        if method in results:
            bv = results[method]
            root = f" (root {bv.root_used})" if bv.root_used else ""
            fallback = ""
            if any(is_infinite(v) for v in bv.b_effective.values()) and \
               not _all_infinite_b(q, catalog):
                lifted = sorted(k for k, v in bv.b_effective.items() if is_infinite(v)
                                and not is_infinite(catalog.relation(q.atom(k).relation).max_multiplicity))
                if lifted:
                    fallback = f" [b_effective=inf for {','.join(lifted)}]"
            print(f"{method.upper()} = {format_decimal(bv.value)}{root}{fallback}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(_report(q, query_text, results, timings), fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _load_data_instances(q, catalog, data_dir):
    instances = {}
    for atom in q.atoms:
        path = os.path.join(data_dir, f"{atom.relation}.csv")
        schema, rows = catalog_mod.load_csv(path)
        from collections import Counter

        counts = Counter(tuple(r) for r in rows)
        instances[atom.alias] = BagInstance(
            arity=len(schema), tuples=dict(counts))
    return instances


def _consistency_warnings(q, catalog, instances):
    for atom in q.atoms:
        rel = catalog.relation(atom.relation)
        inst = instances[atom.alias]
        if inst.cardinality() > rel.cardinality:
            _warn(f"data for {rel.name} has {inst.cardinality()} rows but the "
                  f"catalog says {format_exact(rel.cardinality)}; bounds may not hold")
        for pos, attr in enumerate(rel.attributes):
            if attr.degrees is None or pos >= inst.arity:
                continue
            observed = inst.column_degrees(pos)
            limit = attr.degrees
            for rank in range(1, observed.length + 1):
                cap = limit.at(rank) if rank <= limit.length else 0
                if observed.at(rank) > cap:
                    _warn(f"data degree {observed.at(rank)} at rank {rank} of "
                          f"{rel.name}.{attr.name} exceeds catalog degree {cap}; "
                          "catalog is inconsistent with the data")
                    break


def cmd_verify(args) -> int:
    catalog = catalog_mod.load_catalog(args.catalog)
    with open(args.query, encoding="utf-8") as fh:
        query_text = fh.read()
    q = parse_query(query_text)
    if args.data_dir:
        instances = _load_data_instances(q, catalog, args.data_dir)
        _consistency_warnings(q, catalog, instances)
    else:
        per_relation = {}
        for atom in q.atoms:
            rel = catalog.relation(atom.relation)
            seqs = catalog_mod.atom_sequences(catalog, atom)
            bound_seqs = [s for s, p in zip(seqs, atom.positions) if p is not None]
            per_relation.setdefault(atom.relation, (bound_seqs, rel.max_multiplicity))
        generated = generate_consistent_instance(per_relation, args.seed)
        instances = {a.alias: generated[a.relation] for a in q.atoms}
        _warn(f"no --data-dir given; generated a consistent instance with seed {args.seed}")
    true_count = brute_force_join(instances, q)
    try:
        results, timings = _compute_bounds(q, catalog, list(METHODS))
    except CatalogError as exc:
        # staircase-only catalogs cannot serve the exact bound
        _warn(f"skipping the exact bound: {exc}")
        results, timings = _compute_bounds(q, catalog, [AGM, PB, FDSB])
    print(f"true count |Q| = {true_count}")
    violated = []
    for method in METHODS:
        if method not in results:
            continue
        bv = results[method]
        ok = true_count <= bv.value
        marker = "ok" if ok else "VIOLATED"
        print(f"{method.upper()} = {format_decimal(bv.value)}  [{marker}]")
        if not ok:
            violated.append(method)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(_report(q, query_text, results, timings, true_count=true_count),
                      fh, indent=2)
            fh.write("\n")
    if violated:
        print(f"BOUND VIOLATION: {','.join(violated)} below the true count", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="cardbound",
                                description="cardinality upper bounds from degree sequences")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("stats", help="extract statistics from CSV files")
    ps.add_argument("--input", nargs="+", required=True, help="CSV files, one relation each")
    ps.add_argument("--out", required=True, help="catalog JSON output path")
    ps.add_argument("--compress", type=int, default=0, metavar="S",
                    help="store S-segment staircases instead of full sequences")
    ps.add_argument("--strategy", choices=STRATEGIES, default="geometric")
    ps.set_defaults(func=cmd_stats)

    pb_ = sub.add_parser("bound", help="compute bounds for a query")
    pb_.add_argument("--catalog", required=True)
    pb_.add_argument("--query", required=True)
    pb_.add_argument("--method", choices=("all",) + METHODS, default="all")
    pb_.add_argument("--root", default=None, help="root alias for dsb evaluation order")
    pb_.add_argument("--json", default=None, help="write a JSON report here")
    pb_.set_defaults(func=cmd_bound)

    pv = sub.add_parser("verify", help="check bounds against a true count")
    pv.add_argument("--catalog", required=True)
    pv.add_argument("--query", required=True)
    pv.add_argument("--data-dir", default=None, help="directory with <relation>.csv files")
    pv.add_argument("--seed", type=int, default=0, help="seed for generated instances")
    pv.add_argument("--json", default=None)
    pv.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QuerySyntaxError, ParseError, CatalogFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except CardboundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
