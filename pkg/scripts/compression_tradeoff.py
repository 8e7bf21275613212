#!/usr/bin/env python3
"""Accuracy/size tradeoff of staircase compression on a skewed join.

Generates a chain query over zipf-like degree sequences, then sweeps the
bucket count and prints how the functional bound tightens toward the exact
bound as the representation grows.

Run:  python3 scripts/compression_tradeoff.py [--domain 200] [--atoms 3] [--seed 7]
"""

import argparse
import random
import time
from fractions import Fraction

from cardbound.catalog import AttributeStats, RelationStats, StatsCatalog
from cardbound.degrees import DegreeSequence
from cardbound.dsb import dsb
from cardbound.fdsb import fdsb_rooted
from cardbound.query import parse_query
from cardbound.rational import INF
from cardbound.staircase import GEOMETRIC, MIN_MASS_DP, compress


def zipf_sequence(rng, n, alpha=1.2):
    degs = sorted((max(1, int(round(n / (i ** alpha)))) for i in range(1, n + 1)),
                  reverse=True)
    return DegreeSequence.of(degs)


def build(rng, atoms, domain):
    text = ", ".join(f"A{i}(X{i},X{i+1},_)" for i in range(1, atoms + 1))
    q = parse_query("Q = " + text)
    rels = []
    for i in range(1, atoms + 1):
        left = zipf_sequence(rng, domain)
        # both attributes of a relation share its total mass
        total = int(left.total())
        right_parts = []
        remaining = total
        while remaining > 0:
            p = min(remaining, rng.randint(1, max(1, total // domain + 1)))
            right_parts.append(p)
            remaining -= p
        right = DegreeSequence.of(sorted(right_parts, reverse=True))
        rels.append(RelationStats(
            f"A{i}", Fraction(total), INF,
            (AttributeStats("l", degrees=left), AttributeStats("r", degrees=right))))
    return q, StatsCatalog(rels)


def staircased(cat, s, strategy):
    rels = []
    for name, rel in cat.relations.items():
        attrs = tuple(AttributeStats(a.name, staircase=compress(a.degrees, s, strategy))
                      for a in rel.attributes)
        rels.append(RelationStats(name, rel.cardinality, rel.max_multiplicity, attrs))
    return StatsCatalog(rels)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--domain", type=int, default=200)
    ap.add_argument("--atoms", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    q, cat = build(rng, args.atoms, args.domain)
    root = q.aliases()[0]

    t0 = time.perf_counter()
    exact = dsb(q, cat).value
    t_exact = time.perf_counter() - t0
    print(f"exact bound (full sequences): {exact}  [{t_exact * 1000:.1f} ms]")
    print(f"{'buckets':>8} {'strategy':>10} {'bound':>16} {'ratio':>8} {'ms':>8}")
    for s in (1, 2, 4, 8, 16, 32, args.domain):
        for strategy in (GEOMETRIC, MIN_MASS_DP):
            t0 = time.perf_counter()
            value = fdsb_rooted(q, staircased(cat, s, strategy), root).value
            ms = (time.perf_counter() - t0) * 1000
            ratio = float(value / exact) if exact else float("nan")
            print(f"{s:>8} {strategy:>10} {str(value):>16} {ratio:>8.3f} {ms:>8.1f}")


if __name__ == "__main__":
    main()
