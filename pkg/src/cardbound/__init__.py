"""cardbound: provable output-size upper bounds for Berge-acyclic join queries.

Bounds are computed from per-attribute degree sequences (full or compressed
to staircases) and per-relation max tuple multiplicities; brute-force oracles
verify them at desk scale.  All arithmetic is exact.
"""

from .bounds import agm_acyclic, pb, pb_rooted
from .catalog import (
    AttributeStats,
    RelationStats,
    StatsCatalog,
    extract_stats,
    load_catalog,
    save_catalog,
)
from .degrees import Cdf, DegreeSequence, cdf, check_consistent, discrete_derivative, discrete_integral, pad_to
from .dsb import dsb, dsb_cyclic, materialize_worst_case
from .fdsb import fdsb, fdsb_rooted
from .oracle import BagInstance, brute_force_join, generate_consistent_instance, lp_max_prefix
from .query import (
    Atom,
    QuerySpec,
    check_berge_acyclic,
    connected_components,
    is_cover,
    orient,
    parse_query,
    spanning_trees,
)
from .rational import INF
from .result import BoundValue
from .staircase import PwlCdf, Staircase, compress, pwl_compose, pwl_inverse, staircase_multiply
from .tensor import SparseTensor
from .worst_case import (
    WorstCaseTensor,
    build_finite_b_2d,
    build_greedy_infinite_b,
    build_lp_oracle,
    value_at_infinite_b,
)

__version__ = "0.1.0"
