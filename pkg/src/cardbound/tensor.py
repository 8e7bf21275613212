"""Sparse tensors with 1-based coordinates and exact rational entries."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ShapeError, SortError
from .rational import as_rational


@dataclass(frozen=True)
class SparseTensor:
    """Map from 1-based coordinate tuples to nonzero exact values.

    Entries may be negative: worst-case tensors for three or more dimensions
    under a finite tuple-multiplicity cap legitimately contain negative cells.
    Explicit zeros are never stored.
    """

    dims: tuple[int, ...]
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for d in self.dims:
            if d < 0:
                raise ShapeError(f"negative extent {d}")
        for coord, val in self.entries.items():
            if len(coord) != len(self.dims):
                raise ShapeError(f"coordinate {coord} has wrong arity for dims {self.dims}")
            for c, n in zip(coord, self.dims):
                if not (1 <= c <= n):
                    raise ShapeError(f"coordinate {coord} outside extents {self.dims}")
            if val == 0:
                raise ShapeError(f"explicit zero stored at {coord}")

    @property
    def ndim(self) -> int:
        return len(self.dims)

    def value_at(self, coord) -> Fraction:
        return self.entries.get(tuple(coord), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def prefix_sum(self, box) -> Fraction:
        """Sum of all entries with coordinates <= box component-wise."""
        if len(box) != self.ndim:
            raise ShapeError(f"box {box} has wrong arity for dims {self.dims}")
        acc = Fraction(0)
        for coord, val in self.entries.items():
            if all(c <= m for c, m in zip(coord, box)):
                acc += val
        return acc

    def axis_marginal(self, axis: int) -> tuple[Fraction, ...]:
        """Sum out every axis except `axis` (0-based); full-length vector."""
        out = [Fraction(0)] * self.dims[axis]
        for coord, val in self.entries.items():
            out[coord[axis] - 1] += val
        return tuple(out)

    def to_dense(self):
        """Nested lists, innermost = last axis. Only for small tensors/tests."""
        def build(axis, prefix):
            if axis == self.ndim:
                return self.value_at(prefix)
            return [build(axis + 1, prefix + (i,)) for i in range(1, self.dims[axis] + 1)]

        return build(0, ())


def from_dense(nested) -> SparseTensor:
    dims = []
    probe = nested
    while isinstance(probe, list):
        dims.append(len(probe))
        probe = probe[0] if probe else None
    entries = {}

    def walk(node, prefix):
        if not isinstance(node, list):
            v = as_rational(node)
            if v != 0:
                entries[prefix] = v
            return
        if len(node) != dims[len(prefix)]:
            raise ShapeError("ragged nested list")
        for i, child in enumerate(node, start=1):
            walk(child, prefix + (i,))

    walk(nested, ())
    return SparseTensor(tuple(dims), entries)


def check_vector(vec, extent, what="vector"):
    """Validate a contraction input: right length, non-negative, non-increasing."""
    if len(vec) != extent:
        raise ShapeError(f"{what} has length {len(vec)}, expected {extent}")
    prev = None
    for v in vec:
        if v < 0:
            raise SortError(f"{what} has negative entry {v}")
        if prev is not None and v > prev:
            raise SortError(f"{what} is not non-increasing")
        prev = v


def contract(tensor: SparseTensor, vectors: dict) -> tuple[Fraction, ...]:
    """Contract all axes but one with non-increasing non-negative vectors.

    `vectors` maps 0-based axis index to a vector of matching extent; exactly
    one axis must be omitted and the result ranges over that axis.  When the
    tensor is any worst-case construction from this package, the result is
    again non-negative and non-increasing, so bottom-up evaluation can chain
    contractions without re-sorting.
    """
    axes = set(vectors)
    missing = [a for a in range(tensor.ndim) if a not in axes]
    if len(missing) != 1 or axes - set(range(tensor.ndim)):
        raise ShapeError(f"need exactly one omitted axis, got vectors for {sorted(axes)} with ndim {tensor.ndim}")
    target = missing[0]
    for axis, vec in vectors.items():
        check_vector(vec, tensor.dims[axis], what=f"vector for axis {axis}")
    out = [Fraction(0)] * tensor.dims[target]
    for coord, val in tensor.entries.items():
        acc = val
        for axis, vec in vectors.items():
            acc *= vec[coord[axis] - 1]
            if acc == 0:
                break
        if acc:
            out[coord[target] - 1] += acc
    return tuple(out)


def contract_all(tensor: SparseTensor, vectors: dict) -> Fraction:
    """Full contraction against one vector per axis, yielding a scalar."""
    if set(vectors) != set(range(tensor.ndim)):
        raise ShapeError("full contraction needs a vector for every axis")
    if tensor.ndim == 0:
        return tensor.value_at(())
    first = 0
    rest = {a: v for a, v in vectors.items() if a != first}
    row = contract(tensor, rest) if rest else tuple(
        sum((val for coord, val in tensor.entries.items() if coord[0] == i), Fraction(0))
        for i in range(1, tensor.dims[0] + 1)
    )
    vec = vectors[first]
    check_vector(vec, tensor.dims[first], what="vector for axis 0")
    return sum((r * v for r, v in zip(row, vec)), Fraction(0))
