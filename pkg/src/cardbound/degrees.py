"""Degree sequences, cumulative sums and discrete calculus.

A degree sequence is the non-increasing vector of value frequencies of one
attribute; ranks are 1-based.  Zero-padding to a larger domain is virtual:
only the natural entries are stored, together with the padded length.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainShrinkError, ShapeError, SortError
from .rational import INF, as_rational, is_infinite
from .tensor import SparseTensor


@dataclass(frozen=True)
class DegreeSequence:
    """Non-increasing, non-negative frequencies over a 1-based rank domain."""

    degrees: tuple[Fraction, ...]
    length: int

    def __post_init__(self):
        prev = None
        for d in self.degrees:
            if d < 0:
                raise SortError(f"negative degree {d}")
            if prev is not None and d > prev:
                raise SortError(f"degrees not non-increasing: {prev} then {d}")
            prev = d
        if self.length < len(self.degrees):
            raise ShapeError(f"length {self.length} shorter than stored degrees ({len(self.degrees)})")

    @classmethod
    def of(cls, values, length=None) -> "DegreeSequence":
        vals = tuple(as_rational(v) for v in values)
        return cls(vals, len(vals) if length is None else length)

    @classmethod
    def ones(cls, n: int) -> "DegreeSequence":
        return cls((Fraction(1),) * n, n)

    def at(self, rank: int) -> Fraction:
        """Degree at 1-based rank; virtual zeros past the stored entries."""
        if rank < 1 or rank > self.length:
            raise ShapeError(f"rank {rank} outside domain [1,{self.length}]")
        return self.degrees[rank - 1] if rank <= len(self.degrees) else Fraction(0)

    def total(self) -> Fraction:
        return sum(self.degrees, Fraction(0))

    def padded(self) -> tuple[Fraction, ...]:
        return self.degrees + (Fraction(0),) * (self.length - len(self.degrees))

    def is_integral(self) -> bool:
        return all(d.denominator == 1 for d in self.degrees)

    def max_degree(self) -> Fraction:
        return self.degrees[0] if self.degrees else Fraction(0)


@dataclass(frozen=True)
class Cdf:
    """Running sums F(0..n); F(0)=0 and consecutive differences >= 0."""

    prefix: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.prefix or self.prefix[0] != 0:
            raise ShapeError("cdf must start at F(0)=0")
        for a, b in zip(self.prefix, self.prefix[1:]):
            if b < a:
                raise SortError("cdf must be non-decreasing")

    @property
    def n(self) -> int:
        return len(self.prefix) - 1

    def at(self, i: int) -> Fraction:
        if i < 0 or i > self.n:
            raise ShapeError(f"index {i} outside [0,{self.n}]")
        return self.prefix[i]

    def total(self) -> Fraction:
        return self.prefix[-1]


def pad_to(seq: DegreeSequence, n: int) -> DegreeSequence:
    """Extend the domain to n ranks; trailing zeros are virtual."""
    if n < seq.length:
        raise DomainShrinkError(f"cannot shrink domain from {seq.length} to {n}")
    return DegreeSequence(seq.degrees, n)


def cdf(seq: DegreeSequence) -> Cdf:
    out = [Fraction(0)]
    for d in seq.padded():
        out.append(out[-1] + d)
    return Cdf(tuple(out))


def discrete_derivative(v) -> tuple[Fraction, ...]:
    """Consecutive differences with a virtual leading zero."""
    vals = [as_rational(x) for x in v]
    prev = Fraction(0)
    out = []
    for x in vals:
        out.append(x - prev)
        prev = x
    return tuple(out)


def discrete_integral(v) -> tuple[Fraction, ...]:
    """Running sums; inverse of discrete_derivative."""
    acc = Fraction(0)
    out = []
    for x in v:
        acc += as_rational(x)
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class ConsistencyVerdict:
    ok: bool
    reason: str = ""
    axis: int | None = None
    coordinate: tuple | None = None

    def __bool__(self):
        return self.ok


def check_consistent(tensor: SparseTensor, seqs, b=INF) -> ConsistencyVerdict:
    """Check per-axis marginals against degree sequences and entries against b.

    Marginals must be <= the sequences; every entry must lie in [0, b].
    Returns the first violation found (axis order, then coordinate order).
    """
    seqs = list(seqs)
    if tensor.ndim != len(seqs):
        raise ShapeError(f"tensor has {tensor.ndim} axes but {len(seqs)} sequences given")
    for axis, seq in enumerate(seqs):
        if tensor.dims[axis] != seq.length:
            raise ShapeError(f"axis {axis} extent {tensor.dims[axis]} != sequence length {seq.length}")
    for axis, seq in enumerate(seqs):
        marg = tensor.axis_marginal(axis)
        for rank in range(1, seq.length + 1):
            if marg[rank - 1] > seq.at(rank):
                return ConsistencyVerdict(
                    False, f"marginal {marg[rank-1]} exceeds degree {seq.at(rank)}",
                    axis=axis, coordinate=(rank,))
    for coord in sorted(tensor.entries):
        val = tensor.entries[coord]
        if val < 0:
            return ConsistencyVerdict(False, f"negative entry {val}", coordinate=coord)
        if not is_infinite(b) and val > b:
            return ConsistencyVerdict(False, f"entry {val} exceeds multiplicity cap {b}", coordinate=coord)
    return ConsistencyVerdict(True)
