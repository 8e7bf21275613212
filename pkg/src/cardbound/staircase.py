"""Staircase representation of degree sequences and its piecewise-linear algebra.

A staircase is a non-increasing, non-negative, piecewise-constant function on
(0, end]; segment q covers the half-open interval (end_{q-1}, end_q].  It is
the compressed stand-in for a degree sequence: evaluating at integer ranks
must dominate the original sequence pointwise.  Its running integral is a
continuous non-decreasing piecewise-linear function (PwlCdf) whose inverse we
resolve to the *leftmost* preimage on flat stretches; since downstream
vectors are non-increasing, a smaller preimage yields a larger factor, which
preserves the upper-bound direction.

Canonical form: adjacent equal levels merged, trailing zero levels dropped
(evaluation past the last segment is 0, so nothing is lost).
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

from .degrees import DegreeSequence
from .errors import CardboundError, RangeError, SortError
from .rational import as_rational

GEOMETRIC = "geometric"
EQUIDEPTH = "equidepth"
MIN_MASS_DP = "mindp"
STRATEGIES = (GEOMETRIC, EQUIDEPTH, MIN_MASS_DP)


@dataclass(frozen=True)
class Staircase:
    segments: tuple  # ((end, level), ...) strictly increasing ends, decreasing levels

    def __post_init__(self):
        prev_end = Fraction(0)
        prev_level = None
        for end, level in self.segments:
            if end <= prev_end:
                raise CardboundError(f"segment ends not increasing at {end}")
            if level < 0:
                raise SortError(f"negative staircase level {level}")
            if prev_level is not None and level > prev_level:
                raise SortError("staircase levels must be non-increasing")
            prev_end, prev_level = end, level

    @classmethod
    def make(cls, pairs) -> "Staircase":
        """Normalize: coerce to Fractions, merge equal runs, drop zero tail."""
        cleaned = []
        for end, level in pairs:
            end = as_rational(end)
            level = as_rational(level)
            if cleaned and cleaned[-1][1] == level:
                cleaned[-1] = (end, level)
            else:
                cleaned.append((end, level))
        while cleaned and cleaned[-1][1] == 0:
            cleaned.pop()
        return cls(tuple(cleaned))

    @classmethod
    def constant(cls, level, end) -> "Staircase":
        return cls.make([(end, level)])

    @classmethod
    def from_degree_sequence(cls, seq: DegreeSequence) -> "Staircase":
        """Exact representation: one segment per run of equal degrees."""
        pairs = []
        for rank, d in enumerate(seq.degrees, start=1):
            pairs.append((Fraction(rank), d))
        return cls.make(pairs)

    @property
    def end(self) -> Fraction:
        return self.segments[-1][0] if self.segments else Fraction(0)

    @property
    def num_segments(self) -> int:
        return len(self.segments)

    def first_level(self) -> Fraction:
        return self.segments[0][1] if self.segments else Fraction(0)

    def value(self, x) -> Fraction:
        """Value at x > 0; zero past the last segment."""
        x = as_rational(x)
        if x <= 0:
            raise RangeError(f"staircase argument must be positive, got {x}")
        ends = [e for e, _ in self.segments]
        i = bisect_left(ends, x)
        if i == len(ends):
            return Fraction(0)
        return self.segments[i][1]

    def total_mass(self) -> Fraction:
        acc = Fraction(0)
        prev = Fraction(0)
        for end, level in self.segments:
            acc += level * (end - prev)
            prev = end
        return acc

    def dominates_sequence(self, seq: DegreeSequence) -> bool:
        return all(self.value(r) >= seq.at(r) for r in range(1, seq.length + 1))


@dataclass(frozen=True)
class PwlCdf:
    """Continuous non-decreasing piecewise-linear function with F(0)=0."""

    points: tuple  # ((x, y), ...) starting at (0, 0), x strictly increasing

    def __post_init__(self):
        if not self.points or self.points[0] != (Fraction(0), Fraction(0)):
            raise CardboundError("pwl cdf must start at (0, 0)")
        px, py = self.points[0]
        for x, y in self.points[1:]:
            if x <= px:
                raise CardboundError("pwl breakpoints must increase")
            if y < py:
                raise SortError("pwl cdf must be non-decreasing")
            px, py = x, y

    @classmethod
    def make(cls, pairs) -> "PwlCdf":
        pts = [(as_rational(x), as_rational(y)) for x, y in pairs]
        if not pts or pts[0] != (Fraction(0), Fraction(0)):
            pts.insert(0, (Fraction(0), Fraction(0)))
        # merge collinear runs for a canonical form
        out = [pts[0]]
        for i in range(1, len(pts)):
            x, y = pts[i]
            if len(out) >= 2:
                (x0, y0), (x1, y1) = out[-2], out[-1]
                if (y1 - y0) * (x - x1) == (y - y1) * (x1 - x0):
                    out[-1] = (x, y)
                    continue
            out.append((x, y))
        return cls(tuple(out))

    @classmethod
    def from_staircase(cls, sc: Staircase) -> "PwlCdf":
        pts = [(Fraction(0), Fraction(0))]
        acc = Fraction(0)
        prev = Fraction(0)
        for end, level in sc.segments:
            acc += level * (end - prev)
            pts.append((end, acc))
            prev = end
        return cls.make(pts)

    @property
    def end(self) -> Fraction:
        return self.points[-1][0]

    def total(self) -> Fraction:
        return self.points[-1][1]

    def value_at(self, x) -> Fraction:
        """Evaluate, clamping outside [0, end] (constant continuation)."""
        x = as_rational(x)
        if x <= 0:
            return Fraction(0)
        if x >= self.end:
            return self.total()
        xs = [p[0] for p in self.points]
        i = bisect_left(xs, x)
        if xs[i] == x:
            return self.points[i][1]
        (x0, y0), (x1, y1) = self.points[i - 1], self.points[i]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def leftmost_preimage(self, v) -> Fraction:
        """Smallest x with F(x) = v; flat stretches resolve to their left end."""
        v = as_rational(v)
        if v < 0 or v > self.total():
            raise RangeError(f"value {v} outside [0, {self.total()}]")
        for i, (x, y) in enumerate(self.points):
            if y >= v:
                if y == v:
                    return x
                x0, y0 = self.points[i - 1]
                return x0 + (v - y0) * (x - x0) / (y - y0)
        raise AssertionError("unreachable: v <= total")

    def rightmost_arg_at_or_below(self, w) -> Fraction:
        """Largest x in [0, end] with F(x) <= w (end itself if total <= w)."""
        w = as_rational(w)
        if w < 0:
            raise RangeError(f"mass bound {w} is negative")
        if self.total() <= w:
            return self.end
        for i in range(len(self.points) - 1, -1, -1):
            x, y = self.points[i]
            if y <= w:
                if i + 1 < len(self.points):
                    x1, y1 = self.points[i + 1]
                    if y1 > y:
                        return x + (w - y) * (x1 - x) / (y1 - y)
                return x
        raise AssertionError("unreachable: F(0)=0 <= w")


def pwl_inverse(F: PwlCdf, v) -> Fraction:
    return F.leftmost_preimage(v)


def pwl_compose(F: PwlCdf, G: PwlCdf) -> PwlCdf:
    """The composition x -> F(G(x)), again a PwlCdf on G's domain.

    Breakpoints are G's own plus the preimages under G of F's breakpoints;
    between consecutive candidates both pieces are linear.
    """
    xs = {x for x, _ in G.points}
    for fx, _ in F.points:
        if 0 <= fx <= G.total():
            xs.add(G.leftmost_preimage(fx))
            xs.add(G.rightmost_arg_at_or_below(fx))
    xs = sorted(x for x in xs if 0 <= x <= G.end)
    pts = [(x, F.value_at(G.value_at(x))) for x in xs]
    return PwlCdf.make(pts)


def staircase_multiply(fs) -> Staircase:
    """Pointwise product; shorter factors are extended by level 0."""
    fs = [f for f in fs]
    if not fs:
        raise CardboundError("need at least one staircase")
    cuts = sorted({end for f in fs for end, _ in f.segments})
    pairs = []
    for end in cuts:
        level = Fraction(1)
        for f in fs:
            level *= f.value(end)
            if level == 0:
                break
        pairs.append((end, level))
    return Staircase.make(pairs)


def integer_sum(sc: Staircase, up_to) -> Fraction:
    """Sum of sc(i) over integer i in [1, up_to], segment by segment."""
    up_to = as_rational(up_to)
    acc = Fraction(0)
    prev = Fraction(0)
    floor_prev = 0
    for end, level in sc.segments:
        hi = min(end, up_to)
        if hi > prev:
            floor_hi = hi.numerator // hi.denominator
            acc += level * (floor_hi - floor_prev)
            floor_prev = floor_hi
            prev = hi
        if prev >= up_to:
            break
    return acc


def _bucket_ends_geometric(n: int, s: int):
    ends = []
    e = 1
    while len(ends) < s - 1 and e < n:
        ends.append(e)
        e *= 2
    ends.append(n)
    return ends


def _bucket_ends_equidepth(seq: DegreeSequence, s: int):
    n = seq.length
    total = seq.total()
    if total == 0:
        return [n]
    ends = []
    acc = Fraction(0)
    k = 1
    for rank in range(1, n + 1):
        acc += seq.at(rank)
        if acc * s >= k * total:
            ends.append(rank)
            while acc * s >= (k + 1) * total and k < s:
                k += 1
            k += 1
        if len(ends) >= s - 1:
            break
    if not ends or ends[-1] != n:
        ends.append(n)
    return ends


def _bucket_ends_min_mass(seq: DegreeSequence, s: int):
    """Partition [1..n] into <= s buckets minimizing the mass added by
    levelling each bucket at its first degree.  Exact O(n^2 s) DP."""
    n = seq.length
    degs = list(seq.padded())
    # cost of bucket [i..j): degs[i] * (j - i)
    best = [[None] * (s + 1) for _ in range(n + 1)]
    choice = [[None] * (s + 1) for _ in range(n + 1)]
    best[0][0] = Fraction(0)
    for j in range(1, n + 1):
        for k in range(1, min(j, s) + 1):
            for i in range(k - 1, j):
                if best[i][k - 1] is None:
                    continue
                cost = best[i][k - 1] + degs[i] * (j - i)
                if best[j][k] is None or cost < best[j][k]:
                    best[j][k] = cost
                    choice[j][k] = i
    k_opt = min((k for k in range(1, s + 1) if best[n][k] is not None),
                key=lambda k: best[n][k])
    ends = []
    j, k = n, k_opt
    while j > 0:
        ends.append(j)
        j = choice[j][k]
        k -= 1
    return sorted(ends)


def compress(seq: DegreeSequence, s: int, strategy: str = GEOMETRIC) -> Staircase:
    """Upper-bounding staircase with at most s segments.

    Every bucket is levelled at its first (largest) degree, so the result
    dominates the sequence at every integer rank.  Geometric bucket ends
    (1, 2, 4, ...) keep resolution at the head where degrees are largest and
    nest as s shrinks, so coarser settings dominate finer ones.
    """
    if s < 1:
        raise CardboundError(f"bucket count must be >= 1, got {s}")
    n = seq.length
    if n == 0:
        return Staircase(())
    if strategy == GEOMETRIC:
        ends = _bucket_ends_geometric(n, s)
    elif strategy == EQUIDEPTH:
        ends = _bucket_ends_equidepth(seq, s)
    elif strategy == MIN_MASS_DP:
        ends = _bucket_ends_min_mass(seq, s)
    else:
        raise CardboundError(f"unknown compression strategy {strategy!r}")
    pairs = []
    start = 1
    for end in ends:
        pairs.append((Fraction(end), seq.at(start)))
        start = end + 1
    return Staircase.make(pairs)
