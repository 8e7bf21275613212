import pytest
from fractions import Fraction

from hypothesis import given, strategies as st

from cardbound.degrees import (
    Cdf,
    ConsistencyVerdict,
    DegreeSequence,
    cdf,
    check_consistent,
    discrete_derivative,
    discrete_integral,
    pad_to,
)
from cardbound.errors import DomainShrinkError, ShapeError, SortError
from cardbound.rational import INF
from cardbound.tensor import SparseTensor, from_dense


def test_pad_appends_virtual_zeros():
    padded = pad_to(DegreeSequence.of([5, 1]), 3)
    assert padded.padded() == (5, 1, 0)
    assert padded.total() == 6


def test_pad_same_length_is_noop():
    seq = DegreeSequence.of([3, 2, 2])
    assert pad_to(seq, 3).padded() == (3, 2, 2)


def test_pad_empty_sequence():
    assert pad_to(DegreeSequence.of([]), 2).padded() == (0, 0)


def test_pad_shrink_rejected():
    with pytest.raises(DomainShrinkError):
        pad_to(DegreeSequence.of([3, 2, 2]), 2)


def test_construction_rejects_unsorted_and_negative():
    with pytest.raises(SortError):
        DegreeSequence.of([1, 2])
    with pytest.raises(SortError):
        DegreeSequence.of([3, -1])


def test_cdf_values():
    assert cdf(DegreeSequence.of([6, 3, 1])).prefix == (0, 6, 9, 10)
    assert cdf(DegreeSequence.of([4, 3, 2, 1])).prefix == (0, 4, 7, 9, 10)
    assert cdf(DegreeSequence.of([0, 0])).prefix == (0, 0, 0)


def test_cdf_includes_virtual_padding():
    assert cdf(pad_to(DegreeSequence.of([5, 1]), 4)).prefix == (0, 5, 6, 6, 6)


def test_discrete_ops_examples():
    assert discrete_derivative([4, 7, 9, 10]) == (4, 3, 2, 1)
    assert discrete_integral([4, 3, 2, 1]) == (4, 7, 9, 10)


@given(st.lists(st.integers(min_value=0, max_value=50), max_size=16))
def test_discrete_ops_are_inverse(xs):
    vec = tuple(Fraction(x) for x in xs)
    assert discrete_derivative(discrete_integral(vec)) == vec
    assert discrete_integral(discrete_derivative(vec)) == vec


@given(st.lists(st.integers(min_value=0, max_value=30), min_size=1, max_size=10).map(
    lambda xs: sorted(xs, reverse=True)))
def test_pad_preserves_mass_and_order(xs):
    seq = DegreeSequence.of(xs)
    padded = pad_to(seq, len(xs) + 3)
    assert padded.total() == seq.total()
    vals = padded.padded()
    assert all(vals[i] >= vals[i + 1] for i in range(len(vals) - 1))


EX33_C = from_dense([[4, 2, 0, 0], [0, 1, 2, 0], [0, 0, 0, 1]])


def test_consistency_of_worst_case_matrix():
    f = DegreeSequence.of([6, 3, 1])
    g = DegreeSequence.of([4, 3, 2, 1])
    verdict = check_consistent(EX33_C, [f, g], INF)
    assert verdict.ok


def test_consistency_zero_tensor():
    t = SparseTensor((2, 2))
    assert check_consistent(t, [DegreeSequence.of([1, 1]), DegreeSequence.of([2, 0])], 1).ok


def test_consistency_entry_bound_violation():
    b = Fraction(4)
    t = from_dense([[b + 1]])
    f = DegreeSequence.of([b + 1])
    verdict = check_consistent(t, [f, f], b)
    assert not verdict.ok
    assert verdict.coordinate == (1, 1)


def test_consistency_marginal_violation_reports_axis():
    t = from_dense([[2, 2]])
    verdict = check_consistent(t, [DegreeSequence.of([3]), DegreeSequence.of([2, 2])], INF)
    assert not verdict.ok
    assert verdict.axis == 0
    assert verdict.coordinate == (1,)


def test_consistency_shape_mismatch():
    t = from_dense([[1]])
    with pytest.raises(ShapeError):
        check_consistent(t, [DegreeSequence.of([1])], INF)
    with pytest.raises(ShapeError):
        check_consistent(t, [DegreeSequence.of([1, 0]), DegreeSequence.of([1])], INF)


def test_consistency_matches_dense_marginal_oracle():
    import itertools
    import random

    rng = random.Random(7)
    for _ in range(30):
        dims = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))
        entries = {}
        for coord in itertools.product(*(range(1, n + 1) for n in dims)):
            if rng.random() < 0.4:
                entries[coord] = Fraction(rng.randint(1, 5))
        t = SparseTensor(dims, entries)
        seqs = [DegreeSequence.of(sorted((rng.randint(0, 12) for _ in range(n)), reverse=True))
                for n in dims]
        verdict = check_consistent(t, seqs, INF)
        # naive dense marginal comparison
        expected_ok = True
        for axis, seq in enumerate(seqs):
            sums = [Fraction(0)] * dims[axis]
            for coord, v in entries.items():
                sums[coord[axis] - 1] += v
            if any(sums[r] > seq.at(r + 1) for r in range(dims[axis])):
                expected_ok = False
        assert verdict.ok == expected_ok


def test_cdf_type_invariants():
    with pytest.raises(ShapeError):
        Cdf((1, 2))
    with pytest.raises(SortError):
        Cdf((Fraction(0), Fraction(2), Fraction(1)))
    assert isinstance(check_consistent(SparseTensor((1,)), [DegreeSequence.of([0])], 1),
                      ConsistencyVerdict)
