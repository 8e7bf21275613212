import itertools
import random
from fractions import Fraction

import pytest

from helpers import dense_prefix_check, instance_tensor, random_partition

from cardbound.degrees import DegreeSequence, cdf, check_consistent, pad_to
from cardbound.errors import BudgetError, ShapeError, SortError, UnsupportedConstruction
from cardbound.oracle import generate_consistent_instance
from cardbound.rational import INF
from cardbound.tensor import from_dense
from cardbound.worst_case import (
    Construction,
    build_finite_b_1d,
    build_finite_b_2d,
    build_greedy_infinite_b,
    build_lp_oracle,
    contract,
    lp_prefix_value,
    value_at_infinite_b,
)

F631 = DegreeSequence.of([6, 3, 1])
G4321 = DegreeSequence.of([4, 3, 2, 1])


def test_value_at_infinite_b_examples():
    cdfs = [cdf(F631), cdf(G4321)]
    assert value_at_infinite_b(cdfs, (3, 1)) == 4
    assert value_at_infinite_b(cdfs, (2, 3)) == 9
    assert value_at_infinite_b(cdfs, (0, 4)) == 0
    assert value_at_infinite_b(cdfs, (3, 0)) == 0
    with pytest.raises(ShapeError):
        value_at_infinite_b(cdfs, (4, 1))


def test_greedy_matches_golden_matrix():
    wct = build_greedy_infinite_b([F631, G4321])
    assert wct.tensor.to_dense() == from_dense([[4, 2, 0, 0], [0, 1, 2, 0], [0, 0, 0, 1]]).to_dense()
    assert wct.construction is Construction.GREEDY_INFINITE_B


def test_greedy_heavy_value_against_singletons():
    n = 5
    f = DegreeSequence.of([n])
    g = DegreeSequence.of([1] * n)
    wct = build_greedy_infinite_b([f, g])
    assert wct.tensor.to_dense() == [[1] * n]


def test_greedy_empty_list_rejected():
    with pytest.raises(ShapeError):
        build_greedy_infinite_b([])


def test_greedy_prefix_sums_equal_value_tensor():
    rng = random.Random(3)
    for _ in range(40):
        total = rng.randint(0, 18)
        d = rng.randint(1, 3)
        seqs = [DegreeSequence.of(random_partition(rng, total, 6)) for _ in range(d)]
        n = max((s.length for s in seqs), default=0)
        seqs = [pad_to(s, max(n, 1)) for s in seqs]
        wct = build_greedy_infinite_b(seqs)
        ok, box, got, want = dense_prefix_check(wct, seqs)
        assert ok, f"prefix box {box}: {got} != {want}"
        assert all(v >= 0 for v in wct.tensor.entries.values())
        assert len(wct.tensor.entries) <= sum(s.length for s in seqs)
        assert check_consistent(wct.tensor, seqs, INF).ok


def test_greedy_integral_for_integral_inputs():
    wct = build_greedy_infinite_b([F631, G4321])
    assert all(v.denominator == 1 for v in wct.tensor.entries.values())


GREATER = DegreeSequence.of([10, 10, 6])  # 2B, 2B, B+1 at B=5


def test_finite_b_2d_exceeds_cap_on_golden_instance():
    wct = build_finite_b_2d(GREATER, GREATER, 5)
    assert wct.tensor.to_dense() == from_dense([[5, 5, 0], [5, 5, 0], [0, 0, 6]]).to_dense()
    assert wct.tensor.value_at((3, 3)) == 6 > 5
    assert wct.tensor.total() == 26  # 5B + 1
    verdict = check_consistent(wct.tensor, [GREATER, GREATER], 5)
    assert not verdict.ok and verdict.coordinate == (3, 3)


def test_finite_b_2d_matches_worst_case_bag_of_intro_example():
    f = pad_to(DegreeSequence.of([5, 1]), 3)
    g = pad_to(DegreeSequence.of([3, 2, 1]), 4)
    wct = build_finite_b_2d(f, g, 2)
    assert dict(wct.tensor.entries) == {
        (1, 1): Fraction(2), (1, 2): Fraction(2), (1, 3): Fraction(1), (2, 1): Fraction(1)}


def test_finite_b_2d_trivial_cell():
    wct = build_finite_b_2d(DegreeSequence.of([1]), DegreeSequence.of([1]), 1)
    assert wct.tensor.to_dense() == [[1]]


def test_finite_b_2d_rejects_infinite_cap():
    with pytest.raises(UnsupportedConstruction):
        build_finite_b_2d(F631, G4321, INF)


def test_finite_b_2d_nonnegative_integral_and_lp_equal():
    rng = random.Random(11)
    for _ in range(25):
        t1, t2 = rng.randint(0, 10), rng.randint(0, 10)
        f = DegreeSequence.of(random_partition(rng, t1, 3))
        g = DegreeSequence.of(random_partition(rng, t2, 3))
        f, g = pad_to(f, 3), pad_to(g, 3)
        b = Fraction(rng.randint(1, 5))
        wct = build_finite_b_2d(f, g, b)
        assert all(v >= 0 and v.denominator == 1 for v in wct.tensor.entries.values())
        for box in itertools.product(range(4), repeat=2):
            assert wct.tensor.prefix_sum(box) == lp_prefix_value([f, g], b, box)


def test_finite_b_1d_caps_each_rank():
    wct = build_finite_b_1d(DegreeSequence.of([6, 3, 1]), 2)
    assert wct.tensor.to_dense() == [2, 2, 1]
    for m in range(4):
        assert wct.tensor.prefix_sum((m,)) == lp_prefix_value([F631], 2, (m,))


def test_lp_oracle_negative_entry_witness():
    f = DegreeSequence.of([100, 100])
    h = DegreeSequence.of([100, 6])  # (M, 2B) at B=3
    wct = build_lp_oracle([f, f, h], 3)
    assert wct.tensor.value_at((2, 2, 2)) == -3


def test_lp_oracle_agrees_with_2d_construction():
    rng = random.Random(19)
    for _ in range(8):
        f = pad_to(DegreeSequence.of(random_partition(rng, rng.randint(0, 9), 3)), 3)
        g = pad_to(DegreeSequence.of(random_partition(rng, rng.randint(0, 9), 3)), 3)
        b = Fraction(rng.randint(1, 4))
        assert build_lp_oracle([f, g], b).tensor.entries == \
            build_finite_b_2d(f, g, b).tensor.entries


def test_lp_oracle_zero_sequences():
    z = DegreeSequence.of([0, 0])
    wct = build_lp_oracle([z, z], 1)
    assert wct.tensor.entries == {}


def test_lp_oracle_budget():
    f = pad_to(DegreeSequence.of([1]), 9)
    with pytest.raises(BudgetError):
        build_lp_oracle([f, f], 1, cell_budget=64)


def test_contract_recovers_marginals():
    wct = build_greedy_infinite_b([F631, G4321])
    row = contract(wct, {1: (1, 1, 1, 1)})
    assert row == (6, 3, 1)
    col = contract(wct, {0: (1, 1, 1)})
    assert col == (4, 3, 2, 1)


def test_contract_with_ones_recovers_target_sequence():
    rng = random.Random(23)
    for _ in range(20):
        total = rng.randint(0, 14)
        d = rng.randint(2, 3)
        seqs = [pad_to(DegreeSequence.of(random_partition(rng, total, 5)), 5) for _ in range(d)]
        wct = build_greedy_infinite_b(seqs)
        for target in range(d):
            ones = {a: (Fraction(1),) * 5 for a in range(d) if a != target}
            assert contract(wct, ones) == seqs[target].padded()


def test_contract_zero_tensor():
    from cardbound.tensor import SparseTensor

    wct = build_greedy_infinite_b([DegreeSequence.of([0, 0]), DegreeSequence.of([0, 0])])
    assert contract(wct, {1: (0, 0)}) == (0, 0)
    assert isinstance(wct.tensor, SparseTensor)


def test_contract_input_validation():
    wct = build_greedy_infinite_b([F631, G4321])
    with pytest.raises(ShapeError):
        contract(wct, {1: (1, 1)})
    with pytest.raises(SortError):
        contract(wct, {1: (1, 2, 1, 1)})
    with pytest.raises(SortError):
        contract(wct, {1: (1, 1, -1, -1)})
    with pytest.raises(ShapeError):
        contract(wct, {0: (1, 1, 1), 1: (1, 1, 1, 1)})


def test_contract_output_sorted_nonnegative():
    rng = random.Random(29)
    for _ in range(60):
        total = rng.randint(0, 12)
        d = rng.randint(2, 3)
        n = rng.randint(1, 4)
        seqs = [pad_to(DegreeSequence.of(random_partition(rng, total, n)), n) for _ in range(d)]
        if rng.random() < 0.5 or d != 2:
            wct = build_greedy_infinite_b(seqs)
        else:
            wct = build_finite_b_2d(seqs[0], seqs[1], Fraction(rng.randint(1, 4)))
        target = rng.randrange(d)
        vectors = {}
        for a in range(d):
            if a == target:
                continue
            vals = sorted((rng.randint(0, 6) for _ in range(n)), reverse=True)
            vectors[a] = tuple(Fraction(v) for v in vals)
        out = contract(wct, vectors)
        assert all(v >= 0 for v in out)
        assert all(out[i] >= out[i + 1] for i in range(len(out) - 1))


def test_one_zero_vector_dominance_over_consistent_tensors():
    """Any consistent tensor, contracted with one-zero vectors in every
    dimension, stays below the worst-case tensor: prefix sums of a consistent
    tensor never exceed the value tensor."""
    rng = random.Random(31)
    for trial in range(25):
        total = rng.randint(1, 12)
        d = rng.randint(2, 3)
        n = rng.randint(1, 4)
        seqs = [pad_to(DegreeSequence.of(random_partition(rng, total, n)), n) for _ in range(d)]
        inst = generate_consistent_instance({"r": (seqs, INF)}, seed=trial)["r"]
        m_tensor = instance_tensor(inst, [n] * d)
        assert check_consistent(m_tensor, seqs, INF).ok
        wct = build_greedy_infinite_b(seqs)
        for box in itertools.product(range(n + 1), repeat=d):
            assert m_tensor.prefix_sum(box) <= wct.tensor.prefix_sum(box)
