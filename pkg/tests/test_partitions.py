import random

import pytest

from confcohom.partitions import (
    JoinClosure,
    PartitionError,
    SetPartition,
    UpSet,
    act,
    atoms,
    bell_number,
    cycle_type_representative,
    enumerate_partitions,
    join,
    join_closure,
    leq,
    lower_interval,
    meet,
    named_upset,
    perm_from_cycles,
)


def P(n, *blocks):
    return SetPartition.from_blocks(n, blocks)


def random_partition(rng, n):
    rgs = [0]
    top = 0
    for _ in range(n - 1):
        x = rng.randint(0, top + 1)
        rgs.append(x)
        top = max(top, x)
    return SetPartition(rgs)


def test_rgs_validation():
    with pytest.raises(PartitionError):
        SetPartition([1, 0])
    with pytest.raises(PartitionError):
        SetPartition([0, 2])
    with pytest.raises(PartitionError):
        SetPartition.from_blocks(3, [[1, 2]])
    with pytest.raises(PartitionError):
        SetPartition.from_blocks(2, [[1], [1, 2]])


def test_blocks_round_trip():
    p = P(4, [3, 1], [2], [4])
    assert p.blocks() == ((1, 3), (2,), (4,))
    assert SetPartition.from_json(p.to_json()) == p


def test_join_examples():
    assert join(P(3, [1, 2], [3]), P(3, [1, 3], [2])) == P(3, [1, 2, 3])
    x = P(4, [1, 3], [2, 4])
    assert join(SetPartition.bottom(4), x) == x
    assert join(P(4, [1, 2], [3], [4]), P(4, [3, 4], [1], [2])) == P(4, [1, 2], [3, 4])


def test_meet_examples():
    x = P(4, [1, 3], [2, 4])
    assert meet(SetPartition.top(4), x) == x
    assert meet(P(4, [1, 2], [3, 4]), P(4, [1, 3], [2, 4])) == SetPartition.bottom(4)
    assert meet(P(4, [1, 2, 3], [4]), P(4, [1, 2], [3, 4])) == P(4, [1, 2], [3], [4])


def test_counts():
    assert len(enumerate_partitions(3)) == 5
    assert len(enumerate_partitions(5)) == 52
    assert len(atoms(4)) == 6
    assert [bell_number(n) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]
    assert len(enumerate_partitions(7, max_n=7)) == bell_number(7)


def test_bound():
    with pytest.raises(PartitionError):
        enumerate_partitions(10)
    assert len(enumerate_partitions(3, max_n=3)) == 5


def test_lattice_axioms_random():
    rng = random.Random(17)
    for n in (2, 3, 5, 7):
        parts = [random_partition(rng, n) for _ in range(8)]
        for a in parts:
            assert join(a, a) == a and meet(a, a) == a
            for b in parts:
                assert join(a, b) == join(b, a)
                assert meet(a, b) == meet(b, a)
                assert join(a, meet(a, b)) == a  # absorption
                assert meet(a, join(a, b)) == a
                assert leq(a, b) == (join(a, b) == b) == (meet(a, b) == a)
                for c in parts:
                    assert join(join(a, b), c) == join(a, join(b, c))
                    assert meet(meet(a, b), c) == meet(a, meet(b, c))


def test_action():
    swap = perm_from_cycles(3, [(1, 2)])
    assert act(swap, P(3, [1, 3], [2])) == P(3, [2, 3], [1])
    rng = random.Random(23)
    perm = perm_from_cycles(5, [(1, 4, 2), (3, 5)])
    ident = tuple(range(1, 6))
    for _ in range(10):
        a, b = random_partition(rng, 5), random_partition(rng, 5)
        assert act(perm, join(a, b)) == join(act(perm, a), act(perm, b))
        assert act(ident, a) == a
    inv = tuple(sorted(range(1, 6), key=lambda i: perm[i - 1]))
    for _ in range(5):
        a = random_partition(rng, 5)
        assert act(inv, act(perm, a)) == a


def test_upset_members():
    full = named_upset("full", 3)
    assert len(full.generators) == 3
    members = full.members()
    assert len(members) == 4  # everything except bottom
    assert SetPartition.bottom(3) not in full

    ke = named_upset("k_equals", 4, 3)
    assert len(ke.generators) == 4
    assert len(ke.members()) == 5  # four one-3-block partitions and the top

    single = UpSet(2, [SetPartition.top(2)])
    assert single.members() == [SetPartition.top(2)]
    assert named_upset("k_equals", 5, 5).generators == (SetPartition.top(5),)
    assert named_upset("full", 2).generators == (SetPartition.top(2),)


def test_upset_membership_matches_minimal_elements():
    rng = random.Random(31)
    for n in (3, 4, 5):
        gens = [random_partition(rng, n) for _ in range(3)]
        upset = UpSet(n, gens)
        mins = upset.minimal_elements()
        # antichain
        assert all(not (a != b and leq(a, b)) for a in mins for b in mins)
        for p in upset.members():
            assert any(leq(g, p) for g in mins)


def test_named_upset_errors():
    with pytest.raises(PartitionError):
        named_upset("k_equals", 2, 3)
    with pytest.raises(PartitionError):
        named_upset("k_equals", 4, 1)


def test_join_closure_full_is_whole_lattice():
    for n in (2, 3, 4, 5):
        closure = join_closure(named_upset("full", n), with_bottom=True)
        assert len(closure) == bell_number(n)


def test_join_closure_k_equals():
    # blocks all singleton or of size >= k
    for n, k in ((4, 3), (5, 3), (6, 4)):
        closure = join_closure(named_upset("k_equals", n, k), with_bottom=True)
        expected = [
            p
            for p in enumerate_partitions(n)
            if all(s == 1 or s >= k for s in p.block_sizes())
        ]
        assert list(closure.elements) == sorted(expected, key=lambda q: q.rgs)
    assert len(join_closure(named_upset("k_equals", 4, 3), with_bottom=True)) == 6


def test_lower_interval():
    everything = enumerate_partitions(4)
    top = SetPartition.top(4)
    assert lower_interval(everything, top) == everything
    closure = join_closure(named_upset("k_equals", 6, 3), with_bottom=True)
    t = P(6, [1, 2, 3], [4, 5, 6])
    below = lower_interval(closure.elements, t)
    # interval below a (3,3) partition: product of two copies of the
    # 2-element poset {bottom, block}, so 4 elements
    assert len(below) == 4


def test_empty_upset():
    u = UpSet(3, [])
    assert u.members() == []
    assert join_closure(u, with_bottom=True).elements == (SetPartition.bottom(3),)


def test_cycle_type_representative():
    rep = cycle_type_representative(5, (3, 2))
    assert rep == (2, 3, 1, 5, 4)
    with pytest.raises(PartitionError):
        cycle_type_representative(5, (2, 3))
