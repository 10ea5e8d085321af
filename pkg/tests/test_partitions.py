from fractions import Fraction

import pytest

from macfock.partitions import (DIFFERENT_WEIGHT, EQUAL, GREATER_EQ,
                                INCOMPARABLE, LESS_EQ, MayaDiagram, Partition,
                                PartitionTuple, dominance_leq,
                                enumerate_partitions, enumerate_tuples,
                                maya_from_partition, partition_from_maya,
                                partitions_up_to, tuple_dominance_leq,
                                tuples_up_to, zlambda)


def test_partition_basics():
    lam = Partition((4, 2, 2, 1))
    assert lam.weight() == 9
    assert lam.length() == 4
    assert lam.multiplicities() == {4: 1, 2: 2, 1: 1}
    assert lam.part(2) == 2
    assert lam.part(99) == 0
    assert lam.transpose() == Partition((4, 3, 1, 1))
    assert lam.transpose().transpose() == lam
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_enumeration_counts():
    # p(0)..p(6) = 1, 1, 2, 3, 5, 7, 11
    for d, count in enumerate((1, 1, 2, 3, 5, 7, 11)):
        assert len(enumerate_partitions(d)) == count
    assert len(partitions_up_to(4)) == 1 + 1 + 2 + 3 + 5


def test_z_factor_values():
    for text, want in (("", 1), ("1", 1), ("2", 2), ("1,1", 2),
                       ("2,1", 2), ("3,1,1", 6)):
        lam = Partition.from_text(text)
        z, z_qt = zlambda(lam)
        assert z == lam.z_factor() == want
        assert z_qt == lam.z_qt()


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_z_counts_permutations_by_cycle_type():
    # n!/z_lam counts permutations of cycle type lam, so the sum is n!
    for n in range(1, 7):
        assert sum(Fraction(_factorial(n), lam.z_factor())
                   for lam in enumerate_partitions(n)) == _factorial(n)


def test_dominance_poset_properties():
    for n in range(1, 7):
        parts = enumerate_partitions(n)
        for lam in parts:
            assert dominance_leq(lam, lam) == EQUAL
        for mu in parts:
            for lam in parts:
                r = dominance_leq(mu, lam)
                rr = dominance_leq(lam, mu)
                if r == LESS_EQ:
                    assert rr == GREATER_EQ
                elif r == GREATER_EQ:
                    assert rr == LESS_EQ
                elif r == EQUAL:
                    assert mu == lam
                else:
                    assert r == INCOMPARABLE and rr == INCOMPARABLE
        # transitivity of the strict relation
        for a in parts:
            for b in parts:
                if dominance_leq(a, b) != LESS_EQ:
                    continue
                for c in parts:
                    if dominance_leq(b, c) == LESS_EQ:
                        assert dominance_leq(a, c) == LESS_EQ


def test_dominance_reverses_under_transpose():
    for n in range(1, 7):
        parts = enumerate_partitions(n)
        for mu in parts:
            for lam in parts:
                r = dominance_leq(mu, lam)
                rt = dominance_leq(lam.transpose(), mu.transpose())
                assert r == rt


def test_dominance_weight_mismatch():
    assert dominance_leq(Partition((1,)), Partition((2,))) == DIFFERENT_WEIGHT


def test_maya_round_trip():
    for lam in partitions_up_to(8):
        maya = maya_from_partition(lam)
        assert maya.charge() == 0
        assert maya.displacement() == lam.weight()
        assert partition_from_maya(maya) == lam


def test_maya_first_rows():
    # (1) occupies 1/2 and frees -1/2
    maya = maya_from_partition(Partition((1,)))
    assert maya.plus == frozenset({1})
    assert maya.minus == frozenset({-1})


def test_partition_text_round_trip():
    for text in ("", "0", "3", "2,2,1"):
        lam = Partition.from_text(text)
        assert Partition.from_text(lam.render()) == lam


def test_tuple_basics():
    tup = PartitionTuple.from_text("2,1|0|3")
    assert len(tup) == 3
    assert tup.weight() == 6
    assert tup.render() == "2,1|0|3"
    assert PartitionTuple.from_text(tup.render()) == tup


def test_tuple_dominance():
    lower = PartitionTuple.from_text("0|1")
    upper = PartitionTuple.from_text("1|0")
    assert tuple_dominance_leq(lower, upper) == LESS_EQ
    assert tuple_dominance_leq(upper, lower) == GREATER_EQ
    assert tuple_dominance_leq(lower, lower) == EQUAL
    assert tuple_dominance_leq(
        lower, PartitionTuple.from_text("2|0")) == DIFFERENT_WEIGHT
    # refines per-leg dominance at fixed leg weights
    a = PartitionTuple.from_text("1,1|1")
    b = PartitionTuple.from_text("2|1")
    assert tuple_dominance_leq(a, b) == LESS_EQ


def test_tuple_enumeration():
    assert [t.render() for t in enumerate_tuples(2, 1)] == ["0|1", "1|0"]
    assert len(enumerate_tuples(2, 2)) == 5
    assert len(enumerate_tuples(3, 2)) == 9
    assert len(tuples_up_to(2, 2)) == 1 + 2 + 5
    for t in enumerate_tuples(2, 3):
        assert t.weight() == 3 and len(t) == 2
