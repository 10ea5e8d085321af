"""Macdonald P/Q, skew pieces, and the difference-operator eigenrelations."""

import pytest

from macfock.errors import NotSymmetric
from macfock.macdonald import (DifferenceOperatorSpec, apply_difference_operator,
                               check_partial_fraction_identity,
                               difference_eigenvalue, eigencheck_difference,
                               macdonald_P, macdonald_Q, macdonald_norm,
                               skew_PQ, variable_ring)
from macfock.partitions import (EQUAL, LESS_EQ, Partition, dominance_leq,
                                enumerate_partitions)
from macfock.scalars import ONE, Q, T, ZERO, qt
from macfock.symfunc import (SymFunc, from_s, inner_product, multiply,
                             reduce_to_variables, to_m)


def test_triangular_with_unit_leading_term():
    for d in range(6):
        for lam in enumerate_partitions(d):
            expansion = to_m(macdonald_P(lam))
            assert expansion[lam] == ONE
            for mu in expansion:
                assert dominance_leq(mu, lam) in (EQUAL, LESS_EQ)


def test_orthogonality_P_against_Q():
    for d in range(5):
        basis = enumerate_partitions(d)
        for lam in basis:
            for mu in basis:
                got = inner_product(macdonald_P(lam), macdonald_Q(mu))
                assert got == (ONE if lam == mu else ZERO)


def test_first_norms():
    assert macdonald_norm(Partition((1,))) == (ONE - Q) / (ONE - T)
    # <P_2, P_2> = (1-q)(1-q^2)/((1-t)(1-qt))
    want = ((ONE - Q) * (ONE - Q * Q)) / ((ONE - T) * (ONE - Q * T))
    assert macdonald_norm(Partition((2,))) == want


def test_P2_coefficient():
    got = to_m(macdonald_P(Partition((2,))))[Partition((1, 1))]
    assert got == (ONE + Q) * (ONE - T) / (ONE - Q * T)


def test_schur_degeneration_at_q_equals_t():
    for d in range(6):
        for lam in enumerate_partitions(d):
            deg = {mu: c.substitute(q_to=(0, 1))
                   for mu, c in to_m(macdonald_P(lam)).items()}
            want = to_m(from_s(lam))
            assert deg == want


def test_skew_reduces_to_straight_at_empty_mu():
    empty = Partition(())
    for lam in enumerate_partitions(3):
        assert skew_PQ("P", lam, empty) == macdonald_P(lam)
        assert skew_PQ("Q", lam, empty) == macdonald_Q(lam)


def test_skew_vanishes_without_containment():
    assert skew_PQ("P", (1, 1), (2,)).is_zero()
    assert skew_PQ("Q", (2,), (1, 1, 1)).is_zero()


def test_skew_adjoint_to_multiplication():
    # <Q_{lam/mu}, f> = <Q_lam, P_mu * f>
    tests = [((2,), (1,)), ((2, 1), (1,)), ((2, 1), (1, 1)), ((3,), (1,))]
    for lam, mu in tests:
        lam, mu = Partition(lam), Partition(mu)
        d = lam.weight() - mu.weight()
        for nu in enumerate_partitions(d):
            f = SymFunc.p(nu)
            lhs = inner_product(skew_PQ("Q", lam, mu), f)
            rhs = inner_product(macdonald_Q(lam),
                                multiply(macdonald_P(mu), f))
            assert lhs == rhs


def test_first_difference_eigenvalue():
    # family D, r=1, two variables: e_1 of {q^{lam_i} t^{n-i}}
    assert difference_eigenvalue("D", 1, Partition((1,)), 2) == Q * T + ONE
    assert difference_eigenvalue("D", 2, Partition((1,)), 2) == Q * T


def test_eigenchecks_across_families():
    for lam in [Partition((1,)), Partition((2,)), Partition((1, 1)),
                Partition((2, 1))]:
        n = max(2, lam.length())
        for family, rmax in (("D", 2), ("E", 2), ("H", 1), ("G", 1)):
            for r in range(1, rmax + 1):
                if family == "D" and r > n:
                    continue
                report = eigencheck_difference(lam, n, family, r)
                assert report, (lam, family, r, report)


def test_shifted_family_at_zero_offset():
    lam, n = Partition((2,)), 2
    report = eigencheck_difference(lam, n, "H_mu", 1, mu=(0, 0))
    assert report


def test_operator_spec_validation():
    with pytest.raises(ValueError):
        DifferenceOperatorSpec("D", 3, 2)
    with pytest.raises(ValueError):
        DifferenceOperatorSpec("X", 1, 2)
    with pytest.raises(ValueError):
        DifferenceOperatorSpec("E", 1, 2, mu=(0, 0))
    with pytest.raises(ValueError):
        eigencheck_difference(Partition((1, 1, 1)), 2, "D", 1)
    with pytest.raises(ValueError):
        difference_eigenvalue("H_mu", 1, Partition((1,)), 2, mu=(1, 0))


def test_operator_rejects_asymmetric_input():
    ring_ = variable_ring(2)
    x1 = ring_.gen("x1")
    with pytest.raises(NotSymmetric):
        apply_difference_operator(DifferenceOperatorSpec("D", 1, 2), x1)


def test_difference_operator_on_constants():
    # eigenvalue on the empty partition: operator applied to 1
    ring_ = variable_ring(2)
    one = ring_.one()
    for family in ("D", "E", "H", "G"):
        image = apply_difference_operator(
            DifferenceOperatorSpec(family, 1, 2), one)
        ev = difference_eigenvalue(family, 1, Partition(()), 2)
        assert image == one.map_coeffs(lambda c: c * ev)


def test_partial_fraction_collapse():
    for nu in [(1,), (2,), (1, 1), (2, 1), (3, 2), (1, 1, 1), (2, 1, 1),
               (0, 1), (2, 0, 1)]:
        assert check_partial_fraction_identity(nu)
