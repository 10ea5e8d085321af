"""Level-m tensor currents, generalized P/Q, the regularized measure, and
the first-moment identity."""

import itertools

import pytest

from macfock.dim import (TensorFockVector, dim_current_apply, dim_x0_apply,
                         expectation_identity_check, generalized_cauchy_sum,
                         generalized_eigenvalue, generalized_macdonald_P,
                         generalized_macdonald_Q, generalized_measure_weight,
                         leg_eigenvalue, phi_gamma_exchange_coeffs,
                         regularized_expectation)
from macfock.errors import SingularSystem
from macfock.macdonald import macdonald_P, macdonald_Q
from macfock.partitions import (EQUAL, LESS_EQ, Partition, PartitionTuple,
                                enumerate_tuples, partitions_up_to,
                                tuple_dominance_leq)
from macfock.process import Observable, ProcessSpec, correlation_direct
from macfock.scalars import ONE, Q, RatFunc, T, ZERO, qt
from macfock.symfunc import SymFunc, to_m


def _tup(text):
    return PartitionTuple.from_text(text)


def test_vacuum_eigenvalue_counts_legs():
    for m in (1, 2, 3):
        vac = TensorFockVector.vacuum(m)
        assert dim_x0_apply(m, vac) == vac.scale(RatFunc(m))


def test_single_leg_reduces_to_ordinary_operator():
    # at m=1 the current is the plain eta current: P comes back unchanged
    for d in range(4):
        for lam in partitions_up_to(d):
            if lam.weight() != d:
                continue
            tup = PartitionTuple((lam,))
            got = generalized_macdonald_P(tup)
            want = {PartitionTuple((nu,)): c
                    for nu, c in macdonald_P(lam).terms.items()}
            assert got.terms == want
            gotq = generalized_macdonald_Q(tup)
            wantq = {PartitionTuple((nu,)): c
                     for nu, c in macdonald_Q(lam).terms.items()}
            assert gotq.terms == wantq


def test_additive_eigenvalues():
    for m in (1, 2):
        for d in range(3):
            for tup in enumerate_tuples(m, d):
                explicit = ZERO
                for leg in tup:
                    inner = ZERO
                    for i, part in enumerate(leg, start=1):
                        inner = inner + (qt(1, part, 0) - ONE) * qt(1, 0, -i)
                    explicit = explicit + ONE + (T - ONE) * inner
                assert generalized_eigenvalue(tup) == explicit
                assert generalized_eigenvalue(tup) == \
                    sum((leg_eigenvalue(leg) for leg in tup), ZERO)


def test_weight_one_block_is_a_jordan_cell():
    # both weight-1 labels share the eigenvalue; the current is exactly
    # diagonal on the first-slot vector but feeds the second slot across
    ev = generalized_eigenvalue(_tup("1|0"))
    assert ev == generalized_eigenvalue(_tup("0|1"))
    img = dim_x0_apply(2, TensorFockVector.from_p(_tup("1|0")))
    assert img == TensorFockVector.from_p(_tup("1|0"), ev)
    img = dim_x0_apply(2, TensorFockVector.from_p(_tup("0|1")))
    assert img.coefficient(_tup("0|1")) == ev
    assert not img.coefficient(_tup("1|0")).is_zero()


def test_swap_degenerate_labels_have_no_triangular_eigenvector():
    for text in ("1|0", "2|0", "1,1|0"):
        with pytest.raises(SingularSystem) as exc:
            generalized_macdonald_P(_tup(text))
        assert "Jordan" in str(exc.value)


def test_lower_slot_vector_is_exact():
    got = generalized_macdonald_P(_tup("0|1"))
    assert got == TensorFockVector.from_p(_tup("0|1"))


def _tensor_monomial_coords(vec):
    out = {}
    for nu, c in vec.terms.items():
        maps = [to_m(SymFunc.p(leg)) for leg in nu]
        for combo in itertools.product(*(mp.items() for mp in maps)):
            key = PartitionTuple(tuple(x[0] for x in combo))
            cc = c
            for x in combo:
                cc = cc * x[1]
            acc = out.get(key)
            out[key] = cc if acc is None else acc + cc
    return {k: c for k, c in out.items() if not c.is_zero()}


def test_solvable_labels_are_monic_and_triangular():
    solved = 0
    for m, d in ((2, 1), (2, 2)):
        for tup in enumerate_tuples(m, d):
            try:
                vec = generalized_macdonald_P(tup)
            except SingularSystem:
                continue
            solved += 1
            coords = _tensor_monomial_coords(vec)
            assert coords[tup] == ONE
            for other in coords:
                assert tuple_dominance_leq(other, tup) in (EQUAL, LESS_EQ)
    assert solved == 4  # 0|1 plus the three non-colliding weight-2 labels


def test_gram_duals_transpose_the_pole_pattern():
    # the upper member of the colliding pair keeps a finite Gram dual ...
    got = generalized_macdonald_Q(_tup("1|0"))
    want = TensorFockVector.from_p(_tup("1|0"), (T - ONE) / (Q - ONE))
    assert got == want
    # ... while the lower member inherits the pole
    for text in ("0|1", "0|2", "0|1,1"):
        with pytest.raises(SingularSystem) as exc:
            generalized_macdonald_Q(_tup(text))
        assert "pole" in str(exc.value)


def test_duality_of_finite_pairs():
    # <P_mu, Q_lam> = delta through the tensor power-sum pairing
    labels = []
    vecs_P, vecs_Q = {}, {}
    for tup in enumerate_tuples(2, 2):
        try:
            vecs_P[tup] = generalized_macdonald_P(tup)
            vecs_Q[tup] = generalized_macdonald_Q(tup)
            labels.append(tup)
        except SingularSystem:
            continue
    assert labels
    for mu in labels:
        for lam in labels:
            acc = ZERO
            for nu, c in vecs_P[mu].terms.items():
                d = vecs_Q[lam].coefficient(nu)
                if d.is_zero():
                    continue
                w = ONE
                for leg in nu:
                    w = w * leg.z_qt()
                acc = acc + c * d * w
            assert acc == (ONE if mu == lam else ZERO), (mu, lam)


def test_single_leg_measure_reduces_to_macdonald_measure():
    from macfock.process import measure_weight
    spec = ProcessSpec([1], [1], 3)
    for lam in partitions_up_to(3):
        got = generalized_measure_weight(PartitionTuple((lam,)), spec)
        assert got == measure_weight(lam, spec)


def test_colliding_pairs_have_no_individual_weight():
    spec = ProcessSpec([1, 1], [1, 1], 2)
    for text in ("1|0", "0|1"):
        with pytest.raises(SingularSystem):
            generalized_measure_weight(_tup(text), spec)
    # the non-colliding diagonal label evaluates without raising; its P
    # starts at x-degree 2 and its Q at y-degree 2, so at cutoff 2 the
    # product truncates to zero exactly
    w = generalized_measure_weight(_tup("1|1"), spec)
    assert w.is_zero()


def test_generalized_cauchy_sum():
    spec = ProcessSpec([1, 1], [1, 1], 2)
    assert generalized_cauchy_sum(spec) == spec.ring.one()


def test_identity_all_readings_coincide_at_one_leg():
    spec = ProcessSpec([1], [1], 3)
    report = expectation_identity_check(1, spec)
    assert report.equal
    assert report.matching_readings == ("exchange_derived", "level_index",
                                        "leg_index")
    lhs, rhs, equal = report
    assert equal and lhs == rhs


def test_identity_selects_the_exchange_reading_at_two_legs():
    spec = ProcessSpec([1, 1], [1, 1], 2)
    report = expectation_identity_check(2, spec)
    assert report.equal
    assert report.matching_readings == ("exchange_derived",)
    assert report.matches == {"exchange_derived": True,
                              "level_index": False, "leg_index": False}


def test_identity_with_empty_specializations():
    spec = ProcessSpec([0, 0], [0, 0], 2)
    report = expectation_identity_check(2, spec)
    assert report.equal
    two = spec.ring.const(RatFunc(2))
    assert report.lhs == two
    assert report.rhs == two


def test_regularized_expectation_at_one_leg():
    spec = ProcessSpec([1], [1], 3)
    assert regularized_expectation(spec) == \
        correlation_direct([Observable("hatE1")], spec)


def test_exchange_scalar_routes_agree():
    modes, closed = phi_gamma_exchange_coeffs(3)
    assert modes == closed
    assert modes[0] == ONE


def test_tensor_vector_arity_checks():
    with pytest.raises(ValueError):
        dim_x0_apply(2, TensorFockVector.vacuum(3))
    with pytest.raises(TypeError):
        TensorFockVector.vacuum(2) + TensorFockVector.vacuum(3)
    with pytest.raises(ValueError):
        TensorFockVector(2, {PartitionTuple(((1,),)): ONE})
    with pytest.raises(ValueError):
        expectation_identity_check(2, ProcessSpec([1], [1], 2))


def test_current_series_is_windowed():
    v = TensorFockVector.from_p(_tup("1|0"))
    series = dim_current_apply(2, v, 2)
    assert series.slots == 1
    assert series.window == 4
    assert all(len(k) == 1 for k, _ in series.items())
