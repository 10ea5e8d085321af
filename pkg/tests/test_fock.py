"""Boson Fock space, vertex operators, residue functionals, fermions."""

from fractions import Fraction

import pytest

from macfock.errors import NonzeroCharge, WindowTooSmall
from macfock.fock import (ETA, GAMMA_MINUS, GAMMA_PLUS, FockVector,
                          VertexFactor, cauchy_product, fermion_apply,
                          free_field_operator, gamma_apply, heisenberg_apply,
                          kernel_constant_term, maya_state_charge,
                          ope_scalar_series, pairing, residue_D,
                          schur_limit_checks, schur_powersum,
                          schur_powersum_dual, vertex_product_apply)
from macfock.macdonald import macdonald_P, macdonald_Q, skew_PQ
from macfock.partitions import (MayaDiagram, Partition, enumerate_partitions,
                                maya_from_partition)
from macfock.scalars import ONE, Q, PolyRing, RatFunc, qt
from macfock.symfunc import (eigenvalue_e_g, from_g, newton_e, newton_h,
                             reduce_to_variables)


def _central(n):
    return RatFunc(n) * (ONE - qt(1, n, 0)) / (ONE - qt(1, 0, n))


def test_mode_commutator():
    states = [FockVector.vacuum(), FockVector.from_p((1,)),
              FockVector.from_p((2, 1))]
    for v in states:
        for n in (1, 2, 3):
            lhs = heisenberg_apply(n, heisenberg_apply(-n, v)) \
                - heisenberg_apply(-n, heisenberg_apply(n, v))
            assert lhs == v.scale(_central(n))


def test_unequal_modes_commute():
    v = FockVector.from_p((2, 1, 1))
    for n, m in ((1, 2), (1, 3), (2, 3)):
        assert heisenberg_apply(n, heisenberg_apply(-m, v)) == \
            heisenberg_apply(-m, heisenberg_apply(n, v))


def test_modes_adjoint_under_pairing():
    for lam in enumerate_partitions(3):
        for mu in enumerate_partitions(4):
            u, v = FockVector.from_p(lam), FockVector.from_p(mu)
            for n in (1, 2):
                assert pairing(heisenberg_apply(-n, u), v) == \
                    pairing(u, heisenberg_apply(n, v))


def test_eta_on_vacuum():
    series = vertex_product_apply([VertexFactor(ETA, 0)],
                                  FockVector.vacuum(), 3, fock_degree=2)
    assert series.get((0,)) == FockVector.vacuum()
    want1 = FockVector.from_p((1,), (ONE - qt(1, 0, -1)))
    assert series.get((1,)) == want1
    assert series.get((-1,)) is None


def test_gamma_halves_build_cauchy_kernel():
    ring = PolyRing(("x1", "x2", "y1"), degree=4)
    created = gamma_apply(-1, ring, ("x1", "x2"), FockVector.vacuum())
    collapsed = gamma_apply(1, ring, ("y1",), created)
    got = collapsed.vacuum_component()
    assert got == cauchy_product(ring, ("x1", "x2"), ("y1",))


def test_cauchy_kernel_first_coefficient():
    ring = PolyRing(("x", "y"), degree=3)
    pi = cauchy_product(ring, ("x",), ("y",))
    assert pi.coefficient((1, 1)) == (ONE - qt(1, 0, 1)) / (ONE - qt(1, 1, 0))


def test_gamma_matrix_elements_are_skew_functions():
    ring = PolyRing(("x1", "x2"), degree=3)
    names = ("x1", "x2")
    pairs = [((1,), ()), ((2,), (1,)), ((2, 1), (1,)), ((1, 1), (1,)),
             ((3,), (1,)), ((2, 1), (1, 1))]
    for lam, mu in pairs:
        lhs = pairing(FockVector(macdonald_Q(Partition(lam))),
                      gamma_apply(-1, ring, names,
                                  FockVector(macdonald_P(Partition(mu)))))
        assert lhs == reduce_to_variables(skew_PQ("Q", lam, mu), ring, names)
        lhs = pairing(FockVector(macdonald_P(Partition(lam))),
                      gamma_apply(-1, ring, names,
                                  FockVector(macdonald_Q(Partition(mu)))))
        assert lhs == reduce_to_variables(skew_PQ("P", lam, mu), ring, names)


def test_ope_scalar_against_one_variable_g():
    # the Gamma+ Gamma- exchange scalar is the single-variable Cauchy kernel
    order = 4
    modes = ope_scalar_series(GAMMA_PLUS, GAMMA_MINUS, order)
    ring1 = PolyRing(("x",), degree=order)
    for k in range(order + 1):
        want = reduce_to_variables(from_g(k), ring1, ("x",)).coefficient((k,))
        assert modes[k] == want


def test_normal_order_has_no_scalar():
    modes = ope_scalar_series(GAMMA_MINUS, GAMMA_PLUS, 3)
    assert modes[0] == ONE
    assert all(c.is_zero() for c in modes[1:])


def test_window_guard():
    with pytest.raises(WindowTooSmall):
        vertex_product_apply([VertexFactor(ETA, 0)], FockVector.vacuum(),
                             1, fock_degree=2)


def test_residue_functionals_agree_on_one_slot():
    # with a single slot the pair-factor kernel is empty while the 1x1
    # determinant still resums its geometric tail 1/(1-gamma)
    v = FockVector.from_p((1,)) + FockVector.vacuum()
    series = vertex_product_apply([VertexFactor(ETA, 0)], v, 4,
                                  fock_degree=3)
    gamma = qt(1, 0, -1)
    assert kernel_constant_term(gamma, series) == \
        residue_D(1, gamma, series).scale(ONE - gamma)


def test_operator_forms_agree():
    v = FockVector.from_p((1,)) + FockVector.from_p((2,)).scale(Q)
    for family in ("E", "E_inv", "G", "G_inv"):
        for r in (1, 2):
            a = free_field_operator(family, r, "product_kernel", v)
            b = free_field_operator(family, r, "determinant_kernel", v)
            assert a == b, (family, r)


def test_operators_diagonal_on_macdonald_vectors():
    for lam in [Partition((1,)), Partition((2,)), Partition((1, 1))]:
        v = FockVector(macdonald_P(lam))
        for family, kind, inverted in (("E", "e_r", False),
                                       ("G", "g_r", False),
                                       ("E_inv", "e_r", True),
                                       ("G_inv", "g_r", True)):
            got = free_field_operator(family, 1, "determinant_kernel", v)
            ev = eigenvalue_e_g(kind, 1, lam, inverted=inverted)
            assert got == v.scale(ev), (lam, family)


def _state_add(a, b):
    out = dict(a)
    for k, c in b.items():
        acc = out.get(k)
        total = c if acc is None else acc + c
        if total == 0 or (hasattr(total, "is_zero") and total.is_zero()):
            out.pop(k, None)
        else:
            out[k] = total
    return out


def _anticommutator(op1, s1, op2, s2, state):
    return _state_add(fermion_apply(op1, s1, fermion_apply(op2, s2, state)),
                      fermion_apply(op2, s2, fermion_apply(op1, s1, state)))


def test_fermion_anticommutators():
    slots = [Fraction(k, 2) for k in (-5, -3, -1, 1, 3, 5)]
    states = [{maya_from_partition(Partition(())): ONE},
              {maya_from_partition(Partition((2, 1))): ONE}]
    for state in states:
        for s in slots:
            for sp in slots:
                assert _anticommutator("psi", s, "psi", sp, state) == {}
                assert _anticommutator("psi_star", s, "psi_star", sp,
                                       state) == {}
                mixed = _anticommutator("psi", s, "psi_star", sp, state)
                assert mixed == (state if s == sp else {})


def test_fermions_shift_charge():
    vac = maya_from_partition(Partition(()))
    out = fermion_apply("psi", Fraction(1, 2), {vac: ONE})
    assert maya_state_charge(out) == 1
    out = fermion_apply("psi_star", Fraction(-1, 2), {vac: ONE})
    assert maya_state_charge(out) == -1


def test_charge_mixing_is_refused():
    vac = maya_from_partition(Partition(()))
    charged = MayaDiagram(frozenset({1}), frozenset())
    with pytest.raises(NonzeroCharge):
        maya_state_charge({vac: ONE, charged: ONE})


def test_half_integer_slots_enforced():
    with pytest.raises(ValueError):
        fermion_apply("psi", 1, {maya_from_partition(Partition(())): ONE})


def test_principal_alphabet_duality():
    # complete homogeneous on t^{lam-delta} vs elementary on the conjugate
    for lam in [Partition(()), Partition((1,)), Partition((2, 1)),
                Partition((3, 1, 1))]:
        pv = [schur_powersum(lam, k) for k in range(1, 4)]
        dual = [schur_powersum_dual(lam, k) for k in range(1, 4)]
        for r in (1, 2, 3):
            lhs = newton_h(pv, r)[r]
            rhs = RatFunc((-1) ** r) * newton_e(dual, r)[r]
            assert lhs == rhs, (lam, r)


def test_schur_limit_reports():
    assert schur_limit_checks(Partition((2, 1)), 2)
    assert schur_limit_checks(Partition((2,)), 1, operator_degree=2)
    bad = schur_limit_checks(Partition((2,)), 1, operator_degree=3)
    assert not bad
    assert bad.failures


def test_free_field_rejects_unknowns():
    v = FockVector.vacuum()
    with pytest.raises(ValueError):
        free_field_operator("Z", 1, "product_kernel", v)
    with pytest.raises(ValueError):
        free_field_operator("E", 1, "trace", v)
    with pytest.raises(ValueError):
        free_field_operator("E", 0, "product_kernel", v)
