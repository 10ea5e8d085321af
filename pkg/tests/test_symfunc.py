"""Symmetric functions over the (q,t) field: bases, pairing, specialization."""

import itertools
from fractions import Fraction

from macfock.partitions import Partition, enumerate_partitions, partitions_up_to
from macfock.scalars import ONE, Q, T, ZERO, PolyRing, RatFunc, qt
from macfock.symfunc import (SymFunc, coproduct, from_e, from_g, from_h,
                             from_m, from_s, inner_product, multiply,
                             newton_e, newton_g, newton_h,
                             principal_powersum, reduce_to_variables,
                             specialize, specialize_principal, to_m)


def test_symfunc_algebra():
    p1 = SymFunc.p(Partition((1,)))
    p2 = SymFunc.p(Partition((2,)))
    assert (p1 * p1).coefficient(Partition((1, 1))) == ONE
    assert p1 * p2 == p2 * p1
    assert (p1 + p2) - p2 == p1
    assert SymFunc.one().degree() == 0
    assert (p1 * p2).degree() == 3
    assert (p1 - p1).is_zero()


def test_m_basis_round_trip():
    for d in range(7):
        for lam in enumerate_partitions(d):
            back = to_m(from_m(lam))
            assert back == {lam: ONE}


def test_monomial_expansion_of_power_sums():
    # p_2 = m_2 - is wrong; p_2 = m_(2)... check p_(1,1) = m_(2) + 2 m_(1,1)
    f = SymFunc.p(Partition((1, 1)))
    assert to_m(f) == {Partition((2,)): ONE * 1,
                       Partition((1, 1)): RatFunc(2)}
    assert to_m(SymFunc.p(Partition((2,)))) == {Partition((2,)): ONE}


def test_pairing_orthogonality_of_power_sums():
    for d in range(6):
        for lam in enumerate_partitions(d):
            for mu in enumerate_partitions(d):
                got = inner_product(SymFunc.p(lam), SymFunc.p(mu))
                assert got == (lam.z_qt() if lam == mu else ZERO)
    # different weights never pair
    assert inner_product(SymFunc.p(Partition((2,))),
                         SymFunc.p(Partition((1,)))) == ZERO


def test_pairing_symmetry():
    fs = [from_m(Partition((2, 1))), from_e(3), from_h((2, 1)), from_g(3)]
    for f in fs:
        for g in fs:
            assert inner_product(f, g) == inner_product(g, f)


def test_hall_degeneration_makes_schur_orthonormal():
    # at q = t the deformed pairing is the Hall pairing
    for d in range(6):
        for lam in enumerate_partitions(d):
            for mu in enumerate_partitions(d):
                c = inner_product(from_s(lam), from_s(mu))
                at_qt = c.substitute(q_to=(0, 1))
                assert at_qt == (ONE if lam == mu else ZERO)


def _finite_ring(n, degree):
    names = tuple(f"x{i}" for i in range(1, n + 1))
    return PolyRing(names, degree=degree), names


def test_e_h_against_explicit_monomials():
    ring, names = _finite_ring(3, 4)
    gens = [ring.gen(v) for v in names]
    for r in range(1, 4):
        e_direct = ring.zero()
        for combo in itertools.combinations(gens, r):
            term = ring.one()
            for g in combo:
                term = term * g
            e_direct = e_direct + term
        h_direct = ring.zero()
        for combo in itertools.combinations_with_replacement(gens, r):
            term = ring.one()
            for g in combo:
                term = term * g
            h_direct = h_direct + term
        assert reduce_to_variables(from_e(r), ring, names) == e_direct
        assert reduce_to_variables(from_h(r), ring, names) == h_direct


def test_g_against_its_generating_product():
    # g_r is the u^r coefficient of prod_i (t x_i u; q)oo / (x_i u; q)oo,
    # i.e. of exp( sum_n (1-t^n)/(1-q^n) p_n(x) u^n / n )
    n_vars, order = 2, 3
    ring, names = _finite_ring(n_vars, order)
    uring = PolyRing(names + ("u",), degree=order,
                     ungraded=("u",), caps={"u": order})
    log = uring.zero()
    for k in range(1, order + 1):
        c = (ONE - qt(1, 0, k)) / (ONE - qt(1, k, 0)) * RatFunc(Fraction(1, k))
        log = log + uring.power_sum(names, k) * uring.gen("u", power=k, coeff=c)
    series = uring.one()
    term = uring.one()
    for k in range(1, order + 1):
        term = term * log * RatFunc(Fraction(1, k))
        series = series + term
    for r in range(1, order + 1):
        want = {e[:-1]: c for e, c in series.terms.items() if e[-1] == r}
        got_poly = reduce_to_variables(from_g(r), ring, names)
        assert got_poly.terms == want


def test_schur_against_classical_values():
    # s_(2,1) = m_(2,1) + 2 m_(1,1,1); s_(n) = h_n; s_(1^n) = e_n
    assert to_m(from_s(Partition((2, 1)))) == {
        Partition((2, 1)): ONE, Partition((1, 1, 1)): RatFunc(2)}
    for n in range(1, 5):
        assert from_s(Partition((n,))) == from_h(n)
        assert from_s(Partition((1,) * n)) == from_e(n)


def test_coproduct_is_multiplicative_on_p():
    # Delta(p_lam) = prod (p_k x 1 + 1 x p_k)
    lam = Partition((2, 1, 1))
    delta = coproduct(SymFunc.p(lam))
    want = {}
    for left_parts in _subsets_with_multiplicity(lam):
        right = list(lam)
        mult = 1
        taken = list(left_parts)
        for v in taken:
            right.remove(v)
        key = (Partition(sorted(taken, reverse=True)),
               Partition(sorted(right, reverse=True)))
        want[key] = want.get(key, 0) + 1
    assert set(delta) == set(want)
    for key, count in want.items():
        assert delta[key] == RatFunc(count)


def _subsets_with_multiplicity(lam):
    idx = range(len(lam))
    for r in range(len(lam) + 1):
        for combo in itertools.combinations(idx, r):
            yield tuple(lam[i] for i in combo)


def test_principal_powersum_matches_truncated_sum():
    # against a long explicit geometric sum: the closed form's first terms
    lam = Partition((3, 1))
    n, k = 2, 2
    closed = principal_powersum(lam, n, k)
    explicit = ZERO
    terms = 40
    for i in range(1, len(lam) + 1):
        explicit = explicit + qt(1, k * lam.part(i), k * (n - i))
    for i in range(len(lam) + 1, terms + 1):
        explicit = explicit + qt(1, 0, k * (n - i))
    # the difference is exactly the dropped tail t^{k(n-terms)} * t^{-k}/(1-t^{-k})
    tail = qt(1, 0, k * (n - terms - 1)) / (ONE - qt(1, 0, -k))
    assert closed - explicit == tail


def test_specialize_dispatch():
    f = from_h(2)
    lam = Partition((1,))
    direct = specialize_principal(f, lam, 1)
    assert specialize(f, "principal", lam=lam, n=1) == direct
    ring, names = _finite_ring(2, 3)
    assert specialize(f, "finite", ring_=ring, names=names) == \
        reduce_to_variables(f, ring, names)


def test_specialize_principal_is_ring_hom():
    a, b = from_e(2), from_h(1)
    lam, n = Partition((2,)), 2
    left = specialize_principal(multiply(a, b), lam, n)
    right = specialize_principal(a, lam, n) * specialize_principal(b, lam, n)
    assert left == right


def test_newton_recursions_on_numbers():
    # explicit alphabet {2, 5}: p_k = 2^k + 5^k
    pv = [RatFunc(2 ** k + 5 ** k) for k in range(1, 4)]
    es = newton_e(pv, 3)
    assert es[1] == RatFunc(7)
    assert es[2] == RatFunc(10)
    assert es[3] == ZERO
    hs = newton_h(pv, 3)
    # h_2 = e_1^2 - e_2 + ... for two letters: sum of monomials of degree 2
    assert hs[2] == RatFunc(4 + 10 + 25)
    gs = newton_g(pv, 2)
    # g_1 = (1-t)/(1-q) p_1
    assert gs[1] == (ONE - T) / (ONE - Q) * RatFunc(7)
