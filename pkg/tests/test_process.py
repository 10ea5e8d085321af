"""Measures, correlation functions, contour formulas, Fredholm determinants."""

import pytest

from macfock.errors import UnsupportedObservable
from macfock.partitions import Partition, partitions_up_to
from macfock.process import (KernelSpec, Observable, ProcessSpec,
                             correlation_direct, correlation_operator,
                             expectation_generating_series, fredholm_det,
                             generating_series, measure_weight,
                             multilevel_formula, observable_value,
                             process_weight, q_whittaker_limit_check,
                             w_cross_coeffs)
from macfock.scalars import ONE, Q, T, qt


def test_measure_sums_to_one():
    spec = ProcessSpec([1], [1], 5)
    total = spec.ring.zero()
    for lam in partitions_up_to(5):
        total = total + measure_weight(lam, spec)
    assert total == spec.ring.one()


def test_chain_weights_sum_to_one():
    spec = ProcessSpec([1, 1], [1, 1], 3)
    total = spec.ring.zero()
    for lam in partitions_up_to(3):
        for mu in partitions_up_to(3):
            total = total + process_weight([lam, mu], spec)
    assert total == spec.ring.one()


def test_first_weight_leading_coefficient():
    spec = ProcessSpec([1], [1], 3)
    w = measure_weight(Partition((1,)), spec)
    assert w.coefficient((1, 1)) == (ONE - T) / (ONE - Q)
    assert w.coefficient((0, 0)).is_zero()


def test_observable_values():
    lam = Partition((2, 1))
    explicit = ONE + (ONE - T) * ((ONE - Q * Q) * qt(1, 0, -1)
                                  + (ONE - Q) * qt(1, 0, -2))
    assert observable_value(Observable("hatE1"), lam) == explicit
    assert observable_value(Observable("unit"), lam) == ONE
    assert observable_value(Observable("unit"), Partition(())) == ONE


def test_generating_series_cross_route():
    # product-form expansion against the Newton-recursion values
    for fam in ("E_obs", "E_prime_obs", "G_obs", "G_prime_obs"):
        for lam in (Partition(()), Partition((1,)), Partition((2, 1))):
            gen = generating_series(fam, lam, 3)
            assert gen[0] == ONE
            for r in range(1, 4):
                assert gen[r] == observable_value(Observable(fam, r), lam), \
                    (fam, lam, r)


def test_observable_validation():
    with pytest.raises(UnsupportedObservable):
        Observable("F_obs", 1)
    with pytest.raises(ValueError):
        Observable("E_obs")
    with pytest.raises(ValueError):
        Observable("unit", 1)


def test_cross_level_ratio_expansion():
    coeffs = w_cross_coeffs("E_obs", 2)
    assert coeffs[0] == ONE
    assert coeffs[1] == Q + T.inverse() - ONE - Q * T.inverse()


def test_cross_level_ratios_swap_under_inversion():
    inv = dict(q_to=(-1, 0), t_to=(0, -1))
    for plain, primed in (("E_obs", "E_prime_obs"), ("G_obs", "G_prime_obs")):
        a = w_cross_coeffs(plain, 3)
        b = w_cross_coeffs(primed, 3)
        for k in range(4):
            assert b[k] == a[k].substitute(**inv)


def test_correlation_routes_agree_one_level():
    spec = ProcessSpec([1], [1], 3)
    for ob in (Observable("hatE1"), Observable("E_obs", 1),
               Observable("G_prime_obs", 1)):
        direct = correlation_direct([ob], spec)
        operator = correlation_operator([ob], spec)
        assert direct == operator, ob


def test_correlation_routes_agree_two_levels():
    spec = ProcessSpec([1, 1], [1, 1], 2)
    pairs = [(Observable("unit"), Observable("hatE1")),
             (Observable("E_obs", 1), Observable("E_obs", 1))]
    for pair in pairs:
        direct = correlation_direct(list(pair), spec)
        operator = correlation_operator(list(pair), spec)
        assert direct == operator, pair


def test_correlation_cutoff_is_saturated():
    spec = ProcessSpec([1], [1], 3)
    ob = Observable("E_obs", 1)
    assert correlation_direct([ob], spec) == \
        correlation_direct([ob], spec, cutoff=5)


def test_contour_formula_one_level():
    spec = ProcessSpec([1], [1], 3)
    for ob in (Observable("E_obs", 1), Observable("G_obs", 1),
               Observable("E_prime_obs", 2)):
        assert multilevel_formula([ob], spec) == \
            correlation_direct([ob], spec), ob


def test_contour_formula_two_levels():
    spec = ProcessSpec([1, 1], [1, 1], 2)
    obs = [Observable("E_obs", 1), Observable("E_obs", 1)]
    assert multilevel_formula(obs, spec) == correlation_direct(obs, spec)


def test_contour_formula_needs_one_ranked_family():
    spec = ProcessSpec([1, 1], [1, 1], 2)
    with pytest.raises(UnsupportedObservable):
        multilevel_formula([Observable("E_obs", 1),
                            Observable("G_obs", 1)], spec)
    with pytest.raises(UnsupportedObservable):
        multilevel_formula([Observable("hatE1"),
                            Observable("hatE1")], spec)


def test_fredholm_matches_direct_expectations():
    spec = ProcessSpec([1], [1], 2)
    table = {"KE": "E_obs", "KEprime": "E_prime_obs",
             "KG": "G_obs", "KGprime": "G_prime_obs"}
    for variant, family in table.items():
        det = fredholm_det(KernelSpec(variant), 2, spec)
        direct = expectation_generating_series(family, 2, spec)
        assert det == direct, variant


def test_first_kernel_forgets_q():
    spec = ProcessSpec([1], [1], 3)
    det = fredholm_det(KernelSpec("KE"), 2, spec)
    uidx = len(det.ring.vars) - 1
    for exps, c in det.terms.items():
        if exps[uidx] in (1, 2):
            assert "q" not in c.render(), (exps, c.render())


def test_whittaker_degeneration():
    report = q_whittaker_limit_check(2, ProcessSpec([1], [1], 3))
    assert report
    assert report.failures == []


def test_kernel_validation():
    with pytest.raises(ValueError):
        KernelSpec("KX")
    spec = ProcessSpec([1], [1], 2)
    with pytest.raises(ValueError):
        fredholm_det(KernelSpec("KE", x_count=2), 2, spec)
    with pytest.raises(ValueError):
        fredholm_det(KernelSpec("KE"), 2, ProcessSpec([1, 1], [1, 1], 2))


def test_spec_validation():
    with pytest.raises(ValueError):
        ProcessSpec([], [], 3)
    with pytest.raises(ValueError):
        ProcessSpec([1, 1], [1], 3)
    with pytest.raises(ValueError):
        ProcessSpec([-1], [1], 3)
    spec = ProcessSpec([1, 1], [1, 1], 2)
    with pytest.raises(ValueError):
        measure_weight(Partition((1,)), spec)
    with pytest.raises(ValueError):
        process_weight([Partition((1,))], spec)
    with pytest.raises(ValueError):
        correlation_direct([Observable("unit")], spec)


def test_empty_alphabets_concentrate_on_empty_partition():
    spec = ProcessSpec([0], [0], 3)
    assert measure_weight(Partition(()), spec) == spec.ring.one()
    assert measure_weight(Partition((1,)), spec).is_zero()
