"""Macdonald symmetric functions and the difference operators diagonal on them.

The P-basis is built by Gram-Schmidt orthogonalization of the monomial
symmetric functions under the (q,t) inner product, running along the
canonical linear extension of dominance.  The build then *re-verifies*
orthogonality against every earlier partition of the same weight and
strict-dominance triangularity of the m-expansion, so a cached P_lambda
is a certificate rather than a hope.

The operator half implements, on symmetric polynomials in n variables:

* family ``D`` -- the subset-sum shift operators of order r <= n;
* family ``E`` -- the stabilized combination of D_0..D_r whose eigenvalue
  on P_lambda is e_r at the infinite alphabet q^lambda t^{-delta};
* family ``H`` -- the composition-sum operators with eigenvalue g_r at
  the finite alphabet;
* family ``G`` -- the stabilized combination of H_0..H_r (eigenvalue g_r
  at the infinite alphabet);
* family ``H_mu`` -- the inverse-parameter generalization of H carrying
  an integer shift vector mu.

Every summand's rational prefactor is kept as a bag of linear factors
x_a - c*x_b; the summands are combined over the common denominator and
the result is divided out by exact synthetic division.  Nothing is ever
evaluated at a removable singularity, and a nonzero remainder raises
instead of silently truncating.
"""

import itertools
import math
import threading

from .errors import (ArityMismatch, NonPolynomialResult, NotSymmetric,
                     SingularGram)
from .partitions import LESS_EQ, Partition, dominance_leq, enumerate_partitions
from .scalars import ONE, PolyRing, Q, RatFunc, T, ZERO, q_pochhammer, qt
from .symfunc import (SymFunc, coproduct, eigenvalue_e_g, elementary_symmetric,
                      from_m, inner_product, newton_g, reduce_to_variables,
                      to_m)


# ---------------------------------------------------------------------------
# the orthogonal basis
# ---------------------------------------------------------------------------

class MacdonaldBasisCache:
    """Memo table of P_lambda and the norms <P_lambda, P_lambda>.

    Filling is idempotent and deterministic, so concurrent use only ever
    costs a duplicated computation, never an inconsistent value.
    """

    def __init__(self):
        self._by_degree = {}
        self._lock = threading.Lock()

    def degree_data(self, d):
        """(ordered partition list, {lam: P_lam}, {lam: norm}) for weight d."""
        with self._lock:
            data = self._by_degree.get(d)
            if data is None:
                data = self._build(d)
                self._by_degree[d] = data
        return data

    def P(self, lam):
        lam = Partition(lam)
        _, ps, _ = self.degree_data(lam.weight())
        return ps[lam]

    def Q(self, lam):
        lam = Partition(lam)
        _, ps, norms = self.degree_data(lam.weight())
        return ps[lam].scale(norms[lam].inverse())

    def norm(self, lam):
        lam = Partition(lam)
        _, _, norms = self.degree_data(lam.weight())
        return norms[lam]

    @staticmethod
    def _build(d):
        parts = enumerate_partitions(d)
        ps, norms = {}, {}
        for k, lam in enumerate(parts):
            f = from_m(lam)
            for mu in parts[:k]:
                c = inner_product(f, ps[mu])
                if not c.is_zero():
                    f = f - ps[mu].scale(c / norms[mu])
            nrm = inner_product(f, f)
            if nrm.is_zero():
                raise SingularGram(f"vanishing norm at {lam!r}")
            ps[lam], norms[lam] = f, nrm
        # Orthogonality was arranged pairwise; certify it globally, and
        # certify that the m-expansion only reaches below lam in dominance.
        for k, lam in enumerate(parts):
            for mu in parts[:k]:
                if not inner_product(ps[lam], ps[mu]).is_zero():
                    raise SingularGram(
                        f"orthogonality failure between {lam!r} and {mu!r}")
            for mu, c in to_m(ps[lam]).items():
                if mu == lam:
                    if c != ONE:
                        raise SingularGram(f"leading coefficient of {lam!r} "
                                           f"is {c!r}, not 1")
                elif dominance_leq(mu, lam) != LESS_EQ:
                    raise SingularGram(
                        f"{lam!r} has m-support at non-dominated {mu!r}")
        return parts, ps, norms


BASIS = MacdonaldBasisCache()


def macdonald_P(lam):
    """P_lambda as a SymFunc (power-sum basis, RatFunc coefficients)."""
    return BASIS.P(lam)


def macdonald_Q(lam):
    """Q_lambda = P_lambda / <P_lambda, P_lambda>."""
    return BASIS.Q(lam)


def macdonald_norm(lam):
    """The squared norm <P_lambda, P_lambda> under the (q,t) pairing."""
    return BASIS.norm(lam)


def skew_PQ(kind, lam, mu):
    """Skew function P_{lam/mu} or Q_{lam/mu} via the coproduct.

    Extracted as (id (x) <dual_mu, .>) applied to the coproduct, where the
    dual of P is Q and vice versa.  Zero when mu is not contained in lam.
    """
    if kind not in ("P", "Q"):
        raise ValueError(f"kind must be 'P' or 'Q', got {kind!r}")
    lam, mu = Partition(lam), Partition(mu)
    if not lam.contains(mu):
        return SymFunc.zero()
    f = macdonald_P(lam) if kind == "P" else macdonald_Q(lam)
    dual = macdonald_Q(mu) if kind == "P" else macdonald_P(mu)
    target = mu.weight()
    out = {}
    for (left, right), c in coproduct(f).items():
        if right.weight() != target:
            continue
        pairing = inner_product(SymFunc.p(right), dual)
        if pairing.is_zero():
            continue
        add = c * pairing
        acc = out.get(left)
        out[left] = add if acc is None else acc + add
    return SymFunc(out)


# ---------------------------------------------------------------------------
# difference operators
# ---------------------------------------------------------------------------

class DifferenceOperatorSpec:
    """Selects an operator: family, order r, variable count n.

    ``mu`` is the integer shift vector of the ``H_mu`` family (length n);
    the other families reject it.
    """

    __slots__ = ("family", "r", "n", "mu")

    def __init__(self, family, r, n, mu=None):
        if family not in ("D", "E", "H", "G", "H_mu"):
            raise ValueError(f"unknown operator family {family!r}")
        r, n = int(r), int(n)
        if r < 0 or n < 1:
            raise ValueError("need r >= 0 and n >= 1")
        if family == "D" and r > n:
            raise ValueError(f"family D needs r <= n, got r={r} > n={n}")
        if family == "H_mu":
            if mu is None:
                raise ArityMismatch("family H_mu needs a shift vector mu")
            mu = tuple(int(v) for v in mu)
            if len(mu) != n:
                raise ArityMismatch(f"mu has length {len(mu)}, "
                                    f"operator acts on {n} variables")
        elif mu is not None:
            raise ValueError("mu is only meaningful for family H_mu")
        self.family = family
        self.r = r
        self.n = n
        self.mu = mu

    def __repr__(self):
        tail = f", mu={self.mu}" if self.mu is not None else ""
        return f"DifferenceOperatorSpec({self.family}, r={self.r}, n={self.n}{tail})"


def variable_ring(n, degree=None):
    """The ring in x1..xn used by the difference operators."""
    return PolyRing(tuple(f"x{i}" for i in range(1, n + 1)), degree=degree)


def apply_difference_operator(spec, f):
    """Apply the selected operator to a symmetric polynomial, exactly."""
    ring_ = f.ring
    if len(ring_.vars) != spec.n:
        raise ArityMismatch(f"operator on {spec.n} variables applied to a "
                            f"polynomial in {len(ring_.vars)}")
    if ring_.degree is not None or ring_.caps:
        raise ValueError("difference operators require an untruncated ring")
    _require_symmetric(f)
    if spec.family == "D":
        return _apply_D(spec.r, f)
    if spec.family == "E":
        return _apply_E(spec.r, f)
    if spec.family == "H":
        return _apply_H(spec.r, f)
    if spec.family == "G":
        return _apply_G(spec.r, f)
    return _apply_H_mu(spec.r, spec.mu, f)


def _require_symmetric(f):
    n = len(f.ring.vars)
    for i in range(n - 1):
        for exps, c in f.terms.items():
            e = list(exps)
            e[i], e[i + 1] = e[i + 1], e[i]
            if f.terms.get(tuple(e)) != c:
                raise NotSymmetric(
                    f"not invariant under swapping {f.ring.vars[i]} "
                    f"and {f.ring.vars[i + 1]}")


def _shift(f, nu, sign):
    """Substitute x_i -> q^{sign*nu_i} x_i (a coefficient-level operation)."""
    out = {}
    for exps, c in f.terms.items():
        e = sum(v * k for v, k in zip(nu, exps))
        out[exps] = c * qt(1, sign * e, 0) if e else c
    return type(f)(f.ring, out)


def _pair_poly(ring_, a, ca, b, cb):
    """The binomial ca*x_a + cb*x_b."""
    return (ring_.gen(ring_.vars[a], coeff=ca)
            + ring_.gen(ring_.vars[b], coeff=cb))


def _bag_add(bag, u, v, c):
    """Record a denominator factor (x_u - c*x_v); return its orientation scalar.

    Factors are stored lead-index-first, so (x_u - c*x_v) with u > v is
    rewritten as -c * (x_v - c^{-1}*x_u) and the -c is handed back to be
    folded into the summand's scalar.
    """
    if u < v:
        key, s = (u, v, c), ONE
    else:
        key, s = (v, u, c.inverse()), -c
    bag[key] = bag.get(key, 0) + 1
    return s


def _key_poly(ring_, key):
    a, b, c = key
    return _pair_poly(ring_, a, ONE, b, -c)


def _divide_linear(poly, key):
    """Exact synthetic division of poly by (x_a - c*x_b)."""
    a, b, c = key
    if not poly.terms:
        return poly
    buckets, top = {}, 0
    for exps, coeff in poly.terms.items():
        k = exps[a]
        e = list(exps)
        e[a] = 0
        buckets.setdefault(k, {})[tuple(e)] = coeff
        if k > top:
            top = k

    def times_root(d):
        out = {}
        for e, co in d.items():
            ee = list(e)
            ee[b] += 1
            out[tuple(ee)] = co * c
        return out

    def merged(d1, d2):
        out = dict(d1)
        for e, co in d2.items():
            s = out.get(e)
            s = co if s is None else s + co
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return out

    quotient = {}
    carry = buckets.get(top, {})
    for k in range(top, 0, -1):
        for e, co in carry.items():
            ee = list(e)
            ee[a] = k - 1
            quotient[tuple(ee)] = co
        carry = merged(buckets.get(k - 1, {}), times_root(carry))
    if carry:
        raise NonPolynomialResult(
            "linear factor does not divide the combined numerator")
    return type(poly)(poly.ring, quotient)


def _combine(ring_, pieces):
    """Sum scalar*num/bag summands over the common denominator, then divide."""
    common = {}
    for _, _, bag in pieces:
        for key, m in bag.items():
            if common.get(key, 0) < m:
                common[key] = m
    total = ring_.zero()
    for scal, num, bag in pieces:
        part = num.map_coeffs(lambda co, w=scal: co * w)
        for key, m in common.items():
            need = m - bag.get(key, 0)
            for _ in range(need):
                part = part * _key_poly(ring_, key)
        total = total + part
    for key, m in common.items():
        for _ in range(m):
            total = _divide_linear(total, key)
    return total


def _compositions(total, slots):
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, slots - 1):
            yield (head,) + rest


def _poch_q(m):
    return q_pochhammer(Q, Q, m)


def _poch_t_inv(m):
    return q_pochhammer(qt(1, 0, -1), qt(1, 0, -1), m)


def _apply_D(r, f):
    ring_ = f.ring
    n = len(ring_.vars)
    pref = qt(1, 0, r * (r - 1) // 2)
    pieces = []
    for subset in itertools.combinations(range(n), r):
        inside = set(subset)
        nu = tuple(1 if i in inside else 0 for i in range(n))
        num = _shift(f, nu, +1)
        scal = pref
        bag = {}
        for i in subset:
            for j in range(n):
                if j in inside:
                    continue
                num = num * _pair_poly(ring_, i, T, j, -ONE)
                scal = scal / _bag_add(bag, i, j, ONE)
        pieces.append((scal, num, bag))
    return _combine(ring_, pieces)


def _apply_E(r, f):
    # Coefficients reproduce the tail of the infinite alphabet t^{-1}, t^{-2}, ...
    # beyond the n live variables, making the eigenvalue n-independent.
    n = len(f.ring.vars)
    acc = f.ring.zero()
    for k in range(r + 1):
        w = qt(1, 0, -n * r - math.comb(r - k + 1, 2)) / _poch_t_inv(r - k)
        img = _apply_D(k, f)
        acc = acc + img.map_coeffs(lambda co, w=w: co * w)
    return acc


def _apply_H(r, f):
    ring_ = f.ring
    n = len(ring_.vars)
    pieces = []
    for nu in _compositions(r, n):
        num = _shift(f, nu, +1)
        scal = ONE
        bag = {}
        for i in range(n):
            for j in range(i + 1, n):
                if nu[i] == nu[j]:
                    if nu[i]:
                        scal = scal * qt(1, nu[i], 0)
                    continue
                num = num * _pair_poly(ring_, i, qt(1, nu[i], 0),
                                       j, -qt(1, nu[j], 0))
                scal = scal / _bag_add(bag, i, j, ONE)
        for i in range(n):
            if nu[i] == 0:
                continue
            for j in range(n):
                if i == j:
                    scal = (scal * q_pochhammer(T, Q, nu[i])
                            / q_pochhammer(Q, Q, nu[i]))
                    continue
                for l in range(nu[i]):
                    num = num * _pair_poly(ring_, j, ONE, i, -qt(1, l, 1))
                for l in range(1, nu[i] + 1):
                    scal = scal / _bag_add(bag, j, i, qt(1, l, 0))
        pieces.append((scal, num, bag))
    return _combine(ring_, pieces)


def _apply_G(r, f):
    # The l-th coefficient is the u^{r-l} coefficient of Euler's product
    # (u;q)_inf at u = t^{-n}u', which supplies the missing tail of the
    # infinite alphabet exactly as in the E family.
    n = len(f.ring.vars)
    acc = f.ring.zero()
    for l in range(r + 1):
        m = r - l
        w = qt((-1) ** m, math.comb(m, 2), -n * r) / _poch_q(m)
        img = _apply_H(l, f)
        acc = acc + img.map_coeffs(lambda co, w=w: co * w)
    return acc


def _apply_H_mu(r, mu, f):
    ring_ = f.ring
    n = len(ring_.vars)
    pieces = []
    for nu in _compositions(r, n):
        num = _shift(f, nu, -1)
        scal = ONE
        bag = {}
        for i in range(n):
            for j in range(i + 1, n):
                if nu[i] == nu[j]:
                    if nu[i]:
                        scal = scal * qt(1, -nu[i], 0)
                    continue
                num = num * _pair_poly(ring_, i, qt(1, -nu[i], 0),
                                       j, -qt(1, -nu[j], 0))
                scal = scal / _bag_add(bag, i, j, ONE)
        for i in range(n):
            if nu[i] == 0:
                continue
            for j in range(n):
                if i == j:
                    scal = (scal
                            * q_pochhammer(qt(1, -mu[i], -1), qt(1, -1, 0), nu[i])
                            / q_pochhammer(qt(1, -1, 0), qt(1, -1, 0), nu[i]))
                    continue
                for l in range(nu[i]):
                    num = num * _pair_poly(ring_, j, ONE,
                                           i, -qt(1, -mu[j] - l, -1))
                for l in range(1, nu[i] + 1):
                    scal = scal / _bag_add(bag, j, i, qt(1, -l, 0))
        pieces.append((scal, num, bag))
    return _combine(ring_, pieces)


# ---------------------------------------------------------------------------
# eigenvalue checks
# ---------------------------------------------------------------------------

def _finite_powersum(lam, n, k, inverted=False):
    """p_k at the n-variable alphabet q^{lam_i} t^{n-i} (optionally inverted)."""
    s = -1 if inverted else 1
    acc = ZERO
    for i in range(1, n + 1):
        acc = acc + qt(1, s * k * lam.part(i), s * k * (n - i))
    return acc


def difference_eigenvalue(family, r, lam, n, mu=None):
    """Closed-form eigenvalue of the operator on the n-variable P_lambda.

    D and H see the finite alphabet q^{lam_i} t^{n-i}; E and G see the
    infinite one q^{lam} t^{-delta}.  H_mu is diagonal only at zero shift,
    where self-duality of P gives g_r at the inverted alphabet with
    inverted parameters.
    """
    lam = Partition(lam)
    if family == "D":
        alphabet = [qt(1, lam.part(i), n - i) for i in range(1, n + 1)]
        return elementary_symmetric(alphabet, r)
    if family == "E":
        return eigenvalue_e_g("e_r", r, lam)
    if family == "H":
        pv = [_finite_powersum(lam, n, k) for k in range(1, r + 1)]
        return newton_g(pv, r)[r]
    if family == "G":
        return eigenvalue_e_g("g_r", r, lam)
    if family == "H_mu":
        if mu is not None and any(mu):
            raise ValueError("H_mu is an eigenoperator only at zero shift")
        pv = [_finite_powersum(lam, n, k, inverted=True)
              for k in range(1, r + 1)]
        return newton_g(pv, r, q_img=(-1, 0), t_img=(0, -1))[r]
    raise ValueError(f"unknown operator family {family!r}")


class EigencheckReport:
    """Outcome of an eigenvalue check; truthy iff the relation held exactly."""

    __slots__ = ("ok", "eigenvalue", "difference")

    def __init__(self, ok, eigenvalue, difference):
        self.ok = ok
        self.eigenvalue = eigenvalue
        self.difference = difference

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return f"EigencheckReport(ok, eigenvalue={self.eigenvalue!r})"
        return (f"EigencheckReport(FAILED, eigenvalue={self.eigenvalue!r}, "
                f"difference={self.difference!r})")


def eigencheck_difference(lam, n, family, r, mu=None):
    """Compare operator(P_lambda reduced to n variables) with eigenvalue * P."""
    lam = Partition(lam)
    if n < lam.length():
        raise ValueError(f"need n >= {lam.length()} variables for {lam!r}")
    ring_ = variable_ring(n)
    pn = reduce_to_variables(macdonald_P(lam), ring_, ring_.vars)
    image = apply_difference_operator(
        DifferenceOperatorSpec(family, r, n, mu), pn)
    ev = difference_eigenvalue(family, r, lam, n, mu)
    expected = pn.map_coeffs(lambda co: co * ev)
    diff = image - expected
    return EigencheckReport(diff.is_zero(), ev, diff)


def check_partial_fraction_identity(nu):
    """Whether sum_k (q^{-nu_k}-1) prod_{i!=k} (x_k-q^{-nu_i}x_i)/(x_k-x_i)
    collapses to the constant q^{-|nu|}-1."""
    nu = tuple(int(v) for v in nu)
    n = len(nu)
    ring_ = variable_ring(n)
    pieces = []
    for k in range(n):
        scal = qt(1, -nu[k], 0) - ONE
        num = ring_.one()
        bag = {}
        for i in range(n):
            if i == k:
                continue
            num = num * _pair_poly(ring_, k, ONE, i, -qt(1, -nu[i], 0))
            scal = scal / _bag_add(bag, k, i, ONE)
        pieces.append((scal, num, bag))
    total = _combine(ring_, pieces)
    return total == ring_.const(qt(1, -sum(nu), 0) - ONE)
