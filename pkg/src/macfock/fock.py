"""Deformed-boson Fock space and free-field machinery.

Under the boson-symmetric-function dictionary, |lambda> is the power sum
p_lambda, the negative modes multiply, and the positive modes act as
weighted derivatives; the pairing of two vectors is then the (q,t) inner
product of their images.  Vertex operators are stored by their mode
weights, so a normally ordered product applied to a vector is computed
literally: expand the annihilation exponentials against the vector's
finite degree, then the creation exponentials up to the degree cap, and
track every z-exponent explicitly.

Residue functionals come in two flavors matching the two shapes of the
free-field operators:

* the product-kernel constant term multiplies in the pair factors
  (1-z_j/z_i)/(1-gamma z_j/z_i) -- expanded in nonnegative powers of
  z_j/z_i -- and keeps z^0; the expansion is organized as an exact
  enumeration of exponent flows between slots, so nothing is truncated;
* the determinant functional expands each entry 1/(z_i - gamma z_j) as
  z_i^{-1} sum_k (gamma z_j/z_i)^k (the diagonal gives 1/(z_i(1-gamma))),
  extracts the coefficient of prod z_i^{-1}, and resums each permutation
  cycle's geometric series in closed form.

Window bookkeeping: an operator built from r vertex factors acting on
degree <= D with output degree <= D only ever meets z-exponents in
[-(D+r), D+r] -- annihilation exponents are bounded by the input degree
and creation exponents by the output cap.  The window is still checked
explicitly and WindowTooSmall is raised rather than dropping a term.

The last section holds the fermionic side used at the Schur limit q=t:
finite Maya-diagram states, wedge insertion/removal with signs, and the
closed-form eigenvalue identities that certify the limit.
"""

import itertools
import math
from fractions import Fraction

from .errors import NonzeroCharge, WindowTooSmall
from .partitions import (MayaDiagram, Partition, enumerate_partitions,
                         partitions_up_to)
from .scalars import (ONE, PolyRing, Q, RatFunc, T, TruncPoly, ZERO,
                      exp_series, q_pochhammer, qt)
from .symfunc import SymFunc, from_s, inner_product, newton_e, newton_h


# ---------------------------------------------------------------------------
# vectors and the boson modes
# ---------------------------------------------------------------------------

class FockVector:
    """A Fock-space vector by its symmetric-function image.

    Coefficients may be RatFunc or TruncPoly; dual vectors share this
    representation since both sides map onto power sums.
    """

    __slots__ = ("sym",)

    def __init__(self, sym):
        self.sym = sym

    @classmethod
    def vacuum(cls):
        return cls(SymFunc.one())

    @classmethod
    def from_p(cls, lam, coeff=ONE):
        return cls(SymFunc.p(Partition(lam), coeff))

    @classmethod
    def zero(cls):
        return cls(SymFunc.zero())

    def __add__(self, other):
        return FockVector(self.sym + other.sym)

    def __sub__(self, other):
        return FockVector(self.sym - other.sym)

    def __neg__(self):
        return FockVector(-self.sym)

    def scale(self, c):
        return FockVector(self.sym.scale(c))

    def is_zero(self):
        return self.sym.is_zero()

    def degree(self):
        return self.sym.degree()

    def map_coeffs(self, fn):
        return FockVector(self.sym.map_coeffs(fn))

    def vacuum_component(self):
        return self.sym.coefficient(Partition(()))

    def __eq__(self, other):
        return isinstance(other, FockVector) and self.sym == other.sym

    def __hash__(self):
        return hash(self.sym)

    def __repr__(self):
        return f"FockVector({self.sym.render()})"


def _mode_weight(n):
    """The central term n(1-q^n)/(1-t^n) of [a_n, a_{-n}]."""
    return RatFunc(n) * (ONE - qt(1, n, 0)) / (ONE - qt(1, 0, n))


def heisenberg_apply(n, v):
    """Apply the boson mode a_n; negative modes create, positive annihilate."""
    if n == 0:
        raise ValueError("a_0 is not part of the algebra")
    if n < 0:
        return FockVector(v.sym * SymFunc.p(Partition((-n,))))
    w = _mode_weight(n)
    out = {}
    for lam, coeff in v.sym.terms.items():
        m = lam.multiplicities().get(n)
        if not m:
            continue
        reduced = lam.remove_part(n)
        add = coeff * (w * RatFunc(m))
        acc = out.get(reduced)
        out[reduced] = add if acc is None else acc + add
    return FockVector(SymFunc(out))


def pairing(u, v):
    """<u|v> via the (q,t) inner product of the images."""
    return inner_product(u.sym, v.sym)


def _lift(ring_, v):
    """Promote RatFunc coefficients of v into constants of ring_."""
    def up(c):
        return ring_.const(c) if isinstance(c, RatFunc) else c
    return v.map_coeffs(up)


# ---------------------------------------------------------------------------
# half-vertex operators Gamma(X)_+-
# ---------------------------------------------------------------------------

def _gamma_weight(n):
    """(1-t^n)/((1-q^n) n)."""
    return (ONE - qt(1, 0, n)) / ((ONE - qt(1, n, 0)) * RatFunc(n))


def gamma_apply(sign, ring_, names, v):
    """Gamma(X)_- (sign<0) or Gamma(X)_+ (sign>0) with X the named variables.

    The minus half multiplies by exp(sum_n w_n p_n(X) p_n); the plus half,
    after the mode weights cancel, is the substitution p_n -> p_n + p_n(X).
    Exact modulo terms of specialization degree beyond the ring cutoff.
    """
    if ring_.degree is None:
        raise ValueError("gamma_apply needs a degree-truncated ring")
    cap = ring_.degree
    v = _lift(ring_, v)
    if sign < 0:
        mult = {Partition(()): ring_.one()}
        for d in range(1, cap + 1):
            for rho in enumerate_partitions(d):
                c = ring_.one()
                for part, m in rho.multiplicities().items():
                    pn = ring_.power_sum(names, part)
                    block = (pn * _gamma_weight(part)) ** m
                    c = c * block * RatFunc(Fraction(1, math.factorial(m)))
                if not c.is_zero():
                    mult[rho] = c
        return FockVector(SymFunc(mult) * v.sym)
    out = {}
    beta = {}
    for lam, coeff in v.sym.terms.items():
        mults = lam.multiplicities()
        values = sorted(mults)
        choices = [range(mults[n] + 1) for n in values]
        for pick in itertools.product(*choices):
            kept = []
            c = coeff
            for n, j in zip(values, pick):
                m = mults[n]
                kept.extend([n] * (m - j))
                if j:
                    if n not in beta:
                        beta[n] = ring_.power_sum(names, n)
                    c = c * (beta[n] ** j) * RatFunc(math.comb(m, j))
            if _zeroish(c):
                continue
            key = Partition(tuple(sorted(kept, reverse=True)))
            acc = out.get(key)
            out[key] = c if acc is None else acc + c
    return FockVector(SymFunc(out))


def _zeroish(c):
    z = getattr(c, "is_zero", None)
    return z() if callable(z) else not c


def cauchy_product(ring_, xnames, ynames):
    """Pi(X,Y) = exp(sum_n (1-t^n)/((1-q^n) n) p_n(X) p_n(Y)), truncated."""
    if ring_.degree is None:
        raise ValueError("cauchy_product needs a degree-truncated ring")
    log_terms = ring_.zero()
    # p_n(X) p_n(Y) has total degree 2n, so n beyond degree//2 cannot land
    # inside the truncation.
    for n in range(1, ring_.degree // 2 + 1):
        log_terms = log_terms + (ring_.power_sum(xnames, n)
                                 * ring_.power_sum(ynames, n)
                                 * _gamma_weight(n))
    return exp_series(ring_, log_terms)


# ---------------------------------------------------------------------------
# vertex operators
# ---------------------------------------------------------------------------

class VertexKind:
    """Mode weights of exp(sum A_n a_{-n} z^n) exp(sum B_n a_n z^{-n})."""

    __slots__ = ("name", "creation", "annihilation")

    def __init__(self, name, creation, annihilation):
        self.name = name
        self.creation = creation
        self.annihilation = annihilation

    def __repr__(self):
        return f"VertexKind({self.name})"


def _eta_creation(n):
    return (ONE - qt(1, 0, -n)) / RatFunc(n)


def _eta_annihilation(n):
    return -(ONE - qt(1, 0, n)) / RatFunc(n)


def _half(n):
    return Fraction(n, 2)


def _xi_creation(n):
    return -(ONE - qt(1, 0, -n)) * qt(1, -_half(n), _half(n)) / RatFunc(n)


def _xi_annihilation(n):
    return (ONE - qt(1, 0, n)) * qt(1, -_half(n), _half(n)) / RatFunc(n)


def _phi_factor(n):
    # (1 - (t/q)^n) (t/q)^{-n/4}
    return (ONE - qt(1, -n, n)) * qt(1, Fraction(n, 4), Fraction(-n, 4))


ETA = VertexKind("eta", _eta_creation, _eta_annihilation)
XI = VertexKind("xi", _xi_creation, _xi_annihilation)
PHI_MINUS = VertexKind(
    "phi_minus",
    lambda n: (ONE - qt(1, 0, -n)) * _phi_factor(n) / RatFunc(n),
    lambda n: ZERO)
PHI_PLUS = VertexKind(
    "phi_plus",
    lambda n: ZERO,
    lambda n: -(ONE - qt(1, 0, n)) * _phi_factor(n) / RatFunc(n))
GAMMA_PLUS = VertexKind("gamma_plus", lambda n: ZERO, _gamma_weight)
GAMMA_MINUS = VertexKind("gamma_minus", _gamma_weight, lambda n: ZERO)


class VertexFactor:
    """One factor of a product: a kind evaluated at scale * z_slot."""

    __slots__ = ("kind", "slot", "scale")

    def __init__(self, kind, slot, scale=ONE):
        self.kind = kind
        self.slot = slot
        self.scale = scale


class VertexSeries:
    """Windowed Laurent data in the slot variables: exponent vector -> vector."""

    __slots__ = ("slots", "window", "coeffs")

    def __init__(self, slots, window, coeffs):
        self.slots = slots
        self.window = window
        self.coeffs = coeffs

    def items(self):
        return self.coeffs.items()

    def get(self, exps):
        return self.coeffs.get(tuple(exps))

    def __repr__(self):
        return (f"VertexSeries(slots={self.slots}, window={self.window}, "
                f"{len(self.coeffs)} terms)")


def vertex_product_apply(factors, v, window, fock_degree=None, slots=None):
    """Apply the normally ordered product of the factors to v.

    Every annihilation exponential is expanded against v's finite degree
    first, then the creation exponentials up to ``fock_degree`` (default:
    the coefficient ring's cutoff, or v's degree for plain coefficients,
    which is exact for the degree-preserving residue functionals).  Any
    nonzero term outside the window raises WindowTooSmall instead of
    being dropped.
    """
    if slots is None:
        slots = 1 + max(f.slot for f in factors)
    if fock_degree is None:
        fock_degree = _default_cap(v)
    states = {(0,) * slots: v}
    for f in factors:
        states = _annihilation_pass(f, states)
    for f in factors:
        states = _creation_pass(f, states, fock_degree)
    out = {}
    for exps, vec in states.items():
        if vec.is_zero():
            continue
        if any(abs(e) > window for e in exps):
            raise WindowTooSmall(
                f"exponent {exps} outside window {window}")
        out[exps] = vec
    return VertexSeries(slots, window, out)


def _default_cap(v):
    for c in v.sym.terms.values():
        if isinstance(c, TruncPoly):
            if c.ring.degree is None:
                raise ValueError("coefficient ring has no degree cutoff")
            return c.ring.degree
    return v.degree()


def _annihilation_pass(factor, states):
    kind, slot, scale = factor.kind, factor.slot, factor.scale
    weights = {}
    out = {}
    for exps, vec in states.items():
        for rho in partitions_up_to(vec.degree()):
            c = ONE
            w = vec
            ok = True
            for part, m in rho.multiplicities().items():
                bw = weights.get(part)
                if bw is None:
                    bw = kind.annihilation(part) * scale ** (-part)
                    weights[part] = bw
                if bw.is_zero():
                    ok = False
                    break
                c = c * bw ** m * RatFunc(Fraction(1, math.factorial(m)))
            if not ok:
                continue
            for part in rho:
                w = heisenberg_apply(part, w)
                if w.is_zero():
                    break
            if w.is_zero():
                continue
            w = w.scale(c)
            key = list(exps)
            key[slot] -= rho.weight()
            key = tuple(key)
            acc = out.get(key)
            out[key] = w if acc is None else acc + w
    return {k: w for k, w in out.items() if not w.is_zero()}


def _creation_pass(factor, states, cap):
    kind, slot, scale = factor.kind, factor.slot, factor.scale
    weights = {}
    out = {}
    for exps, vec in states.items():
        room = cap - vec.degree()
        for rho in partitions_up_to(max(room, 0)):
            c = ONE
            ok = True
            for part, m in rho.multiplicities().items():
                aw = weights.get(part)
                if aw is None:
                    aw = kind.creation(part) * scale ** part
                    weights[part] = aw
                if aw.is_zero():
                    ok = False
                    break
                c = c * aw ** m * RatFunc(Fraction(1, math.factorial(m)))
            if not ok:
                continue
            w = FockVector(vec.sym * SymFunc.p(rho, c))
            if w.is_zero():
                continue
            key = list(exps)
            key[slot] += rho.weight()
            key = tuple(key)
            acc = out.get(key)
            out[key] = w if acc is None else acc + w
    return {k: w for k, w in out.items() if not w.is_zero()}


def ope_scalar_series(left, right, order):
    """Coefficients of (w/z)^k in the scalar with
    left(z) right(w) = scalar * :left(z) right(w):.

    Moving left's annihilation half past right's creation half picks up
    exp(sum_n B^L_n A^R_n n (1-q^n)/(1-t^n) (w/z)^n); the list returned is
    that exponential's expansion, the mode-commutator oracle for printed
    pair factors.
    """
    ring_ = PolyRing(("x",), degree=order)
    log_terms = ring_.zero()
    for n in range(1, order + 1):
        c = left.annihilation(n) * right.creation(n) * _mode_weight(n)
        log_terms = log_terms + ring_.gen("x", power=n, coeff=c)
    series = exp_series(ring_, log_terms)
    return [series.coefficient((k,)) for k in range(order + 1)]


# ---------------------------------------------------------------------------
# residue functionals
# ---------------------------------------------------------------------------

def kernel_constant_term(gamma, series):
    """z^0 coefficient of prod_{i<j} (1-z_j/z_i)/(1-gamma z_j/z_i) * series.

    Each pair factor expands as 1 + sum_{m>=1} gamma^{m-1}(gamma-1)
    (z_j/z_i)^m; a term of the series at exponents e contributes through
    the flow matrices (m_ij) with out_i - in_i = e_i, and those are
    enumerated exactly, slot by slot.
    """
    r = series.slots
    cache = {}
    total = None
    for exps, vec in series.items():
        key = exps
        w = cache.get(key)
        if w is None:
            w = _flow_sum(gamma, exps, r)
            cache[key] = w
        if w.is_zero():
            continue
        piece = vec.scale(w)
        total = piece if total is None else total + piece
    return FockVector(SymFunc.zero()) if total is None else total


def _flow_sum(gamma, exps, r):
    if r == 1:
        return ONE if exps[0] == 0 else ZERO
    gm1 = gamma - ONE

    def edge(m):
        return ONE if m == 0 else gamma ** (m - 1) * gm1

    def walk(i, inflow):
        # inflow[j] = flow already sent into slot j from slots < i
        out_total = exps[i] + inflow[i]
        if out_total < 0:
            return ZERO
        if i == r - 1:
            return ONE if out_total == 0 else ZERO
        acc = ZERO
        for split in _weak_compositions(out_total, r - 1 - i):
            c = ONE
            new = list(inflow)
            for k, m in enumerate(split):
                c = c * edge(m)
                new[i + 1 + k] += m
            acc = acc + c * walk(i + 1, new)
        return acc

    return walk(0, [0] * r)


def _weak_compositions(total, slots):
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _weak_compositions(total - head, slots - 1):
            yield (head,) + rest


def residue_D(r, gamma, series):
    """The determinant functional: coefficient of prod z_i^{-1} in
    det(1/(z_i - gamma z_j)) * series.

    Entries expand in 1/(z-gamma w) = z^{-1} sum_k (gamma w/z)^k; per
    permutation each cycle's geometric tail is resummed in closed form
    gamma^{sum delta + L s_min} / (1 - gamma^L).
    """
    if series.slots != r:
        raise ValueError(f"series has {series.slots} slots, expected {r}")
    cache = {}
    total = None
    for exps, vec in series.items():
        w = cache.get(exps)
        if w is None:
            w = _det_weight(gamma, exps, r)
            cache[exps] = w
        if w.is_zero():
            continue
        piece = vec.scale(w)
        total = piece if total is None else total + piece
    return FockVector(SymFunc.zero()) if total is None else total


def _det_weight(gamma, exps, r):
    acc = ZERO
    for perm in itertools.permutations(range(r)):
        factor = ONE
        seen = [False] * r
        sign = 1
        dead = False
        for start in range(r):
            if seen[start]:
                continue
            cycle = []
            i = start
            while not seen[i]:
                seen[i] = True
                cycle.append(i)
                i = perm[i]
            length = len(cycle)
            if length > 1:
                sign = -sign if length % 2 == 0 else sign
            # k_{sigma(i)} - k_i = e_{sigma(i)} around the cycle
            delta = 0
            dsum = 0
            dmin = 0
            for step in range(1, length):
                delta += exps[cycle[step]]
                dsum += delta
                if delta < dmin:
                    dmin = delta
            if (delta + exps[cycle[0]]) != 0:
                dead = True
                break
            smin = max(0, -dmin)
            factor = factor * gamma ** (dsum + length * smin) \
                / (ONE - gamma ** length)
        if dead:
            continue
        acc = acc + (factor if sign > 0 else -factor)
    return acc


# ---------------------------------------------------------------------------
# free-field operators
# ---------------------------------------------------------------------------

def _poch(base, r):
    return q_pochhammer(base, base, r)


_FF_FAMILIES = {
    # family: (legs, gamma, product prefactor, determinant prefactor)
    "E": (ETA, qt(1, 0, -1),
          lambda r: qt(1, 0, -r * (r + 1) // 2) / _poch(qt(1, 0, -1), r),
          lambda r: qt(1, 0, -r) * _inv_factorial(r)),
    "E_inv": (XI, T,
              lambda r: qt(1, 0, r * (r + 1) // 2) / _poch(T, r),
              lambda r: qt(1, 0, r) * _inv_factorial(r)),
    "G": (ETA, Q,
          lambda r: qt((-1) ** r, math.comb(r, 2), 0) / _poch(Q, r),
          lambda r: RatFunc((-1) ** r) * _inv_factorial(r)),
    "G_inv": (XI, qt(1, -1, 0),
              lambda r: qt((-1) ** r, -math.comb(r, 2), 0)
              / _poch(qt(1, -1, 0), r),
              lambda r: RatFunc((-1) ** r) * _inv_factorial(r)),
}


def _inv_factorial(r):
    return RatFunc(Fraction(1, math.factorial(r)))


def free_field_operator(family, r, form, v, fock_degree=None):
    """One of the four boson-realized eigenoperator families applied to v.

    form="product_kernel" uses the z^0 functional against the pair-factor
    kernel; form="determinant_kernel" uses the determinant functional.
    The two must agree identically.
    """
    if r < 1:
        raise ValueError("free-field operators need r >= 1")
    try:
        legs, gamma, prod_pref, det_pref = _FF_FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown free-field family {family!r}") from None
    cap = fock_degree if fock_degree is not None else _default_cap(v)
    window = cap + max(cap, v.degree()) + r
    factors = [VertexFactor(legs, i) for i in range(r)]
    series = vertex_product_apply(factors, v, window, fock_degree=cap)
    if form == "product_kernel":
        out = kernel_constant_term(gamma, series).scale(prod_pref(r))
    elif form == "determinant_kernel":
        out = residue_D(r, gamma, series).scale(det_pref(r))
    else:
        raise ValueError(f"unknown form {form!r}")
    if legs is XI:
        _assert_integral(out)
    return out


def _assert_integral(v):
    # xi's half powers of t/q must pair away in any balanced extraction
    for c in v.sym.terms.values():
        if isinstance(c, RatFunc):
            assert c.is_integral(), "unpaired half-integer parameter power"


def g_finite_reduction_check(r, n, mu, degree):
    """Certify the finite-variable reduction of the inverted-G operator.

    With mu an integer shift vector of length n, the xi-leg integral with
    mu-deformed exchange factors

        CT_z[ prod_{i<j} (1-z_j/z_i)/(1-q^{-1}z_j/z_i)
              * prod_{i,j} (1-t^{1/2}q^{mu_i-1/2}x_i z_j)
                           /(1-t^{-1/2}q^{-1/2}x_i z_j)
              * <0| :xi(z_1)...xi(z_r): Gamma_n(X)_+ ]

    must equal

        t^{rn} q^{r|mu|} sum_{l=0}^r (-1)^l q^C(l,2) q^{l(r-l)}
            (q^{-r+l-1};q^{-1})_l  H_l^{(n),(mu)}(q^{-1},t^{-1})
        applied after evaluation.

    Both sides are tested as covectors on every p_lambda with
    |lambda| <= degree; the list of failing partitions is returned
    (empty means the identity held).
    """
    from .macdonald import DifferenceOperatorSpec, apply_difference_operator
    from .symfunc import reduce_to_variables
    mu = tuple(int(m) for m in mu)
    if len(mu) != n:
        raise ValueError(f"mu must have length {n}")
    names = tuple(f"x{i}" for i in range(1, n + 1))
    ring0 = PolyRing(names)
    ringd = PolyRing(names, degree=degree)
    gamma = qt(1, -1, 0)
    # one-slot leg series prod_i (1 - t^{1/2} q^{mu_i - 1/2} x_i z)
    #                            / (1 - t^{-1/2} q^{-1/2} x_i z)
    legs = [ringd.one()]
    legs.extend(ringd.zero() for _ in range(degree))
    for i, name in enumerate(names):
        rising = qt(1, Fraction(2 * mu[i] - 1, 2), Fraction(1, 2))
        falling = qt(1, Fraction(-1, 2), Fraction(-1, 2))
        fresh = [ringd.zero() for _ in range(degree + 1)]
        for m in range(degree + 1):
            geo = ringd.gen(name, power=m, coeff=falling ** m)
            top = (geo if m == 0
                   else geo - ringd.gen(name, power=m,
                                        coeff=rising * falling ** (m - 1)))
            for k in range(degree + 1 - m):
                if not legs[k].is_zero():
                    fresh[k + m] = fresh[k + m] + legs[k] * top
        legs = fresh
    pref = qt(1, r * sum(mu), r * n)
    weights = []
    for l in range(r + 1):
        c = qt((-1) ** l, math.comb(l, 2) + l * (r - l), 0) \
            * q_pochhammer(qt(1, l - r - 1, 0), gamma, l)
        weights.append(pref * c)
    failures = []
    for d in range(degree + 1):
        for lam in enumerate_partitions(d):
            fx = reduce_to_variables(SymFunc.p(lam), ring0, names)
            rhs = ring0.zero()
            for l in range(r + 1):
                spec = DifferenceOperatorSpec("H_mu", l, n, mu=mu)
                rhs = rhs + apply_difference_operator(spec, fx) * weights[l]
            rhs_d = TruncPoly(ringd, rhs.terms)
            w = gamma_apply(+1, ringd, names,
                            FockVector.from_p(lam))
            series = vertex_product_apply(
                [VertexFactor(XI, j) for j in range(r)], w,
                window=degree + r, fock_degree=0)
            combined = {}
            for exps, vec in series.items():
                base = vec.vacuum_component()
                for picks in itertools.product(range(degree + 1), repeat=r):
                    c = base
                    for m in picks:
                        c = c * legs[m]
                        if c.is_zero():
                            break
                    if c.is_zero():
                        continue
                    key = tuple(e + m for e, m in zip(exps, picks))
                    acc = combined.get(key)
                    combined[key] = c if acc is None else acc + c
            lhs = ringd.zero()
            for exps, c in combined.items():
                wgt = _flow_sum(gamma, exps, r)
                if not wgt.is_zero():
                    lhs = lhs + c * wgt
            if lhs != rhs_d:
                failures.append(lam)
    return failures


def operator_matrix(apply_fn, degree):
    """Dense block of an operator on the weight-``degree`` subspace.

    Returns (basis list, {input partition: {output partition: coeff}});
    the JSON-ready dump for diagnostics and tests.
    """
    basis = enumerate_partitions(degree)
    table = {}
    for lam in basis:
        img = apply_fn(FockVector.from_p(lam))
        table[lam] = dict(img.sym.terms)
    return basis, table


# ---------------------------------------------------------------------------
# fermions at the Schur limit
# ---------------------------------------------------------------------------

def fermion_apply(op, s, state):
    """Wedge insertion (op="psi") or removal (op="psi_star") at slot s.

    ``s`` is a half-integer (Fraction); states map MayaDiagram to scalar.
    The sign is the parity of the number of occupied slots above s.
    """
    s2 = int(2 * Fraction(s))
    if s2 % 2 == 0:
        raise ValueError("fermion slots sit at half-integers")
    out = {}
    for maya, coeff in state.items():
        occupied = (s2 in maya.plus) if s2 > 0 else (s2 not in maya.minus)
        if op == "psi":
            if occupied:
                continue
            new = MayaDiagram(maya.plus | {s2}, maya.minus) if s2 > 0 \
                else MayaDiagram(maya.plus, maya.minus - {s2})
        elif op == "psi_star":
            if not occupied:
                continue
            new = MayaDiagram(maya.plus - {s2}, maya.minus) if s2 > 0 \
                else MayaDiagram(maya.plus, maya.minus | {s2})
        else:
            raise ValueError(f"unknown fermion operator {op!r}")
        above = sum(1 for p in maya.plus if p > s2)
        if s2 < 0:
            above += (-s2 - 1) // 2 - sum(1 for m in maya.minus if m > s2)
        c = coeff if above % 2 == 0 else -coeff
        acc = out.get(new)
        total = c if acc is None else acc + c
        if _zeroish(total):
            out.pop(new, None)
        else:
            out[new] = total
    return out


def schur_powersum(lam, k):
    """p_k at t^{lambda - delta} (entries t^{lambda_i - i})."""
    lam = Partition(lam)
    acc = ZERO
    for i, part in enumerate(lam, start=1):
        acc = acc + qt(1, 0, k * (part - i))
    ell = lam.length()
    return acc + qt(1, 0, -k * (ell + 1)) / (ONE - qt(1, 0, -k))


def schur_powersum_dual(lam, k):
    """p_k at t^{-lambda' + delta - 1} (entries t^{-lambda'_i + i - 1})."""
    lamt = Partition(lam).transpose()
    acc = ZERO
    for i, part in enumerate(lamt, start=1):
        acc = acc + qt(1, 0, k * (i - 1 - part))
    ell = lamt.length()
    # tail sum_{i > ell} t^{k(i-1)} = t^{k ell} / (1 - t^k)
    return acc + qt(1, 0, k * ell) / (ONE - qt(1, 0, k))


class SchurLimitReport:
    """Truthy when every requested q->t consistency check held."""

    __slots__ = ("ok", "failures")

    def __init__(self, failures):
        self.failures = failures
        self.ok = not failures

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return ("SchurLimitReport(ok)" if self.ok
                else f"SchurLimitReport(failed: {self.failures})")


def schur_limit_checks(lam, r, operator_degree=None):
    """Certify the q=t degeneration on partition lam at order r.

    (i) the q->t substitution of e_r at q^lambda t^{-delta} equals e_r of
    the one-parameter alphabet t^{lambda-delta};
    (ii) h_r(t^{lambda-delta}) = (-1)^r e_r(t^{-lambda'+delta-1});
    (iii) when operator_degree is given, the q->t image of both
    determinant-form operator families is diagonal on the Schur vector of
    that degree with eigenvalues e_r / h_r of (i)-(ii).
    """
    from .symfunc import eigenvalue_e_g  # local to avoid cycle noise
    lam = Partition(lam)
    failures = []
    pv = [schur_powersum(lam, k) for k in range(1, r + 1)]
    e_direct = newton_e(pv, r)[r]
    e_subst = eigenvalue_e_g("e_r", r, lam).substitute(q_to=(0, 1))
    if e_subst != e_direct:
        failures.append(f"e_{r} substitution vs direct: "
                        f"{e_subst!r} != {e_direct!r}")
    h_direct = newton_h(pv, r)[r]
    pv_dual = [schur_powersum_dual(lam, k) for k in range(1, r + 1)]
    rhs = RatFunc((-1) ** r) * newton_e(pv_dual, r)[r]
    if h_direct != rhs:
        failures.append(f"h_{r} vs (-1)^{r} e_{r} dual: "
                        f"{h_direct!r} != {rhs!r}")
    if operator_degree is not None:
        svec = FockVector(from_s(lam)) if lam.weight() == operator_degree \
            else None
        if svec is None:
            failures.append("operator_degree must equal |lam|")
        else:
            for family, ev in (("E", e_direct), ("G", h_direct)):
                img = free_field_operator(family, r, "determinant_kernel",
                                          svec)
                at_qt = img.map_coeffs(lambda c: c.substitute(q_to=(0, 1)))
                want = svec.scale(ev)
                if at_qt != want:
                    failures.append(f"family {family} not diagonal at q=t "
                                    f"on degree {operator_degree}")
    return SchurLimitReport(failures)


def maya_state_charge(state):
    """Common charge of a Maya state; mixing charges is refused."""
    charges = {maya.charge() for maya in state}
    if len(charges) > 1:
        raise NonzeroCharge(f"mixed charges {sorted(charges)}")
    return charges.pop() if charges else 0
