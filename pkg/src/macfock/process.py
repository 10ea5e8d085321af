"""N-step Macdonald processes as exact truncated-series measures.

The process on partition chains (lambda^(1), ..., lambda^(N)) assigns weight

    P_{lambda^(1)}(X^(1))
      Psi_{lambda^(1),lambda^(2)}(Y^(1), X^(2)) ...
      Psi_{lambda^(N-1),lambda^(N)}(Y^(N-1), X^(N))
      Q_{lambda^(N)}(Y^(N))
    / prod_{1 <= i <= j <= N} Pi(X^(i), Y^(j)),

where every X^(alpha), Y^(alpha) is a finite formal alphabet, Pi is the
Cauchy kernel, and Psi_{lambda,mu}(Y,X) = sum_nu Q_{lambda/nu}(Y)
P_{mu/nu}(X).  Nothing here is numeric probability: a weight is an element
of a polynomial ring truncated at total degree D, and "expectation" means
the weighted sum of observable values, again a truncated series.

Three routes to the same expectations are implemented, sharing essentially
no code, and their agreement on concrete specializations is the package's
main correctness argument:

* correlation_direct   -- enumerate chains, sum weight times value;
* correlation_operator -- run the half-vertex/eigenoperator sandwich on the
  boson Fock space and take a vacuum matrix element ratio;
* multilevel_formula and fredholm_det -- closed multi-contour determinant
  formulas, evaluated by exact residue extraction.

Enumeration cutoff.  Chain sums run over |lambda^(alpha)| <= D only, and
this is exact rather than approximate: in the chain weight, the combined
degree of the first alpha X-alphabet factors is

    sum_{beta <= alpha} (|lambda^(beta)| - |nu^(beta-1)|)
        = |lambda^(alpha)| + sum_{beta < alpha} (|lambda^(beta)| - |nu^(beta)|)

with nu^(beta) contained in lambda^(beta), so a chain visiting any
partition of weight > D produces only terms beyond the truncation degree.
The test suite pins this bound by raising the enumeration cutoff and
checking that nothing changes.
"""

import itertools
import math
from fractions import Fraction

from .errors import UnsupportedObservable
from .fock import (FockVector, _det_weight, _gamma_weight,
                   free_field_operator, gamma_apply)
from .macdonald import macdonald_P, macdonald_Q, skew_PQ
from .partitions import Partition, enumerate_partitions, partitions_up_to
from .scalars import (ONE, PolyRing, Q, RatFunc, T, TruncPoly, ZERO,
                      exp_series, q_pochhammer, qt)
from .symfunc import (eigenvalue_e_g, newton_e, newton_g, principal_powersum,
                      reduce_to_variables)


# ---------------------------------------------------------------------------
# process shape
# ---------------------------------------------------------------------------

class ProcessSpec:
    """Shape of an N-step process: one pair of alphabets per level plus the
    global series cutoff.

    ``x_counts[alpha]`` and ``y_counts[alpha]`` are the sizes of the formal
    alphabets X^(alpha+1) and Y^(alpha+1); the variables are named
    ``x{level}_{index}`` / ``y{level}_{index}`` (1-based) and live together
    in one ring truncated at total degree ``degree``.  Alphabets may be
    empty, in which case their power sums are zero.
    """

    __slots__ = ("x_counts", "y_counts", "degree", "xnames", "ynames",
                 "ring", "_norm", "_norm_inv", "_transitions")

    def __init__(self, x_counts, y_counts, degree):
        self.x_counts = tuple(int(c) for c in x_counts)
        self.y_counts = tuple(int(c) for c in y_counts)
        if len(self.x_counts) != len(self.y_counts):
            raise ValueError("need one X and one Y alphabet per level")
        if not self.x_counts:
            raise ValueError("a process has at least one level")
        if any(c < 0 for c in self.x_counts + self.y_counts):
            raise ValueError("alphabet sizes must be nonnegative")
        if int(degree) < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.degree = int(degree)
        self.xnames = tuple(
            tuple(f"x{a + 1}_{i + 1}" for i in range(c))
            for a, c in enumerate(self.x_counts))
        self.ynames = tuple(
            tuple(f"y{a + 1}_{i + 1}" for i in range(c))
            for a, c in enumerate(self.y_counts))
        names = tuple(itertools.chain(*self.xnames, *self.ynames))
        self.ring = PolyRing(names, degree=self.degree)
        self._norm = None
        self._norm_inv = None
        self._transitions = {}

    @property
    def levels(self):
        return len(self.x_counts)

    def _pair_log(self):
        log = self.ring.zero()
        for n in range(1, self.degree // 2 + 1):
            w = _gamma_weight(n)
            for i in range(self.levels):
                px = self.ring.power_sum(self.xnames[i], n)
                if px.is_zero():
                    continue
                for j in range(i, self.levels):
                    py = self.ring.power_sum(self.ynames[j], n)
                    if not py.is_zero():
                        log = log + px * py * w
        return log

    def normalization(self):
        """prod_{i <= j} Pi(X^(i), Y^(j)), the chain partition function."""
        if self._norm is None:
            self._norm = exp_series(self.ring, self._pair_log())
        return self._norm

    def normalization_inverse(self):
        """The reciprocal, from exponentiating the negated power-sum log."""
        if self._norm_inv is None:
            self._norm_inv = exp_series(self.ring, -self._pair_log())
        return self._norm_inv

    def __repr__(self):
        return (f"ProcessSpec(x_counts={self.x_counts}, "
                f"y_counts={self.y_counts}, degree={self.degree})")


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

_RANKED = ("E_obs", "E_prime_obs", "G_obs", "G_prime_obs")
_RANKLESS = ("unit", "hatE1")


class Observable:
    """A function on partitions whose expectation the process can take.

    Families:
      unit          1
      hatE1         1 + (1-t) sum_i (1-q^{lambda_i}) t^{-i}
      E_obs         e_r at x_i = q^{lambda_i} t^{-i+1}
      E_prime_obs   e_r at x_i = q^{-lambda_i} t^{i-1}
      G_obs         g_r at x_i = q^{lambda_i} t^{-i}   (parameters (q,t))
      G_prime_obs   q^r g_r at x_i = q^{-lambda_i} t^{i-1}

    The ranked families take r >= 1; unit and hatE1 take no rank.
    """

    __slots__ = ("family", "r")

    def __init__(self, family, r=None):
        if family not in _RANKED and family not in _RANKLESS:
            raise UnsupportedObservable(
                f"unknown observable family {family!r}")
        if family in _RANKED:
            if not isinstance(r, int) or r < 1:
                raise ValueError(
                    f"{family} needs an integer rank r >= 1, got {r!r}")
        elif r is not None:
            raise ValueError(f"{family} takes no rank")
        self.family = family
        self.r = r

    def value(self, lam):
        return observable_value(self, lam)

    def __repr__(self):
        if self.r is None:
            return f"Observable({self.family!r})"
        return f"Observable({self.family!r}, r={self.r})"


def observable_value(obs, lam):
    """Exact closed-form value of an observable at a partition.

    The alphabets are infinite but principally specialized, so their power
    sums have geometric tails summed in closed form; e_r and g_r are then
    recovered by Newton-type recursions.
    """
    lam = Partition(lam)
    family, r = obs.family, obs.r
    if family == "unit":
        return ONE
    if family == "hatE1":
        acc = ZERO
        for i, part in enumerate(lam, start=1):
            acc = acc + qt(1, 0, -i) - qt(1, part, -i)
        return ONE + (ONE - T) * acc
    if family == "E_obs":
        pv = [principal_powersum(lam, 1, k) for k in range(1, r + 1)]
        return newton_e(pv, r)[r]
    if family == "E_prime_obs":
        pv = [principal_powersum(lam, 1, k, inverted=True)
              for k in range(1, r + 1)]
        return newton_e(pv, r)[r]
    if family == "G_obs":
        return eigenvalue_e_g("g_r", r, lam)
    # G_prime_obs: the rank-r g at the inverted level-1 alphabet, with the
    # direct (q,t) weights, carries an extra q^r.
    pv = [principal_powersum(lam, 1, k, inverted=True)
          for k in range(1, r + 1)]
    return newton_g(pv, r)[r] * qt(1, r, 0)


def generating_series(family, lam, order):
    """Coefficients [1, c_1, .., c_order] of the observable generating
    function at ``lam``, straight from its product form:

        E families:  prod_i (1 + a_i u)
        G families:  prod_i (t a_i u; q)_oo / (a_i u; q)_oo

    over the principal alphabet a_i.  Rows i <= len(lam) are multiplied out
    exactly; the geometric tail over i > len(lam) enters in closed form
    (for e: the classical e_j(1, x, x^2, ...) evaluation; for g: the tail's
    power sums under the exp form).  This is deliberately disjoint from the
    Newton recursions behind observable_value, so the two can check each
    other.
    """
    lam = Partition(lam)
    ell = len(lam)
    out = [ONE] + [ZERO] * order
    if family in ("E_obs", "E_prime_obs"):
        inverted = family == "E_prime_obs"
        for i, part in enumerate(lam, start=1):
            a = qt(1, -part, i - 1) if inverted else qt(1, part, 1 - i)
            out = _conv(out, [ONE, a], order)
        x = T if inverted else qt(1, 0, -1)
        tail = [ONE]
        for j in range(1, order + 1):
            tail.append(x ** (ell * j + math.comb(j, 2))
                        / q_pochhammer(x, x, j))
        return _conv(out, tail, order)
    if family in ("G_obs", "G_prime_obs"):
        inverted = family == "G_prime_obs"
        row_w = [q_pochhammer(T, Q, j) / q_pochhammer(Q, Q, j)
                 for j in range(order + 1)]
        for i, part in enumerate(lam, start=1):
            a = qt(1, 1 - part, i - 1) if inverted else qt(1, part, -i)
            row = [row_w[j] * a ** j for j in range(order + 1)]
            out = _conv(out, row, order)
        logs = {}
        for n in range(1, order + 1):
            den = (ONE - qt(1, n, 0)) * RatFunc(n)
            logs[n] = (qt(1, n, n * ell) / den) if inverted \
                else (-qt(1, 0, -n * ell) / den)
        return _conv(out, _exp_coeffs(logs, order, ONE, ZERO), order)
    raise UnsupportedObservable(
        f"no generating function for family {family!r}")


# ---------------------------------------------------------------------------
# series helpers (shared by the generating functions and the contour
# formulas; generic over RatFunc and TruncPoly coefficients)
# ---------------------------------------------------------------------------

def _conv(a, b, order):
    """Coefficientwise product of two series given as lists."""
    out = [ZERO] * (order + 1)
    for i, ai in enumerate(a):
        if i > order:
            break
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            if bj.is_zero():
                continue
            out[i + j] = out[i + j] + ai * bj
    return out


def _exp_coeffs(logs, order, one, zero):
    """exp(sum_n logs[n] u^n) as a coefficient list [h_0 .. h_order]."""
    out = [one] + [zero] * order
    for n in sorted(logs):
        ln = logs[n]
        if ln.is_zero():
            continue
        block = [one] + [zero] * order
        power = one
        for j in range(1, order // n + 1):
            power = power * ln
            if power.is_zero():
                break
            block[n * j] = power * RatFunc(Fraction(1, math.factorial(j)))
        mixed = [zero] * (order + 1)
        for i, ai in enumerate(out):
            if ai.is_zero():
                continue
            for j in range(0, order - i + 1, n):
                bj = block[j]
                if not bj.is_zero():
                    mixed[i + j] = mixed[i + j] + ai * bj
        out = mixed
    return out


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def measure_weight(lam, spec):
    """One-level weight P_lam(X) Q_lam(Y) / Pi(X,Y), truncated."""
    if spec.levels != 1:
        raise ValueError("measure_weight is the one-level case; "
                         "use process_weight for chains")
    return process_weight([lam], spec)


def process_weight(lams, spec):
    """The N-step chain weight, including the reciprocal normalization."""
    lams = [Partition(lam) for lam in lams]
    if len(lams) != spec.levels:
        raise ValueError(
            f"chain has {len(lams)} levels, spec has {spec.levels}")
    w = reduce_to_variables(macdonald_P(lams[0]), spec.ring, spec.xnames[0])
    for a in range(1, spec.levels):
        if w.is_zero():
            return spec.ring.zero()
        w = w * _transition(spec, lams[a - 1], lams[a], a)
    w = w * reduce_to_variables(macdonald_Q(lams[-1]), spec.ring,
                                spec.ynames[-1])
    return w * spec.normalization_inverse()


def _transition(spec, lam, mu, level):
    """Psi_{lam,mu}(Y^(level), X^(level+1)): the two-alphabet skew sum
    over nu contained in both partitions."""
    key = (lam, mu, level)
    got = spec._transitions.get(key)
    if got is not None:
        return got
    acc = spec.ring.zero()
    for d in range(min(lam.weight(), mu.weight()) + 1):
        for nu in enumerate_partitions(d):
            if not (lam.contains(nu) and mu.contains(nu)):
                continue
            acc = acc + (
                reduce_to_variables(skew_PQ("Q", lam, nu), spec.ring,
                                    spec.ynames[level - 1])
                * reduce_to_variables(skew_PQ("P", mu, nu), spec.ring,
                                      spec.xnames[level]))
    spec._transitions[key] = acc
    return acc


# ---------------------------------------------------------------------------
# correlation functions: direct enumeration
# ---------------------------------------------------------------------------

def correlation_direct(observables, spec, cutoff=None):
    """E[f_1[1] ... f_N[N]] by summing weight times value over all chains
    with |lambda^(alpha)| <= cutoff (default: the ring degree, which the
    module docstring argues is exact)."""
    obs = list(observables)
    if len(obs) != spec.levels:
        raise ValueError("one observable per level")
    cap = spec.degree if cutoff is None else cutoff
    total = spec.ring.zero()
    for chain in itertools.product(partitions_up_to(cap),
                                   repeat=spec.levels):
        c = ONE
        for ob, lam in zip(obs, chain):
            c = c * observable_value(ob, lam)
            if c.is_zero():
                break
        if c.is_zero():
            continue
        w = process_weight(chain, spec)
        if not w.is_zero():
            total = total + w * c
    return total


# ---------------------------------------------------------------------------
# correlation functions: vacuum matrix elements
# ---------------------------------------------------------------------------

_OPERATOR_FAMILY = {
    "E_obs": ("E", lambda r: qt(1, 0, r)),
    "E_prime_obs": ("E_inv", lambda r: qt(1, 0, -r)),
    "G_obs": ("G", lambda r: ONE),
    "G_prime_obs": ("G_inv", lambda r: ONE),
}


def _apply_observable(ob, state, form):
    if ob.family == "unit":
        return state
    if ob.family == "hatE1":
        # the bare constant term of a single eta leg
        return free_field_operator("E", 1, form, state).scale(T - ONE)
    family, scale = _OPERATOR_FAMILY[ob.family]
    return free_field_operator(family, ob.r, form, state).scale(scale(ob.r))


def _vacuum_chain(observables, spec, form):
    state = FockVector.vacuum()
    for a in range(spec.levels):
        state = gamma_apply(-1, spec.ring, spec.xnames[a], state)
        state = _apply_observable(observables[a], state, form)
        state = gamma_apply(1, spec.ring, spec.ynames[a], state)
    out = state.vacuum_component()
    if not isinstance(out, TruncPoly):
        out = spec.ring.const(out)
    return out


def correlation_operator(observables, spec, form="product_kernel"):
    """E[f_1[1] ... f_N[N]] as a vacuum matrix element ratio.

    Per level: multiply in the minus half-vertex of X^(alpha), apply the
    realized eigenoperator of the observable, then substitute the plus
    half-vertex of Y^(alpha); the empty-partition coefficient of the final
    state is the unnormalized numerator.  The denominator is the same chain
    with every operator dropped, inverted as a truncated series -- no
    appeal to the closed normalization product.
    """
    obs = list(observables)
    if len(obs) != spec.levels:
        raise ValueError("one observable per level")
    numer = _vacuum_chain(obs, spec, form)
    denom = _vacuum_chain([Observable("unit")] * spec.levels, spec, form)
    return numer * denom.inverse()


# ---------------------------------------------------------------------------
# closed multi-contour formulas
# ---------------------------------------------------------------------------

# family: determinant gamma, H exponent, reciprocal-argument scale c in
# H((c w)^{-1}; Y), the non-unit W ratios (a, b, c) in
# (1-rho)(1-a rho)/((1-b rho)(1-c rho)), and the per-leg sign.
_ML_FAMILIES = {
    "E_obs": (qt(1, 0, -1), -1, T, (qt(1, 1, -1), Q, qt(1, 0, -1)), 1),
    "E_prime_obs": (T, 1, Q, (qt(1, -1, 1), qt(1, -1, 0), T), 1),
    "G_obs": (Q, -1, T, (qt(1, 1, -1), Q, qt(1, 0, -1)), -1),
    "G_prime_obs": (qt(1, -1, 0), 1, Q,
                    (qt(1, -1, 1), qt(1, -1, 0), T), -1),
}


def w_cross_coeffs(family, order):
    """Expansion of the cross-level factor W (or its tilde variant) in the
    ratio rho = w^(later)/w^(earlier), as a coefficient list."""
    try:
        _, _, _, (a, b, c), _ = _ML_FAMILIES[family]
    except KeyError:
        raise UnsupportedObservable(
            f"no contour formula for family {family!r}") from None
    ring1 = PolyRing(("rho",), degree=order)
    rho = ring1.gen("rho")
    num = (ring1.one() - rho) * (ring1.one() - rho * a)
    den = (ring1.one() - rho * b) * (ring1.one() - rho * c)
    series = num * den.inverse()
    return [series.coefficient((m,)) for m in range(order + 1)]


def _h_pair_series(ring_, xnames, ynames, hexp, cscale, order,
                   t_zero=False):
    """Laurent coefficients {k: TruncPoly} of

        H(w; X)^hexp * H((c w)^{-1}; Y)^hexp,
        H(w; X) = prod_i (1 - t x_i w)/(1 - x_i w),

    where X, Y are the named variables.  Positive powers of w carry the
    X-side, negative the Y-side; both come from exponentiating the power-sum
    logarithm, with the (1-t^n) weight dropped when ``t_zero`` is set.
    """
    pos_logs = {}
    neg_logs = {}
    sign = RatFunc(hexp)
    for n in range(1, order + 1):
        w = sign * RatFunc(Fraction(1, n))
        if not t_zero:
            w = w * (ONE - qt(1, 0, n))
        px = ring_.power_sum(xnames, n)
        if not px.is_zero():
            pos_logs[n] = px * w
        py = ring_.power_sum(ynames, n)
        if not py.is_zero():
            neg_logs[n] = py * w * cscale ** (-n)
    pos = _exp_coeffs(pos_logs, order, ring_.one(), ring_.zero())
    neg = _exp_coeffs(neg_logs, order, ring_.one(), ring_.zero())
    out = {}
    for i, ai in enumerate(pos):
        if ai.is_zero():
            continue
        for j, bj in enumerate(neg):
            if bj.is_zero():
                continue
            c = ai * bj
            if c.is_zero():
                continue
            k = i - j
            acc = out.get(k)
            out[k] = c if acc is None else acc + c
    return out


def multilevel_formula(observables, spec, w_order=None):
    """The closed N-level contour formula for a single ranked family.

    Builds the per-leg Laurent series of the H-factor products, couples
    levels through the W expansion (in powers of w^(later)/w^(earlier), up
    to ``w_order``, default the ring degree), and contracts against the
    per-level determinant residue weights.  Must agree with
    correlation_direct; the direct route is the referee if it ever does
    not.
    """
    obs = list(observables)
    if len(obs) != spec.levels:
        raise ValueError("one observable per level")
    families = {ob.family for ob in obs}
    if len(families) != 1 or obs[0].family not in _ML_FAMILIES:
        raise UnsupportedObservable(
            "the contour formula needs one ranked family across all levels")
    family = obs[0].family
    gamma, hexp, cscale, _, legsign = _ML_FAMILIES[family]
    ranks = [ob.r for ob in obs]
    ring_ = spec.ring
    order = spec.degree
    cap = order if w_order is None else w_order

    levels = [a for a in range(spec.levels) for _ in range(ranks[a])]
    phi = {}
    for a in sorted(set(levels)):
        xs = tuple(itertools.chain(*spec.xnames[:a + 1]))
        ys = tuple(itertools.chain(*spec.ynames[a:]))
        phi[a] = _h_pair_series(ring_, xs, ys, hexp, cscale, order)

    combined = {(): ring_.one()}
    for a in levels:
        grown = {}
        for exps, coeff in combined.items():
            for k in sorted(phi[a]):
                c = coeff * phi[a][k]
                if c.is_zero():
                    continue
                key = exps + (k,)
                acc = grown.get(key)
                grown[key] = c if acc is None else acc + c
        combined = grown

    wc = w_cross_coeffs(family, cap)
    nslots = len(levels)
    for s in range(nslots):
        for sp in range(s + 1, nslots):
            if levels[s] == levels[sp]:
                continue
            grown = {}
            for exps, coeff in combined.items():
                for m, wm in enumerate(wc):
                    if wm.is_zero():
                        continue
                    c = coeff * wm
                    if c.is_zero():
                        continue
                    e = list(exps)
                    e[s] -= m
                    e[sp] += m
                    key = tuple(e)
                    acc = grown.get(key)
                    grown[key] = c if acc is None else acc + c
            combined = grown

    offsets = [0]
    for r in ranks:
        offsets.append(offsets[-1] + r)
    weight_cache = {}
    total = ring_.zero()
    for exps, coeff in combined.items():
        w = ONE
        for a, r in enumerate(ranks):
            block = exps[offsets[a]:offsets[a + 1]]
            dw = weight_cache.get(block)
            if dw is None:
                dw = _det_weight(gamma, block, r)
                weight_cache[block] = dw
            if dw.is_zero():
                w = ZERO
                break
            w = w * dw
        if w.is_zero():
            continue
        total = total + coeff * w

    pref = RatFunc(Fraction(1, math.prod(math.factorial(r) for r in ranks)))
    if legsign < 0 and sum(ranks) % 2:
        pref = -pref
    return total * pref


# ---------------------------------------------------------------------------
# formal Fredholm determinants
# ---------------------------------------------------------------------------

# variant: the ranked family whose contour data it shares, the sign of u in
# det(I + sign * u K), and whether the H weights degenerate at t = 0.
_KERNELS = {
    "KE": ("E_obs", 1, False),
    "KEprime": ("E_prime_obs", 1, False),
    "KG": ("G_obs", -1, False),
    "KGprime": ("G_prime_obs", -1, False),
    "KGprime_t0": ("G_prime_obs", -1, True),
}


class KernelSpec:
    """Selects one of the five closed one-level kernels.

    The kernel's alphabets are the X/Y variables of the one-level
    ProcessSpec handed to fredholm_det; ``x_count``/``y_count`` may pin the
    expected sizes and are validated there.
    """

    __slots__ = ("variant", "x_count", "y_count")

    def __init__(self, variant, x_count=None, y_count=None):
        if variant not in _KERNELS:
            raise ValueError(f"unknown kernel variant {variant!r}")
        self.variant = variant
        self.x_count = x_count
        self.y_count = y_count

    def __repr__(self):
        return f"KernelSpec({self.variant!r})"


def fredholm_series_ring(spec, u_order):
    """The spec's ring extended by an ungraded, capped variable u."""
    return PolyRing(spec.ring.vars + ("u",), degree=spec.degree,
                    ungraded=("u",), caps={"u": u_order})


def fredholm_det(kernel, u_order, spec):
    """det(I + sign * u K) = 1 + sum_r ((sign u)^r / r!) * [r-th minor],
    with the r-th minor extracted by the determinant residue weights from
    the product of r copies of the kernel's scalar Laurent series.

    Returns a TruncPoly over the spec's variables plus u (u capped at
    ``u_order`` and exempt from the degree grading).
    """
    if spec.levels != 1:
        raise ValueError("Fredholm kernels are one-level objects")
    family, usign, t_zero = _KERNELS[kernel.variant]
    if kernel.x_count is not None and kernel.x_count != spec.x_counts[0]:
        raise ValueError("kernel x-alphabet size disagrees with the spec")
    if kernel.y_count is not None and kernel.y_count != spec.y_counts[0]:
        raise ValueError("kernel y-alphabet size disagrees with the spec")
    gamma, hexp, cscale, _, _ = _ML_FAMILIES[family]
    uring = fredholm_series_ring(spec, u_order)
    phi = _h_pair_series(uring, uring.vars[:spec.x_counts[0]],
                         uring.vars[spec.x_counts[0]:-1], hexp, cscale,
                         spec.degree, t_zero=t_zero)
    keys = sorted(phi)
    out = uring.one()
    weight_cache = {}
    for r in range(1, u_order + 1):
        minor = uring.zero()
        for exps in itertools.product(keys, repeat=r):
            dw = weight_cache.get(exps)
            if dw is None:
                dw = _det_weight(gamma, exps, r)
                weight_cache[exps] = dw
            if dw.is_zero():
                continue
            term = uring.one()
            for k in exps:
                term = term * phi[k]
            minor = minor + term * dw
        if minor.is_zero():
            continue
        c = RatFunc(Fraction(usign ** r, math.factorial(r)))
        out = out + minor * uring.gen("u", power=r, coeff=c)
    return out


def expectation_generating_series(family, u_order, spec):
    """sum_r E[f_r] u^r via the direct route: the termwise-defined
    expectation of the observable generating function."""
    if spec.levels != 1:
        raise ValueError("generating series are one-level objects")
    uring = fredholm_series_ring(spec, u_order)
    out = uring.zero()
    for lam in partitions_up_to(spec.degree):
        w = measure_weight(lam, spec)
        if w.is_zero():
            continue
        lifted = TruncPoly(uring, {e + (0,): c for e, c in w.terms.items()})
        gen = generating_series(family, lam, u_order)
        for m, cm in enumerate(gen):
            if cm.is_zero():
                continue
            out = out + lifted * uring.gen("u", power=m, coeff=cm)
    return out


# ---------------------------------------------------------------------------
# q-Whittaker degeneration
# ---------------------------------------------------------------------------

class LimitCheckReport:
    """Comparison of the two sides of the t -> 0 Fredholm identity.

    Truthy when every u-coefficient matches.  ``direct`` and
    ``determinant`` hold the two full series; ``failures`` lists the
    u-powers at which they differ.
    """

    __slots__ = ("direct", "determinant", "failures")

    def __init__(self, direct, determinant, u_order):
        self.direct = direct
        self.determinant = determinant
        uidx = len(direct.ring.vars) - 1
        bad = set()
        diff = direct - determinant
        for exps in diff.terms:
            bad.add(exps[uidx])
        self.failures = sorted(bad)

    def __bool__(self):
        return not self.failures

    def __repr__(self):
        if not self.failures:
            return "LimitCheckReport(ok)"
        return f"LimitCheckReport(failures at u^{self.failures})"


def q_whittaker_limit_check(u_order, spec):
    """At t -> 0, the largest-part generating function
    1/(q^{-lambda_1+1} u; q)_oo should have expectation equal to the
    Fredholm determinant of the degenerated fourth kernel.  Both sides are
    computed and compared as series in u over the spec's variables.
    """
    if spec.levels != 1:
        raise ValueError("the degeneration check is one-level")
    det = fredholm_det(KernelSpec("KGprime_t0"), u_order, spec)
    uring = det.ring
    direct = uring.zero()
    for lam in partitions_up_to(spec.degree):
        w = measure_weight(lam, spec)
        if w.is_zero():
            continue
        w0 = w.map_coeffs(lambda c: c.limit_t0())
        if w0.is_zero():
            continue
        lifted = TruncPoly(uring, {e + (0,): c for e, c in w0.terms.items()})
        top = lam[0] if len(lam) else 0
        for m in range(u_order + 1):
            cm = qt(1, m * (1 - top), 0) / q_pochhammer(Q, Q, m)
            direct = direct + lifted * uring.gen("u", power=m, coeff=cm)
    return LimitCheckReport(direct, det, u_order)
