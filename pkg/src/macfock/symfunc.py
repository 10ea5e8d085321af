"""The graded ring of symmetric functions in the power-sum basis.

A SymFunc maps partitions λ to coefficients of p_λ; coefficients are RatFunc
in most of the package but may be TruncPoly (the Fock side threads variable
polynomials through the same structure).  Conversions to and from the other
classical bases go through exact linear algebra over Fractions:

* m_λ by inverting the finite-variable reduction of the p-basis at n = |λ|
  variables (no Kostka tables, correctness pinned by round-trips);
* e_r, h_r, and the (q,t)-deformed g_r through Newton-style recurrences,
  which only ever divide by the integer r;
* s_λ by Jacobi–Trudi over h.

Principal specializations substitute x_i = q^{λ_i} t^{n-i} for all i ≥ 1 and
sum the infinite geometric tail in closed form.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import ArityMismatch
from .partitions import Partition, enumerate_partitions
from .scalars import ONE, RatFunc, ZERO, qt

_EMPTY = Partition()


class SymFunc:
    """Finite linear combination of power-sum basis elements p_λ."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        clean = {}
        for lam, coeff in dict(terms).items():
            if not _is_zero(coeff):
                clean[Partition(lam)] = coeff
        self.terms = clean

    @classmethod
    def p(cls, lam, coeff=ONE):
        return cls({Partition(lam): coeff})

    @classmethod
    def one(cls):
        return cls({_EMPTY: ONE})

    @classmethod
    def zero(cls):
        return cls()

    def __add__(self, other):
        out = dict(self.terms)
        for lam, c in other.terms.items():
            acc = out.get(lam)
            out[lam] = c if acc is None else acc + c
        return SymFunc(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SymFunc({lam: -c for lam, c in self.terms.items()})

    def scale(self, c):
        if _is_zero(c):
            return SymFunc()
        return SymFunc({lam: coeff * c for lam, coeff in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SymFunc):
            return self.scale(other)
        out = {}
        for la, ca in self.terms.items():
            for lb, cb in other.terms.items():
                key = la.merge(lb)
                c = ca * cb
                acc = out.get(key)
                out[key] = c if acc is None else acc + c
        return SymFunc(out)

    def __rmul__(self, other):
        return self.scale(other)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SymFunc) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self):
        return max((lam.weight() for lam in self.terms), default=0)

    def homogeneous(self, d):
        return SymFunc({lam: c for lam, c in self.terms.items()
                        if lam.weight() == d})

    def truncate_degree(self, d):
        return SymFunc({lam: c for lam, c in self.terms.items()
                        if lam.weight() <= d})

    def map_coeffs(self, fn):
        return SymFunc({lam: fn(c) for lam, c in self.terms.items()})

    def coefficient(self, lam):
        return self.terms.get(Partition(lam), ZERO)

    def render(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda p: (p.weight(), p))
        return " + ".join(
            f"({self.terms[k].render()})*p[{k.render() or ''}]" for k in keys)

    __str__ = render

    def __repr__(self):
        return f"SymFunc({self.render()})"


def _is_zero(c):
    z = getattr(c, "is_zero", None)
    if z is not None:
        return z() if callable(z) else z
    return c == 0


def multiply(f, g):
    return f * g


def inner_product(f, g):
    """⟨p_λ, p_μ⟩ = δ_{λμ} z_λ(q,t), extended bilinearly."""
    out = ZERO
    small, big = (f.terms, g.terms) if len(f.terms) <= len(g.terms) \
        else (g.terms, f.terms)
    for lam, c in small.items():
        d = big.get(lam)
        if d is not None:
            out = out + c * d * lam.z_qt()
    return out


# ---------------------------------------------------------------------------
# basis conversions
# ---------------------------------------------------------------------------

_lock = threading.Lock()
_M_BASIS = {}          # degree -> (partition list, p->m matrix, m->p matrix)
_E_CACHE = {0: SymFunc.one()}
_H_CACHE = {0: SymFunc.one()}
_G_CACHE = {0: SymFunc.one()}


def _powersum_monomials(mu, n):
    """Expansion of p_μ in n variables as {exponent tuple: int}."""
    acc = {(0,) * n: 1}
    for part in mu:
        nxt = {}
        for exps, c in acc.items():
            for i in range(n):
                key = exps[:i] + (exps[i] + part,) + exps[i + 1:]
                nxt[key] = nxt.get(key, 0) + c
        acc = nxt
    return acc


def _m_basis_data(d):
    """Partition list plus exact change-of-basis matrices at degree d."""
    cached = _M_BASIS.get(d)
    if cached is not None:
        return cached
    parts = enumerate_partitions(d)
    index = {lam: i for i, lam in enumerate(parts)}
    k = len(parts)
    # A[i][j]: coefficient of m_{parts[j]} in p_{parts[i]} (n = d variables
    # suffice: every orbit of a degree-d monomial is visible).
    a = [[Fraction(0)] * k for _ in range(k)]
    n = max(d, 1)
    for i, mu in enumerate(parts):
        mono = _powersum_monomials(mu, n)
        for j, nu in enumerate(parts):
            key = tuple(nu) + (0,) * (n - len(nu))
            a[i][j] = Fraction(mono.get(key, 0))
    inv = _invert_fractions(a)
    with _lock:
        _M_BASIS[d] = (parts, a, inv)
    return _M_BASIS[d]


def _invert_fractions(a):
    k = len(a)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(k)]
           for i, row in enumerate(a)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular basis-change matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[k:] for row in aug]


def from_m(lam):
    """Monomial symmetric function m_λ expanded in the p-basis."""
    lam = Partition(lam)
    parts, _, inv = _m_basis_data(lam.weight())
    j = parts.index(lam)
    out = {}
    for i, mu in enumerate(parts):
        c = inv[j][i]
        if c:
            out[mu] = RatFunc(c)
    return SymFunc(out)


def to_m(f):
    """m-basis coordinates {Partition: coeff} of a SymFunc, any degrees."""
    out = {}
    for d in sorted({lam.weight() for lam in f.terms}):
        parts, a, _ = _m_basis_data(d)
        comp = f.homogeneous(d)
        for i, mu in enumerate(parts):
            c = comp.terms.get(mu)
            if c is None:
                continue
            for j, nu in enumerate(parts):
                if a[i][j]:
                    add = c * RatFunc(a[i][j])
                    acc = out.get(nu)
                    out[nu] = add if acc is None else acc + add
    return {k: v for k, v in out.items() if not _is_zero(v)}


def from_e(r_or_lam):
    """e_r (integer) or e_λ = Π e_{λ_i} (partition) in the p-basis."""
    if isinstance(r_or_lam, int):
        return _newton_symfunc(_E_CACHE, r_or_lam,
                               lambda k: RatFunc((-1) ** (k - 1)))
    out = SymFunc.one()
    for part in Partition(r_or_lam):
        out = out * from_e(part)
    return out


def from_h(r_or_lam):
    """h_r or h_λ in the p-basis."""
    if isinstance(r_or_lam, int):
        return _newton_symfunc(_H_CACHE, r_or_lam, lambda k: ONE)
    out = SymFunc.one()
    for part in Partition(r_or_lam):
        out = out * from_h(part)
    return out


def from_g(r_or_lam):
    """g_r, the u^r coefficient of exp(Σ (1-t^n)/(1-q^n) p_n u^n / n)."""
    def weight(k):
        return (ONE - qt(1, 0, k)) / (ONE - qt(1, k, 0))
    if isinstance(r_or_lam, int):
        return _newton_symfunc(_G_CACHE, r_or_lam, weight)
    out = SymFunc.one()
    for part in Partition(r_or_lam):
        out = out * from_g(part)
    return out


def _newton_symfunc(cache, r, weight):
    """Solve r·f_r = Σ_{k=1}^r weight(k) p_k f_{r-k} with f_0 = 1."""
    if r < 0:
        return SymFunc.zero()
    for s in range(1, r + 1):
        if s in cache:
            continue
        acc = SymFunc.zero()
        for k in range(1, s + 1):
            acc = acc + (SymFunc.p(Partition((k,))) * cache[s - k]).scale(weight(k))
        cache[s] = acc.scale(RatFunc(Fraction(1, s)))
    return cache[r]


def from_s(lam):
    """Schur function via the Jacobi–Trudi determinant in h."""
    lam = Partition(lam)
    ell = len(lam)
    if ell == 0:
        return SymFunc.one()

    def h(k):
        if k < 0:
            return SymFunc.zero()
        return from_h(k)

    # Laplace expansion over permutations; ℓ ≤ 6 at desk scale.
    import itertools
    out = SymFunc.zero()
    for perm in itertools.permutations(range(ell)):
        sign = _perm_sign(perm)
        term = SymFunc.one()
        for i in range(ell):
            term = term * h(lam[i] - (i + 1) + (perm[i] + 1))
            if term.is_zero():
                break
        out = out + term.scale(RatFunc(sign))
    return out


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def to_p_basis(name, arg):
    """Dispatch: expand m/e/h/s/g data in the power-sum basis."""
    table = {"m": from_m, "e": from_e, "h": from_h, "s": from_s, "g": from_g}
    return table[name](arg)


# ---------------------------------------------------------------------------
# reductions and specializations
# ---------------------------------------------------------------------------

def reduce_to_variables(f, ring_, names):
    """Substitute p_r -> Σ_{v in names} v^r inside the given PolyRing."""
    cache = {}
    out = ring_.zero()
    for lam, coeff in f.terms.items():
        term = ring_.one()
        for part in lam:
            pk = cache.get(part)
            if pk is None:
                pk = ring_.power_sum(names, part)
                cache[part] = pk
            term = term * pk
        out = out + term * coeff
    return out


def principal_powersum(lam, n, k, inverted=False):
    """p_k at x_i = q^{λ_i} t^{n-i} (i ≥ 1), geometric tail in closed form.

    inverted=True applies q -> q^{-1}, t -> t^{-1} to the whole formula.
    """
    lam = Partition(lam)
    sgn = -1 if inverted else 1
    acc = ZERO
    for i, part in enumerate(lam, start=1):
        acc = acc + qt(1, sgn * k * part, sgn * k * (n - i))
    ell = len(lam)
    # Σ_{i>ℓ} t^{k(n-i)} = t^{-k(ℓ+1-n)} / (1 - t^{-k})
    tail = qt(1, 0, -sgn * k * (ell + 1 - n)) / (ONE - qt(1, 0, -sgn * k))
    return acc + tail


def specialize_principal(f, lam, n, inverted=False):
    """Apply the principal specialization to every p_λ monomial."""
    cache = {}
    out = ZERO
    for key, coeff in f.terms.items():
        term = coeff
        for part in key:
            v = cache.get(part)
            if v is None:
                v = principal_powersum(lam, n, part, inverted)
                cache[part] = v
            term = term * v
        out = out + term
    return out


def specialize(f, kind, **kw):
    """Specialization dispatcher.

    kind="finite": kw ring_, names — n-variable reduction.
    kind="principal": kw lam, n, inverted — closed-form RatFunc.
    """
    if kind == "finite":
        return reduce_to_variables(f, kw["ring_"], kw["names"])
    if kind == "principal":
        return specialize_principal(f, kw["lam"], kw["n"],
                                    kw.get("inverted", False))
    raise ValueError(f"unknown specialization kind {kind!r}")


# ---------------------------------------------------------------------------
# coproduct
# ---------------------------------------------------------------------------

def coproduct(f):
    """Δf as {(Partition, Partition): coeff}, via p_n ↦ p_n⊗1 + 1⊗p_n."""
    out = {}
    for lam, coeff in f.terms.items():
        mults = lam.multiplicities()
        values = sorted(mults)
        ranges = [range(mults[v] + 1) for v in values]
        import itertools
        for choice in itertools.product(*ranges):
            left, right = [], []
            factor = 1
            for v, j in zip(values, choice):
                m = mults[v]
                factor *= math.comb(m, j)
                left.extend([v] * j)
                right.extend([v] * (m - j))
            key = (Partition(sorted(left, reverse=True)),
                   Partition(sorted(right, reverse=True)))
            add = coeff * RatFunc(factor)
            acc = out.get(key)
            out[key] = add if acc is None else acc + add
    return {k: v for k, v in out.items() if not _is_zero(v)}


# ---------------------------------------------------------------------------
# Newton-style values of e_r / h_r / g_r on explicit power sums
# ---------------------------------------------------------------------------

def newton_e(pvals, r):
    """e_0..e_r from p_1..p_r (RatFunc values): r e_r = Σ (-1)^{k-1} p_k e_{r-k}."""
    es = [ONE]
    for s in range(1, r + 1):
        acc = ZERO
        for k in range(1, s + 1):
            term = pvals[k - 1] * es[s - k]
            acc = acc + (term if k % 2 == 1 else -term)
        es.append(acc * RatFunc(Fraction(1, s)))
    return es


def newton_h(pvals, r):
    hs = [ONE]
    for s in range(1, r + 1):
        acc = ZERO
        for k in range(1, s + 1):
            acc = acc + pvals[k - 1] * hs[s - k]
        hs.append(acc * RatFunc(Fraction(1, s)))
    return hs


def newton_g(pvals, r, q_img=None, t_img=None):
    """g_0..g_r from power sums; weights (1-t^k)/(1-q^k) with optional
    substituted parameter images (pass q_img/t_img as (a, b) exponent pairs
    meaning q ↦ q^a t^b, used for the inverted-parameter family)."""
    gs = [ONE]
    for s in range(1, r + 1):
        acc = ZERO
        for k in range(1, s + 1):
            w = (ONE - qt(1, 0, k)) / (ONE - qt(1, k, 0))
            if q_img is not None or t_img is not None:
                w = w.substitute(q_to=q_img or (1, 0), t_to=t_img or (0, 1))
            acc = acc + w * pvals[k - 1] * gs[s - k]
        gs.append(acc * RatFunc(Fraction(1, s)))
    return gs


def elementary_symmetric(values, r):
    """e_r of an explicit finite list (via the generating product)."""
    es = [ONE] + [ZERO] * r
    for v in values:
        for k in range(min(r, len(es) - 1), 0, -1):
            es[k] = es[k] + es[k - 1] * v
    return es[r]


def eigenvalue_e_g(kind, r, lam, inverted=False):
    """Closed-form e_r / g_r eigenvalue data at q^{±λ} t^{∓δ} (n = 0).

    kind="e_r": e_r(q^λ t^{-δ}) (or q^{-λ} t^{δ} when inverted).
    kind="g_r": g_r(q^λ t^{-δ}; q, t); inverted flips both the alphabet and
    the (q,t) parameters, matching the inverted free-field family.
    """
    pv = [principal_powersum(lam, 0, k, inverted) for k in range(1, r + 1)]
    if kind == "e_r":
        return newton_e(pv, r)[r]
    if kind == "g_r":
        if inverted:
            return newton_g(pv, r, q_img=(-1, 0), t_img=(0, -1))[r]
        return newton_g(pv, r)[r]
    raise ValueError(f"unknown eigenvalue kind {kind!r}")
