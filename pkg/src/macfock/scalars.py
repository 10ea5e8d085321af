"""Exact scalar arithmetic in the two deformation parameters q and t.

RatFunc is a reduced fraction of integer-coefficient polynomials in q and t.
Exponents live on the quarter lattice: internally the ring generators stand
for q^(1/4) and t^(1/4), so fourth roots (needed by the level-m current
construction) are ordinary monomials.  Everything outside that corner of the
package works with integral exponents and can assert as much via
``is_integral``.

Canonical form: numerator and denominator are coprime in Z[q^(1/4), t^(1/4)]
(polynomial gcd including integer content), and the denominator's leading
coefficient under graded-lexicographic order (q before t) is positive.  Text
rendering and parsing of the "num/den" form round-trip this representation.

TruncPoly is a multivariate polynomial over RatFunc truncated at a global
total degree in a designated group of variables; re-truncation is idempotent
and all ring operations truncate.  Ungraded variables (the Fredholm variable
u) carry individual caps instead.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.densebasic import dmp_from_dict, dmp_to_dict
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dmp_inner_gcd
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import HeuristicGCDFailed
from sympy.polys.rings import ring

from .errors import DenominatorVanishes, DivisionByZero, PoleAtPoint

_RING, _QGEN, _TGEN = ring("q4,t4", ZZ, order=grlex)
_ONE_POLY = _RING.one
_ZERO_POLY = _RING.zero


def _poly_gcd(a, b):
    # The sparse-ring gcd gives up on some large inputs (HeuristicGCDFailed
    # with no fallback); the dense routine falls back to subresultant PRS.
    try:
        return a.gcd(b)
    except HeuristicGCDFailed:
        h, _, _ = dmp_inner_gcd(dmp_from_dict(a.to_dict(), 1, ZZ),
                                dmp_from_dict(b.to_dict(), 1, ZZ), 1, ZZ)
        return _RING.from_dict(dmp_to_dict(h, 1))


def _poly_from_quarter_dict(d):
    """Build a ring element from {(a, b): int} with quarter-unit exponents."""
    return _RING.from_dict({k: ZZ(v) for k, v in d.items() if v})


class RatFunc:
    """Reduced rational function in q, t (quarter-exponent lattice)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        if isinstance(num, RatFunc):
            self.num, self.den = num.num, num.den
            self._hash = None
            return
        if isinstance(num, Fraction):
            p = _RING(ZZ(num.numerator))
            q = _RING(ZZ(num.denominator))
            num, den = p, q if den is None else q * _coerce_poly(den)
        else:
            num = _coerce_poly(num)
            den = _ONE_POLY if den is None else _coerce_poly(den)
        self.num, self.den = _reduce(num, den)
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def _raw(num, den):
        out = object.__new__(RatFunc)
        out.num, out.den = num, den
        out._hash = None
        return out

    @classmethod
    def from_reduced(cls, num, den):
        return cls._raw(*_reduce(num, den))

    @classmethod
    def monomial(cls, coeff, q_exp=0, t_exp=0):
        """coeff * q^q_exp * t^t_exp with Fraction exponents on the 1/4 grid."""
        a = Fraction(q_exp) * 4
        b = Fraction(t_exp) * 4
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError("exponents must be multiples of 1/4")
        a, b = int(a), int(b)
        c = Fraction(coeff)
        num = {(max(a, 0), max(b, 0)): c.numerator}
        den = {(max(-a, 0), max(-b, 0)): c.denominator}
        return cls._raw(*_reduce(_poly_from_quarter_dict(num),
                                 _poly_from_quarter_dict(den)))

    # -- predicates ------------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == _ONE_POLY and self.den == _ONE_POLY

    def is_integral(self):
        """True when every exponent is a multiple of 4 quarter-units."""
        for poly in (self.num, self.den):
            for (a, b) in poly.keys():
                if a % 4 or b % 4:
                    return False
        return True

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc.from_reduced(self.num + other.num, self.den)
        g = _poly_gcd(self.den, other.den)
        if g == _ONE_POLY:
            return RatFunc.from_reduced(
                self.num * other.den + other.num * self.den,
                self.den * other.den)
        da, db = self.den.quo(g), other.den.quo(g)
        return RatFunc.from_reduced(self.num * db + other.num * da,
                                    da * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        g1 = _poly_gcd(self.num, other.den)
        g2 = _poly_gcd(other.num, self.den)
        num = self.num.quo(g1) * other.num.quo(g2)
        den = self.den.quo(g2) * other.den.quo(g1)
        if den.LC < 0:
            num, den = -num, -den
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        if den.LC < 0:
            num, den = -num, -den
        return RatFunc._raw(num, den)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return ONE
        base = self if k > 0 else self.inverse()
        out = RatFunc._raw(base.num ** abs(k), base.den ** abs(k))
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()),
                               frozenset(self.den.items())))
        return self._hash

    # -- substitution and evaluation --------------------------------------------

    def substitute(self, q_to=(1, 0), t_to=(0, 1)):
        """Map q -> q^a t^b, t -> q^c t^d with Fraction exponents.

        ``q_to=(a, b)`` sends q to q^a * t^b; likewise ``t_to``.  The images
        of the stored quarter-unit exponents must land back on the quarter
        lattice.  Raises DenominatorVanishes if the denominator image is the
        zero polynomial (it cannot be for monomial images, but the check is
        kept for safety).
        """
        qa, qb = Fraction(q_to[0]), Fraction(q_to[1])
        ta, tb = Fraction(t_to[0]), Fraction(t_to[1])

        def image(poly):
            out = {}
            for (a, b), c in poly.items():
                na = qa * a + ta * b
                nb = qb * a + tb * b
                if na.denominator != 1 or nb.denominator != 1:
                    raise ValueError("substitution leaves the quarter lattice")
                key = (int(na), int(nb))
                out[key] = out.get(key, 0) + int(c)
            return {k: v for k, v in out.items() if v}

        num_d, den_d = image(self.num), image(self.den)
        if not den_d:
            raise DenominatorVanishes("denominator image is zero")
        exps = list(num_d) + list(den_d)
        shift_a = -min(0, min(a for a, _ in exps))
        shift_b = -min(0, min(b for _, b in exps))

        def lift(d):
            return _poly_from_quarter_dict(
                {(a + shift_a, b + shift_b): c for (a, b), c in d.items()})

        return RatFunc.from_reduced(lift(num_d), lift(den_d))

    def limit_t0(self):
        """Evaluate t -> 0 (keeping q symbolic); the limit must be finite."""
        def at0(poly):
            return _poly_from_quarter_dict(
                {(a, 0): int(c) for (a, b), c in poly.items() if b == 0})
        den0 = at0(self.den)
        if not den0:
            raise DenominatorVanishes("pole at t = 0")
        return RatFunc.from_reduced(at0(self.num), den0)

    def evaluate(self, q_value, t_value):
        """Exact numeric value at rational q, t (integral exponents only)."""
        if not self.is_integral():
            raise ValueError("cannot evaluate fractional exponents numerically")
        qv, tv = Fraction(q_value), Fraction(t_value)

        def val(poly):
            return sum(Fraction(int(c)) * qv ** (a // 4) * tv ** (b // 4)
                       for (a, b), c in poly.items())

        dv = val(self.den)
        if dv == 0:
            raise PoleAtPoint(f"denominator vanishes at q={qv}, t={tv}")
        return val(self.num) / dv

    # -- rendering ----------------------------------------------------------------

    def render(self):
        num_s = _poly_text(self.num)
        if self.den == _ONE_POLY:
            return num_s
        return f"({num_s})/({_poly_text(self.den)})"

    __str__ = render

    def __repr__(self):
        return f"RatFunc({self.render()})"

    @classmethod
    def parse(cls, text):
        return _parse_expression(text)


def _coerce_poly(v):
    if isinstance(v, int):
        return _RING(ZZ(v))
    if v.__class__ is _QGEN.__class__:
        return v
    raise TypeError(f"cannot build polynomial from {v!r}")


def _coerce(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, int):
        return RatFunc._raw(_RING(ZZ(v)), _ONE_POLY)
    if isinstance(v, Fraction):
        return RatFunc(v)
    return NotImplemented


def _reduce(num, den):
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return _ZERO_POLY, _ONE_POLY
    g = _poly_gcd(num, den)
    if g != _ONE_POLY:
        num, den = num.quo(g), den.quo(g)
    if den.LC < 0:
        num, den = -num, -den
    return num, den


ZERO = RatFunc._raw(_ZERO_POLY, _ONE_POLY)
ONE = RatFunc._raw(_ONE_POLY, _ONE_POLY)


def qt(coeff=1, q_exp=0, t_exp=0):
    """Shorthand monomial constructor."""
    return RatFunc.monomial(coeff, q_exp, t_exp)


Q = qt(1, 1, 0)
T = qt(1, 0, 1)


def q_pochhammer(a, base, n):
    """(a; base)_n = prod_{k=0}^{n-1} (1 - a * base^k) for RatFunc arguments."""
    out = ONE
    cur = _coerce(a)
    base = _coerce(base)
    for _ in range(n):
        out = out * (ONE - cur)
        cur = cur * base
    return out


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def _exp_text(quarter):
    e = Fraction(quarter, 4)
    if e == 1:
        return ""
    if e.denominator == 1:
        return f"^{e.numerator}"
    return f"^({e.numerator}/{e.denominator})"


def _poly_text(poly):
    if not poly:
        return "0"
    pieces = []
    for (a, b), coeff in poly.terms():
        c = int(coeff)
        factors = []
        if a:
            factors.append("q" + _exp_text(a))
        if b:
            factors.append("t" + _exp_text(b))
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append(("+" if c > 0 else "-") + body)
    return "".join(pieces)


class _Tokens:
    def __init__(self, text):
        self.text = text.replace("**", "^").replace(" ", "")
        self.pos = 0

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch

    def expect(self, ch):
        if self.take() != ch:
            raise ValueError(f"expected {ch!r} at {self.pos} in {self.text!r}")

    def integer(self):
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            raise ValueError(f"expected integer at {start} in {self.text!r}")
        return int(self.text[start:self.pos])


def _parse_expression(text):
    toks = _Tokens(text)
    value = _parse_sum(toks)
    if toks.pos != len(toks.text):
        raise ValueError(f"trailing input at {toks.pos} in {toks.text!r}")
    return value


def _parse_sum(toks):
    value = _parse_product(toks)
    while toks.peek() in ("+", "-"):
        op = toks.take()
        rhs = _parse_product(toks)
        value = value + rhs if op == "+" else value - rhs
    return value


def _parse_product(toks):
    value = _parse_factor(toks)
    while True:
        ch = toks.peek()
        if ch == "*":
            toks.take()
            value = value * _parse_factor(toks)
        elif ch == "/":
            toks.take()
            value = value / _parse_factor(toks)
        elif ch in ("q", "t", "(") or ch.isdigit():
            # juxtaposition, e.g. "(1+q)(1-t)" or "2q"
            value = value * _parse_factor(toks)
        else:
            return value


def _parse_factor(toks):
    ch = toks.peek()
    if ch == "-":
        toks.take()
        return -_parse_factor(toks)
    if ch == "(":
        toks.take()
        value = _parse_sum(toks)
        toks.expect(")")
        base = value
    elif ch in ("q", "t"):
        toks.take()
        base = Q if ch == "q" else T
    elif ch.isdigit():
        base = RatFunc(toks.integer())
    else:
        raise ValueError(f"unexpected {ch!r} at {toks.pos} in {toks.text!r}")

    if toks.peek() != "^":
        return base
    toks.take()
    if toks.peek() == "(":
        toks.take()
        numer = toks.integer()
        if toks.peek() == "/":
            toks.take()
            denom = toks.integer()
        else:
            denom = 1
        toks.expect(")")
        exponent = Fraction(numer, denom)
    else:
        exponent = Fraction(toks.integer())
    if exponent.denominator == 1:
        return base ** int(exponent)
    if base is Q:
        return qt(1, exponent, 0)
    if base is T:
        return qt(1, 0, exponent)
    raise ValueError("fractional exponents only allowed on bare q or t")


# ---------------------------------------------------------------------------
# truncated multivariate polynomials
# ---------------------------------------------------------------------------

class PolyRing:
    """Descriptor for a TruncPoly ring: named variables, truncation rule.

    ``graded`` marks the variables whose total degree is capped by ``degree``
    (pass degree=None for no global cap).  ``caps`` optionally caps single
    variables (used for the Fredholm expansion variable).
    """

    __slots__ = ("vars", "degree", "graded", "caps", "index")

    def __init__(self, variables, degree=None, ungraded=(), caps=None):
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        self.degree = degree
        self.graded = tuple(v not in ungraded for v in self.vars)
        self.caps = dict(caps or {})
        self.index = {v: i for i, v in enumerate(self.vars)}

    def keep(self, exps):
        if self.degree is not None:
            total = sum(e for e, g in zip(exps, self.graded) if g)
            if total > self.degree:
                return False
        for v, cap in self.caps.items():
            if exps[self.index[v]] > cap:
                return False
        return True

    def zero(self):
        return TruncPoly(self, {})

    def one(self):
        return self.const(ONE)

    def const(self, c):
        c = _coerce(c)
        z = (0,) * len(self.vars)
        return TruncPoly(self, {} if c.is_zero() else {z: c})

    def gen(self, name, power=1, coeff=ONE):
        exps = [0] * len(self.vars)
        exps[self.index[name]] = power
        return TruncPoly(self, {tuple(exps): _coerce(coeff)})

    def monomial(self, exps, coeff=ONE):
        return TruncPoly(self, {tuple(exps): _coerce(coeff)})

    def power_sum(self, names, n):
        """p_n over the listed variables: sum of v^n."""
        out = {}
        for v in names:
            exps = [0] * len(self.vars)
            exps[self.index[v]] = n
            out[tuple(exps)] = ONE
        return TruncPoly(self, out)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.vars == other.vars
                and self.degree == other.degree and self.graded == other.graded
                and self.caps == other.caps)

    def __hash__(self):
        return hash((self.vars, self.degree, self.graded,
                     tuple(sorted(self.caps.items()))))


class TruncPoly:
    """Polynomial over RatFunc, truncated per its PolyRing's rule."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring_, terms):
        self.ring = ring_
        clean = {}
        for exps, coeff in terms.items():
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent in TruncPoly")
            if not ring_.keep(exps):
                continue
            c = _coerce(coeff)
            if not c.is_zero():
                clean[exps] = c
        self.terms = clean

    # -- ring operations -------------------------------------------------------

    def _binop(self, other, flip):
        if isinstance(other, TruncPoly):
            if other.ring != self.ring:
                raise ValueError("mixed TruncPoly rings")
            out = dict(self.terms)
            for exps, c in other.terms.items():
                c = -c if flip else c
                acc = out.get(exps)
                out[exps] = c if acc is None else acc + c
            return TruncPoly(self.ring, out)
        c = _coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return self._binop(self.ring.const(c), flip)

    def __add__(self, other):
        return self._binop(other, False)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, True)

    def __rsub__(self, other):
        return (-self)._binop(other, False)

    def __neg__(self):
        return TruncPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TruncPoly):
            if other.ring != self.ring:
                raise ValueError("mixed TruncPoly rings")
            out = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    if not self.ring.keep(exps):
                        continue
                    c = c1 * c2
                    acc = out.get(exps)
                    out[exps] = c if acc is None else acc + c
            return TruncPoly(self.ring, out)
        c = _coerce(other)
        if c is NotImplemented:
            return NotImplemented
        if c.is_zero():
            return self.ring.zero()
        return TruncPoly(self.ring,
                         {e: k * c for e, k in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("TruncPoly powers must be nonnegative integers")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def inverse(self):
        """Inverse of a series with invertible constant term, truncated."""
        z = (0,) * len(self.ring.vars)
        c0 = self.terms.get(z)
        if c0 is None or c0.is_zero():
            raise DivisionByZero("TruncPoly inverse needs a unit constant term")
        c0i = c0.inverse()
        tail = TruncPoly(self.ring,
                         {e: c for e, c in self.terms.items() if e != z})
        if tail.terms and self.ring.degree is None and not self.ring.caps:
            raise ValueError("cannot invert an untruncated non-constant poly")
        # geometric series in the (nilpotent after truncation) tail
        bound = (self.ring.degree or 0) + sum(self.ring.caps.values())
        out = self.ring.one()
        minus_tail = -(tail * c0i)
        power = self.ring.one()
        for _ in range(bound):
            power = power * minus_tail
            if not power.terms:
                break
            out = out + power
        return out * c0i

    # -- queries ----------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), ZERO)

    def constant_term(self):
        return self.terms.get((0,) * len(self.ring.vars), ZERO)

    def graded_degree(self):
        if not self.terms:
            return 0
        return max(sum(e for e, g in zip(exps, self.ring.graded) if g)
                   for exps in self.terms)

    def map_coeffs(self, fn):
        return TruncPoly(self.ring, {e: fn(c) for e, c in self.terms.items()})

    def homogeneous_part(self, d):
        return TruncPoly(self.ring, {
            e: c for e, c in self.terms.items()
            if sum(x for x, g in zip(e, self.ring.graded) if g) == d})

    def __eq__(self, other):
        if isinstance(other, TruncPoly):
            return self.ring == other.ring and self.terms == other.terms
        c = _coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return self == self.ring.const(c)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def sorted_terms(self):
        """Deterministic term order: total degree, then exponent tuple."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def render(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            factors = []
            for v, e in zip(self.ring.vars, exps):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}")
            cs = coeff.render()
            if factors and not coeff.is_one():
                cs = f"({cs})*" if ("+" in cs or "-" in cs or "/" in cs) else cs + "*"
                pieces.append(cs + "*".join(factors))
            elif factors:
                pieces.append("*".join(factors))
            else:
                pieces.append(cs)
        return " + ".join(pieces)

    __str__ = render

    def __repr__(self):
        return f"TruncPoly({self.render()})"


def exp_series(ring_, log_terms):
    """exp of a TruncPoly with zero constant term, truncated in ring_."""
    z = (0,) * len(ring_.vars)
    if log_terms.terms.get(z) is not None:
        raise ValueError("exp needs zero constant term")
    bound = (ring_.degree or 0) + sum(ring_.caps.values())
    out = ring_.one()
    power = ring_.one()
    for k in range(1, bound + 1):
        power = power * log_terms
        if not power.terms:
            break
        out = out + power * RatFunc(Fraction(1, _factorial(k)))
    else:
        if (power * log_terms).terms:
            raise ValueError("exp did not terminate; ring is not truncated")
    return out


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out
