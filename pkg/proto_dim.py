"""Prototype: epsilon-regularized generalized Macdonald eigenproblem at m=2."""
import itertools
from fractions import Fraction

from src.macfock.fock import (ETA, PHI_MINUS, VertexFactor, vertex_product_apply,
                              FockVector)
from src.macfock.scalars import ONE, ZERO, qt, RatFunc
from src.macfock.symfunc import SymFunc, from_m
from src.macfock.partitions import (Partition, PartitionTuple, enumerate_tuples,
                                    tuple_dominance_leq, LESS_EQ, EQUAL)
from src.macfock.process import Observable, observable_value

EPS_TERMS = 10


class Eps:
    """Laurent series in eps, coefficients RatFunc, window EPS_TERMS."""

    def __init__(self, val, coeffs):
        # strip leading zeros
        while coeffs and coeffs[0].is_zero():
            coeffs = coeffs[1:]
            val += 1
        if not coeffs:
            val = 0
        self.val = val
        self.coeffs = coeffs[:EPS_TERMS]

    @classmethod
    def const(cls, r):
        return cls(0, [r])

    @classmethod
    def eps(cls):
        return cls(1, [ONE])

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, o):
        v = min(self.val, o.val)
        n = max(self.val + len(self.coeffs), o.val + len(o.coeffs)) - v
        n = min(n, EPS_TERMS)
        out = []
        for k in range(n):
            c = ZERO
            i = v + k - self.val
            if 0 <= i < len(self.coeffs):
                c = c + self.coeffs[i]
            j = v + k - o.val
            if 0 <= j < len(o.coeffs):
                c = c + o.coeffs[j]
            out.append(c)
        return Eps(v, out)

    def __neg__(self):
        return Eps(self.val, [-c for c in self.coeffs])

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if self.is_zero() or o.is_zero():
            return Eps(0, [])
        out = [ZERO] * EPS_TERMS
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                if i + j >= EPS_TERMS:
                    break
                out[i + j] = out[i + j] + a * b
        return Eps(self.val + o.val, out)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("eps-series zero")
        a0 = self.coeffs[0]
        inv0 = a0.inverse()
        out = [inv0] + [ZERO] * (EPS_TERMS - 1)
        for k in range(1, min(len(self.coeffs), EPS_TERMS)):
            pass
        # standard recursion: b_k = -inv0 * sum_{i=1..k} a_i b_{k-i}
        for k in range(1, EPS_TERMS):
            s = ZERO
            for i in range(1, k + 1):
                a = self.coeffs[i] if i < len(self.coeffs) else ZERO
                if a.is_zero():
                    continue
                s = s + a * out[k - i]
            out[k] = -(inv0 * s)
        return Eps(-self.val, out)

    def limit0(self):
        """coefficient of eps^0; None if a pole (negative order) is present."""
        for k in range(len(self.coeffs)):
            if self.val + k < 0 and not self.coeffs[k].is_zero():
                return None
        i = -self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ZERO

    def render(self):
        bits = []
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                bits.append(f"eps^{self.val+k}*({c.render()})")
        return " + ".join(bits) or "0"


def p_pow(a):
    return qt(1, a, -a)


def leg_series(kind, scale, v, window, cap):
    s = vertex_product_apply([VertexFactor(kind, 0, scale)], v, window,
                             fock_degree=cap)
    return {k[0]: vec for k, vec in s.items()}


def lam_tilde_CT(i, m, legs, window):
    per = []
    for j in range(1, m + 1):
        v = legs[j - 1]
        cap = v.degree() + window
        if j < i:
            per.append(leg_series(PHI_MINUS, p_pow(Fraction(-(2 * j - 1), 4)),
                                  v, window, cap))
        elif j == i:
            per.append(leg_series(ETA, p_pow(Fraction(-(i - 1), 2)),
                                  v, window, cap))
        else:
            per.append({0: v})
    out = {}
    keys = [list(d.keys()) for d in per]
    for combo in itertools.product(*keys):
        if sum(combo) != 0:
            continue
        vecs = [per[j][combo[j]] for j in range(m)]
        for terms in itertools.product(*(v.sym.terms.items() for v in vecs)):
            lams = PartitionTuple(tuple(tt[0] for tt in terms))
            c = ONE
            for tt in terms:
                c = c * tt[1]
            out[lams] = out.get(lams, ZERO) + c
    return {k: c for k, c in out.items() if not c.is_zero()}


def x0_matrices(m, d):
    """List of m matrices A_i[out][in] over the degree-d tuple basis."""
    basis = enumerate_tuples(m, d)
    idx = {t: k for k, t in enumerate(basis)}
    mats = []
    for i in range(1, m + 1):
        A = [[ZERO] * len(basis) for _ in basis]
        for col, tup in enumerate(basis):
            legs = [FockVector(SymFunc.p(lam)) for lam in tup]
            res = lam_tilde_CT(i, m, legs, window=max(d, 1))
            for outt, c in res.items():
                A[idx[outt]][col] = c
        mats.append(A)
    return basis, mats


def z_weight(tup):
    w = ONE
    for lam in tup:
        w = w * lam.z_qt()
    return w


def m_to_p_row(tup):
    """coefficients of tensor-p basis in tensor-m_tup."""
    legs = [from_m(lam) for lam in tup]
    out = {}
    for combo in itertools.product(*(lg.terms.items() for lg in legs)):
        key = PartitionTuple(tuple(c[0] for c in combo))
        coeff = ONE
        for c in combo:
            coeff = coeff * c[1]
        out[key] = out.get(key, ZERO) + coeff
    return out


def hat_e1(lam):
    return observable_value(Observable("hatE1"), lam)


def solve_P(lam_tuple, basis, mats, verbose=False):
    """eps-regularized dual eigenvector, m-basis coords as Eps."""
    m = len(lam_tuple)
    idx = {t: k for k, t in enumerate(basis)}
    n = len(basis)
    # dual action R(eps)[nu][mu] = Z_nu A(eps)[nu][mu] / Z_mu
    u = [Eps.const(ONE) + Eps(1, [RatFunc(i)]) for i in range(m)]  # 1+(i)eps, i=0..m-1
    Z = [z_weight(t) for t in basis]
    A = [[Eps.const(ZERO) for _ in range(n)] for _ in range(n)]
    for i in range(m):
        for r in range(n):
            for c in range(n):
                if not mats[i][r][c].is_zero():
                    A[r][c] = A[r][c] + u[i] * Eps.const(mats[i][r][c])
    R = [[A[r][c] * Eps.const(Z[r] * Z[c].inverse()) for c in range(n)]
         for r in range(n)]
    # support
    S = [t for t in basis
         if tuple_dominance_leq(t, lam_tuple) in (LESS_EQ, EQUAL)]
    # m->p conversion rows
    C = {t: m_to_p_row(t) for t in S}
    # eigenvalue
    lam_val = Eps.const(ZERO)
    for i, lam in enumerate(lam_tuple):
        lam_val = lam_val + u[i] * Eps.const(hat_e1(lam))
    # unknowns: c_mu for mu in S (c_lam = 1). Equations: for each nu in basis:
    # sum_mu c_mu * (C[mu]·R - lam_val*C[mu])[nu] = 0
    unknowns = [t for t in S if t != lam_tuple]
    rows = []  # one per nu: list of coeffs for unknowns + rhs
    for nu_i in range(n):
        coefs = []
        rhs = Eps.const(ZERO)
        for mu in S:
            # (C[mu]·R)[nu_i] - lam*C[mu][nu_i]
            val = Eps.const(ZERO)
            for rho, crho in C[mu].items():
                val = val + Eps.const(crho) * R[idx[rho]][nu_i]
            val = val - lam_val * Eps.const(C[mu].get(basis[nu_i], ZERO))
            if mu == lam_tuple:
                rhs = rhs - val
            else:
                coefs.append(val)
        rows.append((coefs, rhs))
    # gaussian elimination over Eps field
    k = len(unknowns)
    aug = [list(cs) + [r] for cs, r in rows]
    piv_rows = []
    col = 0
    used = [False] * len(aug)
    sol = [None] * k
    for col in range(k):
        piv = None
        best_val = None
        for r in range(len(aug)):
            if used[r]:
                continue
            e = aug[r][col]
            if not e.is_zero():
                if piv is None or e.val < best_val:
                    piv, best_val = r, e.val
        if piv is None:
            return None, "underdetermined"
        used[piv] = True
        piv_rows.append(piv)
        inv = aug[piv][col].inverse()
        aug[piv] = [x * inv for x in aug[piv]]
        for r in range(len(aug)):
            if r != piv and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[piv])]
    # read solution
    for c_i, r in enumerate(piv_rows):
        sol[c_i] = aug[r][k]
    # consistency: all non-pivot rows must have rhs 0
    for r in range(len(aug)):
        if not used[r]:
            if not aug[r][k].is_zero():
                return None, "inconsistent"
    out = {lam_tuple: Eps.const(ONE)}
    for t, s in zip(unknowns, sol):
        out[t] = s
    return out, None


def main():
    m = 2
    for d in (1, 2):
        basis, mats = x0_matrices(m, d)
        print(f"== degree {d}: basis {[t.render() for t in basis]}")
        for lam_tuple in basis:
            coords, err = solve_P(lam_tuple, basis, mats)
            if err:
                print(f"  P[{lam_tuple.render()}]: SOLVE ERROR {err}")
                continue
            # check eps^0 limit
            pole = []
            lim = {}
            for t, e in coords.items():
                l0 = e.limit0()
                if l0 is None:
                    pole.append(t.render())
                else:
                    if not l0.is_zero():
                        lim[t] = l0
            if pole:
                print(f"  P[{lam_tuple.render()}]: POLE in coords {pole}")
            else:
                s = ", ".join(f"m[{t.render()}]*({c.render()})"
                              for t, c in lim.items())
                print(f"  P[{lam_tuple.render()}] = {s}")
    print("done")


if __name__ == "__main__":
    main()
