"""Prototype stage 2: regularized measure aggregates + integrand readings."""
import itertools
from fractions import Fraction

import proto_dim
from proto_dim import Eps, p_pow, x0_matrices, z_weight, hat_e1
from src.macfock.scalars import ONE, ZERO, qt, RatFunc, PolyRing, exp_series
from src.macfock.symfunc import reduce_to_variables, SymFunc, from_m, to_m
from src.macfock.fock import cauchy_product
from src.macfock.partitions import (PartitionTuple, enumerate_tuples,
                                    tuple_dominance_leq, LESS_EQ, EQUAL,
                                    Partition)
from src.macfock.process import ProcessSpec, _exp_coeffs, _conv, Observable, \
    correlation_direct

proto_dim.EPS_TERMS = 6
EPS_ZERO = Eps.const(ZERO)
EPS_ONE = Eps.const(ONE)


def m_to_p_row(tup):
    legs = [from_m(lam) for lam in tup]
    out = {}
    for combo in itertools.product(*(lg.terms.items() for lg in legs)):
        key = PartitionTuple(tuple(c[0] for c in combo))
        coeff = ONE
        for c in combo:
            coeff = coeff * c[1]
        out[key] = out.get(key, ZERO) + coeff
    return out


def p_to_m_row(tup):
    legs = [to_m(SymFunc.p(lam)) for lam in tup]
    out = {}
    for combo in itertools.product(*(lg.items() for lg in legs)):
        key = PartitionTuple(tuple(c[0] for c in combo))
        coeff = ONE
        for c in combo:
            coeff = coeff * c[1]
        out[key] = out.get(key, ZERO) + coeff
    return out


class Block:
    """All eps-regularized data for the weight-d level-m block."""

    def __init__(self, m, d):
        self.m, self.d = m, d
        basis, mats = x0_matrices(m, d)
        self.basis = basis
        n = len(basis)
        self.idx = {t: k for k, t in enumerate(basis)}
        u = [EPS_ONE + Eps(1, [RatFunc(i)]) for i in range(m)]
        self.u = u
        Z = [z_weight(t) for t in basis]
        # dual action on p-coordinates
        Rp = [[EPS_ZERO] * n for _ in range(n)]
        for i in range(m):
            for r in range(n):
                for c in range(n):
                    a = mats[i][r][c]
                    if not a.is_zero():
                        Rp[r][c] = Rp[r][c] + u[i] * Eps.const(
                            a * Z[r] * Z[c].inverse())
        # change of frame to tensor-monomial coordinates
        C = [[ZERO] * n for _ in range(n)]      # m-coords -> p-coords
        Ci = [[ZERO] * n for _ in range(n)]     # p-coords -> m-coords
        for r, tup in enumerate(basis):
            for rho, cc in m_to_p_row(tup).items():
                C[r][self.idx[rho]] = cc
            for mu, cc in p_to_m_row(tup).items():
                Ci[r][self.idx[mu]] = cc
        Rm = [[EPS_ZERO] * n for _ in range(n)]
        for r in range(n):
            for k in range(n):
                if C[r][k] == ZERO or C[r][k].is_zero():
                    continue
                ck = Eps.const(C[r][k])
                for c in range(n):
                    if Rp[k][c].is_zero():
                        continue
                    prod = ck * Rp[k][c]
                    for s in range(n):
                        if not Ci[c][s].is_zero():
                            Rm[r][s] = Rm[r][s] + prod * Eps.const(Ci[c][s])
        self.Rm = Rm
        self.C = C
        self.Z = Z
        self._P = None
        self._Q = None

    def eigenvalue(self, tup):
        e = EPS_ZERO
        for i, lam in enumerate(tup):
            e = e + self.u[i] * Eps.const(hat_e1(lam))
        return e

    def P_rows(self):
        """m-frame coordinate rows of the eps-regularized dual eigenvectors."""
        if self._P is not None:
            return self._P
        n = len(self.basis)
        P = [None] * n
        for li, lam_tuple in enumerate(self.basis):
            sup = [k for k, t in enumerate(self.basis)
                   if tuple_dominance_leq(t, lam_tuple) in (LESS_EQ, EQUAL)]
            lam_val = self.eigenvalue(lam_tuple)
            unk = [k for k in sup if k != li]
            # equations: for mu in sup: sum_{nu in sup} c_nu Rm[nu][mu] = lam c_mu
            rows = []
            for mu in sup:
                coefs = [self.Rm[nu][mu] for nu in unk]
                rhs = -(self.Rm[li][mu])
                if mu == li:
                    rhs = rhs + lam_val
                else:
                    ci = unk.index(mu)
                    coefs[ci] = coefs[ci] - lam_val
                rows.append((coefs, rhs))
            sol = _solve(rows, len(unk))
            coords = [EPS_ZERO] * n
            coords[li] = EPS_ONE
            for k, s in zip(unk, sol):
                coords[k] = s
            # post-verify on the full block
            for mu in range(n):
                acc = EPS_ZERO
                for nu in sup:
                    if not coords[nu].is_zero():
                        acc = acc + coords[nu] * self.Rm[nu][mu]
                want = coords[mu] * lam_val
                if not (acc - want).is_zero():
                    raise RuntimeError(
                        f"eps eigen-verify failed for {lam_tuple.render()}")
            P[li] = coords
        self._P = P
        return P

    def PQ_p_rows(self):
        """(P, Q) coordinate rows in the p-frame, Q dual to P in the pairing."""
        if self._Q is not None:
            return self._Q
        n = len(self.basis)
        Pm = self.P_rows()
        Pp = [[EPS_ZERO] * n for _ in range(n)]
        for r in range(n):
            for k in range(n):
                if Pm[r][k].is_zero():
                    continue
                for c in range(n):
                    if not self.C[k][c].is_zero():
                        Pp[r][c] = Pp[r][c] + Pm[r][k] * Eps.const(self.C[k][c])
        # Gram and inverse
        G = [[Pp[l][v] * Eps.const(self.Z[v]) for v in range(n)]
             for l in range(n)]
        Ginv = _mat_inv(G)
        Q = [[Ginv[v][mu] for v in range(n)] for mu in range(n)]
        self._Q = (Pp, Q)
        return self._Q


def _solve(rows, k):
    aug = [list(cs) + [r] for cs, r in rows]
    used = [False] * len(aug)
    piv_of = [None] * k
    for col in range(k):
        piv, best = None, None
        for r in range(len(aug)):
            if used[r]:
                continue
            e = aug[r][col]
            if not e.is_zero() and (piv is None or e.val < best):
                piv, best = r, e.val
        if piv is None:
            raise RuntimeError("underdetermined eps system")
        used[piv] = True
        piv_of[col] = piv
        inv = aug[piv][col].inverse()
        aug[piv] = [x * inv for x in aug[piv]]
        for r in range(len(aug)):
            if r != piv and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[piv])]
    for r in range(len(aug)):
        if not used[r] and not aug[r][k].is_zero():
            raise RuntimeError("inconsistent eps system")
    return [aug[piv_of[c]][k] for c in range(k)]


def _mat_inv(G):
    n = len(G)
    A = [row[:] + [EPS_ONE if i == j else EPS_ZERO for j in range(n)]
         for i, row in enumerate(G)]
    for col in range(n):
        piv, best = None, None
        for r in range(col, n):
            e = A[r][col]
            if not e.is_zero() and (piv is None or e.val < best):
                piv, best = r, e.val
        if piv is None:
            raise RuntimeError("singular eps matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def eval_layers(row, basis, ring, groups):
    out = {}
    for coeff, tup in zip(row, basis):
        if coeff.is_zero():
            continue
        poly = ring.one()
        for lam, names in zip(tup, groups):
            for part in lam:
                poly = poly * ring.power_sum(names, part)
        if poly.is_zero():
            continue
        for k, c in enumerate(coeff.coeffs):
            if c.is_zero():
                continue
            o = coeff.val + k
            out[o] = out.get(o, ring.zero()) + poly * c
    return {k: v for k, v in out.items() if not v.is_zero()}


def layers_mul(a, b, ring):
    out = {}
    for i, pa in a.items():
        for j, pb in b.items():
            prod = pa * pb
            if not prod.is_zero():
                out[i + j] = out.get(i + j, ring.zero()) + prod
    return {k: v for k, v in out.items() if not v.is_zero()}


def layers_scale_eps(layers, e, ring):
    out = {}
    for i, pa in layers.items():
        for k, c in enumerate(e.coeffs):
            if c.is_zero():
                continue
            o = i + e.val + k
            out[o] = out.get(o, ring.zero()) + pa * c
    return {k: v for k, v in out.items() if not v.is_zero()}


def layers_add(a, b, ring):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, ring.zero()) + v
    return {k: v for k, v in out.items() if not v.is_zero()}


def h_inv_list(ring, names, scale, order):
    logs = {}
    for n in range(1, order + 1):
        pn = ring.power_sum(names, n)
        if pn.is_zero():
            continue
        logs[n] = pn * (-(ONE - qt(1, 0, n)) * scale ** n
                        * RatFunc(Fraction(1, n)))
    return _exp_coeffs(logs, order, ring.one(), ring.zero())


def m_list(ring, names, scale, order, sign):
    logs = {}
    for n in range(1, order + 1):
        pn = ring.power_sum(names, n)
        if pn.is_zero():
            continue
        coef = (ONE - qt(1, 0, -n)) * (ONE - qt(1, -n, n))
        logs[n] = pn * (coef * scale ** n * RatFunc(Fraction(-sign, n)))
    return _exp_coeffs(logs, order, ring.one(), ring.zero())


def rhs_value(spec, variant):
    ring = spec.ring
    D = spec.degree
    m = spec.levels
    total = ring.zero()
    for i in range(1, m + 1):
        pos = [ring.one()] + [ring.zero()] * D
        for j in range(1, i):
            if variant == "printed_i":
                fac = m_list(ring, spec.ynames[i - 1],
                             p_pow(Fraction(-(j + 1), 2)), D, +1)
            elif variant == "printed_j":
                fac = m_list(ring, spec.ynames[j - 1],
                             p_pow(Fraction(-(j + 1), 2)), D, +1)
            elif variant == "exchange":
                fac = m_list(ring, spec.ynames[j - 1],
                             p_pow(Fraction(-(j - 1), 2)), D, -1)
            else:
                raise ValueError(variant)
            pos = _conv(pos, fac, D)
        hy = h_inv_list(ring, spec.ynames[i - 1],
                        qt(1, 0, -1) * p_pow(Fraction(-(i - 1), 2)), D)
        pos = _conv(pos, hy, D)
        neg = h_inv_list(ring, spec.xnames[i - 1], p_pow(Fraction(i - 1, 2)), D)
        for k in range(D + 1):
            total = total + pos[k] * neg[k]
    return total


def lhs_value(spec):
    ring = spec.ring
    m = spec.levels
    D = spec.degree
    pi = ring.one()
    for i in range(m):
        pi = pi * cauchy_product(ring, spec.xnames[i], spec.ynames[i])
    pi_inv = pi.inverse()
    layers_total = {}
    cauchy_layers = {0: ring.one()}  # vacuum tuple weight
    vac_e = RatFunc(m)
    u_extra = sum(range(m))  # sum over legs of (i-1) for the eps part
    layers_total[0] = ring.one() * RatFunc(m)
    layers_total[1] = ring.one() * RatFunc(u_extra)
    for d in range(1, D // 2 + 1):
        blk = Block(m, d)
        Pp, Q = blk.PQ_p_rows()
        for bi, lam_tuple in enumerate(blk.basis):
            px = eval_layers(Pp[bi], blk.basis, ring, spec.xnames)
            qy = eval_layers(Q[bi], blk.basis, ring, spec.ynames)
            if not px or not qy:
                continue
            w = layers_mul(px, qy, ring)
            cauchy_layers = layers_add(cauchy_layers, w, ring)
            layers_total = layers_add(
                layers_total,
                layers_scale_eps(w, blk.eigenvalue(lam_tuple), ring), ring)
    layers_total = {k: v * pi_inv for k, v in layers_total.items()}
    cauchy_layers = {k: v * pi_inv for k, v in cauchy_layers.items()}
    neg = {k: v for k, v in layers_total.items() if k < 0 and not v.is_zero()}
    cstray = {k: v for k, v in cauchy_layers.items()
              if k != 0 and not v.is_zero()}
    return (layers_total.get(0, ring.zero()), neg,
            cauchy_layers.get(0, ring.zero()), cstray)


def main():
    print("== m=1 sanity (1+1 vars, D=3)")
    spec = ProcessSpec((1,), (1,), 3)
    lhs, neg, cau, cstray = lhs_value(spec)
    direct = correlation_direct([Observable("hatE1")], spec)
    print("  lhs == process direct:", lhs == direct)
    print("  cauchy sum == 1:", cau == spec.ring.one(),
          "| strays:", bool(cstray) or bool(neg))
    for v in ("printed_i", "printed_j", "exchange"):
        print(f"  rhs[{v}] == lhs:", rhs_value(spec, v) == lhs)

    print("== m=2 (1+1 vars per level, D=2)")
    spec = ProcessSpec((1, 1), (1, 1), 2)
    lhs, neg, cau, cstray = lhs_value(spec)
    print("  negative eps layers in E-sum:",
          {k: v.render() for k, v in neg.items()} or "none")
    print("  cauchy sum == 1:", cau == spec.ring.one(),
          "| strays:", {k: v.render() for k, v in cstray.items()} or "none")
    for v in ("printed_i", "printed_j", "exchange"):
        r = rhs_value(spec, v)
        print(f"  rhs[{v}] == lhs:", r == lhs)
    print("  lhs =", lhs.render())

    print("== m=2, D=4 (weight-2 blocks exercised)")
    spec = ProcessSpec((1, 1), (1, 1), 4)
    lhs, neg, cau, cstray = lhs_value(spec)
    print("  negative eps layers:", "none" if not neg else list(neg))
    print("  cauchy == 1:", cau == spec.ring.one(),
          "| strays:", "none" if not cstray else list(cstray))
    for v in ("printed_i", "printed_j", "exchange"):
        print(f"  rhs[{v}] == lhs:", rhs_value(spec, v) == lhs)


if __name__ == "__main__":
    main()
