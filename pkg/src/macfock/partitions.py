"""Partitions, Maya diagrams, and tuples of partitions.

Partitions are immutable (a tuple subclass) and hash structurally, since they
key every memo table in the package.  The canonical linear extension used for
triangular constructions is graded reverse-lexicographic on part vectors:
within a fixed weight, μ precedes λ when the last nonzero entry of the padded
difference μ - λ is positive.  This refines the dominance order (at the last
index where the padded vectors differ, the dominance-smaller partition has
the larger part).
"""

from __future__ import annotations

import itertools
from functools import cmp_to_key

from .errors import ArityMismatch, NonzeroCharge
from .scalars import ONE, RatFunc, qt

LESS_EQ = "less_eq"
GREATER_EQ = "greater_eq"
EQUAL = "equal"
INCOMPARABLE = "incomparable"
DIFFERENT_WEIGHT = "different_weight"


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts if int(p) != 0)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be positive: {parts}")
        return super().__new__(cls, parts)

    # -- basic statistics -------------------------------------------------------

    def weight(self):
        return sum(self)

    def length(self):
        return len(self)

    def multiplicities(self):
        out = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def part(self, i):
        """1-based part access, zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def transpose(self):
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p >= j)
                         for j in range(1, self[0] + 1))

    def contains(self, mu):
        """True iff the diagram of mu fits inside this one (λ/μ exists)."""
        return all(self.part(i + 1) >= p for i, p in enumerate(mu))

    def merge(self, other):
        """Multiset union of parts (p-basis multiplication key)."""
        return Partition(sorted(tuple(self) + tuple(other), reverse=True))

    def remove_part(self, value):
        """Partition with one copy of ``value`` removed."""
        parts = list(self)
        parts.remove(value)
        return Partition(parts)

    # -- z-factors ----------------------------------------------------------------

    def z_factor(self):
        out = 1
        for part, mult in self.multiplicities().items():
            out *= part ** mult
            for k in range(2, mult + 1):
                out *= k
        return out

    def z_qt(self):
        """z_λ · Π_i (1 - q^{λ_i}) / (1 - t^{λ_i}) as a RatFunc."""
        out = RatFunc(self.z_factor())
        for p in self:
            out = out * (ONE - qt(1, p, 0)) / (ONE - qt(1, 0, p))
        return out

    # -- text form -----------------------------------------------------------------

    def render(self):
        return ",".join(str(p) for p in self)

    @classmethod
    def from_text(cls, text):
        text = text.strip()
        if text in ("", "0"):
            return cls()
        return cls(int(p) for p in text.split(","))

    def __repr__(self):
        return f"Partition({tuple(self)})"


def zlambda(lam):
    """(z_λ, z_λ(q,t)) pair."""
    return lam.z_factor(), lam.z_qt()


def dominance_leq(mu, lam):
    """Compare μ and λ in dominance order; see module constants for results."""
    mu, lam = Partition(mu), Partition(lam)
    if mu.weight() != lam.weight():
        return DIFFERENT_WEIGHT
    if mu == lam:
        return EQUAL
    below = above = True
    pm = pl = 0
    for i in range(max(len(mu), len(lam))):
        pm += mu.part(i + 1)
        pl += lam.part(i + 1)
        if pm > pl:
            below = False
        if pm < pl:
            above = False
    if below:
        return LESS_EQ
    if above:
        return GREATER_EQ
    return INCOMPARABLE


def _canonical_cmp(a, b):
    """Graded reverse-lex: negative when a precedes b."""
    wa, wb = a.weight(), b.weight()
    if wa != wb:
        return -1 if wa < wb else 1
    n = max(len(a), len(b))
    for i in range(n - 1, -1, -1):
        d = a.part(i + 1) - b.part(i + 1)
        if d:
            # larger part at the last difference = canonically smaller
            return -1 if d > 0 else 1
    return 0


canonical_key = cmp_to_key(_canonical_cmp)


def enumerate_partitions(d):
    """All partitions of weight d, canonically ordered (smallest first)."""
    def gen(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return sorted((Partition(p) for p in gen(d, d)), key=canonical_key)


def partitions_up_to(max_weight):
    """All partitions of weight ≤ max_weight, weight-major canonical order."""
    out = []
    for d in range(max_weight + 1):
        out.extend(enumerate_partitions(d))
    return out


# ---------------------------------------------------------------------------
# Maya diagrams
# ---------------------------------------------------------------------------

class MayaDiagram:
    """Finite charge data of a semi-infinite wedge.

    ``plus`` holds the positive half-integers present, ``minus`` the negative
    half-integers absent (relative to the vacuum sea filling all negatives).
    Half-integers are stored doubled, as odd integers: 3 means 3/2.
    """

    __slots__ = ("plus", "minus")

    def __init__(self, plus=(), minus=()):
        self.plus = frozenset(int(v) for v in plus)
        self.minus = frozenset(int(v) for v in minus)
        for v in self.plus:
            if v <= 0 or v % 2 == 0:
                raise ValueError(f"plus entries are positive odd ints: {v}")
        for v in self.minus:
            if v >= 0 or v % 2 == 0:
                raise ValueError(f"minus entries are negative odd ints: {v}")

    def charge(self):
        return len(self.plus) - len(self.minus)

    def displacement(self):
        """Σ_{s∈S₊} s − Σ_{s∈S₋} s in actual half-integer units."""
        from fractions import Fraction
        return (Fraction(sum(self.plus), 2) - Fraction(sum(self.minus), 2))

    def __eq__(self, other):
        return (isinstance(other, MayaDiagram) and self.plus == other.plus
                and self.minus == other.minus)

    def __hash__(self):
        return hash((self.plus, self.minus))

    def __repr__(self):
        def halves(s):
            return "{" + ",".join(f"{v}/2" for v in sorted(s)) + "}"
        return f"MayaDiagram(plus={halves(self.plus)}, minus={halves(self.minus)})"


def maya_from_partition(lam):
    """𝐌(λ) = {λ_i − i + 1/2}: the charge-zero Maya diagram of λ."""
    lam = Partition(lam)
    taken = {lam[i] - (i + 1) for i in range(len(lam))}
    plus = {2 * v + 1 for v in taken if v >= 0}
    minus = {-2 * i + 1 for i in range(1, len(lam) + 1) if -i not in taken}
    return MayaDiagram(plus, minus)


def partition_from_maya(maya):
    """Inverse of maya_from_partition; requires charge zero."""
    if maya.charge() != 0:
        raise NonzeroCharge(f"charge {maya.charge()} diagram is not a partition")
    # Occupied slots v (the half-integer v + 1/2), in descending order: the
    # explicit positives, then every default negative not excluded.  λ_i is
    # recovered as (i-th occupied slot) + i; the first zero part ends λ.
    plus_v = sorted(((v - 1) // 2 for v in maya.plus), reverse=True)
    minus_v = {(v - 1) // 2 for v in maya.minus}

    def occupied():
        yield from plus_v
        v = -1
        while True:
            if v not in minus_v:
                yield v
            v -= 1

    parts = []
    for i, v in enumerate(occupied(), start=1):
        part = v + i
        if part <= 0:
            break
        parts.append(part)
    return Partition(parts)


# ---------------------------------------------------------------------------
# tuples of partitions
# ---------------------------------------------------------------------------

class PartitionTuple(tuple):
    """Ordered m-tuple of partitions."""

    def __new__(cls, components):
        return super().__new__(cls, (Partition(c) for c in components))

    def weight(self):
        return sum(c.weight() for c in self)

    def cumulative_vector(self, pad=None):
        """Level prefix weights plus within-level partial sums, padded.

        The generalized dominance order compares these vectors entrywise.
        """
        if pad is None:
            pad = max(self.weight(), 1)
        out = []
        base = 0
        for comp in self:
            run = 0
            for i in range(pad):
                run += comp.part(i + 1)
                out.append(base + run)
            base += comp.weight()
        return tuple(out)

    def render(self):
        return "|".join(c.render() or "0" for c in self)

    @classmethod
    def from_text(cls, text):
        return cls(Partition.from_text(p) for p in text.split("|"))

    def __repr__(self):
        return f"PartitionTuple({self.render()!r})"


def tuple_dominance_leq(mu, lam):
    """Generalized dominance comparison for equal-length tuples."""
    if len(mu) != len(lam):
        raise ArityMismatch(f"tuple lengths differ: {len(mu)} vs {len(lam)}")
    mu, lam = PartitionTuple(mu), PartitionTuple(lam)
    if mu.weight() != lam.weight():
        return DIFFERENT_WEIGHT
    if mu == lam:
        return EQUAL
    pad = max(mu.weight(), 1)
    vm = mu.cumulative_vector(pad)
    vl = lam.cumulative_vector(pad)
    below = all(a <= b for a, b in zip(vm, vl))
    above = all(a >= b for a, b in zip(vm, vl))
    if below:
        return LESS_EQ
    if above:
        return GREATER_EQ
    return INCOMPARABLE


def _tuple_cmp(a, b):
    wa, wb = a.weight(), b.weight()
    if wa != wb:
        return -1 if wa < wb else 1
    pad = max(wa, 1)
    va, vb = a.cumulative_vector(pad), b.cumulative_vector(pad)
    if va == vb:
        return 0
    # lex on cumulative vectors refines generalized dominance
    return -1 if va < vb else 1


tuple_canonical_key = cmp_to_key(_tuple_cmp)


def enumerate_tuples(m, d):
    """All m-tuples of total weight d, canonically ordered (smallest first)."""
    def splits(total, slots):
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in splits(total - first, slots - 1):
                yield (first,) + rest

    out = []
    for shape in splits(d, m):
        for combo in itertools.product(*(enumerate_partitions(w) for w in shape)):
            out.append(PartitionTuple(combo))
    return sorted(out, key=tuple_canonical_key)


def tuples_up_to(m, max_weight):
    out = []
    for d in range(max_weight + 1):
        out.extend(enumerate_tuples(m, d))
    return out
