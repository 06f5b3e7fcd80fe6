"""Partial graded odd form rings: carriers indexed by off-diagonal pairs,
the six operations, and machine checks for every identity family.

Index conventions follow the root-subgroup picture: R_ij sits at the root
e_j - e_i (nonzero indices of distinct absolute value), Delta^0_i at e_i.
"""

from __future__ import annotations

import itertools

from .modules import AbGroup, present_finite
from .nilpotent import NFDelta, delta_from_concrete, trivial_delta
from .rings import BaseRing, FiniteRing
from .sweeps import CheckResult, CheckSuite, Policy, DEFAULT_POLICY, sweep


class IdentityViolated(AssertionError):
    pass


class NotAssociative(ValueError):
    pass


class LemmaHypothesisViolated(AssertionError):
    pass


class PartialGradedOFR:
    """Carriers plus the six operations (inv, mul, star, circ, tri, dot)."""

    def __init__(self, ring: BaseRing, ell: int, rmods, deltas, ops, name=""):
        self.ring = ring
        self.ell = ell
        self._rmods = rmods  # dict (i, j) -> AbGroup
        self._deltas = deltas  # dict i -> NFDelta
        self.ops = ops  # dict of callables: inv, mul, star, circ, tri, dot
        self.name = name

    # -- index helpers ---------------------------------------------------------

    @property
    def nz(self):
        return [i for i in range(-self.ell, self.ell + 1) if i != 0]

    def pairs(self):
        return [(i, j) for i in self.nz for j in self.nz if abs(i) != abs(j)]

    def triples(self):
        return [
            (i, j, k)
            for i in self.nz
            for j in self.nz
            for k in self.nz
            if len({abs(i), abs(j), abs(k)}) == 3
        ]

    # -- carriers ----------------------------------------------------------------

    def rmod(self, i, j) -> AbGroup:
        return self._rmods[(i, j)]

    def delta(self, i) -> NFDelta:
        return self._deltas[i]

    # -- operations ----------------------------------------------------------------

    def inv(self, i, j, a):
        return self.ops["inv"](i, j, a)

    def mul(self, i, j, k, a, b):
        return self.ops["mul"](i, j, k, a, b)

    def star(self, i, j, a, b):
        """R_{-i,j} x R_{ji} -> Delta^0_i."""
        return self.ops["star"](i, j, a, b)

    def circ(self, i, u, j, v):
        """Delta^0_i x Delta^0_j -> R_{-i,j}."""
        return self.ops["circ"](i, u, j, v)

    def tri(self, i, u, j, a):
        """Delta^0_i x R_ij -> R_{-i,j} (the "<|" operation)."""
        return self.ops["tri"](i, u, j, a)

    def dot(self, i, u, j, a):
        """Delta^0_i x R_ij -> Delta^0_j."""
        return self.ops["dot"](i, u, j, a)

    def d_elements(self, i):
        return self.delta(i).d_elements()

    def star_image_gens(self, i):
        """Generators of <R_{-i,j} * R_{ji}> over all admissible j."""
        out = []
        for j in self.nz:
            if abs(j) == abs(i):
                continue
            for a in self.rmod(-i, j).elements():
                for b in self.rmod(j, i).elements():
                    out.append(self.star(i, j, a, b))
        return out


def _nilspan(car, gens):
    seen = {car.zero}
    frontier = [car.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = car.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _family(suite, label, instances, policy):
    total = 0
    mode = "exhaustive"
    for domains, check in instances:
        res = sweep(label, domains, check, policy)
        total += res.count
        if res.mode == "sampled":
            mode = "sampled"
        if not res.ok:
            res.count = total
            return suite.record(res)
    return suite.record(CheckResult(label, True, mode, total))


def verify_identities(p: PartialGradedOFR, family: str, policy: Policy = DEFAULT_POLICY, collect=False) -> CheckSuite:
    """family in {"R1-28", "R29-30", "R31-41", "A1-4"}."""
    if family == "R1-28":
        return _verify_r1_28(p, policy, collect)
    if family == "R29-30":
        return _verify_r29_30(p, policy, collect)
    if family == "R31-41":
        return _verify_r31_41(p, policy, collect)
    if family == "A1-4":
        return _verify_a1_4(p, policy, collect)
    raise ValueError("unknown identity family %r" % family)


def _verify_r1_28(p, policy, collect):
    s = CheckSuite("R1-28", collect=collect)
    R, D = p.rmod, p.delta

    def re(i, j):
        return R(i, j).elements()

    def de(i):
        return D(i).elements()

    _family(s, "R0/inv-additive", [
        ([re(i, j), re(i, j)], lambda a, b, i=i, j=j: None
         if p.inv(i, j, R(i, j).add(a, b)) == R(-j, -i).add(p.inv(i, j, b), p.inv(i, j, a))
         else (i, j, a, b))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R0/inv-involutive", [
        ([re(i, j)], lambda a, i=i, j=j: None
         if p.inv(-j, -i, p.inv(i, j, a)) == a else (i, j, a))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R1/mul-cen", [
        ([re(i, j), re(j, k), re(i, k)], lambda a, b, c, i=i, j=j, k=k: None
         if R(i, k).add(p.mul(i, j, k, a, b), c) == R(i, k).add(c, p.mul(i, j, k, a, b))
         else (i, j, k))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R2/mul-dis-l", [
        ([re(i, j), re(i, j), re(j, k)], lambda a, b, c, i=i, j=j, k=k: None
         if p.mul(i, j, k, R(i, j).add(a, b), c)
         == R(i, k).add(p.mul(i, j, k, a, c), p.mul(i, j, k, b, c))
         else (i, j, k, a, b, c))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R3/mul-dis-r", [
        ([re(i, j), re(j, k), re(j, k)], lambda a, b, c, i=i, j=j, k=k: None
         if p.mul(i, j, k, a, R(j, k).add(b, c))
         == R(i, k).add(p.mul(i, j, k, a, b), p.mul(i, j, k, a, c))
         else (i, j, k, a, b, c))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R4/inv-mul", [
        ([re(i, j), re(j, k)], lambda a, b, i=i, j=j, k=k: None
         if p.inv(i, k, p.mul(i, j, k, a, b))
         == p.mul(-k, -j, -i, p.inv(j, k, b), p.inv(i, j, a))
         else (i, j, k, a, b))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R5/str-cen", [
        ([re(-i, j), re(j, i), de(i)], lambda a, b, u, i=i, j=j: None
         if D(i).add(p.star(i, j, a, b), u) == D(i).add(u, p.star(i, j, a, b))
         else (i, j, a, b, u))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R6/str-dis-l", [
        ([re(-i, j), re(-i, j), re(j, i)], lambda a, b, c, i=i, j=j: None
         if p.star(i, j, R(-i, j).add(a, b), c)
         == D(i).add(p.star(i, j, a, c), p.star(i, j, b, c))
         else (i, j, a, b, c))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R7/str-dis-r", [
        ([re(-i, j), re(j, i), re(j, i)], lambda a, b, c, i=i, j=j: None
         if p.star(i, j, a, R(j, i).add(b, c))
         == D(i).add(p.star(i, j, a, b), p.star(i, j, a, c))
         else (i, j, a, b, c))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R8/str-inv", [
        ([re(-i, j), re(j, i)], lambda a, b, i=i, j=j: None
         if D(i).add(p.star(i, j, a, b), p.star(i, -j, p.inv(j, i, b), p.inv(-i, j, a)))
         == D(i).zero
         else (i, j, a, b))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R9/cir-cen", [
        ([de(i), de(j), re(-i, j)], lambda u, v, a, i=i, j=j: None
         if R(-i, j).add(a, p.circ(i, u, j, v)) == R(-i, j).add(p.circ(i, u, j, v), a)
         else (i, j))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R10/cir-dis-l", [
        ([de(i), de(i), de(j)], lambda u, v, w, i=i, j=j: None
         if p.circ(i, D(i).add(u, v), j, w)
         == R(-i, j).add(p.circ(i, u, j, w), p.circ(i, v, j, w))
         else (i, j, u, v, w))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R11/cir-dis-r", [
        ([de(i), de(j), de(j)], lambda u, v, w, i=i, j=j: None
         if p.circ(i, u, j, D(j).add(v, w))
         == R(-i, j).add(p.circ(i, u, j, v), p.circ(i, u, j, w))
         else (i, j, u, v, w))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R12/inv-cir", [
        ([de(i), de(j)], lambda u, v, i=i, j=j: None
         if p.inv(-i, j, p.circ(i, u, j, v)) == p.circ(j, v, i, u)
         else (i, j, u, v))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R13/cir-str-b1", [
        ([de(i), re(-j, -i), re(-i, j)], lambda u, a, b, i=i, j=j: None
         if R(-i, j).add(
             R(-i, j).add(p.circ(i, u, j, p.star(j, -i, a, b)),
                          p.tri(i, u, j, R(i, j).neg(p.inv(-j, -i, a)))),
             b)
         == R(-i, j).add(b, p.tri(i, u, j, R(i, j).neg(p.inv(-j, -i, a))))
         else (i, j, u, a, b))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R14/dot-cen", [
        ([de(i), re(i, j), de(j)], lambda u, a, v, i=i, j=j: None
         if D(j).add(p.dot(i, u, j, a), v)
         == D(j).sub(D(j).add(v, p.dot(i, u, j, a)),
                     p.star(j, -i, p.inv(i, j, a), p.circ(i, u, j, v)))
         else (i, j, u, a, v))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R15/dot-dis-l", [
        ([de(i), de(i), re(i, j)], lambda u, v, a, i=i, j=j: None
         if p.dot(i, D(i).add(u, v), j, a)
         == D(j).add(p.dot(i, u, j, a), p.dot(i, v, j, a))
         else (i, j, u, v, a))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R16/tri-dis-l", [
        ([de(i), de(i), re(i, j)], lambda u, v, a, i=i, j=j: None
         if p.tri(i, D(i).add(u, v), j, a)
         == R(-i, j).add(
             R(-i, j).add(p.tri(i, v, j, a),
                          p.circ(i, u, j, p.dot(i, v, j, R(i, j).neg(a)))),
             p.tri(i, u, j, a))
         else (i, j, u, v, a))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R17/tri-dis-r", [
        ([de(i), re(i, j), re(i, j)], lambda u, a, b, i=i, j=j: None
         if p.tri(i, u, j, R(i, j).add(a, b))
         == R(-i, j).add(p.tri(i, u, j, a), p.tri(i, u, j, b))
         else (i, j, u, a, b))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R18/dot-dis-r", [
        ([de(i), re(i, j), re(i, j)], lambda u, a, b, i=i, j=j: None
         if p.dot(i, u, j, R(i, j).add(a, b))
         == D(j).add(
             D(j).add(p.dot(i, u, j, a),
                      p.star(j, -i, p.inv(i, j, b), p.tri(i, u, j, a))),
             p.dot(i, u, j, b))
         else (i, j, u, a, b))
        for i, j in p.pairs()
    ], policy)
    quads = [
        (i, j, k, l)
        for i in p.nz for j in p.nz for k in p.nz for l in p.nz
        if len({abs(i), abs(j), abs(k), abs(l)}) == 4
    ]
    _family(s, "R19/mul-ass", [
        ([re(i, j), re(j, k), re(k, l)], lambda a, b, c, i=i, j=j, k=k, l=l: None
         if p.mul(i, k, l, p.mul(i, j, k, a, b), c)
         == p.mul(i, j, l, a, p.mul(j, k, l, b, c))
         else (i, j, k, l, a, b, c))
        for i, j, k, l in quads
    ], policy)
    _family(s, "R20/str-ass", [
        ([re(-i, j), re(j, k), re(k, i)], lambda a, b, c, i=i, j=j, k=k: None
         if p.star(i, k, p.mul(-i, j, k, a, b), c)
         == p.star(i, j, a, p.mul(j, k, i, b, c))
         else (i, j, k, a, b, c))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R21/cir-str-b2", [
        ([de(i), re(-j, k), re(k, j)], lambda u, a, b, i=i, j=j, k=k: None
         if p.circ(i, u, j, p.star(j, k, a, b)) == R(-i, j).zero
         else (i, j, k, u, a, b))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R22/cir-dot", [
        ([de(i), de(j), re(j, k)], lambda u, v, a, i=i, j=j, k=k: None
         if p.circ(i, u, k, p.dot(j, v, k, a))
         == p.mul(-i, j, k, p.circ(i, u, j, v), a)
         else (i, j, k, u, v, a))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R23/inv-tri", [
        ([de(i), re(i, j), re(i, k)], lambda u, a, b, i=i, j=j, k=k: None
         if R(-j, k).add(
             R(-j, k).add(
                 p.mul(-j, -i, k, p.inv(i, j, a), p.tri(i, u, k, b)),
                 p.circ(j, p.dot(i, u, j, a), k, p.dot(i, u, k, b))),
             p.mul(-j, i, k, p.inv(-i, j, p.tri(i, u, j, a)), b))
         == R(-j, k).zero
         else (i, j, k, u, a, b))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R24/tri-str", [
        ([re(-i, j), re(j, i), re(i, k)], lambda a, b, c, i=i, j=j, k=k: None
         if p.tri(i, p.star(i, j, a, b), k, c)
         == R(-i, k).sub(
             p.mul(-i, j, k, a, p.mul(j, i, k, b, c)),
             p.mul(-i, -j, k, p.inv(j, i, b), p.mul(-j, i, k, p.inv(-i, j, a), c)))
         else (i, j, k, a, b, c))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R25/dot-str", [
        ([re(-i, j), re(j, i), re(i, k)], lambda a, b, c, i=i, j=j, k=k: None
         if p.dot(i, p.star(i, j, a, b), k, c)
         == p.star(k, j, p.mul(-k, -i, j, p.inv(i, k, c), a), p.mul(j, i, k, b, c))
         else (i, j, k, a, b, c))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R26/tri-ass", [
        ([de(i), re(i, j), re(j, k)], lambda u, a, b, i=i, j=j, k=k: None
         if p.mul(-i, j, k, p.tri(i, u, j, a), b) == p.tri(i, u, k, p.mul(i, j, k, a, b))
         else (i, j, k, u, a, b))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R27/tri-dot", [
        ([de(i), re(i, j), re(j, k)], lambda u, a, b, i=i, j=j, k=k: None
         if p.tri(j, D(j).neg(p.dot(i, u, j, a)), k, b)
         == p.mul(-j, i, k, p.inv(-i, j, p.tri(i, u, j, a)), p.mul(i, j, k, a, b))
         else (i, j, k, u, a, b))
        for i, j, k in p.triples()
    ], policy)
    _family(s, "R28/dot-ass", [
        ([de(i), re(i, j), re(j, k)], lambda u, a, b, i=i, j=j, k=k: None
         if p.dot(j, p.dot(i, u, j, a), k, b) == p.dot(i, u, k, p.mul(i, j, k, a, b))
         else (i, j, k, u, a, b))
        for i, j, k in p.triples()
    ], policy)
    return s


def _verify_r29_30(p, policy, collect):
    s = CheckSuite("R29-30", collect=collect)
    for i, j in p.pairs():
        m = p.rmod(i, j)
        gens = []
        for k in p.nz:
            if abs(k) in (abs(i), abs(j)):
                continue
            for a in p.rmod(i, k).elements():
                for b in p.rmod(k, j).elements():
                    gens.append(p.mul(i, k, j, a, b))
        ok = len(m.span(gens)) == m.order
        s.record(CheckResult("R29/long-idem", ok, witness=None if ok else (i, j)))
    for i in p.nz:
        car = p.delta(i)
        gens = []
        for j in p.nz:
            if abs(j) == abs(i):
                continue
            for u in p.delta(j).elements():
                for a in p.rmod(j, i).elements():
                    gens.append(p.dot(j, u, i, a))
            for a in p.rmod(-i, j).elements():
                for b in p.rmod(j, i).elements():
                    gens.append(p.star(i, j, a, b))
        ok = len(_nilspan(car, gens)) == car.order
        s.record(CheckResult("R30/short-idem", ok, witness=None if ok else i))
    return s


def _verify_r31_41(p, policy, collect):
    s = CheckSuite("R31-41", collect=collect)
    R, D = p.rmod, p.delta
    ks = p.ring.elements()

    def re(i, j):
        return R(i, j).elements()

    def de(i):
        return D(i).elements()

    def dd(i):
        return D(i).d_elements()

    _family(s, "R31/cir-fil", [
        ([dd(i), de(j)], lambda v, w, i=i, j=j: None
         if p.circ(i, v, j, w) == R(-i, j).zero else (i, j, v, w))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R32/fil-str", [
        ([re(-i, j), re(j, i)], lambda a, b, i=i, j=j: None
         if D(i).is_d_element(p.star(i, j, a, b)) else (i, j, a, b))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R33/dot-fil", [
        ([dd(i), re(i, j)], lambda v, a, i=i, j=j: None
         if D(j).is_d_element(p.dot(i, v, j, a)) else (i, j, v, a))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R34/inv-lin", [
        ([ks, re(i, j)], lambda k, a, i=i, j=j: None
         if p.inv(i, j, R(i, j).scale(k, a)) == R(-j, -i).scale(k, p.inv(i, j, a))
         else (i, j, k, a))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R35/mul-lin", [
        ([ks, re(i, j), re(j, k)], lambda kk, a, b, i=i, j=j, k=k: None
         if p.mul(i, j, k, R(i, j).scale(kk, a), b) == R(i, k).scale(kk, p.mul(i, j, k, a, b))
         == p.mul(i, j, k, a, R(j, k).scale(kk, b))
         else (i, j, k, kk, a, b))
        for i, j, k in p.triples()
    ], policy)
    def r36(k, a, b, i, j):
        sv = p.star(i, j, a, b)
        if not D(i).is_d_element(sv):
            return (i, j, a, b, "star value outside filtration")
        ok = (
            p.star(i, j, R(-i, j).scale(k, a), b)
            == D(i).d_scale(k, sv)
            == p.star(i, j, a, R(j, i).scale(k, b))
        )
        return None if ok else (i, j, k, a, b)

    _family(s, "R36/str-lin", [
        ([ks, re(-i, j), re(j, i)], lambda k, a, b, i=i, j=j: r36(k, a, b, i, j))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R37/cir-lin", [
        ([ks, de(i), de(j)], lambda k, u, v, i=i, j=j: None
         if p.circ(i, D(i).act_k(u, k), j, v)
         == R(-i, j).scale(k, p.circ(i, u, j, v))
         == p.circ(i, u, j, D(j).act_k(v, k))
         else (i, j, k, u, v))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R38/tri-lin", [
        ([ks, de(i), re(i, j)], lambda k, u, a, i=i, j=j: None
         if p.tri(i, D(i).act_k(u, k), j, a)
         == R(-i, j).scale(p.ring.mul(k, k), p.tri(i, u, j, a))
         and p.tri(i, u, j, R(i, j).scale(k, a)) == R(-i, j).scale(k, p.tri(i, u, j, a))
         else (i, j, k, u, a))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R39/tri-lin-fil", [
        ([ks, dd(i), re(i, j)], lambda k, v, a, i=i, j=j: None
         if p.tri(i, D(i).d_scale(k, v), j, a) == R(-i, j).scale(k, p.tri(i, v, j, a))
         else (i, j, k, v, a))
        for i, j in p.pairs()
    ], policy)
    _family(s, "R40/dot-lin", [
        ([ks, de(i), re(i, j)], lambda k, u, a, i=i, j=j: None
         if p.dot(i, D(i).act_k(u, k), j, a)
         == p.dot(i, u, j, R(i, j).scale(k, a))
         == D(j).act_k(p.dot(i, u, j, a), k)
         else (i, j, k, u, a))
        for i, j in p.pairs()
    ], policy)
    def r41(k, v, a, i, j):
        dv = p.dot(i, v, j, a)
        if not D(j).is_d_element(dv):
            return (i, j, v, a, "dot of filtration element escapes filtration")
        ok = p.dot(i, D(i).d_scale(k, v), j, a) == D(j).d_scale(k, dv)
        return None if ok else (i, j, k, v, a)

    _family(s, "R41/dot-lin-fil", [
        ([ks, dd(i), re(i, j)], lambda k, v, a, i=i, j=j: r41(k, v, a, i, j))
        for i, j in p.pairs()
    ], policy)
    return s


def _a_patterns(p, which):
    """Signed index patterns (i, j, k, l, m, n) for the associativity laws."""
    out = []
    for absv in itertools.permutations(range(1, p.ell + 1), 3):
        pa, qa, ra = absv
        for si, sj, sk, sl, sm, sn in itertools.product((1, -1), repeat=6):
            if which == "A1":  # |i| = |m|, |j| = |l|, |k| = |n|
                out.append((si * pa, sj * qa, sk * ra, sl * qa, sm * pa, sn * ra))
            elif which == "A2":  # |i| = |l|, |j| = |n|, |k| = |m|
                out.append((si * pa, sj * qa, sk * ra, sl * pa, sm * ra, sn * qa))
            elif which == "A3":  # |i| = |k|, |j| = |m|, |l| = |n|
                out.append((si * pa, sj * qa, sk * pa, sl * ra, sm * qa, sn * ra))
            elif which == "A4":  # |i| = |l|, |j| = |m|, |k| = |n|
                out.append((si * pa, sj * qa, sk * ra, sl * pa, sm * qa, sn * ra))
    return out


def _verify_a1_4(p, policy, collect):
    s = CheckSuite("A1-4", collect=collect)

    def re(i, j):
        return p.rmod(i, j).elements()

    def law(which, lhs, rhs):
        _family(s, which, [
            ([re(i, j), re(j, k), re(k, l), re(l, m), re(m, n)],
             lambda a, b, c, d, e, i=i, j=j, k=k, l=l, m=m, n=n: None
             if lhs(p, (i, j, k, l, m, n), a, b, c, d, e)
             == rhs(p, (i, j, k, l, m, n), a, b, c, d, e)
             else ((i, j, k, l, m, n), a, b, c, d, e))
            for i, j, k, l, m, n in _a_patterns(p, which)
        ], policy)

    law("A1/ass-law-l", _a1_lhs, _a1_rhs)
    law("A2/ass-law-r", _a2_lhs, _a2_rhs)
    law("A3/ass-law-sym", _a3_lhs, _a3_rhs)
    law("A4/ass-law-bal", _a4_lhs, _a4_rhs)
    return s


def _a1_lhs(p, idx, a, b, c, d, e):
    i, j, k, l, m, n = idx
    cd = p.mul(k, l, m, c, d)
    bcd = p.mul(j, k, m, b, cd)
    return p.mul(i, j, n, a, p.mul(j, m, n, bcd, e))


def _a1_rhs(p, idx, a, b, c, d, e):
    i, j, k, l, m, n = idx
    ab = p.mul(i, j, k, a, b)
    abc = p.mul(i, k, l, ab, c)
    return p.mul(i, l, n, abc, p.mul(l, m, n, d, e))


def _a2_lhs(p, idx, a, b, c, d, e):
    i, j, k, l, m, n = idx
    de = p.mul(l, m, n, d, e)
    return p.mul(i, k, n, p.mul(i, j, k, a, b), p.mul(k, l, n, c, de))


def _a2_rhs(p, idx, a, b, c, d, e):
    i, j, k, l, m, n = idx
    bc = p.mul(j, k, l, b, c)
    bcd = p.mul(j, l, m, bc, d)
    return p.mul(i, m, n, p.mul(i, j, m, a, bcd), e)


def _a3_lhs(p, idx, a, b, c, d, e):
    i, j, k, l, m, n = idx
    bc = p.mul(j, k, l, b, c)
    abc = p.mul(i, j, l, a, bc)
    return p.mul(i, m, n, p.mul(i, l, m, abc, d), e)


def _a3_rhs(p, idx, a, b, c, d, e):
    i, j, k, l, m, n = idx
    cd = p.mul(k, l, m, c, d)
    cde = p.mul(k, m, n, cd, e)
    return p.mul(i, j, n, a, p.mul(j, k, n, b, cde))


def _a4_lhs(p, idx, a, b, c, d, e):
    i, j, k, l, m, n = idx
    ab = p.mul(i, j, k, a, b)
    cd = p.mul(k, l, m, c, d)
    return p.mul(i, m, n, p.mul(i, k, m, ab, cd), e)


def _a4_rhs(p, idx, a, b, c, d, e):
    i, j, k, l, m, n = idx
    bc = p.mul(j, k, l, b, c)
    de = p.mul(l, m, n, d, e)
    return p.mul(i, j, n, a, p.mul(j, l, n, bc, de))


def circ_generation_holds(p: PartialGradedOFR) -> bool:
    """The alternative ass-forced hypothesis: R_ij = < circ images >."""
    for i, j in p.pairs():
        m = p.rmod(i, j)
        gens = []
        for u in p.delta(-i).elements():
            for v in p.delta(j).elements():
                gens.append(p.circ(-i, u, j, v))
        if len(m.span(gens)) != m.order:
            return False
    return True


def find_a1_witness(p: PartialGradedOFR, gen_sets=None):
    """Search for an explicit A1 violation; None if the scanned set passes."""
    for idx in _a_patterns(p, "A1"):
        i, j, k, l, m, n = idx
        doms = [
            gen_sets[(i, j)] if gen_sets else p.rmod(i, j).elements(),
            gen_sets[(j, k)] if gen_sets else p.rmod(j, k).elements(),
            gen_sets[(k, l)] if gen_sets else p.rmod(k, l).elements(),
            gen_sets[(l, m)] if gen_sets else p.rmod(l, m).elements(),
            gen_sets[(m, n)] if gen_sets else p.rmod(m, n).elements(),
        ]
        for a, b, c, d, e in itertools.product(*doms):
            if _a1_lhs(p, idx, a, b, c, d, e) != _a1_rhs(p, idx, a, b, c, d, e):
                return (idx, (a, b, c, d, e))
    return None


def build_example3_gl4(D: FiniteRing, name="gl4") -> PartialGradedOFR:
    """The GL(4, D) style rank-3 datum: R_ij = e_ij D, Delta^0_i = 0,
    involution (e_ij a)bar = -e_{-j,-i} a and the sign rule
    (e_ij a)(e_jk b) = e_ik ab for ijk > 0, -e_ik ba for ijk < 0."""
    if not D.is_associative():
        raise NotAssociative("coefficient ring is not associative")
    exp = 1
    seen = set()
    for x in D.elements():
        n, y = 1, x
        while y != 0:
            y = D.add(y, x)
            n += 1
        from math import lcm

        exp = lcm(exp, n)
    ring = BaseRing((max(exp, 2),))
    ell = 3

    def d_scale(k, x):
        acc = 0
        for _ in range(k[0] % exp if exp > 1 else 0):
            acc = D.add(acc, x)
        return acc

    mod, to_c, from_c = present_finite(
        ring, list(D.elements()), D.add, 0, d_scale, name=name + ".D"
    )
    rmods = {}
    deltas = {}
    nzidx = [i for i in range(-ell, ell + 1) if i != 0]
    for i in nzidx:
        deltas[i] = trivial_delta(ring, name="Delta0[%d]" % i)
        for j in nzidx:
            if abs(i) != abs(j):
                rmods[(i, j)] = mod

    def inv(i, j, a):
        return to_c[D.neg(from_c[a])]

    def mul(i, j, k, a, b):
        x, y = from_c[a], from_c[b]
        sgn = (1 if i > 0 else -1) * (1 if j > 0 else -1) * (1 if k > 0 else -1)
        if sgn > 0:
            return to_c[D.mul(x, y)]
        return to_c[D.neg(D.mul(y, x))]

    def star(i, j, a, b):
        return deltas[i].zero

    def circ(i, u, j, v):
        return rmods[(-i, j)].zero

    def tri(i, u, j, a):
        return rmods[(-i, j)].zero

    def dot(i, u, j, a):
        return deltas[j].zero

    ops = {"inv": inv, "mul": mul, "star": star, "circ": circ, "tri": tri, "dot": dot}
    return PartialGradedOFR(ring, ell, rmods, deltas, ops, name=name)


def minimal_filtration(p: PartialGradedOFR, policy: Policy = DEFAULT_POLICY):
    """D_i^min = <R_{-i,j} * R_{ji}>, with the Lemma claims re-verified."""
    r2930 = verify_identities(p, "R29-30", policy, collect=True)
    if not r2930.ok:
        raise LemmaHypothesisViolated("R29-30 fail: %r" % r2930.failures())
    dmin = {}
    for i in p.nz:
        car = p.delta(i)
        per_j = {}
        for j in p.nz:
            if abs(j) == abs(i):
                continue
            gens = [
                p.star(i, j, a, b)
                for a in p.rmod(-i, j).elements()
                for b in p.rmod(j, i).elements()
            ]
            per_j[j] = _nilspan(car, gens)
        vals = list(per_j.values())
        if any(v != vals[0] for v in vals):
            raise LemmaHypothesisViolated("star span depends on j at index %d" % i)
        dmin[i] = vals[0]
        # 2-step nilpotency with this filtration
        for u in car.elements():
            for v in car.elements():
                if car.commutator(u, v) not in dmin[i]:
                    raise LemmaHypothesisViolated("commutator outside Dmin at %d" % i)
        for v in dmin[i]:
            for u in car.elements():
                if car.add(v, u) != car.add(u, v):
                    raise LemmaHypothesisViolated("Dmin not central at %d" % i)
    for i in p.nz:
        for j in p.nz:
            if abs(i) == abs(j):
                continue
            for v in dmin[i]:
                for w in p.delta(j).elements():
                    if p.circ(i, v, j, w) != p.rmod(-i, j).zero:
                        raise LemmaHypothesisViolated("Dmin circ != 0")
                for a in p.rmod(i, j).elements():
                    if p.dot(i, v, j, a) not in dmin[j]:
                        raise LemmaHypothesisViolated("Dmin dot not into Dmin")
    return dmin
