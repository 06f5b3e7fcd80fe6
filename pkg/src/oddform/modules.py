"""Finitely presented abelian groups with an action of a finite base ring.

An :class:`AbGroup` is given by generators, integer relation rows and one
endomorphism matrix per ring factor idempotent.  Smith normal form of the
relation matrix yields canonical coordinates, so element equality,
enumeration and quotients are all effective.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .intlinalg import SmithNormalForm, mat_vec, mat_mul
from .rings import BaseRing

ENUMERATION_LIMIT = 1 << 16


class ActionNotWellDefined(ValueError):
    pass


class RelationViolated(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class InfiniteCarrier(ValueError):
    pass


class AbGroup:
    """Finitely presented abelian group / K-module with canonical forms."""

    def __init__(self, ring: BaseRing, ngens: int, rels, act=None, name=""):
        self.ring = ring
        self.ngens = ngens
        self.rels = [list(r) for r in rels]
        self.name = name
        s = len(ring.moduli)
        if act is None:
            if s != 1:
                raise ActionNotWellDefined(
                    "explicit action matrices required for a product ring"
                )
            act = [[[1 if i == j else 0 for j in range(ngens)] for i in range(ngens)]]
        self.act = [[list(r) for r in m] for m in act]
        snf = SmithNormalForm(self.rels or [[0] * ngens])
        self.V = snf.V
        self.Vinv = snf.Vinv
        self.dvec = [snf.d[i] if i < len(snf.d) else 0 for i in range(ngens)]
        self._scale_cache = {}
        self._elements = None
        self._validate_action()

    # -- construction checks -------------------------------------------------

    def _validate_action(self):
        ring = self.ring
        s = len(ring.moduli)
        gens = [self.gen(i) for i in range(self.ngens)]
        for t in range(s):
            for row in self.rels:
                if any(self.canon(mat_vec(row, self.act[t]))):
                    raise ActionNotWellDefined(
                        "action of factor %d does not preserve relations" % t
                    )
        for i in range(self.ngens):
            base = [1 if j == i else 0 for j in range(self.ngens)]
            total = [0] * self.ngens
            for t in range(s):
                img = mat_vec(base, self.act[t])
                total = [x + y for x, y in zip(total, img)]
                if any(self.canon([ring.moduli[t] * x for x in img])):
                    raise ActionNotWellDefined(
                        "factor %d image of generator %d not killed by %d"
                        % (t, i, ring.moduli[t])
                    )
                for u in range(s):
                    chk = mat_vec(img, self.act[u])
                    if u == t:
                        chk = [x - y for x, y in zip(chk, img)]
                    if any(self.canon(chk)):
                        raise ActionNotWellDefined(
                            "factor actions not orthogonal idempotents"
                        )
            if self.canon(total) != gens[i]:
                raise ActionNotWellDefined("factor actions do not sum to identity")

    # -- coordinates ---------------------------------------------------------

    def canon(self, intvec):
        y = mat_vec(list(intvec), self.V)
        return tuple(
            (x % d) if d else x for x, d in zip(y, self.dvec)
        )

    def lift(self, coords):
        """A fixed integer generator-combination representing ``coords``."""
        return mat_vec(list(coords), self.Vinv)

    @property
    def zero(self):
        return (0,) * self.ngens

    def gen(self, i):
        return self.canon([1 if j == i else 0 for j in range(self.ngens)])

    def add(self, a, b):
        return tuple(
            ((x + y) % d) if d else x + y for x, y, d in zip(a, b, self.dvec)
        )

    def neg(self, a):
        return tuple(((-x) % d) if d else -x for x, d in zip(a, self.dvec))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def smul(self, n: int, a):
        return tuple(((n * x) % d) if d else n * x for x, d in zip(a, self.dvec))

    def scale(self, kelt, a):
        """Action of the ring element ``kelt`` (tuple of residues)."""
        mat = self._scale_cache.get(kelt)
        if mat is None:
            acc = [[0] * self.ngens for _ in range(self.ngens)]
            for t, k in enumerate(kelt):
                if k:
                    for i in range(self.ngens):
                        for j in range(self.ngens):
                            acc[i][j] += k * self.act[t][i][j]
            mat = mat_mul(self.Vinv, mat_mul(acc, self.V))
            self._scale_cache[kelt] = mat
        y = mat_vec(list(a), mat)
        return tuple((x % d) if d else x for x, d in zip(y, self.dvec))

    # -- global structure ----------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return all(d > 0 for d in self.dvec)

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise InfiniteCarrier("infinite presentation: %s" % (self.name or "?"))
        n = 1
        for d in self.dvec:
            n *= d
        return n

    @property
    def invariant_factors(self):
        return tuple(sorted(d for d in self.dvec if d > 1))

    def elements(self):
        if self._elements is None:
            if not self.is_finite:
                raise InfiniteCarrier(
                    "cannot enumerate infinite group %s" % (self.name or "?")
                )
            if self.order > ENUMERATION_LIMIT:
                raise InfiniteCarrier(
                    "carrier %s too large to enumerate (%d)"
                    % (self.name or "?", self.order)
                )
            self._elements = [
                tuple(t)
                for t in itertools.product(*[range(d) for d in self.dvec])
            ]
        return self._elements

    def exponent(self) -> int:
        from math import lcm

        if not self.is_finite:
            raise InfiniteCarrier("infinite presentation")
        return lcm(1, *[d for d in self.dvec if d > 1])

    # -- subgroups, quotients, spans ------------------------------------------

    def span(self, elts, k_closed=False):
        """Subgroup generated by ``elts``; dict element -> integer witness
        vector over ``elts`` (K-scalings get their own witness slots when
        ``k_closed``)."""
        gens = list(elts)
        if k_closed:
            extra = []
            for e in elts:
                for t in range(len(self.ring.moduli)):
                    extra.append(self.scale(self.ring.generator(t), e))
            gens = gens + extra
        seen = {self.zero: tuple([0] * len(gens))}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for x in frontier:
                wit = seen[x]
                for i, g in enumerate(gens):
                    y = self.add(x, g)
                    if y not in seen:
                        w = list(wit)
                        w[i] += 1
                        seen[y] = tuple(w)
                        nxt.append(y)
            frontier = nxt
        return seen

    def quotient(self, sub_elts):
        """Quotient by the subgroup generated by ``sub_elts`` (K-closed).

        Returns (Q, project) where project maps coords here to Q coords.
        """
        rows = [self.lift(e) for e in sub_elts]
        for e in sub_elts:
            for t in range(len(self.ring.moduli)):
                rows.append(self.lift(self.scale(self.ring.generator(t), e)))
        q = AbGroup(
            self.ring,
            self.ngens,
            self.rels + rows,
            self.act,
            name=self.name + "/sub" if self.name else "",
        )

        def project(coords):
            return q.canon(self.lift(coords))

        return q, project

    def direct_sum(self, *others):
        return direct_sum(self, *others)


def direct_sum(*mods):
    """Direct sum with embed/project coordinate maps."""
    ring = mods[0].ring
    ngens = sum(m.ngens for m in mods)
    offs = []
    o = 0
    for m in mods:
        offs.append(o)
        o += m.ngens
    rels = []
    for m, off in zip(mods, offs):
        for r in m.rels:
            row = [0] * ngens
            row[off : off + m.ngens] = r
            rels.append(row)
    act = []
    for t in range(len(ring.moduli)):
        mat = [[0] * ngens for _ in range(ngens)]
        for m, off in zip(mods, offs):
            for i in range(m.ngens):
                for j in range(m.ngens):
                    mat[off + i][off + j] = m.act[t][i][j]
        act.append(mat)
    total = AbGroup(ring, ngens, rels, act, name="+".join(m.name or "?" for m in mods))

    def embed(idx, coords):
        vec = [0] * ngens
        vec[offs[idx] : offs[idx] + mods[idx].ngens] = mods[idx].lift(coords)
        return total.canon(vec)

    def project(idx, coords):
        vec = total.lift(coords)
        return mods[idx].canon(vec[offs[idx] : offs[idx] + mods[idx].ngens])

    return total, embed, project


@dataclass
class Hom:
    """Verified homomorphism between AbGroups, stored on generators."""

    src: AbGroup
    dst: AbGroup
    images: tuple

    def apply(self, coords):
        vec = self.src.lift(coords)
        acc = self.dst.zero
        for c, img in zip(vec, self.images):
            if c:
                acc = self.dst.add(acc, self.dst.smul(c, img))
        return acc

    def kernel_elements(self):
        return [x for x in self.src.elements() if self.apply(x) == self.dst.zero]

    def is_surjective(self) -> bool:
        return len(self.src.span(list(self.images))) == self.dst.order

    def is_bijective(self) -> bool:
        return (
            self.src.is_finite
            and self.dst.is_finite
            and self.src.order == self.dst.order
            and self.is_surjective()
        )


def hom_check(src: AbGroup, dst: AbGroup, images, k_linear=True) -> Hom:
    """Verify that generator images define a homomorphism (RelationViolated
    with the offending row otherwise); optionally check K-linearity."""
    images = [tuple(i) for i in images]
    if len(images) != src.ngens:
        raise RelationViolated("need one image per generator")
    for idx, row in enumerate(src.rels):
        acc = dst.zero
        for c, img in zip(row, images):
            if c:
                acc = dst.add(acc, dst.smul(c, img))
        if acc != dst.zero:
            raise RelationViolated("relation %d not respected" % idx, witness=row)
    hom = Hom(src, dst, tuple(images))
    if k_linear:
        for t in range(len(src.ring.moduli)):
            e_t = src.ring.generator(t)
            for i in range(src.ngens):
                lhs = hom.apply(src.scale(e_t, src.gen(i)))
                rhs = dst.scale(e_t, images[i])
                if lhs != rhs:
                    raise RelationViolated(
                        "not K-linear on generator %d, factor %d" % (i, t),
                        witness=(i, t),
                    )
    return hom


def span_with_witness(zero, add, gens):
    """BFS span in any (finite) abelian context; element -> witness vector."""
    seen = {zero: tuple([0] * len(gens))}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            wit = seen[x]
            for i, g in enumerate(gens):
                y = add(x, g)
                if y not in seen:
                    w = list(wit)
                    w[i] += 1
                    seen[y] = tuple(w)
                    nxt.append(y)
        frontier = nxt
    return seen


def present_finite(ring: BaseRing, elements, add, zero, scale, name="", box_limit=1 << 20):
    """Present a concrete finite abelian K-module as an AbGroup.

    ``elements`` is the full carrier, ``add``/``zero``/``scale`` its
    operations.  Returns (module, to_coords, from_coords).
    """
    elements = list(elements)
    gens = []
    span = {zero}
    for e in elements:
        if e not in span:
            gens.append(e)
            span = set(span_with_witness(zero, add, gens))
    witness = span_with_witness(zero, add, gens)
    if len(witness) != len(elements):
        raise RelationViolated("carrier is not generated by its own elements")

    orders = []
    for g in gens:
        n, x = 1, g
        while x != zero:
            x = add(x, g)
            n += 1
        orders.append(n)
    box = 1
    for o in orders:
        box *= o
    if box > box_limit:
        raise InfiniteCarrier("presentation box too large (%d)" % box)

    multiples = []
    for g, o in zip(gens, orders):
        ms = [zero]
        for _ in range(o - 1):
            ms.append(add(ms[-1], g))
        multiples.append(ms)

    rels = [[orders[i] if j == i else 0 for j in range(len(gens))] for i in range(len(gens))]
    for combo in itertools.product(*[range(o) for o in orders]):
        if not any(combo):
            continue
        acc = zero
        for ms, c in zip(multiples, combo):
            acc = add(acc, ms[c])
        if acc == zero:
            rels.append(list(combo))

    act = []
    for t in range(len(ring.moduli)):
        e_t = ring.generator(t)
        act.append([list(witness[scale(e_t, g)]) for g in gens])
    mod = AbGroup(ring, len(gens), rels, act, name=name)
    assert mod.order == len(elements), "presentation mismatch for %s" % name

    to_coords = {e: mod.canon(list(witness[e])) for e in elements}
    from_coords = {}
    for e, c in to_coords.items():
        if c in from_coords:
            raise RelationViolated("presentation not injective for %s" % name)
        from_coords[c] = e
    return mod, to_coords, from_coords


def zero_module(ring: BaseRing, name="0") -> AbGroup:
    return AbGroup(ring, 0, [], [[] for _ in ring.moduli], name=name)
