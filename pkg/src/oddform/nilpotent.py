"""2-step nilpotent K-modules with normal forms.

A carrier holds elements (q, d): q a canonical coordinate in the abelian
quotient Q = M/M0, d a coordinate in the central K-module M0.  The group
law is (q1,d1) + (q2,d2) = (q1+q2, d1+d2+c(q1,q2)) for a section cocycle c,
and the multiplicative monoid of K acts by (q,d) -> (k q, k^2 d + chi_k(q)).
"""

from __future__ import annotations

from .modules import AbGroup, present_finite, zero_module
from .rings import BaseRing
from .sweeps import Policy, DEFAULT_POLICY, sweep


class AxiomViolated(ValueError):
    def __init__(self, axiom, witness=None):
        super().__init__("nilpotent module axiom %s violated (witness=%r)" % (axiom, witness))
        self.axiom = axiom
        self.witness = witness


class NFDelta:
    """Concrete finite 2-step nilpotent K-module."""

    def __init__(self, ring: BaseRing, Q: AbGroup, D: AbGroup, cocycle, chi, name=""):
        self.ring = ring
        self.Q = Q
        self.D = D
        self.cocycle = cocycle  # dict (q, q') -> D coords
        self.chi = chi  # dict (kelt, q) -> D coords
        self.name = name
        self.zero = (Q.zero, D.zero)
        self._elements = None

    # -- group structure -----------------------------------------------------

    def add(self, u, v):
        q1, d1 = u
        q2, d2 = v
        return (
            self.Q.add(q1, q2),
            self.D.add(self.D.add(d1, d2), self.cocycle[(q1, q2)]),
        )

    def neg(self, u):
        q, d = u
        qn = self.Q.neg(q)
        return (qn, self.D.neg(self.D.add(d, self.cocycle[(q, qn)])))

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def smul(self, n, u):
        out = self.zero
        x = u if n >= 0 else self.neg(u)
        for _ in range(abs(n)):
            out = self.add(out, x)
        return out

    def commutator(self, u, v):
        return self.add(self.sub(self.add(u, v), u), self.neg(v))

    def act_k(self, u, kelt):
        q, d = u
        k2 = self.ring.mul(kelt, kelt)
        return (
            self.Q.scale(kelt, q),
            self.D.add(self.D.scale(k2, d), self.chi[(kelt, q)]),
        )

    def tau(self, u):
        return self.add(u, self.act_k(u, self.ring.from_int(-1)))

    # -- filtration access -----------------------------------------------------

    def proj(self, u):
        return u[0]

    def sec(self, qcoords):
        return (qcoords, self.D.zero)

    def d_embed(self, dcoords):
        return (self.Q.zero, dcoords)

    def d_coords(self, u):
        if u[0] != self.Q.zero:
            raise ValueError("element not in the filtration part")
        return u[1]

    def d_scale(self, kelt, u):
        """Left K-module action on the filtration part."""
        return self.d_embed(self.D.scale(kelt, self.d_coords(u)))

    def d_elements(self):
        return [self.d_embed(d) for d in self.D.elements()]

    def elements(self):
        if self._elements is None:
            self._elements = [
                (q, d) for q in self.Q.elements() for d in self.D.elements()
            ]
        return self._elements

    @property
    def order(self):
        return self.Q.order * self.D.order

    def is_d_element(self, u):
        return u[0] == self.Q.zero


def trivial_delta(ring: BaseRing, name="0") -> NFDelta:
    q = zero_module(ring, name + ".Q")
    d = zero_module(ring, name + ".D")
    coc = {((), ()): ()}
    chi = {(k, ()): () for k in ring.elements()}
    return NFDelta(ring, q, d, coc, chi, name=name)


def delta_from_concrete(
    ring, elements, add, zero, act_k, d_elements, d_scale, key=repr, name=""
):
    """Wrap a concrete finite 2-step nilpotent K-module as an NFDelta.

    Returns (carrier, to_nf, from_nf) with element translation dicts.
    """
    elements = list(elements)
    neg = {}
    for u in elements:
        for v in elements:
            if add(u, v) == zero:
                neg[u] = v
                break
    if len(neg) != len(elements):
        raise AxiomViolated("inverses", name)

    d_set = list(d_elements)
    D, d_to, d_from = present_finite(
        ring, d_set, add, zero, d_scale, name=name + ".D"
    )

    d_lookup = set(d_set)
    rep_of = {}
    for u in elements:
        coset = sorted((add(u, v) for v in d_set), key=key)
        rep_of[u] = coset[0]
    reps = sorted(set(rep_of.values()), key=key)

    def q_add(r1, r2):
        return rep_of[add(r1, r2)]

    def q_scale(kelt, r):
        return rep_of[act_k(r, kelt)]

    Q, q_to, q_from = present_finite(ring, reps, q_add, rep_of[zero], q_scale, name=name + ".Q")

    def d_part(u, r):
        diff = add(neg[r], u)
        if diff not in d_lookup:
            diff = add(u, neg[r])
        if diff not in d_lookup:
            raise AxiomViolated("filtration-not-normal", (name, key(u)))
        return diff

    sec = {q_to[r]: r for r in reps}
    cocycle = {}
    for r1 in reps:
        for r2 in reps:
            s = add(r1, r2)
            cocycle[(q_to[r1], q_to[r2])] = d_to[d_part(s, rep_of[s])]
    chi = {}
    for k in ring.elements():
        for r in reps:
            s = act_k(r, k)
            chi[(k, q_to[r])] = d_to[d_part(s, rep_of[s])]

    carrier = NFDelta(ring, Q, D, cocycle, chi, name=name)
    to_nf = {}
    for u in elements:
        r = rep_of[u]
        to_nf[u] = (q_to[r], d_to[d_part(u, r)])
    from_nf = {v: k for k, v in to_nf.items()}
    if len(from_nf) != len(elements):
        raise AxiomViolated("normal-form-collision", name)
    return carrier, to_nf, from_nf


def quotient_delta(carrier: NFDelta, central_elts, name=""):
    """Quotient of a carrier by the subgroup generated by ``central_elts``.

    The subgroup must be normal (checked); the filtration image is D/X.
    Returns (quotient carrier, project function).
    """
    # subgroup closure (under the group law and the K-monoid action)
    sub = {carrier.zero}
    frontier = [carrier.zero]
    gens = [g for g in central_elts]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                for y in (carrier.add(x, g), carrier.add(x, carrier.neg(g))):
                    if y not in sub:
                        sub.add(y)
                        nxt.append(y)
        frontier = nxt
    for x in carrier.elements():
        for g in sub:
            if carrier.sub(carrier.add(x, g), x) not in sub:
                raise AxiomViolated("quotient-subgroup-not-normal", name)

    key = repr
    rep_of = {}
    for u in carrier.elements():
        coset = sorted((carrier.add(u, v) for v in sub), key=key)
        rep_of[u] = coset[0]
    reps = sorted(set(rep_of.values()), key=key)

    def q_add(a, b):
        return rep_of[carrier.add(a, b)]

    def q_act(a, k):
        return rep_of[carrier.act_k(a, k)]

    d_reps = sorted({rep_of[d] for d in carrier.d_elements()}, key=key)

    def q_dscale(k, a):
        return rep_of[carrier.d_scale(k, _pick_d(carrier, sub, a))]

    quot, to_nf, from_nf = delta_from_concrete(
        carrier.ring,
        reps,
        q_add,
        rep_of[carrier.zero],
        q_act,
        d_reps,
        q_dscale,
        key=key,
        name=name,
    )

    def project(u):
        return to_nf[rep_of[u]]

    return quot, project


def _pick_d(carrier, sub, rep):
    """A filtration-part preimage of a coset representative."""
    for v in sub:
        cand = carrier.add(rep, v)
        if carrier.is_d_element(cand):
            return cand
    raise AxiomViolated("quotient-filtration-preimage", repr(rep))


def nilpotent_module(
    base: AbGroup,
    quotient: AbGroup,
    cocycle_gens,
    tau_table,
    power_action,
    policy: Policy = DEFAULT_POLICY,
) -> NFDelta:
    """Public constructor: biadditive cocycle and power action given on
    quotient generators; all defining axioms verified by enumeration."""
    ring = base.ring
    Q, D = quotient, base

    def coc(q1, q2):
        v1, v2 = Q.lift(q1), Q.lift(q2)
        acc = D.zero
        for s, c1 in enumerate(v1):
            if not c1:
                continue
            for t, c2 in enumerate(v2):
                if c2:
                    acc = D.add(acc, D.smul(c1 * c2, cocycle_gens[s][t]))
        return acc

    cocycle = {(q1, q2): coc(q1, q2) for q1 in Q.elements() for q2 in Q.elements()}

    # extend chi from generators along a BFS spanning of Q
    chi = {}
    for k in ring.elements():
        table = {Q.zero: D.zero}
        frontier = [Q.zero]
        while frontier:
            nxt = []
            for q in frontier:
                for i in range(Q.ngens):
                    g = Q.gen(i)
                    q2 = Q.add(q, g)
                    if q2 in table:
                        continue
                    k2 = ring.mul(k, k)
                    val = D.add(
                        D.add(table[q], power_action[k][i]),
                        D.sub(
                            cocycle[(Q.scale(k, q), Q.scale(k, g))],
                            D.scale(k2, cocycle[(q, g)]),
                        ),
                    )
                    table[q2] = val
                    nxt.append(q2)
            frontier = nxt
        for q, v in table.items():
            chi[(k, q)] = v

    carrier = NFDelta(ring, Q, D, cocycle, chi)
    verify_nilpotent_axioms(carrier, tau_table, policy)
    return carrier


def verify_nilpotent_axioms(carrier: NFDelta, tau_table=None, policy=DEFAULT_POLICY):
    """Check the defining identities of a 2-step nilpotent K-module."""
    ring = carrier.ring
    elts = carrier.elements()
    ks = ring.elements()

    def endo(u, v, k):
        lhs = carrier.act_k(carrier.add(u, v), k)
        rhs = carrier.add(carrier.act_k(u, k), carrier.act_k(v, k))
        return None if lhs == rhs else (u, v, k)

    def monoid(u, k1, k2):
        lhs = carrier.act_k(carrier.act_k(u, k1), k2)
        rhs = carrier.act_k(u, ring.mul(k1, k2))
        return None if lhs == rhs else (u, k1, k2)

    def comm(u, v, k1, k2):
        c = carrier.commutator(u, v)
        if not carrier.is_d_element(c):
            return (u, v, "commutator not in filtration")
        lhs = carrier.commutator(carrier.act_k(u, k1), carrier.act_k(v, k2))
        rhs = carrier.d_scale(ring.mul(k1, k2), c)
        return None if lhs == rhs else (u, v, k1, k2)

    def addk(u, k1, k2):
        lhs = carrier.act_k(u, ring.add(k1, k2))
        t = carrier.tau(u)
        rhs = carrier.add(
            carrier.add(carrier.act_k(u, k1), carrier.d_scale(ring.mul(k1, k2), t)),
            carrier.act_k(u, k2),
        )
        return None if lhs == rhs else (u, k1, k2)

    def filt(d, k):
        u = carrier.d_embed(d)
        lhs = carrier.act_k(u, k)
        rhs = carrier.d_scale(ring.mul(k, k), u)
        return None if lhs == rhs else (d, k)

    for label, domains, fn in [
        ("nilpotent/endomorphism", [elts, elts, ks], endo),
        ("nilpotent/monoid", [elts, ks, ks], monoid),
        ("nilpotent/commutator-scaling", [elts, elts, ks, ks], comm),
        ("nilpotent/add-in-k", [elts, ks, ks], addk),
        ("nilpotent/filtration-square", [carrier.D.elements(), ks], filt),
    ]:
        res = sweep(label, domains, fn, policy)
        if not res.ok:
            raise AxiomViolated(label, res.witness)
    if tau_table is not None:
        for i in range(carrier.Q.ngens):
            u = carrier.sec(carrier.Q.gen(i))
            if carrier.tau(u) != carrier.d_embed(tau_table[i]):
                raise AxiomViolated("nilpotent/tau-table", i)
    return True
