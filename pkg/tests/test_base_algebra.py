import itertools
import random

import pytest

from oddform.intlinalg import SmithNormalForm, smith_normal_form, mat_mul, xgcd
from oddform.rings import BaseRing, FiniteRing, parse_ring_spec, parse_coefficient_ring, RingSpecError
from oddform.modules import (
    AbGroup,
    ActionNotWellDefined,
    RelationViolated,
    hom_check,
    present_finite,
    zero_module,
)
from oddform.nilpotent import AxiomViolated, delta_from_concrete, nilpotent_module, trivial_delta


def brute_quotient_order(rels, n, bound=13):
    """Oracle: count cosets of the relation lattice inside a box.

    The box side is a common multiple of all invariant factors, so counting
    box points modulo the lattice gives the exact group order.
    """
    from math import lcm

    d, _, _ = smith_normal_form(rels)
    facs = [d[i][i] for i in range(min(len(d), n))]
    if any(f == 0 for f in facs) or len(facs) < n:
        return None
    side = lcm(1, *[f for f in facs if f])
    lat = SmithNormalForm(rels)
    count = 0
    from oddform.intlinalg import lattice_membership

    reps = set()
    for pt in itertools.product(range(side), repeat=n):
        red = []
        # reduce pt modulo the lattice by canonical form: use SNF coords
        y = [sum(pt[i] * lat.V[i][j] for i in range(n)) for j in range(n)]
        c = tuple(y[j] % facs[j] for j in range(n))
        reps.add(c)
    return len(reps)


def test_xgcd():
    rnd = random.Random(1)
    for _ in range(200):
        a, b = rnd.randint(-90, 90), rnd.randint(-90, 90)
        g, x, y = xgcd(a, b)
        assert g >= 0 and x * a + y * b == g


def test_snf_zero_matrix():
    d, u, v = smith_normal_form([[0]])
    assert d == [[0]]


def test_snf_identity_fixed():
    d, u, v = smith_normal_form([[1, 0], [0, 1]])
    assert d[0][0] == 1 and d[1][1] == 1


def test_snf_hand_example():
    # d1 = gcd of entries = 2, d1*d2 = |det| = |2*8-4*6| = 8 -> diag(2, 4)
    snf = SmithNormalForm([[2, 4], [6, 8]])
    assert snf.d == [2, 4]
    # transforms certify the factorization
    uav = mat_mul(snf.U, mat_mul([[2, 4], [6, 8]], snf.V))
    assert uav == snf.D
    vvi = mat_mul(snf.V, snf.Vinv)
    assert vvi == [[1, 0], [0, 1]]


def test_snf_random_properties():
    rnd = random.Random(7)
    for _ in range(60):
        r, c = rnd.randint(1, 4), rnd.randint(1, 4)
        a = [[rnd.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        snf = SmithNormalForm(a)
        uav = mat_mul(snf.U, mat_mul(a, snf.V))
        assert uav == snf.D
        assert mat_mul(snf.V, snf.Vinv) == [
            [1 if i == j else 0 for j in range(c)] for i in range(c)
        ]
        ds = [x for x in snf.d if x]
        for x, y in zip(ds, ds[1:]):
            assert y % x == 0
        # idempotence: SNF of D is D again
        snf2 = SmithNormalForm(snf.D)
        assert snf2.d == snf.d


def test_ring_spec_parse():
    assert parse_ring_spec("Z/4").moduli == (4,)
    assert parse_ring_spec("z/2XZ/3").moduli == (2, 3)
    with pytest.raises(RingSpecError):
        parse_ring_spec("Z/1")
    with pytest.raises(RingSpecError):
        parse_ring_spec("GF(4)")


def test_matrix_ring_shorthand():
    d = parse_coefficient_ring("M2(Z/2)")
    assert d.order == 16
    assert d.is_associative()
    assert not d.is_commutative()


def test_fp_module_order_two():
    k = BaseRing((2,))
    m = AbGroup(k, 1, [[2]])
    assert m.order == 2
    assert m.add(m.gen(0), m.gen(0)) == m.zero


def test_fp_module_snf_derived():
    # SNF of [[2,2],[4,0]] has invariant factors (2, 4): order 8
    k = BaseRing((4,))
    m = AbGroup(k, 2, [[2, 2], [4, 0]])
    assert m.order == 8
    assert m.invariant_factors == (2, 4)


def test_fp_module_infinite_guarded():
    k = BaseRing((3,))
    with pytest.raises(ActionNotWellDefined):
        # free rank 1 admits no Z/3-module structure (3x != 0)
        AbGroup(k, 1, [])


def test_fp_module_order_matches_brute_force():
    rnd = random.Random(3)
    from math import lcm

    for _ in range(25):
        n = rnd.randint(1, 3)
        rels = [
            [rnd.randint(-4, 4) for _ in range(n)] for _ in range(rnd.randint(n, n + 2))
        ]
        d, _, _ = smith_normal_form(rels)
        facs = [d[i][i] if i < len(d) else 0 for i in range(n)]
        if any(f == 0 for f in facs):
            continue
        exp = lcm(1, *[f for f in facs if f > 1])
        k = BaseRing((exp,)) if exp > 1 else BaseRing((2,))
        rels2 = rels + ([[exp if i == j else 0 for j in range(n)] for i in range(n)] if exp > 1 else [])
        m = AbGroup(k, n, rels2)
        oracle = brute_quotient_order(rels2, n)
        assert oracle == m.order


def test_fp_quotient_examples():
    k = BaseRing((4,))
    z4 = AbGroup(k, 1, [[4]])
    q, proj = z4.quotient([z4.zero])
    assert q.order == 4 and proj(z4.gen(0)) == q.gen(0)
    # Z/4 / <2> = Z/2, oracle by coset enumeration
    two = z4.smul(2, z4.gen(0))
    q2, proj2 = z4.quotient([two])
    cosets = {tuple(sorted(map(repr, (z4.add(x, s) for s in z4.span([two]))))) for x in z4.elements()}
    assert q2.order == len(cosets) == 2
    # (Z/2 + Z/2) / <(1,1)> = Z/2
    k2 = BaseRing((2,))
    m = AbGroup(k2, 2, [[2, 0], [0, 2]])
    diag = m.add(m.gen(0), m.gen(1))
    q3, _ = m.quotient([diag])
    assert q3.order == 2


def test_fp_quotient_composes():
    rnd = random.Random(11)
    k = BaseRing((8,))
    for _ in range(20):
        n = rnd.randint(1, 3)
        m = AbGroup(k, n, [[8 if i == j else 0 for j in range(n)] for i in range(n)])
        elts = m.elements()
        a = [elts[rnd.randrange(len(elts))] for _ in range(2)]
        b = [elts[rnd.randrange(len(elts))] for _ in range(2)]
        q1, p1 = m.quotient(a)
        q2, p2 = q1.quotient([p1(x) for x in b])
        q12, _ = m.quotient(a + b)
        assert q2.invariant_factors == q12.invariant_factors


def test_hom_check():
    k = BaseRing((4,))
    z4 = AbGroup(k, 1, [[4]])
    z2 = AbGroup(k, 1, [[2]])
    # zero map always valid
    hom_check(z4, z2, [z2.zero])
    # Z/4 -> Z/2, x -> 1 valid
    h = hom_check(z4, z2, [z2.gen(0)])
    assert h.apply(z4.smul(2, z4.gen(0))) == z2.zero
    # Z/2 -> Z/4, x -> 1 violates 2x = 0
    with pytest.raises(RelationViolated):
        hom_check(z2, z4, [z4.gen(0)])


def test_present_finite_roundtrip():
    k = BaseRing((2, 3))
    elts = k.elements()
    m, to_c, from_c = present_finite(
        k, elts, k.add, k.zero, lambda ke, x: k.mul(ke, x), name="K"
    )
    assert m.order == 6
    for a in elts:
        for b in elts:
            assert from_c[m.add(to_c[a], to_c[b])] == k.add(a, b)


def test_nilpotent_module_abelian_case():
    # M0 = M: quotient trivial, all axioms trivial
    k = BaseRing((2,))
    d = AbGroup(k, 1, [[2]])
    q = zero_module(k)
    carrier = nilpotent_module(d, q, [], [], {ke: [] for ke in k.elements()})
    assert carrier.order == 2


def test_nilpotent_module_z4_over_z2_filtration():
    # Z/4 with filtration 2Z/4: carry cocycle is biadditive here
    k = BaseRing((4,))
    d = AbGroup(k, 1, [[2]], act=[[[1]]])
    q = AbGroup(k, 1, [[2]], act=[[[1]]])
    coc = [[d.gen(0)]]
    tau = [d.zero]
    power = {ke: [d.smul((ke[0] * (ke[0] - 1)) // 2, d.gen(0))] for ke in k.elements()}
    # chi_k(g) must make act consistent: u*k = k^2-like multiple; derive via
    # the integer model n -> (n*k, carry): brute-force the right table instead
    carrier = nilpotent_module(d, q, coc, tau, power)
    u = carrier.sec(q.gen(0))
    two = carrier.add(u, u)
    assert two == carrier.d_embed(d.gen(0))
    assert carrier.add(two, two) == carrier.zero


def test_nilpotent_module_rejects_bad_cocycle():
    k = BaseRing((2,))
    d = AbGroup(k, 1, [[2]])
    q = AbGroup(k, 2, [[2, 0], [0, 2]])
    bad_power = {ke: [d.zero, d.zero] for ke in k.elements()}
    coc = [[d.zero, d.gen(0)], [d.zero, d.zero]]
    with pytest.raises(AxiomViolated):
        # tau table inconsistent with the asymmetric cocycle action rules
        nilpotent_module(d, q, coc, [d.gen(0), d.gen(0)], bad_power)


def test_delta_from_concrete_heisenberg():
    # mod-2 Heisenberg group: pairs ((a,b), c) with cocycle a'*b
    k = BaseRing((2,))

    def add(u, v):
        (a1, b1, c1), (a2, b2, c2) = u, v
        return ((a1 + a2) % 2, (b1 + b2) % 2, (c1 + c2 + b1 * a2) % 2)

    elems = [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]
    d_elems = [(0, 0, 0), (0, 0, 1)]

    def act_k(u, ke):
        return u if ke == (1,) else (0, 0, 0)

    def d_scale(ke, u):
        return u if ke == (1,) else (0, 0, 0)

    carrier, to_nf, from_nf = delta_from_concrete(
        k, elems, add, (0, 0, 0), act_k, d_elems, d_scale, name="heis"
    )
    assert carrier.order == 8
    x, y = to_nf[(1, 0, 0)], to_nf[(0, 1, 0)]
    comm = carrier.commutator(x, y)
    assert comm != carrier.zero and carrier.is_d_element(comm)
    for u in elems:
        for v in elems:
            assert from_nf[carrier.add(to_nf[u], to_nf[v])] == add(u, v)


def test_trivial_delta():
    k = BaseRing((3,))
    t = trivial_delta(k)
    assert t.order == 1 and t.add(t.zero, t.zero) == t.zero
