"""Generic graded odd form algebra machinery.

Everything here is written against the common algebra face (component
modules, Delta^0 carriers, pair/normal-form Delta arithmetic) implemented
both by the matrix-backed classical algebras and by table-backed assembled
algebras.
"""

from __future__ import annotations

import itertools

from .sweeps import CheckResult, CheckSuite, Policy, DEFAULT_POLICY, sweep


class BadIndices(ValueError):
    pass


class NotUnitary(ValueError):
    pass


class PeirceViolated(AssertionError):
    pass


class IdempotencyViolated(AssertionError):
    pass


class SteinbergViolated(AssertionError):
    pass


def signed_indices(alg):
    return [i for i in alg.indices if i != 0]


def transvection_long(alg, i, j, acoords):
    """T_ij(a) = q_i a - q_{-j} inv(a) - phi(a), for a in R_ij."""
    if 0 in (i, j) or abs(i) == abs(j):
        raise BadIndices("long transvection needs distinct nonzero |i|, |j|")
    t = alg.d_add(
        alg.d_q(i, j, acoords), alg.d_neg(alg.d_q(-j, -i, alg.comp_inv(i, j, acoords)))
    )
    return alg.d_add(t, alg.d_neg(alg.d_phi_comp(i, j, acoords)))


def transvection_short(alg, i, u_nf):
    """T_i(u) = u + q_{-i}(rho(u) - inv(pi(u))) - phi(rho(u) + pi(u))."""
    if i == 0:
        raise BadIndices("short transvection needs i != 0")
    rho = alg.rho0(i, u_nf)
    pi = alg.pi0(i, u_nf)
    pibar = alg.comp_inv(0, i, pi)
    t = alg.d_add(alg.d_embed_delta0(i, u_nf), alg.d_q(-i, i, rho))
    t = alg.d_add(t, alg.d_q(-i, 0, alg.comp(-i, 0).neg(pibar)))
    t = alg.d_add(t, alg.d_neg(alg.d_phi_comp(-i, i, rho)))
    return alg.d_add(t, alg.d_neg(alg.d_phi_comp(0, i, pi)))


def t_long_inv(alg, i, j, acoords):
    return transvection_long(alg, i, j, alg.comp(i, j).neg(acoords))


def t_short_inv(alg, i, u_nf):
    car = alg.delta0(i)[0]
    return transvection_short(alg, i, car.neg(u_nf))


def commutator(alg, g, ginv, h, hinv):
    return alg.u_mul(alg.u_mul(alg.u_mul(g, h), ginv), hinv)


def unitary_elements(alg):
    return [g for g in alg.delta_elements() if alg.is_unitary(g)]


def check_unitary_group(alg, policy: Policy = DEFAULT_POLICY, collect=False) -> CheckSuite:
    """Group axioms of U(R, Delta) on the full Cayley table (small carriers)."""
    suite = CheckSuite("unitary-group", collect=collect)
    us = unitary_elements(alg)
    one = alg.u_one()
    suite.record(CheckResult("unitary/identity-member", alg.is_unitary(one)))
    suite.run(
        "unitary/closure",
        [us, us],
        lambda g, h: None if alg.is_unitary(alg.u_mul(g, h)) else (g, h),
        policy,
    )
    suite.run(
        "unitary/identity",
        [us],
        lambda g: None if alg.u_mul(g, one) == g and alg.u_mul(one, g) == g else g,
        policy,
    )
    suite.run(
        "unitary/inverses",
        [us],
        lambda g: None
        if alg.u_mul(g, alg.u_inv(g)) == one and alg.u_mul(alg.u_inv(g), g) == one
        else g,
        policy,
    )
    suite.run(
        "unitary/associativity",
        [us, us, us],
        lambda g, h, k: None
        if alg.u_mul(alg.u_mul(g, h), k) == alg.u_mul(g, alg.u_mul(h, k))
        else (g, h, k),
        policy,
    )
    return suite


def _family(suite, label, instances, policy):
    """Aggregate a family of sweeps (one per index pattern) into one result."""
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


def check_steinberg_relations(alg, policy: Policy = DEFAULT_POLICY, collect=False) -> CheckSuite:
    """All ten Steinberg relations among elementary transvections."""
    suite = CheckSuite("steinberg", collect=collect)
    idx = signed_indices(alg)
    if alg.ell < 3:
        raise BadIndices("Steinberg relation sweep needs Peirce rank >= 3")

    def pairs():
        return [(i, j) for i in idx for j in idx if abs(i) != abs(j)]

    def relem(i, j):
        return alg.comp(i, j).elements()

    def delem(i):
        return alg.delta0(i)[0].elements()

    def T(i, j, a):
        return transvection_long(alg, i, j, a)

    def Ti(i, u):
        return transvection_short(alg, i, u)

    # (1) additivity in R_ij
    _family(
        suite,
        "steinberg/R1-additive-long",
        [
            (
                [relem(i, j), relem(i, j)],
                lambda a, b, i=i, j=j: None
                if alg.u_mul(T(i, j, a), T(i, j, b)) == T(i, j, alg.comp(i, j).add(a, b))
                else (i, j, a, b),
            )
            for i, j in pairs()
        ],
        policy,
    )
    # (2) T_ij(a) = T_{-j,-i}(-inv a)
    _family(
        suite,
        "steinberg/R2-mirror",
        [
            (
                [relem(i, j)],
                lambda a, i=i, j=j: None
                if T(i, j, a) == T(-j, -i, alg.comp(-j, -i).neg(alg.comp_inv(i, j, a)))
                else (i, j, a),
            )
            for i, j in pairs()
        ],
        policy,
    )
    # (3) additivity in Delta^0
    _family(
        suite,
        "steinberg/R3-additive-short",
        [
            (
                [delem(j), delem(j)],
                lambda u, v, j=j: None
                if alg.u_mul(Ti(j, u), Ti(j, v)) == Ti(j, alg.delta0(j)[0].add(u, v))
                else (j, u, v),
            )
            for j in idx
        ],
        policy,
    )
    # (4) [T_ij(a), T_jk(b)] = T_ik(ab)
    _family(
        suite,
        "steinberg/R4-a2",
        [
            (
                [relem(i, j), relem(j, k)],
                lambda a, b, i=i, j=j, k=k: None
                if commutator(alg, T(i, j, a), T(i, j, alg.comp(i, j).neg(a)), T(j, k, b), T(j, k, alg.comp(j, k).neg(b)))
                == T(i, k, alg.comp_mul(i, j, k, a, b))
                else (i, j, k, a, b),
            )
            for i in idx
            for j in idx
            for k in idx
            if len({abs(i), abs(j), abs(k)}) == 3
        ],
        policy,
    )
    # (5) [T_ij(a), T_kl(b)] = 1 for four distinct absolute values
    _family(
        suite,
        "steinberg/R5-commute",
        [
            (
                [relem(i, j), relem(k, l)],
                lambda a, b, i=i, j=j, k=k, l=l: None
                if commutator(alg, T(i, j, a), T(i, j, alg.comp(i, j).neg(a)), T(k, l, b), T(k, l, alg.comp(k, l).neg(b)))
                == alg.u_one()
                else (i, j, k, l, a, b),
            )
            for i in idx
            for j in idx
            for k in idx
            for l in idx
            if len({abs(i), abs(j), abs(k), abs(l)}) == 4
        ],
        policy,
    )
    # (6) [T_{-i,j}(a), T_ji(b)] = T_i(phi(ab))
    _family(
        suite,
        "steinberg/R6-b2-long",
        [
            (
                [relem(-i, j), relem(j, i)],
                lambda a, b, i=i, j=j: None
                if commutator(alg, T(-i, j, a), T(-i, j, alg.comp(-i, j).neg(a)), T(j, i, b), T(j, i, alg.comp(j, i).neg(b)))
                == Ti(i, alg.phi_delta0(i, alg.comp_mul(-i, j, i, a, b)))
                else (i, j, a, b),
            )
            for i in idx
            for j in idx
            if abs(i) != abs(j)
        ],
        policy,
    )
    # (7) [T_ij(a), T_ik(b)] = 1
    _family(
        suite,
        "steinberg/R7-same-row",
        [
            (
                [relem(i, j), relem(i, k)],
                lambda a, b, i=i, j=j, k=k: None
                if commutator(alg, T(i, j, a), T(i, j, alg.comp(i, j).neg(a)), T(i, k, b), T(i, k, alg.comp(i, k).neg(b)))
                == alg.u_one()
                else (i, j, k, a, b),
            )
            for i in idx
            for j in idx
            for k in idx
            if len({abs(i), abs(j), abs(k)}) == 3
        ],
        policy,
    )
    # (8) [T_i(u), T_j(v)] = T_{-i,j}(-inv(pi(u)) pi(v))
    _family(
        suite,
        "steinberg/R8-b2-short",
        [
            (
                [delem(i), delem(j)],
                lambda u, v, i=i, j=j: None
                if commutator(alg, Ti(i, u), t_short_inv(alg, i, u), Ti(j, v), t_short_inv(alg, j, v))
                == T(-i, j, alg.comp(-i, j).neg(alg.circ(i, u, j, v)))
                else (i, j, u, v),
            )
            for i in idx
            for j in idx
            if abs(i) != abs(j)
        ],
        policy,
    )
    # (9) [T_i(u), T_jk(a)] = 1
    _family(
        suite,
        "steinberg/R9-short-long-commute",
        [
            (
                [delem(i), relem(j, k)],
                lambda u, a, i=i, j=j, k=k: None
                if commutator(alg, Ti(i, u), t_short_inv(alg, i, u), T(j, k, a), T(j, k, alg.comp(j, k).neg(a)))
                == alg.u_one()
                else (i, j, k, u, a),
            )
            for i in idx
            for j in idx
            for k in idx
            if len({abs(i), abs(j), abs(k)}) == 3
        ],
        policy,
    )
    # (10) [T_i(u), T_ij(a)] = T_{-i,j}(rho(u) a) T_j(-(u . (-a)))
    def rel10(u, a, i, j):
        car = alg.delta0(j)[0]
        lhs = commutator(alg, Ti(i, u), t_short_inv(alg, i, u), T(i, j, a), T(i, j, alg.comp(i, j).neg(a)))
        rhs = alg.u_mul(
            T(-i, j, alg.tri(i, u, j, a)),
            Ti(j, car.neg(alg.dot(i, u, j, alg.comp(i, j).neg(a)))),
        )
        return None if lhs == rhs else (i, j, u, a)

    _family(
        suite,
        "steinberg/R10-short-action",
        [
            ([delem(i), relem(i, j)], lambda u, a, i=i, j=j: rel10(u, a, i, j))
            for i, j in pairs()
        ],
        policy,
    )
    return suite


def check_peirce(alg, policy: Policy = DEFAULT_POLICY, collect=False) -> CheckSuite:
    """The Peirce decomposition bullets, component-wise."""
    suite = CheckSuite("peirce", collect=collect)
    idx = list(alg.indices)
    nz = [i for i in idx if i != 0]
    ks = alg.ring.elements()

    def gens(i, j):
        m = alg.comp(i, j)
        return [m.gen(t) for t in range(m.ngens)] or []

    # graded multiplication: R_ij R_kl = 0 for j != k, R_ij R_jk <= R_ik
    insts = []
    for i, j in itertools.product(idx, idx):
        for k, l in itertools.product(idx, idx):
            gij, gkl = gens(i, j), gens(k, l)
            if not gij or not gkl:
                continue
            insts.append(
                (
                    [gij, gkl],
                    lambda a, b, i=i, j=j, k=k, l=l: None
                    if _graded_mul_ok(alg, i, j, a, k, l, b)
                    else (i, j, k, l),
                )
            )
    _family(suite, "peirce/graded-multiplication", insts, policy)

    # involution grading
    _family(
        suite,
        "peirce/involution-grading",
        [
            (
                [gens(i, j)],
                lambda a, i=i, j=j: None if alg.inv_in_component(i, j, a) else (i, j, a),
            )
            for i in idx
            for j in idx
            if gens(i, j)
        ],
        policy,
    )

    # pi iso and rho = 0 on Delta^i_j (i != 0)
    insts = []
    for i in nz:
        for j in idx:
            es = alg.comp(i, j).elements()
            insts.append(
                (
                    [es],
                    lambda a, i=i, j=j: None
                    if alg.d_pi(alg.d_q(i, j, a)) == ({(i, j): a} if a != alg.comp(i, j).zero else {})
                    and alg.d_rho(alg.d_q(i, j, a)) == {}
                    else (i, j, a),
                )
            )
    _family(suite, "peirce/q-pi-rho", insts, policy)

    # phi(R_{-i,i}) inside D_i; pi, rho ranges of Delta^0_i
    insts = []
    for i in idx:
        car = alg.delta0(i)[0]
        hs = alg.comp(-i, i).elements()
        insts.append(
            (
                [hs],
                lambda h, i=i, car=car: None if car.is_d_element(alg.phi_delta0(i, h)) else (i, h),
            )
        )
        insts.append(
            (
                [car.elements()],
                lambda u, i=i: None
                if set(alg.d_pi(alg.d_embed_delta0(i, u))) <= {(0, i)}
                and set(alg.d_rho(alg.d_embed_delta0(i, u))) <= {(-i, i)}
                else (i, u),
            )
        )
    _family(suite, "peirce/delta0-ranges", insts, policy)

    # action grading on q- and Delta^0-pieces
    insts = []
    for i in nz:
        for j in idx:
            for k, l in itertools.product(idx, idx):
                gij, gkl = gens(i, j), gens(k, l)
                if not gij or not gkl:
                    continue

                def q_act(a, b, i=i, j=j, k=k, l=l):
                    res = alg.d_act_ring(alg.d_q(i, j, a), {(k, l): b}, alg.ring.zero)
                    if j != k:
                        return None if res == alg.d_zero() else (i, j, k, l)
                    want = alg.d_q(i, l, alg.comp_mul(i, j, l, a, b))
                    return None if res == want else (i, j, k, l)

                insts.append(([gij, gkl], q_act))
    _family(suite, "peirce/action-grading-q", insts, policy)

    insts = []
    for i in idx:
        car = alg.delta0(i)[0]
        for k, l in itertools.product(idx, idx):
            gkl = gens(k, l)
            if not gkl:
                continue

            def d_act(u, b, i=i, k=k, l=l, car=car):
                res = alg.d_act_ring(alg.d_embed_delta0(i, u), {(k, l): b}, alg.ring.zero)
                if k != i:
                    return None if res == alg.d_zero() else (i, k, l)
                want = alg.d_embed_delta0(l, alg.dot(i, u, l, b))
                return None if res == want else (i, k, l, u, b)

            insts.append(([car.elements(), gkl], d_act))
    _family(suite, "peirce/action-grading-delta0", insts, policy)

    # K-invariance
    insts = []
    for i in nz:
        for j in idx:
            g = gens(i, j)
            if not g:
                continue
            insts.append(
                (
                    [g, ks],
                    lambda a, k, i=i, j=j: None
                    if alg.d_act_ring(alg.d_q(i, j, a), {}, k) == alg.d_q(i, j, alg.comp_scale(k, i, j, a))
                    else (i, j, a, k),
                )
            )
    _family(suite, "peirce/k-invariance-q", insts, policy)

    if hasattr(alg, "check_delta_decomposition"):
        suite.record(alg.check_delta_decomposition(policy))
    return suite


def _graded_mul_ok(alg, i, j, a, k, l, b):
    supp = alg.graded_mul_support(i, j, a, k, l, b)
    if j != k:
        return not supp
    return set(supp) <= {(i, l)}


def check_idempotency(alg, policy: Policy = DEFAULT_POLICY, collect=False) -> CheckSuite:
    """Generation conditions and the short exact sequences."""
    suite = CheckSuite("idempotency", collect=collect)
    idx = list(alg.indices)
    nz = [i for i in idx if i != 0]
    for i in idx:
        for j in idx:
            m = alg.comp(i, j)
            if m.order == 1:
                continue
            for k in nz:
                if abs(k) in (abs(i), abs(j)):
                    continue
                prods = []
                for kk in (k, -k):
                    m1, m2 = alg.comp(i, kk), alg.comp(kk, j)
                    for s in range(m1.ngens):
                        for t in range(m2.ngens):
                            prods.append(alg.comp_mul(i, kk, j, m1.gen(s), m2.gen(t)))
                if len(m.span(prods, k_closed=True)) != m.order:
                    suite.record(
                        CheckResult("idempotency/long", False, witness=(i, j, k))
                    )
                else:
                    suite.record(CheckResult("idempotency/long", True))
    for i in nz:
        car = alg.delta0(i)[0]
        for j in nz:
            if abs(j) == abs(i):
                continue
            gens = []
            for jj in (j, -j):
                cj = alg.delta0(jj)[0]
                for u in cj.elements():
                    for a in alg.comp(jj, i).elements():
                        gens.append(alg.dot(jj, u, i, a))
            for h in alg.comp(-i, i).elements():
                gens.append(alg.phi_delta0(i, h))
            span = _nilpotent_span(car, gens)
            if len(span) != car.order:
                suite.record(CheckResult("idempotency/short", False, witness=(i, j)))
            else:
                suite.record(CheckResult("idempotency/short", True))
    # exactness of 0 -> D_i -> Delta^0_i -> R_{0i} -> 0
    for i in idx:
        car = alg.delta0(i)[0]
        kernel = {u for u in car.elements() if alg.pi0(i, u) == alg.comp(0, i).zero}
        image = {alg.pi0(i, u) for u in car.elements()}
        ok = kernel == set(car.d_elements()) and len(image) == alg.comp(0, i).order
        suite.record(CheckResult("idempotency/exact-sequence", ok, witness=None if ok else i))
    return suite


def _nilpotent_span(car, gens):
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
