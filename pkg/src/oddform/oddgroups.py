"""Hermitian groups, odd form groups and sesquiquadratic maps.

The free odd form parameter on a hermitian group (M, H) is the group
phi(H) + (free part on chosen generators); its finite quotients by central
difference subgroups are the carriers used by the coordinatization and
central-extension pipelines.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlinalg import SmithNormalForm
from .modules import AbGroup, Hom, hom_check, zero_module, InfiniteCarrier
from .sweeps import Policy, DEFAULT_POLICY, CheckResult, CheckSuite, VerificationError, sweep


class IdentityViolated(VerificationError):
    pass


class GeneratorConstraintViolated(ValueError):
    def __init__(self, i):
        super().__init__("generator %d violates h + <m,m> + bar(h) = 0" % i)
        self.index = i


class PairMismatch(ValueError):
    def __init__(self, i, what):
        super().__init__("difference pair %d: %s differ" % (i, what))
        self.index = i


class ImageConstraintViolated(ValueError):
    pass


class FactorObstruction(ValueError):
    pass


class AssocViolated(ValueError):
    pass


class BiadditiveMap:
    """Biadditive map stored on generator pairs, extended by lifts."""

    def __init__(self, src1: AbGroup, src2: AbGroup, dst: AbGroup, table):
        self.src1, self.src2, self.dst = src1, src2, dst
        self.table = table  # table[s][t] = dst coords

    def __call__(self, a, b):
        v1, v2 = self.src1.lift(a), self.src2.lift(b)
        acc = self.dst.zero
        for s, c1 in enumerate(v1):
            if not c1:
                continue
            for t, c2 in enumerate(v2):
                if c2:
                    acc = self.dst.add(acc, self.dst.smul(c1 * c2, self.table[s][t]))
        return acc

    @staticmethod
    def from_function(src1, src2, dst, fn):
        table = [[fn(src1.gen(s), src2.gen(t)) for t in range(src2.ngens)] for s in range(src1.ngens)]
        m = BiadditiveMap(src1, src2, dst, table)
        return m


class HermitianGroup:
    """(M, H) with an involution on H and a biadditive pairing M x M -> H."""

    def __init__(self, M: AbGroup, H: AbGroup, inv: Hom, pairing: BiadditiveMap, check=True):
        self.M, self.H = M, H
        self.inv = inv
        self.pairing = pairing
        if check:
            for i in range(H.ngens):
                g = H.gen(i)
                if inv.apply(inv.apply(g)) != g:
                    raise IdentityViolated(CheckResult("hermitian/involution-order", False, witness=i))
            for s in range(M.ngens):
                for t in range(M.ngens):
                    lhs = inv.apply(pairing(M.gen(s), M.gen(t)))
                    rhs = pairing(M.gen(t), M.gen(s))
                    if lhs != rhs:
                        raise IdentityViolated(CheckResult("hermitian/pairing-symmetry", False, witness=(s, t)))

    def bar(self, h):
        return self.inv.apply(h)

    def pair(self, m1, m2):
        return self.pairing(m1, m2)


@dataclass
class OddFormGroupData:
    """An odd form group: hermitian pair plus parameter carrier and maps."""

    herm: HermitianGroup
    carrier: object  # FreeParam / FiniteParam / NFDelta-backed wrapper
    phi: object  # H coords -> carrier element
    pi: object  # carrier element -> M coords
    rho: object  # carrier element -> H coords


def check_odd_form_group(data: OddFormGroupData, policy: Policy = DEFAULT_POLICY, collect=False) -> CheckSuite:
    """Verify the nine defining identities plus the two stated consequences."""
    herm, car = data.herm, data.carrier
    M, H = herm.M, herm.H
    phi, pi, rho = data.phi, data.pi, data.rho
    suite = CheckSuite("odd-form-group", collect=collect)
    hs = H.elements()
    us = list(car.elements())

    suite.run("ofg/phi-kills-norms", [hs], lambda h: None if phi(H.add(h, herm.bar(h))) == car.zero else h, policy)
    suite.run("ofg/phi-additive", [hs, hs], lambda h1, h2: None if phi(H.add(h1, h2)) == car.add(phi(h1), phi(h2)) else (h1, h2), policy)
    suite.run(
        "ofg/commutator",
        [us, us],
        lambda u, v: None
        if car.add(u, v) == car.sub(car.add(v, u), phi(herm.pair(pi(u), pi(v))))
        else (u, v),
        policy,
    )
    suite.run("ofg/phi-kills-squares", [M.elements()], lambda m: None if phi(herm.pair(m, m)) == car.zero else m, policy)
    suite.run("ofg/pi-additive", [us, us], lambda u, v: None if pi(car.add(u, v)) == M.add(pi(u), pi(v)) else (u, v), policy)
    suite.run(
        "ofg/rho-addition",
        [us, us],
        lambda u, v: None
        if rho(car.add(u, v)) == H.add(H.sub(rho(u), herm.pair(pi(u), pi(v))), rho(v))
        else (u, v),
        policy,
    )
    suite.run("ofg/pi-phi-zero", [hs], lambda h: None if pi(phi(h)) == M.zero else h, policy)
    suite.run("ofg/rho-phi", [hs], lambda h: None if rho(phi(h)) == H.sub(h, herm.bar(h)) else h, policy)
    suite.run(
        "ofg/rho-norm",
        [us],
        lambda u: None
        if H.add(H.add(rho(u), herm.pair(pi(u), pi(u))), herm.bar(rho(u))) == H.zero
        else u,
        policy,
    )
    # consequences stated after the definition
    suite.run("ofg/rho-zero", [[0]], lambda _: None if rho(car.zero) == H.zero else "rho(0)", policy)
    suite.run("ofg/rho-neg", [us], lambda u: None if rho(car.neg(u)) == herm.bar(rho(u)) else u, policy)
    return suite


class FreeParam:
    """Free odd form parameter: phi(H) + sum of Z u_g (possibly infinite)."""

    def __init__(self, herm: HermitianGroup, gens):
        self.herm = herm
        self.gens = list(gens)  # (m coords, h coords)
        H, M = herm.H, herm.M
        for i, (m, h) in enumerate(self.gens):
            if H.add(H.add(h, herm.pair(m, m)), herm.bar(h)) != H.zero:
                raise GeneratorConstraintViolated(i)
        ker = [H.add(H.gen(i), herm.bar(H.gen(i))) for i in range(H.ngens)]
        ker += [herm.pair(M.gen(s), M.gen(s)) for s in range(M.ngens)]
        self.phiH, self.phi_proj = H.quotient(ker)
        self.zero = ((0,) * len(self.gens), self.phiH.zero)

    # elements are (kvec, c)

    def _coc(self, k1, k2):
        H = self.herm.H
        acc = H.zero
        for a, (ma, _) in enumerate(self.gens):
            if not k2[a]:
                continue
            for b, (mb, _) in enumerate(self.gens):
                if b > a and k1[b]:
                    acc = H.add(acc, H.smul(-k1[b] * k2[a], self.herm.pair(mb, ma)))
        return self.phi_proj(acc)

    def add(self, u, v):
        k1, c1 = u
        k2, c2 = v
        k = tuple(x + y for x, y in zip(k1, k2))
        return (k, self.phiH.add(self.phiH.add(c1, c2), self._coc(k1, k2)))

    def neg(self, u):
        k, c = u
        kn = tuple(-x for x in k)
        return (kn, self.phiH.neg(self.phiH.add(c, self._coc(k, kn))))

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def smul(self, n, u):
        acc = self.zero
        x = u if n >= 0 else self.neg(u)
        for _ in range(abs(n)):
            acc = self.add(acc, x)
        return acc

    def generator(self, i):
        k = tuple(1 if j == i else 0 for j in range(len(self.gens)))
        return (k, self.phiH.zero)

    def phi(self, h):
        return ((0,) * len(self.gens), self.phi_proj(h))

    def phi_lift(self, c):
        """A fixed H-representative of a phi(H) coordinate."""
        return self.herm.H.canon(self.phiH.lift(c))

    def phi_rep(self, c):
        return self.phi_lift(c)

    def pi(self, u):
        M = self.herm.M
        acc = M.zero
        for kg, (m, _) in zip(u[0], self.gens):
            if kg:
                acc = M.add(acc, M.smul(kg, m))
        return acc

    def rho(self, u):
        herm, H = self.herm, self.herm.H
        k, c = u
        total_rho = None
        total_pi = None
        M = herm.M
        for kg, (m, h) in zip(k, self.gens):
            if not kg:
                continue
            block_rho = H.sub(H.smul(kg, h), H.smul(kg * (kg - 1) // 2, herm.pair(m, m)))
            block_pi = M.smul(kg, m)
            if total_rho is None:
                total_rho, total_pi = block_rho, block_pi
            else:
                total_rho = H.add(H.sub(total_rho, herm.pair(total_pi, block_pi)), block_rho)
                total_pi = M.add(total_pi, block_pi)
        hc = self.phi_lift(c)
        phi_rho = H.sub(hc, herm.bar(hc))
        if total_rho is None:
            return phi_rho
        return H.add(total_rho, phi_rho)  # phi part has pi = 0, no cross term

    def elements(self):
        if self.gens:
            raise InfiniteCarrier("free odd form parameter is infinite; quotient first")
        return [((), c) for c in self.phiH.elements()]

    @property
    def order(self):
        if self.gens:
            raise InfiniteCarrier("free odd form parameter is infinite")
        return self.phiH.order


class FiniteParam:
    """Finite quotient of a free odd form parameter by a central subgroup."""

    def __init__(self, free: FreeParam, x_elements):
        self.free = free
        self.herm = free.herm
        r = len(free.gens)
        for x in x_elements:
            if free.pi(x) != free.herm.M.zero or free.rho(x) != free.herm.H.zero:
                raise PairMismatch(-1, "pi/rho of a quotient generator")
        theta = [list(x[0]) for x in x_elements] or [[0] * r]
        snf = SmithNormalForm(theta)
        self._snf = snf
        self.dlat = [snf.d[i] if i < len(snf.d) else 0 for i in range(r)]
        if r and any(d == 0 for d in self.dlat):
            raise InfiniteCarrier("quotient odd form parameter is infinite")
        # phi-part of X: images of the kernel lattice of theta
        kernel_rows = [snf.U[i] for i in range(len(theta)) if i >= len(snf.d) or snf.d[i] == 0]
        x0 = []
        for row in kernel_rows:
            acc = free.zero
            for n_i, x in zip(row, x_elements):
                acc = free.add(acc, free.smul(n_i, x))
            assert not any(acc[0]), "kernel combination has nonzero free part"
            x0.append(acc[1])
        self.x_elements = list(x_elements)
        self.phiH2, self.phi2_proj = free.phiH.quotient(x0)
        self.zero = self.nf(free.zero)

    def _reduce_k(self, kvec):
        snf = self._snf
        y = [sum(kvec[i] * snf.V[i][j] for i in range(len(kvec))) for j in range(len(kvec))]
        yhat = [yi % d if d else yi for yi, d in zip(y, self.dlat)]
        w = [0] * snf.rows
        for i in range(len(kvec)):
            if self.dlat[i]:
                q = (y[i] - yhat[i]) // self.dlat[i]
                if i < snf.rows:
                    w[i] = q
        khat = [sum(yhat[i] * snf.Vinv[i][j] for i in range(len(kvec))) for j in range(len(kvec))]
        z = [sum(w[i] * snf.U[i][j] for i in range(snf.rows)) for j in range(snf.rows)]
        return tuple(khat), z

    def nf(self, u):
        """Canonical representative of u + X inside the free parameter."""
        k, _ = u
        khat, z = self._reduce_k(k)
        corr = self.free.zero
        for z_i, x in zip(z, self.x_elements):
            corr = self.free.add(corr, self.free.smul(z_i, x))
        red = self.free.sub(u, corr)
        assert red[0] == khat
        return (khat, self.phi2_proj(red[1]))

    # group interface on normal forms (kvec reduced, phiH2 coords)

    def _unred(self, u):
        return (u[0], self.free.phiH.canon(self.phiH2.lift(u[1])))

    def add(self, u, v):
        return self.nf(self.free.add(self._unred(u), self._unred(v)))

    def neg(self, u):
        return self.nf(self.free.neg(self._unred(u)))

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def smul(self, n, u):
        acc = self.zero
        x = u if n >= 0 else self.neg(u)
        for _ in range(abs(n)):
            acc = self.add(acc, x)
        return acc

    def generator(self, i):
        return self.nf(self.free.generator(i))

    def phi(self, h):
        return self.nf(self.free.phi(h))

    def phi_rep(self, c):
        """A fixed H-representative of a quotient phi-part coordinate."""
        return self.free.phi_lift(self.free.phiH.canon(self.phiH2.lift(c)))

    def pi(self, u):
        return self.free.pi(self._unred(u))

    def rho(self, u):
        return self.free.rho(self._unred(u))

    def elements(self):
        import itertools

        kvecs = []
        snf = self._snf
        r = len(self.free.gens)
        for y in itertools.product(*[range(d) for d in self.dlat]):
            kvecs.append(
                tuple(sum(y[i] * snf.Vinv[i][j] for i in range(r)) for j in range(r))
            )
        return [(k, c) for k in kvecs for c in self.phiH2.elements()]

    @property
    def order(self):
        n = self.phiH2.order
        for d in self.dlat:
            n *= d
        return n


def free_odd_form_parameter(herm: HermitianGroup, gens) -> OddFormGroupData:
    free = FreeParam(herm, gens)
    return OddFormGroupData(herm, free, free.phi, free.pi, free.rho)


def quotient_odd_form_parameter(data: OddFormGroupData, diffs) -> OddFormGroupData:
    """Quotient by the central subgroup generated by u_i - v_i (Lemma-style:
    the pairs must agree under pi and rho)."""
    car = data.carrier
    herm = data.herm
    xs = []
    for i, (u, v) in enumerate(diffs):
        if data.pi(u) != data.pi(v):
            raise PairMismatch(i, "pi")
        if data.rho(u) != data.rho(v):
            raise PairMismatch(i, "rho")
        xs.append(car.sub(u, v))
    if isinstance(car, FiniteParam):
        free = car.free
        xs = [car._unred(x) for x in xs] + car.x_elements
        fin = FiniteParam(free, xs)
    else:
        fin = FiniteParam(car, xs)
    return OddFormGroupData(herm, fin, fin.phi, fin.pi, fin.rho)


class TriadditiveMap:
    """beta: N x H x N -> H2 on generator triples, extended by lifts."""

    def __init__(self, N: AbGroup, H: AbGroup, dst: AbGroup, table):
        self.N, self.H, self.dst = N, H, dst
        self.table = table  # [j][s][j2] -> dst coords

    def __call__(self, n1, h, n2):
        v1, vh, v2 = self.N.lift(n1), self.H.lift(h), self.N.lift(n2)
        acc = self.dst.zero
        for j, c1 in enumerate(v1):
            if not c1:
                continue
            for s, ch in enumerate(vh):
                if not ch:
                    continue
                for j2, c2 in enumerate(v2):
                    if c2:
                        acc = self.dst.add(acc, self.dst.smul(c1 * ch * c2, self.table[j][s][j2]))
        return acc

    @staticmethod
    def from_function(N, H, dst, fn):
        table = [
            [[fn(N.gen(j), H.gen(s), N.gen(j2)) for j2 in range(N.ngens)] for s in range(H.ngens)]
            for j in range(N.ngens)
        ]
        return TriadditiveMap(N, H, dst, table)


def check_sq_herm(alpha, beta, herm1: HermitianGroup, herm2: HermitianGroup, N: AbGroup, policy=DEFAULT_POLICY, collect=False):
    """The two hermitian-level sesquiquadratic identities."""
    suite = CheckSuite("sq-herm", collect=collect)
    H1, H2 = herm1.H, herm2.H
    suite.run(
        "sq/beta-bar",
        [N.elements(), H1.elements(), N.elements()],
        lambda n, h, n2: None
        if herm2.bar(beta(n, h, n2)) == beta(n2, herm1.bar(h), n)
        else (n, h, n2),
        policy,
    )
    suite.run(
        "sq/alpha-pairing",
        [herm1.M.elements(), N.elements(), herm1.M.elements(), N.elements()],
        lambda m, n, m2, n2: None
        if herm2.pair(alpha(m, n), alpha(m2, n2)) == beta(n, herm1.pair(m, m2), n2)
        else (m, n, m2, n2),
        policy,
    )
    return suite


class SqMap:
    """Sesquiquadratic map (alpha, beta, gamma) with gamma defined on the
    free generators of the source parameter and extended by the expansion
    identities."""

    def __init__(self, src: OddFormGroupData, dst: OddFormGroupData, N: AbGroup, alpha, beta, gen_images):
        self.src, self.dst, self.N = src, dst, N
        self.alpha, self.beta = alpha, beta
        self.gen_images = gen_images  # [i][j] = dst carrier element for (u_i, N.gen(j))

    def gamma_gen(self, i, nvec):
        """gamma(u_i, n) for the integer combination nvec of N's generators,
        expanded left-to-right with the gamma(u, n+n') correction rule."""
        dst, N = self.dst, self.N
        car2 = dst.carrier
        rho_u = self.src.rho(self.src.carrier.generator(i))
        acc = car2.zero
        n_acc = N.zero
        for j, c in enumerate(nvec):
            if not c:
                continue
            g, gi = N.gen(j), self.gen_images[i][j]
            if c < 0:
                # gamma(u, -g) = -gamma(u, g) + phi(beta(g, rho u, g))
                gi = car2.add(car2.neg(gi), dst.phi(self.beta(g, rho_u, g)))
                g = N.neg(g)
                c = -c
            for _ in range(c):
                acc = car2.add(car2.add(acc, dst.phi(self.beta(g, rho_u, n_acc))), gi)
                n_acc = N.add(n_acc, g)
        return acc

    def __call__(self, u, n):
        """gamma(u, n); u in (kvec, phi-part) normal form, n in N coords."""
        dst, N = self.dst, self.N
        car1, car2 = self.src.carrier, dst.carrier
        kvec, c = u
        nvec = list(N.lift(n))
        acc = car2.zero
        for i, k in enumerate(kvec):
            if k:
                acc = car2.add(acc, car2.smul(k, self.gamma_gen(i, nvec)))
        h = car1.phi_rep(c)
        return car2.add(acc, dst.phi(self.beta(n, h, n)))


def extend_sesquiquadratic(
    src: OddFormGroupData,
    dst: OddFormGroupData,
    N: AbGroup,
    alpha,
    beta,
    gen_images,
    policy: Policy = DEFAULT_POLICY,
    verify=True,
) -> SqMap:
    """Unique gamma with gamma(u_i, n_j) = gen_images[i][j].

    Checks the image constraints pi(v) = alpha(pi(u), n), rho(v) =
    beta(n, rho(u), n); when the source carrier is a quotient, checks the
    factoring hypotheses; optionally verifies the five gamma identities.
    """
    car1 = src.carrier
    for i in range(len(_free_of(car1).gens)):
        u = car1.generator(i)
        for j in range(N.ngens):
            v = gen_images[i][j]
            if dst.pi(v) != alpha(src.pi(u), N.gen(j)):
                raise ImageConstraintViolated("pi at (%d, %d)" % (i, j))
            if dst.rho(v) != beta(N.gen(j), src.rho(u), N.gen(j)):
                raise ImageConstraintViolated("rho at (%d, %d)" % (i, j))
    sq = SqMap(src, dst, N, alpha, beta, gen_images)
    car2 = dst.carrier
    # factor through the source quotient: gamma must kill the difference set
    if isinstance(car1, FiniteParam):
        for x in car1.x_elements:
            kvec, c = x
            for j in range(N.ngens):
                acc = car2.zero
                nvec = [1 if jj == j else 0 for jj in range(N.ngens)]
                for i, k in enumerate(kvec):
                    if k:
                        acc = car2.add(acc, car2.smul(k, sq.gamma_gen(i, nvec)))
                h = car1.free.phi_lift(c)
                acc = car2.add(acc, dst.phi(beta(N.gen(j), h, N.gen(j))))
                if acc != car2.zero:
                    raise FactorObstruction((repr(x), j))
    # factor through the relations of N
    for row in N.rels:
        for i in range(len(_free_of(car1).gens)):
            if sq.gamma_gen(i, list(row)) != car2.zero:
                raise FactorObstruction(("N relation", list(row), i))
    if verify:
        res = check_sq_gamma(src, dst, N, sq, policy, collect=False)
        assert res.ok
    return sq


def _free_of(carrier):
    return carrier.free if isinstance(carrier, FiniteParam) else carrier


def check_sq_gamma(src, dst, N, gamma, policy=DEFAULT_POLICY, collect=False):
    """The five defining identities of a sesquiquadratic map."""
    suite = CheckSuite("sq-gamma", collect=collect)
    car1, car2 = src.carrier, dst.carrier
    us = list(car1.elements())
    ns = N.elements()
    hs = src.herm.H.elements()
    alpha, beta = gamma.alpha, gamma.beta
    suite.run(
        "sq/pi-gamma",
        [us, ns],
        lambda u, n: None if dst.pi(gamma(u, n)) == alpha(src.pi(u), n) else (u, n),
        policy,
    )
    suite.run(
        "sq/gamma-phi",
        [hs, ns],
        lambda h, n: None if gamma(src.phi(h), n) == dst.phi(beta(n, h, n)) else (h, n),
        policy,
    )
    suite.run(
        "sq/gamma-additive",
        [us, us, ns],
        lambda u, v, n: None
        if gamma(car1.add(u, v), n) == car2.add(gamma(u, n), gamma(v, n))
        else (u, v, n),
        policy,
    )
    suite.run(
        "sq/rho-gamma",
        [us, ns],
        lambda u, n: None if dst.rho(gamma(u, n)) == beta(n, src.rho(u), n) else (u, n),
        policy,
    )
    suite.run(
        "sq/gamma-sum",
        [us, ns, ns],
        lambda u, n, n2: None
        if gamma(u, N.add(n, n2))
        == car2.add(car2.add(gamma(u, n), dst.phi(beta(n2, src.rho(u), n))), gamma(u, n2))
        else (u, n, n2),
        policy,
    )
    return suite


def check_sq_associativity(
    u_domain,
    n12_domain,
    n23_domain,
    gamma12,
    gamma23,
    gamma13,
    mu,
    policy=DEFAULT_POLICY,
    gen_u=None,
    gen_n12=None,
    gen_n23=None,
):
    """Verify gamma23(gamma12(u, n12), n23) = gamma13(u, mu(n12, n23)).

    Checks on the supplied generator sets first (the reduction step), then
    concludes by sweeping the full domains.  Raises AssocViolated else.
    """

    def law(u, n12, n23):
        lhs = gamma23(gamma12(u, n12), n23)
        rhs = gamma13(u, mu(n12, n23))
        return None if lhs == rhs else (u, n12, n23)

    if gen_u is not None:
        for u in gen_u:
            for a in gen_n12:
                for b in gen_n23:
                    w = law(u, a, b)
                    if w is not None:
                        raise AssocViolated(("generator level", w))
    res = sweep("sq/associative-law", [u_domain, n12_domain, n23_domain], law, policy)
    if not res.ok:
        raise AssocViolated(res.witness)
    return res
