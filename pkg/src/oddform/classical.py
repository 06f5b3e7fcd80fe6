"""Classical graded odd form algebras, realized on explicit matrices.

Elements of the odd form parameter are pairs (a, b) of matrices with
b + inv(a) a + inv(b) = 0; the linear / symplectic / orthogonal
constructions differ in the ambient matrix shape, the involution and the
assignment of matrix positions to Peirce index pairs.
"""

from __future__ import annotations

import itertools

import numpy as np

from .matrices import Mat, identity, mat_inverse, unit, zeros
from .modules import AbGroup
from .nilpotent import delta_from_concrete
from .rings import BaseRing


class TwoNotInvertible(ValueError):
    pass


class RankTooSmall(ValueError):
    pass


def semidirect_mul(ring: BaseRing, x, y):
    """(a + k)(a' + k') = (aa' + ka' + ak') + kk' in R x| K."""
    a, k = x
    a2, k2 = y
    return (a @ a2 + a2.scale(k) + a.scale(k2), ring.mul(k, k2))


def semidirect_inv_elt(ring: BaseRing, x):
    a, k = x
    return (a, k)  # involution fixes the scalar part


class MatrixOFA:
    """Graded odd form K-algebra on matrices, with a chosen Peirce grading."""

    def __init__(self, ring, f, n, ell, pos_index, inv_fn, kind="custom", has_zero_index=True):
        self.ring = ring
        self.f, self.n, self.ell = f, n, ell
        self.kind = kind
        self.pos_index = pos_index  # (fac, r, c) -> (i, j)
        self._inv_fn = inv_fn
        self.indices = list(range(-ell, ell + 1))
        s = len(ring.moduli)
        self.comp_positions = {
            (i, j): [] for i in self.indices for j in self.indices
        }
        for fac in range(f):
            for r in range(n):
                for c in range(n):
                    ij = pos_index(fac, r, c)
                    if ij is not None:
                        self.comp_positions[ij].append((fac, r, c))
        self._comps = {}
        for ij, positions in self.comp_positions.items():
            npos = len(positions)
            rels = [
                [ring.moduli[t] if g == p * s + t else 0 for g in range(npos * s)]
                for p in range(npos)
                for t in range(s)
            ]
            act = []
            for t in range(s):
                mat = [[0] * (npos * s) for _ in range(npos * s)]
                for p in range(npos):
                    mat[p * s + t][p * s + t] = 1
                act.append(mat)
            self._comps[ij] = AbGroup(ring, npos * s, rels, act, name="R[%d,%d]" % ij)
        self._delta0 = {}
        self._one = identity(ring, f, n)

    # -- component layer ------------------------------------------------------

    def comp(self, i, j) -> AbGroup:
        return self._comps[(i, j)]

    def comp_to_mat(self, i, j, coords) -> Mat:
        s = len(self.ring.moduli)
        vec = self._comps[(i, j)].lift(coords)
        arr = np.zeros((self.f, s, self.n, self.n), dtype=np.int64)
        for p, (fac, r, c) in enumerate(self.comp_positions[(i, j)]):
            for t in range(s):
                arr[fac, t, r, c] = vec[p * s + t]
        return Mat(self.ring, arr)

    def mat_to_comp(self, i, j, m: Mat):
        s = len(self.ring.moduli)
        vec = []
        for fac, r, c in self.comp_positions[(i, j)]:
            for t in range(s):
                vec.append(int(m.arr[fac, t, r, c]))
        return self._comps[(i, j)].canon(vec)

    def decompose(self, m: Mat):
        """Graded components of a ring element; nonzero slots only."""
        out = {}
        for ij, positions in self.comp_positions.items():
            if not positions:
                continue
            c = self.mat_to_comp(ij[0], ij[1], m)
            if c != self._comps[ij].zero:
                out[ij] = c
        return out

    def inv_mat(self, m: Mat) -> Mat:
        return self._inv_fn(m)

    def comp_mul(self, i, j, k, a, b):
        prod = self.comp_to_mat(i, j, a) @ self.comp_to_mat(j, k, b)
        return self.mat_to_comp(i, k, prod)

    def comp_inv(self, i, j, a):
        return self.mat_to_comp(-j, -i, self.inv_mat(self.comp_to_mat(i, j, a)))

    def comp_scale(self, kelt, i, j, a):
        return self._comps[(i, j)].scale(kelt, a)

    def comp_elements_mats(self, i, j):
        mod = self._comps[(i, j)]
        return [self.comp_to_mat(i, j, c) for c in mod.elements()]

    # -- odd form parameter (pairs) --------------------------------------------

    def pair_zero(self):
        z = zeros(self.ring, self.f, self.n)
        return (z, z)

    def in_delta(self, u):
        a, b = u
        return (b + self.inv_mat(a) @ a + self.inv_mat(b)).is_zero

    def pair_add(self, u, v):
        a, b = u
        c, d = v
        return (a + c, b - self.inv_mat(a) @ c + d)

    def pair_neg(self, u):
        a, b = u
        return (-a, -b - self.inv_mat(a) @ a)

    def pair_sub(self, u, v):
        return self.pair_add(u, self.pair_neg(v))

    def pair_phi(self, h: Mat):
        z = zeros(self.ring, self.f, self.n)
        return (z, h - self.inv_mat(h))

    def pair_pi(self, u):
        return u[0]

    def pair_rho(self, u):
        return u[1]

    def pair_act(self, u, c: Mat, k):
        """u . (c + k) for c in R, k in K."""
        a, b = u
        cb = self.inv_mat(c)
        t1 = a @ c + a.scale(k)
        t2 = (
            cb @ b @ c
            + (cb @ b + b @ c).scale(k)
            + b.scale(self.ring.mul(k, k))
        )
        return (t1, t2)

    def pair_q(self, i, j, coords):
        z = zeros(self.ring, self.f, self.n)
        return (self.comp_to_mat(i, j, coords), z)

    def pair_key(self, u):
        return (u[0].key, u[1].key)

    # -- Delta^0_i carriers ------------------------------------------------------

    def delta0_raw(self, i):
        """All pairs (a, b) with a in R_{0i}, b in R_{-i,i} and the Delta
        membership constraint."""
        amats = self.comp_elements_mats(0, i)
        bmats = self.comp_elements_mats(-i, i)
        out = []
        for a in amats:
            for b in bmats:
                if self.in_delta((a, b)):
                    out.append((a, b))
        return out

    def delta0(self, i):
        """(carrier, to_nf, from_nf) for Delta^0_i as a nilpotent K-module."""
        if i not in self._delta0:
            elems = self.delta0_raw(i)
            d_elems = [u for u in elems if u[0].is_zero and (u[1] + self.inv_mat(u[1])).is_zero]

            def act_k(u, ke):
                return self.pair_act(u, zeros(self.ring, self.f, self.n), ke)

            def d_scale(ke, u):
                return (u[0], u[1].scale(ke))

            carrier, to_nf, from_nf = delta_from_concrete(
                self.ring,
                elems,
                self.pair_add,
                self.pair_zero(),
                act_k,
                d_elems,
                d_scale,
                key=self.pair_key,
                name="Delta0[%d]" % i,
            )
            self._delta0[i] = (carrier, to_nf, from_nf)
        return self._delta0[i]

    # -- algebra-level faces used by generic checkers ---------------------------

    def d_zero(self):
        return self.pair_zero()

    def d_add(self, u, v):
        return self.pair_add(u, v)

    def d_neg(self, u):
        return self.pair_neg(u)

    def d_key(self, u):
        return self.pair_key(u)

    def d_q(self, i, j, coords):
        return self.pair_q(i, j, coords)

    def d_phi_comp(self, i, j, coords):
        return self.pair_phi(self.comp_to_mat(i, j, coords))

    def d_embed_delta0(self, i, u_nf):
        return self.delta0(i)[2][u_nf]

    def d_extract_delta0(self, i, pair):
        return self.delta0(i)[1][pair]

    def d_act_ring(self, u, rdict, kelt):
        c = zeros(self.ring, self.f, self.n)
        for (i, j), coords in rdict.items():
            c = c + self.comp_to_mat(i, j, coords)
        return self.pair_act(u, c, kelt)

    def d_pi(self, u):
        return self.decompose(self.pair_pi(u))

    def d_rho(self, u):
        return self.decompose(self.pair_rho(u))

    def u_one(self):
        return self.pair_zero()

    def u_mul(self, g, h):
        return self.pair_add(self.pair_add(self.pair_act(g, h[0], self.ring.zero), h), g)

    def u_inv(self, g):
        a, b = g
        one = self._one
        c = mat_inverse(one + a) - one
        cb = self.inv_mat(c)
        ab = self.inv_mat(a)
        acb = self.inv_mat(a @ c + c)
        d = -(cb @ b @ c) + cb @ ab @ c + acb @ a - b
        return (c, d)

    def is_unitary(self, g):
        a, b = g
        if a != self.inv_mat(b):
            return False
        ab = self.inv_mat(a)
        return (a @ ab - ab @ a).is_zero

    # carrier-level views of pi / rho for Delta^0_i normal forms
    def pi0(self, i, u_nf):
        return self.mat_to_comp(0, i, self.pair_pi(self.d_embed_delta0(i, u_nf)))

    def rho0(self, i, u_nf):
        return self.mat_to_comp(-i, i, self.pair_rho(self.d_embed_delta0(i, u_nf)))

    def phi_delta0(self, i, hcoords):
        """phi of an R_{-i,i} component element, as a Delta^0_i normal form."""
        return self.d_extract_delta0(i, self.pair_phi(self.comp_to_mat(-i, i, hcoords)))

    def dot(self, i, u_nf, j, acoords):
        pair = self.pair_act(
            self.d_embed_delta0(i, u_nf), self.comp_to_mat(i, j, acoords), self.ring.zero
        )
        return self.d_extract_delta0(j, pair)

    def star(self, i, acoords, j, bcoords):
        prod = self.comp_to_mat(-i, j, acoords) @ self.comp_to_mat(j, i, bcoords)
        return self.d_extract_delta0(i, self.pair_phi(prod))

    def circ(self, i, u_nf, j, v_nf):
        pu = self.pair_pi(self.d_embed_delta0(i, u_nf))
        pv = self.pair_pi(self.d_embed_delta0(j, v_nf))
        return self.mat_to_comp(-i, j, self.inv_mat(pu) @ pv)

    def tri(self, i, u_nf, j, acoords):
        ru = self.pair_rho(self.d_embed_delta0(i, u_nf))
        return self.mat_to_comp(-i, j, ru @ self.comp_to_mat(i, j, acoords))

    def graded_mul_support(self, i, j, a, k, l, b):
        return self.decompose(self.comp_to_mat(i, j, a) @ self.comp_to_mat(k, l, b))

    def inv_in_component(self, i, j, a):
        supp = self.decompose(self.inv_mat(self.comp_to_mat(i, j, a)))
        return set(supp) <= {(-j, -i)}

    def pair_to_nf(self, u):
        """Decompose a Delta element into its Peirce normal form.

        Returns (delta0 parts, q parts, phi parts); raises ValueError when
        the element admits no decomposition (a Peirce violation).
        """
        rest = u
        q_parts = {}
        for i in self.indices:
            if i == 0:
                continue
            for j in self.indices:
                c = self.mat_to_comp(i, j, self.pair_pi(rest))
                if c != self.comp(i, j).zero:
                    q_parts[(i, j)] = c
                    rest = self.pair_sub(rest, self.pair_q(i, j, c))
        d_parts = {}
        for i in self.indices:
            p = self.mat_to_comp(0, i, self.pair_pi(rest))
            r = self.mat_to_comp(-i, i, self.pair_rho(rest))
            piece = (self.comp_to_mat(0, i, p), self.comp_to_mat(-i, i, r))
            if piece != self.pair_zero():
                if not self.in_delta(piece):
                    raise ValueError("Delta^0 piece fails the membership constraint")
                d_parts[i] = self.d_extract_delta0(i, piece)
                rest = self.pair_sub(rest, piece)
        if not self.pair_pi(rest).is_zero:
            raise ValueError("pi part not exhausted by q and Delta^0 pieces")
        b = self.pair_rho(rest)
        supp = self.decompose(b)
        phi_parts = {}
        h = zeros(self.ring, self.f, self.n)
        for (i, j), c in supp.items():
            if i + j == 0:
                raise ValueError("leftover diagonal rho part")
            if i + j > 0:
                phi_parts[(i, j)] = c
                h = h + self.comp_to_mat(i, j, c)
        if self.pair_phi(h) != rest:
            raise ValueError("leftover part is not phi of an upper component")
        return d_parts, q_parts, phi_parts

    def check_delta_decomposition(self, policy):
        """Sampled normal-form round trips through random Delta elements."""
        from .sweeps import CheckResult

        rng = policy.rng("peirce/delta-decomposition")
        count = min(policy.samples, 200)
        for _ in range(count):
            u = self.pair_zero()
            for i in self.indices:
                if i != 0:
                    for j in self.indices:
                        m = self.comp(i, j)
                        if m.order > 1 and rng.random() < 0.5:
                            u = self.pair_add(u, self.pair_q(i, j, _random_elt(m, rng)))
                car, _, from_nf = self.delta0(i)
                es = car.elements()
                u = self.pair_add(u, from_nf[es[rng.randrange(len(es))]])
            try:
                d_parts, q_parts, phi_parts = self.pair_to_nf(u)
            except ValueError as exc:
                return CheckResult("peirce/delta-decomposition", False, "sampled", witness=str(exc))
            # rebuild in the exact reverse of the peel order
            hm = zeros(self.ring, self.f, self.n)
            for (i, j), c in phi_parts.items():
                hm = hm + self.comp_to_mat(i, j, c)
            rebuilt = self.pair_phi(hm)
            for i in sorted(d_parts, reverse=True):
                rebuilt = self.pair_add(rebuilt, self.delta0(i)[2][d_parts[i]])
            for (i, j) in sorted(q_parts, reverse=True):
                rebuilt = self.pair_add(rebuilt, self.pair_q(i, j, q_parts[(i, j)]))
            if rebuilt != u:
                return CheckResult("peirce/delta-decomposition", False, "sampled", witness="rebuild")
        return CheckResult("peirce/delta-decomposition", True, "sampled", count)

    def delta_elements(self, limit=1 << 16):
        """Enumerate all of Delta; only sensible for tiny shapes."""
        s = len(self.ring.moduli)
        cells = []
        for fac in range(self.f):
            for t in range(s):
                for r in range(self.n):
                    for c in range(self.n):
                        cells.append((fac, t, r, c, self.ring.moduli[t]))
        total = 1
        for cell in cells:
            total *= cell[4]
        if total * total > limit * limit:
            raise ValueError("Delta too large to enumerate")
        mats = []
        for combo in itertools.product(*[range(cell[4]) for cell in cells]):
            arr = np.zeros((self.f, s, self.n, self.n), dtype=np.int64)
            for (fac, t, r, c, _), v in zip(cells, combo):
                arr[fac, t, r, c] = v
            mats.append(Mat(self.ring, arr))
        out = []
        for a in mats:
            for b in mats:
                if self.in_delta((a, b)):
                    out.append((a, b))
        return out


def _random_elt(mod, rng):
    es = mod.elements()
    return es[rng.randrange(len(es))]


def build_classical(kind: str, n: int, ring: BaseRing) -> MatrixOFA:
    """linear / symplectic / orthogonal odd form algebra of matrix size n."""
    if kind == "linear":
        ell = n

        def pos_index(fac, r, c):
            if fac == 0:
                return (r + 1, c + 1)
            return (-(r + 1), -(c + 1))

        def inv_fn(m):
            return m.swap_transpose()

        return MatrixOFA(ring, 2, n, ell, pos_index, inv_fn, kind="linear")

    if kind == "symplectic":
        if n % 2:
            raise ValueError("symplectic size must be even")
        ell = n // 2
        sigma = {}
        for i in range(1, ell + 1):
            sigma[i] = i - 1
            sigma[-i] = n - i
        inv_sigma = {v: k for k, v in sigma.items()}
        jm = np.zeros((1, len(ring.moduli), n, n), dtype=np.int64)
        for i in list(range(1, ell + 1)) + list(range(-ell, 0)):
            sgn = 1 if i > 0 else -1
            for t in range(len(ring.moduli)):
                jm[0, t, sigma[-i], sigma[i]] = sgn
        J = Mat(ring, jm)
        Jinv = Mat(ring, -jm)

        def pos_index(fac, r, c):
            return (inv_sigma[r], inv_sigma[c])

        def inv_fn(m):
            return Jinv @ m.transpose() @ J

        return MatrixOFA(ring, 1, n, ell, pos_index, inv_fn, kind="symplectic")

    if kind == "orthogonal":
        if not ring.two_invertible:
            raise TwoNotInvertible("orthogonal construction needs 2 invertible in %s" % ring.spec())
        ell = n // 2
        sigma = {}
        for i in range(1, ell + 1):
            sigma[i] = i - 1
            sigma[-i] = n - i
        if n % 2:
            sigma[0] = ell
        inv_sigma = {v: k for k, v in sigma.items()}
        sm = np.zeros((1, len(ring.moduli), n, n), dtype=np.int64)
        idxs = list(sigma.keys())
        for i in idxs:
            for t in range(len(ring.moduli)):
                sm[0, t, sigma[-i], sigma[i]] = 1
        S = Mat(ring, sm)

        def pos_index(fac, r, c):
            return (inv_sigma[r], inv_sigma[c])

        def inv_fn(m):
            return S @ m.transpose() @ S

        return MatrixOFA(ring, 1, n, ell, pos_index, inv_fn, kind="orthogonal")

    raise ValueError("unknown kind %r" % kind)


def rerank(base: MatrixOFA) -> MatrixOFA:
    """The Peirce decomposition of rank ell-1 that merges the +-1 indices
    into the zero index (all other indices shift towards zero)."""
    if base.ell < 2:
        raise RankTooSmall("cannot reduce rank below 1")

    def merge(i):
        if i in (-1, 0, 1):
            return 0
        return i - 1 if i > 0 else i + 1

    def pos_index(fac, r, c):
        ij = base.pos_index(fac, r, c)
        if ij is None:
            return None
        return (merge(ij[0]), merge(ij[1]))

    return MatrixOFA(
        base.ring,
        base.f,
        base.n,
        base.ell - 1,
        pos_index,
        base._inv_fn,
        kind=base.kind + "-reranked",
    )
