"""Dense matrices over a finite base ring, with one slice per algebra factor.

A :class:`Mat` has shape (f, s, n, n): f algebra factors (two for the
linear construction M_n(K x K), one otherwise), s ring factors of K, and
n x n entries reduced mod the per-factor modulus.
"""

from __future__ import annotations

import numpy as np

from .rings import BaseRing


class Mat:
    __slots__ = ("ring", "arr", "_key")

    def __init__(self, ring: BaseRing, arr):
        self.ring = ring
        mod = np.array(ring.moduli, dtype=np.int64).reshape(1, -1, 1, 1)
        self.arr = np.ascontiguousarray(np.asarray(arr, dtype=np.int64) % mod)
        self._key = None

    @property
    def key(self):
        if self._key is None:
            self._key = self.arr.tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, Mat) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "Mat%r" % (self.arr.tolist(),)

    def __add__(self, other):
        return Mat(self.ring, self.arr + other.arr)

    def __sub__(self, other):
        return Mat(self.ring, self.arr - other.arr)

    def __neg__(self):
        return Mat(self.ring, -self.arr)

    def __matmul__(self, other):
        return Mat(self.ring, np.einsum("fsij,fsjk->fsik", self.arr, other.arr))

    def scale(self, kelt):
        k = np.array(kelt, dtype=np.int64).reshape(1, -1, 1, 1)
        return Mat(self.ring, self.arr * k)

    def swap_transpose(self):
        """(A, B) -> (B^T, A^T): the involution of the linear construction."""
        t = self.arr.transpose(0, 1, 3, 2)
        return Mat(self.ring, t[::-1])

    def transpose(self):
        return Mat(self.ring, self.arr.transpose(0, 1, 3, 2))

    @property
    def is_zero(self):
        return not self.arr.any()


def zeros(ring: BaseRing, f: int, n: int) -> Mat:
    return Mat(ring, np.zeros((f, len(ring.moduli), n, n), dtype=np.int64))


def unit(ring: BaseRing, f: int, n: int, fac: int, r: int, c: int, kelt=None) -> Mat:
    m = np.zeros((f, len(ring.moduli), n, n), dtype=np.int64)
    kelt = kelt if kelt is not None else ring.one
    for s, k in enumerate(kelt):
        m[fac, s, r, c] = k
    return Mat(ring, m)


def identity(ring: BaseRing, f: int, n: int) -> Mat:
    m = np.zeros((f, len(ring.moduli), n, n), dtype=np.int64)
    for fac in range(f):
        for s in range(len(ring.moduli)):
            for i in range(n):
                m[fac, s, i, i] = 1
    return Mat(ring, m)


def _inv_mod_prime_power(a, m):
    """Inverse of an integer matrix mod a prime power, by unit-pivot Gauss."""
    from math import gcd

    n = len(a)
    aug = [list(map(int, row)) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if gcd(aug[r][col] % m, m) == 1:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("matrix not invertible mod %d" % m)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col] % m, -1, m)
        aug[col] = [(x * inv) % m for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] % m:
                f = aug[r][col] % m
                aug[r] = [(x - f * y) % m for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _prime_power_split(m):
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            q = 1
            while m % d == 0:
                m //= d
                q *= d
            out.append(q)
        d += 1
    if m > 1:
        out.append(m)
    return out


def mat_inverse(x: Mat) -> Mat:
    """Entrywise-exact inverse over the base ring, factor by factor."""
    ring = x.ring
    f, s, n, _ = x.arr.shape
    out = np.zeros_like(x.arr)
    for fac in range(f):
        for t, m in enumerate(ring.moduli):
            block = x.arr[fac, t].tolist()
            pieces = _prime_power_split(m)
            from math import prod

            res = [[0] * n for _ in range(n)]
            for q in pieces:
                inv_q = _inv_mod_prime_power([[v % q for v in row] for row in block], q)
                rest = m // q
                # CRT: add the q-part contribution
                coeff = rest * pow(rest, -1, q)
                for i in range(n):
                    for j in range(n):
                        res[i][j] = (res[i][j] + coeff * inv_q[i][j]) % m
            out[fac, t] = res
    inv = Mat(ring, out)
    return inv
