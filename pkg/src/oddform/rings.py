"""Finite coefficient rings.

Two flavours are used throughout:

* :class:`BaseRing` -- a finite product of residue rings Z/m, the scalar
  ring K acting on every carrier.  Elements are tuples of reduced residues.
* :class:`FiniteRing` -- an arbitrary finite unital associative ring given
  by addition/multiplication tables (needed for the GL(4, D) counterexample
  datum, where D may be a matrix ring).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass


class RingSpecError(ValueError):
    pass


@dataclass(frozen=True)
class BaseRing:
    """Finite commutative unital ring: a product of Z/m factors."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if not self.moduli or any(m < 2 for m in self.moduli):
            raise RingSpecError("every modulus must be >= 2")

    # -- elements ----------------------------------------------------------

    @property
    def zero(self):
        return (0,) * len(self.moduli)

    @property
    def one(self):
        return (1,) * len(self.moduli)

    def from_int(self, n: int):
        return tuple(n % m for m in self.moduli)

    def reduce(self, elt):
        return tuple(x % m for x, m in zip(elt, self.moduli))

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a):
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def sub(self, a, b):
        return tuple((x - y) % m for x, y, m in zip(a, b, self.moduli))

    def mul(self, a, b):
        return tuple((x * y) % m for x, y, m in zip(a, b, self.moduli))

    def elements(self):
        return [tuple(t) for t in itertools.product(*[range(m) for m in self.moduli])]

    @property
    def order(self) -> int:
        n = 1
        for m in self.moduli:
            n *= m
        return n

    def generator(self, t: int):
        """The t-th factor idempotent e_t."""
        return tuple(1 if s == t else 0 for s in range(len(self.moduli)))

    def is_unit(self, a) -> bool:
        from math import gcd

        return all(gcd(x, m) == 1 for x, m in zip(a, self.moduli))

    @property
    def two_invertible(self) -> bool:
        return self.is_unit(self.from_int(2))

    @property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*self.moduli)

    def spec(self) -> str:
        return "x".join("Z/%d" % m for m in self.moduli)

    def __repr__(self):
        return "BaseRing(%s)" % self.spec()


_FACTOR_RE = re.compile(r"^z/(\d+)$")


def parse_ring_spec(spec: str) -> BaseRing:
    """Parse ring specs like ``Z/4`` or ``Z/2xZ/3`` (case-insensitive)."""
    parts = spec.strip().lower().replace(" ", "").split("x")
    moduli = []
    for part in parts:
        m = _FACTOR_RE.match(part)
        if not m:
            raise RingSpecError("bad ring factor %r in %r" % (part, spec))
        moduli.append(int(m.group(1)))
    return BaseRing(tuple(moduli))


class FiniteRing:
    """Finite unital associative ring with explicit operation tables.

    Elements are integers 0..order-1; 0 is the zero element.
    """

    def __init__(self, add_table, mul_table, one, names=None):
        self.add_table = add_table
        self.mul_table = mul_table
        self.one = one
        self.order = len(add_table)
        self.names = names or [str(i) for i in range(self.order)]
        self._neg = [None] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if add_table[a][b] == 0:
                    self._neg[a] = b
        if any(n is None for n in self._neg):
            raise RingSpecError("addition table has no negatives")

    def add(self, a, b):
        return self.add_table[a][b]

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        return self.add_table[a][self._neg[b]]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def elements(self):
        return range(self.order)

    def is_associative(self) -> bool:
        rng = range(self.order)
        return all(
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
            for a in rng
            for b in rng
            for c in rng
        )

    def is_commutative(self) -> bool:
        rng = range(self.order)
        return all(self.mul(a, b) == self.mul(b, a) for a in rng for b in rng)

    @staticmethod
    def from_base_ring(ring: BaseRing) -> "FiniteRing":
        elts = ring.elements()
        index = {e: i for i, e in enumerate(elts)}
        add = [[index[ring.add(a, b)] for b in elts] for a in elts]
        mul = [[index[ring.mul(a, b)] for b in elts] for a in elts]
        names = ["".join(map(str, e)) for e in elts]
        return FiniteRing(add, mul, index[ring.one], names)

    @staticmethod
    def matrix_ring(n: int, ring: BaseRing) -> "FiniteRing":
        """M_n over a finite commutative base ring, as explicit tables."""
        base = ring.elements()
        mats = [
            tuple(tuple(row) for row in m)
            for m in itertools.product(
                *[itertools.product(base, repeat=n) for _ in range(n)]
            )
        ]
        index = {m: i for i, m in enumerate(mats)}

        def madd(a, b):
            return tuple(
                tuple(ring.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
            )

        def mmul(a, b):
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = ring.zero
                    for k in range(n):
                        acc = ring.add(acc, ring.mul(a[i][k], b[k][j]))
                    row.append(acc)
                out.append(tuple(row))
            return tuple(out)

        add = [[index[madd(a, b)] for b in mats] for a in mats]
        mul = [[index[mmul(a, b)] for b in mats] for a in mats]
        eye = tuple(
            tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)
        )
        return FiniteRing(add, mul, index[eye])


_MAT_RE = re.compile(r"^m(\d+)\((.+)\)$")


def parse_coefficient_ring(spec: str) -> FiniteRing:
    """Parse ``Z/4``, ``Z/2xZ/3`` or the matrix shorthand ``M2(Z/2)``."""
    s = spec.strip().lower().replace(" ", "")
    m = _MAT_RE.match(s)
    if m:
        return FiniteRing.matrix_ring(int(m.group(1)), parse_ring_spec(m.group(2)))
    return FiniteRing.from_base_ring(parse_ring_spec(spec))
