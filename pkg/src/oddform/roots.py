"""B_l / BC_l root combinatorics: special closed subsets, extreme elements,
right-extreme orders and positive-combination scans.

Cone membership is decided by an exact rational phase-1 simplex; all
vectors here are tiny integer tuples, so this stays fast.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .sweeps import Policy, DEFAULT_POLICY


class NotSpecialClosed(ValueError):
    pass


class AntiparallelPair(ValueError):
    pass


def enumerate_roots(ell: int, kind: str = "B"):
    """All roots of B_ell (kind="B") or BC_ell (kind="BC")."""
    if ell < 2:
        raise ValueError("rank must be >= 2")
    roots = []
    for i in range(ell):
        for s in (1, -1):
            v = [0] * ell
            v[i] = s
            roots.append(tuple(v))
    for i in range(ell):
        for j in range(i + 1, ell):
            for si in (1, -1):
                for sj in (1, -1):
                    v = [0] * ell
                    v[i], v[j] = si, sj
                    roots.append(tuple(v))
    if kind == "BC":
        for i in range(ell):
            for s in (2, -2):
                v = [0] * ell
                v[i] = s
                roots.append(tuple(v))
    elif kind != "B":
        raise ValueError("kind must be 'B' or 'BC'")
    return roots


def basis_root(ell, i):
    """e_i with the convention e_{-i} = -e_i."""
    v = [0] * ell
    v[abs(i) - 1] = 1 if i > 0 else -1
    return tuple(v)


def long_root(ell, i, j):
    """e_j - e_i (the root of the subgroup parameterized by R_ij)."""
    v = [0] * ell
    v[abs(j) - 1] = 1 if j > 0 else -1
    v[abs(i) - 1] += -1 if i > 0 else 1
    return tuple(v)


def _feasible(rows, rhs):
    """Exact phase-1 simplex: is {x >= 0 : rows^T x = rhs} nonempty?"""
    m = len(rhs)
    n = len(rows)
    a = [[Fraction(rows[j][i]) for j in range(n)] for i in range(m)]
    b = [Fraction(x) for x in rhs]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # tableau with artificial basis
    t = [a[i] + [Fraction(1 if k == i else 0) for k in range(m)] + [b[i]] for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        for k in range(n + m + 1):
            cost[k] -= t[i][k]
    basis = [n + i for i in range(m)]
    while True:
        piv_col = None
        for k in range(n + m):
            if cost[k] < 0:
                piv_col = k  # Bland's rule
                break
        if piv_col is None:
            break
        piv_row = None
        best = None
        for i in range(m):
            if t[i][piv_col] > 0:
                ratio = t[i][-1] / t[i][piv_col]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[piv_row]):
                    best, piv_row = ratio, i
        if piv_row is None:
            return False  # unbounded phase-1 cannot happen; defensive
        pv = t[piv_row][piv_col]
        t[piv_row] = [x / pv for x in t[piv_row]]
        for i in range(m):
            if i != piv_row and t[i][piv_col]:
                f = t[i][piv_col]
                t[i] = [x - f * y for x, y in zip(t[i], t[piv_row])]
        if cost[piv_col]:
            f = cost[piv_col]
            cost = [x - f * y for x, y in zip(cost, t[piv_row])]
        basis[piv_row] = piv_col
    return -cost[-1] == 0


def in_cone(gens, target) -> bool:
    """target in the convex conical hull of gens (exact)."""
    gens = [g for g in gens]
    if not any(target):
        return True
    if not gens:
        return False
    return _feasible(gens, target)


def cone_pointed(gens) -> bool:
    """No opposite nonzero vectors: only the trivial nonnegative null combo."""
    gens = list(gens)
    if not gens:
        return True
    # nontrivial lambda >= 0 with sum lambda_s g_s = 0 and sum lambda_s = 1
    rows = [list(g) + [1] for g in gens]
    return not _feasible(rows, [0] * len(gens[0]) + [1])


def is_special_closed(sigma, phi) -> bool:
    """sigma = phi intersect cone(sigma), with a pointed cone."""
    sigma = list(sigma)
    sset = set(sigma)
    if not sset <= set(phi):
        return False
    if not cone_pointed(sigma):
        return False
    for gamma in phi:
        if gamma not in sset and in_cone(sigma, gamma):
            return False
    return True


def is_extreme(alpha, sigma) -> bool:
    rest = [b for b in sigma if b != alpha]
    return not in_cone(rest, alpha)


def right_extreme_order(sigma, phi):
    """An ordering whose every suffix-maximum is extreme (largest last).

    Tie-break: lexicographically largest coordinate vector among the extreme
    candidates, so the order is deterministic.
    """
    sigma = list(sigma)
    if not is_special_closed(sigma, phi):
        raise NotSpecialClosed(repr(sigma))
    order = []
    rest = list(sigma)
    while rest:
        extremes = [a for a in rest if is_extreme(a, rest)]
        if not extremes:
            raise NotSpecialClosed("no extreme element in %r" % (rest,))
        pick = max(extremes)
        order.append(pick)
        rest = [b for b in rest if b != pick]
    order.reverse()
    return order


def verify_right_extreme(order):
    """Re-check the recursive extreme-largest property of an order."""
    for t in range(len(order), 0, -1):
        prefix = order[:t]
        if not is_extreme(prefix[-1], prefix):
            return False
    return True


def positive_combinations(alpha, beta, phi, integral=False):
    """Roots of the form i*alpha + j*beta with their (i, j) witnesses.

    Real mode (integral=False): i, j > 0 rational, alpha != +-beta required.
    Integral mode: i, j in {1, 2, ...}, alpha and beta non-antiparallel.
    """
    alpha, beta = tuple(alpha), tuple(beta)
    if integral:
        if _antiparallel(alpha, beta):
            raise AntiparallelPair((alpha, beta))
        coeffs = [Fraction(n) for n in range(1, 5)]
    else:
        if _parallel(alpha, beta):
            raise AntiparallelPair((alpha, beta))
        coeffs = [Fraction(n, 2) for n in range(1, 7)]
    pset = set(phi)
    out = []
    for i in coeffs:
        for j in coeffs:
            v = tuple(i * a + j * b for a, b in zip(alpha, beta))
            if any(x.denominator != 1 for x in v):
                continue
            vi = tuple(int(x) for x in v)
            if vi in pset:
                out.append((vi, (i, j)))
    return out


def _parallel(a, b):
    return in_cone([b], a) or in_cone([tuple(-x for x in b)], a)


def _antiparallel(a, b):
    return in_cone([tuple(-x for x in b)], a)


def sample_special_closed(ell, policy: Policy = DEFAULT_POLICY, count=None, label="roots"):
    """Seeded random right-extreme special closed subsets of B_ell.

    Each sample is returned already in a right-extreme order (elements are
    appended only when extreme in the enlarged set, so the addition order is
    right extreme by construction).
    """
    phi = enumerate_roots(ell, "B")
    rng = policy.rng(label)
    count = count if count is not None else policy.sigma_count
    samples = []
    for _ in range(count):
        target = rng.randint(1, len(phi) // 2)
        sigma = []
        sset = set()
        outside = {g: True for g in phi}
        tries = 0
        while len(sigma) < target and tries < 6 * len(phi):
            tries += 1
            alpha = phi[rng.randrange(len(phi))]
            if alpha in sset:
                continue
            enlarged = sigma + [alpha]
            # cheap combinatorial closure filter before the exact LP checks
            bad = False
            for b in enlarged:
                s = tuple(x + y for x, y in zip(alpha, b))
                if s in outside and s not in sset and s != alpha and any(s):
                    if s in set(phi) and s not in sset and s != alpha:
                        bad = True
                        break
            if bad:
                continue
            if not is_extreme(alpha, enlarged):
                continue
            if not cone_pointed(enlarged):
                continue
            ok = True
            ens = set(enlarged)
            for gamma in phi:
                if gamma not in ens and in_cone(enlarged, gamma):
                    ok = False
                    break
            if ok:
                sigma.append(alpha)
                sset.add(alpha)
        samples.append(sigma)
    return samples
