from fractions import Fraction

import pytest

from oddform.roots import (
    AntiparallelPair,
    NotSpecialClosed,
    enumerate_roots,
    in_cone,
    is_extreme,
    is_special_closed,
    positive_combinations,
    right_extreme_order,
    sample_special_closed,
    verify_right_extreme,
)
from oddform.sweeps import Policy


def e(ell, *entries):
    v = [0] * ell
    for i, x in entries:
        v[i] = x
    return tuple(v)


def test_enumerate_counts():
    assert len(enumerate_roots(3, "B")) == 18
    assert len(enumerate_roots(4, "BC")) == 40
    assert len(enumerate_roots(2, "B")) == 8
    assert len(set(enumerate_roots(4, "BC"))) == 40


def test_in_cone_basics():
    gens = [(1, -1, 0), (0, 1, -1)]
    assert in_cone(gens, (1, 0, -1))
    assert not in_cone(gens, (0, 0, 1))
    assert in_cone(gens, (0, 0, 0))
    assert in_cone([(1, 0)], (2, 0))
    assert not in_cone([(2, 0)], (1, 0)) is False  # 1/2 * (2e1) = e1 is in the cone


def test_is_special_closed():
    phi = enumerate_roots(3, "B")
    assert is_special_closed([], phi)
    a, b, c = (1, -1, 0), (0, 1, -1), (1, 0, -1)
    assert is_special_closed([a, b, c], phi)
    # dropping the sum breaks closedness
    assert not is_special_closed([a, b], phi)
    # opposite pair
    assert not is_special_closed([e(3, (0, 1)), e(3, (0, -1))], phi)
    # closed-but-not-cone-closed: {e1+e2, e1-e2} has e1 in its cone
    assert not is_special_closed([(1, 1, 0), (1, -1, 0)], phi)


def test_right_extreme_order():
    phi = enumerate_roots(3, "B")
    a, b, c = (1, -1, 0), (0, 1, -1), (1, 0, -1)
    assert right_extreme_order([a], phi) == [a]
    order = right_extreme_order([a, b, c], phi)
    assert verify_right_extreme(order)
    # the sum c = a + b is not extreme, so it must not come last
    assert order[-1] != c
    with pytest.raises(NotSpecialClosed):
        right_extreme_order([a, b], phi)


def test_suffix_removal_stays_special_closed():
    phi = enumerate_roots(3, "B")
    for sigma in sample_special_closed(3, Policy(seed=5), count=12):
        order = right_extreme_order(sigma, phi)
        while order:
            assert is_special_closed(order, phi)
            order = order[:-1]


def test_every_nonempty_sample_has_extreme():
    phi = enumerate_roots(4, "B")
    for sigma in sample_special_closed(4, Policy(seed=9), count=10):
        if sigma:
            assert any(is_extreme(a, sigma) for a in sigma)
            assert is_special_closed(sigma, phi)


def test_positive_combinations():
    ell = 3
    phi = enumerate_roots(ell, "B")
    a, b = (1, -1, 0), (0, 1, -1)
    out = positive_combinations(a, b, phi)
    assert out == [((1, 0, -1), (Fraction(1), Fraction(1)))]
    out2 = positive_combinations(e(ell, (0, 1)), e(ell, (1, 1)), phi)
    assert ((1, 1, 0), (Fraction(1), Fraction(1))) in out2
    with pytest.raises(AntiparallelPair):
        positive_combinations(e(ell, (0, 1)), e(ell, (0, -1)), phi)
    # real-positive coefficients stay within {1/2, 1, 2}
    for alpha in phi:
        for beta in phi:
            try:
                combos = positive_combinations(alpha, beta, phi)
            except AntiparallelPair:
                continue
            for _, (i, j) in combos:
                assert i in (Fraction(1, 2), Fraction(1), Fraction(2))
                assert j in (Fraction(1, 2), Fraction(1), Fraction(2))


def test_positive_combinations_integral_bc():
    ell = 2
    phibc = enumerate_roots(ell, "BC")
    a, b = e(ell, (0, 1)), e(ell, (1, 1))  # e1 and e2
    out = positive_combinations(a, b, phibc, integral=True)
    assert out == [((1, 1), (Fraction(1), Fraction(1)))]
    # short + long gives both the short and the doubled-short root
    c = (1, -1)
    out2 = positive_combinations(b, c, phibc, integral=True)
    roots = {r for r, _ in out2}
    assert (1, 0) in roots and (2, 0) in roots
    assert ((2, 0), (Fraction(2), Fraction(2))) in out2
    # parallel same-direction pairs are allowed in integral mode
    out3 = positive_combinations(a, tuple(2 * x for x in a), phibc, integral=True)
    assert out3 == []


def test_weyl_symmetry_of_positive_combinations():
    import random

    ell = 3
    phi = enumerate_roots(ell, "B")
    rng = random.Random(2)
    for _ in range(40):
        perm = list(range(ell))
        rng.shuffle(perm)
        signs = [rng.choice((1, -1)) for _ in range(ell)]

        def act(v):
            return tuple(signs[i] * v[perm[i]] for i in range(ell))

        alpha, beta = rng.choice(phi), rng.choice(phi)
        try:
            base = positive_combinations(alpha, beta, phi)
        except AntiparallelPair:
            continue
        moved = positive_combinations(act(alpha), act(beta), phi)
        assert {(act(r), ij) for r, ij in base} == {(r, ij) for r, ij in moved}
