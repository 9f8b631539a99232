"""Signed monomial algebra of the fiber."""

import itertools

import pytest

from freecircle.fiber import (
    MONOMIALS,
    SpaceSignature,
    UNIT,
    mono_degree,
    mono_from_name,
    mono_name,
    mono_product,
    monomials_of_degree,
)


def test_signature_validation():
    SpaceSignature(1, 1, 1)
    with pytest.raises(ValueError):
        SpaceSignature(0, 1, 2)
    with pytest.raises(ValueError):
        SpaceSignature(3, 2, 4)


def test_degrees_348():
    sig = SpaceSignature(3, 4, 8)
    ab = mono_from_name("ab")
    assert mono_degree(sig, ab) == 7
    assert mono_degree(sig, UNIT) == 0
    assert mono_degree(sig, mono_from_name("abc")) == 15


def test_names_round_trip():
    for m in MONOMIALS:
        assert mono_from_name(mono_name(m)) == m


def test_product_canonical_order():
    sig = SpaceSignature(3, 4, 8)
    a, b = mono_from_name("a"), mono_from_name("b")
    assert mono_product(sig, a, b) == (1, mono_from_name("ab"))


def test_product_transposition_of_odd_classes():
    sig = SpaceSignature(3, 5, 8)  # n, m both odd
    a, b = mono_from_name("a"), mono_from_name("b")
    assert mono_product(sig, b, a) == (-1, mono_from_name("ab"))


def test_squares_vanish():
    sig = SpaceSignature(2, 4, 8)  # even degrees still square to zero
    for g in ("a", "b", "c"):
        m = mono_from_name(g)
        assert mono_product(sig, m, m) is None


@pytest.mark.parametrize("nml", [(3, 4, 8), (1, 1, 1), (2, 3, 6), (2, 4, 7)])
def test_graded_commutativity(nml):
    sig = SpaceSignature(*nml)
    for u, v in itertools.product(MONOMIALS, MONOMIALS):
        uv = mono_product(sig, u, v)
        vu = mono_product(sig, v, u)
        assert (uv is None) == (vu is None)
        if uv is not None:
            sign = -1 if (mono_degree(sig, u) * mono_degree(sig, v)) % 2 else 1
            assert uv[1] == vu[1]
            assert uv[0] == sign * vu[0]


@pytest.mark.parametrize("nml", [(3, 4, 8), (1, 2, 5), (1, 1, 2)])
def test_associativity_exhaustive(nml):
    sig = SpaceSignature(*nml)

    def times(x, y):
        # scalar-monomial pairs closed under zero
        if x is None or y is None:
            return None
        sx, mx = x
        sy, my = y
        p = mono_product(sig, mx, my)
        if p is None:
            return None
        return (sx * sy * p[0], p[1])

    for u, v, w in itertools.product(MONOMIALS, repeat=3):
        left = times(times((1, u), (1, v)), (1, w))
        right = times((1, u), times((1, v), (1, w)))
        assert left == right


def test_unit_is_identity():
    sig = SpaceSignature(2, 3, 7)
    for m in MONOMIALS:
        assert mono_product(sig, UNIT, m) == (1, m)
        assert mono_product(sig, m, UNIT) == (1, m)


def test_degenerate_degree_coincidence():
    sig = SpaceSignature(3, 4, 7)  # l = n + m
    assert monomials_of_degree(sig, 7) == (
        mono_from_name("ab"),
        mono_from_name("c"),
    )
