from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from supergc.gauss import gq, I
from supergc.grassmann import (
    MixedParity, OddExponent, SuperNumber, ZeroBody, sn_exp, sn_inv, sn_split,
)

GENS = [SuperNumber.generator(f"t{k}") for k in range(1, 6)]


@st.composite
def supernumbers(draw, parity=None):
    out = SuperNumber()
    for _ in range(draw(st.integers(0, 4))):
        k = draw(st.integers(0, 3))
        idx = draw(st.lists(st.integers(0, 4), min_size=k, max_size=k, unique=True))
        if parity is not None and len(idx) % 2 != parity:
            continue
        m = SuperNumber.scalar(gq(draw(st.integers(-4, 4)), draw(st.integers(-2, 2))))
        for i in idx:
            m = m * GENS[i]
        out = out + m
    return out


def test_generators_anticommute():
    a, b = GENS[0], GENS[1]
    assert a * b == -(b * a)
    assert a * a == SuperNumber()


def test_parity_and_body():
    x = SuperNumber.scalar(3) + GENS[0] * GENS[1]
    assert x.parity() == 0
    assert x.body == gq(3)
    assert GENS[2].parity() == 1
    assert (GENS[0] + SuperNumber.scalar(1)).parity() is None


def test_mixed_parity_rejected():
    with pytest.raises(MixedParity):
        SuperNumber({(0,): 1, (): 1}, parity=0)


@given(supernumbers(), supernumbers(), supernumbers())
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(supernumbers(), supernumbers(), supernumbers())
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(supernumbers(0), supernumbers())
def test_even_elements_are_central(a, b):
    assert a * b == b * a


@given(supernumbers(1), supernumbers(1))
def test_odd_elements_anticommute(a, b):
    assert a * b == -(b * a)


@given(supernumbers(0))
def test_inverse(a):
    if not a.body:
        with pytest.raises(ZeroBody):
            sn_inv(a)
        return
    assert a * sn_inv(a) == SuperNumber.scalar(1)


@given(supernumbers(0), supernumbers(0))
def test_exp_of_souls_is_a_homomorphism(a, b):
    sa = sn_split(a)[3]
    sb = sn_split(b)[3]
    assert sn_exp(sa + sb) == sn_exp(sa) * sn_exp(sb)


def test_exp_of_odd_raises():
    with pytest.raises(OddExponent):
        sn_exp(GENS[0])


def test_exp_of_nilpotent_is_exact():
    n = GENS[0] * GENS[1]
    assert sn_exp(n) == SuperNumber.scalar(1) + n
    s = n + GENS[2] * GENS[3]
    # (n + m)^2 / 2 = n m
    assert sn_exp(s) == SuperNumber.scalar(1) + s + n * GENS[2] * GENS[3]


def test_gaussian_rational_coefficients():
    x = SuperNumber.scalar(gq(Fraction(1, 3), 1))
    assert (x * x).body == gq(Fraction(1, 9)) - 1 + gq(0, Fraction(2, 3))
    assert I * I == gq(-1)
