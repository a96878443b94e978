import pytest
from hypothesis import given

from supergc.expr import (
    ONE_EXPR, Expr, ExprError, NotMonomial, const_atom, coord_atom, func_atom,
    make_exp, make_function, superfunction,
)
from supergc.gauss import gq, I

from conftest import even_exprs, exprs

th_p = Expr.atom(coord_atom("th+"))
th_m = Expr.atom(coord_atom("th-"))
x_p = Expr.atom(coord_atom("x+"))
phi = Expr.atom(func_atom(superfunction("phi", 0)))
H = Expr.atom(func_atom(superfunction("H", 1)))
mu = Expr.atom(const_atom("mu_", 1))
a = Expr.atom(const_atom("a", 0))


def test_odd_atoms_square_to_zero():
    assert th_p * th_p == Expr.const(0)
    assert H * H == Expr.const(0)
    assert mu * H * mu == Expr.const(0)


def test_odd_atoms_anticommute():
    assert th_p * th_m == -(th_m * th_p)
    assert H * mu == -(mu * H)


def test_parity():
    assert (th_p * th_m).parity() == 0
    assert (H * phi).parity() == 1
    assert (H + phi).parity() is None


def test_exp_merging():
    assert make_exp(phi) * make_exp(-phi) == ONE_EXPR
    assert make_exp(phi) * make_exp(phi) == make_exp(phi.scale(2))
    assert make_exp(Expr.const(0)) == ONE_EXPR


def test_exp_of_soul_expands():
    e = make_exp(phi + th_p * th_m * a)
    assert e == make_exp(phi) * (ONE_EXPR + th_p * th_m * a)


def test_exp_of_odd_raises():
    with pytest.raises(ExprError):
        make_exp(H)


def test_division_by_monomial():
    e = (a * x_p + a) / a
    assert e == x_p + ONE_EXPR
    with pytest.raises(ExprError):
        ONE_EXPR / (a + x_p)


def test_log_has_no_negative_power():
    from supergc.expr import log_atom
    with pytest.raises(NotMonomial):
        Expr.atom(log_atom("x+"), -1)


def test_function_arguments():
    f = make_function("f", 0, ("x-",))
    assert f.args[0].name == "x-"
    with pytest.raises(ExprError):
        make_function("g", 0, ("x+",), ("th+", "th-"))


@given(exprs(), exprs(), exprs())
def test_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p - p == Expr.const(0)


@given(even_exprs(), exprs())
def test_even_parts_commute(e, f):
    assert e * f == f * e


@given(exprs())
def test_hash_consistent_with_eq(e):
    f = Expr(dict(e.terms))
    assert e == f and hash(e) == hash(f)


def test_gaussian_coefficients_exact():
    e = Expr.const(gq(1, 1)) * Expr.const(gq(1, -1))
    assert e == Expr.const(2)
    assert Expr.const(I).scale(I) == Expr.const(-1)
