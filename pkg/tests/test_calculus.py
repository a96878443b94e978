from hypothesis import given

from supergc.calculus import Dm, Dp, Jm, Jp, OddOp, PartialArg, PartialX, derive, substitute
from supergc.expr import Expr, LinearVar, coord_atom, func_atom, make_exp, make_function, superfunction
from supergc.gauss import I

from conftest import exprs

D = {"+": Dp(), "-": Dm()}
J = {"+": Jp(), "-": Jm()}
X = {"+": PartialX("x+"), "-": PartialX("x-")}
th_p = Expr.atom(coord_atom("th+"))
th_m = Expr.atom(coord_atom("th-"))
x_p = Expr.atom(coord_atom("x+"))
H = Expr.atom(func_atom(superfunction("H", 1)))
phi = Expr.atom(func_atom(superfunction("phi", 0)))


def d(e, op):
    return derive(e, op)


def test_D_on_coordinates():
    # D+ = d/dth+ - i th+ d/dx+
    assert d(th_p, Dp()) == Expr.const(1)
    assert d(x_p, Dp()) == th_p.scale(-I)
    assert d(x_p, Jp()) == th_p.scale(I)


def test_DD_word_canonical_form():
    # D+ D+ H = -i dx+ H as a single derivative atom
    lhs = d(d(H, Dp()), Dp())
    assert lhs == d(H, PartialX("x+")).scale(-I)
    assert len(lhs.terms) == 1


@given(exprs())
def test_D_squares(e):
    for s in "+-":
        assert d(d(e, D[s]), D[s]) == d(e, X[s]).scale(-I)
        assert d(d(e, J[s]), J[s]) == d(e, X[s]).scale(I)


@given(exprs())
def test_J_D_anticommute(e):
    for m in "+-":
        for n in "+-":
            assert d(d(e, D[n]), J[m]) + d(d(e, J[m]), D[n]) == Expr.const(0)


@given(exprs(), exprs())
def test_graded_leibniz(e, f):
    p = e.parity()
    if p is None:
        return
    sign = -1 if p else 1
    lhs = d(e * f, Dp())
    rhs = d(e, Dp()) * f + (e * d(f, Dp())).scale(sign)
    assert lhs == rhs


def test_chain_rule_through_exp():
    assert d(make_exp(phi), Dp()) == d(phi, Dp()) * make_exp(phi)


def test_linear_variable_chain_rule():
    xi = LinearVar.make("xi", {"x+": 1, "x-": -1})
    m = make_function("m", 1, (xi,))
    M = Expr.atom(func_atom(m))
    dm = d(M, PartialArg(xi))
    assert d(M, PartialX("x-")) == -dm
    assert d(M, Dp()) == (th_p * dm).scale(-I)


def test_theta_derivative_sign():
    assert d(th_p * th_m, OddOp("-", 0)) == -th_p
    assert d(th_p * th_m, OddOp("+", 0)) == th_m


def test_substitute_coordinates():
    e = x_p * x_p
    assert substitute(e, {"x+": x_p + Expr.const(1)}) == x_p * x_p + x_p.scale(2) + Expr.const(1)
