import pytest

from supergc.calculus import Dm, Dp, derive
from supergc.expr import Expr, ParityMismatch, const_atom, func_atom, superfunction
from supergc.rules import NonTermination, make_rule, rewrite

Q = superfunction("Q", 1)
P = superfunction("P", 1)
q = Expr.atom(func_atom(Q))
p = Expr.atom(func_atom(P))
c = Expr.atom(const_atom("c_", 1))
b = Expr.atom(const_atom("b", 0))


def test_rule_extends_to_derivatives():
    r = make_rule(func_atom(Q), p * b)
    e = derive(q, Dp())
    assert rewrite(e, [r]) == derive(p, Dp()) * b


def test_guarded_rule_needs_guard():
    r = make_rule(const_atom("b", 0), Expr.const(0), guard=const_atom("c_", 1))
    assert rewrite(c * b, [r]) == Expr.const(0)
    assert rewrite(b, [r]) == b


def test_parity_checked():
    with pytest.raises(ParityMismatch):
        make_rule(func_atom(Q), b)


def test_non_termination_reported():
    r1 = make_rule(func_atom(Q), p)
    r2 = make_rule(func_atom(P), q)
    with pytest.raises(NonTermination):
        rewrite(q, [r1, r2], max_passes=5)


def test_word_specific_rule():
    # a rule on D+ Q only touches that word and its extensions
    atom = next(iter(derive(q, Dp()).atoms()))
    r = make_rule(atom, b)
    assert rewrite(derive(q, Dm()), [r]) == derive(q, Dm())
    assert rewrite(derive(q, Dp()), [r]) == b
