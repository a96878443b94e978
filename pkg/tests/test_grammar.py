import pytest
from hypothesis import given

from supergc.calculus import PartialX, derive
from supergc.expr import Expr, func_atom, superfunction
from supergc.gauss import I
from supergc.grammar import (
    ParseError, Symbols, UndeclaredSymbol, format_document, format_expr, parse_document,
    parse_expr, roundtrip_ok, symbols_for,
)
from supergc.solutions import solution_text

from conftest import exprs


def test_DD_parses_to_single_word():
    doc = parse_document("odd H(x+,x-,th+,th-); goal D+ D+ H;")
    lhs = doc.goals[0][0]
    H = Expr.atom(func_atom(superfunction("H", 1)))
    assert lhs == derive(H, PartialX("x+")).scale(-I)
    assert format_expr(lhs) == "-i*dx+ H"


def test_exp_cancels():
    doc = parse_document("even phi(x+,x-,th+,th-); goal exp(phi)*exp(-phi);")
    assert doc.goals[0][0] == Expr.const(1)


def test_undeclared_symbol():
    with pytest.raises(UndeclaredSymbol):
        parse_document("odd H(x+,x-,th+,th-);\ngoal H*K;")


def test_syntax_error_position():
    with pytest.raises(ParseError) as exc:
        parse_document("odd H(x+,x-,th+,th-);\ngoal H*(;")
    assert exc.value.line == 2


def test_declared_names_shadow_operators():
    doc = parse_document("odd J+; even a; goal J+*a;")
    assert doc.goals[0][0].parity() == 1


def test_guarded_rule_roundtrip():
    text = "odd C0+_; even B0+; even B0-; odd C0-_; rule C0+_*B0- -> -C0-_*B0+; goal C0+_*B0- + C0-_*B0+;"
    doc = parse_document(text)
    assert doc.evaluate_goals()[0][1] == Expr.const(0)
    again = parse_document(format_document(doc))
    assert again.rules == doc.rules


@pytest.mark.parametrize("sid,eps", [("g124", 1), ("g124", -1), ("g14", 1), ("g41", -1), ("g35", 1)])
def test_solution_documents_roundtrip(sid, eps):
    doc = parse_document(solution_text(sid, eps))
    printed = format_document(doc)
    assert format_document(parse_document(printed)) == printed


def test_print_is_stable():
    s = "odd H(x+,x-,th+,th-); even a; goal 2*a*D- H + exp(a*x+)*th+*H;"
    once = format_document(parse_document(s))
    assert format_document(parse_document(once)) == once


@given(exprs())
def test_roundtrip_property(e):
    assert roundtrip_ok(e)


@given(exprs())
def test_print_parse_print(e):
    s = symbols_for([e])
    t = format_expr(e)
    assert format_expr(parse_expr(t, s)) == t
