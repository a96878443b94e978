import pytest

from supergc import frames as Fr
from supergc.expr import ONE_EXPR, Expr, make_exp
from supergc.rules import rewrite
from supergc.scenarios import generic_even_superfield


def test_superfield_components_roundtrip():
    phi = generic_even_superfield()
    assert Fr.to_superfield(phi.expr()) == phi


def test_superfield_parity_check():
    phi = generic_even_superfield()
    with pytest.raises(Fr.FrameError):
        Fr.Superfield(phi.c1, phi.c1, phi.c2, phi.c3, 0)


def test_expand_exp_matches_closed_form():
    phi = generic_even_superfield()
    assert Fr.expand_exp(phi) == Fr.exp_formula(phi, 1)
    assert Fr.expand_exp(-phi) == Fr.exp_formula(phi, -1)
    assert make_exp(phi.expr()) * make_exp((-phi).expr()) == ONE_EXPR


def test_expand_exp_rejects_odd():
    phi = generic_even_superfield()
    odd = Fr.Superfield(phi.c1, phi.c0, phi.c3, phi.c2, 1)
    with pytest.raises(Fr.OddInput):
        Fr.expand_exp(odd)


def test_twist_must_be_involution():
    p = Fr.sine_gordon_problem()
    with pytest.raises(Fr.FrameError):
        Fr.LinearProblem(p.Aplus, p.Aminus, twist=p.Aplus)


def test_gw_diagonal_entries_are_components():
    fd = Fr.FrameData()
    Z = Fr.zcc_residual(Fr.build_gw(fd))
    comps = Fr.component_equations(fd)
    assert Fr.match_entry(Z[0, 0], comps["i"]) == ONE_EXPR
    assert Fr.match_entry(Z[1, 1], comps["iii"]) == ONE_EXPR


def test_gw_reduces_modulo_rules():
    fd = Fr.FrameData()
    Z = Fr.zcc_residual(Fr.build_gw(fd))
    rules = Fr.gc_rules(fd)
    for (i, j) in [(0, 0), (1, 1), (2, 0), (2, 1)]:
        assert not rewrite(Z[i, j], rules)
    # the f column needs the relation between f and R+-
    assert rewrite(Z[0, 2], rules)
    assert not rewrite(rewrite(Z[0, 2], rules), Fr.df_rules(fd))


def test_constant_f_system():
    fd = Fr.FrameData.constant_f()
    Z = Fr.zcc_residual(Fr.build_gw(fd))
    rules = Fr.gc_rules_constant_f(fd)
    assert all(not rewrite(Z[i, j], rules) for i in range(3) for j in range(3))
    assert len(Fr.gc_residuals(fd, constant_f=True)) == 3


def test_sine_gordon():
    p = Fr.sine_gordon_problem()
    rules = Fr.sine_gordon_rules()
    Z = Fr.zcc_residual(p)
    assert all(not rewrite(Z[i, j], rules) for i in range(3) for j in range(3))
    q = Fr.insert_spectral(p, Fr.sine_gordon_scaling())
    ap, am = Fr.sine_gordon_spectral_expected()
    assert q.Aplus == ap and q.Aminus == am
    Zq = Fr.zcc_residual(q)
    assert all(not rewrite(Zq[i, j], rules) for i in range(3) for j in range(3))


def test_insert_spectral_rejects_bad_scaling():
    p = Fr.sine_gordon_problem()
    s = Fr.sine_gordon_scaling()
    s["x+"] = s["th+"]
    with pytest.raises(Fr.NonInvertibleScaling):
        Fr.insert_spectral(p, s)


def test_classical_problem_gives_classical_equations():
    p = Fr.classical_problem()
    Z = Fr.zcc_residual(p)
    eqs = Fr.classical_gc()
    nonzero = [Z[i, j] for i in range(3) for j in range(3) if Z[i, j]]
    for e in nonzero:
        assert any(Fr.match_entry(e, q) is not None for q in eqs)
