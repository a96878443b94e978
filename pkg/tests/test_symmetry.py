import pytest

from supergc import frames as Fr
from supergc import symmetry as S


@pytest.fixture(scope="module")
def gens():
    return S.susy_generators(False)


def test_generator_parities(gens):
    assert [k for k, X in gens.items() if X.parity] == ["J+", "J-", "W"]
    assert len(gens) == 9
    assert len(S.susy_generators(True)) == 8


def test_selected_brackets(gens):
    assert S.bracket(gens["K1"], gens["P+"]) == gens["P+"].scale(2)
    assert S.bracket(gens["K0"], gens["W"]) == gens["W"]
    assert S.bracket(gens["C0"], gens["W"]) == -gens["W"]
    from supergc.gauss import I
    assert S.bracket(gens["J+"], gens["J+"]) == gens["P+"].scale(2 * I)


def test_bracket_graded_antisymmetry(gens):
    for a in gens.values():
        for b in gens.values():
            sign = -1 if (a.parity and b.parity) else 1
            assert S.bracket(a, b) == -S.bracket(b, a).scale(sign)


def test_tables_match():
    for t in (S.table1(), S.table2()):
        rows = S.verify_table(t)
        assert len(rows) == len(t.basis) ** 2
        assert all(r[4] for r in rows)


def test_parse_combo():
    from supergc.gauss import I, gq
    assert S.parse_combo("2iP+") == {"P+": 2 * I}
    assert S.parse_combo("-J+") == {"J+": gq(-1)}
    assert S.parse_combo("0") == {}
    with pytest.raises(S.SymmetryError):
        S.parse_combo("2*P+")


def test_classical_projection():
    P = S.project(S.classical_generators(), S.CLASSICAL_RETAINED)
    A = S.classical_A()
    assert len(P) == 7
    assert all(any(Y == Z for Z in A.values()) for Y in P.values())


def test_classical_relations_sign_conflict():
    # [e1, e5] comes out as +2 e3 with the same bracket that gives [e1, e3] = e1
    g = S.classical_generators()
    assert S.bracket(g["e1"], g["e3"]) == g["e1"]
    assert S.bracket(g["e1"], g["e5"]) == g["e3"].scale(2)
    assert S.bracket(g["e3"], g["e5"]) == g["e5"]


@pytest.mark.parametrize("name", ["P+", "P-", "K1", "K2", "K0", "C0", "J+", "J-", "W"])
def test_flow_invariance(name, gens):
    fd = Fr.FrameData()
    tr = S.flow(name)
    assert S.flow_generator(tr) == gens[name]
    out = S.check_invariance(tr, Fr.gc_residuals(fd), Fr.gc_rules(fd))
    assert out["ok"], out


@pytest.mark.parametrize("name", ["P+", "P-", "K1", "K2", "K0", "J+", "J-", "W"])
def test_flow_invariance_constant_f(name):
    fd = Fr.FrameData.constant_f()
    tr = S.flow(name, constant_f=True)
    assert S.flow_generator(tr) == S.susy_generators(True)[name]
    out = S.check_invariance(tr, Fr.gc_residuals(fd, constant_f=True), Fr.gc_rules_constant_f(fd))
    assert out["ok"], out


def test_shifted_susy_flow_is_not_superconformal():
    fd = Fr.FrameData()
    tr = S.flow("J+", convention="paper-shift")
    out = S.check_invariance(tr, Fr.gc_residuals(fd), Fr.gc_rules(fd))
    assert not out["ok"]


def test_broken_flow_detected():
    fd = Fr.FrameData()
    tr = S.flow("K0")
    tr.fields = {Fr.H: tr.fields[Fr.H]}
    assert not S.check_invariance(tr, Fr.gc_residuals(fd), Fr.gc_rules(fd))["ok"]


def test_unknown_generator():
    with pytest.raises(S.UnsupportedGenerator):
        S.flow("K7")
