import pytest

from supergc import solutions as sol
from supergc.grammar import parse_expr

RUNS = [(sid, e) for sid in ("g124", "g14", "g41", "g35") for e in sol.EPS_VALUES[sid]]
PASSING = [r for r in RUNS if r != ("g124", 1)]


@pytest.fixture(scope="module")
def loaded():
    return {r: sol.load_solution(*r) for r in RUNS}


@pytest.mark.parametrize("run", PASSING)
def test_residuals_vanish(run, loaded):
    s = loaded[run]
    assert all(not r for r in sol.residuals(s))
    assert all(not r for _, r in sol.goal_residuals(s))


@pytest.mark.parametrize("run", RUNS)
def test_flat(run, loaded):
    _, K, K_det = sol.curvature(loaded[run])
    assert not K and not K_det


@pytest.mark.parametrize("run", RUNS)
def test_invariant_under_generator(run, loaded):
    d = sol.invariance_defects(loaded[run])
    assert all(not v for v in d.values()), d


@pytest.mark.parametrize("run", [r for r in RUNS if r[0] != "g14"])
def test_first_form(run, loaded):
    assert not sol.first_form_defect(loaded[run])


def test_g14_is_degenerate(loaded):
    assert loaded[("g14", 1)].degenerate
    assert not loaded[("g41", 1)].degenerate


def test_g124_positive_eps_residual(loaded):
    # by hand: the last equation leaves (1 + eps) i C+C- e^{a x+}(th+ - th-)(m' - phi0' m)
    s = loaded[("g124", 1)]
    res = sol.residuals(s)
    want = parse_expr("2*i*C0+_*C0-_*exp(a*x+)*(th+ - th-)*(dxi m0+_ - dxi phi0*m0+_)",
                      s.document.symbols)
    assert res[3] == want
    assert not res[0] and not res[1]


def test_g124_constraint_goal(loaded):
    # the stated differential constraint is what the rule encodes
    for e in (1, -1):
        s = loaded[("g124", e)]
        assert not s.document.evaluate_goals()[0][1]


def test_generator_text():
    s = sol.load_solution("g41", -1)
    assert s.generator == {"C0": "1", "P+": "(-1)"}
    assert "var" not in sol.solution_text("g41", 1)


def test_unknown_solution():
    with pytest.raises(KeyError):
        sol.solution_text("g2")


def test_parity_consistent_bindings(loaded):
    fd = loaded[("g35", 1)].frame_data()
    assert fd.phi.parity() == 0 and fd.f.parity() == 0
    for e in (fd.H, fd.Qp, fd.Qm, fd.Rp, fd.Rm):
        assert e.parity() == 1
