"""Built-in verification scenarios.

Every scenario is a function returning a list of :class:`Check` rows;
:func:`run_scenario` wraps it into a timed :class:`Report`.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import classification as cls
from . import frames as Fr
from . import geometry as G
from . import solutions as sol
from . import symmetry as S
from .expr import ONE_EXPR, Expr, make_exp, make_function
from .gauss import gq
from .grammar import format_expr
from .grassmann import SuperNumber
from .report import Check, Report
from .rules import rewrite


class UnknownScenario(KeyError):
    pass


def _fx(e: Expr) -> str:
    return format_expr(e)


def _deriv_exprs(*ds):
    return tuple(c for d in ds for c in d.coeffs.values())


def _zero_check(name, e: Expr, note=None) -> Check:
    return Check(name, not e, expected="0", actual=None if not e else _fx(e),
                 witness=None if not e else _fx(e), note=note, exprs=(e,))


def _eq_check(name, actual: Expr, expected: Expr, note=None) -> Check:
    ok = actual == expected
    return Check(name, ok, expected=_fx(expected), actual=_fx(actual),
                 witness=None if ok else _fx(actual - expected), note=note,
                 exprs=(actual, expected))


# tables and classical relations

def _relation_rows(prefix, rows):
    out = []
    for i, j, want, actual, ok in rows:
        out.append(Check(f"{prefix}[{i},{j}]", ok, repr(want), repr(actual),
                         None if ok else repr(actual - want),
                         exprs=_deriv_exprs(want, actual)))
    return out


def scenario_tables(max_passes=16, seed=0):
    checks = []
    for t in (S.table1(), S.table2()):
        checks += _relation_rows(t.name, S.verify_table(t))
    checks += _relation_rows("classical", S.verify_relations(
        S.classical_generators(), S.classical_relations(), check_all_pairs=False))
    # stated vanishing brackets of e0
    g = S.classical_generators()
    zero = S.SuperDerivation({}, 0, S.CL_FIELDS)
    for k in ("D1", "D2", "D3", "R12", "R13", "R23", "S12", "S13", "S23"):
        a = S.bracket(g["e0"], g[k])
        checks.append(Check(f"classical[e0,{k}]", a == zero, "0", repr(a),
                            exprs=_deriv_exprs(a)))
    A = S.classical_A()
    rel = {k: v for k, v in S.classical_relations().items() if k[0] in A and k[1] in A}
    checks += _relation_rows("A", S.verify_relations(A, rel, check_all_pairs=True))
    for name, want, actual, ok in S.virasoro_checks():
        checks.append(Check(f"virasoro{name}", ok, repr(want), repr(actual),
                            None if ok else repr(actual - want),
                            exprs=_deriv_exprs(want, actual)))
    return checks


def scenario_classical_pi(max_passes=16, seed=0):
    g = S.classical_generators()
    A = S.classical_A()
    P = S.project(g, S.CLASSICAL_RETAINED)
    checks = [Check("generators", len(g) == 19, "19", str(len(g))),
              Check("projected count", len(P) == len(A), str(len(A)), str(len(P)))]
    for k, Y in P.items():
        hit = [j for j, Z in A.items() if Z == Y]
        checks.append(Check(f"pi({k}) in A", bool(hit), note=",".join(hit) or None,
                            exprs=_deriv_exprs(Y)))
    for j, Z in A.items():
        hit = any(Y == Z for Y in P.values())
        checks.append(Check(f"{j} in pi(L)", hit, exprs=_deriv_exprs(Z)))
    return checks


# zero-curvature chain

def scenario_gw_zcc(max_passes=16, seed=0):
    checks = []
    fd = Fr.FrameData()
    Z = Fr.zcc_residual(Fr.build_gw(fd))
    comps = Fr.component_equations(fd)
    rules = Fr.gc_rules(fd)
    dfr = Fr.df_rules(fd)
    # entry -> (component, needs the f relation)
    expect = {(0, 0): ("i", False), (1, 1): ("iii", False), (2, 0): ("v", False),
              (2, 1): ("vi", False), (0, 2): ("ii", True), (1, 2): ("iv", True)}
    n = Z.shape[0]
    for i in range(n):
        for j in range(n):
            e = Z[i, j]
            if (i, j) not in expect:
                checks.append(_zero_check(f"entry({i},{j}) vanishes", e))
                continue
            comp, via_f = expect[(i, j)]
            if via_f:
                m = Fr.match_entry(rewrite(e, dfr, max_passes), rewrite(comps[comp], dfr, max_passes))
                note = "modulo R+- = D+-phi + f^-1 D+-f"
            else:
                m = Fr.match_entry(e, comps[comp])
                note = None
            checks.append(Check(f"entry({i},{j}) ~ component ({comp})", m is not None,
                                note=note if m is None else f"factor {_fx(m)}" + (f"; {note}" if note else ""),
                                exprs=(e, comps[comp]) + ((m,) if m is not None else ())))
            red = rewrite(e, rules, max_passes)
            if via_f:
                red = rewrite(red, dfr, max_passes)
            checks.append(_zero_check(f"entry({i},{j}) reduces", red,
                                      "modulo the four rules and the f relation" if via_f else None))
    res = Fr.gc_residuals(fd)
    for k, r in enumerate(res):
        checks.append(_zero_check(f"GC({k + 1}) reduces", rewrite(r, rules, max_passes)))
    # constant f
    fd0 = Fr.FrameData.constant_f()
    Z0 = Fr.zcc_residual(Fr.build_gw(fd0))
    r0 = Fr.gc_residuals(fd0, constant_f=True)
    rules0 = Fr.gc_rules_constant_f(fd0)
    found = set()
    for i in range(n):
        for j in range(n):
            e = Z0[i, j]
            if not e:
                continue
            hits = [k for k, c in enumerate(r0) if Fr.match_entry(e, c) is not None]
            found.update(hits)
            checks.append(Check(f"const-f entry({i},{j}) ~ equation", bool(hits),
                                note=",".join(str(h + 1) for h in hits) or None, exprs=(e,)))
            checks.append(_zero_check(f"const-f entry({i},{j}) reduces", rewrite(e, rules0, max_passes)))
    checks.append(Check("const-f covers three equations", found == {0, 1, 2},
                        "1,2,3", ",".join(str(h + 1) for h in sorted(found))))
    return checks


def scenario_sine_gordon(max_passes=16, seed=0):
    checks = []
    p = Fr.sine_gordon_problem()
    rules = Fr.sine_gordon_rules()
    Z = Fr.zcc_residual(p)
    for i in range(3):
        for j in range(3):
            checks.append(_zero_check(f"twisted zcc({i},{j})", rewrite(Z[i, j], rules, max_passes)))
    q = Fr.insert_spectral(p, Fr.sine_gordon_scaling())
    ap, am = Fr.sine_gordon_spectral_expected()
    for nm, got, want in (("A+", q.Aplus, ap), ("A-", q.Aminus, am)):
        for i in range(3):
            for j in range(3):
                checks.append(_eq_check(f"spectral {nm}({i},{j})", got[i, j], want[i, j]))
    Zq = Fr.zcc_residual(q)
    for i in range(3):
        for j in range(3):
            checks.append(_zero_check(f"spectral zcc({i},{j})", rewrite(Zq[i, j], rules, max_passes)))
    return checks


# operator identities

def operator_identities():
    """(name, lhs, rhs) maps; each identity says lhs(e) == rhs(e)."""
    from .calculus import Dm, Dp, Jm, Jp, PartialX, derive
    from .gauss import I
    d = lambda op: (lambda e: derive(e, op))
    D = {"+": Dp(), "-": Dm()}
    J = {"+": Jp(), "-": Jm()}
    out = []
    for s in "+-":
        dx = PartialX("x" + s)
        out.append((f"D{s}^2 = -i d{s}", lambda e, s=s: derive(derive(e, D[s]), D[s]),
                    lambda e, dx=dx: derive(e, dx).scale(-I)))
        out.append((f"J{s}^2 = i d{s}", lambda e, s=s: derive(derive(e, J[s]), J[s]),
                    lambda e, dx=dx: derive(e, dx).scale(I)))
    for m in "+-":
        for n in "+-":
            out.append((f"{{J{m},D{n}}} = 0",
                        lambda e, m=m, n=n: derive(derive(e, D[n]), J[m]) + derive(derive(e, J[m]), D[n]),
                        lambda e: Expr.const(0)))
    out.append(("{D+,D-} = 0", lambda e: derive(derive(e, D["-"]), D["+"]) + derive(derive(e, D["+"]), D["-"]),
                lambda e: Expr.const(0)))
    return out


def scenario_operators(max_passes=16, seed=0, samples=100):
    from .sampling import random_exprs
    exprs = random_exprs(samples, seed)
    checks = []
    for name, lhs, rhs in operator_identities():
        bad = None
        for e in exprs:
            diff = lhs(e) - rhs(e)
            if diff:
                bad = (e, diff)
                break
        checks.append(Check(f"{name} on {samples} samples", bad is None,
                            actual=None if bad is None else _fx(bad[0]),
                            witness=None if bad is None else _fx(bad[1]),
                            note=f"seed {seed}"))
    from .grammar import roundtrip_ok
    checks.append(Check("samples print and parse back", all(roundtrip_ok(e) for e in exprs),
                        exprs=tuple(exprs)))
    return checks


# exponential expansion

def generic_even_superfield(prefix="phi") -> Fr.Superfield:
    c = [Expr.atom(Fr.func_atom(make_function(f"{prefix}{k}", p, ("x+", "x-"))))
         for k, p in enumerate((0, 1, 1, 0))]
    return Fr.Superfield(c[0], c[1], c[2], c[3], 0)


def scenario_exp_expansion(max_passes=16, seed=0):
    phi = generic_even_superfield()
    checks = []
    for sign in (1, -1):
        got = Fr.expand_exp(phi if sign == 1 else -phi)
        want = Fr.exp_formula(phi, sign)
        for k, (a, b) in enumerate(zip(got.components, want.components)):
            checks.append(_eq_check(f"exp({'+' if sign == 1 else '-'}phi).c{k}", a, b))
    prod = make_exp(phi.expr()) * make_exp((-phi).expr())
    checks.append(_eq_check("exp(phi)*exp(-phi)", prod, ONE_EXPR))
    # the same law on the bare superfield symbol
    p = Fr.sym(Fr.PHI)
    checks.append(_eq_check("exp(phi)*exp(-phi) symbol", make_exp(p) * make_exp(-p), ONE_EXPR))
    return checks


# geometry

def scenario_geometry(max_passes=16, seed=0):
    fd = Fr.FrameData()
    rep = G.curvature_report(fd)
    e2 = fd.exp_phi(1) * fd.exp_phi(1)
    em2 = fd.exp_phi(-1) * fd.exp_phi(-1)
    checks = [
        _eq_check("g = e^{2phi}/4", rep.g_disc, e2.scale(gq(Fraction(1, 4)))),
        _eq_check("b = Q+Q-", rep.b_disc, fd.Qp * fd.Qm),
        _eq_check("K = 4e^{-2phi}Q+Q-", rep.K, (em2 * fd.Qp * fd.Qm).scale(4)),
        _eq_check("K = det(SR^-1)", rep.K_det, rep.K),
        _eq_check("tr(SR^-1)/2 = H", rep.Hmean, fd.H),
    ]
    (g11, g12, g22), _ = G.metric_blocks(fd)
    Gm = Fr.SuperMatrix([[g11, g12], [g12, g22]])
    prod = Gm @ G.metric_inverse(fd)
    eye = Fr.SuperMatrix.identity(2)
    for i in range(2):
        for j in range(2):
            checks.append(_eq_check(f"g g^-1 ({i},{j})", prod[i, j], eye[i, j]))
    return checks


# BCH conjugation

def random_numeric_pair(seed=0, generators=6):
    """A pair (X, Y) with truncated-soul coefficients; diagonal coefficients
    of X are bodiless so the adjoint series terminates."""
    rng = random.Random(seed)
    gens = [SuperNumber.generator(f"xi{k}") for k in range(1, generators + 1)]

    def q():
        return gq(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))

    def even_soul():
        a, b = rng.sample(range(generators), 2)
        return (gens[a] * gens[b]).scale(q())

    def odd_soul():
        return gens[rng.randrange(generators)].scale(q())

    X, Y = {}, {}
    for l in cls.BASIS:
        if l in cls.DIAGONAL:
            X[l] = even_soul()
            Y[l] = SuperNumber.scalar(q()) + even_soul()
        elif cls.PARITY[l]:
            X[l] = odd_soul()
            Y[l] = odd_soul()
        else:
            X[l] = SuperNumber.scalar(q()) + even_soul()
            Y[l] = SuperNumber.scalar(q()) + even_soul()
    return cls.AlgebraElement(X), cls.AlgebraElement(Y)


def scenario_bch(max_passes=16, seed=0):
    checks = []
    X, Y = cls.translation_example()
    got = cls.bch_closed(X, Y)
    want = cls.stated_translation_result()
    checks.append(Check("translation example", got == want, want.to_text(), got.to_text(),
                        None if got == want else (got - want).to_text(),
                        exprs=(got.to_expr(), want.to_expr())))
    X, Y = cls.twisted_example()
    got = cls.bch_closed(X, Y)
    want = cls.stated_twisted_result()
    checks.append(Check("twisted example", got == want, want.to_text(), got.to_text(),
                        None if got == want else (got - want).to_text(),
                        exprs=(got.to_expr(), want.to_expr())))
    for k in range(3):
        Xn, Yn = random_numeric_pair(seed + k)
        series = cls.bch_series(Xn, Yn, 12)
        closed = cls.bch_closed(Xn, Yn)
        diff = series - closed
        checks.append(Check(f"series = closed form (sample {seed + k})", not diff.coeffs,
                            closed.to_text(), series.to_text(),
                            None if not diff.coeffs else diff.to_text()))
    return checks


# catalog

def scenario_catalog(max_passes=16, seed=0):
    cat = cls.load_catalog()
    ns = cls.nonstandard_ids()
    want = ["g3", "g7", "g19", "g25", "g46", "g74", "g158"]
    checks = [Check("entries", len(cat) == 199, "199", str(len(cat))),
              Check("non-standard invariants", ns == want, ",".join(want), ",".join(ns))]
    for cid in ("g14", "g35", "g41", "g124"):
        rec = cat[cid]
        checks.append(Check(f"{cid} parses", rec.element is not None, note=rec.text,
                            exprs=(rec.element.to_expr(),)))
    return checks


# invariance

def scenario_invariance(max_passes=16, seed=0):
    checks = []
    for constant_f in (False, True):
        tag = "const-f " if constant_f else ""
        if constant_f:
            fd = Fr.FrameData.constant_f()
            res = Fr.gc_residuals(fd, constant_f=True)
            rules = Fr.gc_rules_constant_f(fd)
        else:
            fd = Fr.FrameData()
            res = Fr.gc_residuals(fd)
            rules = Fr.gc_rules(fd)
        for k, X in S.susy_generators(constant_f).items():
            tr = S.flow(k, constant_f=constant_f)
            G_ = S.flow_generator(tr)
            checks.append(Check(f"{tag}{k} flow differentiates to generator", G_ == X,
                                repr(X), repr(G_), exprs=_deriv_exprs(X, G_)))
            r = S.check_invariance(tr, res, rules, max_passes)
            bad = [c for c in r["checks"] if not c[1]]
            checks.append(Check(f"{tag}{k} leaves the system invariant", r["ok"],
                                witness=r.get("error") or (_fx(bad[0][2]) if bad else None),
                                exprs=tuple(c[2] for c in r["checks"])))
    return checks


# solutions

def scenario_solutions(max_passes=16, seed=0):
    checks = []
    for s in sol.all_solutions():
        for name, ok, w in sol.verify_solution(s, max_passes):
            checks.append(Check(name, ok, witness=None if ok else _fx(w), exprs=(w,)))
        if s.degenerate:
            checks.append(Check(f"{s.id}[eps={s.eps}].degenerate tangents", True,
                                note="the immersion defines curves instead of surfaces"))
    return checks


SCENARIOS = {
    "tables": scenario_tables,
    "classical-pi": scenario_classical_pi,
    "operators": scenario_operators,
    "sine-gordon": scenario_sine_gordon,
    "gw-zcc": scenario_gw_zcc,
    "exp-expansion": scenario_exp_expansion,
    "geometry": scenario_geometry,
    "bch": scenario_bch,
    "catalog": scenario_catalog,
    "solutions": scenario_solutions,
    "invariance": scenario_invariance,
}


def run_scenario(name: str, max_passes: int = 16, seed: int = 0) -> Report:
    if name not in SCENARIOS:
        raise UnknownScenario(name)
    t = time.perf_counter()
    checks = SCENARIOS[name](max_passes=max_passes, seed=seed)
    return Report(name, checks, time.perf_counter() - t)


def run_all(names=None, max_passes: int = 16, seed: int = 0, workers: int = 4):
    """Run scenarios concurrently; reports come back in catalog order."""
    names = list(names or SCENARIOS)
    for n in names:
        if n not in SCENARIOS:
            raise UnknownScenario(n)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        reports = list(ex.map(lambda n: run_scenario(n, max_passes, seed), names))
    return reports
