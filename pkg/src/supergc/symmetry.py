"""Superderivations, graded brackets, structure tables and finite flows."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .gauss import I, ONE, ZERO, gq
from .expr import (
    COORD, CONST, FUNC, Expr, ExprError, ONE_EXPR, ZERO_EXPR,
    atom_parity, const_atom, coord_atom, func_atom, make_exp, make_function,
)
from .calculus import ConstPartial, Dm, Dp, JetPartial, derive, substitute
from .rules import rewrite
from . import frames


class SymmetryError(Exception):
    pass


class NotFirstOrder(SymmetryError):
    pass


class UnsupportedGenerator(SymmetryError):
    pass


class SuperDerivation:
    """``sum_v coeffs[v] * d/dv`` over jet variables ``v``.

    Variables are coordinate atoms or bare field atoms. ``fields`` lists the
    field symbols of the jet space (all other function atoms are treated as
    given functions of the coordinates).
    """

    def __init__(self, coeffs, parity=None, fields=frozenset(), name=""):
        clean = {}
        for v, c in coeffs.items():
            c = c if isinstance(c, Expr) else Expr.const(c)
            if c:
                clean[v] = c
        self.coeffs = clean
        self.fields = frozenset(fields)
        self.name = name
        ps = set()
        for v, c in clean.items():
            cp = c.parity()
            if cp is None:
                raise SymmetryError(f"coefficient of {v[1]} has mixed parity")
            ps.add((cp + atom_parity(v)) % 2)
        if parity is None:
            parity = ps.pop() if len(ps) == 1 else 0
            if ps:
                raise SymmetryError("inhomogeneous derivation")
        elif ps and ps != {parity}:
            raise SymmetryError(f"{name or 'derivation'}: coefficients do not match parity {parity}")
        self.parity = parity

    def partial(self, v):
        return JetPartial(v, atom_parity(v), self.fields)

    def apply(self, e: Expr) -> Expr:
        out = ZERO_EXPR
        for v, c in self.coeffs.items():
            d = derive(e, self.partial(v))
            if d:
                out = out + c * d
        return out

    def __eq__(self, other):
        return isinstance(other, SuperDerivation) and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out.get(v, ZERO_EXPR) + c
        parity = self.parity if self.coeffs else other.parity
        return SuperDerivation(out, parity, self.fields | other.fields)

    def __neg__(self):
        return SuperDerivation({v: -c for v, c in self.coeffs.items()}, self.parity, self.fields)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, Expr):
            return SuperDerivation({v: c * x for v, x in self.coeffs.items()},
                                   (self.parity + c.parity()) % 2, self.fields)
        return SuperDerivation({v: x.scale(c) for v, x in self.coeffs.items()},
                               self.parity, self.fields)

    def is_zero(self):
        return not self.coeffs

    def __repr__(self):
        from .grammar import format_expr, format_atom
        parts = [f"({format_expr(c)})*d[{format_atom(v)}]" for v, c in sorted(self.coeffs.items())]
        return " + ".join(parts) or "0"


def bracket(X: SuperDerivation, Y: SuperDerivation) -> SuperDerivation:
    """Graded bracket XY - (-1)^{|X||Y|} YX as a derivation.

    The second-order parts cancel identically for homogeneous derivations, so
    only coefficients are computed: ``[X,Y]^v = X(Y^v) - (-1)^{|X||Y|} Y(X^v)``.
    """
    if X.parity is None or Y.parity is None:
        raise NotFirstOrder("bracket needs parity-homogeneous derivations")
    sign = -1 if (X.parity and Y.parity) else 1
    fields = X.fields | Y.fields
    X = SuperDerivation(X.coeffs, X.parity, fields)
    Y = SuperDerivation(Y.coeffs, Y.parity, fields)
    out = {}
    for v in set(X.coeffs) | set(Y.coeffs):
        c = X.apply(Y.coeffs.get(v, ZERO_EXPR)) - Y.apply(X.coeffs.get(v, ZERO_EXPR)).scale(sign)
        if c:
            out[v] = c
    return SuperDerivation(out, (X.parity + Y.parity) % 2, fields)


def restrict(X: SuperDerivation, variables) -> SuperDerivation:
    keep = set(variables)
    return SuperDerivation({v: c for v, c in X.coeffs.items() if v in keep},
                           X.parity, X.fields, X.name)


def project(basis: dict, variables) -> dict:
    """Restrict every generator to ``variables`` and keep the distinct
    nonzero images, in basis order."""
    out = {}
    for k, X in basis.items():
        Y = restrict(X, variables)
        if Y.is_zero() or any(Y == Z for Z in out.values()):
            continue
        out[k] = Y
    return out


# variables of the supersymmetric system

XP, XM = coord_atom("x+"), coord_atom("x-")
TP, TM = coord_atom("th+"), coord_atom("th-")
V_PHI = func_atom(frames.PHI)
V_H = func_atom(frames.H)
V_QP = func_atom(frames.QP)
V_QM = func_atom(frames.QM)
V_RP = func_atom(frames.RP)
V_RM = func_atom(frames.RM)
V_F = func_atom(frames.F)
SUSY_FIELDS = frozenset({frames.PHI, frames.H, frames.QP, frames.QM, frames.RP, frames.RM, frames.F})


def _a(v):
    return Expr.atom(v)


def susy_generators(constant_f=False):
    """The symmetry generators of the Gauss-Codazzi system.

    With ``constant_f`` the generators of the three-equation system are
    returned: no C0, and K1, K2 without R-components.
    """
    fl = SUSY_FIELDS
    x, t = {"+": XP, "-": XM}, {"+": TP, "-": TM}
    g = {}
    g["P+"] = SuperDerivation({XP: 1}, 0, fl, "P+")
    g["P-"] = SuperDerivation({XM: 1}, 0, fl, "P-")
    for s, q, r in (("+", V_QP, V_RP), ("-", V_QM, V_RM)):
        co = {x[s]: _a(x[s]).scale(-2), t[s]: -_a(t[s]), q: _a(q).scale(2), V_PHI: 1}
        if not constant_f:
            co[r] = _a(r)
        g["K1" if s == "+" else "K2"] = SuperDerivation(co, 0, fl, "K1" if s == "+" else "K2")
        g["J" + s] = SuperDerivation({t[s]: 1, x[s]: _a(t[s]).scale(I)}, 1, fl, "J" + s)
    g["K0"] = SuperDerivation({V_H: -_a(V_H), V_QP: _a(V_QP), V_QM: _a(V_QM), V_PHI: 2}, 0, fl, "K0")
    if not constant_f:
        g["C0"] = SuperDerivation(
            {V_H: _a(V_H), V_QP: _a(V_QP), V_QM: _a(V_QM), V_F: _a(V_F).scale(-2)}, 0, fl, "C0")
    g["W"] = SuperDerivation({V_H: 1}, 1, fl, "W")
    order = ["K1", "P+", "J+", "K2", "P-", "J-", "K0", "C0", "W"]
    return {k: g[k] for k in order if k in g}


# structure tables

@dataclass
class StructureTable:
    name: str
    basis: dict            # label -> SuperDerivation
    expected: dict         # (i, j) -> {label: coeff}


_ENTRY = re.compile(r"([+-]?)(\d*)(i?)([A-Za-z][A-Za-z0-9]*[+-]?)")


def parse_combo(text: str) -> dict:
    """Parse a table entry such as ``2iP+``, ``-J+`` or ``0``."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return {}
    out = {}
    pos = 0
    while pos < len(text):
        m = _ENTRY.match(text, pos)
        if not m or m.end() == pos:
            raise SymmetryError(f"bad table entry {text!r}")
        sign, num, imag, label = m.groups()
        c = gq(int(num) if num else 1)
        if imag:
            c = c * I
        if sign == "-":
            c = -c
        out[label] = out.get(label, ZERO) + c
        pos = m.end()
    return out


def load_tables(text: str | None = None) -> dict:
    """Read structure tables from the text format of ``data/tables.txt``.

    Each ``[name]`` section has a header row of column labels followed by one
    row per generator; cells are separated by ``|``.
    """
    if text is None:
        text = resources.files("supergc").joinpath("data/tables.txt").read_text()
    tables = {}
    name = None
    header = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            name = line.strip("[]")
            tables[name] = {}
            header = None
            continue
        cells = [c.strip() for c in line.split("|")]
        if header is None:
            header = cells[1:]
            continue
        row = cells[0]
        for col, cell in zip(header, cells[1:]):
            tables[name][(row, col)] = parse_combo(cell)
    return tables


def combo_derivation(combo: dict, basis: dict, fields) -> SuperDerivation:
    out = SuperDerivation({}, 0, fields)
    parity = None
    for label, c in combo.items():
        out = out + basis[label].scale(c)
        parity = basis[label].parity
    if parity is not None:
        out = SuperDerivation(out.coeffs, parity, fields)
    return out


def verify_table(t: StructureTable):
    """Return a list of ``(i, j, expected, actual, ok)`` rows."""
    rows = []
    fields = frozenset().union(*(b.fields for b in t.basis.values()))
    for (i, j), combo in sorted(t.expected.items()):
        actual = bracket(t.basis[i], t.basis[j])
        want = combo_derivation(combo, t.basis, fields)
        rows.append((i, j, want, actual, actual == want))
    return rows


def table1():
    tabs = load_tables()
    return StructureTable("table1", susy_generators(False), tabs["table1"])


def table2():
    tabs = load_tables()
    return StructureTable("table2", susy_generators(True), tabs["table2"])


# classical comparison algebras

Z, ZB = coord_atom("z"), coord_atom("zb")
CLS = {n: make_function(n, 0, ("z", "zb")) for n in
       ["H", "Q", "Qb", "U", "F1", "F2", "F3", "N1", "N2", "N3"]}
CL_FIELDS = frozenset(CLS.values())
CV = {n: func_atom(s) for n, s in CLS.items()}


def _cv(n):
    return Expr.atom(CV[n])


def classical_generators():
    """The 19 generators of the largest finite-dimensional subalgebra of the
    classical frame symmetries, keyed by label."""
    fl = CL_FIELDS
    z, zb = Expr.atom(Z), Expr.atom(ZB)
    g = {}
    e0 = {CV["H"]: -_cv("H"), CV["Q"]: _cv("Q"), CV["Qb"]: _cv("Qb"), CV["U"]: _cv("U").scale(2)}
    hat = dict(e0)
    for i in (1, 2, 3):
        hat[CV[f"F{i}"]] = _cv(f"F{i}")
    g["e0"] = SuperDerivation(hat, 0, fl, "e0")
    g["e1"] = SuperDerivation({Z: 1}, 0, fl, "e1")
    g["e2"] = SuperDerivation({ZB: 1}, 0, fl, "e2")
    g["e3"] = SuperDerivation({Z: z, CV["Q"]: _cv("Q").scale(-2), CV["U"]: -_cv("U")}, 0, fl, "e3")
    g["e4"] = SuperDerivation({ZB: zb, CV["Qb"]: _cv("Qb").scale(-2), CV["U"]: -_cv("U")}, 0, fl, "e4")
    g["e5"] = SuperDerivation({Z: z * z, CV["Q"]: (z * _cv("Q")).scale(-4),
                               CV["U"]: (z * _cv("U")).scale(-2)}, 0, fl, "e5")
    g["e6"] = SuperDerivation({ZB: zb * zb, CV["Qb"]: (zb * _cv("Qb")).scale(-4),
                               CV["U"]: (zb * _cv("U")).scale(-2)}, 0, fl, "e6")
    for i in (1, 2, 3):
        g[f"T{i}"] = SuperDerivation({CV[f"F{i}"]: 1}, 0, fl, f"T{i}")
    for i in (1, 2, 3):
        g[f"D{i}"] = SuperDerivation({CV[f"F{i}"]: _cv(f"F{i}"), CV[f"N{i}"]: _cv(f"N{i}")}, 0, fl, f"D{i}")
    for i, j in ((1, 2), (1, 3), (2, 3)):
        g[f"R{i}{j}"] = rotation(i, j, -1)
        g[f"S{i}{j}"] = rotation(i, j, 1)
    return g


def rotation(i, j, sign):
    """(F_i d_Fj + sign F_j d_Fi) + (N_i d_Nj + sign N_j d_Ni); sign=-1 gives
    R_ij, sign=+1 gives S_ij. R_ii = 0 and S_ii = 2 D_i."""
    co = {}
    for X in ("F", "N"):
        a, b = CV[f"{X}{i}"], CV[f"{X}{j}"]
        co[b] = co.get(b, ZERO_EXPR) + Expr.atom(a)
        co[a] = co.get(a, ZERO_EXPR) + Expr.atom(b).scale(sign)
    name = ("R" if sign < 0 else "S") + f"{i}{j}"
    return SuperDerivation(co, 0, CL_FIELDS, name)


def classical_A():
    """The seven generators of the classical Gauss-Codazzi symmetry algebra."""
    g = classical_generators()
    e0 = SuperDerivation({CV["H"]: -_cv("H"), CV["Q"]: _cv("Q"), CV["Qb"]: _cv("Qb"),
                          CV["U"]: _cv("U").scale(2)}, 0, CL_FIELDS, "e0")
    out = {"e0": e0}
    for k in ("e1", "e2", "e3", "e4", "e5", "e6"):
        out[k] = g[k]
    return out


CLASSICAL_RETAINED = (Z, ZB, CV["H"], CV["Q"], CV["Qb"], CV["U"])


def _delta(a, b):
    return 1 if a == b else 0


def _R(i, j):
    if i == j:
        return {}
    return {f"R{i}{j}": 1} if i < j else {f"R{j}{i}": -1}


def _S(i, j):
    if i == j:
        return {f"D{i}": 2}
    return {f"S{min(i, j)}{max(i, j)}": 1}


def _T(i):
    return {f"T{i}": 1}


def _lin(*pairs):
    out = {}
    for c, combo in pairs:
        if not c:
            continue
        for k, v in combo.items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def classical_relations():
    """Expected nonzero commutators of the 19-generator algebra, as stated,
    keyed by ordered label pairs. Index relations are expanded over all
    admissible indices."""
    rel = {
        ("e1", "e3"): {"e1": 1}, ("e1", "e5"): {"e3": -2}, ("e3", "e5"): {"e5": 1},
        ("e2", "e4"): {"e2": 1}, ("e2", "e6"): {"e4": -2}, ("e4", "e6"): {"e6": 1},
    }
    pairs = ((1, 2), (1, 3), (2, 3))
    for i in (1, 2, 3):
        rel[("e0", f"T{i}")] = {f"T{i}": -1}
        for j in (1, 2, 3):
            rel[(f"T{i}", f"D{j}")] = _lin((_delta(i, j), _T(i)))
        for j, k in pairs:
            rel[(f"T{i}", f"R{j}{k}")] = _lin((_delta(i, j), _T(k)), (-_delta(i, k), _T(j)))
            rel[(f"T{i}", f"S{j}{k}")] = _lin((_delta(i, j), _T(k)), (_delta(i, k), _T(j)))
            rel[(f"D{i}", f"R{j}{k}")] = _lin((_delta(i, j), _S(i, k)), (-_delta(i, k), _S(i, j)))
            rel[(f"D{i}", f"S{j}{k}")] = _lin((_delta(i, j), _R(i, k)), (-_delta(i, k), _R(j, i)))
    for i, j in pairs:
        for k, l in pairs:
            rel[(f"R{i}{j}", f"S{k}{l}")] = _lin(
                (_delta(j, k), _S(i, l)), (_delta(j, l), _S(i, k)),
                (-_delta(i, k), _S(j, l)), (-_delta(i, l), _S(j, k)))
    return rel


def verify_relations(basis, relations, check_all_pairs=True):
    """Compare computed brackets with expected relations. Pairs not listed
    are expected to commute when ``check_all_pairs`` is set."""
    rows = []
    labels = list(basis)
    fields = frozenset().union(*(b.fields for b in basis.values()))
    seen = set()
    for (i, j), combo in relations.items():
        actual = bracket(basis[i], basis[j])
        want = combo_derivation(combo, basis, fields)
        rows.append((i, j, want, actual, actual == want))
        seen.add((i, j))
        seen.add((j, i))
    if check_all_pairs:
        for a in range(len(labels)):
            for b in range(a + 1, len(labels)):
                i, j = labels[a], labels[b]
                if (i, j) in seen:
                    continue
                actual = bracket(basis[i], basis[j])
                want = SuperDerivation({}, 0, fields)
                rows.append((i, j, want, actual, actual == want))
    return rows


# the infinite-dimensional generators X(eta), Y(zeta)

def X_field(eta):
    """X(eta) = eta d_z - eta' (U d_U + 2 Q d_Q) for a function eta(z)."""
    e = Expr.atom(func_atom(eta))
    de = derive(e, JetPartial(Z, 0, CL_FIELDS))
    return SuperDerivation({Z: e, CV["U"]: -(de * _cv("U")), CV["Q"]: -(de * _cv("Q")).scale(2)},
                           0, CL_FIELDS)


def Y_field(zeta):
    e = Expr.atom(func_atom(zeta))
    de = derive(e, JetPartial(ZB, 0, CL_FIELDS))
    return SuperDerivation({ZB: e, CV["U"]: -(de * _cv("U")), CV["Qb"]: -(de * _cv("Qb")).scale(2)},
                           0, CL_FIELDS)


def virasoro_checks():
    """Rows ``(name, expected, actual, ok)`` for the stated brackets of the
    infinite-dimensional generators."""
    e1 = make_function("eta1", 0, ("z",))
    e2 = make_function("eta2", 0, ("z",))
    z1 = make_function("zeta1", 0, ("zb",))
    z2 = make_function("zeta2", 0, ("zb",))
    fl = CL_FIELDS
    rows = []
    for F, a, b, var, q in ((X_field, e1, e2, Z, "Q"), (Y_field, z1, z2, ZB, "Qb")):
        A, B = F(a), F(b)
        d = lambda s, n=1: _nd(Expr.atom(func_atom(s)), var, n)
        ea, eb = Expr.atom(func_atom(a)), Expr.atom(func_atom(b))
        cz = d(a) * eb - ea * d(b)
        cu = d(a, 2) * eb - ea * d(b, 2)
        want = SuperDerivation({var: cz, CV["U"]: cu * _cv("U"), CV[q]: (cu * _cv(q)).scale(2)}, 0, fl)
        rows.append((f"[{'X' if var == Z else 'Y'}(1),{'X' if var == Z else 'Y'}(2)]",
                     want, bracket(A, B)))
    g = classical_generators()
    X, Y = X_field(e1), Y_field(z1)
    zero = SuperDerivation({}, 0, fl)
    rows.append(("[X,Y]", zero, bracket(X, Y)))
    for k in ["e0", "T1", "T2", "T3", "D1", "D2", "D3", "R12", "R13", "R23", "S12", "S13", "S23"]:
        rows.append((f"[X,{k}]", zero, bracket(X, g[k])))
        rows.append((f"[Y,{k}]", zero, bracket(Y, g[k])))
    return [(n, w, a, w == a) for n, w, a in rows]


def _nd(e, var, n):
    for _ in range(n):
        e = derive(e, JetPartial(var, 0, CL_FIELDS))
    return e


# finite flows

@dataclass
class GroupTransformation:
    """Substitutions for one flow parameter.

    ``coords`` gives the new coordinates in terms of the old ones and
    ``fields`` the transformed fields ``F~(x~) = G(F(x))``.
    """

    generator: str
    param: tuple            # constant atom
    coords: dict = field(default_factory=dict)
    fields: dict = field(default_factory=dict)


def _param(name, parity):
    return const_atom(name, parity)


def flow(X: str, param: Optional[str] = None, convention: str = "consistent",
         constant_f: bool = False) -> GroupTransformation:
    """Closed-form flow of a generator of the Gauss-Codazzi symmetry algebra.

    ``convention="paper-shift"`` gives the supersymmetry flows in the form
    th -> th + i*eta, which does not differentiate back to J. With
    ``constant_f`` the K1, K2 flows leave R+, R- alone.
    """
    even = X in ("P+", "P-", "K0", "K1", "K2", "C0")
    odd = X in ("J+", "J-", "W")
    if not (even or odd):
        raise UnsupportedGenerator(X)
    pname = param or ("s" if even else "eta_")
    p = _param(pname, 0 if even else 1)
    a = Expr.atom(p)
    es = lambda k: make_exp(a.scale(k))
    x = lambda s: Expr.atom(coord_atom("x" + s))
    t = lambda s: Expr.atom(coord_atom("th" + s))
    F = lambda v: Expr.atom(v)
    tr = GroupTransformation(X, p)
    if X in ("P+", "P-"):
        s = X[1]
        tr.coords = {"x" + s: x(s) + a}
    elif X in ("K1", "K2"):
        s = "+" if X == "K1" else "-"
        q, r = (V_QP, V_RP) if s == "+" else (V_QM, V_RM)
        tr.coords = {"x" + s: es(-2) * x(s), "th" + s: es(-1) * t(s)}
        tr.fields = {q[3]: es(2) * F(q), frames.PHI: F(V_PHI) + a}
        if not constant_f:
            tr.fields[r[3]] = es(1) * F(r)
    elif X == "K0":
        tr.fields = {frames.H: es(-1) * F(V_H), frames.QP: es(1) * F(V_QP),
                     frames.QM: es(1) * F(V_QM), frames.PHI: F(V_PHI) + a.scale(2)}
    elif X == "C0":
        tr.fields = {frames.H: es(1) * F(V_H), frames.QP: es(1) * F(V_QP),
                     frames.QM: es(1) * F(V_QM), frames.F: es(-2) * F(V_F)}
    elif X in ("J+", "J-"):
        s = X[1]
        shift = a.scale(I) if convention == "paper-shift" else a
        tr.coords = {"x" + s: x(s) + (a * t(s)).scale(I), "th" + s: t(s) + shift}
    elif X == "W":
        tr.fields = {frames.H: F(V_H) + a}
    return tr


def flow_generator(tr: GroupTransformation, fields=SUSY_FIELDS) -> SuperDerivation:
    """Differentiate a flow at parameter zero."""
    op = ConstPartial(tr.param[1], tr.param[2])
    zero = {tr.param[1]: ZERO_EXPR}
    co = {}
    for c, e in tr.coords.items():
        co[coord_atom(c)] = substitute(derive(e, op), zero)
    for sym, e in tr.fields.items():
        co[func_atom(sym)] = substitute(derive(e, op), zero)
    return SuperDerivation(co, tr.param[2], fields)


def derivative_scale(tr: GroupTransformation):
    """``c_s`` with ``D~_s = c_s D_s`` for a superconformal coordinate change.

    Raises SymmetryError when the change is not superconformal.
    """
    new = {c: Expr.atom(coord_atom(c)) for c in ("x+", "x-", "th+", "th-")}
    new.update(tr.coords)
    out = {}
    for s, D in (("+", Dp()), ("-", Dm())):
        o = "-" if s == "+" else "+"
        dth = derive(new["th" + s], D)
        if derive(new["th" + o], D) or derive(new["x" + o], D):
            raise SymmetryError(f"D{s} mixes the {o} coordinates")
        cond = derive(new["x" + s], D) + (new["th" + s] * dth).scale(I)
        if cond:
            raise SymmetryError(f"coordinate change is not superconformal in the {s} sector")
        try:
            out[s] = ONE_EXPR / dth
        except ExprError:
            raise SymmetryError("D theta~ is not invertible") from None
        if derive(out[s], Dp()) or derive(out[s], Dm()):
            raise SymmetryError("derivative scale is not constant")
    return out


def transform_residuals(tr: GroupTransformation, residuals):
    scale = derivative_scale(tr)
    return [substitute(r, tr.fields, scale=scale) for r in residuals]


def check_invariance(tr: GroupTransformation, residuals, rules, max_passes=16):
    """Push a flow through the residuals and reduce modulo ``rules``.

    Returns a dict with ``ok`` and per-residual reduced remainders. For odd
    parameters the first-order variation (transformed minus original) is
    what gets reduced; since eta^2 = 0 this is exact.
    """
    out = {"generator": tr.generator, "checks": []}
    try:
        new = transform_residuals(tr, residuals)
    except SymmetryError as exc:
        out["ok"] = False
        out["error"] = str(exc)
        return out
    ok = True
    for k, (old, nw) in enumerate(zip(residuals, new)):
        target = nw - old if tr.param[2] else nw
        rem = rewrite(target, rules, max_passes)
        good = not rem
        ok = ok and good
        out["checks"].append((k, good, rem))
    out["ok"] = ok
    return out
