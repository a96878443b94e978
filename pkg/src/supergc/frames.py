"""Superfields, frame matrices and zero-curvature residuals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .gauss import I, ONE, gq
from .expr import (
    COORD, Expr, ExprError, ONE_EXPR, ZERO_EXPR,
    const_atom, coord_atom, func_atom, make_exp, make_function, monomial_ratio,
    superfunction,
)
from .calculus import Dm, Dp, PartialX, derive, substitute
from .rules import make_rule, rewrite

HALF = gq(Fraction(1, 2))

TH_P = Expr.atom(coord_atom("th+"))
TH_M = Expr.atom(coord_atom("th-"))


class FrameError(Exception):
    pass


class OddInput(FrameError):
    pass


class DimensionMismatch(FrameError):
    pass


class NonInvertibleScaling(FrameError):
    pass


# superfields

@dataclass(frozen=True)
class Superfield:
    """``c0 + th+ c1 + th- c2 + th+ th- c3``."""

    c0: Expr
    c1: Expr
    c2: Expr
    c3: Expr
    parity: int = 0

    def __post_init__(self):
        want = (self.parity, 1 - self.parity, 1 - self.parity, self.parity)
        for k, (c, p) in enumerate(zip(self.components, want)):
            if c and c.parity() != p:
                raise FrameError(f"component c{k} has the wrong parity")

    @property
    def components(self):
        return (self.c0, self.c1, self.c2, self.c3)

    def expr(self) -> Expr:
        return self.c0 + TH_P * self.c1 + TH_M * self.c2 + TH_P * TH_M * self.c3

    def __neg__(self):
        return Superfield(-self.c0, -self.c1, -self.c2, -self.c3, self.parity)


def to_superfield(e: Expr, parity=None) -> Superfield:
    """Split an expression with explicit th+/th- into components.

    The θ atoms sort first among odd atoms, so every term reads
    ``coeff * evens * [th+] [th-] * rest``.
    """
    tp, tm = coord_atom("th+"), coord_atom("th-")
    parts = [dict(), dict(), dict(), dict()]
    for (evens, odds), c in e.terms.items():
        hp = tp in odds
        hm = tm in odds
        rest = tuple(a for a in odds if a not in (tp, tm))
        idx = (1 if hp else 0) + (2 if hm else 0)
        parts[idx][(evens, rest)] = c
    comps = [Expr(p) for p in parts]
    if parity is None:
        parity = e.parity()
        if parity is None:
            raise FrameError("mixed-parity expression is not a superfield")
    return Superfield(comps[0], comps[1], comps[2], comps[3], parity)


def expand_exp(phi: Superfield) -> Superfield:
    """Components of exp(phi) for an even superfield."""
    if phi.parity != 0:
        raise OddInput("exponential of an odd superfield")
    return to_superfield(make_exp(phi.expr()), 0)


def exp_formula(phi: Superfield, sign=1) -> Superfield:
    """The closed form of exp(+-phi) written out componentwise:
    e^{s phi0}(1 + s th+ phi1 + s th- phi2 + th+ th-(s phi3 - phi1 phi2))."""
    s = sign
    e0 = make_exp(phi.c0.scale(s))
    return Superfield(
        e0,
        (e0 * phi.c1).scale(s),
        (e0 * phi.c2).scale(s),
        e0 * (phi.c3.scale(s) - phi.c1 * phi.c2),
        0,
    )


# matrices

class SuperMatrix:
    """A grid of expressions with graded-aware matrix arithmetic."""

    def __init__(self, rows):
        self.rows = [[e if isinstance(e, Expr) else Expr.const(e) for e in r] for r in rows]
        n = {len(r) for r in self.rows}
        if len(n) > 1:
            raise DimensionMismatch("ragged matrix")

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @classmethod
    def zeros(cls, n, m=None):
        return cls([[ZERO_EXPR] * (m or n) for _ in range(n)])

    @classmethod
    def identity(cls, n):
        return cls([[ONE_EXPR if i == j else ZERO_EXPR for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, fn):
        return SuperMatrix([[fn(e) for e in r] for r in self.rows])

    def _same(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        self._same(other)
        return SuperMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._same(other)
        return SuperMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda e: -e)

    def scale(self, c):
        if isinstance(c, Expr):
            return self.map(lambda e: c * e)
        return self.map(lambda e: e.scale(c))

    def __matmul__(self, other):
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = ZERO_EXPR
                for t in range(k):
                    a = self.rows[i][t]
                    if a:
                        b = other.rows[t][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SuperMatrix(out)

    def derive(self, op):
        return self.map(lambda e: derive(e, op))

    def is_zero(self):
        return all(not e for r in self.rows for e in r)

    def nonzero(self):
        return [(i, j, e) for i, r in enumerate(self.rows) for j, e in enumerate(r) if e]

    def __eq__(self, other):
        return isinstance(other, SuperMatrix) and self.rows == other.rows

    def trace(self):
        return sum((self.rows[i][i] for i in range(min(self.shape))), ZERO_EXPR)


def anticommutator(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    return a @ b + b @ a


def commutator(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    return a @ b - b @ a


@dataclass
class LinearProblem:
    Aplus: SuperMatrix
    Aminus: SuperMatrix
    bracket: str = "anticommutator"
    twist: Optional[SuperMatrix] = None
    spectral: Optional[Expr] = None
    # classical mode: derivative pair (d, dbar)
    derivatives: tuple = ("z", "zb")

    def __post_init__(self):
        if self.twist is not None:
            n = self.twist.shape[0]
            if not (self.twist @ self.twist) == SuperMatrix.identity(n):
                raise FrameError("twist matrix must square to the identity")


def zcc_residual(p: LinearProblem) -> SuperMatrix:
    """Zero-curvature residual.

    anticommutator:          D+ A- + D- A+ - {A+, A-}
    anticommutator + twist:  D- A+ + D+ A- - {E A+, E A-}
    commutator (classical):  dbar V1 - d V2 + [V1, V2]
    """
    a, b = p.Aplus, p.Aminus
    a._same(b)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch("square matrices required")
    if p.bracket == "commutator":
        d, dbar = (PartialX(v) for v in p.derivatives)
        return a.derive(dbar) - b.derive(d) + commutator(a, b)
    if p.twist is None:
        return b.derive(Dp()) + a.derive(Dm()) - anticommutator(a, b)
    e = p.twist
    return a.derive(Dm()) + b.derive(Dp()) - anticommutator(e @ a, e @ b)


def insert_spectral(p: LinearProblem, scaling) -> LinearProblem:
    """Rescale coordinates ``x~_s = k_s^2 x_s``, ``th~_s = k_s th_s``.

    ``scaling`` maps coordinate names to even monomial factors; the factor of
    ``x_s`` must be the square of the factor of ``th_s``.  With ``D_s = k_s
    D~_s`` the problem ``D~ Psi = A~ Psi`` has ``A~_s = A_s / k_s`` with every
    derivative word rewritten in the new coordinates.  The result is written
    in the new coordinates (tildes dropped).  ``spectral`` is set to the
    factor of ``x+``.
    """
    k = {}
    for s in ("+", "-"):
        kt = _as_expr(scaling.get("th" + s, ONE_EXPR))
        kx = _as_expr(scaling.get("x" + s, ONE_EXPR))
        try:
            kt_inv = ONE_EXPR / kt
        except ExprError as exc:
            raise NonInvertibleScaling(str(exc)) from None
        if kt * kt != kx:
            raise NonInvertibleScaling(f"x{s} factor must be the square of the th{s} factor")
        k[s] = (kt, kt_inv)
    # old coordinates in terms of new ones
    bind = {
        "x+": Expr.atom(coord_atom("x+")) * k["+"][1] ** 2,
        "x-": Expr.atom(coord_atom("x-")) * k["-"][1] ** 2,
        "th+": TH_P * k["+"][1],
        "th-": TH_M * k["-"][1],
    }
    # D_s = k_s D~_s on every derivative word
    word_scale = {"+": k["+"][0], "-": k["-"][0]}

    def tr(e, s):
        return substitute(e, bind, scale=word_scale) * k[s][1]

    return LinearProblem(
        p.Aplus.map(lambda e: tr(e, "+")),
        p.Aminus.map(lambda e: tr(e, "-")),
        p.bracket,
        p.twist,
        _as_expr(scaling.get("x+", ONE_EXPR)),
        p.derivatives,
    )


def _as_expr(x):
    return x if isinstance(x, Expr) else Expr.const(x)


# the frame of a supersymmetric surface

PHI = superfunction("phi", 0)
H = superfunction("H", 1)
QP = superfunction("Q+", 1)
QM = superfunction("Q-", 1)
RP = superfunction("R+", 1)
RM = superfunction("R-", 1)
F = make_function("f", 0, ("x+", "x-"))


def sym(s) -> Expr:
    return Expr.atom(func_atom(s))


@dataclass
class FrameData:
    phi: Expr = field(default_factory=lambda: sym(PHI))
    H: Expr = field(default_factory=lambda: sym(H))
    Qp: Expr = field(default_factory=lambda: sym(QP))
    Qm: Expr = field(default_factory=lambda: sym(QM))
    Rp: Expr = field(default_factory=lambda: sym(RP))
    Rm: Expr = field(default_factory=lambda: sym(RM))
    f: Expr = field(default_factory=lambda: sym(F))

    def exp_phi(self, sign=1):
        return make_exp(self.phi.scale(sign))

    @classmethod
    def constant_f(cls, **kw):
        """R+- = D+-phi and f a constant symbol."""
        fd = cls(**kw)
        if "f" not in kw:
            fd.f = Expr.atom(const_atom("f0", 0))
        fd.Rp = derive(fd.phi, Dp())
        fd.Rm = derive(fd.phi, Dm())
        return fd


def build_gw(fd: FrameData) -> LinearProblem:
    ep, em = fd.exp_phi(1), fd.exp_phi(-1)
    z = ZERO_EXPR
    ap = SuperMatrix([
        [fd.Rp, z, fd.Qp * fd.f],
        [z, z, (ep * fd.H * fd.f).scale(-HALF)],
        [fd.H, (em * fd.Qp).scale(-2), z],
    ])
    am = SuperMatrix([
        [z, z, (ep * fd.H * fd.f).scale(HALF)],
        [z, fd.Rm, fd.Qm * fd.f],
        [(em * fd.Qm).scale(-2), -fd.H, z],
    ])
    return LinearProblem(ap, am, "anticommutator")


def component_equations(fd: FrameData):
    """The six component equations of the zero-curvature condition, as
    residual expressions (i)..(vi)."""
    ep, em = fd.exp_phi(1), fd.exp_phi(-1)
    f = fd.f
    dp = lambda e: derive(e, Dp())
    dm = lambda e: derive(e, Dm())
    v = dp(fd.Qm) - (ep * dm(fd.H)).scale(HALF) + fd.Qm * (dp(fd.phi) - fd.Rp)
    vi = dm(fd.Qp) + (ep * dp(fd.H)).scale(HALF) + fd.Qp * (dm(fd.phi) - fd.Rm)
    return {
        "i": dm(fd.Rp) + (em * fd.Qp * fd.Qm * f).scale(2),
        "ii": vi * f,
        "iii": dp(fd.Rm) + (em * fd.Qm * fd.Qp * f).scale(2),
        "iv": v * f,
        "v": v,
        "vi": vi,
    }


def gc_residuals(fd: FrameData, constant_f=False):
    """The reduced Gauss-Codazzi residuals.

    With ``constant_f`` the three-equation system with ``R+- = D+-phi`` and a
    constant ``f`` is returned instead of the four general equations.
    """
    ep, em = fd.exp_phi(1), fd.exp_phi(-1)
    dp = lambda e: derive(e, Dp())
    dm = lambda e: derive(e, Dm())
    if constant_f:
        return [
            dm(dp(fd.phi)) + (em * fd.Qp * fd.Qm * fd.f).scale(2),
            dp(fd.Qm) - (ep * dm(fd.H)).scale(HALF),
            dm(fd.Qp) + (ep * dp(fd.H)).scale(HALF),
        ]
    return [
        dp(fd.Rm) + dm(fd.Rp),
        dm(fd.Rp) + (em * fd.Qp * fd.Qm * fd.f).scale(2),
        dp(fd.Qm) - (ep * dm(fd.H)).scale(HALF) + fd.Qm * (dp(fd.phi) - fd.Rp),
        dm(fd.Qp) + (ep * dp(fd.H)).scale(HALF) + fd.Qp * (dm(fd.phi) - fd.Rm),
    ]


def gc_rules(fd: FrameData = None):
    """The four Gauss-Codazzi equations oriented as rewrite rules on the
    generic frame symbols:

    D+ R- -> -D- R+,  D- R+ -> -2 e^{-phi} Q+ Q- f,
    D+ Q- -> 1/2 e^phi D- H - Q- (D+ phi - R+),
    D- Q+ -> -1/2 e^phi D+ H - Q+ (D- phi - R-).
    """
    fd = fd or FrameData()
    ep, em = fd.exp_phi(1), fd.exp_phi(-1)
    dp = lambda e: derive(e, Dp())
    dm = lambda e: derive(e, Dm())
    w = lambda s, word: func_atom(s, word)
    return [
        make_rule(w(RM, ((0, 0), 1, 0)), -dm(fd.Rp)),
        make_rule(w(RP, ((0, 0), 0, 1)), (em * fd.Qp * fd.Qm * fd.f).scale(-2)),
        make_rule(w(QM, ((0, 0), 1, 0)),
                  (ep * dm(fd.H)).scale(HALF) - fd.Qm * (dp(fd.phi) - fd.Rp)),
        make_rule(w(QP, ((0, 0), 0, 1)),
                  (ep * dp(fd.H)).scale(-HALF) - fd.Qp * (dm(fd.phi) - fd.Rm)),
    ]


def gc_rules_constant_f(fd: FrameData = None):
    """The constant-f system as rules: D+ D- phi, D+ Q-, D- Q+ eliminated."""
    fd = fd or FrameData.constant_f()
    ep, em = fd.exp_phi(1), fd.exp_phi(-1)
    dp = lambda e: derive(e, Dp())
    dm = lambda e: derive(e, Dm())
    w = lambda s, word: func_atom(s, word)
    # D- D+ phi = -D+ D- phi, so D+ D- phi -> 2 e^{-phi} Q+ Q- f
    return [
        make_rule(w(PHI, ((0, 0), 1, 1)), (em * fd.Qp * fd.Qm * fd.f).scale(2)),
        make_rule(w(QM, ((0, 0), 1, 0)), (ep * dm(fd.H)).scale(HALF)),
        make_rule(w(QP, ((0, 0), 0, 1)), (ep * dp(fd.H)).scale(-HALF)),
    ]


def df_rules(fd: FrameData = None):
    """R+- -> D+-phi + f^-1 D+-f, the relation between f and the diagonal
    Christoffel symbols. The f-column entries of the zero-curvature residual
    only reduce to the component equations modulo these."""
    fd = fd or FrameData()
    finv = ONE_EXPR / fd.f
    return [
        make_rule(func_atom(RP), derive(fd.phi, Dp()) + finv * derive(fd.f, Dp())),
        make_rule(func_atom(RM), derive(fd.phi, Dm()) + finv * derive(fd.f, Dm())),
    ]


def match_entry(residual: Expr, expected: Expr):
    """Monomial m with residual == m * expected, or None."""
    return monomial_ratio(residual, expected)


# sine-Gordon comparison system

PHI_SG = superfunction("Phi", 0)


def sine_gordon_problem() -> LinearProblem:
    Phi = sym(PHI_SG)
    eip = make_exp(Phi.scale(I))
    eim = make_exp(Phi.scale(-I))
    dmPhi = derive(Phi, Dm())
    z = ZERO_EXPR
    ap = SuperMatrix([
        [z, z, eip.scale(I)],
        [z, z, eim.scale(-I)],
        [-eim, eip, z],
    ]).scale(HALF)
    am = SuperMatrix([
        [dmPhi.scale(I), z, Expr.const(-I)],
        [z, dmPhi.scale(-I), Expr.const(I)],
        [Expr.const(-1), Expr.const(1), z],
    ])
    E = SuperMatrix([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    return LinearProblem(ap, am, "anticommutator", twist=E)


def sine_gordon_rules():
    """D+ D- Phi -> i sin(Phi) = (e^{i Phi} - e^{-i Phi}) / 2."""
    Phi = sym(PHI_SG)
    rhs = (make_exp(Phi.scale(I)) - make_exp(Phi.scale(-I))).scale(HALF)
    return [make_rule(func_atom(PHI_SG, ((0, 0), 1, 1)), rhs)]


def sine_gordon_spectral_expected(mu="mu"):
    """The rescaled matrices with sqrt(lambda) = e^mu."""
    m = Expr.atom(const_atom(mu, 0))
    sl = make_exp(m)
    isl = make_exp(-m)
    p = sine_gordon_problem()
    ap = p.Aplus.scale(isl)
    Phi = sym(PHI_SG)
    dmPhi = derive(Phi, Dm())
    z = ZERO_EXPR
    am = SuperMatrix([
        [dmPhi.scale(I) * isl, z, Expr.const(-I)],
        [z, dmPhi.scale(-I) * isl, Expr.const(I)],
        [Expr.const(-1), Expr.const(1), z],
    ]).scale(sl)
    return ap, am


def sine_gordon_scaling(mu="mu"):
    m = Expr.atom(const_atom(mu, 0))
    return {
        "x+": make_exp(m.scale(2)), "x-": make_exp(m.scale(-2)),
        "th+": make_exp(m), "th-": make_exp(-m),
    }


# classical system in the commuting variables z, zb

U_SYM = make_function("u", 0, ("z", "zb"))
HC = make_function("Hc", 0, ("z", "zb"))
QC = make_function("Q", 0, ("z", "zb"))
QBC = make_function("Qb", 0, ("z", "zb"))


def classical_problem(lam: Expr = None) -> LinearProblem:
    lam = lam if lam is not None else ONE_EXPR
    il = ONE_EXPR / lam
    u = sym(U_SYM)
    eu, emu = make_exp(u), make_exp(-u)
    Hs, Q, Qb = sym(HC), sym(QC), sym(QBC)
    du = derive(u, PartialX("z"))
    dbu = derive(u, PartialX("zb"))
    z = ZERO_EXPR
    v1 = SuperMatrix([
        [du, z, il * Q],
        [z, z, (lam * Hs * eu).scale(HALF)],
        [-lam * Hs, (il * emu * Q).scale(-2), z],
    ])
    v2 = SuperMatrix([
        [z, z, (il * Hs * eu).scale(HALF)],
        [z, dbu, lam * Qb],
        [(lam * emu * Qb).scale(-2), -il * Hs, z],
    ])
    return LinearProblem(v1, v2, "commutator", derivatives=("z", "zb"))


def classical_gc():
    """Gauss and Codazzi equations with |Q|^2 read as Q*Qb."""
    u = sym(U_SYM)
    eu, emu = make_exp(u), make_exp(-u)
    Hs, Q, Qb = sym(HC), sym(QC), sym(QBC)
    d = lambda e: derive(e, PartialX("z"))
    db = lambda e: derive(e, PartialX("zb"))
    return [
        d(db(u)) + (Hs * Hs * eu).scale(HALF) - (emu * Q * Qb).scale(2),
        d(Qb) - (eu * db(Hs)).scale(HALF),
        db(Q) - (eu * d(Hs)).scale(HALF),
    ]
