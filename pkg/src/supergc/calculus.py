"""Graded derivations, substitution and the derivative-word algebra."""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

from .gauss import I, ONE, ZERO, as_coeff
from .expr import (
    COORD, CONST, EXP, FUNC, LOG, ODD_COORDS,
    DependencyEscape, Expr, ExprError, ONE_EXPR, ParityMismatch, ZERO_EXPR,
    atom_parity, coord_atom, func_atom, log_atom, make_exp, mono_mul,
)


# derivative words

def word_D(word, s):
    """Apply D_s to a superfunction word. Returns ``(coeff, word)``.

    D+^2 = -i d/dx+, D-^2 = -i d/dx-, D+ D- = -D- D+.
    """
    (a, b), e1, e2 = word
    if s == "+":
        if not e1:
            return ONE, ((a, b), 1, e2)
        return -I, ((a + 1, b), 0, e2)
    sign = -ONE if e1 else ONE
    if not e2:
        return sign, ((a, b), e1, 1)
    return -sign * I, ((a, b + 1), e1, 0)


def word_dx(word, k):
    counts, e1, e2 = word
    counts = list(counts)
    counts[k] += 1
    return (tuple(counts), e1, e2)


def word_ops(word):
    """The operator sequence (innermost first) that builds ``word`` from the
    bare symbol: D- then D+ then the x-derivatives."""
    counts, e1, e2 = word
    ops = []
    if e2:
        ops.append(OddOp("-", -I))
    if e1:
        ops.append(OddOp("+", -I))
    return ops, counts


# operators

class PartialX(NamedTuple):
    """d/dv for an even coordinate v."""

    var: str
    parity = 0

    def __str__(self):
        return f"d{self.var}"


class PartialArg(NamedTuple):
    """d/d(arg) acting on functions of a LinearVar argument."""

    var: object  # LinearVar
    parity = 0

    def __str__(self):
        return f"d{self.var.name}"


class OddOp(NamedTuple):
    """d/dth_s + kappa * th_s * d/dx_s.

    kappa = 0 gives d/dth, kappa = -i the covariant derivative D and
    kappa = +i the supersymmetry generator J.
    """

    side: str
    kappa: object
    parity = 1

    def __str__(self):
        if not self.kappa:
            return f"dth{self.side}"
        return ("D" if self.kappa == -I else "J") + self.side


class ConstPartial(NamedTuple):
    """d/dc for a constant symbol c."""

    name: str
    cparity: int

    @property
    def parity(self):
        return self.cparity

    def __str__(self):
        return f"d[{self.name}]"


class JetPartial(NamedTuple):
    """d/dA for a jet variable A: a coordinate atom or a bare field atom.

    Field atoms (symbols listed in ``fields``) are independent of the
    coordinates. Other function atoms, such as the arbitrary functions in
    infinite-dimensional symmetry generators, are differentiated by the chain
    rule when the target is a coordinate.
    """

    target: object
    parity: int
    fields: frozenset = frozenset()

    def __str__(self):
        return f"d[{self.target[1]}]"


def Dp():
    return OddOp("+", -I)


def Dm():
    return OddOp("-", -I)


def Jp():
    return OddOp("+", I)


def Jm():
    return OddOp("-", I)


def dth(s):
    return OddOp(s, ZERO)


def dx(s):
    return PartialX("x" + s)


OPS = {
    "D+": Dp(), "D-": Dm(), "J+": Jp(), "J-": Jm(),
    "dth+": dth("+"), "dth-": dth("-"), "dx+": dx("+"), "dx-": dx("-"),
    "dz": PartialX("z"), "dzb": PartialX("zb"),
}


def _other(s):
    return "-" if s == "+" else "+"


# atom rules

def _chain_x(sym, word, coord):
    """d/dcoord of a non-super function atom via its arguments."""
    out = ZERO_EXPR
    for k, arg in enumerate(sym.args):
        c = arg.coeff(coord)
        if c:
            out = out + Expr.atom(func_atom(sym, word_dx(word, k))).scale(c)
    return out


@lru_cache(maxsize=1 << 16)
def atom_rule(op, a) -> Expr:
    k = a[0]
    if isinstance(op, PartialX):
        v = op.var
        if k == COORD:
            return ONE_EXPR if a[1] == v else ZERO_EXPR
        if k == LOG:
            return Expr.atom(coord_atom(v), -1) if a[1] == v else ZERO_EXPR
        if k == CONST:
            return ZERO_EXPR
        if k == FUNC:
            sym, word = a[3], a[2]
            if sym.is_super:
                if v not in ("x+", "x-"):
                    return ZERO_EXPR
                return Expr.atom(func_atom(sym, word_dx(word, 0 if v == "x+" else 1)))
            return _chain_x(sym, word, v)
        if k == EXP:
            return derive(a[2], op) * Expr.atom(a)
    if isinstance(op, PartialArg):
        lv = op.var
        if k == COORD or k == LOG:
            raise DependencyEscape(f"{op} applied to coordinate {a[1]}")
        if k == CONST:
            return ZERO_EXPR
        if k == FUNC:
            sym, word = a[3], a[2]
            if lv in sym.args:
                return Expr.atom(func_atom(sym, word_dx(word, sym.args.index(lv))))
            if sym.is_super or any(arg.is_base() for arg in sym.args):
                raise DependencyEscape(f"{op} applied to {sym.name}")
            return ZERO_EXPR
        if k == EXP:
            return derive(a[2], op) * Expr.atom(a)
    if isinstance(op, OddOp):
        s, kappa = op.side, op.kappa
        th = "th" + s
        xs = "x" + s
        if k == COORD:
            if a[1] == th:
                return ONE_EXPR
            if a[1] == xs and kappa:
                return Expr.atom(coord_atom(th)).scale(kappa)
            return ZERO_EXPR
        if k == LOG:
            if a[1] == xs and kappa:
                return Expr.atom(coord_atom(th)) * Expr.atom(coord_atom(xs), -1).scale(kappa)
            return ZERO_EXPR
        if k == CONST:
            return ZERO_EXPR
        if k == FUNC:
            sym, word = a[3], a[2]
            if sym.is_super:
                c, w = word_D(word, s)
                out = Expr.atom(func_atom(sym, w)).scale(c)
                extra = I + as_coeff(kappa)
                if extra:
                    idx = 0 if s == "+" else 1
                    dxw = Expr.atom(func_atom(sym, word_dx(word, idx)))
                    out = out + (Expr.atom(coord_atom(th)) * dxw).scale(extra)
                return out
            if not kappa:
                return ZERO_EXPR
            return (Expr.atom(coord_atom(th)) * _chain_x(sym, word, xs)).scale(kappa)
        if k == EXP:
            return derive(a[2], op) * Expr.atom(a)
    if isinstance(op, ConstPartial):
        if k == CONST:
            return ONE_EXPR if a[1] == op.name else ZERO_EXPR
        if k == EXP:
            return derive(a[2], op) * Expr.atom(a)
        return ZERO_EXPR
    if isinstance(op, JetPartial):
        t = op.target
        if a == t:
            return ONE_EXPR
        if k == EXP:
            return derive(a[2], op) * Expr.atom(a)
        if t[0] == COORD:
            if k == LOG and a[1] == t[1]:
                return Expr.atom(coord_atom(a[1]), -1)
            if k == FUNC and a[3] not in op.fields:
                name = t[1]
                inner = PartialX(name) if name not in ODD_COORDS else OddOp(name[2], ZERO)
                return atom_rule(inner, a)
        return ZERO_EXPR
    raise ExprError(f"unknown operator {op!r}")


def derive(e: Expr, op) -> Expr:
    """Apply a derivation termwise with the graded Leibniz rule."""
    if not e.terms:
        return e
    p = op.parity
    out = {}

    def acc(key, c):
        v = out.get(key)
        v = c if v is None else v + c
        if v:
            out[key] = v
        else:
            del out[key]

    for (evens, odds), c in e.terms.items():
        # even atoms: p * A^(p-1) * dA, placed in front of everything
        for idx, (a, pw) in enumerate(evens):
            da = atom_rule(op, a)
            if not da.terms:
                continue
            rest = list(evens)
            if pw == 1:
                del rest[idx]
            else:
                rest[idx] = (a, pw - 1)
            rk = (tuple(rest), odds)
            cc = c * pw
            for dk, dc in da.terms.items():
                for k, s in mono_mul(dk, rk):
                    acc(k, cc * dc * s)
        # odd atoms: sign (-1)^(p*j) for the j-th odd atom
        for j, a in enumerate(odds):
            da = atom_rule(op, a)
            if not da.terms:
                continue
            sign = -ONE if (p and j % 2) else ONE
            pre = (evens, odds[:j])
            post = ((), odds[j + 1:])
            for dk, dc in da.terms.items():
                for k1, s1 in mono_mul(pre, dk):
                    for k, s2 in mono_mul(k1, post):
                        acc(k, c * dc * s1 * s2 * sign)
    return Expr(out)


def derive_seq(e: Expr, ops) -> Expr:
    """Apply ``ops`` right to left, like written operator products."""
    for op in reversed(list(ops)):
        e = derive(e, op)
    return e


def apply_word(e: Expr, sym, word, scale=None) -> Expr:
    """Apply the operator of ``word`` (as defined for ``sym``) to ``e``."""
    counts, e1, e2 = word
    factor = ONE_EXPR
    if sym.is_super:
        if e2:
            e = derive(e, Dm())
        if e1:
            e = derive(e, Dp())
        for _ in range(counts[1]):
            e = derive(e, dx("-"))
        for _ in range(counts[0]):
            e = derive(e, dx("+"))
        if scale is not None:
            cp = scale.get("+", ONE_EXPR)
            cm = scale.get("-", ONE_EXPR)
            factor = (cp ** (2 * counts[0] + e1)) * (cm ** (2 * counts[1] + e2))
        return factor * e
    for k, arg in enumerate(sym.args):
        n = counts[k]
        if not n:
            continue
        if arg.is_base():
            op = PartialX(arg.name)
        else:
            op = PartialArg(arg)
        for _ in range(n):
            e = derive(e, op)
        if scale is not None and arg.name in ("x+", "x-"):
            c = scale.get(arg.name[1], ONE_EXPR)
            factor = factor * c ** (2 * n)
    return factor * e


# substitution

def _binding_key(target):
    """Normalize a binding target to an atom-matching key."""
    if hasattr(target, "args") and hasattr(target, "parity") and hasattr(target, "odd_args"):
        return ("func", target)
    if isinstance(target, tuple) and target and target[0] == CONST:
        return ("const", target[1])
    if isinstance(target, tuple) and target and target[0] == COORD:
        return ("coord", target[1])
    if isinstance(target, str):
        if target in ("x+", "x-", "th+", "th-", "z", "zb"):
            return ("coord", target)
        return ("const", target)
    raise ExprError(f"bad binding target {target!r}")


def _check_binding(key, target, value: Expr):
    kind, t = key
    vp = value.parity()
    if vp is None:
        raise ParityMismatch(f"binding for {t} has mixed parity")
    if kind == "func":
        if value and vp != t.parity:
            raise ParityMismatch(f"binding for {t.name} has the wrong parity")
        allowed = t.dependencies
        for a in _free_coords(value):
            if a not in allowed:
                raise DependencyEscape(f"binding for {t.name} depends on {a}")
    elif kind == "coord":
        want = 1 if t in ODD_COORDS else 0
        if value and vp != want:
            raise ParityMismatch(f"binding for {t} has the wrong parity")
    elif kind == "const":
        if isinstance(target, tuple) and value and vp != target[2]:
            raise ParityMismatch(f"binding for {t} has the wrong parity")


def _free_coords(e: Expr) -> set:
    out = set()
    for a in e.atoms():
        k = a[0]
        if k in (COORD, LOG):
            out.add(a[1])
        elif k == FUNC:
            out |= a[3].dependencies
        elif k == EXP:
            out |= _free_coords(a[2])
    return out


def substitute(e: Expr, bindings, scale=None) -> Expr:
    """Replace function symbols, constants and coordinates.

    A function atom with a derivative word is replaced by that word applied
    to the bound expression.  ``scale`` maps ``"+"``/``"-"`` to constant even
    factors ``c`` and rewrites every superfunction word as if ``D_s`` were
    ``c_s D_s`` (used for coordinate changes with ``D~ = c D``).
    """
    keyed = {}
    for t, v in bindings.items():
        v = v if isinstance(v, Expr) else Expr.const(v)
        k = _binding_key(t)
        _check_binding(k, t, v)
        keyed[k] = v
    cache = {}

    def image(a):
        if a in cache:
            return cache[a]
        k = a[0]
        r = None
        if k == FUNC:
            sym, word = a[3], a[2]
            v = keyed.get(("func", sym))
            if v is not None:
                r = apply_word(v, sym, word, scale)
            elif scale is not None:
                r = apply_word(Expr.atom(func_atom(sym, sym.word0())), sym, word, scale) \
                    if word != sym.word0() else Expr.atom(a)
        elif k == CONST:
            r = keyed.get(("const", a[1]))
        elif k == COORD:
            r = keyed.get(("coord", a[1]))
        elif k == LOG:
            v = keyed.get(("coord", a[1]))
            if v is not None:
                r = log_of(v)
        elif k == EXP:
            new = substitute(a[2], bindings, scale)
            r = make_exp(new)
        if r is None:
            r = Expr.atom(a)
        cache[a] = r
        return r

    out = ZERO_EXPR
    for (evens, odds), c in e.terms.items():
        t = Expr.const(c)
        for a, p in evens:
            im = image(a)
            t = t * (im ** p)
        for a in odds:
            t = t * image(a)
        out = out + t
    return out


def log_of(v: Expr) -> Expr:
    """ln of a monomial ``c * exp(u) * prod x^n`` with c = 1."""
    c, evens, odds = v.single()
    if odds or c != ONE:
        raise ExprError("log of a non-monomial or scaled expression")
    out = ZERO_EXPR
    for a, p in evens:
        if a[0] == EXP:
            out = out + a[2].scale(p)
        elif a[0] == COORD:
            out = out + Expr.atom(log_atom(a[1])).scale(p)
        else:
            raise ExprError("log of an unsupported atom")
    return out
