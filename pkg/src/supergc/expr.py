"""Canonical normal form for graded symbolic expressions.

An :class:`Expr` is a finite sum of terms ``coeff * evens * odds``.  Atoms are
plain tuples so that they hash and sort without custom comparison code:

* ``(0, name)`` coordinate: ``x+``, ``x-``, ``z``, ``zb`` (even) and
  ``th+``, ``th-`` (odd)
* ``(1, name)`` natural log of an even coordinate
* ``(2, name, parity)`` constant symbol
* ``(3, name, word, symbol)`` function atom, ``word = (counts, e1, e2)``
* ``(4, sortkey, exponent)`` exponential of an even ``Expr``

Even atoms carry integer powers (negative powers are allowed for everything
except odd atoms and logs), odd atoms appear at most once and in sorted order.
Each term holds at most one exponential atom.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import NamedTuple

from .gauss import ONE, ZERO, as_coeff, coeff_key, gq, imag_part, real_part
from .grassmann import merge_sorted

COORD, LOG, CONST, FUNC, EXP = range(5)

EVEN_COORDS = ("x+", "x-", "z", "zb")
ODD_COORDS = ("th+", "th-")


class ExprError(Exception):
    pass


class ParityMismatch(ExprError):
    pass


class DependencyEscape(ExprError):
    pass


class NotMonomial(ExprError):
    pass


class LinearVar(NamedTuple):
    """A bosonic argument ``name = sum coeff * coordinate``."""

    name: str
    combo: tuple  # ((coordinate, re, im), ...) with Fraction parts

    @classmethod
    def base(cls, coord: str) -> "LinearVar":
        return cls(coord, ((coord, Fraction(1), Fraction(0)),))

    @classmethod
    def make(cls, name, combo) -> "LinearVar":
        parts = []
        for coord, c in sorted(combo.items()):
            c = as_coeff(c)
            if c:
                parts.append((coord, real_part(c), imag_part(c)))
        return cls(name, tuple(parts))

    def is_base(self) -> bool:
        return len(self.combo) == 1 and self.combo[0] == (self.name, 1, 0)

    def coeff(self, coord: str):
        for c, re, im in self.combo:
            if c == coord:
                return gq(re, im)
        return ZERO


class FunctionSymbol(NamedTuple):
    """An abstract function. ``odd_args`` is empty for functions of bosonic
    arguments only, and ``("th+", "th-")`` for superfunctions of
    ``(x+, x-, th+, th-)``."""

    name: str
    parity: int
    args: tuple  # of LinearVar
    odd_args: tuple = ()

    @property
    def is_super(self) -> bool:
        return bool(self.odd_args)

    @property
    def dependencies(self) -> frozenset:
        deps = set(self.odd_args)
        for a in self.args:
            deps.update(c for c, _, _ in a.combo)
        return frozenset(deps)

    def word0(self):
        return (tuple(0 for _ in self.args), 0, 0)


def make_function(name, parity, args=("x+", "x-"), odd_args=None):
    """Convenience constructor. ``args`` entries are coordinate names or
    LinearVar objects. ``odd_args=None`` means a superfunction when the args
    are exactly ``x+, x-``."""
    lv = tuple(a if isinstance(a, LinearVar) else LinearVar.base(a) for a in args)
    if odd_args is None:
        odd_args = ()
    odd_args = tuple(odd_args)
    if odd_args and (odd_args != ODD_COORDS or [a.name for a in lv] != ["x+", "x-"]
                     or not all(a.is_base() for a in lv)):
        raise ExprError("superfunctions must depend on (x+, x-, th+, th-)")
    return FunctionSymbol(name, parity % 2, lv, odd_args)


def superfunction(name, parity):
    return make_function(name, parity, ("x+", "x-"), ODD_COORDS)


# atom helpers

def coord_atom(name):
    if name not in EVEN_COORDS and name not in ODD_COORDS:
        raise ExprError(f"unknown coordinate {name}")
    return (COORD, name)


def log_atom(name):
    if name not in EVEN_COORDS:
        raise ExprError(f"log of non-even coordinate {name}")
    return (LOG, name)


def const_atom(name, parity=0):
    return (CONST, name, parity % 2)


def func_atom(sym: FunctionSymbol, word=None):
    return (FUNC, sym.name, word if word is not None else sym.word0(), sym)


def atom_parity(a) -> int:
    k = a[0]
    if k == COORD:
        return 1 if a[1] in ODD_COORDS else 0
    if k == CONST:
        return a[2]
    if k == FUNC:
        w = a[2]
        return (a[3].parity + w[1] + w[2]) % 2
    return 0


# Expr

class Expr:
    """Immutable sum of canonical terms.

    ``terms`` maps ``(evens, odds)`` to a nonzero QQ_I coefficient, where
    ``evens`` is a sorted tuple of ``(atom, power)`` and ``odds`` a sorted
    tuple of distinct odd atoms.
    """

    __slots__ = ("terms", "_hash", "_key")

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}
        self._hash = None
        self._key = None

    # constructors

    @classmethod
    def from_pairs(cls, pairs):
        out = {}
        for k, c in pairs:
            if c:
                v = out.get(k)
                v = c if v is None else v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return cls(out)

    @classmethod
    def const(cls, c) -> "Expr":
        c = as_coeff(c)
        return cls({((), ()): c} if c else {})

    @classmethod
    def atom(cls, a, power=1) -> "Expr":
        if atom_parity(a):
            if power != 1:
                raise ExprError("odd atoms only take power 1")
            return cls({((), (a,)): ONE})
        if a[0] == EXP:
            return make_exp(a[2] * power)
        if power == 0:
            return ONE_EXPR
        if a[0] == LOG and power < 0:
            raise NotMonomial("negative power of a log")
        return cls({(((a, power),), ()): ONE})

    # basics

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def sort_key(self):
        if self._key is None:
            self._key = tuple(sorted((k, coeff_key(c)) for k, c in self.terms.items()))
        return self._key

    def __eq__(self, other):
        if isinstance(other, Expr):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)) or hasattr(other, "x"):
            return self.terms == Expr.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.sort_key())
        return self._hash

    def __repr__(self):
        from .grammar import format_expr
        return f"Expr({format_expr(self)})"

    def __str__(self):
        from .grammar import format_expr
        return format_expr(self)

    # arithmetic

    def __add__(self, other):
        other = to_expr(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Expr(out)

    __radd__ = __add__

    def __neg__(self):
        return Expr({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-to_expr(other))

    def __rsub__(self, other):
        return to_expr(other) - self

    def scale(self, c):
        c = as_coeff(c)
        if not c:
            return ZERO_EXPR
        return Expr({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Expr):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        return expr_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, Expr):
            return self * invert_monomial(other)
        return self.scale(ONE / as_coeff(other))

    def __pow__(self, n: int):
        if n < 0:
            return invert_monomial(self) ** (-n)
        out = ONE_EXPR
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # inspection

    def parity(self):
        """0, 1 or None for mixed; zero is even."""
        ps = {len(o) % 2 for (_, o) in self.terms}
        if not ps:
            return 0
        if len(ps) == 1:
            return ps.pop()
        return None

    def atoms(self) -> set:
        out = set()
        for ev, od in self.terms:
            out.update(a for a, _ in ev)
            out.update(od)
        return out

    def function_symbols(self) -> set:
        out = set()
        for a in self.atoms():
            if a[0] == FUNC:
                out.add(a[3])
            elif a[0] == EXP:
                out |= a[2].function_symbols()
        return out

    def constant_value(self):
        """The coefficient if this is a pure number, else None."""
        if not self.terms:
            return ZERO
        if len(self.terms) == 1 and ((), ()) in self.terms:
            return self.terms[((), ())]
        return None

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def single(self):
        """``(coeff, evens, odds)`` of a one-term expression."""
        if len(self.terms) != 1:
            raise NotMonomial("expected a single term")
        (k, c), = self.terms.items()
        return c, k[0], k[1]


def to_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Expr.const(x)


ZERO_EXPR = Expr({})
ONE_EXPR = Expr({((), ()): ONE})


def parity_of(e: Expr) -> str:
    p = e.parity()
    return {0: "even", 1: "odd", None: "mixed"}[p]


# products

def _merge_evens(e1, e2):
    if not e1:
        return e2, None
    if not e2:
        return e1, None
    d = dict(e1)
    exp_pair = None
    for a, p in e2:
        if a[0] == EXP:
            prev = next((b for b in d if b[0] == EXP), None)
            if prev is not None:
                del d[prev]
                exp_pair = (prev[2], a[2])
                continue
        q = d.get(a, 0) + p
        if q:
            d[a] = q
        else:
            d.pop(a, None)
    return tuple(sorted(d.items())), exp_pair


@lru_cache(maxsize=1 << 18)
def mono_mul(k1, k2):
    """Product of two term keys as a tuple of ``(key, coeff)`` pairs."""
    ev1, od1 = k1
    ev2, od2 = k2
    r = merge_sorted(od1, od2)
    if r is None:
        return ()
    sign, odds = r
    evens, exp_pair = _merge_evens(ev1, ev2)
    c0 = ONE if sign > 0 else -ONE
    if exp_pair is None:
        return (((evens, odds), c0),)
    merged = make_exp(exp_pair[0] + exp_pair[1])
    out = {}
    for k, c in merged.terms.items():
        for kk, cc in mono_mul((evens, odds), k):
            v = out.get(kk, ZERO) + c0 * c * cc
            if v:
                out[kk] = v
            else:
                out.pop(kk, None)
    return tuple(out.items())


def expr_mul(a: Expr, b: Expr) -> Expr:
    if not a.terms or not b.terms:
        return ZERO_EXPR
    out = {}
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            c12 = c1 * c2
            for k, c in mono_mul(k1, k2):
                v = out.get(k)
                v = c12 * c if v is None else v + c12 * c
                if v:
                    out[k] = v
                else:
                    del out[k]
    return Expr(out)


def product(factors) -> Expr:
    out = ONE_EXPR
    for f in factors:
        out = out * f
    return out


def term_expr(key, coeff=ONE) -> Expr:
    return Expr({key: coeff})


# exponentials

def _soul_series(soul: Expr) -> Expr:
    total = ONE_EXPR
    power = ONE_EXPR
    k = 0
    while True:
        k += 1
        power = power * soul
        if not power:
            return total
        total = total + power.scale(gq(Fraction(1, factorial(k))))


def make_exp(u: Expr) -> Expr:
    """exp(u) in normal form.

    Odd-carrying terms of ``u`` are expanded as a terminating series; terms
    ``q*ln(x)`` with rational ``q`` contribute ``x**floor(q)`` and keep the
    fractional part in the exponent.
    """
    if u.parity() != 0:
        raise ParityMismatch("exponent must be even")
    body = {}
    soul = {}
    powers = {}
    for k, c in u.terms.items():
        ev, od = k
        if od:
            soul[k] = c
            continue
        if len(ev) == 1 and ev[0][0][0] == LOG and ev[0][1] == 1 and not c.y:
            q = real_part(c)
            n = q.numerator // q.denominator
            if n:
                x = ev[0][0][1]
                powers[x] = powers.get(x, 0) + n
            rest = q - n
            if rest:
                body[k] = gq(rest)
            continue
        body[k] = c
    out_evens = []
    for x, n in sorted(powers.items()):
        out_evens.append((coord_atom(x), n))
    if body:
        b = Expr(body)
        out_evens.append(((EXP, b.sort_key(), b), 1))
    out_evens.sort()
    base = Expr({(tuple(out_evens), ()): ONE})
    if soul:
        return base * _soul_series(Expr(soul))
    return base


def exp_atom_of(key):
    for a, _ in key[0]:
        if a[0] == EXP:
            return a
    return None


# monomial inversion and ratios

def invert_monomial(e: Expr) -> Expr:
    """Inverse of a one-term even expression built from invertible atoms."""
    c, evens, odds = e.single()
    if odds:
        raise NotMonomial("term with odd atoms is not invertible")
    inv = Expr.const(ONE / c)
    for a, p in evens:
        if a[0] == LOG:
            raise NotMonomial("log atoms are not invertible")
        if a[0] == EXP:
            inv = inv * make_exp(-a[2])
        else:
            inv = inv * Expr({(((a, -p),), ()): ONE})
    return inv


def monomial_ratio(a: Expr, b: Expr):
    """Return monomial m with a == m*b if one exists (b nonzero), else None."""
    if not b.terms:
        return None
    if not a.terms:
        return ZERO_EXPR
    k0 = min(b.terms)
    cb, evb, odb = b.terms[k0], k0[0], k0[1]
    # try every term of a as the image of b's leading term
    for ka, ca in a.terms.items():
        eva, oda = ka
        if not set(odb) <= set(oda):
            continue
        rest_odds = tuple(x for x in oda if x not in odb)
        try:
            inv_ev = invert_monomial(Expr({(evb, ()): ONE}))
        except NotMonomial:
            return None
        cand_even = Expr({(eva, ()): ONE}) * inv_ev
        m_odd = Expr({((), rest_odds): ONE})
        m = cand_even * m_odd
        # fix the coefficient and sign
        probe = m * Expr({k0: cb})
        if not probe.is_monomial():
            continue
        pc, pev, pod = probe.single()
        if (pev, pod) != ka:
            continue
        m = m.scale(ca / pc)
        if m * b == a:
            return m
    return None
