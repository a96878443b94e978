"""Random expressions for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .calculus import Dm, Dp, derive
from .expr import ONE_EXPR, Expr, const_atom, coord_atom, func_atom, make_exp, superfunction
from .gauss import gq

_H = superfunction("H", 1)
_PHI = superfunction("phi", 0)
_G = superfunction("g", 0)


def atom_pool():
    """Factors used to build random expressions, mixing parities."""
    x = lambda n: Expr.atom(coord_atom(n))
    H = Expr.atom(func_atom(_H))
    phi = Expr.atom(func_atom(_PHI))
    g = Expr.atom(func_atom(_G))
    a = Expr.atom(const_atom("a", 0))
    mu = Expr.atom(const_atom("mu_", 1))
    return [
        x("x+"), x("x-"), x("th+"), x("th-"),
        H, phi, g, a, mu,
        derive(H, Dp()), derive(phi, Dm()), derive(derive(g, Dp()), Dm()),
        make_exp(phi), make_exp(a * x("x+")), make_exp(-phi.scale(2)),
    ]


def random_coeff(rng: random.Random):
    return gq(Fraction(rng.randint(-6, 6), rng.randint(1, 3)),
              Fraction(rng.randint(-2, 2), rng.randint(1, 2)))


def random_expr(rng: random.Random, terms: int = 4, depth: int = 3) -> Expr:
    pool = atom_pool()
    out = Expr.const(0)
    for _ in range(rng.randint(1, terms)):
        t = Expr.const(random_coeff(rng) or 1)
        for _ in range(rng.randint(0, depth)):
            t = t * rng.choice(pool)
        out = out + t
    return out


def random_exprs(n: int, seed: int = 0):
    rng = random.Random(seed)
    return [random_expr(rng) for _ in range(n)]


def random_homogeneous(rng: random.Random, parity: int) -> Expr:
    """Random expression with only terms of the given parity (may be 0)."""
    e = random_expr(rng)
    keep = {k: c for k, c in e.terms.items() if len(k[1]) % 2 == parity}
    out = Expr(keep)
    return out if out or parity else ONE_EXPR
