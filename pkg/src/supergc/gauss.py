"""Gaussian-rational coefficients.

Coefficients are elements of ``QQ_I`` from sympy's polynomial domains; this
module only adds conversion and formatting helpers around them.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import QQ, QQ_I

ZERO = QQ_I.zero
ONE = QQ_I.one
I = QQ_I(0, 1)

GaussQ = type(ONE)


def gq(re=0, im=0):
    """Build a Gaussian rational from real and imaginary parts."""
    return QQ_I(_qq(re), _qq(im))


def _qq(x):
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    return QQ.convert(x)


def as_coeff(x):
    """Coerce ints, Fractions, complex numbers with rational parts and
    QQ_I elements into QQ_I."""
    if isinstance(x, GaussQ):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, complex):
        return gq(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, (int, Fraction)):
        return gq(x)
    raise TypeError(f"cannot use {x!r} as a coefficient")


def is_coeff(x) -> bool:
    return isinstance(x, (GaussQ, int, Fraction, complex)) and not isinstance(x, bool)


def real_part(c) -> Fraction:
    return Fraction(int(c.x.numerator), int(c.x.denominator))


def imag_part(c) -> Fraction:
    return Fraction(int(c.y.numerator), int(c.y.denominator))


def is_integer(c) -> bool:
    return not c.y and c.x.denominator == 1


def _fmt_q(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_coeff(c) -> str:
    """Render a coefficient in the expression grammar, e.g. ``3/2``, ``-i``,
    ``(1/2+3*i)``."""
    re, im = real_part(c), imag_part(c)
    if not im:
        return _fmt_q(re)
    if im == 1:
        ims = "i"
    elif im == -1:
        ims = "-i"
    else:
        ims = f"{_fmt_q(im)}*i"
    if not re:
        return ims
    sign = "" if ims.startswith("-") else "+"
    return f"({_fmt_q(re)}{sign}{ims})"


def coeff_key(c):
    return (real_part(c), imag_part(c))
