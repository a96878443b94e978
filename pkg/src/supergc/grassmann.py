"""Exact arithmetic in a finitely generated complex Grassmann algebra."""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial

from .gauss import ONE, ZERO, as_coeff, format_coeff, gq


class GrassmannError(Exception):
    pass


class OddExponent(GrassmannError):
    pass


class NonNumericBody(GrassmannError):
    pass


class ZeroBody(GrassmannError):
    pass


class OddInput(GrassmannError):
    pass


class MixedParity(GrassmannError):
    pass


def merge_sorted(a, b):
    """Merge two strictly increasing tuples.

    Returns ``(sign, merged)`` where sign is (-1)**(transpositions needed to
    sort the concatenation ``a + b``), or ``None`` if a generator repeats.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    i = j = 0
    swaps = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        x, y = a[i], b[j]
        if x < y:
            out.append(x)
            i += 1
        elif y < x:
            # y jumps over every remaining element of a
            swaps += na - i
            out.append(y)
            j += 1
        else:
            return None
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


class GeneratorRegistry:
    """Append-only map between generator names and indices.

    Reads are lock-free; registration is serialized.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._by_name = {}
        self._names = []

    def register(self, name: str) -> int:
        idx = self._by_name.get(name)
        if idx is not None:
            return idx
        with self._lock:
            idx = self._by_name.get(name)
            if idx is None:
                self._names.append(name)
                idx = len(self._names)
                self._by_name[name] = idx
            return idx

    def name(self, idx: int) -> str:
        return self._names[idx - 1]

    def index(self, name: str) -> int:
        return self._by_name[name]

    def __contains__(self, name) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._names)


REGISTRY = GeneratorRegistry()


class SuperNumber:
    """Immutable element of the Grassmann algebra.

    ``terms`` maps strictly increasing tuples of generator indices to
    nonzero Gaussian-rational coefficients.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None, parity=None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(mono)
                if any(mono[k] >= mono[k + 1] for k in range(len(mono) - 1)):
                    raise ValueError(f"monomial {mono} is not strictly increasing")
                c = as_coeff(c)
                if c:
                    clean[mono] = c
        if parity is not None:
            for mono in clean:
                if len(mono) % 2 != parity:
                    raise MixedParity(f"monomial {mono} has the wrong parity")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, k, v):
        raise AttributeError("SuperNumber is immutable")

    @classmethod
    def scalar(cls, c):
        return cls({(): c})

    @classmethod
    def generator(cls, name_or_index, registry=REGISTRY):
        idx = name_or_index
        if isinstance(name_or_index, str):
            idx = registry.register(name_or_index)
        return cls({(idx,): ONE})

    def parity(self):
        """0, 1, or None for mixed. Zero counts as even."""
        ps = {len(m) % 2 for m in self.terms}
        if not ps:
            return 0
        if len(ps) == 1:
            return ps.pop()
        return None

    @property
    def body(self):
        return self.terms.get((), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, SuperNumber):
            return self.terms == other.terms
        try:
            return self.terms == SuperNumber.scalar(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        other = _sn(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return SuperNumber(out)

    __radd__ = __add__

    def __neg__(self):
        return SuperNumber({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_sn(other))

    def __rsub__(self, other):
        return _sn(other) - self

    def __mul__(self, other):
        return sn_mul(self, _sn(other))

    def __rmul__(self, other):
        return sn_mul(_sn(other), self)

    def scale(self, c):
        c = as_coeff(c)
        return SuperNumber({m: c * v for m, v in self.terms.items()})

    def __repr__(self):
        return f"SuperNumber({self.to_text()})"

    def to_text(self, registry=REGISTRY) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda t: (len(t), t)):
            c = self.terms[m]
            names = [registry.name(k) if k <= len(registry) else f"xi{k}" for k in m]
            if not names:
                parts.append(format_coeff(c))
            elif c == ONE:
                parts.append("*".join(names))
            elif c == -ONE:
                parts.append("-" + "*".join(names))
            else:
                parts.append(format_coeff(c) + "*" + "*".join(names))
        return " + ".join(parts).replace("+ -", "- ")


def _sn(x) -> SuperNumber:
    if isinstance(x, SuperNumber):
        return x
    return SuperNumber.scalar(x)


def sn_mul(a: SuperNumber, b: SuperNumber) -> SuperNumber:
    out = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = merge_sorted(ma, mb)
            if r is None:
                continue
            s, m = r
            v = ca * cb
            out[m] = out.get(m, ZERO) + (v if s > 0 else -v)
    return SuperNumber(out)


def sn_split(a: SuperNumber):
    """Return ``(even, odd, body, soul)``."""
    even = SuperNumber({m: c for m, c in a.terms.items() if len(m) % 2 == 0})
    odd = SuperNumber({m: c for m, c in a.terms.items() if len(m) % 2 == 1})
    body = SuperNumber({m: c for m, c in a.terms.items() if not m})
    soul = SuperNumber({m: c for m, c in a.terms.items() if m})
    return even, odd, body, soul


def _nilpotent_series(soul: SuperNumber, coeff_of_k):
    """Sum coeff_of_k(k) * soul**k until the power vanishes."""
    total = SuperNumber.scalar(coeff_of_k(0))
    power = SuperNumber.scalar(1)
    k = 0
    while True:
        k += 1
        power = sn_mul(power, soul)
        if not power:
            return total
        total = total + power.scale(coeff_of_k(k))


def sn_exp(a: SuperNumber, body_exp=None) -> SuperNumber:
    """exp(a) for even ``a``.

    Only a zero body has an exact rational exponential. For a transcendental
    body pass its exponential as ``body_exp`` (e.g. ``body_exp=2`` for a body of
    ln 2, with the soul given in ``a``); the body of ``a`` must then be zero.
    """
    if a.parity() != 0:
        raise OddExponent("exponential of a non-even supernumber")
    _, _, body, soul = sn_split(a)
    if body_exp is None:
        if body:
            raise NonNumericBody(
                "exp of a nonzero rational body is not exact; pass body_exp"
            )
        scale = ONE
    else:
        if body:
            raise NonNumericBody("give either a body or body_exp, not both")
        scale = as_coeff(body_exp)
    series = _nilpotent_series(soul, lambda k: gq(Fraction(1, factorial(k))))
    return series.scale(scale)


def sn_inv(a: SuperNumber) -> SuperNumber:
    """Inverse of an even supernumber with nonzero body."""
    if a.parity() != 0:
        raise OddInput("only even supernumbers are inverted")
    b = a.body
    if not b:
        raise ZeroBody("bodiless supernumbers are not invertible")
    binv = ONE / b
    _, _, _, soul = sn_split(a)
    # 1/(b + s) = (1/b) * sum (-s/b)^k
    ratio = soul.scale(-binv)
    return _nilpotent_series(ratio, lambda k: ONE).scale(binv)
