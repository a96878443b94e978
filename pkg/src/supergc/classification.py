"""Structure constants, adjoint action, BCH conjugation and the catalog of
one-dimensional subalgebras."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import factorial

from .gauss import ONE, ZERO, gq, real_part, imag_part
from .expr import CONST, Expr, ExprError, ZERO_EXPR, const_atom, make_exp, monomial_ratio
from .grassmann import REGISTRY, SuperNumber, sn_inv, sn_split
from .grammar import Symbols, format_expr, parse_expr
from . import symmetry

BASIS = ("K1", "P+", "J+", "K2", "P-", "J-", "K0", "C0", "W")
PARITY = {"K1": 0, "P+": 0, "J+": 1, "K2": 0, "P-": 0, "J-": 1, "K0": 0, "C0": 0, "W": 1}
DIAGONAL = ("K1", "K2", "K0", "C0")
PARAMS_EVEN = ("a", "b", "c", "eps")
PARAMS_ODD = ("mu_", "nu_", "zeta_")
ODD_PARAM_OF = {"J+": "mu_", "J-": "nu_", "W": "zeta_"}

CATALOG_SHA256 = "dbb1ceddc782cab2b098f88a08173f85bafe4663d4fd9b54c74fe136224941d2"
CATALOG_ENV = "SUPERGC_CATALOG"


class ClassificationError(Exception):
    pass


class NotNormalizable(ClassificationError):
    pass


class NotClosedForm(ClassificationError):
    pass


class UnknownId(ClassificationError, KeyError):
    pass


class CatalogIntegrityError(ClassificationError):
    pass


# structure constants

@dataclass(frozen=True)
class AlgebraPresentation:
    labels: tuple
    parity: dict
    constants: dict     # (i, j) -> {k: coeff}

    def c(self, i, j):
        return self.constants.get((i, j), {})


def presentation(table: str = "table1") -> AlgebraPresentation:
    consts = symmetry.load_tables()[table]
    labels = tuple(l for l in BASIS if (l, l) in consts)
    for (i, j), v in consts.items():
        sign = ONE if (PARITY[i] and PARITY[j]) else -ONE
        w = consts[(j, i)]
        if {k: c * sign for k, c in v.items()} != w:
            raise ClassificationError(f"[{i},{j}] violates graded antisymmetry")
    return AlgebraPresentation(labels, {l: PARITY[l] for l in labels}, consts)


# ring helpers: coefficients are Exprs (symbolic) or SuperNumbers (numeric)

def _zero_like(x):
    return ZERO_EXPR if isinstance(x, Expr) else SuperNumber({})


def _one_like(x):
    return Expr.const(1) if isinstance(x, Expr) else SuperNumber.scalar(ONE)


def _parity(x):
    return x.parity()


class AlgebraElement:
    """Linear combination ``sum coeffs[label] * label`` over the basis.

    Coefficients multiply from the left. Even labels carry even coefficients
    and odd labels odd ones, so the element itself is even.
    """

    def __init__(self, coeffs, check=True):
        self.coeffs = {l: c for l, c in coeffs.items() if c}
        if check:
            for l, c in self.coeffs.items():
                p = _parity(c)
                if p is not None and p != PARITY[l]:
                    raise ClassificationError(f"coefficient of {l} has the wrong parity")

    def ring_zero(self):
        for c in self.coeffs.values():
            return _zero_like(c)
        return ZERO_EXPR

    def get(self, label):
        return self.coeffs.get(label, self.ring_zero())

    def __add__(self, other):
        out = dict(self.coeffs)
        for l, c in other.coeffs.items():
            out[l] = out[l] + c if l in out else c
        return AlgebraElement(out, check=False)

    def __sub__(self, other):
        return self + other.scale(-ONE)

    def scale(self, c):
        return AlgebraElement({l: x.scale(c) for l, x in self.coeffs.items()}, check=False)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        return self.to_text()

    def to_text(self):
        if not self.coeffs:
            return "0"
        parts = []
        for l in BASIS:
            if l not in self.coeffs:
                continue
            c = self.coeffs[l]
            t = format_expr(c) if isinstance(c, Expr) else c.to_text()
            parts.append(f"({t})*{l}")
        return " + ".join(parts)

    def to_expr(self) -> Expr:
        out = ZERO_EXPR
        for l, c in self.coeffs.items():
            if not isinstance(c, Expr):
                raise ClassificationError("to_expr needs symbolic coefficients")
            out = out + c * Expr.atom(const_atom(l, PARITY[l]))
        return out

    @classmethod
    def from_expr(cls, e: Expr) -> "AlgebraElement":
        out = {}
        for key, c in e.terms.items():
            term = Expr({key: c})
            labels = [a for a in term.atoms() if a[0] == CONST and a[1] in PARITY]
            if len(labels) != 1:
                raise ClassificationError("each term needs exactly one basis label")
            lab = labels[0]
            m = monomial_ratio(term, Expr.atom(lab))
            if m is None:
                raise ClassificationError(f"basis label {lab[1]} is not linear")
            out[lab[1]] = out.get(lab[1], ZERO_EXPR) + m
        return cls(out)


def basis_symbols() -> Symbols:
    s = Symbols()
    for l in BASIS:
        s.constants[l] = PARITY[l]
    for p in PARAMS_EVEN:
        s.constants[p] = 0
    for p in PARAMS_ODD:
        s.constants[p] = 1
    return s


def parse_element(text: str, extra: dict | None = None) -> AlgebraElement:
    s = basis_symbols()
    for name, p in (extra or {}).items():
        s.constants[name] = p
    return AlgebraElement.from_expr(parse_expr(text, s))


# adjoint action

def bracket(X: AlgebraElement, Y: AlgebraElement, pres=None) -> AlgebraElement:
    pres = pres or presentation()
    out = {}
    for i, x in X.coeffs.items():
        for j, y in Y.coeffs.items():
            sign = -ONE if (PARITY[i] and PARITY[j]) else ONE
            for k, c in pres.c(i, j).items():
                v = (x * y).scale(c * sign)
                out[k] = out[k] + v if k in out else v
    return AlgebraElement(out, check=False)


def ad(X: AlgebraElement, pres=None):
    """Matrix ``M`` with ``[X, Y]_k = sum_j M[k][j] * y_j``."""
    pres = pres or presentation()
    zero = X.ring_zero()
    n = len(pres.labels)
    M = [[zero for _ in range(n)] for _ in range(n)]
    idx = {l: a for a, l in enumerate(pres.labels)}
    for i, x in X.coeffs.items():
        for j in pres.labels:
            sign = -ONE if (PARITY[i] and PARITY[j]) else ONE
            for k, c in pres.c(i, j).items():
                M[idx[k]][idx[j]] = M[idx[k]][idx[j]] + x.scale(c * sign)
    return M


def _vector(Y: AlgebraElement, labels, zero):
    return [Y.coeffs.get(l, zero) for l in labels]


def _matvec(M, v, zero):
    out = []
    for row in M:
        acc = zero
        for m, y in zip(row, v):
            if m and y:
                acc = acc + m * y
        out.append(acc)
    return out


def _ring_zero(X, Y):
    for c in list(X.coeffs.values()) + list(Y.coeffs.values()):
        return _zero_like(c)
    return ZERO_EXPR


def bch_series(X: AlgebraElement, Y: AlgebraElement, order: int = 12, pres=None) -> AlgebraElement:
    """``sum_{k <= order} ad(X)^k (Y) / k!``."""
    pres = pres or presentation()
    zero = _ring_zero(X, Y)
    M = ad(X, pres) if X.coeffs else None
    v = _vector(Y, pres.labels, zero)
    total = list(v)
    for k in range(1, order + 1):
        if M is None:
            break
        v = _matvec(M, v, zero)
        if not any(v):
            break
        f = gq(Fraction(1, factorial(k)))
        total = [t + x.scale(f) for t, x in zip(total, v)]
    return AlgebraElement(dict(zip(pres.labels, total)), check=False)


def _triangular_order(M):
    """Order of indices in which the off-diagonal part of M is strictly
    lower triangular (edges j -> k for M[k][j] != 0)."""
    n = len(M)
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for k in range(n):
        for j in range(n):
            if k != j and M[k][j]:
                succ[j].append(k)
                indeg[k] += 1
    ready = [a for a in range(n) if not indeg[a]]
    order = []
    while ready:
        a = ready.pop(0)
        order.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if not indeg[b]:
                ready.append(b)
    if len(order) != n:
        raise NotClosedForm("ad(X) is not triangular in any basis order")
    return order


def _dd_symbolic(nodes, memo):
    key = tuple(nodes)
    if key in memo:
        return memo[key]
    if all(x == nodes[0] for x in nodes):
        out = make_exp(nodes[0]).scale(gq(Fraction(1, factorial(len(nodes) - 1))))
    else:
        nodes = list(nodes)
        for a in range(len(nodes)):
            if nodes[a] != nodes[-1]:
                nodes[0], nodes[a] = nodes[a], nodes[0]
                break
        num = _dd_symbolic(tuple(nodes[1:]), memo) - _dd_symbolic(tuple(nodes[:-1]), memo)
        try:
            out = num / (nodes[-1] - nodes[0])
        except ExprError:
            raise NotClosedForm("eigenvalue differences are not monomials") from None
    memo[key] = out
    return out


def _h(nodes, r):
    """Complete homogeneous symmetric polynomial of degree r."""
    if r == 0:
        return SuperNumber.scalar(ONE)
    if not nodes:
        return SuperNumber({})
    head, rest = nodes[0], nodes[1:]
    out = SuperNumber({})
    power = SuperNumber.scalar(ONE)
    for k in range(r + 1):
        if k:
            power = power * head
            if not power:
                break
        out = out + power * _h(rest, r - k)
    return out


def _dd_numeric(nodes, memo):
    key = tuple(nodes)
    if key in memo:
        return memo[key]
    for x in nodes:
        if sn_split(x)[2]:
            raise NotClosedForm("numeric closed form needs bodiless eigenvalues")
    m = len(nodes) - 1
    out = SuperNumber({})
    for r in range(len(REGISTRY) + 2):
        out = out + _h(list(nodes), r).scale(gq(Fraction(1, factorial(m + r))))
    memo[key] = out
    return out


def bch_closed(X: AlgebraElement, Y: AlgebraElement, pres=None) -> AlgebraElement:
    """Closed form of ``exp(ad X) Y``.

    ad(X) is brought to triangular shape by reordering the basis; the
    exponential is then a sum over paths of products of off-diagonal entries
    times divided differences of exp at the diagonal entries.
    """
    pres = pres or presentation()
    zero = _ring_zero(X, Y)
    symbolic = isinstance(zero, Expr)
    n = len(pres.labels)
    if not X.coeffs:
        return AlgebraElement(dict(Y.coeffs), check=False)
    M = ad(X, pres)
    order = _triangular_order(M)
    pos = {a: p for p, a in enumerate(order)}
    lam = [M[a][a] for a in range(n)]
    memo = {}
    dd = (lambda nodes: _dd_symbolic(nodes, memo)) if symbolic else (lambda nodes: _dd_numeric(nodes, memo))
    y = _vector(Y, pres.labels, zero)
    out = [zero] * n

    def walk(path, prod):
        # prod = M[path[-1]][path[-2]] * ... * M[path[1]][path[0]]
        k = path[-1]
        term = prod * dd(tuple(lam[p] for p in path)) if prod is not None else dd((lam[k],))
        out[k] = out[k] + term * y[path[0]]
        for nxt in range(n):
            if nxt != k and M[nxt][k] and pos[nxt] > pos[k]:
                p2 = M[nxt][k] if prod is None else M[nxt][k] * prod
                if p2:
                    walk(path + [nxt], p2)

    for j in range(n):
        if y[j]:
            walk([j], None)
    return AlgebraElement(dict(zip(pres.labels, out)), check=False)


# normalization onto catalog shapes

def _body_sign(x: SuperNumber) -> int:
    b = x.body
    if imag_part(b) != 0 or real_part(b) == 0:
        raise NotNormalizable("coefficient body is not a nonzero real number")
    return 1 if real_part(b) > 0 else -1


def normalize_rep(Y: AlgebraElement, catalog=None):
    """Map a numeric element onto a catalog representative.

    Uses an overall even rescaling and the dilations generated by K1, K2
    (which scale P+ and P- by factors with positive body). Odd coefficients
    are absorbed into the odd catalog parameters. Returns
    ``(record, values)`` where ``values`` gives the even parameters.
    """
    catalog = catalog or load_catalog()
    support = set(Y.coeffs)
    for rec in catalog.values():
        if set(rec.element.coeffs) != support:
            continue
        shape = rec.shape()
        try:
            values = _fit(Y, shape)
        except NotNormalizable:
            continue
        return rec, values
    raise NotNormalizable(f"no catalog shape fits {Y.to_text()}")


def _fit(Y, shape):
    ones = [l for l, s in shape.items() if s == "1"]
    lead = next((l for l in ones if l in DIAGONAL), None)
    if lead is None:
        lead = next((l for l in ones if l in ("P+", "P-")), None)
    s = sn_inv(Y.coeffs[lead]) if lead else SuperNumber.scalar(ONE)
    values = {}
    for l, sym in shape.items():
        c = s * Y.coeffs[l]
        if l in ODD_PARAM_OF:
            values[sym] = c
            continue
        if l in ("P+", "P-") and l != lead:
            sign = _body_sign(c)
            if sym == "1" and sign < 0:
                raise NotNormalizable("dilations cannot flip a sign")
            if sym == "eps":
                values["eps"] = sign
            elif sym != "1":
                raise NotNormalizable("unexpected translation parameter")
            continue
        if sym == "1":
            if c != SuperNumber.scalar(ONE):
                raise NotNormalizable(f"{l} is not normalized")
        else:
            values[sym] = c
    return values


# catalog

@dataclass(frozen=True)
class SubalgebraRecord:
    id: str
    text: str
    flags: tuple
    raw: str
    element: AlgebraElement

    @property
    def nonstandard_invariants(self) -> bool:
        return "nonstandard" in self.flags

    @property
    def number(self) -> int:
        return int(self.id[1:])

    def shape(self) -> dict:
        """label -> parameter name, or "1" for a unit coefficient."""
        out = {}
        for l, c in self.element.coeffs.items():
            if c == Expr.const(1):
                out[l] = "1"
                continue
            names = [a[1] for a in c.atoms() if a[0] == CONST]
            out[l] = names[0] if len(names) == 1 else format_expr(c)
        return out


def _catalog_text(path=None):
    import os
    path = path or os.environ.get(CATALOG_ENV)
    if path:
        with open(path, "rb") as fh:
            return fh.read(), False
    return resources.files("supergc").joinpath("data/table3.tsv").read_bytes(), True


_CACHE = {}


def load_catalog(path=None, verify_hash=None) -> dict:
    """Load the catalog; the shipped file is checked against its pinned hash."""
    data, shipped = _catalog_text(path)
    if verify_hash is None:
        verify_hash = shipped
    digest = hashlib.sha256(data).hexdigest()
    if verify_hash and digest != CATALOG_SHA256:
        raise CatalogIntegrityError(f"catalog hash {digest} does not match the pinned value")
    if digest in _CACHE:
        return _CACHE[digest]
    out = {}
    lines = data.decode("utf-8").splitlines()
    for line in lines[1:]:
        if not line.strip():
            continue
        cid, text, flags, raw = line.split("\t")
        fl = () if flags == "-" else tuple(flags.split(","))
        out[cid] = SubalgebraRecord(cid, text, fl, raw, parse_element(text))
    _CACHE[digest] = out
    return out


def catalog(cid: str, path=None) -> SubalgebraRecord:
    cat = load_catalog(path)
    if cid not in cat:
        raise UnknownId(cid)
    return cat[cid]


def nonstandard_ids(path=None):
    return sorted((r.id for r in load_catalog(path).values() if r.nonstandard_invariants),
                  key=lambda s: int(s[1:]))


# the two conjugation examples

def example_symbols():
    return {"alpha": 0, "beta": 0, "gamma": 0, "delta": 0, "lambda": 0, "rho": 0,
            "sigma": 0, "eta_": 1, "lam_": 1, "tau_": 1, "rho_": 1}


def translation_example():
    """X = alpha K1 + delta K2, Y = P+ + a P-."""
    ex = example_symbols()
    X = parse_element("alpha*K1 + delta*K2", ex)
    Y = parse_element("P+ + a*P-", ex)
    return X, Y


def twisted_example():
    """Y = K1 + zeta W conjugated by a general element."""
    ex = example_symbols()
    X = parse_element("alpha*K1 + beta*P+ + eta_*J+ + gamma*K2 + delta*P- + lam_*J-"
                      " + rho*K0 + sigma*C0 + tau_*W", ex)
    Y = parse_element("K1 + zeta_*W", ex)
    return X, Y


def stated_translation_result():
    ex = example_symbols()
    s = basis_symbols()
    s.constants.update(ex)
    return AlgebraElement.from_expr(parse_expr("exp(-2*alpha)*P+ + exp(-2*delta)*a*P-", s))


def stated_twisted_result():
    ex = example_symbols()
    s = basis_symbols()
    s.constants.update(ex)
    text = ("K1 + exp(rho - sigma)*zeta_*W - beta*alpha^-1*(exp(2*alpha) - 1)*P+"
            " - alpha^-1*(exp(alpha) - 1)*eta_*J+")
    return AlgebraElement.from_expr(parse_expr(text, s))
