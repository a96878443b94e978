"""Oriented rewriting of function atoms and their derivatives."""

from __future__ import annotations

from typing import NamedTuple, Optional

from .gauss import I, ONE
from .expr import (
    CONST, FUNC, Expr, ExprError, ONE_EXPR, ParityMismatch, ZERO_EXPR,
    atom_parity, mono_mul,
)
from .calculus import Dm, Dp, PartialArg, PartialX, derive, word_D, word_dx


class NonTermination(ExprError):
    pass


class Rule(NamedTuple):
    """``guard * pattern -> replacement``.

    ``pattern`` is a function atom (any derivative of it also matches) or a
    constant atom. ``guard``, when given, is an odd constant atom that must be
    present in the same term; the replacement then stands for the product
    ``guard * pattern``.
    """

    pattern: tuple
    replacement: Expr
    guard: Optional[tuple] = None


def make_rule(pattern, replacement, guard=None) -> Rule:
    if not isinstance(replacement, Expr):
        replacement = Expr.const(replacement)
    want = atom_parity(pattern) + (atom_parity(guard) if guard else 0)
    rp = replacement.parity()
    if replacement and rp != want % 2:
        raise ParityMismatch(f"rule for {pattern[1]} changes parity")
    if pattern[0] not in (FUNC, CONST):
        raise ExprError("rule patterns must be function or constant atoms")
    return Rule(pattern, replacement, guard)


def _d_counts(word):
    (a, b), e1, e2 = word
    return 2 * a + e1, 2 * b + e2


def extension(pattern, atom):
    """If ``atom`` is a derivative of ``pattern`` return ``(ops, coeff)`` such
    that applying ``ops`` (innermost first) to the pattern gives
    ``coeff * atom``; else None."""
    if atom[0] != pattern[0]:
        return None
    if pattern[0] == CONST:
        return ([], ONE) if atom == pattern else None
    if atom[3] != pattern[3]:
        return None
    sym = atom[3]
    pw, aw = pattern[2], atom[2]
    if sym.is_super:
        np_, nm = _d_counts(pw)
        ap, am = _d_counts(aw)
        dp, dm = ap - np_, am - nm
        if dp < 0 or dm < 0:
            return None
        ops = []
        coeff = ONE
        w = pw
        if dm % 2:
            c, w = word_D(w, "-")
            coeff *= c
            ops.append(Dm())
        if dp % 2:
            c, w = word_D(w, "+")
            coeff *= c
            ops.append(Dp())
        for _ in range(dm // 2):
            w = word_dx(w, 1)
            ops.append(PartialX("x-"))
        for _ in range(dp // 2):
            w = word_dx(w, 0)
            ops.append(PartialX("x+"))
        if w != aw:
            return None
        return ops, coeff
    pc, ac = pw[0], aw[0]
    if any(y < x for x, y in zip(pc, ac)):
        return None
    ops = []
    for k, arg in enumerate(sym.args):
        op = PartialX(arg.name) if arg.is_base() else PartialArg(arg)
        ops.extend([op] * (ac[k] - pc[k]))
    return ops, ONE


def _apply_ops(e, ops):
    for op in ops:
        e = derive(e, op)
    return e


def _ops_parity(ops):
    return sum(op.parity for op in ops) % 2


class _RuleSet:
    def __init__(self, rules):
        self.plain = [r for r in rules if r.guard is None]
        self.guarded = [r for r in rules if r.guard is not None]
        self.cache = {}

    def image(self, atom):
        """Replacement for a single atom, or None."""
        if atom in self.cache:
            return self.cache[atom]
        out = None
        for r in self.plain:
            ext = extension(r.pattern, atom)
            if ext is not None:
                ops, c = ext
                out = _apply_ops(r.replacement, ops).scale(ONE / c)
                break
        self.cache[atom] = out
        return out


def _rewrite_term(key, c, rs: _RuleSet):
    evens, odds = key
    # guarded rules take precedence and fire once per term
    for r in rs.guarded:
        if r.guard not in odds:
            continue
        for a in [x for x, _ in evens] + list(odds):
            if a == r.guard:
                continue
            ext = extension(r.pattern, a)
            if ext is None:
                continue
            ops, oc = ext
            # Op(G*P) = (-1)^{|Op||G|} G*Op(P), so G*A = s/oc * Op(G*P)
            s = -ONE if (_ops_parity(ops) and atom_parity(r.guard)) else ONE
            repl = _apply_ops(r.replacement, ops).scale(s / oc)
            rest = _remove(key, [r.guard, a])
            ga = Expr.atom(r.guard) * Expr.atom(a)
            probe = ga * Expr({rest: ONE})
            pc = probe.terms.get(key)
            if pc is None:
                continue
            return repl * Expr({rest: c / pc})
    changed = False
    t = Expr.const(c)
    for a, p in evens:
        im = rs.image(a)
        if im is None:
            t = t * Expr({(((a, p),), ()): ONE})
        else:
            changed = True
            t = t * (im ** p)
    for a in odds:
        im = rs.image(a)
        if im is None:
            t = t * Expr.atom(a)
        else:
            changed = True
            t = t * im
    return t if changed else None


def _remove(key, atoms):
    evens, odds = key
    ev = list(evens)
    od = list(odds)
    for a in atoms:
        if a in od:
            od.remove(a)
            continue
        for i, (b, p) in enumerate(ev):
            if b == a:
                if p == 1:
                    del ev[i]
                else:
                    ev[i] = (b, p - 1)
                break
    return (tuple(ev), tuple(od))


def rewrite(e: Expr, rules, max_passes: int = 16) -> Expr:
    """Apply rules until no atom matches. Raises NonTermination after
    ``max_passes`` passes that still changed something."""
    rs = _RuleSet(list(rules))
    if not rs.plain and not rs.guarded:
        return e
    for _ in range(max_passes):
        out = ZERO_EXPR
        changed = False
        for key, c in e.terms.items():
            r = _rewrite_term(key, c, rs)
            if r is None:
                out = out + Expr({key: c})
            else:
                changed = True
                out = out + r
        e = out
        if not changed:
            return e
    # one more probe: a fixpoint reached on the last pass is fine
    for key, c in e.terms.items():
        if _rewrite_term(key, c, rs) is not None:
            raise NonTermination(f"rules still apply after {max_passes} passes")
    return e
