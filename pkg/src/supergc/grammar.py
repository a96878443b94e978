"""Text frontend: a small expression language and its printer.

Documents are sequences of ``;``-terminated statements::

    odd H(x+,x-,th+,th-);     # superfunction
    even f(x+,x-);            # function of bosonic arguments
    var xi = x+ - x-;         # linear bosonic argument
    even phi0(xi);
    odd C0+_;                 # constant (no argument list)
    let K = 4*exp(-phi)*Q+*Q-;
    rule D- R+ -> -2*exp(-phi)*Q+*Q-*f;
    rule C0+_ * phi0 -> C;    # guarded rule
    goal D+ D+ H + i*dx+ H;
    goal expr == expr;

Expressions use explicit ``*``, ``/`` (by monomials), ``^`` with integer
exponents, ``exp(...)``, ``ln(...)`` and the prefix operators ``D+ D- J+ J-
dx+ dx- dth+ dth- dz dzb`` plus ``d<var>`` for declared ``var`` names.  ``i`` is the
imaginary unit and ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .gauss import ONE, format_coeff, gq
from .expr import (
    COORD, CONST, EXP, FUNC, LOG, Expr, ExprError, LinearVar,
    const_atom, coord_atom, func_atom, make_exp, make_function, superfunction,
)
from .calculus import OPS, PartialArg, derive, log_of
from .rules import Rule, make_rule, rewrite

COORDS = ("x+", "x-", "th+", "th-", "z", "zb")
KEYWORDS = ("odd", "even", "var", "let", "rule", "goal")


class ParseError(Exception):
    def __init__(self, msg, line=0, col=0):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


class UndeclaredSymbol(ParseError):
    pass


# printing

def _word_prefix(sym, word) -> str:
    counts, e1, e2 = word
    parts = []
    for k, arg in enumerate(sym.args):
        parts.extend(["d" + arg.name] * counts[k])
    if e1:
        parts.append("D+")
    if e2:
        parts.append("D-")
    return " ".join(parts)


def format_atom(a, p=1) -> str:
    k = a[0]
    if k == COORD or k == CONST:
        s = a[1]
    elif k == LOG:
        s = f"ln({a[1]})"
    elif k == FUNC:
        pre = _word_prefix(a[3], a[2])
        s = f"{pre} {a[1]}" if pre else a[1]
        if pre and p != 1:
            s = f"({s})"
    elif k == EXP:
        s = f"exp({format_expr(a[2])})"
    else:
        raise ExprError(f"bad atom {a!r}")
    if p != 1:
        s = f"{s}^{p}"
    return s


def format_term(key, c) -> str:
    evens, odds = key
    factors = [format_atom(a, p) for a, p in evens] + [format_atom(a) for a in odds]
    if not factors:
        return format_coeff(c)
    body = "*".join(factors)
    if c == ONE:
        return body
    if c == -ONE:
        return "-" + body
    return format_coeff(c) + "*" + body


def format_expr(e: Expr) -> str:
    if not e.terms:
        return "0"
    parts = [format_term(k, e.terms[k]) for k in sorted(e.terms)]
    out = parts[0]
    for p in parts[1:]:
        out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
    return out


# lexing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<eq>==)"
    r"|(?P<op>[-+*/^(),;=]))"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


@dataclass
class Symbols:
    """Declared names of a document."""

    functions: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    variables: dict = field(default_factory=dict)
    lets: dict = field(default_factory=dict)

    def names(self):
        return (set(self.functions) | set(self.constants) | set(self.variables)
                | set(self.lets))


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.split("\n"))


class Lexer:
    def __init__(self, text: str, symbols: Symbols):
        self.text = _strip_comments(text)
        self.pos = 0
        self.symbols = symbols
        self.declaring = False

    def _linecol(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def _known(self, name: str) -> bool:
        if self.declaring:
            return True
        if name in COORDS or name in OPS:
            return True
        if name in self.symbols.names():
            return True
        if name.startswith("d") and name[1:] in self.symbols.variables:
            return True
        return False

    def next(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m or m.end() == m.start() and self.pos < len(self.text):
            rest = self.text[self.pos:]
            if not rest.strip():
                self.pos = len(self.text)
                return Token("eof", "", *self._linecol(self.pos))
            start = self.pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {self.text[start]!r}", *self._linecol(start))
        if m.end() == self.pos or m.lastgroup is None:
            self.pos = len(self.text)
            return Token("eof", "", *self._linecol(self.pos))
        start = m.start(m.lastgroup)
        line, col = self._linecol(start)
        kind = m.lastgroup
        text = m.group(kind)
        self.pos = m.end()
        if kind == "id":
            # longest declared name with a +/- suffix and optional underscore
            best = text
            for suffix in ("+_", "-_", "+", "-"):
                cand = text + suffix
                if self.text.startswith(suffix, self.pos) and self._known(cand):
                    if len(cand) > len(best):
                        best = cand
            self.pos += len(best) - len(text)
            text = best
        return Token(kind, text, line, col)


# parsing

class Parser:
    def __init__(self, text: str, symbols: Symbols | None = None):
        self.symbols = symbols or Symbols()
        self.lexer = Lexer(text, self.symbols)
        self.tok = self.lexer.next()

    def _advance(self):
        t = self.tok
        self.tok = self.lexer.next()
        return t

    def _declaring_advance(self):
        """Advance past a keyword, lexing the following name with any
        +/- and underscore suffix."""
        self.lexer.declaring = True
        try:
            return self._advance()
        finally:
            self.lexer.declaring = False

    def _expect(self, text):
        if self.tok.text != text:
            raise ParseError(f"expected {text!r}, got {self.tok.text!r}", self.tok.line, self.tok.col)
        return self._advance()

    def _err(self, msg):
        return ParseError(msg, self.tok.line, self.tok.col)

    # expressions

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self._advance().text
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self._advance()
            t = self.unary()
            if op.text == "*":
                e = e * t
            else:
                try:
                    e = e / t
                except ExprError as exc:
                    raise ParseError(str(exc), op.line, op.col) from None
        return e

    def unary(self) -> Expr:
        t = self.tok
        if t.kind == "op" and t.text == "-":
            self._advance()
            return -self.unary()
        if t.kind == "op" and t.text == "+":
            self._advance()
            return self.unary()
        if t.kind == "id":
            # declared names shadow the operator spellings
            op = None if t.text in self.symbols.names() else OPS.get(t.text)
            if op is None and t.text.startswith("d") and t.text[1:] in self.symbols.variables:
                op = PartialArg(self.symbols.variables[t.text[1:]])
            if op is not None:
                self._advance()
                return derive(self.unary(), op)
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.tok.text == "^":
            self._advance()
            sign = 1
            if self.tok.text == "-":
                self._advance()
                sign = -1
            elif self.tok.text == "(":
                self._advance()
                sign = -1 if self.tok.text == "-" else 1
                if self.tok.text in "+-":
                    self._advance()
                n = self._int()
                self._expect(")")
                return self._pow(base, sign * n)
            n = self._int()
            return self._pow(base, sign * n)
        return base

    def _pow(self, base, n):
        try:
            return base ** n
        except ExprError as exc:
            raise self._err(str(exc)) from None

    def _int(self):
        if self.tok.kind != "num":
            raise self._err("expected an integer")
        return int(self._advance().text)

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self._advance()
            return Expr.const(int(t.text))
        if t.text == "(":
            self._advance()
            e = self.expr()
            self._expect(")")
            return e
        if t.kind != "id":
            raise self._err(f"unexpected {t.text or 'end of input'!r}")
        name = t.text
        self._advance()
        if name == "i":
            return Expr.const(gq(0, 1))
        if name in ("exp", "ln"):
            self._expect("(")
            inner = self.expr()
            self._expect(")")
            try:
                return make_exp(inner) if name == "exp" else log_of(inner)
            except ExprError as exc:
                raise ParseError(str(exc), t.line, t.col) from None
        if name in COORDS:
            return Expr.atom(coord_atom(name))
        s = self.symbols
        if name in s.lets:
            return s.lets[name]
        if name in s.functions:
            return Expr.atom(func_atom(s.functions[name]))
        if name in s.constants:
            return Expr.atom(const_atom(name, s.constants[name]))
        raise UndeclaredSymbol(f"undeclared symbol {name!r}", t.line, t.col)

    # statements

    def statement(self):
        t = self.tok
        if t.kind == "id" and t.text in ("odd", "even"):
            return self._declaration()
        if t.kind == "id" and t.text == "var":
            return self._var()
        if t.kind == "id" and t.text == "let":
            self._declaring_advance()
            name = self._advance()
            if name.kind != "id":
                raise ParseError("expected a name", name.line, name.col)
            self._expect("=")
            e = self.expr()
            self._expect(";")
            if name.text in self.symbols.functions or name.text in self.symbols.constants:
                return ("bind", name.text, e)
            self.symbols.lets[name.text] = e
            return ("let", name.text, e)
        if t.kind == "id" and t.text == "rule":
            self._advance()
            lhs = self.expr()
            self._expect("->")
            rhs = self.expr()
            self._expect(";")
            try:
                rule = _rule_from(lhs, rhs)
            except ExprError as exc:
                raise ParseError(str(exc), t.line, t.col) from None
            return ("rule", rule)
        if t.kind == "id" and t.text == "goal":
            self._advance()
            lhs = self.expr()
            rhs = None
            if self.tok.kind == "eq":
                self._advance()
                rhs = self.expr()
            self._expect(";")
            return ("goal", lhs, rhs)
        raise self._err(f"unexpected {t.text or 'end of input'!r} at statement start")

    def _declaration(self):
        parity = 1 if self._declaring_advance().text == "odd" else 0
        name = self._advance()
        if name.kind != "id":
            raise ParseError("expected a name", name.line, name.col)
        if self.tok.text == "(":
            self._advance()
            args = []
            while self.tok.text != ")":
                a = self._advance().text
                if a in COORDS:
                    args.append(a)
                elif a in self.symbols.variables:
                    args.append(self.symbols.variables[a])
                else:
                    raise ParseError(f"unknown argument {a!r}", self.tok.line, self.tok.col)
                if self.tok.text == ",":
                    self._advance()
            self._expect(")")
            self._expect(";")
            odd = [a for a in args if a in ("th+", "th-")]
            even = [a for a in args if a not in ("th+", "th-")]
            if odd:
                if tuple(odd) != ("th+", "th-") or even != ["x+", "x-"]:
                    raise ParseError("superfunctions take (x+,x-,th+,th-)", name.line, name.col)
                sym = superfunction(name.text, parity)
            else:
                sym = make_function(name.text, parity, tuple(even))
            self.symbols.functions[name.text] = sym
            return ("decl", sym)
        self._expect(";")
        self.symbols.constants[name.text] = parity
        return ("const", name.text, parity)

    def _var(self):
        self._declaring_advance()
        name = self._advance()
        self._expect("=")
        e = self.expr()
        self._expect(";")
        combo = {}
        for (evens, odds), c in e.terms.items():
            if odds or len(evens) != 1 or evens[0][1] != 1 or evens[0][0][0] != COORD:
                raise ParseError("var must be a linear combination of coordinates",
                                 name.line, name.col)
            combo[evens[0][0][1]] = c
        lv = LinearVar.make(name.text, combo)
        self.symbols.variables[name.text] = lv
        return ("var", lv)

    def document(self):
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
        return stmts


def _rule_from(lhs: Expr, rhs: Expr) -> Rule:
    c, evens, odds = lhs.single()
    atoms = [a for a, p in evens if p == 1] + list(odds)
    if c != ONE or len(atoms) != len(evens) + len(odds) or len(atoms) not in (1, 2):
        raise ExprError("rule left side must be an atom or guard*atom")
    if len(atoms) == 1:
        return make_rule(atoms[0], rhs)
    guards = [a for a in atoms if a[0] == CONST and a[2] == 1]
    if not guards:
        raise ExprError("two-atom rule needs an odd constant guard")
    g = guards[0]
    pat = [a for a in atoms if a != g][0]
    # lhs = guard*pattern up to the sign fixed by atom order
    probe = Expr.atom(g) * Expr.atom(pat)
    sign = probe.single()[0]
    return make_rule(pat, rhs.scale(sign), guard=g)


def parse_expr(text: str, symbols: Symbols | None = None) -> Expr:
    p = Parser(text, symbols)
    e = p.expr()
    if p.tok.kind != "eof":
        raise p._err(f"trailing input {p.tok.text!r}")
    return e


# documents

@dataclass
class Document:
    symbols: Symbols
    statements: list

    @property
    def bindings(self):
        return {self._target(s[1]): s[2] for s in self.statements if s[0] == "bind"}

    def _target(self, name):
        if name in self.symbols.functions:
            return self.symbols.functions[name]
        return const_atom(name, self.symbols.constants[name])

    @property
    def rules(self):
        return [s[1] for s in self.statements if s[0] == "rule"]

    @property
    def goals(self):
        return [(s[1], s[2]) for s in self.statements if s[0] == "goal"]

    def evaluate_goals(self, max_passes=16):
        """Return ``[(goal_text, residual)]`` after bindings and rules."""
        from .calculus import substitute
        out = []
        b = self.bindings
        for lhs, rhs in self.goals:
            e = lhs if rhs is None else lhs - rhs
            if b:
                e = substitute(e, b)
            e = rewrite(e, self.rules, max_passes)
            text = format_expr(lhs) + ("" if rhs is None else " == " + format_expr(rhs))
            out.append((text, e))
        return out


def parse_document(text: str) -> Document:
    p = Parser(text)
    stmts = p.document()
    return Document(p.symbols, stmts)


def _arg_text(a):
    return a.name


def format_document(doc: Document) -> str:
    lines = []
    for s in doc.statements:
        kind = s[0]
        if kind == "decl":
            sym = s[1]
            args = [a.name for a in sym.args] + list(sym.odd_args)
            lines.append(f"{'odd' if sym.parity else 'even'} {sym.name}({','.join(args)});")
        elif kind == "const":
            lines.append(f"{'odd' if s[2] else 'even'} {s[1]};")
        elif kind == "var":
            lv = s[1]
            combo = Expr.const(0)
            for coord, re_, im_ in lv.combo:
                combo = combo + Expr.atom(coord_atom(coord)).scale(gq(re_, im_))
            lines.append(f"var {lv.name} = {format_expr(combo)};")
        elif kind in ("let", "bind"):
            lines.append(f"let {s[1]} = {format_expr(s[2])};")
        elif kind == "rule":
            r = s[1]
            lhs = Expr.atom(r.pattern)
            if r.guard is not None:
                lhs = Expr.atom(r.guard) * lhs
            rhs = r.replacement
            if r.guard is not None:
                sign = (Expr.atom(r.guard) * Expr.atom(r.pattern)).single()[0]
                rhs = rhs.scale(sign)
            lines.append(f"rule {format_expr(lhs)} -> {format_expr(rhs)};")
        elif kind == "goal":
            g = format_expr(s[1])
            if s[2] is not None:
                g += " == " + format_expr(s[2])
            lines.append(f"goal {g};")
    return "\n".join(lines) + "\n"


def symbols_for(exprs) -> Symbols:
    """Declarations sufficient to parse the printed form of ``exprs``."""
    s = Symbols()

    def visit(e):
        for a in e.atoms():
            if a[0] == FUNC:
                sym = a[3]
                s.functions[sym.name] = sym
                for arg in sym.args:
                    if not arg.is_base():
                        s.variables[arg.name] = arg
            elif a[0] == CONST:
                s.constants[a[1]] = a[2]
            elif a[0] == EXP:
                visit(a[2])

    for e in exprs:
        visit(e)
    return s


def declarations_text(s: Symbols) -> str:
    lines = []
    for name, lv in sorted(s.variables.items()):
        combo = Expr.const(0)
        for coord, re_, im_ in lv.combo:
            combo = combo + Expr.atom(coord_atom(coord)).scale(gq(re_, im_))
        lines.append(f"var {name} = {format_expr(combo)};")
    for name, p in sorted(s.constants.items()):
        lines.append(f"{'odd' if p else 'even'} {name};")
    for name, sym in sorted(s.functions.items()):
        args = [a.name for a in sym.args] + list(sym.odd_args)
        lines.append(f"{'odd' if sym.parity else 'even'} {name}({','.join(args)});")
    return "\n".join(lines) + "\n"


def roundtrip_ok(e: Expr) -> bool:
    """parse(print(e)) == e using declarations recovered from ``e``."""
    s = symbols_for([e])
    return parse_expr(format_expr(e), s) == e
