"""The ``.wconn`` model format: lexer, recursive-descent parser, printer.

A model declares a semiring, weighted ports, named terms and interaction
sets, and queries::

    semiring min-plus;
    port s = 2, r1 = 3, r2 = 5;
    wai z = s * (1 + r1) * (1 + r2);
    wac c = [s]' * [r1] * [r2];
    gamma g = {{s}, {s,r1}, {s,r2}, {s,r1,r2}};
    query eval c over g;

``*`` binds tighter than ``+``.  ``⊕``, ``⊗`` and ``′`` are accepted as
aliases.  In connectors a bare ``0``, ``1`` or port is a synchron.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .algebra import ONE, ZERO, One, Port, PortSet, Sync, Union, WaiTerm, Zero
from .connectors import Fusion, Hole, Typed, UnionC, WacTerm
from .semiring import (SEMIRING_NAMES, Semiring, SemiringError, format_value, get_semiring)


class DslError(Exception):
    """Base class; carries a 1-based source position when known."""

    exit_code = 1

    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 expected: frozenset = frozenset(), span: tuple[int, int] | None = None):
        self.message = message
        self.line, self.col = line, col
        self.expected = frozenset(expected)
        self.span = span
        super().__init__(str(self))

    def __str__(self):
        where = f"{self.line}:{self.col}: " if self.line is not None else ""
        exp = ""
        if self.expected:
            exp = " (expected " + ", ".join(sorted(self.expected)) + ")"
        return f"{where}{self.message}{exp}"


class ParseError(DslError):
    exit_code = 1


class ResolutionError(DslError):
    exit_code = 2


# -- lexer ------------------------------------------------------------------------

ALIASES = {"⊕": "+", "⊗": "*", "′": "'", "’": "'"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?|-inf\b)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<op>[+*\[\]'(){},;=⊕⊗′’])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, num, op, eof
    text: str
    line: int
    col: int
    pos: int

    def __str__(self):
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, span=(pos, pos + 1))
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            s = ALIASES.get(s, s)
            toks.append(Token(kind, s, line, col, pos))
        nl = s.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += m.end() - pos
        pos = m.end()
    toks.append(Token("eof", "", line, col, pos))
    return toks


# -- model -------------------------------------------------------------------------

@dataclass(frozen=True)
class Query:
    kind: str  # eval, equiv, congruent, table, scheme
    args: tuple
    mode: str | None = None
    line: int = 0


@dataclass
class Model:
    semiring_name: str | None = None
    universe: tuple[str, ...] | None = None
    ports: PortSet = field(default_factory=lambda: PortSet(()))
    wai: dict[str, WaiTerm] = field(default_factory=dict)
    wac: dict[str, WacTerm] = field(default_factory=dict)
    gammas: dict[str, frozenset] = field(default_factory=dict)
    queries: list[Query] = field(default_factory=list)

    @property
    def semiring(self) -> Semiring | None:
        if self.semiring_name is None:
            return None
        return get_semiring(self.semiring_name, self.universe)

    def term(self, name: str):
        """Look up a named term; returns ``("wai"|"wac", term)``."""
        if name in self.wai:
            return "wai", self.wai[name]
        if name in self.wac:
            return "wac", self.wac[name]
        raise ResolutionError(f"no term named {name!r}")

    def gamma(self, name: str) -> frozenset:
        if name in self.gammas:
            return self.gammas[name]
        if name == "empty":
            return frozenset()
        raise ResolutionError(f"no interaction set named {name!r}")


# -- parser ------------------------------------------------------------------------

class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.model = Model()
        self._ports: list[str] = []
        self._weights: dict[str, tuple[str, Token]] = {}
        self._names: dict[str, str] = {}
        self._checks: list = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, expected=(), tok=None, cls=ParseError):
        t = tok or self.tok
        return cls(msg, t.line, t.col, frozenset(expected), (t.pos, t.pos + max(1, len(t.text))))

    def at(self, text) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            raise self.error(f"unexpected {self.tok}", {repr(text)})
        return self.advance()

    def ident(self, what="identifier") -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"unexpected {self.tok}", {what})
        return self.advance()

    # model
    def parse_model(self) -> Model:
        while self.tok.kind != "eof":
            self.statement()
        self.finish()
        return self.model

    def statement(self):
        t = self.tok
        kw = t.text if t.kind == "ident" else None
        handlers = {"semiring": self.semiring_decl, "port": self.port_decl, "wai": self.wai_decl,
                    "wac": self.wac_decl, "gamma": self.gamma_decl, "query": self.query_decl}
        if kw not in handlers:
            raise self.error(f"unexpected {t}", set(handlers))
        self.advance()
        handlers[kw]()
        self.expect(";")

    def semiring_decl(self):
        t = self.ident("semiring name")
        if self.model.semiring_name is not None:
            raise self.error("semiring declared twice", tok=t, cls=ResolutionError)
        name = t.text.replace("_", "-")
        if name not in SEMIRING_NAMES:
            raise self.error(f"unknown semiring {t.text!r}", set(SEMIRING_NAMES), tok=t,
                             cls=ResolutionError)
        if name == "natural":
            raise self.error("the natural semiring is not idempotent and cannot weight connectors",
                             tok=t, cls=ResolutionError)
        if name == "powerset":
            self.expect("{")
            atoms = [] if self.at("}") else self.ident_list()
            self.expect("}")
            self.model.universe = tuple(atoms)
        self.model.semiring_name = name

    def ident_list(self) -> list[str]:
        out = [self.ident().text]
        while self.at(","):
            self.advance()
            out.append(self.ident().text)
        return out

    def declare(self, tok: Token, kind: str):
        if tok.text in ("0", "1"):
            raise self.error(f"{tok.text!r} is reserved", tok=tok, cls=ResolutionError)
        if tok.text in self._names:
            raise self.error(f"{tok.text!r} is already declared as a {self._names[tok.text]}",
                             tok=tok, cls=ResolutionError)
        self._names[tok.text] = kind

    def port_decl(self):
        while True:
            t = self.ident("port name")
            self.declare(t, "port")
            self._ports.append(t.text)
            if self.at("="):
                self.advance()
                self._weights[t.text] = self.value()
            if not self.at(","):
                break
            self.advance()

    def value(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return (float(t.text), t)
        if t.kind == "ident" and t.text in ("inf", "true", "false"):
            self.advance()
            return ({"inf": float("inf"), "true": True, "false": False}[t.text], t)
        if self.at("{"):
            self.advance()
            atoms = [] if self.at("}") else self.ident_list()
            self.expect("}")
            return (frozenset(atoms), t)
        raise self.error(f"unexpected {t}", {"number", "inf", "true", "false", "{"})

    def wai_decl(self):
        t = self.ident("term name")
        self.declare(t, "term")
        self.expect("=")
        self.model.wai[t.text] = self.wai_expr()

    def wac_decl(self):
        t = self.ident("term name")
        self.declare(t, "term")
        self.expect("=")
        self.model.wac[t.text] = self.wac_expr()

    def gamma_decl(self):
        t = self.ident("gamma name")
        self.declare(t, "gamma")
        self.expect("=")
        self.model.gammas[t.text] = self.gamma_lit()

    def gamma_lit(self) -> frozenset:
        self.expect("{")
        out = set()
        while not self.at("}"):
            out.add(self.interaction_lit())
            if not self.at(","):
                break
            self.advance()
        self.expect("}")
        return frozenset(out)

    def interaction_lit(self) -> frozenset:
        self.expect("{")
        names = []
        if not self.at("}"):
            for_tok = self.tok
            names = self.ident_list()
            self._checks.append(("ports", names, for_tok))
        self.expect("}")
        return frozenset(names)

    def query_decl(self):
        t = self.ident("query kind")
        kind = t.text
        if kind == "eval":
            term = self.ident("term name")
            self.expect("over")
            g = self.gamma_lit() if self.at("{") else self.ident("gamma name").text
            self._checks.append(("term", term.text, term))
            if isinstance(g, str):
                self._checks.append(("gamma", g, term))
            self.model.queries.append(Query("eval", (term.text, g), line=t.line))
        elif kind in ("equiv", "congruent"):
            a, b = self.ident("term name"), self.ident("term name")
            mode = None
            if kind == "equiv" and self.tok.kind == "ident" and self.tok.text in ("universal", "concrete"):
                mode = self.advance().text
            for x in (a, b):
                self._checks.append(("term", x.text, x))
            self.model.queries.append(Query(kind, (a.text, b.text), mode, line=t.line))
        elif kind == "table":
            term = self.ident("term name")
            self.expect("at")
            a = self.interaction_lit()
            self._checks.append(("term", term.text, term))
            self.model.queries.append(Query("table", (term.text, a), line=t.line))
        elif kind == "scheme":
            k = self.ident("scheme kind")
            names = [self.ident("port name").text]
            while self.tok.kind == "ident":
                names.append(self.advance().text)
            self.model.queries.append(Query("scheme", (k.text, names[0], tuple(names[1:])), line=t.line))
        else:
            raise self.error(f"unknown query {kind!r}", {"eval", "equiv", "congruent", "table", "scheme"}, tok=t)

    # wai terms
    def wai_expr(self) -> WaiTerm:
        z = self.wai_prod()
        while self.at("+"):
            self.advance()
            z = Union(z, self.wai_prod())
        return z

    def wai_prod(self) -> WaiTerm:
        z = self.wai_atom()
        while self.at("*"):
            self.advance()
            z = Sync(z, self.wai_atom())
        return z

    def wai_atom(self) -> WaiTerm:
        t = self.tok
        if t.kind == "num" and t.text in ("0", "1"):
            self.advance()
            return ZERO if t.text == "0" else ONE
        if t.kind == "ident":
            self.advance()
            if t.text in self.model.wai:
                return self.model.wai[t.text]
            self._checks.append(("port", t.text, t))
            return Port(t.text)
        if self.at("("):
            self.advance()
            z = self.wai_expr()
            self.expect(")")
            return z
        raise self.error(f"unexpected {t}", {"0", "1", "port", "("})

    # wac terms
    def wac_expr(self) -> WacTerm:
        z = self.wac_fusion()
        while self.at("+"):
            self.advance()
            z = UnionC(z, self.wac_fusion())
        return z

    def wac_fusion(self) -> WacTerm:
        start = self.tok
        parts = [self.wac_operand()]
        while self.at("*"):
            self.advance()
            parts.append(self.wac_operand())
        if len(parts) == 1:
            return parts[0]
        factors = []
        for p in parts:
            if isinstance(p, Fusion):
                factors.extend(p.factors)
            elif isinstance(p, (Typed, Hole)):
                factors.append(p)
            else:
                raise self.error("a union must be bracketed to be fused", {"[...]"}, tok=start)
        return Fusion(tuple(factors))

    def wac_operand(self) -> WacTerm:
        t = self.tok
        if self.at("["):
            self.advance()
            inner = self.wac_expr()
            self.expect("]")
            trigger = self.at("'")
            if trigger:
                self.advance()
            return Typed(trigger, _unwrap_bare(inner))
        if t.kind == "num" and t.text in ("0", "1"):
            self.advance()
            atom = ZERO if t.text == "0" else ONE
            if self.at("'"):
                # the constant notation 0' / 1' stands for [0]' / [1]'
                self.advance()
                return Typed(True, atom)
            return _Bare(False, atom)
        if t.kind == "ident":
            self.advance()
            if t.text in self.model.wac:
                return self.model.wac[t.text]
            if self.at("'"):
                raise self.error("a trigger mark needs brackets: write [p]'", tok=self.tok)
            self._checks.append(("port", t.text, t))
            return _Bare(False, Port(t.text))
        if self.at("("):
            self.advance()
            z = self.wac_expr()
            self.expect(")")
            return z
        raise self.error(f"unexpected {t}", {"[", "0", "1", "port", "("})

    # resolution
    def finish(self):
        m = self.model
        known = set(self._ports)
        for kind, val, tok in self._checks:
            if kind == "port":
                if val not in known:
                    raise self.error(f"unknown port {val!r}", tok=tok, cls=ResolutionError)
            elif kind == "ports":
                for p in val:
                    if p not in known:
                        raise self.error(f"unknown port {p!r}", tok=tok, cls=ResolutionError)
            elif kind == "term":
                if val not in m.wai and val not in m.wac:
                    raise self.error(f"no term named {val!r}", tok=tok, cls=ResolutionError)
            elif kind == "gamma":
                if val not in m.gammas and val != "empty":
                    raise self.error(f"no interaction set named {val!r}", tok=tok, cls=ResolutionError)
        weights = {}
        s = None
        if m.semiring_name is not None:
            s = get_semiring(m.semiring_name, m.universe)
        for p, (v, tok) in self._weights.items():
            if s is None:
                raise self.error("weights need a semiring declaration first", tok=tok, cls=ResolutionError)
            try:
                if s.name == "boolean" and isinstance(v, float) and v in (0.0, 1.0):
                    v = bool(v)
                if s.name == "natural" and isinstance(v, float) and v.is_integer():
                    v = int(v)
                weights[p] = s.check(v)
            except SemiringError as e:
                raise self.error(f"weight of {p!r}: {e}", tok=tok, cls=ResolutionError) from None
        m.ports = PortSet(tuple(self._ports), weights)
        m.wac = {k: _strip_bare(v) for k, v in m.wac.items()}


class _Bare(Typed):
    """A bare atom inside a connector; a synchron unless it gets bracketed."""


def _unwrap_bare(z):
    # [p] must not become [[p]]: a bracketed bare atom is just the atom
    if isinstance(z, _Bare):
        return z.body
    return _strip_bare(z)


def _strip_bare(z):
    if isinstance(z, _Bare):
        return Typed(False, z.body)
    if isinstance(z, Typed):
        return Typed(z.trigger, z.body if z.is_atom else _strip_bare(z.body))
    if isinstance(z, UnionC):
        return UnionC(_strip_bare(z.left), _strip_bare(z.right))
    if isinstance(z, Fusion):
        return Fusion(tuple(_strip_bare(f) for f in z.factors))
    return z


def parse(text: str) -> Model:
    """Parse and resolve a whole model."""
    return Parser(text).parse_model()


def _term_parser(text: str, model: Model | None) -> Parser:
    p = Parser(text)
    if model is not None:
        p.model.wai = dict(model.wai)
        p.model.wac = dict(model.wac)
    return p


def _declared(model: Model | None, p: Parser):
    known = set(model.ports.ports) if model is not None else None
    for k, val, tok in p._checks:
        if k == "port" and known is not None and val not in known:
            raise p.error(f"unknown port {val!r}", tok=tok, cls=ResolutionError)


def parse_wai(text: str, model: Model | None = None) -> WaiTerm:
    """Parse one interaction term.  Ports are checked against ``model`` if given."""
    p = _term_parser(text, model)
    z = p.wai_expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok}", {"+", "*", "end of input"})
    _declared(model, p)
    return z


def parse_wac(text: str, model: Model | None = None) -> WacTerm:
    """Parse one connector."""
    p = _term_parser(text, model)
    z = p.wac_expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok}", {"+", "*", "end of input"})
    _declared(model, p)
    return _strip_bare(z)


def parse_gamma(text: str, model: Model | None = None) -> frozenset:
    p = _term_parser(text, model)
    g = p.gamma_lit()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok}", {"end of input"})
    _declared(model, p)
    if model is not None:
        for a in g:
            for port in a:
                if port not in model.ports:
                    raise ResolutionError(f"unknown port {port!r}")
    return g


def parse_interaction(text: str, model: Model | None = None) -> frozenset:
    p = _term_parser(text, model)
    a = p.interaction_lit()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok}", {"end of input"})
    if model is not None:
        for port in a:
            if port not in model.ports:
                raise ResolutionError(f"unknown port {port!r}")
    return a


# -- printer -------------------------------------------------------------------------

def pretty_wai(z: WaiTerm, prec: int = 0) -> str:
    if isinstance(z, Zero):
        return "0"
    if isinstance(z, One):
        return "1"
    if isinstance(z, Port):
        return z.name
    if isinstance(z, Union):
        s = pretty_wai(z.left, 1) + " + " + pretty_wai(z.right, 2)
        return f"({s})" if prec > 1 else s
    if isinstance(z, Sync):
        s = pretty_wai(z.left, 2) + " * " + pretty_wai(z.right, 3)
        return f"({s})" if prec > 2 else s
    raise TypeError(f"not a wAI term: {z!r}")


def pretty_wac(z, prec: int = 0) -> str:
    if isinstance(z, (Zero, One, Port)):
        return pretty_wai(z)
    if isinstance(z, Hole):
        return z.name
    if isinstance(z, Typed):
        return "[" + pretty_wac(z.body) + "]" + ("'" if z.trigger else "")
    if isinstance(z, Fusion):
        return " * ".join(pretty_wac(f) for f in z.factors)
    if isinstance(z, UnionC):
        s = pretty_wac(z.left, 1) + " + " + pretty_wac(z.right, 2)
        return f"({s})" if prec > 1 else s
    raise TypeError(f"not a connector: {z!r}")


def pretty_interaction(a, order=None) -> str:
    rank = {p: i for i, p in enumerate(order or ())}
    return "{" + ", ".join(sorted(a, key=lambda p: (rank.get(p, len(rank)), p))) + "}"


def pretty_gamma(g, order=None) -> str:
    rank = {p: i for i, p in enumerate(order or ())}
    key = lambda a: (len(a), sorted((rank.get(p, len(rank)), p) for p in a))
    return "{" + ", ".join(pretty_interaction(a, order) for a in sorted(g, key=key)) + "}"


def pretty_model(m: Model) -> str:
    out = []
    if m.semiring_name:
        if m.semiring_name == "powerset":
            out.append(f"semiring powerset {{{', '.join(m.universe or ())}}};")
        else:
            out.append(f"semiring {m.semiring_name};")
    s = m.semiring
    for p in m.ports.ports:
        w = (m.ports.weights or {}).get(p)
        out.append(f"port {p};" if w is None else f"port {p} = {format_value(s, w)};")
    for name, z in m.wai.items():
        out.append(f"wai {name} = {pretty_wai(z)};")
    for name, z in m.wac.items():
        out.append(f"wac {name} = {pretty_wac(z)};")
    order = m.ports.ports
    for name, g in m.gammas.items():
        out.append(f"gamma {name} = {pretty_gamma(g, order)};")
    for q in m.queries:
        out.append("query " + pretty_query(q, order) + ";")
    return "\n".join(out) + "\n"


def pretty_query(q: Query, order=None) -> str:
    if q.kind == "eval":
        term, g = q.args
        return f"eval {term} over " + (g if isinstance(g, str) else pretty_gamma(g, order))
    if q.kind in ("equiv", "congruent"):
        return f"{q.kind} {q.args[0]} {q.args[1]}" + (f" {q.mode}" if q.mode else "")
    if q.kind == "table":
        return f"table {q.args[0]} at {pretty_interaction(q.args[1], order)}"
    kind, sender, receivers = q.args
    return " ".join(("scheme", kind, sender) + tuple(receivers))


def pretty(x) -> str:
    """Print a term, connector or model in canonical text form."""
    if isinstance(x, Model):
        return pretty_model(x)
    if isinstance(x, WaiTerm):
        return pretty_wai(x)
    return pretty_wac(x)
