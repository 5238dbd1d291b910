"""Recursive-descent parser from tokens to an unresolved syntax tree.

Name resolution happens later (see :mod:`gatkit.surface.elaborate`); this
module only knows the shape of declarations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import GatSyntaxError
from .lexer import EOF, NAME, NEWLINE, OP, PUNCT, STRING, Token, tokenize

Span = tuple[int, int]


# -- raw expressions ---------------------------------------------------------

@dataclass(frozen=True)
class RName:
    name: str
    span: Span


@dataclass(frozen=True)
class RApp:
    name: str
    args: tuple
    span: Span


@dataclass(frozen=True)
class RBin:
    op: str
    left: object
    right: object
    span: Span


@dataclass(frozen=True)
class RTyped:
    name: str
    type: object
    span: Span


@dataclass(frozen=True)
class RBinding:
    name: str
    type: object | None
    span: Span


# -- raw declarations --------------------------------------------------------

@dataclass
class RTypecon:
    lhs: object
    ctx: list[RBinding] | None
    span: Span


@dataclass
class RTermcon:
    lhs: object
    type: object
    ctx: list[RBinding] | None
    span: Span


@dataclass
class RAxiom:
    name: str | None
    lhs: object
    rhs: object
    ctx: list[RBinding] | None
    span: Span


@dataclass
class RAlias:
    symbol: str
    target: str
    span: Span


@dataclass
class RUsing:
    theory: str
    renames: list[tuple[str, str]]
    span: Span


@dataclass
class RPolicy:
    op: str
    assoc: bool
    unit: str | None
    span: Span


@dataclass
class RSegmentBreak:
    span: Span


@dataclass
class RTheory:
    name: str
    parent: str | None
    lines: list
    span: Span


@dataclass
class RClause:
    lhs: object
    ctx: list[RBinding] | None
    rhs: object
    span: Span


@dataclass
class RMap:
    name: str
    dom: str
    codom: str
    clauses: list[RClause]
    span: Span


@dataclass
class RTermInCtx:
    term: object
    ctx: list[RBinding] | None
    span: Span = field(default=(1, 1))


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0

    # -- token helpers -------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, kind, value=None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def at_punct(self, value) -> bool:
        return self.at(PUNCT, value)

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, kind, value=None) -> Token:
        if not self.at(kind, value):
            want = value if value is not None else kind.lower()
            got = self.tok.value if self.tok.kind != EOF else "end of input"
            if self.tok.kind == NEWLINE:
                got = "end of line"
            raise GatSyntaxError(f"expected {want!r}, found {got!r}", span=self.tok.span)
        return self.advance()

    def skip_newlines(self):
        while self.at(NEWLINE) or self.at_punct(";"):
            self.advance()

    def end_statement(self):
        if self.at(NEWLINE) or self.at_punct(";"):
            self.skip_newlines()
        elif not (self.at_punct("}") or self.at(EOF)):
            raise GatSyntaxError(f"unexpected {self.tok.value!r}", span=self.tok.span)

    # -- expressions ---------------------------------------------------------
    def parse_expr(self, typed: bool = False):
        left = self.parse_operand(typed)
        while self.at(OP):
            op = self.advance()
            right = self.parse_operand(typed)
            left = RBin(op.value, left, right, op.span)
        return left

    def parse_operand(self, typed: bool):
        t = self.tok
        if t.kind == NAME:
            self.advance()
            if self.at_punct("("):
                args = self.parse_args()
                return RApp(t.value, args, t.span)
            if typed and self.at_punct("::"):
                self.advance()
                return RTyped(t.value, self.parse_operand(False), t.span)
            return RName(t.value, t.span)
        if t.kind == PUNCT and t.value == "(":
            # (OP)(args) names an operator in prefix position
            if self.peek().kind == OP and self.peek(2).kind == PUNCT and self.peek(2).value == ")":
                self.advance()
                op = self.advance()
                self.advance()
                if self.at_punct("("):
                    return RApp(op.value, self.parse_args(), op.span)
                return RName(op.value, op.span)
            self.advance()
            inner = self.parse_expr(typed=True)
            self.expect(PUNCT, ")")
            return inner
        if t.kind == STRING:
            raise GatSyntaxError("string literals are not terms", span=t.span)
        raise GatSyntaxError(f"expected a term, found {t.value or 'end of input'!r}", span=t.span)

    def parse_args(self) -> tuple:
        self.expect(PUNCT, "(")
        args = []
        if not self.at_punct(")"):
            while True:
                args.append(self.parse_arg())
                if self.at_punct(","):
                    self.advance()
                    continue
                break
        self.expect(PUNCT, ")")
        return tuple(args)

    def parse_arg(self):
        if self.at(NAME) and self.peek().kind == PUNCT and self.peek().value == "::":
            name = self.advance()
            self.advance()
            return RTyped(name.value, self.parse_expr(), name.span)
        return self.parse_expr(typed=True)

    def parse_ctx(self) -> list[RBinding]:
        self.expect(PUNCT, "[")
        out: list[RBinding] = []
        if not self.at_punct("]"):
            while True:
                out.extend(self.parse_binding())
                if self.at_punct(","):
                    self.advance()
                    continue
                break
        self.expect(PUNCT, "]")
        return out

    def parse_binding(self) -> list[RBinding]:
        if self.at_punct("("):
            self.advance()
            names = [self.expect(NAME)]
            while self.at_punct(","):
                self.advance()
                names.append(self.expect(NAME))
            self.expect(PUNCT, ")")
            ty = None
            if self.at_punct("::"):
                self.advance()
                ty = self.parse_expr()
            return [RBinding(n.value, ty, n.span) for n in names]
        name = self.expect(NAME)
        ty = None
        if self.at_punct("::"):
            self.advance()
            ty = self.parse_expr()
        return [RBinding(name.value, ty, name.span)]

    def parse_turnstile(self):
        if self.at_punct("⊣"):
            self.advance()
            return self.parse_ctx()
        return None

    # -- declarations --------------------------------------------------------
    def parse_file(self) -> list:
        decls = []
        self.skip_newlines()
        while not self.at(EOF):
            t = self.tok
            if t.kind == NAME and t.value == "theory":
                decls.append(self.parse_theory())
            elif t.kind == NAME and t.value == "map":
                decls.append(self.parse_map())
            else:
                raise GatSyntaxError(f"expected 'theory' or 'map', found {t.value!r}", span=t.span)
            self.skip_newlines()
        return decls

    def parse_theory(self) -> RTheory:
        kw = self.expect(NAME, "theory")
        name = self.expect(NAME).value
        parent = None
        if self.at(NAME, "extends") or self.at_punct("<:"):
            self.advance()
            parent = self.expect(NAME).value
        self.expect(PUNCT, "{")
        self.skip_newlines()
        lines = []
        while not self.at_punct("}"):
            if self.at(EOF):
                raise GatSyntaxError(f"unterminated theory {name}", span=kw.span)
            lines.append(self.parse_line())
            self.end_statement()
        self.advance()
        return RTheory(name, parent, lines, kw.span)

    def parse_line(self):
        t = self.tok
        nxt = self.peek()
        if t.kind == NAME and t.value == "alias" and nxt.kind == OP:
            self.advance()
            sym = self.advance().value
            self.expect(PUNCT, "=")
            return RAlias(sym, self.expect(NAME).value, t.span)
        if t.kind == NAME and t.value == "@op":
            self.advance()
            self.expect(PUNCT, "(")
            sym = self.expect(OP).value
            self.expect(PUNCT, ")")
            self.expect(PUNCT, ":=")
            return RAlias(sym, self.expect(NAME).value, t.span)
        if t.kind == NAME and t.value == "using" and nxt.kind == NAME:
            return self.parse_using()
        if t.kind == NAME and t.value == "normalize" and (
            nxt.kind in (NAME, OP) or (nxt.value == "(" and self.peek(2).kind == OP)
        ):
            return self.parse_policy()
        if t.kind == NAME and t.value == "segment" and nxt.kind in (NEWLINE, EOF):
            self.advance()
            return RSegmentBreak(t.span)
        if t.kind == NAME and nxt.kind == PUNCT and nxt.value == ":=":
            self.advance()
            self.advance()
            lhs = self.parse_expr()
            self.expect(PUNCT, "==")
            rhs = self.parse_expr()
            return RAxiom(t.value, lhs, rhs, self.parse_turnstile(), t.span)
        lhs = self.parse_expr()
        if self.at_punct("=="):
            self.advance()
            rhs = self.parse_expr()
            return RAxiom(None, lhs, rhs, self.parse_turnstile(), t.span)
        self.expect(PUNCT, "::")
        if self.at(NAME, "TYPE"):
            self.advance()
            return RTypecon(lhs, self.parse_turnstile(), t.span)
        ty = self.parse_expr()
        return RTermcon(lhs, ty, self.parse_turnstile(), t.span)

    def parse_using(self) -> RUsing:
        kw = self.advance()
        theory = self.expect(NAME).value
        renames = []
        if self.at_punct(":"):
            self.advance()
            while True:
                old = self.advance()
                if old.kind not in (NAME, OP):
                    raise GatSyntaxError("expected a name to rename", span=old.span)
                self.expect(NAME, "as")
                new = self.advance()
                if new.kind not in (NAME, OP):
                    raise GatSyntaxError("expected a new name", span=new.span)
                renames.append((old.value, new.value))
                if self.at_punct(","):
                    self.advance()
                    continue
                break
        return RUsing(theory, renames, kw.span)

    def parse_policy(self) -> RPolicy:
        kw = self.advance()
        if self.at_punct("("):
            self.advance()
            op = self.expect(OP).value
            self.expect(PUNCT, ")")
        elif self.at(OP):
            op = self.advance().value
        else:
            op = self.expect(NAME).value
        assoc, unit = False, None
        while self.at(NAME, "assoc") or self.at(NAME, "unit"):
            word = self.advance().value
            if word == "assoc":
                assoc = True
            else:
                unit = self.expect(NAME).value
        if not assoc and unit is None:
            raise GatSyntaxError("normalize needs 'assoc' and/or 'unit NAME'", span=kw.span)
        return RPolicy(op, assoc, unit, kw.span)

    def parse_map(self) -> RMap:
        kw = self.expect(NAME, "map")
        name = self.expect(NAME).value
        self.expect(PUNCT, "(")
        dom = self.expect(NAME).value
        self.expect(PUNCT, ",")
        codom = self.expect(NAME).value
        self.expect(PUNCT, ")")
        self.expect(PUNCT, "{")
        self.skip_newlines()
        clauses = []
        while not self.at_punct("}"):
            if self.at(EOF):
                raise GatSyntaxError(f"unterminated map {name}", span=kw.span)
            start = self.tok
            lhs = self.parse_expr()
            ctx = self.parse_turnstile()
            self.expect(PUNCT, "=>")
            rhs = self.parse_expr()
            clauses.append(RClause(lhs, ctx, rhs, start.span))
            self.end_statement()
        self.advance()
        return RMap(name, dom, codom, clauses, kw.span)

    def parse_term_in_ctx(self) -> RTermInCtx:
        self.skip_newlines()
        start = self.tok
        term = self.parse_expr()
        ctx = self.parse_turnstile()
        self.skip_newlines()
        if not self.at(EOF):
            raise GatSyntaxError(f"unexpected {self.tok.value!r}", span=self.tok.span)
        return RTermInCtx(term, ctx, start.span)


def parse_source(src: str) -> list:
    return Parser(src).parse_file()


def parse_raw_term(src: str) -> RTermInCtx:
    return Parser(src).parse_term_in_ctx()
