"""Concrete syntax for .bitt files: parser and pretty-printer.

The grammar is whitespace-insensitive. Arrows are sugar for non-dependent
products and associate to the right; applications and the keyword forms
(succ, Eq, refl, pair, sigrec, natrec, eqrec) take atomic arguments, so
`Eq Nat zero zero` works unparenthesized while compound arguments need
parens. `--` starts a line comment. Name resolution to de Bruijn indices
happens during parsing; unknown names fail with their position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    App,
    Eq,
    EqRec,
    Lambda,
    Nat,
    NatRec,
    Pair,
    Pi,
    Refl,
    Sigma,
    SigRec,
    Sort,
    Succ,
    Term,
    Var,
    Zero,
    lift,
    occurs_free,
    subst,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.reason = message
        self.line = line
        self.col = col


class UnboundName(ParseError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"unbound name {name!r}", line, col)
        self.name = name


@dataclass(frozen=True)
class Definition:
    name: str
    annotation: Term | None
    body: Term


@dataclass(frozen=True)
class SourceFile:
    definitions: tuple[Definition, ...]


KEYWORDS = {
    "def",
    "fun",
    "Sig",
    "pair",
    "sigrec",
    "Nat",
    "zero",
    "succ",
    "natrec",
    "Eq",
    "refl",
    "eqrec",
    "Type",
}

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+|--[^\n]*)
    | (?P<sort>Type[0-9]+)
    | (?P<ident>[^\W\d]\w*'*)
    | (?P<punct>:=|=>|->|[():.])
    """,
    re.VERBOSE | re.UNICODE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'sort' | 'ident' | 'punct' | 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Tok:
        i = min(self.pos + ahead, len(self.toks) - 1)
        return self.toks[i]

    def next(self) -> _Tok:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def err(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            self.err(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.next()

    def ident(self) -> _Tok:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.err(f"expected an identifier, found {tok.text or 'end of input'!r}")
        return self.next()

    # --- terms -----------------------------------------------------------

    def term(self, env: tuple[str, ...]) -> Term:
        tok = self.peek()
        if tok.text == "fun":
            self.next()
            self.expect("(")
            x = self.ident()
            self.expect(":")
            dom = self.term(env)
            self.expect(")")
            self.expect("=>")
            body = self.term((x.text, *env))
            return Lambda(dom, body)
        if tok.text == "Sig":
            self.next()
            self.expect("(")
            x = self.ident()
            self.expect(":")
            first = self.term(env)
            self.expect(")")
            self.expect(".")
            second = self.term((x.text, *env))
            return Sigma(first, second)
        if (
            tok.text == "("
            and self.peek(1).kind == "ident"
            and self.peek(1).text not in KEYWORDS
            and self.peek(2).text == ":"
        ):
            self.next()
            x = self.ident()
            self.expect(":")
            dom = self.term(env)
            self.expect(")")
            self.expect("->")
            cod = self.term((x.text, *env))
            return Pi(dom, cod)
        t = self.app(env)
        if self.peek().text == "->":
            self.next()
            cod = self.term(env)
            return Pi(t, lift(cod, 1))
        return t

    def _starts_atomic(self, tok: _Tok) -> bool:
        return (
            tok.kind in ("ident", "sort")
            or tok.text == "("
        ) and tok.text not in ("def",)

    def app(self, env) -> Term:
        t = self.atomic(env)
        while self._starts_atomic(self.peek()):
            t = App(t, self.atomic(env))
        return t

    def atomic(self, env) -> Term:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            t = self.term(env)
            self.expect(")")
            return t
        if tok.kind == "sort":
            self.next()
            return Sort(int(tok.text[len("Type") :]))
        if tok.kind != "ident":
            self.err(f"expected a term, found {tok.text or 'end of input'!r}")
        match tok.text:
            case "Nat":
                self.next()
                return Nat()
            case "zero":
                self.next()
                return Zero()
            case "succ":
                self.next()
                return Succ(self.atomic(env))
            case "natrec":
                self.next()
                z, motive = self.binder1(env)
                base = self.atomic(env)
                _, _, step = self.binder2(env)
                scrut = self.atomic(env)
                return NatRec(motive, base, step, scrut)
            case "sigrec":
                self.next()
                z, motive = self.binder1(env)
                _, _, branch = self.binder2(env)
                scrut = self.atomic(env)
                return SigRec(motive, branch, scrut)
            case "Eq":
                self.next()
                return Eq(self.atomic(env), self.atomic(env), self.atomic(env))
            case "refl":
                self.next()
                return Refl(self.atomic(env), self.atomic(env))
            case "eqrec":
                self.next()
                _, _, motive = self.binder2(env)
                branch = self.atomic(env)
                scrut = self.atomic(env)
                return EqRec(motive, branch, scrut)
            case "pair":
                self.next()
                self.expect("(")
                x = self.ident()
                self.expect(":")
                first_ty = self.term(env)
                self.expect("=>")
                second_ty = self.term((x.text, *env))
                self.expect(")")
                fst = self.atomic(env)
                snd = self.atomic(env)
                return Pair(first_ty, second_ty, fst, snd)
            case "fun" | "Sig" | "def" | "Type":
                self.err(f"{tok.text!r} cannot start an atomic term")
            case name:
                self.next()
                try:
                    return Var(env.index(name))
                except ValueError:
                    raise UnboundName(name, tok.line, tok.col) from None

    def binder1(self, env) -> tuple[str, Term]:
        self.expect("(")
        x = self.ident()
        self.expect("=>")
        body = self.term((x.text, *env))
        self.expect(")")
        return x.text, body

    def binder2(self, env) -> tuple[str, str, Term]:
        self.expect("(")
        x = self.ident()
        y = self.ident()
        self.expect("=>")
        body = self.term((y.text, x.text, *env))
        self.expect(")")
        return x.text, y.text, body

    # --- files -----------------------------------------------------------

    def source_file(self) -> SourceFile:
        defs: list[Definition] = []
        names: list[str] = []
        while self.peek().kind != "eof":
            tok = self.expect("def")
            name = self.ident()
            if name.text in names:
                self.err(f"duplicate definition {name.text!r}", name)
            env = tuple(reversed(names))
            annotation = None
            if self.peek().text == ":":
                self.next()
                annotation = self.term(env)
            self.expect(":=")
            body = self.term(env)
            self.expect(".")
            defs.append(Definition(name.text, annotation, body))
            names.append(name.text)
        return SourceFile(tuple(defs))


def parse(text: str) -> SourceFile:
    """Parse a .bitt source file: a sequence of definitions."""
    return _Parser(text).source_file()


def parse_expr(text: str) -> Term:
    """Parse a single closed expression."""
    p = _Parser(text)
    t = p.term(())
    if p.peek().kind != "eof":
        p.err(f"trailing input {p.peek().text!r}")
    return t


# --- printing -------------------------------------------------------------

_PREC_TERM, _PREC_APP, _PREC_ATOM = 0, 1, 2


class _Printer:
    def __init__(self, free_names: tuple[str, ...]):
        self.used = set(free_names) | KEYWORDS
        self.counter = 0

    def fresh(self) -> str:
        while True:
            name = f"x{self.counter}"
            self.counter += 1
            if name not in self.used:
                self.used.add(name)
                return name

    def pp(self, t: Term, env: tuple[str, ...], prec: int) -> str:
        match t:
            case Var(k):
                return env[k] if k < len(env) else f"_free{k - len(env)}"
            case Sort(i):
                return f"Type{i}"
            case Nat():
                return "Nat"
            case Zero():
                return "zero"
            case Pi(dom, cod):
                if occurs_free(cod, 0):
                    x = self.fresh()
                    body = self.pp(cod, (x, *env), _PREC_TERM)
                    s = f"({x} : {self.pp(dom, env, _PREC_TERM)}) -> {body}"
                else:
                    lhs = self.pp(dom, env, _PREC_APP)
                    rhs = self.pp(subst(cod, Sort(0)), env, _PREC_TERM)
                    s = f"{lhs} -> {rhs}"
                return self.wrap(s, prec, _PREC_TERM)
            case Lambda(dom, body):
                x = self.fresh()
                s = (
                    f"fun ({x} : {self.pp(dom, env, _PREC_TERM)}) => "
                    f"{self.pp(body, (x, *env), _PREC_TERM)}"
                )
                return self.wrap(s, prec, _PREC_TERM)
            case Sigma(first, second):
                x = self.fresh()
                s = (
                    f"Sig ({x} : {self.pp(first, env, _PREC_TERM)}) . "
                    f"{self.pp(second, (x, *env), _PREC_TERM)}"
                )
                return self.wrap(s, prec, _PREC_TERM)
            case App(head, arg):
                s = f"{self.pp(head, env, _PREC_APP)} {self.pp(arg, env, _PREC_ATOM)}"
                return self.wrap(s, prec, _PREC_APP)
            case Succ(pred):
                s = f"succ {self.pp(pred, env, _PREC_ATOM)}"
                return self.wrap(s, prec, _PREC_APP)
            case Pair(first_ty, second_ty, fst, snd):
                x = self.fresh()
                s = (
                    f"pair ({x} : {self.pp(first_ty, env, _PREC_TERM)} => "
                    f"{self.pp(second_ty, (x, *env), _PREC_TERM)}) "
                    f"{self.pp(fst, env, _PREC_ATOM)} {self.pp(snd, env, _PREC_ATOM)}"
                )
                return self.wrap(s, prec, _PREC_APP)
            case SigRec(motive, branch, scrut):
                z = self.fresh()
                x = self.fresh()
                y = self.fresh()
                s = (
                    f"sigrec ({z} => {self.pp(motive, (z, *env), _PREC_TERM)}) "
                    f"({x} {y} => {self.pp(branch, (y, x, *env), _PREC_TERM)}) "
                    f"{self.pp(scrut, env, _PREC_ATOM)}"
                )
                return self.wrap(s, prec, _PREC_APP)
            case NatRec(motive, base, step_, scrut):
                z = self.fresh()
                x = self.fresh()
                p = self.fresh()
                s = (
                    f"natrec ({z} => {self.pp(motive, (z, *env), _PREC_TERM)}) "
                    f"{self.pp(base, env, _PREC_ATOM)} "
                    f"({x} {p} => {self.pp(step_, (p, x, *env), _PREC_TERM)}) "
                    f"{self.pp(scrut, env, _PREC_ATOM)}"
                )
                return self.wrap(s, prec, _PREC_APP)
            case Eq(ty, lhs, rhs):
                s = (
                    f"Eq {self.pp(ty, env, _PREC_ATOM)} "
                    f"{self.pp(lhs, env, _PREC_ATOM)} {self.pp(rhs, env, _PREC_ATOM)}"
                )
                return self.wrap(s, prec, _PREC_APP)
            case Refl(ty, val):
                s = f"refl {self.pp(ty, env, _PREC_ATOM)} {self.pp(val, env, _PREC_ATOM)}"
                return self.wrap(s, prec, _PREC_APP)
            case EqRec(motive, branch, scrut):
                x = self.fresh()
                z = self.fresh()
                s = (
                    f"eqrec ({x} {z} => {self.pp(motive, (z, x, *env), _PREC_TERM)}) "
                    f"{self.pp(branch, env, _PREC_ATOM)} "
                    f"{self.pp(scrut, env, _PREC_ATOM)}"
                )
                return self.wrap(s, prec, _PREC_APP)
        raise AssertionError(f"unprintable term {t!r}")

    @staticmethod
    def wrap(s: str, have: int, need: int) -> str:
        return f"({s})" if need < have else s


def print_term(t: Term, names: tuple[str, ...] = ()) -> str:
    """Render t; `names` label its free variables, innermost first.

    Bound variables get fresh names x0, x1, ...; parse(print_term(t)) is
    alpha-equal to t for closed terms.
    """
    return _Printer(names).pp(t, names, _PREC_TERM)
