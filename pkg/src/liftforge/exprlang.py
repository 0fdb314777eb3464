"""Parser, evaluator and printer for composition expressions.

Grammar (whitespace-insensitive):

    expr  = atom { ("∘" | "o") atom }
    atom  = "(" expr ")" | lstring
    lstring = one or more of 0 1 - ★ *

Chains associate left to right as written; the rightmost atom is applied
first.  Nested parenthesized sub-chains are accepted and flattened.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .corefn import LiftforgeError, Rule
from .landscape import Landscape, compile_landscape, parse_landscape
from .lifting import DEFAULT_ARITY_CAP, compose_chain

COMPOSE = "∘"


class ExprSyntaxError(LiftforgeError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Atom:
    landscape: Landscape


@dataclass(frozen=True)
class Compose:
    left: "LiftExpr"
    right: "LiftExpr"


LiftExpr = Union[Atom, Compose]

_LCHARS = "01-★*"


def _flatten(e: LiftExpr) -> list[Landscape]:
    if isinstance(e, Atom):
        return [e.landscape]
    return _flatten(e.left) + _flatten(e.right)


def atoms(e: LiftExpr) -> list[Landscape]:
    """The expression's atoms, leftmost (applied last) first."""
    return _flatten(e)


def _chain(parts: list[LiftExpr]) -> LiftExpr:
    acc = parts[0]
    for p in parts[1:]:
        acc = Compose(acc, p)
    return acc


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def _ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def _peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def parse(self) -> LiftExpr:
        e = self.expr()
        self._ws()
        if self.i < len(self.text):
            raise ExprSyntaxError(f"trailing input {self.text[self.i]!r}", self.i)
        return e

    def expr(self) -> LiftExpr:
        parts = [self.atom()]
        while True:
            self._ws()
            ch = self._peek()
            if ch == COMPOSE or ch == "o":
                self.i += 1
                parts.append(self.atom())
            else:
                break
        # left-associative chain; sub-chains splice in flat
        flat: list[LiftExpr] = []
        for p in parts:
            if isinstance(p, Compose):
                flat.extend(Atom(l) for l in _flatten(p))
            else:
                flat.append(p)
        return _chain(flat)

    def atom(self) -> LiftExpr:
        self._ws()
        ch = self._peek()
        if ch == "(":
            open_at = self.i
            self.i += 1
            inner = self.expr()
            self._ws()
            if self._peek() != ")":
                raise ExprSyntaxError("unbalanced parenthesis", open_at)
            self.i += 1
            return inner
        start = self.i
        while self._peek() in _LCHARS and self._peek():
            self.i += 1
        if self.i == start:
            got = repr(ch) if ch else "end of input"
            raise ExprSyntaxError(f"expected a landscape or '(', got {got}", self.i)
        try:
            return Atom(parse_landscape(self.text[start : self.i]))
        except LiftforgeError as exc:
            raise ExprSyntaxError(str(exc), start) from exc


def parse_expr(text: str) -> LiftExpr:
    return _Parser(text).parse()


def eval_expr(e: LiftExpr, arity_cap: int = DEFAULT_ARITY_CAP) -> Rule:
    """Fold the chain into a single normalized rule (rightmost applied first)."""
    return compose_chain([compile_landscape(l) for l in _flatten(e)], arity_cap)


def print_expr(e: LiftExpr, ascii: bool = False) -> str:
    parts = [f"({l.symbols})" for l in _flatten(e)]
    out = COMPOSE.join(parts)
    if ascii:
        out = out.replace("★", "*").replace(COMPOSE, "o")
    return out
