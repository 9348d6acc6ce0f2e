"""Group words with integer, rational and truncated p-adic exponents.

Text grammar::

    expr     := term+                      juxtaposition is the product
    term     := atom ('^' exponent)?
    atom     := name | '(' expr ')' | '[' expr ',' expr ']' | '1'
    exponent := int | '(' int ')' | '(' int '/' posint ')' | 'Zp(' int ';' posint ')'

``[u, v]`` denotes ``u v u^-1 v^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import NotInvertible, ParseError, UnknownGenerator

__all__ = [
    "PadicLiteral",
    "Gen",
    "Product",
    "Power",
    "Commutator",
    "IDENTITY",
    "WordExpr",
    "parse",
    "to_text",
    "free_reduce",
    "letters_to_text",
    "parse_letters",
    "substitute",
    "inverse",
    "generators_of",
    "is_integral",
    "to_json",
    "from_json",
]


@dataclass(frozen=True)
class PadicLiteral:
    """``Zp(v;k)``: a p-adic exponent known modulo p**k, p fixed later."""

    value: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("p-adic precision must be positive")

    def bind(self, p: int):
        from .scalars import TruncatedPadic

        return TruncatedPadic(p, self.precision, self.value)


Exponent = Union[int, Fraction, PadicLiteral]


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Product:
    factors: tuple = ()


@dataclass(frozen=True)
class Power:
    base: "WordExpr"
    exponent: Exponent


@dataclass(frozen=True)
class Commutator:
    u: "WordExpr"
    v: "WordExpr"


WordExpr = Union[Gen, Product, Power, Commutator]
IDENTITY = Product(())


def _normalize_exponent(e) -> Exponent:
    if isinstance(e, PadicLiteral):
        return e
    if isinstance(e, bool):
        raise TypeError("bool is not an exponent")
    if isinstance(e, int):
        return e
    e = Fraction(e)
    return e.numerator if e.denominator == 1 else e


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str, context: frozenset | None):
        self.text = text
        self.pos = 0
        self.context = context

    def error(self, msg, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos, self.text)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def at_atom_start(self) -> bool:
        c = self.peek()
        return c != "" and (c.isalpha() or c in "_([1")

    def parse_expr(self) -> WordExpr:
        terms = []
        while self.at_atom_start():
            terms.append(self.parse_term())
        if not terms:
            found = self.peek() or "end of input"
            self.error(f"expected a word, found {found!r}")
        return terms[0] if len(terms) == 1 else Product(tuple(terms))

    def parse_term(self) -> WordExpr:
        atom = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            return Power(atom, self.parse_exponent())
        return atom

    def parse_name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos]

    def parse_atom(self) -> WordExpr:
        c = self.peek()
        start = self.pos
        if c == "(":
            self.pos += 1
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if c == "[":
            self.pos += 1
            u = self.parse_expr()
            self.expect(",")
            v = self.parse_expr()
            self.expect("]")
            return Commutator(u, v)
        if c == "1":
            self.pos += 1
            nxt = self.text[self.pos] if self.pos < len(self.text) else ""
            if nxt.isalnum() or nxt == "_":
                self.error("generator names cannot start with a digit", start)
            return IDENTITY
        name = self.parse_name()
        if self.context is not None and name not in self.context:
            raise UnknownGenerator(f"unknown generator {name!r}", start, self.text)
        return Gen(name)

    def parse_int(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.error("expected an integer", start)
        return int(self.text[start:self.pos])

    def parse_exponent(self) -> Exponent:
        self.skip_ws()
        if self.text.startswith("Zp(", self.pos):
            self.pos += 3
            v = self.parse_int()
            self.expect(";")
            kpos = self.pos
            k = self.parse_int()
            if k < 1:
                self.error("p-adic precision must be positive", kpos)
            self.expect(")")
            return PadicLiteral(v, k)
        if self.peek() == "(":
            self.pos += 1
            num = self.parse_int()
            if self.peek() == "/":
                self.pos += 1
                dpos = self.pos
                den = self.parse_int()
                if den == 0:
                    raise NotInvertible(f"zero denominator at position {dpos}")
                if den < 0:
                    self.error("denominator must be positive", dpos)
                self.expect(")")
                return _normalize_exponent(Fraction(num, den))
            self.expect(")")
            return num
        return self.parse_int()


def parse(text: str, generators: Iterable[str] | None = None) -> WordExpr:
    """Parse ``text`` into a word AST.

    With ``generators`` given, names outside it raise :class:`UnknownGenerator`.
    """
    ctx = frozenset(generators) if generators is not None else None
    parser = _Parser(text, ctx)
    expr = parser.parse_expr()
    if parser.peek():
        parser.error(f"unexpected {parser.peek()!r}")
    return expr


# ---------------------------------------------------------------------------
# Printing


def _exponent_text(e: Exponent) -> str:
    if isinstance(e, PadicLiteral):
        return f"Zp({e.value};{e.precision})"
    if isinstance(e, Fraction):
        return f"({e.numerator}/{e.denominator})"
    return str(e)


def to_text(w: WordExpr) -> str:
    if isinstance(w, Gen):
        return w.name
    if isinstance(w, Commutator):
        return f"[{to_text(w.u)}, {to_text(w.v)}]"
    if isinstance(w, Power):
        base = to_text(w.base)
        if isinstance(w.base, Power) or (
            isinstance(w.base, Product) and w.base.factors
        ):
            base = f"({base})"
        return f"{base}^{_exponent_text(w.exponent)}"
    if not w.factors:
        return "1"
    parts = []
    for f in w.factors:
        s = to_text(f)
        if isinstance(f, Product) and f.factors:
            s = f"({s})"
        parts.append(s)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Structural operations


def inverse(w: WordExpr) -> WordExpr:
    return Power(w, -1)


def generators_of(w: WordExpr) -> set:
    if isinstance(w, Gen):
        return {w.name}
    if isinstance(w, Product):
        out = set()
        for f in w.factors:
            out |= generators_of(f)
        return out
    if isinstance(w, Power):
        return generators_of(w.base)
    return generators_of(w.u) | generators_of(w.v)


def is_integral(w: WordExpr) -> bool:
    if isinstance(w, Gen):
        return True
    if isinstance(w, Product):
        return all(is_integral(f) for f in w.factors)
    if isinstance(w, Power):
        return isinstance(w.exponent, int) and is_integral(w.base)
    return is_integral(w.u) and is_integral(w.v)


def _reduce_into(stack: list, letters: Iterable[tuple]) -> None:
    for g, e in letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((g, e))


def _invert_letters(letters: tuple) -> tuple:
    return tuple((g, -e) for g, e in reversed(letters))


def free_reduce(w) -> tuple:
    """Freely reduced letter sequence ``((name, +-1), ...)`` of an integer word.

    Also accepts an already expanded letter sequence.
    """
    if isinstance(w, tuple):
        stack: list = []
        _reduce_into(stack, w)
        return tuple(stack)
    if isinstance(w, Gen):
        return ((w.name, 1),)
    if isinstance(w, Product):
        stack = []
        for f in w.factors:
            _reduce_into(stack, free_reduce(f))
        return tuple(stack)
    if isinstance(w, Commutator):
        u, v = free_reduce(w.u), free_reduce(w.v)
        stack = []
        for part in (u, v, _invert_letters(u), _invert_letters(v)):
            _reduce_into(stack, part)
        return tuple(stack)
    e = w.exponent
    if not isinstance(e, int):
        raise ValueError(f"free_reduce needs integer exponents, found {e!r}")
    base = free_reduce(w.base)
    if e < 0:
        base, e = _invert_letters(base), -e
    stack = []
    for _ in range(e):
        _reduce_into(stack, base)
    return tuple(stack)


def letters_to_text(letters: tuple) -> str:
    if not letters:
        return "1"
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in letters)


def parse_letters(text: str, generators: Iterable[str] | None = None) -> tuple:
    return free_reduce(parse(text, generators))


def substitute(w: WordExpr, assignment: Mapping[str, WordExpr]) -> WordExpr:
    """Replace every generator by its image; exponents are left alone."""
    if isinstance(w, Gen):
        try:
            return assignment[w.name]
        except KeyError:
            raise KeyError(f"no image for generator {w.name!r}") from None
    if isinstance(w, Product):
        return Product(tuple(substitute(f, assignment) for f in w.factors))
    if isinstance(w, Power):
        return Power(substitute(w.base, assignment), w.exponent)
    return Commutator(substitute(w.u, assignment), substitute(w.v, assignment))


# ---------------------------------------------------------------------------
# JSON


def _exponent_to_json(e: Exponent) -> dict:
    if isinstance(e, PadicLiteral):
        return {"type": "padic", "v": str(e.value), "k": e.precision}
    if isinstance(e, Fraction):
        return {"type": "rational", "value": str(e)}
    return {"type": "int", "value": str(e)}


def _exponent_from_json(obj: dict) -> Exponent:
    kind = obj["type"]
    if kind == "padic":
        return PadicLiteral(int(obj["v"]), int(obj["k"]))
    if kind == "rational":
        return _normalize_exponent(Fraction(obj["value"]))
    if kind == "int":
        return int(obj["value"])
    raise ValueError(f"unknown exponent type {kind!r}")


def to_json(w: WordExpr) -> dict:
    if isinstance(w, Gen):
        return {"kind": "gen", "name": w.name}
    if isinstance(w, Product):
        return {"kind": "product", "factors": [to_json(f) for f in w.factors]}
    if isinstance(w, Power):
        return {
            "kind": "power",
            "base": to_json(w.base),
            "exponent": _exponent_to_json(w.exponent),
        }
    return {"kind": "commutator", "u": to_json(w.u), "v": to_json(w.v)}


def from_json(obj: dict) -> WordExpr:
    kind = obj["kind"]
    if kind == "gen":
        return Gen(obj["name"])
    if kind == "product":
        return Product(tuple(from_json(f) for f in obj["factors"]))
    if kind == "power":
        return Power(from_json(obj["base"]), _exponent_from_json(obj["exponent"]))
    if kind == "commutator":
        return Commutator(from_json(obj["u"]), from_json(obj["v"]))
    raise ValueError(f"unknown node kind {kind!r}")
