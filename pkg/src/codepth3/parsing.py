"""Text formats for ideals.

Polynomial grammar::

    ideal  := '(' list ')' | list
    list   := expr (',' expr)*
    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor (['*'] factor)*        # juxtaposition = product
    factor := atom [('^' | '**') INT]
    atom   := INT | NAME | '(' expr ')'

A NAME that is not a variable is split into variable names by longest
match, so ``x3`` is rejected but ``xyz`` means ``x*y*z``.

Ideal files are line oriented::

    # comment
    ring: x, y, z
    char: 32003
    order: degrevlex
    ideal: x*y^2, x*y*z,
           y*z^2

Lines without a key continue the previous ``ideal:`` entry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .exactlin import DEFAULT_CHARACTERISTIC, PrimeField, is_prime
from .polyring import MonomialOrder, NotHomogeneous, Polynomial, PolynomialRing


class IdealSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.position = position
        self.text = text
        detail = message
        if text:
            detail = f"{message} at position {position}\n  {text}\n  {' ' * position}^"
        super().__init__(detail)


class UnknownVariable(ValueError):
    pass


class BadCharacteristic(ValueError):
    pass


@dataclass
class IdealSpec:
    names: tuple[str, ...] = ("x", "y", "z")
    char: int = DEFAULT_CHARACTERISTIC
    generators: list[str] = field(default_factory=list)
    order: str = "degrevlex"
    max_degree: int | None = None
    name: str | None = None

    def ring(self) -> PolynomialRing:
        if not is_prime(self.char):
            raise BadCharacteristic(f"characteristic {self.char} is not a prime")
        try:
            field_ = PrimeField(self.char)
        except ValueError as exc:
            raise BadCharacteristic(str(exc)) from exc
        order = MonomialOrder(self.order, nvars=len(self.names))
        return PolynomialRing(field_, self.names, order)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[\^*+\-(),]))")


class _Parser:
    def __init__(self, text: str, ring: PolynomialRing, juxtaposition: bool):
        self.text = text
        self.ring = ring
        self.juxtaposition = juxtaposition
        self.var_index = {name: k for k, name in enumerate(ring.names)}
        self.tokens = self._tokenize()
        self.pos = 0

    def _tokenize(self):
        out = []
        i = 0
        text = self.text
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise IdealSyntaxError(f"unexpected character {text[i]!r}", text, i)
            start = m.start(m.lastindex)
            if m.group(1) is not None:
                out.append(("int", m.group(1), start))
            elif m.group(2) is not None:
                out.append(("name", m.group(2), start))
            else:
                op = m.group(3)
                out.append(("op", "^" if op == "**" else op, start))
            i = m.end()
        out.append(("end", "", len(text)))
        return out

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise IdealSyntaxError(message, self.text, tok[2])

    def expect(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.error(f"expected {op!r}, found {what}")
        return self.take()

    def parse_list(self) -> list[tuple[Polynomial, int, int]]:
        out = []
        while True:
            start = self.peek()[2]
            f = self.parse_expr()
            end = self.peek()[2]
            out.append((f, start, end))
            tok = self.peek()
            if tok[0] == "op" and tok[1] == ",":
                self.take()
                continue
            if tok[0] != "end":
                self.error(f"unexpected {tok[1]!r}")
            return out

    def parse_expr(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.parse_term().scale(sign) if sign < 0 else self.parse_term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.parse_term()
                acc = acc + t if tok[1] == "+" else acc - t
            else:
                return acc

    def _starts_factor(self, tok) -> bool:
        return tok[0] in ("int", "name") or (tok[0] == "op" and tok[1] == "(")

    def parse_term(self) -> Polynomial:
        acc = self.parse_factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                acc = acc * self.parse_factor()
            elif self._starts_factor(tok):
                if not self.juxtaposition:
                    self.error("implicit multiplication is disabled")
                acc = acc * self.parse_factor()
            else:
                return acc

    def parse_factor(self) -> Polynomial:
        base = self.parse_atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.peek()
            if exp[0] != "int":
                self.error("exponent must be a non-negative integer")
            self.take()
            return base ** int(exp[1])
        return base

    def parse_atom(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return self.ring.one().scale(int(tok[1]))
        if tok[0] == "name":
            self.take()
            return self._name_to_poly(tok)
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            f = self.parse_expr()
            self.expect(")")
            return f
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        self.error(f"expected a coefficient, variable or '(', found {what}")

    def _name_to_poly(self, tok) -> Polynomial:
        name = tok[1]
        if name in self.var_index:
            return self.ring.gen(self.var_index[name])
        if not self.juxtaposition:
            raise UnknownVariable(f"unknown variable {name!r} at position {tok[2]}")
        parts = self._split(name)
        if parts is None:
            raise UnknownVariable(f"unknown variable {name!r} at position {tok[2]}")
        out = self.ring.one()
        for part in parts:
            out = out * self.ring.gen(self.var_index[part])
        return out

    def _split(self, name: str):
        if not name:
            return []
        for k in range(len(name), 0, -1):
            head = name[:k]
            if head in self.var_index:
                rest = self._split(name[k:])
                if rest is not None:
                    return [head] + rest
        return None


def _strip_outer_parens(text: str) -> str:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        return text
    depth = 0
    for k, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0 and k != len(s) - 1:
                return text
    return s[1:-1]


def parse_polynomials(text: str, ring: PolynomialRing, juxtaposition: bool = True, require_homogeneous: bool = True) -> list[Polynomial]:
    """Parse a comma-separated generator list into polynomials of `ring`."""
    text = _strip_outer_parens(text)
    if not text.strip():
        raise IdealSyntaxError("empty generator list", text, 0)
    parser = _Parser(text, ring, juxtaposition)
    items = parser.parse_list()
    out = []
    for f, start, end in items:
        if require_homogeneous and not f.is_homogeneous():
            raise NotHomogeneous(f"generator {text[start:end].strip()!r} is not homogeneous")
        out.append(f)
    return out


def parse_ideal(
    text: str,
    names=("x", "y", "z"),
    char: int = DEFAULT_CHARACTERISTIC,
    order: str = "degrevlex",
    juxtaposition: bool = True,
) -> tuple[IdealSpec, list[Polynomial]]:
    spec = IdealSpec(tuple(names), int(char), [], order)
    ring = spec.ring()
    polys = parse_polynomials(text, ring, juxtaposition)
    spec.generators = [str(f) for f in polys]
    return spec, polys


def parse_ideal_file(text: str, overrides: dict | None = None) -> tuple[IdealSpec, list[Polynomial]]:
    """Parse the line-oriented ideal format; `overrides` replace file keys."""
    values: dict[str, str] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.match(r"\s*([A-Za-z][A-Za-z_-]*)\s*:(.*)$", line)
        if m:
            current = m.group(1).lower().replace("_", "-")
            if current not in ("ring", "char", "ideal", "order", "max-degree", "name"):
                raise IdealSyntaxError(f"unknown key {m.group(1)!r} on line {lineno}")
            values[current] = m.group(2).strip()
        elif current == "ideal":
            values["ideal"] += " " + line.strip()
        else:
            raise IdealSyntaxError(f"line {lineno} has no key")
    if "ideal" not in values:
        raise IdealSyntaxError("missing 'ideal:' entry")
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    names = tuple(n.strip() for n in values.get("ring", "x, y, z").split(","))
    if "names" in overrides:
        names = tuple(overrides["names"])
    if any(not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n) for n in names):
        raise IdealSyntaxError(f"bad variable names {names}")
    try:
        char = int(overrides.get("char", values.get("char", DEFAULT_CHARACTERISTIC)))
    except ValueError as exc:
        raise BadCharacteristic(f"bad characteristic {values.get('char')!r}") from exc
    order = overrides.get("order", values.get("order", "degrevlex"))
    spec, polys = parse_ideal(values["ideal"], names, char, order)
    md = overrides.get("max_degree", values.get("max-degree"))
    spec.max_degree = int(md) if md is not None else None
    spec.name = values.get("name")
    return spec, polys


def format_ideal_file(spec: IdealSpec) -> str:
    lines = []
    if spec.name:
        lines.append(f"name: {spec.name}")
    lines.append(f"ring: {', '.join(spec.names)}")
    lines.append(f"char: {spec.char}")
    if spec.order != "degrevlex":
        lines.append(f"order: {spec.order}")
    if spec.max_degree is not None:
        lines.append(f"max-degree: {spec.max_degree}")
    lines.append(f"ideal: {', '.join(spec.generators)}")
    return "\n".join(lines) + "\n"
