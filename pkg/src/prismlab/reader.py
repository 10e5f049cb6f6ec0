"""Expression parser and the ``prismlab-spec v1`` document format.

Grammar (precedence ``^`` over unary minus over ``*`` over binary ``+ -``)::

    expr  := term (("+" | "-") term)*
    term  := unary ("*" unary)*
    unary := ("-" | "+") unary | power
    power := atom ("^" INT)?
    atom  := INT | "p" | VAR | "(" expr ")"

So ``-T^2`` is ``-(T^2)`` and ``a+b*c`` is ``a+(b*c)``.  The document format
is described in ``docs/spec-format.md``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .arith import SeriesRing, TruncSeries, is_prime
from .delta import DeltaRingSpec
from .errors import (ExponentTooLarge, InputError, MissingField, ParseError, UnknownVariable,
                     ValidationError)

HEADER = "prismlab-spec v1"
RESERVED = "p"
MAX_EXPONENT = 10_000

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


# --- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class PrimeSym:
    pos: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    pos: int


Node = Union[Num, PrimeSym, Var, Neg, BinOp, Pow]


def _tokenize(text: str) -> List[Tuple[str, object, int]]:
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            out.append(("op", op, start))
        i = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Node:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[:2] == ("op", "*"):
            _, _, pos = self.take()
            node = BinOp("*", node, self.unary(), pos)
        return node

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return Neg(inner, pos) if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            _, _, pos = self.take()
            kind, val, epos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer literal", epos)
            if val > MAX_EXPONENT:
                raise ExponentTooLarge(f"exponent {val} exceeds {MAX_EXPONENT} (col {epos + 1})")
            return Pow(base, val, pos)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return Num(val, pos)
        if kind == "name":
            return PrimeSym(pos) if val == RESERVED else Var(val, pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of expression", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


def _evaluate(node: Node, ring: SeriesRing) -> TruncSeries:
    if isinstance(node, Num):
        return ring.const(node.value)
    if isinstance(node, PrimeSym):
        return ring.p()
    if isinstance(node, Var):
        if node.name not in ring.variables:
            raise UnknownVariable(f"unknown variable {node.name!r} at col {node.pos + 1}")
        return ring.var(node.name)
    if isinstance(node, Neg):
        return -_evaluate(node.operand, ring)
    if isinstance(node, BinOp):
        a, b = _evaluate(node.left, ring), _evaluate(node.right, ring)
        return a + b if node.op == "+" else a - b if node.op == "-" else a * b
    if isinstance(node, Pow):
        base = _evaluate(node.base, ring)
        order = base.order()
        if order and order * node.exponent > ring.degree_cap:
            raise ExponentTooLarge(
                f"power at col {node.pos + 1} has order {order * node.exponent} > degree cap "
                f"{ring.degree_cap}; it would vanish in the window")
        return base ** node.exponent
    raise TypeError(node)


def parse_poly(text: str, ring: Union[SeriesRing, DeltaRingSpec, "RingSpec"]) -> TruncSeries:
    """Parse ``text`` into the truncation window of ``ring``."""
    if isinstance(ring, RingSpec):
        ring = ring.series_ring()
    elif isinstance(ring, DeltaRingSpec):
        ring = ring.ring
    return _evaluate(parse_ast(text), ring)


# --- documents -----------------------------------------------------------------

@dataclass(frozen=True)
class RingSpec:
    prime: int
    precision: int
    degree_cap: int
    variables: Tuple[str, ...]
    phi_images: Tuple[Tuple[str, str], ...] = ()
    pd_mode: Optional[Dict[str, int]] = None

    def series_ring(self, precision: int = None, degree_cap: int = None) -> SeriesRing:
        return SeriesRing(self.prime, precision or self.precision,
                          self.degree_cap if degree_cap is None else degree_cap, self.variables)

    def delta_spec(self, precision: int = None, degree_cap: int = None) -> DeltaRingSpec:
        ring = self.series_ring(precision, degree_cap)
        overrides = {name: parse_poly(text, ring) for name, text in self.phi_images}
        try:
            return DeltaRingSpec.with_overrides(ring, overrides)
        except ValueError as exc:
            raise ValidationError(f"invalid Frobenius lift: {exc}") from None


_SECTIONS = {
    "ring": {"prime", "precision", "degree", "variables"},
    "ideal": {"orientation", "orientation_prime", "gen", "x_prime"},
    "options": {"pd_top", "s_max", "i_max", "exponent", "matrix", "samples", "j_max"},
}
_REPEATABLE = {"gen", "x_prime"}
_INT_OPTIONS = {"pd_top", "s_max", "i_max", "exponent", "samples", "j_max"}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass
class SpecDocument:
    ring_spec: RingSpec
    delta: DeltaRingSpec
    orientation: Optional[TruncSeries] = None
    orientation_prime: Optional[TruncSeries] = None
    gens: List[TruncSeries] = field(default_factory=list)
    x_prime: List[TruncSeries] = field(default_factory=list)
    matrix: Optional[List[List[TruncSeries]]] = None
    options: Dict[str, int] = field(default_factory=dict)
    raw: Dict[str, object] = field(default_factory=dict)

    @property
    def ring(self) -> SeriesRing:
        return self.delta.ring


def _split_lines(text: str):
    lines = text.splitlines()
    first = next((i for i, l in enumerate(lines) if l.strip() and not l.strip().startswith("#")), None)
    if first is None or lines[first].strip() != HEADER:
        raise ParseError(f"first line must be {HEADER!r}", 0, (first or 0) + 1)
    section = None
    entries = {name: [] for name in _SECTIONS}
    for lineno, raw in enumerate(lines[first + 1:], start=first + 2):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[([a-z_]+)\]", line)
        if m:
            if m.group(1) not in _SECTIONS:
                raise ValidationError(f"unknown section [{m.group(1)}] (line {lineno})")
            section = m.group(1)
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", 0, lineno)
        if section is None:
            raise ParseError("entry before any section header", 0, lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        allowed = _SECTIONS[section]
        if key not in allowed and not (section == "ring" and key.startswith("phi.")):
            raise ValidationError(f"unknown key {key!r} in [{section}] (line {lineno})")
        if key not in _REPEATABLE and any(k == key for k, _, _ in entries[section]):
            raise ValidationError(f"duplicate key {key!r} in [{section}] (line {lineno})")
        entries[section].append((key, value, lineno))
    return entries


def _int_field(entries, key, section="ring"):
    for k, v, lineno in entries[section]:
        if k == key:
            try:
                return int(v)
            except ValueError:
                raise ValidationError(f"{key} must be an integer (line {lineno})") from None
    return None


def _parse_at(text, ring, lineno):
    try:
        return parse_poly(text, ring)
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" (", 1)[0], exc.position, lineno) from None
    except InputError as exc:
        raise type(exc)(f"{exc} (line {lineno})") from None


def load_ringspec(text: str, precision: int = None, degree_cap: int = None) -> SpecDocument:
    """Parse and validate a spec document; every expression is parsed eagerly.

    ``precision`` and ``degree_cap`` override the document's window.
    """
    entries = _split_lines(text)
    values = {}
    for key in ("prime", "precision", "degree"):
        v = _int_field(entries, key)
        if v is None:
            raise MissingField(f"[ring] is missing {key!r}")
        values[key] = v
    var_entry = [(v, ln) for k, v, ln in entries["ring"] if k == "variables"]
    if not var_entry:
        raise MissingField("[ring] is missing 'variables'")
    vtext, vline = var_entry[0]
    variables = tuple(s.strip() for s in vtext.split(",") if s.strip())
    if not is_prime(values["prime"]):
        raise ValidationError(f"prime = {values['prime']} is not a prime number")
    if values["precision"] < 1:
        raise ValidationError("precision must be >= 1")
    if values["degree"] < 1:
        raise ValidationError("degree must be >= 1")
    for v in variables:
        if not _IDENT.match(v):
            raise ValidationError(f"invalid variable name {v!r} (line {vline})")
        if v == RESERVED:
            raise ValidationError(f"'{RESERVED}' is reserved for the prime (line {vline})")
    if len(set(variables)) != len(variables):
        raise ValidationError(f"duplicate variable names (line {vline})")
    phis = []
    for k, v, ln in entries["ring"]:
        if k.startswith("phi."):
            name = k[4:]
            if name not in variables:
                raise ValidationError(f"Frobenius override for unknown variable {name!r} (line {ln})")
            phis.append((name, v))
    options = {}
    matrix_text = None
    for k, v, ln in entries["options"]:
        if k in _INT_OPTIONS:
            options[k] = _int_field(entries, k, "options")
            if options[k] < 0:
                raise ValidationError(f"{k} must be non-negative (line {ln})")
        elif k == "matrix":
            matrix_text = (v, ln)
    pd_mode = {"top": options["pd_top"]} if "pd_top" in options else None
    spec = RingSpec(values["prime"], values["precision"], values["degree"], variables,
                    tuple(phis), pd_mode)
    N = precision if precision is not None else spec.precision
    D = degree_cap if degree_cap is not None else spec.degree_cap
    if N < 1 or D < 1:
        raise ValidationError("precision and degree must be >= 1")
    ring = spec.series_ring(N, D)
    for name, txt in phis:
        _parse_at(txt, ring, next(ln for k, _, ln in entries["ring"] if k == "phi." + name))
    delta_spec = spec.delta_spec(N, D)
    doc = SpecDocument(spec, delta_spec, options=options)
    for k, v, ln in entries["ideal"]:
        val = _parse_at(v, delta_spec.ring, ln)
        if k == "orientation":
            doc.orientation = val
        elif k == "orientation_prime":
            doc.orientation_prime = val
        elif k == "gen":
            doc.gens.append(val)
        else:
            doc.x_prime.append(val)
        doc.raw.setdefault(k, []).append(v)
    if matrix_text is not None:
        v, ln = matrix_text
        rows = [r for r in v.split(";")]
        doc.matrix = [[_parse_at(e, delta_spec.ring, ln) for e in r.split(",")] for r in rows]
        n = len(variables)
        if len(doc.matrix) != n or any(len(r) != n for r in doc.matrix):
            raise ValidationError(f"matrix must be {n} x {n} (line {ln})")
    return doc


def format_ringspec(doc: SpecDocument) -> str:
    """Canonical document text (expressions in canonical element form)."""
    spec = doc.ring_spec
    ring = doc.ring
    lines = [HEADER, "[ring]", f"prime = {spec.prime}", f"precision = {ring.precision}",
             f"degree = {ring.degree_cap}", f"variables = {', '.join(spec.variables)}"]
    for name, img in zip(ring.variables, doc.delta.phi_images):
        if img != ring.var(name) ** ring.prime:
            lines.append(f"phi.{name} = {img.to_text()}")
    lines.append("[ideal]")
    if doc.orientation is not None:
        lines.append(f"orientation = {doc.orientation.to_text()}")
    if doc.orientation_prime is not None:
        lines.append(f"orientation_prime = {doc.orientation_prime.to_text()}")
    lines += [f"gen = {g.to_text()}" for g in doc.gens]
    lines += [f"x_prime = {x.to_text()}" for x in doc.x_prime]
    lines.append("[options]")
    for k in sorted(doc.options):
        lines.append(f"{k} = {doc.options[k]}")
    if doc.matrix is not None:
        lines.append("matrix = " + "; ".join(", ".join(e.to_text() for e in r) for r in doc.matrix))
    return "\n".join(lines) + "\n"
