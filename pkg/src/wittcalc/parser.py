"""Expression front end shared by every CLI subcommand.

The grammar (see ``docs/grammar.md``) covers residue-field elements,
Cohen-ring elements, differential forms, Witt vectors, Milnor symbol sums,
character data and polynomials in ``X``.  Parsing evaluates as it goes, so
type errors are reported at the offset of the offending operator.
"""

import re
from dataclasses import dataclass

from .asw import CharDatum
from .errors import ContextMismatch, ParameterError, ParseError
from .ffield import FieldContext, FieldElem
from .forms import DiffForm, d, dlog, exact, wedge
from .kexp import MilnorSymbolSum
from .padic import CohenRing, PadicElem, PadicPolynomial, cohen_ring
from .rings import ZZ
from .witt import WittVector

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Session:
    """Evaluation context: the prime, precision, residue field and Witt setup."""

    p: int
    field: FieldContext
    prec: int = 4
    n: int = None
    witt_ring: object = None
    json: bool = False

    def __post_init__(self):
        if self.field.p != self.p:
            raise ParameterError(f"field {self.field} does not have characteristic {self.p}")
        if self.witt_ring is None:
            object.__setattr__(self, "witt_ring", self.field)

    @property
    def cohen(self):
        return cohen_ring(self.field, self.prec)


def tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^(),;{}<>=":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("eof", "", len(src)))
    return tokens


def _kind(v):
    return {
        int: "integer", FieldElem: "field element", PadicElem: "p-adic element",
        DiffForm: "differential form", WittVector: "Witt vector",
        PadicPolynomial: "polynomial", MilnorSymbolSum: "symbol sum", CharDatum: "character",
    }.get(type(v), type(v).__name__)


class _Parser:
    def __init__(self, src, session, domain, allow_X):
        self.src = src
        self.s = session
        self.domain = domain
        self.allow_X = allow_X
        self.toks = tokenize(src)
        self.i = 0

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, text):
        if self.peek()[1] == text and self.peek()[0] != "eof":
            return self.next()
        return None

    def expect(self, text):
        tok = self.peek()
        if tok[1] != text or tok[0] == "eof":
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {text!r}, found {found}", tok[2])
        return self.next()

    def expect_int(self):
        tok = self.peek()
        if tok[0] != "int":
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected an integer, found {found}", tok[2])
        self.next()
        return int(tok[1])

    # scalars
    def base_ring(self, domain=None):
        domain = domain or self.domain
        if domain == "padic":
            return self.s.cohen
        if domain == "zz":
            return ZZ
        return self.s.field

    def scalar(self, v, pos, domain=None):
        domain = domain or self.domain
        ring = self.base_ring(domain)
        if domain == "zz":
            if isinstance(v, int):
                return v
            raise ParseError(f"expected an integer, got a {_kind(v)}", pos)
        if isinstance(v, int):
            return ring(v)
        if isinstance(v, (FieldElem, PadicElem)):
            try:
                return ring(v)
            except ParameterError as exc:
                raise ContextMismatch(f"{exc} at offset {pos}") from None
        raise ParseError(f"expected a scalar, got a {_kind(v)}", pos)

    # grammar
    def parse(self):
        v = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.next()
            w = self.term()
            v = self.binary(op, v, w)
        return v

    def term(self):
        v = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.next()
            w = self.unary()
            v = self.binary(op, v, w)
        return v

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            op = self.next()
            v = self.unary()
            try:
                return -v
            except TypeError:
                raise ParseError(f"cannot negate a {_kind(v)}", op[2]) from None
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            op = self.next()
            w = self.unary()
            v = self.binary(op, v, w)
        return v

    def binary(self, op, a, b):
        sym, pos = op[1], op[2]
        try:
            if sym == "^":
                if isinstance(a, DiffForm) and isinstance(b, DiffForm):
                    return wedge(a, b)
                if not isinstance(b, int):
                    raise ParseError(f"exponent must be an integer, got a {_kind(b)}", pos)
                if isinstance(a, int) and b < 0:
                    a = self.scalar(a, pos)
                if isinstance(a, (DiffForm, WittVector, MilnorSymbolSum, CharDatum)):
                    raise ParseError(f"cannot raise a {_kind(a)} to a power", pos)
                return a**b
            if sym == "/" and isinstance(a, int) and isinstance(b, int):
                a = self.scalar(a, pos)
            if isinstance(a, DiffForm) and isinstance(b, DiffForm) and sym == "*":
                raise ParseError("use '^' for the wedge product of forms", pos)
            if isinstance(a, (DiffForm, PadicPolynomial)) and not isinstance(b, type(a)) and sym != "/":
                b = self.lift_to(b, pos)
            if isinstance(b, (DiffForm, PadicPolynomial)) and not isinstance(a, type(b)):
                a = self.lift_to(a, pos)
                if sym in "+-" and isinstance(b, DiffForm):
                    a = DiffForm.function(a) if b.degree == 0 else a
            if isinstance(a, DiffForm) and sym in "+-" and not isinstance(b, DiffForm):
                b = DiffForm.function(b)
            result = {"+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b,
                      "/": lambda: a / b}[sym]()
        except (TypeError, AttributeError):
            raise ParseError(f"cannot apply {sym!r} to a {_kind(a)} and a {_kind(b)}", pos) from None
        except ParameterError as exc:
            raise ContextMismatch(f"{exc} at offset {pos}") from None
        if result is NotImplemented:
            raise ParseError(f"cannot apply {sym!r} to a {_kind(a)} and a {_kind(b)}", pos)
        return result

    def lift_to(self, v, pos):
        if isinstance(v, int) or isinstance(v, (FieldElem, PadicElem)):
            return self.scalar(v, pos)
        return v

    def atom(self):
        tok = self.peek()
        kind, text, pos = tok
        if kind == "int":
            self.next()
            return int(text)
        if kind == "op" and text == "(":
            self.next()
            v = self.expr()
            self.expect(")")
            return v
        if kind == "op" and text == "{":
            return self.symbol()
        if kind == "name":
            if text in ("d", "dlog") and self.toks[self.i + 1][1] == "(":
                return self.call()
            if text == "W" and self.toks[self.i + 1][1] in ("(", "<"):
                return self.witt()
            if text == "chi" and self.toks[self.i + 1][1] == "<":
                return self.chi()
            if text == "O" and self.toks[self.i + 1][1] == "(":
                return self.big_o()
            self.next()
            return self.name(text, pos)
        if kind == "eof":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {text!r}", pos)

    def name(self, text, pos):
        if text == "p":
            return self.s.p
        if text == "X":
            if not self.allow_X:
                raise ContextMismatch(f"'X' is only allowed in polynomial input at offset {pos}")
            return PadicPolynomial.X(self.s.cohen)
        field = self.s.field
        ring = self.base_ring()
        if field.is_finite:
            if text == "z" and field.degree > 1 and ring is not ZZ:
                return ring.gen(0)
            raise ContextMismatch(f"unknown name {text!r} in {field} at offset {pos}")
        names = field.names
        idx = None
        if text in names:
            idx = names.index(text)
        elif text == "T" and names[0] == "t1":
            idx = 0
        elif text == "t1" and names == ("T",):
            idx = 0
        if idx is None or ring is ZZ:
            raise ContextMismatch(f"unknown name {text!r} for variables {','.join(names)} at offset {pos}")
        return ring.gen(idx)

    def call(self):
        name, pos = self.next()[1:]
        self.expect("(")
        arg_pos = self.peek()[2]
        v = self.expr()
        self.expect(")")
        if name == "d":
            if isinstance(v, DiffForm):
                return d(v)
            return exact(self.scalar(v, arg_pos))
        v = self.scalar(v, arg_pos)
        if not v:
            raise ParseError("dlog of zero", arg_pos)
        return dlog(v)

    def big_o(self):
        _, _, pos = self.next()
        self.expect("(")
        arg_pos = self.peek()[2]
        v = self.expr()
        self.expect(")")
        if self.domain != "padic":
            raise ContextMismatch(f"O(...) is only meaningful for p-adic input at offset {pos}")
        p, k = self.s.p, 0
        if not isinstance(v, int) or v < 1:
            raise ParseError("O(...) needs a power of p", arg_pos)
        while v % p == 0:
            v //= p
            k += 1
        if v != 1:
            raise ParseError("O(...) needs a power of p", arg_pos)
        return PadicElem._zero(self.s.cohen, k, exact=False)

    def witt(self):
        _, _, pos = self.next()
        p = n = None
        if self.accept("<"):
            p = self.expect_int()
            self.expect(",")
            n = self.expect_int()
            self.expect(">")
        self.expect("(")
        coords = []
        domain = "zz" if self.s.witt_ring is ZZ else "field"
        if not self.accept(")"):
            while True:
                cpos = self.peek()[2]
                coords.append(self.scalar(self.expr(), cpos, domain))
                if self.accept(")"):
                    break
                self.expect(",")
        if not coords:
            raise ParseError("a Witt vector needs at least one coordinate", pos)
        if p is not None and p != self.s.p:
            raise ContextMismatch(f"W<{p},..> in a session with p = {self.s.p} at offset {pos}")
        if n is not None and n != len(coords):
            raise ContextMismatch(f"W<..,{n}> has {len(coords)} coordinates at offset {pos}")
        if self.s.n is not None and len(coords) != self.s.n:
            raise ContextMismatch(
                f"Witt vector of length {len(coords)} in a session with n = {self.s.n} at offset {pos}")
        return WittVector(self.s.p, coords, self.s.witt_ring)

    def symbol(self):
        _, _, pos = self.next()
        upos = self.peek()[2]
        unit = self.scalar(self.expr(), upos, "padic")
        entries = []
        if self.accept(";"):
            while True:
                bpos = self.peek()[2]
                entries.append(self.scalar(self.expr(), bpos, "padic"))
                if not self.accept(","):
                    break
        self.expect("}")
        return MilnorSymbolSum(len(entries) + 1, [(unit, entries)])

    def chi(self):
        _, _, pos = self.next()
        self.expect("<")
        p = self.expect_int()
        self.expect(",")
        n = self.expect_int()
        self.expect(">")
        if p != self.s.p:
            raise ContextMismatch(f"chi<{p},..> in a session with p = {self.s.p} at offset {pos}")
        self.expect("{")
        parts = {}
        for key in ("unram", "ram"):
            self.expect(key)
            self.expect("=")
            wpos = self.peek()[2]
            if self.peek()[1] != "W":
                raise ParseError("expected a Witt vector", wpos)
            w = self.witt()
            if w.n != n:
                raise ContextMismatch(f"{key} has length {w.n}, expected {n} at offset {wpos}")
            parts[key] = w
            if key == "unram":
                self.expect(",")
        self.expect("}")
        return CharDatum(p, n, parts["unram"], parts["ram"])


def _clamp(v, N):
    # literals are exact, so parsed values may carry more digits than asked for
    if isinstance(v, PadicElem):
        return v.with_precision(N)
    if isinstance(v, DiffForm) and isinstance(v.base, CohenRing):
        return v.map_coefficients(lambda c: c.with_precision(N), v.base)
    if isinstance(v, PadicPolynomial):
        return PadicPolynomial(v.ring, [c.with_precision(N) for c in v.coeffs])
    if isinstance(v, MilnorSymbolSum):
        return MilnorSymbolSum(v.q, [(_clamp(u, N), tuple(_clamp(b, N) for b in bs)) for u, bs in v])
    return v


def parse_expr(src, session, domain="field", allow_X=False):
    """Parse and evaluate ``src`` in ``session``.

    ``domain`` selects how bare scalars are read: ``"field"`` (residue field
    F) or ``"padic"`` (truncated Cohen ring at ``session.prec``).

    >>> from wittcalc.ffield import FunctionField
    >>> s = Session(3, FunctionField(3, ("T",)))
    >>> str(parse_expr("dlog(T^2)", s))
    '2/T * d(T)'
    """
    return _clamp(_Parser(src, session, domain, allow_X).parse(), session.prec)


def parse_field_spec(spec, p):
    """``GF(q)`` / ``GF(p^r)`` / ``ZZ`` -> (field, witt ring)."""
    from .ffield import GF

    m = re.fullmatch(r"\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+))?\s*\)\s*", spec)
    if spec.strip() == "ZZ":
        return None, ZZ
    if not m:
        raise ParameterError(f"bad field {spec!r}; use GF(p), GF(p^r), GF(q) or ZZ")
    base, r = int(m.group(1)), m.group(2)
    if r is None:
        r = 1
        while base % p == 0 and base > p:
            base //= p
            r += 1
    else:
        r = int(r)
    if base != p:
        raise ParameterError(f"{spec} is not a field of characteristic {p}")
    return GF(p, r), None
