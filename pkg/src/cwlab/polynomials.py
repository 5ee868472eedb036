"""Sparse multivariate polynomials over a FieldSpec.

Terms map exponent tuples to nonzero coefficient indexes.  Values are
immutable after construction; arithmetic returns fresh objects.  The zero
polynomial has total degree -inf (a real float sentinel, so comparisons
with integer degrees behave).
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence, TYPE_CHECKING

from .errors import (
    ArityMismatch,
    ExprSyntaxError,
    GeneratorInPrimeField,
    UnknownVariable,
    ZeroPolynomial,
)
from .fields import FieldSpec, element_literal

if TYPE_CHECKING:  # pragma: no cover
    from .subspaces import AffineSubspace

NEG_INF = float("-inf")


class MultiPoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldSpec, nvars: int, terms: dict[tuple[int, ...], int]):
        self.field = field
        self.nvars = nvars
        self.terms = terms

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec, nvars: int) -> "MultiPoly":
        return cls(field, nvars, {})

    @classmethod
    def constant(cls, field: FieldSpec, nvars: int, c: int) -> "MultiPoly":
        if c == 0:
            return cls.zero(field, nvars)
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field: FieldSpec, nvars: int, i: int) -> "MultiPoly":
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(field, nvars, {exps: field.one})

    @classmethod
    def from_terms(
        cls, field: FieldSpec, nvars: int, items: Iterable[tuple[tuple[int, ...], int]]
    ) -> "MultiPoly":
        terms: dict[tuple[int, ...], int] = {}
        for exps, c in items:
            if len(exps) != nvars:
                raise ArityMismatch(f"exponent vector {exps} has wrong length")
            acc = field.add(terms.get(exps, 0), c)
            if acc:
                terms[exps] = acc
            else:
                terms.pop(exps, None)
        return cls(field, nvars, terms)

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int | float:
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    @property
    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {sum(e) for e in self.terms}
        return len(degs) == 1

    def homogeneous_component(self, e: int) -> "MultiPoly":
        """The sum of terms of total degree exactly e."""
        return MultiPoly(
            self.field, self.nvars, {x: c for x, c in self.terms.items() if sum(x) == e}
        )

    def leading_form(self) -> "MultiPoly":
        """Homogeneous part of top total degree (undefined for zero)."""
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no leading form")
        return self.homogeneous_component(int(self.total_degree))

    def homogenize(self) -> "MultiPoly":
        """Degree-e form in one extra variable, inserted at position 0.

        Setting the new variable to 1 recovers the polynomial; setting it to
        0 recovers the leading form in the remaining variables.
        """
        if not self.terms:
            raise ZeroPolynomial("cannot homogenize the zero polynomial")
        d = int(self.total_degree)
        terms = {(d - sum(e),) + e: c for e, c in self.terms.items()}
        return MultiPoly(self.field, self.nvars + 1, terms)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        F = self.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            acc = F.add(terms.get(e, 0), c)
            if acc:
                terms[e] = acc
            else:
                terms.pop(e, None)
        return MultiPoly(F, self.nvars, terms)

    def __neg__(self) -> "MultiPoly":
        F = self.field
        return MultiPoly(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        F = self.field
        terms: dict[tuple[int, ...], int] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                acc = F.add(terms.get(e, 0), F.mul(ca, cb))
                if acc:
                    terms[e] = acc
                else:
                    terms.pop(e, None)
        return MultiPoly(F, self.nvars, terms)

    def scale(self, c: int) -> "MultiPoly":
        F = self.field
        if c == 0:
            return MultiPoly.zero(F, self.nvars)
        return MultiPoly(F, self.nvars, {e: F.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise ValueError("negative polynomial powers are not defined")
        acc = MultiPoly.constant(self.field, self.nvars, self.field.one)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base if e > 1 else base
            e >>= 1
        return acc

    def map_coefficients(self, func: Callable[[int], int], field: FieldSpec) -> "MultiPoly":
        """Apply func to every coefficient (e.g. an embedding or Frobenius)."""
        terms = {}
        for e, c in self.terms.items():
            v = func(c)
            if v:
                terms[e] = v
        return MultiPoly(field, self.nvars, terms)

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} coordinates, got {len(point)}")
        F = self.field
        acc = 0
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = F.mul(v, F.pow(x, e))
                    if v == 0:
                        break
            acc = F.add(acc, v)
        return acc

    def substituted(self, subs: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: substitute subs[i] for variable i (all over one field)."""
        if len(subs) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} substitutions")
        F = self.field
        m = subs[0].nvars if subs else 0
        out = MultiPoly.zero(F, m)
        pow_cache: dict[tuple[int, int], MultiPoly] = {}

        def powed(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in pow_cache:
                pow_cache[key] = subs[i] ** e
            return pow_cache[key]

        for exps, c in self.terms.items():
            term = MultiPoly.constant(F, m, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * powed(i, e)
            out = out + term
        return out

    # -- text -----------------------------------------------------------------

    def to_text(self, names: Sequence[str]) -> str:
        """Canonical rendering: terms in lexicographic exponent order."""
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for exps in sorted(self.terms):
            c = self.terms[exps]
            factors = [
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(exps)
                if e
            ]
            if not factors:
                parts.append(element_literal(F, c))
            elif c == F.one:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([element_literal(F, c)] + factors))
        return " + ".join(parts)

    # -- identity ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        names = [f"x{i+1}" for i in range(self.nvars)]
        return f"MultiPoly({self.to_text(names)} over F_{self.field.q})"


class PolySystem:
    """A tuple of polynomials over one field and variable count.

    Carries the per-polynomial total degrees and their sum.  Zero
    polynomials are rejected: they carry no degree data and make the
    degree bookkeeping meaningless.
    """

    __slots__ = ("polys", "degrees", "total_degree", "field", "nvars")

    def __init__(self, polys: Sequence[MultiPoly]):
        if not polys:
            raise ValueError("a system needs at least one polynomial")
        field = polys[0].field
        nvars = polys[0].nvars
        for f in polys:
            if f.field != field or f.nvars != nvars:
                raise ArityMismatch("system polynomials must share field and arity")
            if f.is_zero:
                raise ZeroPolynomial("systems may not contain the zero polynomial")
        self.polys = tuple(polys)
        self.field = field
        self.nvars = nvars
        self.degrees = tuple(int(f.total_degree) for f in self.polys)
        self.total_degree = sum(self.degrees)

    @property
    def r(self) -> int:
        return len(self.polys)

    @property
    def is_homogeneous(self) -> bool:
        return all(f.is_homogeneous for f in self.polys)

    def vanishes_at(self, point: Sequence[int]) -> bool:
        """All-zero test, short-circuiting on the first nonzero value."""
        return all(f.evaluate(point) == 0 for f in self.polys)

    def leading_system(self) -> "PolySystem":
        return PolySystem([f.leading_form() for f in self.polys])

    def homogenized_system(self) -> "PolySystem":
        return PolySystem([f.homogenize() for f in self.polys])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolySystem):
            return NotImplemented
        return self.polys == other.polys

    def __hash__(self) -> int:
        return hash(self.polys)

    def __repr__(self) -> str:
        return f"PolySystem(r={self.r}, n={self.nvars}, degrees={self.degrees})"


def restrict_to_subspace(system: PolySystem, L: "AffineSubspace") -> PolySystem:
    """Restrict a system to an affine subspace via x = offset + sum t_j b_j.

    The result lives in dim(L) parameter variables; degrees never increase.
    A polynomial that vanishes identically on L restricts to the vacuous
    equation and is dropped; when every polynomial vanishes on L there is
    no system left to return and ZeroPolynomial is raised (counting code
    paths handle that case directly: every point of L is a zero).
    """
    from .subspaces import AffineSubspace  # deferred to avoid a cycle

    if not isinstance(L, AffineSubspace):
        raise TypeError("expected an AffineSubspace")
    if L.ambient != system.nvars:
        raise ArityMismatch(
            f"subspace ambient {L.ambient} != system arity {system.nvars}"
        )
    restricted = restrict_polys(system.polys, L.offset, L.basis, system.field)
    nonzero = [f for f in restricted if not f.is_zero]
    if not nonzero:
        raise ZeroPolynomial("every polynomial vanishes identically on the subspace")
    return PolySystem(nonzero)


def restrict_polys(
    polys: Sequence[MultiPoly],
    offset: Sequence[int],
    rows: Sequence[Sequence[int]],
    field: FieldSpec,
) -> list[MultiPoly]:
    """Raw restriction; zero restrictions come back as zero MultiPoly values."""
    m = len(rows)
    subs = []
    for i in range(len(offset)):
        items: list[tuple[tuple[int, ...], int]] = []
        if offset[i]:
            items.append(((0,) * m, offset[i]))
        for j in range(m):
            if rows[j][i]:
                e = tuple(1 if t == j else 0 for t in range(m))
                items.append((e, rows[j][i]))
        subs.append(MultiPoly.from_terms(field, m, items))
    return [f.substituted(subs) for f in polys]


# -- expression parser ----------------------------------------------------------

_OPS = set("+-*^()")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.idx = 0

    def _scan(self) -> None:
        text = self.text
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch == "#":
                break
            if ch.isspace():
                i += 1
                continue
            if ch in _OPS:
                self.tokens.append((ch, ch, i))
                i += 1
                continue
            if ch == "−":  # unicode minus
                self.tokens.append(("-", "-", i))
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                if j < n and text[j] == ":":
                    while j < n and (text[j].isdigit() or text[j] == ":"):
                        j += 1
                    self.tokens.append(("elem", text[i:j], i))
                else:
                    self.tokens.append(("int", text[i:j], i))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("ident", text[i:j], i))
                i = j
                continue
            raise ExprSyntaxError(f"unexpected character {ch!r}", i)

    def peek(self) -> tuple[str, str, int]:
        if self.idx < len(self.tokens):
            return self.tokens[self.idx]
        return ("eof", "", len(self.text))

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        self.idx += 1
        return tok


class _Parser:
    """Recursive descent over: expr := term (('+'|'-') term)*,
    term := factor ('*' factor)*, factor := atom ('^' int)*,
    atom := int | elem | ident | '(' expr ')' | '-' atom."""

    def __init__(self, text: str, field: FieldSpec, names: Sequence[str]):
        self.lex = _Lexer(text)
        self.field = field
        self.names = {name: i for i, name in enumerate(names)}
        self.nvars = len(names)

    def parse(self) -> MultiPoly:
        poly = self._expr()
        kind, val, pos = self.lex.peek()
        if kind != "eof":
            raise ExprSyntaxError(f"unexpected token {val!r}", pos)
        return poly

    def _expr(self) -> MultiPoly:
        acc = self._term()
        while True:
            kind, _, _ = self.lex.peek()
            if kind == "+":
                self.lex.take()
                acc = acc + self._term()
            elif kind == "-":
                self.lex.take()
                acc = acc - self._term()
            else:
                return acc

    def _term(self) -> MultiPoly:
        acc = self._factor()
        while self.lex.peek()[0] == "*":
            self.lex.take()
            acc = acc * self._factor()
        return acc

    def _factor(self) -> MultiPoly:
        if self.lex.peek()[0] == "-":
            self.lex.take()
            return -self._factor()  # unary minus binds looser than ^
        base = self._atom()
        while self.lex.peek()[0] == "^":
            self.lex.take()
            kind, val, pos = self.lex.take()
            if kind != "int":
                raise ExprSyntaxError("exponent must be a plain integer", pos)
            base = base ** int(val)
        return base

    def _atom(self) -> MultiPoly:
        F = self.field
        kind, val, pos = self.lex.take()
        if kind == "int":
            return MultiPoly.constant(F, self.nvars, F.from_int(int(val)))
        if kind == "elem":
            parts = val.split(":")
            if F.k == 1:
                raise ExprSyntaxError("colon literals need an extension field", pos)
            if len(parts) != F.k or any(p == "" for p in parts):
                raise ExprSyntaxError(
                    f"element literal needs {F.k} coordinates", pos
                )
            return MultiPoly.constant(
                F, self.nvars, F.from_coords([int(p) for p in parts])
            )
        if kind == "ident":
            if val == "g":
                if F.k == 1:
                    raise GeneratorInPrimeField(
                        "the symbol g is only defined for extension fields"
                    )
                return MultiPoly.constant(F, self.nvars, F.generator)
            if val in self.names:
                return MultiPoly.variable(F, self.nvars, self.names[val])
            raise UnknownVariable(f"unknown variable {val!r} at position {pos}")
        if kind == "(":
            inner = self._expr()
            kind2, _, pos2 = self.lex.take()
            if kind2 != ")":
                raise ExprSyntaxError("expected ')'", pos2)
            return inner
        raise ExprSyntaxError(f"unexpected token {val!r}" if val else "unexpected end of input", pos)


def parse_poly(text: str, field: FieldSpec, names: Sequence[str]) -> MultiPoly:
    """Parse an expression over +, -, *, ^ and parentheses.

    Atoms are integer literals (reduced mod p), colon element literals, the
    generator symbol g (extension fields only), and declared variable names.
    A '#' starts a comment.  Parse-print-parse is a fixed point.
    """
    seen = set()
    for name in names:
        if name in seen:
            raise ValueError(f"duplicate variable name {name!r}")
        if name == "g":
            raise ValueError("the name 'g' is reserved for the field generator")
        seen.add(name)
    return _Parser(text, field, names).parse()
