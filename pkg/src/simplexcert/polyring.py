"""Exact sparse homogeneous polynomials over the rationals.

A :class:`Form` stores raw coefficients ``a_beta`` keyed by exponent tuples.
Every stored monomial has the same total degree and every stored coefficient
is nonzero, so two forms are equal exactly when their term maps are equal.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence


class StructureError(ValueError):
    """Dimension, degree or shape mismatch between operands."""


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or str")
    return Fraction(value)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of length n and total degree d, descending lex order."""
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(n, d))}


def slot_count(n: int, d: int) -> int:
    """Number of degree-d monomials in n variables, C(n+d-1, d)."""
    return math.comb(n + d - 1, d)


def _order_key(expo: tuple[int, ...]):
    return tuple(-e for e in expo)


class Form:
    """Homogeneous polynomial of degree ``d`` in ``n`` variables.

    Instances are immutable; all arithmetic returns new forms.
    """

    __slots__ = ("n", "d", "_terms", "_hash")

    def __init__(self, n: int, d: int, terms: Mapping[Sequence[int], object] | None = None):
        if n < 1:
            raise StructureError("a form needs at least one variable")
        if d < 0:
            raise StructureError("degree must be nonnegative")
        clean: dict[tuple[int, ...], Fraction] = {}
        for expo, coeff in (terms or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != n:
                raise StructureError(f"monomial {expo} has {len(expo)} exponents, expected {n}")
            if any(e < 0 for e in expo):
                raise StructureError(f"negative exponent in {expo}")
            if sum(expo) != d:
                raise StructureError(f"monomial {expo} has degree {sum(expo)}, expected {d}")
            c = clean.get(expo, Fraction(0)) + to_fraction(coeff)
            if c:
                clean[expo] = c
            else:
                clean.pop(expo, None)
        self.n = n
        self.d = d
        self._terms = dict(sorted(clean.items(), key=lambda kv: _order_key(kv[0])))
        self._hash = None

    @classmethod
    def _raw(cls, n: int, d: int, terms: dict) -> Form:
        # trusted constructor: terms already canonical (nonzero, homogeneous)
        self = object.__new__(cls)
        self.n = n
        self.d = d
        self._terms = dict(sorted(terms.items(), key=lambda kv: _order_key(kv[0])))
        self._hash = None
        return self

    # constructors
    @classmethod
    def zero(cls, n: int, d: int) -> Form:
        return cls(n, d)

    @classmethod
    def constant(cls, n: int, value=1) -> Form:
        return cls(n, 0, {(0,) * n: value})

    @classmethod
    def variable(cls, n: int, i: int) -> Form:
        """The coordinate form x_i (0-based index)."""
        if not 0 <= i < n:
            raise StructureError(f"variable index {i} out of range for n={n}")
        expo = [0] * n
        expo[i] = 1
        return cls(n, 1, {tuple(expo): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> Form:
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            expo = [0] * n
            expo[i] = 1
            terms[tuple(expo)] = c
        return cls(n, 1, terms)

    @classmethod
    def simplex_sum(cls, n: int) -> Form:
        """x_1 + ... + x_n."""
        return cls.linear([1] * n)

    @classmethod
    def from_dense(cls, n: int, d: int, coeffs: Sequence, denominator: int = 1) -> Form:
        mons = monomials(n, d)
        if len(coeffs) != len(mons):
            raise StructureError("dense coefficient vector has the wrong length")
        terms = {}
        for expo, c in zip(mons, coeffs):
            if c:
                terms[expo] = Fraction(c, denominator) if denominator != 1 else Fraction(c)
        return cls._raw(n, d, terms)

    # accessors
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, expo: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(expo), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def to_dense(self) -> list[Fraction]:
        return [self._terms.get(m, Fraction(0)) for m in monomials(self.n, self.d)]

    def to_integer_dense(self) -> tuple[list[int], int]:
        """Dense integer numerators and a positive common denominator."""
        den = 1
        for c in self._terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [int(c * den) for c in self.to_dense()], den

    # comparisons
    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self.d == other.d and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.d, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Form(n={self.n}, d={self.d}, {self.pretty()})"

    def pretty(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for expo, c in self._terms.items():
            mon = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(expo) if e
            )
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic
    def _check_same_space(self, other: Form):
        if not isinstance(other, Form):
            raise StructureError("operand is not a Form")
        if self.n != other.n:
            raise StructureError(f"variable count mismatch: {self.n} vs {other.n}")

    def __add__(self, other: Form) -> Form:
        self._check_same_space(other)
        if self.d != other.d:
            raise StructureError(f"degree mismatch: {self.d} vs {other.d}")
        terms = dict(self._terms)
        for expo, c in other._terms.items():
            s = terms.get(expo, 0) + c
            if s:
                terms[expo] = s
            else:
                terms.pop(expo, None)
        return Form._raw(self.n, self.d, terms)

    def __neg__(self) -> Form:
        return Form._raw(self.n, self.d, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def scale(self, factor) -> Form:
        factor = to_fraction(factor)
        if not factor:
            return Form.zero(self.n, self.d)
        return Form._raw(self.n, self.d, {e: c * factor for e, c in self._terms.items()})

    def __mul__(self, other) -> Form:
        if not isinstance(other, Form):
            return self.scale(other)
        self._check_same_space(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                terms[expo] = terms.get(expo, 0) + c1 * c2
        return Form._raw(self.n, self.d + other.d, {e: c for e, c in terms.items() if c})

    def __rmul__(self, other) -> Form:
        return self.scale(other)

    def __pow__(self, k: int) -> Form:
        if not isinstance(k, int) or k < 0:
            raise StructureError("power must be a nonnegative integer")
        result = Form.constant(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __call__(self, point: Sequence) -> Fraction:
        return evaluate(self, point)


def add(f: Form, g: Form) -> Form:
    return f + g


def multiply(f: Form, g: Form) -> Form:
    return f * g


def power(f: Form, k: int) -> Form:
    return f ** k


def evaluate(f: Form, point: Sequence) -> Fraction:
    """Exact value of ``f`` at ``point``."""
    if len(point) != f.n:
        raise StructureError(f"point has {len(point)} coordinates, form has {f.n} variables")
    xs = [to_fraction(x) for x in point]
    # cache per-variable powers; d is small relative to the term count
    pows = [[Fraction(1)] for _ in xs]
    total = Fraction(0)
    for expo, c in f._terms.items():
        v = c
        for i, e in enumerate(expo):
            if e:
                p = pows[i]
                while len(p) <= e:
                    p.append(p[-1] * xs[i])
                v *= p[e]
        total += v
    return total


def partial_derivative(f: Form, alpha: Sequence[int]) -> Form:
    """D^alpha f. Orders beyond the degree give the zero form of degree 0."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != f.n or any(a < 0 for a in alpha):
        raise StructureError("derivative multi-index must have n nonnegative entries")
    k = sum(alpha)
    if k > f.d:
        return Form.zero(f.n, 0)
    terms = {}
    for expo, c in f._terms.items():
        if any(e < a for e, a in zip(expo, alpha)):
            continue
        factor = 1
        for e, a in zip(expo, alpha):
            factor *= math.perm(e, a)
        terms[tuple(e - a for e, a in zip(expo, alpha))] = c * factor
    return Form._raw(f.n, f.d - k, terms)


# text format


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(token: str) -> Fraction:
    if "." in token or "e" in token.lower():
        raise ValueError(f"not an exact rational: {token!r}")
    return Fraction(token)


def serialize_form(f: Form) -> str:
    lines = [f"{f.n} {f.d}"]
    for expo, c in f._terms.items():
        lines.append(" ".join([_format_rational(c)] + [str(e) for e in expo]))
    return "\n".join(lines) + "\n"


def _parse_block(lines: list[tuple[int, str]], n_hint: int | None = None) -> Form:
    header = None
    n = d = 0
    terms: dict[tuple[int, ...], Fraction] = {}
    for lineno, line in lines:
        fields = line.split()
        if header is None:
            if len(fields) != 2:
                raise ParseError("header must be 'n d'", lineno)
            try:
                n, d = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(f"bad header {line!r}", lineno) from None
            if n < 1 or d < 0:
                raise ParseError("header needs n >= 1 and d >= 0", lineno)
            header = lineno
            continue
        if len(fields) != n + 1:
            raise ParseError(f"expected a coefficient and {n} exponents, got {len(fields)} fields", lineno)
        try:
            c = parse_rational(fields[0])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad coefficient {fields[0]!r}", lineno) from None
        try:
            expo = tuple(int(t) for t in fields[1:])
        except ValueError:
            raise ParseError("exponents must be integers", lineno) from None
        if any(e < 0 for e in expo):
            raise ParseError("exponents must be nonnegative", lineno)
        if sum(expo) != d:
            raise ParseError(f"term has degree {sum(expo)}, header says {d}", lineno)
        terms[expo] = terms.get(expo, Fraction(0)) + c
    if header is None:
        raise ParseError("missing 'n d' header", lines[0][0] if lines else None)
    if n_hint is not None and n != n_hint:
        raise ParseError(f"variable count {n} differs from earlier blocks ({n_hint})", header)
    return Form(n, d, terms)


def _blocks(text: str) -> list[list[tuple[int, str]]]:
    blocks: list[list[tuple[int, str]]] = [[]]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "---":
            blocks.append([])
            continue
        blocks[-1].append((lineno, line))
    return blocks


def parse_form(text: str) -> Form:
    blocks = _blocks(text)
    if len(blocks) != 1:
        raise ParseError("expected a single form; found a '---' separator")
    return _parse_block(blocks[0])


def parse_system(text: str) -> list[Form]:
    forms: list[Form] = []
    for block in _blocks(text):
        if not block:
            raise ParseError("empty block in system file")
        forms.append(_parse_block(block, forms[0].n if forms else None))
    return forms


def serialize_system(forms: Iterable[Form]) -> str:
    return "---\n".join(serialize_form(f) for f in forms)
