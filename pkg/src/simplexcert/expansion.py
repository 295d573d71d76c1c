"""Expansion of a form on a sub-simplex, f([M] X), and sign classification.

Two routes compute the same composition:

* :func:`expand` handles any matrix by substituting the row linear forms and
  multiplying out sparse integer polynomials.
* :func:`expand_barycentric` handles G_sigma = P_sigma G_n only. It writes
  G_n = U D with U the upper all-ones matrix and D = diag(1, 1/2, ..., 1/n),
  so the substitution becomes a variable permutation, n - 1 Taylor shifts
  (x_k -> x_k + x_{k+1}) and a diagonal rescaling, all on integers.
"""
from __future__ import annotations

import math
from array import array
from enum import Enum
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence

from . import kernels
from .polyring import Form, StructureError, monomial_index, monomials, slot_count
from .simplexgeo import SimplexMatrix, check_permutation


class SignClass(str, Enum):
    ALL_POSITIVE = "AllPositive"
    ALL_NONNEGATIVE = "AllNonnegative"
    ALL_NEGATIVE = "AllNegative"
    ALL_NONPOSITIVE = "AllNonpositive"
    MIXED = "Mixed"
    ZERO = "ZeroForm"

    def __str__(self) -> str:
        return self.value


def _classify_counts(pos: int, neg: int, slots: int) -> SignClass:
    if pos == 0 and neg == 0:
        return SignClass.ZERO
    if neg == 0:
        return SignClass.ALL_POSITIVE if pos == slots else SignClass.ALL_NONNEGATIVE
    if pos == 0:
        return SignClass.ALL_NEGATIVE if neg == slots else SignClass.ALL_NONPOSITIVE
    return SignClass.MIXED


def sign_classify(f: Form) -> SignClass:
    """Sign pattern over all C(n+d-1, d) monomial slots; absent slots count as 0."""
    pos = sum(1 for _, c in f.items() if c > 0)
    return _classify_counts(pos, len(f) - pos, slot_count(f.n, f.d))


def meets(cls: SignClass, strict: bool) -> bool:
    if strict:
        return cls is SignClass.ALL_POSITIVE
    return cls in (SignClass.ALL_POSITIVE, SignClass.ALL_NONNEGATIVE)


# general route


def _integer_matrix(m: SimplexMatrix) -> tuple[list[list[int]], int]:
    den = 1
    for row in m.rows:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [[int(x * den) for x in row] for row in m.rows], den


def _sparse_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(x + y for x, y in zip(e1, e2))
            out[key] = out.get(key, 0) + c1 * c2
    return out


def expand(f: Form, m: SimplexMatrix) -> Form:
    """Exact composition f(M X) for any square matrix of matching size."""
    if f.n != m.n:
        raise StructureError(f"form has {f.n} variables, matrix is {m.n}x{m.n}")
    n, d = f.n, f.d
    if f.is_zero():
        return f
    mi, mden = _integer_matrix(m)
    coeffs, fden = f.to_integer_dense()
    unit = (0,) * n
    rows = []
    for r in mi:
        lin = {}
        for j, a in enumerate(r):
            if a:
                e = [0] * n
                e[j] = 1
                lin[tuple(e)] = a
        rows.append(lin)
    powers: list[list[dict]] = [[{unit: 1}] for _ in range(n)]

    def pw(i: int, k: int) -> dict:
        p = powers[i]
        while len(p) <= k:
            p.append(_sparse_mul(p[-1], rows[i]))
        return p[k]

    # products of powers shared across terms with a common exponent prefix
    prefix: dict[tuple, dict] = {(): {unit: 1}}

    def prod(expo: tuple) -> dict:
        if expo in prefix:
            return prefix[expo]
        head = prod(expo[:-1])
        e = expo[-1]
        res = head if e == 0 else _sparse_mul(head, pw(len(expo) - 1, e))
        prefix[expo] = res
        return res

    total: dict = {}
    for expo, c in zip(monomials(n, d), coeffs):
        if not c:
            continue
        # trailing variable is fixed by the degree; skip caching its product
        head = prod(expo[:-1])
        part = head if expo[-1] == 0 else _sparse_mul(head, pw(n - 1, expo[-1]))
        for key, v in part.items():
            total[key] = total.get(key, 0) + c * v
    den = fden * mden ** d
    return Form._raw(n, d, {k: Fraction(v, den) for k, v in total.items() if v})


def cell_center_sign(f: Form, m: SimplexMatrix) -> int:
    """Sign of f(M (1,...,1)^T)."""
    from .polyring import evaluate

    v = evaluate(f, m.apply([1] * m.n))
    return (v > 0) - (v < 0)


# barycentric route


class IntForm:
    """Dense integer form ``coeffs / den`` with ``den > 0``, in canonical monomial order."""

    __slots__ = ("n", "d", "coeffs", "den")

    def __init__(self, n: int, d: int, coeffs: list[int], den: int = 1):
        self.n = n
        self.d = d
        self.coeffs = coeffs
        self.den = den

    @classmethod
    def from_form(cls, f: Form) -> IntForm:
        coeffs, den = f.to_integer_dense()
        return cls(f.n, f.d, coeffs, den)

    def to_form(self) -> Form:
        return Form.from_dense(self.n, self.d, self.coeffs, self.den)

    def reduced(self) -> IntForm:
        g = reduce(math.gcd, self.coeffs, self.den)
        if g > 1:
            return IntForm(self.n, self.d, [c // g for c in self.coeffs], self.den // g)
        return self

    def sign_class(self) -> SignClass:
        pos, neg = kernels.sign_counts(self.coeffs)
        return _classify_counts(pos, neg, len(self.coeffs))

    def vertex_value(self, i: int) -> Fraction:
        """Value at e_i (0-based), i.e. the coefficient of x_i^d."""
        expo = [0] * self.n
        expo[i] = self.d
        return Fraction(self.coeffs[monomial_index(self.n, self.d)[tuple(expo)]], self.den)

    def ones_value(self) -> Fraction:
        """Value at (1, ..., 1)."""
        return Fraction(sum(self.coeffs), self.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntForm):
            return NotImplemented
        a, b = self.reduced(), other.reduced()
        return (a.n, a.d, a.coeffs, a.den) == (b.n, b.d, b.coeffs, b.den)

    def __repr__(self) -> str:
        return f"IntForm(n={self.n}, d={self.d}, terms={sum(1 for c in self.coeffs if c)}, den={self.den})"


@lru_cache(maxsize=None)
def _shift_plan(n: int, d: int, k: int, l: int) -> tuple[array, array]:
    groups: dict[tuple, list[tuple[int, int]]] = {}
    for i, expo in enumerate(monomials(n, d)):
        rest = tuple(e for j, e in enumerate(expo) if j not in (k, l))
        groups.setdefault(rest, []).append((expo[k], i))
    ptr = array("q", [0])
    idx = array("q")
    for members in groups.values():
        members.sort()
        idx.extend(i for _, i in members)
        ptr.append(len(idx))
    return ptr, idx


@lru_cache(maxsize=None)
def _permutation_plan(sigma: tuple[int, ...], d: int) -> array:
    # x_i = y_{sigma(i)}, so x^beta -> y^gamma with gamma[sigma(i)] = beta[i]
    n = len(sigma)
    index = monomial_index(n, d)
    target = array("q")
    for expo in monomials(n, d):
        gamma = [0] * n
        for i, e in enumerate(expo):
            gamma[sigma[i] - 1] = e
        target.append(index[tuple(gamma)])
    return target


@lru_cache(maxsize=None)
def _scale_plan(n: int, d: int) -> tuple[list[int], int]:
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), range(1, n + 1), 1)
    per_var = [lcm // j for j in range(1, n + 1)]
    weights = []
    for expo in monomials(n, d):
        w = 1
        for base, e in zip(per_var, expo):
            if e:
                w *= base ** e
        weights.append(w)
    return weights, lcm ** d


def barycentric_step(g: IntForm, sigma: Sequence[int]) -> IntForm:
    """g(G_sigma X) on the integer representation."""
    n, d = g.n, g.d
    sigma = check_permutation(sigma, n)
    coeffs = kernels.permute_terms(list(g.coeffs), _permutation_plan(sigma, d))
    for k in range(n - 1):
        ptr, idx = _shift_plan(n, d, k, k + 1)
        kernels.taylor_shift(coeffs, ptr, idx)
    weights, scale = _scale_plan(n, d)
    kernels.scale_terms(coeffs, weights)
    return IntForm(n, d, coeffs, g.den * scale).reduced()


def expand_barycentric(f: Form, sigma: Sequence[int]) -> Form:
    """f(G_sigma X) via the integer kernels."""
    return barycentric_step(IntForm.from_form(f), sigma).to_form()


def expand_word(f: Form, word: Sequence[Sequence[int]]) -> Form:
    """f(G_{s1} ... G_{sm} X), applying one barycentric step per letter."""
    g = IntForm.from_form(f)
    for sigma in word:
        g = barycentric_step(g, sigma)
    return g.to_form()
