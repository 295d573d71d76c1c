"""Sub-simplices of the standard simplex as column-stochastic matrices."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .polyring import StructureError, parse_rational, to_fraction

Permutation = tuple[int, ...]
Word = tuple[Permutation, ...]


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> tuple:
    n = len(a)
    cols = list(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a
    )


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        pivot = max(range(c, n), key=lambda r: abs(a[r][c]))
        if a[pivot][c] == 0:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                factor = a[r][c] / a[c][c]
                for k in range(c, n):
                    a[r][k] -= factor * a[c][k]
    return det


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination with partial pivoting."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for c in range(n):
        pivot = max(range(c, n), key=lambda r: abs(a[r][c]))
        if a[pivot][c] == 0:
            raise StructureError("singular matrix")
        a[c], a[pivot] = a[pivot], a[c]
        for r in range(c + 1, n):
            if a[r][c]:
                factor = a[r][c] / a[c][c]
                for k in range(c, n + 1):
                    a[r][k] -= factor * a[c][k]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        s = a[r][n] - sum((a[r][k] * x[k] for k in range(r + 1, n)), Fraction(0))
        x[r] = s / a[r][r]
    return x


class SimplexMatrix:
    """Nonnegative, column-stochastic, nonsingular n x n matrix.

    Column j is the vertex B_j of the sub-simplex Con(M).
    """

    __slots__ = ("n", "rows")

    def __init__(self, rows: Iterable[Iterable], check: bool = True):
        rows = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise StructureError("simplex matrix must be square and nonempty")
        self.n = n
        self.rows = rows
        if check:
            self.validate()

    def validate(self) -> None:
        if any(x < 0 for r in self.rows for x in r):
            raise StructureError("simplex matrix has a negative entry")
        for j in range(self.n):
            if sum(r[j] for r in self.rows) != 1:
                raise StructureError(f"column {j + 1} does not sum to 1")
        if determinant(self.rows) == 0:
            raise StructureError("simplex matrix is singular")

    @classmethod
    def identity(cls, n: int) -> SimplexMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], check=False)

    def __matmul__(self, other: SimplexMatrix) -> SimplexMatrix:
        if self.n != other.n:
            raise StructureError("dimension mismatch in matrix product")
        # products of column-stochastic nonsingular matrices stay valid
        return SimplexMatrix(matmul(self.rows, other.rows), check=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplexMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return "SimplexMatrix(" + "; ".join(" ".join(_fmt(x) for x in r) for r in self.rows) + ")"

    @property
    def columns(self) -> list[tuple[Fraction, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(self.n)]

    def apply(self, point: Sequence) -> tuple[Fraction, ...]:
        if len(point) != self.n:
            raise StructureError("point dimension mismatch")
        xs = [to_fraction(x) for x in point]
        return tuple(sum((a * x for a, x in zip(r, xs)), Fraction(0)) for r in self.rows)

    def determinant(self) -> Fraction:
        return determinant(self.rows)

    def to_text(self) -> str:
        return "\n".join(" ".join(_fmt(x) for x in r) for r in self.rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> SimplexMatrix:
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                rows.append([parse_rational(t) for t in line.split()])
        return cls(rows)

    def to_inline(self) -> str:
        return ";".join(",".join(_fmt(x) for x in r) for r in self.rows)

    @classmethod
    def from_inline(cls, text: str) -> SimplexMatrix:
        return cls([[parse_rational(t) for t in r.split(",")] for r in text.split(";")])


def check_permutation(sigma: Sequence[int], n: int) -> Permutation:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise StructureError(f"{sigma} is not a permutation of 1..{n}")
    return sigma


def permutations(n: int) -> list[Permutation]:
    """S_n in lexicographic one-line notation."""
    return list(itertools.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def _barycentric(sigma: Permutation) -> SimplexMatrix:
    n = len(sigma)
    g = [[Fraction(1, j + 1) if i <= j else Fraction(0) for j in range(n)] for i in range(n)]
    # row i of G_sigma is row sigma(i) of G_n
    return SimplexMatrix([g[s - 1] for s in sigma], check=False)


def barycentric_matrix(sigma: Sequence[int], n: int | None = None) -> SimplexMatrix:
    """G_sigma = P_sigma G_n where G_n[i][j] = 1/j for i <= j (1-based) and 0 otherwise."""
    if n is None:
        n = len(sigma)
    return _barycentric(check_permutation(sigma, n))


def barycentric_child(m: SimplexMatrix, sigma: Sequence[int]) -> SimplexMatrix:
    """M G_sigma without a full product.

    Column k of M P_sigma is column sigma^-1(k) of M, and column j of
    (M P_sigma) G_n is the mean of its first j columns.
    """
    n = m.n
    sigma = check_permutation(sigma, n)
    inv = [0] * n
    for i, s in enumerate(sigma):
        inv[s - 1] = i
    out = []
    for row in m.rows:
        acc = Fraction(0)
        new = []
        for j in range(n):
            acc += row[inv[j]]
            new.append(acc / (j + 1))
        out.append(tuple(new))
    return SimplexMatrix(out, check=False)


def product_chain(word: Sequence[Sequence[int]], n: int) -> SimplexMatrix:
    m = SimplexMatrix.identity(n)
    for sigma in word:
        m = m @ barycentric_matrix(sigma, n)
    return m


def d_inf(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return max(abs(x - y) for x, y in zip(a, b))


def diameter(m: SimplexMatrix) -> Fraction:
    cols = m.columns
    best = Fraction(0)
    for s, t in itertools.combinations(range(m.n), 2):
        best = max(best, d_inf(cols[s], cols[t]))
    return best


def is_on_simplex(point: Sequence) -> bool:
    xs = [to_fraction(x) for x in point]
    return all(x >= 0 for x in xs) and sum(xs) == 1


def shrink_simplex(point: Sequence, eps) -> SimplexMatrix:
    """Simplex with columns (1-eps)P + eps*e_i: diameter eps, contains P."""
    eps = to_fraction(eps)
    if not 0 < eps <= 1:
        raise StructureError("eps must lie in (0, 1]")
    if not is_on_simplex(point):
        raise StructureError("point is not on the standard simplex")
    p = [to_fraction(x) for x in point]
    n = len(p)
    rows = [[(1 - eps) * p[i] + (eps if i == j else 0) for j in range(n)] for i in range(n)]
    return SimplexMatrix(rows, check=False)


def barycentric_coordinates(m: SimplexMatrix, point: Sequence) -> list[Fraction]:
    if len(point) != m.n:
        raise StructureError("point dimension mismatch")
    return solve(m.rows, [to_fraction(x) for x in point])


def contains_point(m: SimplexMatrix, point: Sequence) -> tuple[bool, list[Fraction]]:
    """Membership in Con(M); faces count as inside."""
    lam = barycentric_coordinates(m, point)
    return all(x >= 0 for x in lam), lam


def vertex(m: SimplexMatrix, i: int) -> tuple[Fraction, ...]:
    """The i-th vertex (1-based column index)."""
    if not 1 <= i <= m.n:
        raise StructureError(f"vertex index {i} out of range 1..{m.n}")
    return tuple(r[i - 1] for r in m.rows)


def center(m: SimplexMatrix) -> tuple[Fraction, ...]:
    """Barycenter (1/n) M (1,...,1)^T, a point of the simplex."""
    return tuple(sum(r, Fraction(0)) / m.n for r in m.rows)


def diameter_decay_bound(n: int, m: int) -> Fraction:
    return Fraction(n - 1, n) ** m


def format_word(word: Sequence[Sequence[int]]) -> str:
    """Comma-separated one-line notations, e.g. ``132,213``; empty word is ``-``."""
    if not word:
        return "-"
    return ",".join("".join(str(s) for s in sigma) if len(sigma) < 10 else
                    ".".join(str(s) for s in sigma) for sigma in word)


def parse_word(text: str, n: int) -> Word:
    text = text.strip()
    if text in ("", "-"):
        return ()
    out = []
    for chunk in text.split(","):
        digits = chunk.split(".") if "." in chunk else list(chunk)
        out.append(check_permutation([int(x) for x in digits], n))
    return tuple(out)


def word_count(n: int, m: int) -> int:
    return math.factorial(n) ** m
