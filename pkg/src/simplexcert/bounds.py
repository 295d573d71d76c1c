"""Explicit bounds: heights, the diameter threshold, subdivision depth and
the minimum-value lower bound for integer systems.

Astronomically small quantities are never expanded; they are carried as an
interval ``[log2_lo, log2_hi]`` of exact rationals whose rounding is directed
outward, so any depth derived from ``log2_lo`` is conservative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .polyring import Form, StructureError, evaluate, to_fraction
from .simplexgeo import is_on_simplex

LOG2_SCALE = 1 << 24  # interval half-width stays below 2**-22
EXACT_DEPTH_LIMIT = 4096


def _nonzero(f: Form) -> None:
    if f.is_zero():
        raise StructureError("height of the zero form is undefined")


def log2_interval(x) -> tuple[Fraction, Fraction]:
    """Rational bracket of log2(x) for a positive rational x."""
    x = to_fraction(x)
    if x <= 0:
        raise ValueError("log2 of a nonpositive number")
    p, q = x.numerator, x.denominator
    if p & (p - 1) == 0 and q & (q - 1) == 0:
        v = Fraction(p.bit_length() - q.bit_length())
        return v, v
    v = math.log2(p) - math.log2(q)
    return (Fraction(math.floor(v * LOG2_SCALE) - 1, LOG2_SCALE),
            Fraction(math.ceil(v * LOG2_SCALE) + 1, LOG2_SCALE))


@dataclass(frozen=True)
class BoundReport:
    kind: str
    log2_lo: Fraction
    log2_hi: Fraction
    value_exact: Fraction | None = None
    inputs: dict = field(default_factory=dict)

    @property
    def authoritative(self) -> str:
        return "exact" if self.value_exact is not None else "log2"

    @property
    def log2(self) -> float:
        return float((self.log2_lo + self.log2_hi) / 2)

    @classmethod
    def from_exact(cls, kind: str, value: Fraction, **inputs) -> BoundReport:
        value = Fraction(value)
        if value > 0:
            lo, hi = log2_interval(value)
        else:
            lo = hi = None
        return cls(kind, lo, hi, value, inputs)

    def to_lines(self) -> list[str]:
        lines = [f"bound.kind={self.kind}", f"bound.authoritative={self.authoritative}"]
        if self.value_exact is not None:
            lines.append(f"bound.value_exact={_fmt(self.value_exact)}")
        if self.log2_lo is not None:
            lines.append(f"bound.log2={self.log2:.6f}")
            lines.append(f"bound.log2_lo={_fmt(self.log2_lo)}")
            lines.append(f"bound.log2_hi={_fmt(self.log2_hi)}")
        for key in sorted(self.inputs):
            value = self.inputs[key]
            lines.append(f"input.{key}={_fmt(value) if isinstance(value, Fraction) else value}")
        return lines


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def normalized_coefficient(expo: Sequence[int], coeff: Fraction, d: int) -> Fraction:
    """C_beta = a_beta * beta! / d! under the multinomial-weighted convention."""
    num = 1
    for e in expo:
        num *= math.factorial(e)
    return coeff * Fraction(num, math.factorial(d))


def normalized_height(f: Form) -> Fraction:
    """L_f: the largest |C_beta|."""
    _nonzero(f)
    return max(abs(normalized_coefficient(e, c, f.d)) for e, c in f.items())


def raw_height(f: Form) -> Fraction:
    """H: the largest absolute raw coefficient."""
    _nonzero(f)
    return max(abs(c) for _, c in f.items())


def derivative_bound(f: Form) -> Fraction:
    """d! * L_f, a bound on every |D^alpha f| with |alpha| <= d over the simplex."""
    return math.factorial(f.d) * normalized_height(f)


def theorem1_denominator(n: int, d: int, height: Fraction) -> Fraction:
    return d * math.factorial(d) * math.comb(n + d - 1, d) * Fraction(height)


def theorem1_bound(f: Form, point: Sequence) -> BoundReport:
    """Diameter below which a simplex containing ``point`` has uniformly signed expansion.

    Equals |f(P)| / (d * d! * C(n+d-1, d) * L_f); zero when f(P) = 0.
    """
    _nonzero(f)
    if f.d < 1:
        raise StructureError("diameter threshold needs degree >= 1")
    if len(point) != f.n or not is_on_simplex(point):
        raise StructureError("point is not on the standard simplex")
    lf = normalized_height(f)
    fp = evaluate(f, point)
    value = abs(fp) / theorem1_denominator(f.n, f.d, lf)
    return BoundReport.from_exact("theorem1", value, n=f.n, d=f.d, L_f=lf, abs_f_at_P=abs(fp))


def required_depth(n: int, threshold) -> int:
    """Smallest N >= 1 with ((n-1)/n)**N < threshold.

    ``threshold`` is a positive rational or a :class:`BoundReport`; log2-only
    reports use the lower end of their interval, which can only raise N.
    """
    if n < 1:
        raise StructureError("n must be positive")
    exact = None
    if isinstance(threshold, BoundReport):
        if threshold.value_exact is not None:
            exact = threshold.value_exact
        else:
            lo = threshold.log2_lo
    else:
        exact = to_fraction(threshold)
    if exact is not None:
        if exact <= 0:
            raise ValueError("threshold must be positive")
        lo = log2_interval(exact)[0]
    elif lo is None:
        raise ValueError("threshold must be positive")
    if n == 1:
        return 1
    ratio = Fraction(n - 1, n)
    r_hi = log2_interval(ratio)[1]
    guess = 1 if lo >= 0 else max(1, math.floor(lo / r_hi) + 1)
    if exact is None or guess > EXACT_DEPTH_LIMIT:
        return guess
    # exact threshold: settle the answer with exact comparisons
    depth = guess
    while depth > 1 and ratio ** (depth - 1) < exact:
        depth -= 1
    while not ratio ** depth < exact:
        depth += 1
    return depth


def htilde(height, n: int) -> Fraction:
    """max(H, 4n + 2)."""
    return max(to_fraction(height), Fraction(4 * n + 2))


def min_value_lower_bound(n: int, two_d: int, h_tilde) -> BoundReport:
    """log2 of (2**(4 - n/2) * H~ * (2d)**n) ** (-n * 2**n * (2d)**n)."""
    h_tilde = to_fraction(h_tilde)
    if n < 1 or two_d < 2 or two_d % 2 or h_tilde < 1:
        raise StructureError("need n >= 1, even 2d >= 2 and H~ >= 1")
    exponent = n * 2 ** n * two_d ** n
    h_lo, h_hi = log2_interval(h_tilde)
    d_lo, d_hi = log2_interval(two_d)
    base = 4 - Fraction(n, 2)
    inner_lo = base + h_lo + n * d_lo
    inner_hi = base + h_hi + n * d_hi
    return BoundReport(
        "min_value_lower_bound",
        -exponent * inner_hi,
        -exponent * inner_lo,
        None,
        {"n": n, "two_d": two_d, "H_tilde": h_tilde, "exponent": -exponent},
    )
