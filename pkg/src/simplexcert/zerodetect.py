"""Real zeros on the simplex of a system of integer forms.

The system f_1 = ... = f_k = 0 is folded into the single nonnegative form

    F = sum_i f_i**2 * (x_1 + ... + x_n)**(2 (d - d_i)),   d = max d_i,

which vanishes on the simplex exactly at the common zeros. A covering
frontier of cells on which F has all-positive coefficients proves there is no
zero; an exact rational common zero found at a cell vertex or center proves
there is one. Between the two the report is Undecided, together with the
depth at which the diameter threshold would make the search complete.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import bounds
from .bounds import BoundReport
from .polyring import Form, StructureError, evaluate
from .sds import Certificate, Goal, SdsConfig, _run, form_digest, replay_certificate, Verdict
from .simplexgeo import center, format_word, is_on_simplex, vertex

DEFAULT_BUDGET = 6


class ZeroVerdict(str, Enum):
    FOUND = "ZeroFound"
    NONE = "NoZero"
    UNDECIDED = "Undecided"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SystemInput:
    forms: tuple

    def __init__(self, forms: Sequence[Form]):
        forms = tuple(forms)
        if not forms:
            raise StructureError("a system needs at least one form")
        n = forms[0].n
        for f in forms:
            if f.n != n:
                raise StructureError("all forms in a system must share the variable count")
            if any(c.denominator != 1 for _, c in f.items()):
                raise StructureError("system forms must have integer coefficients")
        object.__setattr__(self, "forms", forms)

    @property
    def n(self) -> int:
        return self.forms[0].n

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.d for f in self.forms)

    @property
    def d(self) -> int:
        return max(self.degrees)


def construct_F(system: SystemInput) -> Form:
    """Sum of squares padded to the common degree 2d."""
    n, d = system.n, system.d
    total = Form.zero(n, 2 * d)
    s = Form.simplex_sum(n)
    for f in system.forms:
        total = total + f * f * s ** (2 * (d - f.d))
    return total


@dataclass(frozen=True)
class Theorem2Bounds:
    H: Fraction
    H_tilde: Fraction
    L_F: Fraction
    prefix: Fraction  # 2d (2d)! C(n+2d-1, 2d) L_F
    min_value: BoundReport
    threshold: BoundReport
    depth: int


def theorem2_threshold(system: SystemInput) -> Theorem2Bounds:
    F = construct_F(system)
    if F.is_zero():
        raise StructureError("every form in the system is identically zero")
    n, two_d = system.n, 2 * system.d
    H = bounds.raw_height(F)
    Ht = bounds.htilde(H, n)
    LF = bounds.normalized_height(F)
    prefix = two_d * math.factorial(two_d) * math.comb(n + two_d - 1, two_d) * LF
    lower = bounds.min_value_lower_bound(n, two_d, Ht)
    p_lo, p_hi = bounds.log2_interval(prefix)
    threshold = BoundReport(
        "theorem2_threshold",
        lower.log2_lo - p_hi,
        lower.log2_hi - p_lo,
        None,
        {"n": n, "two_d": two_d, "H": H, "H_tilde": Ht, "L_F": LF, "prefix": prefix},
    )
    return Theorem2Bounds(H, Ht, LF, prefix, lower, threshold, bounds.required_depth(n, threshold))


class _ZeroProbe:
    """Looks for an exact common zero of the system among cell vertices and the center."""

    def __init__(self, forms: Sequence[Form]):
        self.forms = tuple(forms)

    def __call__(self, word, m):
        points = [(f"vertex{i + 1}", vertex(m, i + 1)) for i in range(m.n)]
        points.append(("center", center(m)))
        for kind, p in points:
            if all(evaluate(f, p) == 0 for f in self.forms):
                return (word, kind, p)
        return None


@dataclass
class ZeroReport:
    verdict: ZeroVerdict
    n: int
    bounds: Theorem2Bounds
    theoretical_depth: int
    searched_depth: int
    budget_depth: int
    witness: tuple | None = None
    witness_word: tuple | None = None
    witness_kind: str = ""
    certificate: Certificate | None = None
    system_sha256: list = field(default_factory=list)

    def to_text(self) -> str:
        b = self.bounds
        lines = [
            "# simplexcert zero report",
            f"verdict={self.verdict}",
            f"n={self.n}",
            f"forms={len(self.system_sha256)}",
        ]
        lines += [f"form_sha256={h}" for h in self.system_sha256]
        lines += [
            f"searched_depth={self.searched_depth}",
            f"budget_depth={self.budget_depth}",
            f"theoretical_depth={self.theoretical_depth}",
            f"bounds.H={_fmt(b.H)}",
            f"bounds.H_tilde={_fmt(b.H_tilde)}",
            f"bounds.L_F={_fmt(b.L_F)}",
            f"bounds.prefix={_fmt(b.prefix)}",
            f"bounds.min_value_log2={b.min_value.log2:.6f}",
            f"bounds.threshold_log2={b.threshold.log2:.6f}",
            f"bounds.threshold_log2_lo={_fmt(b.threshold.log2_lo)}",
        ]
        if self.witness is not None:
            lines += [
                f"witness.word={format_word(self.witness_word)}",
                f"witness.kind={self.witness_kind}",
                f"witness.point={' '.join(_fmt(x) for x in self.witness)}",
            ]
        text = "\n".join(lines) + "\n"
        if self.certificate is not None:
            text += "--- certificate for F\n" + self.certificate.to_text()
        return text


def _fmt(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def detect_zero(system: SystemInput, budget_depth: int = DEFAULT_BUDGET, workers: int = 1,
                traversal: str = "breadth-first", max_nodes: int = 250_000) -> ZeroReport:
    if budget_depth < 0:
        raise ValueError("budget_depth must be nonnegative")
    F = construct_F(system)
    tb = theorem2_threshold(system)
    depth = min(budget_depth, tb.depth)
    config = SdsConfig(max_depth=depth, goal=Goal.STRICT, traversal=traversal,
                       max_nodes=max_nodes, workers=workers)
    out = _run(F, config, None, probe=_ZeroProbe(system.forms))
    report = ZeroReport(
        verdict=ZeroVerdict.UNDECIDED,
        n=system.n,
        bounds=tb,
        theoretical_depth=tb.depth,
        searched_depth=out.depth_used,
        budget_depth=budget_depth,
        system_sha256=[form_digest(f) for f in system.forms],
    )
    if out.probe is not None:
        word, kind, point = out.probe
        report.verdict = ZeroVerdict.FOUND
        report.witness, report.witness_word, report.witness_kind = tuple(point), word, kind
        report.searched_depth = len(word)
        return report
    if out.witness is not None:  # F >= 0 on the simplex, so this cannot happen
        raise AssertionError("negative value of a sum of squares")
    if out.leaves and not out.open:
        report.verdict = ZeroVerdict.NONE
        report.certificate = Certificate(
            verdict=Verdict.POSITIVE, goal=Goal.STRICT, n=F.n, d=F.d,
            form_sha256=form_digest(F), depth_used=max(len(w) for w, _ in out.leaves),
            max_depth=depth, leaves=out.leaves, nodes=out.nodes,
        )
    return report


def verify_zero_report(system: SystemInput, report: ZeroReport) -> bool:
    """Independent re-check of a ZeroFound witness or a NoZero certificate."""
    if report.system_sha256 and report.system_sha256 != [form_digest(f) for f in system.forms]:
        return False
    if report.verdict is ZeroVerdict.FOUND:
        p = report.witness
        return (p is not None and len(p) == system.n and is_on_simplex(p)
                and all(evaluate(f, p) == 0 for f in system.forms))
    if report.verdict is ZeroVerdict.NONE:
        return report.certificate is not None and replay_certificate(construct_F(system), report.certificate)
    return True
