"""Built-in golden checks, run by ``simplexcert self-test``."""
from __future__ import annotations

import random
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

from . import bounds
from .expansion import SignClass, expand_barycentric, sign_classify
from .polyring import Form, evaluate, monomials, parse_form, partial_derivative
from .sds import Goal, SdsConfig, Verdict, replay_certificate, sds_search
from .simplexgeo import permutations
from .zerodetect import SystemInput, ZeroVerdict, detect_zero, theorem2_threshold

EXAMPLE1_FORM = "example1.txt"
EXAMPLE1_CERT = "example1_nonneg_depth1.cert"


def example1_form() -> Form:
    """The degree-20 ternary inequality checked on the six barycentric cells."""
    x, y, z = (Form.variable(3, i) for i in range(3))
    lhs = (y ** 4 * z ** 4 * (y + z) ** 4 * (2 * x + y + z) ** 8
           + x ** 4 * z ** 4 * (x + z) ** 4 * (x + 2 * y + z) ** 8
           + x ** 4 * y ** 4 * (x + y) ** 4 * (x + y + 2 * z) ** 8)
    rhs = (x + y + z) ** 8 * (x + y) ** 4 * (x + z) ** 4 * (y + z) ** 4
    return lhs.scale(3 ** 7) - rhs.scale(2 ** 8)


def golden_dir() -> Path:
    return Path(str(resources.files("simplexcert") / "golden"))


def random_form(rng: random.Random, n: int, d: int, lo: int = -9, hi: int = 9) -> Form:
    while True:
        terms = {m: rng.randint(lo, hi) for m in monomials(n, d)}
        f = Form(n, d, terms)
        if not f.is_zero():
            return f


def random_simplex_point(rng: random.Random, n: int, interior: bool = True, scale: int = 50):
    lo = 1 if interior else 0
    while True:
        w = [rng.randint(lo, scale) for _ in range(n)]
        if sum(w):
            s = sum(w)
            return tuple(Fraction(a, s) for a in w)


def _check_example1_parse(gdir: Path):
    f = parse_form((gdir / EXAMPLE1_FORM).read_text())
    assert f == example1_form(), "golden Example 1 file differs from the constructed form"
    assert f.d == 20 and f.n == 3
    assert evaluate(f, (1, 0, 0)) == 0


def _check_example1_cells(gdir: Path):
    f = parse_form((gdir / EXAMPLE1_FORM).read_text())
    for s in permutations(3):
        cls = sign_classify(expand_barycentric(f, s))
        assert cls is SignClass.ALL_NONNEGATIVE, f"cell {s} classified {cls}"


def _check_example1_certificate(gdir: Path):
    f = parse_form((gdir / EXAMPLE1_FORM).read_text())
    cert = sds_search(f, SdsConfig(max_depth=1, goal=Goal.NONNEGATIVE))
    assert cert.verdict is Verdict.NONNEGATIVE and len(cert.leaves) == 6
    expected = (gdir / EXAMPLE1_CERT).read_text()
    assert cert.to_text() == expected, "certificate differs from the golden copy"
    assert replay_certificate(f, expected), "golden certificate does not replay"


def _check_bounds(gdir: Path):
    x, y = Form.variable(2, 0), Form.variable(2, 1)
    half = (Fraction(1, 2), Fraction(1, 2))
    assert bounds.theorem1_bound(2 * x + y, half).value_exact == Fraction(3, 8)
    assert bounds.theorem1_bound(x * x + y * y, half).value_exact == Fraction(1, 24)
    assert bounds.required_depth(2, Fraction(3, 8)) == 2
    low = bounds.min_value_lower_bound(2, 2, 10)
    assert abs(low.log2 - (-266.3017)) < 1e-3, low.log2
    t2 = theorem2_threshold(SystemInput([x - y]))
    assert abs(t2.threshold.log2 - (-269.886)) < 0.01 and t2.depth == 270


def _check_derivative_bound(gdir: Path):
    rng = random.Random(2101)
    for _ in range(10):
        n, d = rng.randint(2, 3), rng.randint(1, 3)
        f = random_form(rng, n, d)
        bound = bounds.derivative_bound(f)
        for _ in range(5):
            p = random_simplex_point(rng, n, interior=False)
            for k in range(d + 1):
                for alpha in monomials(n, k):
                    assert abs(evaluate(partial_derivative(f, alpha), p)) <= bound


def _check_zero_detection(gdir: Path):
    x, y = Form.variable(2, 0), Form.variable(2, 1)
    assert detect_zero(SystemInput([x + y])).verdict is ZeroVerdict.NONE
    r = detect_zero(SystemInput([x - y]), 1)
    assert r.verdict is ZeroVerdict.FOUND and r.witness == (Fraction(1, 2), Fraction(1, 2))


CHECKS: list[tuple[str, Callable[[Path], None]]] = [
    ("example1-parse", _check_example1_parse),
    ("example1-cells-nonnegative", _check_example1_cells),
    ("example1-certificate", _check_example1_certificate),
    ("bound-spot-values", _check_bounds),
    ("derivative-bound-samples", _check_derivative_bound),
    ("zero-detection", _check_zero_detection),
]


def run_self_test(gdir: Path | None = None, out=print) -> bool:
    gdir = gdir or golden_dir()
    ok = True
    start = time.perf_counter()
    for name, check in CHECKS:
        try:
            check(gdir)
        except Exception as exc:  # report every failure by name
            ok = False
            out(f"FAIL {name}: {type(exc).__name__}: {exc}")
        else:
            out(f"PASS {name}")
    out(f"self-test {'passed' if ok else 'FAILED'} in {time.perf_counter() - start:.1f}s")
    return ok
