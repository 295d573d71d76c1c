"""Compare the compiled and pure-Python expansion kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends must give identical results; the script checks that before
printing timings.
"""
import argparse
import contextlib
import random
import time
from fractions import Fraction

from simplexcert import kernels
from simplexcert.expansion import IntForm, barycentric_step, expand_barycentric
from simplexcert.golden import example1_form, random_form
from simplexcert.polyring import Form
from simplexcert.sds import SdsConfig, sds_search
from simplexcert.simplexgeo import permutations

NAMES = ("taylor_shift", "scale_terms", "permute_terms", "sign_counts")


@contextlib.contextmanager
def backend(module):
    saved = {name: getattr(kernels, name) for name in NAMES}
    for name in NAMES:
        setattr(kernels, name, getattr(module, name))
    try:
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def deep_form():
    x, y, z = (Form.variable(3, i) for i in range(3))
    return (3 * x - 2 * y) ** 2 + (z - y) ** 2 + ((x + y + z) ** 2).scale(Fraction(1, 200))


def chained(f, depth=4):
    """Integer steps along a fixed word, the way a deep search walks a branch."""
    g = IntForm.from_form(f)
    perms = permutations(f.n)
    for k in range(depth):
        g = barycentric_step(g, perms[k % len(perms)])
    return g.coeffs, g.den


WORKLOADS = {
    "example1 six cells (d=20)": lambda: [expand_barycentric(EX1, s) for s in permutations(3)],
    "example1 depth-4 chain": lambda: chained(EX1),
    "n=5 d=8 random form, depth-3 chain": lambda: chained(WIDE, 3),
    "strict search to depth 6 (181 nodes)": lambda: sds_search(deep_form(), SdsConfig(max_depth=7)).to_text(),
}
EX1 = example1_form()
WIDE = random_form(random.Random(5), 5, 8)


def timed(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'workload':40s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in WORKLOADS.items():
        with backend(kernels.python_backend):
            t_py, r_py = timed(fn, args.repeat)
        if kernels.compiled_backend is None:
            print(f"{name:40s} {t_py:10.4f} {'-':>10s} {'-':>8s}")
            continue
        with backend(kernels.compiled_backend):
            t_c, r_c = timed(fn, args.repeat)
        if r_py != r_c:
            raise SystemExit(f"backends disagree on {name!r}")
        print(f"{name:40s} {t_py:10.4f} {t_c:10.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
