from dataclasses import replace
from fractions import Fraction as F

import pytest

from simplexcert.expansion import SignClass, sign_classify
from simplexcert.golden import random_form, random_simplex_point
from simplexcert.bounds import required_depth
from simplexcert.polyring import Form, StructureError, evaluate
from simplexcert.zerodetect import (SystemInput, ZeroVerdict, construct_F, detect_zero, theorem2_threshold,
                                    verify_zero_report)

from conftest import xy, xyz


def test_construct_F_examples():
    x, y = xy()
    assert construct_F(SystemInput([x - y])) == x * x - 2 * x * y + y * y
    assert construct_F(SystemInput([x + y])) == x * x + 2 * x * y + y * y
    assert construct_F(SystemInput([x - y, x])) == 2 * x * x - 2 * x * y + y * y


def test_construct_F_pads_degrees():
    x, y, z = xyz()
    F_ = construct_F(SystemInput([x - y, x * y - z * z]))
    assert F_.d == 4
    assert F_ == (x - y) ** 2 * (x + y + z) ** 2 + (x * y - z * z) ** 2


def test_system_validation():
    x, y = xy()
    with pytest.raises(StructureError):
        SystemInput([])
    with pytest.raises(StructureError):
        SystemInput([x.scale(F(1, 2))])
    with pytest.raises(StructureError):
        SystemInput([x, Form.variable(3, 0)])


def test_zero_set_equivalence(rng):
    x, y, z = xyz()
    systems = [[x - y, y - z], [x * y - z * z], [x - 2 * y, x * x - y * z + z * z]]
    for forms in systems:
        s = SystemInput(forms)
        F_ = construct_F(s)
        for _ in range(100):
            p = random_simplex_point(rng, 3, interior=False, scale=6)
            v = evaluate(F_, p)
            assert v >= 0
            assert (v == 0) == all(evaluate(f, p) == 0 for f in forms)


def test_theorem2_threshold_example():
    x, y = xy()
    tb = theorem2_threshold(SystemInput([x - y]))
    assert (tb.H, tb.H_tilde, tb.L_F, tb.prefix) == (2, 10, 1, 12)
    assert abs(tb.min_value.log2 - (-266.3017)) < 1e-3
    assert abs(tb.threshold.log2 - (-269.886)) < 0.01
    assert tb.depth == 270 == required_depth(2, tb.threshold)


def test_threshold_monotone_in_equations():
    x, y, z = xyz()
    one = theorem2_threshold(SystemInput([x - y]))
    two = theorem2_threshold(SystemInput([x - y, 3 * y - 5 * z]))
    assert two.threshold.log2_hi <= one.threshold.log2_lo


def test_detect_zero_examples():
    x, y = xy()
    r = detect_zero(SystemInput([x + y]))
    assert r.verdict is ZeroVerdict.NONE and r.searched_depth == 0
    assert verify_zero_report(SystemInput([x + y]), r)
    r = detect_zero(SystemInput([x - y]), 1)
    assert r.verdict is ZeroVerdict.FOUND and r.witness == (F(1, 2), F(1, 2)) and r.searched_depth <= 1
    assert r.theoretical_depth == 270
    r = detect_zero(SystemInput([x]))
    assert r.verdict is ZeroVerdict.FOUND and r.witness == (0, 1)


def test_x_minus_y_cells_not_all_positive():
    # F(G_2 X) = x^2 in both cells once the zero is a shared vertex
    from simplexcert.expansion import expand
    from simplexcert.simplexgeo import barycentric_matrix
    x, y = xy()
    F_ = construct_F(SystemInput([x - y]))
    for s in [(1, 2), (2, 1)]:
        assert sign_classify(expand(F_, barycentric_matrix(s))) is not SignClass.ALL_POSITIVE


def test_no_zero_needs_depth():
    x, y = xy()
    s = SystemInput([x - y, x])
    assert detect_zero(s, 1).verdict is ZeroVerdict.UNDECIDED
    r = detect_zero(s, 3)
    assert r.verdict is ZeroVerdict.NONE and verify_zero_report(s, r)


def test_no_zero_soundness(rng):
    x, y, z = xyz()
    s = SystemInput([x + y + 2 * z, x * y + z * z])
    r = detect_zero(s, 4)
    assert r.verdict is ZeroVerdict.NONE
    F_ = construct_F(s)
    for _ in range(500):
        assert evaluate(F_, random_simplex_point(rng, 3, interior=False, scale=30)) > 0


def test_irrational_zero_is_undecided():
    x, y = xy()
    s = SystemInput([x * x - 2 * y * y])  # zero at x = sqrt(2) y, never a rational vertex
    r = detect_zero(s, 4)
    assert r.verdict is ZeroVerdict.UNDECIDED
    assert r.theoretical_depth > r.searched_depth


def test_zero_report_text_and_tamper():
    x, y = xy()
    s = SystemInput([x - y])
    r = detect_zero(s, 1)
    text = r.to_text()
    assert "theoretical_depth=270" in text and "bounds.threshold_log2=-269.886" in text
    assert not verify_zero_report(s, replace(r, witness=(F(1, 3), F(2, 3))))
    assert not verify_zero_report(SystemInput([x - 2 * y]), r)
