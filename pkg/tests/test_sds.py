import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from simplexcert import bounds
from simplexcert.expansion import SignClass, expand, meets, sign_classify
from simplexcert.golden import example1_form, random_form, random_simplex_point
from simplexcert.polyring import Form, StructureError, evaluate
from simplexcert.sds import (Certificate, Goal, SdsConfig, Verdict, Witness, parse_goal, replay_certificate,
                             sds_search)
from simplexcert.simplexgeo import permutations, product_chain, shrink_simplex

from conftest import xy, xyz


def test_positive_at_depth_zero():
    x, y, z = xyz()
    cert = sds_search((x + y + z) ** 2, SdsConfig(goal=Goal.STRICT))
    assert cert.verdict is Verdict.POSITIVE and cert.depth_used == 0
    assert cert.leaves == [((), SignClass.ALL_POSITIVE)]


def test_negative_witness_at_depth_zero():
    x, y = xy()
    f = -(x + y) ** 2
    cert = sds_search(f)
    assert cert.verdict is Verdict.NEGATIVE
    assert cert.witness.point == (1, 0) and cert.witness.value == -1 and cert.depth_used == 0
    assert replay_certificate(f, cert)


def test_quadratic_positive_at_depth_one():
    x, y = xy()
    f = x * x - x * y + y * y
    cert = sds_search(f, SdsConfig(goal=Goal.STRICT))
    assert cert.verdict is Verdict.POSITIVE and cert.depth_used == 1
    assert [w for w, _ in cert.leaves] == [((1, 2),), ((2, 1),)]
    assert all(c is SignClass.ALL_POSITIVE for _, c in cert.leaves)
    assert replay_certificate(f, cert)


def test_example1_nonnegative_depth_one():
    f = example1_form()
    cert = sds_search(f, SdsConfig(max_depth=1, goal=Goal.NONNEGATIVE))
    assert cert.verdict is Verdict.NONNEGATIVE and cert.depth_used == 1
    assert sorted(w[0] for w, _ in cert.leaves) == permutations(3)
    assert all(c is SignClass.ALL_NONNEGATIVE for _, c in cert.leaves)
    assert (1, 0, 0) in cert.zeros  # vanishing vertices do not stop the proof
    assert replay_certificate(f, cert)
    assert replay_certificate(f, cert.to_text())


def test_example1_strict_goal_is_undecided():
    cert = sds_search(example1_form(), SdsConfig(max_depth=1, goal=Goal.STRICT))
    assert cert.verdict is Verdict.UNDECIDED
    assert len(cert.open) == 6


def test_decide_goal_reports_strongest():
    x, y = xy()
    assert sds_search(x * x - x * y + y * y, SdsConfig(goal="decide")).verdict is Verdict.POSITIVE
    assert sds_search(x * x + x * y, SdsConfig(goal="decide")).verdict is Verdict.NONNEGATIVE
    assert sds_search(x * x + x * y, SdsConfig(goal="nonneg")).verdict is Verdict.NONNEGATIVE


def test_negative_found_by_subdivision():
    x, y = xy()
    f = (x - y) ** 2 - (x * y).scale(F(1, 10))  # negative near the center only
    cert = sds_search(f, SdsConfig(max_depth=4))
    assert cert.verdict is Verdict.NEGATIVE
    assert evaluate(f, cert.witness.point) == cert.witness.value < 0
    assert replay_certificate(f, cert)


def test_zero_form_rejected():
    with pytest.raises(StructureError):
        sds_search(Form.zero(2, 2))


def test_tampered_certificates_fail():
    x, y = xy()
    f = x * x - x * y + y * y
    cert = sds_search(f)
    bad = replace(cert, leaves=[(cert.leaves[0][0], SignClass.MIXED)] + cert.leaves[1:])
    assert not replay_certificate(f, bad)
    missing = replace(cert, leaves=cert.leaves[:1])
    assert not replay_certificate(f, missing)
    other = f + (x * y).scale(F(1, 2 ** 20))
    assert not replay_certificate(other, cert)
    g = -(x + y) ** 2
    neg = sds_search(g)
    flipped = replace(neg, witness=replace(neg.witness, value=-neg.witness.value))
    assert not replay_certificate(g, flipped)
    moved = replace(neg, witness=Witness((), (F(1, 3), F(2, 3)), evaluate(g, (F(1, 3), F(2, 3))), "vertex1"))
    assert not replay_certificate(g, moved)


def test_malformed_certificate_text():
    with pytest.raises(StructureError):
        Certificate.from_text("verdict=Positive\n")
    with pytest.raises(StructureError):
        Certificate.from_text("verdict=Bogus\ngoal=Decide\nn=2\nd=1\nform_sha256=x\ndepth_used=0\nmax_depth=1\n")


def test_traversals_agree():
    rng = random.Random(4)
    x, y, z = xyz()
    f = x * x + y * y + z * z - (x * y + y * z).scale(F(3, 2))
    a = sds_search(f, SdsConfig(traversal="breadth-first", max_depth=4))
    b = sds_search(f, SdsConfig(traversal="depth-first", max_depth=4))
    assert a.verdict is b.verdict
    if a.verdict is Verdict.POSITIVE:
        assert a.leaves == b.leaves


def test_node_cap_gives_undecided():
    x, y, z = xyz()
    f = (x - y) ** 2 + (y - z) ** 2  # zero at the barycenter: never certified strictly
    cert = sds_search(f, SdsConfig(max_depth=5, max_nodes=50))
    assert cert.verdict is Verdict.UNDECIDED and cert.note == "node-cap"


def test_soundness_of_positive_verdicts(rng):
    seen = 0
    for _ in range(60):
        n = rng.randint(2, 3)
        f = random_form(rng, n, rng.randint(1, 3), lo=-2, hi=9)
        cert = sds_search(f, SdsConfig(max_depth=3, max_nodes=2000))
        if cert.verdict is Verdict.POSITIVE:
            seen += 1
            for _ in range(200):
                assert evaluate(f, random_simplex_point(rng, n, interior=False)) > 0
        elif cert.verdict is Verdict.NEGATIVE:
            assert evaluate(f, cert.witness.point) == cert.witness.value < 0
    assert seen > 5


def test_pruning_subtree_keeps_class():
    x, y = xy()
    f = x * x - x * y + y * y
    for s in permutations(2):
        cls = sign_classify(expand(f, product_chain([s], 2)))
        for t in permutations(2):
            for u in permutations(2):
                sub = sign_classify(expand(f, product_chain([s, t, u], 2)))
                assert meets(sub, strict=cls is SignClass.ALL_POSITIVE)


def test_completeness_within_required_depth():
    x, y = xy()
    f = x * x - x * y + y * y  # minimum 1/4 at the barycenter
    lam = F(1, 4)
    threshold = lam / bounds.theorem1_denominator(2, 2, bounds.normalized_height(f))
    N = bounds.required_depth(2, threshold)
    cert = sds_search(f, SdsConfig(max_depth=N))
    assert cert.verdict is Verdict.POSITIVE and cert.depth_used <= N


def test_root_cell_certificates(rng):
    x, y, z = xyz()
    f = x * y + y * z - z * z
    p = (F(1, 3), F(1, 3), F(1, 3))
    eps = bounds.theorem1_bound(f, p).value_exact / 2
    root = shrink_simplex(p, eps)
    cert = sds_search(f, SdsConfig(max_depth=0), root=root)
    assert cert.verdict is Verdict.POSITIVE
    assert replay_certificate(f, cert.to_text())


def test_parallel_matches_serial():
    x, y, z = xyz()
    f = x * x + y * y + z * z - (x * y + y * z + z * x).scale(F(9, 10))
    serial = sds_search(f, SdsConfig(max_depth=3))
    parallel = sds_search(f, SdsConfig(max_depth=3, workers=4))
    assert serial.to_text() == parallel.to_text()


def test_parse_goal_aliases():
    assert parse_goal("nonneg") is Goal.NONNEGATIVE
    assert parse_goal("ProveStrictPositive") is Goal.STRICT
    with pytest.raises(ValueError):
        parse_goal("maybe")


def test_node_matrix_is_lazy_and_pickles_standalone():
    import pickle

    from simplexcert.expansion import IntForm, barycentric_step
    from simplexcert.sds import Node
    from simplexcert.simplexgeo import SimplexMatrix

    x, y, z = xyz()
    g = IntForm.from_form(x * y + z * z)
    root = Node((), SimplexMatrix.identity(3), g)
    word = ((2, 1, 3), (3, 1, 2))
    child = Node(word[:1], None, barycentric_step(g, word[0]), parent=root)
    grand = Node(word, None, barycentric_step(child.form, word[1]), parent=child)
    copy = pickle.loads(pickle.dumps(grand))
    assert copy._parent is None and copy.matrix == product_chain(word, 3)
    assert grand.matrix == product_chain(word, 3)
