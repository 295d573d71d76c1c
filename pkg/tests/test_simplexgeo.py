import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from simplexcert.polyring import StructureError
from simplexcert.simplexgeo import (SimplexMatrix, barycentric_child, barycentric_matrix, center, contains_point,
                                    diameter, diameter_decay_bound, format_word, parse_word, permutations, product_chain,
                                    shrink_simplex, vertex)

from conftest import simplex_points

EXAMPLE1_MATRICES = [
    [[1, F(1, 2), F(1, 3)], [0, F(1, 2), F(1, 3)], [0, 0, F(1, 3)]],
    [[1, F(1, 2), F(1, 3)], [0, 0, F(1, 3)], [0, F(1, 2), F(1, 3)]],
    [[0, F(1, 2), F(1, 3)], [0, 0, F(1, 3)], [1, F(1, 2), F(1, 3)]],
    [[0, F(1, 2), F(1, 3)], [1, F(1, 2), F(1, 3)], [0, 0, F(1, 3)]],
    [[0, 0, F(1, 3)], [1, F(1, 2), F(1, 3)], [0, F(1, 2), F(1, 3)]],
    [[0, 0, F(1, 3)], [0, F(1, 2), F(1, 3)], [1, F(1, 2), F(1, 3)]],
]


def test_barycentric_identity_is_gn():
    assert barycentric_matrix((1, 2, 3)) == SimplexMatrix(EXAMPLE1_MATRICES[0])


def test_barycentric_set_matches_example1():
    ours = {barycentric_matrix(s) for s in permutations(3)}
    assert ours == {SimplexMatrix(m) for m in EXAMPLE1_MATRICES}
    assert len(ours) == 6


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_barycentric_count_and_determinant(n):
    mats = {barycentric_matrix(s) for s in permutations(n)}
    assert len(mats) == math.factorial(n)
    for m in mats:
        m.validate()
        assert abs(m.determinant()) == F(1, math.factorial(n))


def test_invalid_permutation():
    with pytest.raises(StructureError):
        barycentric_matrix((1, 1, 2))
    with pytest.raises(StructureError):
        barycentric_matrix((1, 2, 4), 3)


def test_product_chain_examples():
    assert product_chain((), 3) == SimplexMatrix.identity(3)
    gg = product_chain([(1, 2), (1, 2)], 2)
    assert gg == SimplexMatrix([[1, F(3, 4)], [0, F(1, 4)]])
    assert vertex(gg, 2) == (F(3, 4), F(1, 4))


@pytest.mark.parametrize("n, m", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2)])
def test_chain_determinant_and_stochasticity(n, m):
    for word in itertools.islice(itertools.product(permutations(n), repeat=m), 60):
        M = product_chain(word, n)
        M.validate()
        assert abs(M.determinant()) == F(1, math.factorial(n)) ** m


def test_diameter_examples():
    for n in range(1, 5):
        assert diameter(SimplexMatrix.identity(n)) in (F(1), F(0))
    assert diameter(SimplexMatrix.identity(3)) == 1
    assert diameter(barycentric_matrix((1, 2, 3))) == F(2, 3)


def _brute_diameter(M):
    cols = M.columns
    return max(max(abs(a - b) for a, b in zip(cols[s], cols[t])) for s in range(M.n) for t in range(M.n))


@pytest.mark.parametrize("n, m", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (3, 4)])
def test_diameter_decay_exhaustive(n, m):
    bound = diameter_decay_bound(n, m)
    for word in itertools.product(permutations(n), repeat=m):
        M = product_chain(word, n)
        assert diameter(M) == _brute_diameter(M) <= bound


def test_diameter_decay_sampled_n4(rng):
    perms = permutations(4)
    for m in range(1, 5):
        for _ in range(40):
            word = [rng.choice(perms) for _ in range(m)]
            assert diameter(product_chain(word, 4)) <= diameter_decay_bound(4, m)


def test_shrink_simplex_examples():
    assert shrink_simplex((F(1, 5), F(4, 5)), 1) == SimplexMatrix.identity(2)
    s = shrink_simplex((F(1, 2), F(1, 2)), F(1, 4))
    assert s == SimplexMatrix([[F(5, 8), F(3, 8)], [F(3, 8), F(5, 8)]])
    s3 = shrink_simplex((F(1, 3), F(1, 3), F(1, 3)), F(1, 2))
    assert s3.determinant() == F(1, 4)
    with pytest.raises(StructureError):
        shrink_simplex((F(1, 2), F(1, 2)), 0)
    with pytest.raises(StructureError):
        shrink_simplex((F(1, 2), F(1, 3)), F(1, 2))


@given(st.integers(2, 4).flatmap(lambda n: simplex_points(n)),
       st.fractions(min_value=0, max_value=1, max_denominator=50).filter(lambda e: e > 0))
@settings(max_examples=60, deadline=None)
def test_shrink_simplex_properties(p, eps):
    s = shrink_simplex(p, eps)
    s.validate()
    assert diameter(s) == eps
    assert s.determinant() == eps ** (len(p) - 1)
    inside, lam = contains_point(s, p)
    assert inside and sum(lam) == 1


def test_contains_point_examples():
    g3 = barycentric_matrix((1, 2, 3))
    for i in range(1, 4):
        inside, lam = contains_point(g3, vertex(g3, i))
        assert inside and lam == [int(j == i) for j in range(1, 4)]
    inside, lam = contains_point(g3, (F(1, 2), F(1, 2), 0))
    assert inside and lam == [0, 1, 0]
    inside, lam = contains_point(g3, (0, 0, 1))
    assert not inside and lam == [0, -2, 3]


def test_vertex_examples():
    assert vertex(SimplexMatrix.identity(3), 2) == (0, 1, 0)
    assert vertex(barycentric_matrix((1, 2, 3)), 3) == (F(1, 3),) * 3
    with pytest.raises(StructureError):
        vertex(SimplexMatrix.identity(3), 4)


def test_center_is_on_simplex():
    M = product_chain([(2, 1, 3), (3, 1, 2)], 3)
    c = center(M)
    assert sum(c) == 1 and all(x > 0 for x in c)


def _locate(n, m, p):
    """Descend the subdivision tree, keeping the first child cell that contains p."""
    word = ()
    for _ in range(m):
        for s in permutations(n):
            if contains_point(product_chain(word + (s,), n), p)[0]:
                word += (s,)
                break
        else:
            return None
    return word


@pytest.mark.parametrize("n", [2, 3])
def test_covering_sampled(n, rng):
    for _ in range(150):
        w = [rng.randint(0, 40) for _ in range(n)]
        if not sum(w):
            continue
        p = tuple(F(a, sum(w)) for a in w)
        for m in (1, 2, 3):
            assert _locate(n, m, p) is not None


def test_invalid_matrices():
    with pytest.raises(StructureError):
        SimplexMatrix([[1, 1], [0, 0]])  # singular
    with pytest.raises(StructureError):
        SimplexMatrix([[F(1, 2), 1], [F(1, 3), 0]])  # column sum
    with pytest.raises(StructureError):
        SimplexMatrix([[2, 0], [-1, 1]])


def test_text_round_trips():
    M = product_chain([(2, 1, 3)], 3)
    assert SimplexMatrix.from_text(M.to_text()) == M
    assert SimplexMatrix.from_inline(M.to_inline()) == M
    word = ((1, 3, 2), (3, 2, 1))
    assert format_word(word) == "132,321"
    assert parse_word(format_word(word), 3) == word
    assert parse_word("-", 3) == ()
    big = (tuple(range(1, 11)),)
    assert parse_word(format_word(big), 10) == big


@pytest.mark.parametrize("n", [2, 3, 4])
def test_barycentric_child_matches_product(n, rng):
    for _ in range(10):
        m = product_chain([rng.choice(permutations(n)) for _ in range(2)], n)
        for s in permutations(n):
            assert barycentric_child(m, s) == m @ barycentric_matrix(s)
