from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from conftest import reflexive_corpus
from toricdegen.lattice import (
    IntMatrix,
    LatticePolytope,
    OriginNotInteriorError,
    bareiss_det,
    is_primitive,
    is_reflexive,
    lattice_points,
    nullspace,
    polar_dual,
    primitive,
    rank,
    rational_rank,
    smith_invariants,
    smith_normal_form,
)


def test_primitive():
    assert primitive((2, 4, -6)) == (1, 2, -3)
    assert primitive((0, -3)) == (0, -1)
    assert is_primitive((3, 5)) and not is_primitive((4, 6))
    with pytest.raises(ValueError, match="zero vector"):
        primitive((0, 0))


def _random_matrix(rng, r, c, lo=-9, hi=9, density=0.7):
    return IntMatrix.from_rows([[rng.randint(lo, hi) if rng.random() < density else 0
                                 for _ in range(c)] for _ in range(r)])


def _check_snf(m: IntMatrix):
    u, s, v = smith_normal_form(m)
    assert (u @ m @ v) == s
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    d = s.diagonal()
    for i in range(s.rows):
        for j in range(s.cols):
            if i != j:
                assert s[i, j] == 0
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert d[: len(nz)] == nz, "zeros must trail"
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return nz


def test_snf_known():
    m = IntMatrix.from_rows([[2, 4], [6, 8]])
    assert _check_snf(m) == [2, 4]
    assert _check_snf(IntMatrix.zeros(3, 2)) == []


def test_snf_contract_random():
    rng = random.Random(2024)
    for trial in range(120):
        r, c = rng.randint(1, 12), rng.randint(1, 12)
        m = _random_matrix(rng, r, c, density=rng.choice([0.3, 0.7, 1.0]))
        nz = _check_snf(m)
        # rank against sympy and the rational oracle
        assert len(nz) == sympy.Matrix(m.to_rows()).rank() == rational_rank(m.to_rows())
        assert smith_invariants(m) == nz
        assert rank(m) == len(nz)


def test_snf_matches_sympy_invariants():
    rng = random.Random(5)
    for _ in range(40):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = _random_matrix(rng, r, c, -6, 6)
        ours = _check_snf(m)
        ref = sympy_snf(sympy.Matrix(m.to_rows()), domain=sympy.ZZ)
        theirs = [abs(int(ref[i, i])) for i in range(min(r, c)) if ref[i, i] != 0]
        assert ours == sorted(theirs)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_matches_sympy(rows):
    assert bareiss_det(rows) == sympy.Matrix(rows).det()


def test_nullspace():
    rows = [[1, 2, 3], [2, 4, 6]]
    basis = nullspace(rows, 3)
    assert len(basis) == 2
    for b in basis:
        assert all(sum(Fraction(a) * x for a, x in zip(r, b)) == 0 for r in rows)


P2_DELTA = [(1, 0), (0, 1), (-1, -1)]
P2_NABLA = [(-1, -1), (2, -1), (-1, 2)]


def test_polar_dual_p2():
    d = LatticePolytope.from_vertices(P2_DELTA)
    n = polar_dual(d)
    assert n.vertex_set() == frozenset(tuple(Fraction(x) for x in v) for v in P2_NABLA)
    assert polar_dual(n) == d
    assert len(lattice_points(n)) == 10
    assert len(lattice_points(d)) == 4


def test_polar_dual_requires_interior_origin():
    with pytest.raises(OriginNotInteriorError):
        polar_dual(LatticePolytope.from_vertices([(0, 0), (1, 0), (0, 1)]))


def test_non_full_dimensional_rejected():
    with pytest.raises(ValueError):
        LatticePolytope.from_vertices([(0, 0), (1, 1), (2, 2)])


def test_reflexive_examples():
    assert is_reflexive(LatticePolytope.from_vertices([(1, 0), (0, 1), (-2, -3)]))
    cross = [tuple(s * int(i == j) for j in range(3)) for i in range(3) for s in (1, -1)]
    assert is_reflexive(LatticePolytope.from_vertices(cross))
    cube = list(itertools.product((-1, 1), repeat=3))
    assert is_reflexive(LatticePolytope.from_vertices(cube))
    assert polar_dual(LatticePolytope.from_vertices(cube)) == LatticePolytope.from_vertices(cross)
    # 2*simplex has interior points besides 0
    assert not is_reflexive(LatticePolytope.from_vertices([(2, 0), (0, 2), (-2, -2)]))
    # dual not integral
    assert not is_reflexive(LatticePolytope.from_vertices([(1, 0), (0, 1), (-1, 0), (0, -2), (1, -2)]))


def test_lattice_points_pick():
    """Pick's theorem as an oracle: A = I + B/2 - 1."""
    rng = random.Random(11)
    for _ in range(25):
        pts = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(5)]
        try:
            P = LatticePolytope.from_vertices(pts)
        except ValueError:
            continue
        hull = sympy.convex_hull(*[sympy.Point(*v) for v in P.vertices])
        area = abs(hull.area)
        pts_in = lattice_points(P)
        interior = [x for x in pts_in if P.interior_contains(x)]
        boundary = len(pts_in) - len(interior)
        assert area == len(interior) + sympy.Rational(boundary, 2) - 1


def test_polar_involution_corpus():
    corpus = reflexive_corpus(24)
    assert len(corpus) >= 20
    assert {P.dim for P in corpus} == {2, 3}
    for P in corpus:
        Q = polar_dual(P)
        assert is_reflexive(Q)
        assert polar_dual(Q) == P
        # defining inequality checked directly on vertex pairs
        assert all(sum(a * b for a, b in zip(u, w)) >= -1 for u in P.vertices for w in Q.vertices)


def test_unimodular_invariance():
    rng = random.Random(3)
    corpus = reflexive_corpus(12, seed=19)
    for P in corpus:
        n = P.dim
        while True:
            g = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            if abs(bareiss_det(g)) == 1:
                break
        Q = P.transform(g)
        assert is_reflexive(Q)
        assert len(lattice_points(Q)) == len(lattice_points(P))
        assert len(lattice_points(polar_dual(Q))) == len(lattice_points(polar_dual(P)))
        assert len(Q.facets) == len(P.facets)


def test_json_roundtrip():
    m = IntMatrix.from_rows([[1, -2], [3, 4], [0, 5]])
    assert IntMatrix.from_json(m.to_json()) == m
    P = LatticePolytope.from_vertices(P2_NABLA)
    assert LatticePolytope.from_json(P.to_json()) == P
