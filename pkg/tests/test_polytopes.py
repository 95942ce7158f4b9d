from fractions import Fraction

import numpy as np
import pytest

import oracles as O
from bellscope.core import is_no_signaling, uniform_behavior
from bellscope.lp import simplex_solve, LPProblem, EQ, maximize_over_vertices
from bellscope.polytopes import (
    CANONICAL_PR,
    LOCAL_PROJECTIONS,
    PR_PROJECTIONS,
    check_polytope_dimensions,
    general_vertices,
    local_membership,
    local_vertex,
    local_vertices,
    ns_membership,
    ns_vertices,
    pr_box,
    product_projection,
    vertex_set,
)
from bellscope.sampling import random_general_behavior, random_ns_behavior


def test_counts():
    for k, n in O.VERTEX_COUNTS.items():
        assert len(vertex_set(k)) == n
    assert len({v.p for v in general_vertices().vertices}) == 256


def test_dimensions():
    assert check_polytope_dimensions() == O.DIMENSIONS


def test_projections_match_frozen():
    assert {product_projection(v) for v in local_vertices().vertices} == O.LOCAL_PROJECTIONS
    assert set(LOCAL_PROJECTIONS) == O.LOCAL_PROJECTIONS
    assert [product_projection(pr_box(k)) for k in range(8)] == O.PR_PROJECTIONS
    assert PR_PROJECTIONS == tuple(O.PR_PROJECTIONS)


def test_vertices_match_oracle():
    mine = {tuple(float(x) for x in v) for v in ns_vertices().vectors()}
    ref = {tuple(v) for v in O.ns_vertices()}
    assert mine == ref


def test_canonical_pr():
    b = pr_box(CANONICAL_PR)
    # A xor B = a*b: outcomes differ only at (a', b')
    for a, bb, A, B in [(0, 0, 0, 0), (0, 1, 1, 1), (1, 0, 0, 0), (1, 1, 0, 1)]:
        assert b[a, bb, A, B] == Fraction(1, 2)
    with pytest.raises(ValueError):
        pr_box(8)


def test_pr_boxes_are_no_signaling_not_local():
    for k in range(8):
        b = pr_box(k)
        assert is_no_signaling(b).ok
        res = local_membership(b)
        assert not res.member
        vals = [sum(c * x for c, x in zip(res.normalized, v)) for v in local_vertices().vectors()]
        assert max(vals) == 2 and min(vals) == -2
        assert sum(c * x for c, x in zip(res.normalized, b.p)) > 2


def test_local_points_decompose():
    u = uniform_behavior()
    res = local_membership(u)
    assert res.member and sum(w for _, w in res.weights) == 1
    v = local_vertex((0, 1, 1, 0))
    res = local_membership(v)
    assert res.member and res.weights == [("A[a]=+1 A[a']=-1 B[b]=-1 B[b']=+1", 1)]


def test_ns_membership_consistency():
    rng = np.random.default_rng(11)
    for i in range(1000):
        b = random_ns_behavior(rng) if i % 2 else random_general_behavior(rng)
        r = ns_membership(b, cross_check=True)
        assert r.consistent
        assert r.member == (i % 2 == 1)


def test_simplex_matches_vertex_max():
    rng = np.random.default_rng(5)
    for kind in ("local", "no_signaling"):
        V = vertex_set(kind).vectors()
        for _ in range(25):
            c = [Fraction(int(x)) for x in rng.integers(-5, 6, size=16)]
            vals = [sum(a * b for a, b in zip(c, v)) for v in V]
            r = simplex_solve(LPProblem(vals, [[1] * len(V)], [EQ], [1]))
            assert r.optimum == maximize_over_vertices(c, V)[0]
