from fractions import Fraction

import numpy as np
import pytest

from bellscope.lp import (
    EQ,
    GE,
    LE,
    LPError,
    LPProblem,
    affine_rank,
    check_farkas,
    check_witness,
    hull_membership,
    matrix_rank,
    maximize_over_vertices,
    simplex_solve,
)


def test_box():
    r = simplex_solve(LPProblem([1], [], [], [], bounds=[(0, 1)]))
    assert r.status == "optimal" and r.optimum == 1 and r.witness == [1]


def test_equality():
    r = simplex_solve(LPProblem([1, 1], [[1, 1]], [EQ], [1]))
    assert r.optimum == 1


def test_infeasible_certificate():
    p = LPProblem([1], [[1], [1]], [GE, LE], [1, 0])
    r = simplex_solve(p)
    assert r.status == "infeasible"
    assert check_farkas(p, r.certificate)


def test_unbounded():
    r = simplex_solve(LPProblem([1, 0], [[1, -1]], [LE], [1]))
    assert r.status == "unbounded"


def test_free_and_negative_bounds():
    # min x + y with x free, y in [-3, -1], x >= y - 2
    p = LPProblem([1, 1], [[1, -1]], [GE], [-2], bounds=[(None, None), (-3, -1)], sense="min")
    r = simplex_solve(p)
    assert r.optimum == -8 and check_witness(p, r.witness)


def test_bad_problem():
    with pytest.raises(LPError):
        LPProblem([1, 2], [[1]], [LE], [1])
    with pytest.raises(LPError):
        LPProblem([1], [[1]], ["<>"], [1])


def test_against_scipy():
    scipy = pytest.importorskip("scipy.optimize")
    rng = np.random.default_rng(7)
    for _ in range(60):
        m, n = rng.integers(1, 5), rng.integers(1, 5)
        A = rng.integers(-3, 4, size=(m, n))
        b = rng.integers(-2, 6, size=m)
        c = rng.integers(-3, 4, size=n)
        rel = [LE if rng.random() < 0.6 else EQ for _ in range(m)]
        p = LPProblem(c.tolist(), A.tolist(), rel, b.tolist(), bounds=[(0, 4)] * n)
        r = simplex_solve(p)
        ub = [i for i in range(m) if rel[i] == LE]
        eq = [i for i in range(m) if rel[i] == EQ]
        s = scipy.linprog(-c, A_ub=A[ub] if ub else None, b_ub=b[ub] if ub else None,
                          A_eq=A[eq] if eq else None, b_eq=b[eq] if eq else None,
                          bounds=[(0, 4)] * n, method="highs")
        if s.status == 2:
            assert r.status == "infeasible" and check_farkas(p, r.certificate)
        else:
            assert r.status == "optimal"
            assert float(r.optimum) == pytest.approx(-s.fun, abs=1e-9)
            assert check_witness(p, r.witness)


def test_hull_membership_and_separator():
    sq = [(0, 0), (1, 0), (0, 1), (1, 1)]
    m = hull_membership((Fraction(1, 2), Fraction(1, 3)), sq)
    assert m.member and sum(m.weights) == 1
    out = hull_membership((2, 2), sq)
    assert not out.member
    assert all(sum(c * x for c, x in zip(out.coeffs, v)) <= out.bound for v in sq)
    assert sum(c * 2 for c in out.coeffs) > out.bound


def test_ranks():
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert affine_rank([(0, 0), (1, 0), (0, 1), (1, 1)]) == 3
    assert affine_rank([(0, 0, 0), (1, 1, 1), (2, 2, 2)]) == 2
    rng = np.random.default_rng(3)
    for _ in range(20):
        M = rng.integers(-2, 3, size=(5, 6))
        assert matrix_rank(M.tolist()) == np.linalg.matrix_rank(M)


def test_vertex_maximum():
    best, arg = maximize_over_vertices([1, 1], [(0, 0), (1, 0), (0, 1)])
    assert best == 1 and arg == [1, 2]
