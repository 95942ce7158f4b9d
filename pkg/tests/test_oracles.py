"""The frozen reference values, rechecked with floats, numpy ranks and scipy's LP solver."""

import itertools

import numpy as np
import pytest

import oracles as O


def test_vertex_counts_and_dimensions():
    sets = {"local": O.local_vertices(), "no_signaling": O.ns_vertices(),
            "general": O.general_vertices()}
    for k, V in sets.items():
        assert len({tuple(v) for v in V}) == O.VERTEX_COUNTS[k]
        assert O.affine_dim(V) == O.DIMENSIONS[k]


def test_projections():
    P = np.array([O.prod_vec(x, y) for x, y in itertools.product(range(2), repeat=2)])
    loc = {tuple(int(round(t)) for t in P @ v) for v in O.local_vertices()}
    assert loc == O.LOCAL_PROJECTIONS
    pr = [tuple(int(round(t)) for t in P @ v) for v in O.pr_vertices()]
    assert pr == O.PR_PROJECTIONS


def _chsh_vectors():
    out = []
    for s in O.PR_PROJECTIONS:
        out.append(sum(c * O.prod_vec(x, y) for c, (x, y) in zip(s, itertools.product(range(2), repeat=2))))
    return out


def test_chsh_maxima_and_ranks():
    sets = (O.local_vertices(), O.ns_vertices(), O.general_vertices())
    for c in _chsh_vectors():
        assert tuple(int(round((V @ c).max())) for V in sets) == O.FAMILY_MAXIMA["chsh"]
        L = O.local_vertices()
        sat = L[np.isclose(L @ c, 2)]
        assert O.affine_dim(sat) + 1 == O.SATURATION_RANKS[("chsh", "local")]


def test_ns4_base_member():
    c = O.prod_vec(0, 0) + O.prod_vec(1, 0) + O.marg1_vec(0, 0) - O.marg1_vec(1, 0)
    sets = (O.local_vertices(), O.ns_vertices(), O.general_vertices())
    assert tuple(int(round((V @ c).max())) for V in sets) == O.FAMILY_MAXIMA["ns4"]
    N = O.ns_vertices()
    assert O.affine_dim(N[np.isclose(N @ c, 2)]) + 1 == 7


def test_ns6_base_member():
    c = (-O.prod_vec(0, 0) - O.prod_vec(1, 1) + O.marg1_vec(0, 1) + O.marg2_vec(0, 1)
         + O.marg1_vec(1, 0) + O.marg2_vec(1, 0))
    sets = (O.local_vertices(), O.ns_vertices(), O.general_vertices())
    assert tuple(int(round((V @ c).max())) for V in sets) == O.FAMILY_MAXIMA["ns6"]
    N = O.ns_vertices()
    assert O.affine_dim(N[np.isclose(N @ c, 2)]) + 1 == 7


def test_tsirelson():
    ang = (0, np.pi / 2, 3 * np.pi / 4, np.pi / 4)
    p = O.singlet(ang)
    best = max(sum(s * O.prod_vec(x, y) @ p for s, (x, y) in zip(sig, itertools.product(range(2), repeat=2)))
               for sig in O.PR_PROJECTIONS)
    assert best == pytest.approx(O.TSIRELSON, abs=1e-12)


def test_randomness_values():
    pytest.importorskip("scipy")
    A, b = O.randomness_system()
    obj = O.marg1_vec(0, 0) + O.marg2_vec(0, 0)
    assert [O.linprog_extreme(obj, A, b, s) for s in ("max", "min")] == pytest.approx(
        O.RANDOMNESS["sum_equal_direction"], abs=1e-9)
    obj = O.marg1_vec(0, 0) + O.marg1_vec(1, 1)
    assert [O.linprog_extreme(obj, A, b, s) for s in ("max", "min")] == pytest.approx(
        O.RANDOMNESS["odd_party1"], abs=1e-9)
    assert O.linprog_extreme(O.marg1_vec(0, 0), A, b, "max") == pytest.approx(
        O.RANDOMNESS["marginal_free_max"])
    As, bs = O.randomness_system(symmetric=True)
    for v in (O.marg1_vec(0, 0), O.marg1_vec(1, 1), O.marg2_vec(0, 0), O.marg2_vec(1, 1)):
        assert [O.linprog_extreme(v, As, bs, s) for s in ("max", "min")] == pytest.approx(
            O.RANDOMNESS["marginal_symmetric"], abs=1e-9)
    An, bn = O.randomness_system(ns=False)
    assert O.linprog_extreme(O.marg1_vec(0, 0) + O.marg1_vec(1, 1), An, bn, "max") == pytest.approx(
        O.RANDOMNESS["odd_party1_signaling_max"])


def test_gisin_values():
    pytest.importorskip("scipy")
    A, b = O.randomness_system(anti=False, symmetric=True, flip=True)
    assert [O.linprog_extreme(O.marg1_vec(0, 0), A, b, s) for s in ("max", "min")] == pytest.approx(
        O.GISIN["marginal_flip_symmetric"], abs=1e-9)
    A, b = O.randomness_system(anti=False, symmetric=True)
    assert O.linprog_extreme(O.marg1_vec(0, 0), A, b, "max") == pytest.approx(O.GISIN["marginal_no_flip_max"])
