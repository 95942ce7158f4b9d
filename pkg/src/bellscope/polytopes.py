"""Vertex sets of the general, local and no-signaling polytopes for two
settings and two outcomes per party, plus membership and facet-rank queries."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    OUTCOME_VALUES,
    PARTY1_SETTINGS,
    PARTY2_SETTINGS,
    Behavior,
    deterministic_behavior,
    is_no_signaling,
    project_expectations,
)
from .lp import affine_rank, hull_membership, maximize_over_vertices

# Product-expectation images of the eight non-local no-signaling vertices,
# in the order they are usually printed; variant k of pr_box() realises row k.
PR_PROJECTIONS = (
    (-1, 1, 1, 1), (1, -1, -1, -1), (1, -1, 1, 1), (-1, 1, -1, -1),
    (1, 1, -1, 1), (-1, -1, 1, -1), (1, 1, 1, -1), (-1, -1, -1, 1),
)
CANONICAL_PR = 6  # A xor B = a*b, projection (1, 1, 1, -1)

# Product-expectation images of the local deterministic vertices.
LOCAL_PROJECTIONS = (
    (1, 1, 1, 1), (-1, -1, -1, -1), (1, 1, -1, -1), (-1, -1, 1, 1),
    (1, -1, 1, -1), (-1, 1, -1, 1), (1, -1, -1, 1), (-1, 1, 1, -1),
)

# Affine dimension of each polytope for the (2,2;2,2) scenario.
POLYTOPE_DIMENSION = {"local": 8, "no_signaling": 8, "general": 12}

KINDS = ("general", "local", "no_signaling")


@dataclass(frozen=True)
class VertexSet:
    kind: str
    vertices: tuple
    labels: tuple

    def __len__(self):
        return len(self.vertices)

    def vectors(self):
        return [v.p for v in self.vertices]


def _sign(i: int) -> str:
    return "+" if OUTCOME_VALUES[i] > 0 else "-"


@functools.lru_cache(maxsize=None)
def general_vertices() -> VertexSet:
    """256 point-mass behaviors: one outcome pair per setting pair."""
    pairs = list(itertools.product(range(2), range(2)))
    outcome_pairs = list(itertools.product(range(2), range(2)))
    verts, labels = [], []
    for choice in itertools.product(outcome_pairs, repeat=4):
        outA = [[0, 0], [0, 0]]
        outB = [[0, 0], [0, 0]]
        parts = []
        for (x, y), (A, B) in zip(pairs, choice):
            outA[x][y], outB[x][y] = A, B
            parts.append(f"{PARTY1_SETTINGS[x]}{PARTY2_SETTINGS[y]}:{_sign(A)}{_sign(B)}")
        verts.append(deterministic_behavior(outA, outB))
        labels.append(" ".join(parts))
    return VertexSet("general", tuple(verts), tuple(labels))


def local_vertex(bits) -> Behavior:
    """Deterministic local behavior from outcome indices (A[a], A[a'], B[b], B[b'])."""
    A0, A1, B0, B1 = bits
    outA = [[A0, A0], [A1, A1]]
    outB = [[B0, B1], [B0, B1]]
    return deterministic_behavior(outA, outB)


def local_label(bits) -> str:
    return "A[a]={}1 A[a']={}1 B[b]={}1 B[b']={}1".format(*(_sign(i) for i in bits))


@functools.lru_cache(maxsize=None)
def local_vertices() -> VertexSet:
    allbits = list(itertools.product(range(2), repeat=4))
    return VertexSet(
        "local",
        tuple(local_vertex(bits) for bits in allbits),
        tuple(local_label(bits) for bits in allbits),
    )


def pr_box(variant: int = CANONICAL_PR) -> Behavior:
    """Non-local no-signaling vertex whose correlators are PR_PROJECTIONS[variant]."""
    if not 0 <= variant < len(PR_PROJECTIONS):
        raise ValueError(f"PR variant must be in 0..7, got {variant}")
    e = PR_PROJECTIONS[variant]
    half = Fraction(1, 2)
    return Behavior.from_function(
        lambda a, b, A, B: half if OUTCOME_VALUES[A] * OUTCOME_VALUES[B] == e[2 * a + b] else 0
    )


@functools.lru_cache(maxsize=None)
def ns_vertices() -> VertexSet:
    loc = local_vertices()
    prs = tuple(pr_box(k) for k in range(8))
    labels = tuple(f"PR[{k}] {PR_PROJECTIONS[k]}" for k in range(8))
    return VertexSet("no_signaling", loc.vertices + prs, loc.labels + labels)


def vertex_set(kind: str) -> VertexSet:
    try:
        return {"general": general_vertices, "local": local_vertices,
                "no_signaling": ns_vertices, "ns": ns_vertices}[kind]()
    except KeyError:
        raise ValueError(f"unknown polytope {kind!r}") from None


def check_polytope_dimensions() -> dict:
    """Recompute affine dimensions from the vertex lists and compare with the table."""
    found = {k: affine_rank(vertex_set(k).vectors()) - 1 for k in KINDS}
    if found != POLYTOPE_DIMENSION:
        raise AssertionError(f"polytope dimensions {found} != {POLYTOPE_DIMENSION}")
    return found


# --- membership ------------------------------------------------------------------


@dataclass
class PolytopeMembership:
    member: bool
    weights: list | None = None      # (label, weight) with weight > 0
    coeffs: list | None = None       # separator: coeffs . v <= bound on every vertex
    bound: Fraction | None = None
    normalized: list | None = None   # separator rescaled to range [-2, 2] on the vertices


def normalize_functional(coeffs, vertices, point):
    """Affinely rescale a separating functional to span [-2, 2] on the vertices.

    Constants are added through the normalization identity (all 16 entries of
    a valid behavior sum to 4), so the result is again a 16-vector whose value
    at ``point`` exceeds 2.
    """
    vals = [sum(c * x for c, x in zip(coeffs, v)) for v in vertices]
    pval = sum(c * x for c, x in zip(coeffs, point))
    lo, hi = min(vals), max(vals)
    if hi > lo:
        scale = Fraction(4) / (hi - lo)
        shift = -2 - scale * lo
    else:
        scale = 1 / (pval - hi)
        shift = 2 - scale * hi
    return [scale * c + shift / 4 for c in coeffs]


def local_membership(b: Behavior) -> PolytopeMembership:
    """LHV decomposition over the 16 deterministic vertices, or a separating functional."""
    vs = local_vertices()
    res = hull_membership(b.p, vs.vectors())
    if res.member:
        w = [(lab, x) for lab, x in zip(vs.labels, res.weights) if x]
        return PolytopeMembership(True, weights=w)
    norm = normalize_functional(res.coeffs, vs.vectors(), b.p)
    return PolytopeMembership(False, coeffs=res.coeffs, bound=res.bound, normalized=norm)


@dataclass
class NsMembership:
    member: bool
    violated: tuple
    hull_member: bool | None = None
    weights: list | None = None

    @property
    def consistent(self) -> bool:
        return self.hull_member is None or self.hull_member == self.member


def ns_membership(b: Behavior, cross_check: bool = False) -> NsMembership:
    """Equality test for no-signaling; optionally confirmed against the 24-vertex hull."""
    rep = is_no_signaling(b)
    out = NsMembership(rep.ok, rep.violated)
    if cross_check and b.exact:
        vs = ns_vertices()
        res = hull_membership(b.p, vs.vectors())
        out.hull_member = res.member
        if res.member:
            out.weights = [(lab, x) for lab, x in zip(vs.labels, res.weights) if x]
    return out


# --- facet saturation --------------------------------------------------------------


@dataclass
class FacetReport:
    valid: bool
    max_value: Fraction
    saturating: list          # indices into the vertex set
    affine_rank: int
    dimension: int

    @property
    def saturating_count(self) -> int:
        return len(self.saturating)

    @property
    def is_facet(self) -> bool:
        return self.valid and self.affine_rank == self.dimension


def facet_saturation_rank(ineq, vs: VertexSet) -> FacetReport:
    """Saturating vertices of ``ineq`` (prob_coeffs . p <= bound) and their affine rank."""
    opt, argmax = maximize_over_vertices(ineq.prob_coeffs, vs.vectors())
    dim = POLYTOPE_DIMENSION[vs.kind]
    if opt > ineq.bound:
        return FacetReport(False, opt, [], 0, dim)
    sat = argmax if opt == ineq.bound else []
    rank = affine_rank([vs.vertices[i].p for i in sat]) if sat else 0
    return FacetReport(True, opt, sat, rank, dim)


def product_projection(b: Behavior) -> tuple:
    return project_expectations(b).products


# --- deterministic signaling protocols ----------------------------------------------


def signaling_protocol_4() -> Behavior:
    """A=B=+1 when (a,b) is measured, A=B=-1 for (a',b), +1 everywhere else.

    One-way signaling: party 2's outcome at b depends on party 1's setting.
    """
    outA = [[0, 0], [1, 0]]
    outB = [[0, 0], [1, 0]]
    return deterministic_behavior(outA, outB)


def signaling_protocol_6() -> Behavior:
    """A=-1 at (a,b) and (a',b'), every other outcome +1."""
    outA = [[1, 0], [0, 1]]
    outB = [[0, 0], [0, 0]]
    return deterministic_behavior(outA, outB)
