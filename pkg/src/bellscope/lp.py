"""Exact rational linear programming.

Two-phase tableau simplex over ``fractions.Fraction`` with Bland's rule.
Every optimal witness is substituted back into the constraints, and every
infeasibility verdict carries Farkas multipliers that are re-checked before
they are returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

log = logging.getLogger(__name__)

# Bland's rule cannot cycle; this only guards against implementation bugs.
MAX_PIVOTS = 20_000

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = {LE: LE, EQ: EQ, GE: GE, "≤": LE, "≥": GE, "==": EQ}


class LPError(ValueError):
    pass


@dataclass
class LPProblem:
    """maximize/minimize c.x subject to A x (rel) b and per-variable bounds.

    ``bounds[j]`` is ``(lower, upper)`` with ``None`` meaning infinite;
    the default for every variable is ``(0, None)``.
    """

    objective: Sequence
    A: Sequence[Sequence]
    relations: Sequence[str]
    rhs: Sequence
    bounds: Sequence | None = None
    sense: str = "max"

    def __post_init__(self):
        n = len(self.objective)
        m = len(self.A)
        if len(self.relations) != m or len(self.rhs) != m:
            raise LPError(f"{m} constraint rows but {len(self.relations)} relations, {len(self.rhs)} rhs")
        for i, row in enumerate(self.A):
            if len(row) != n:
                raise LPError(f"row {i} has {len(row)} columns, objective has {n}")
        rel = []
        for r in self.relations:
            if r not in _RELATIONS:
                raise LPError(f"unknown relation {r!r}")
            rel.append(_RELATIONS[r])
        self.relations = rel
        if self.bounds is None:
            self.bounds = [(0, None)] * n
        if len(self.bounds) != n:
            raise LPError("one (lower, upper) pair per variable is required")
        if self.sense not in ("max", "min"):
            raise LPError("sense must be 'max' or 'min'")
        self.objective = [Fraction(c) for c in self.objective]
        self.A = [[Fraction(x) for x in row] for row in self.A]
        self.rhs = [Fraction(x) for x in self.rhs]
        self.bounds = [
            (None if lo is None else Fraction(lo), None if hi is None else Fraction(hi))
            for lo, hi in self.bounds
        ]

    @property
    def n(self) -> int:
        return len(self.objective)


@dataclass
class LPResult:
    status: str  # optimal | infeasible | unbounded
    optimum: Fraction | None = None
    witness: list | None = None
    certificate: list | None = None  # Farkas multipliers, one per constraint row
    pivots: int = 0

    def to_json(self) -> dict:
        from .core import format_rational

        out = {"status": self.status}
        if self.optimum is not None:
            out["optimum"] = format_rational(self.optimum)
        if self.witness is not None:
            out["witness"] = [format_rational(x) for x in self.witness]
        if self.certificate is not None:
            out["certificate"] = [format_rational(x) for x in self.certificate]
        return out


def check_witness(p: LPProblem, x: Sequence) -> bool:
    """Exact feasibility of ``x``."""
    if len(x) != p.n:
        return False
    for (lo, hi), v in zip(p.bounds, x):
        if lo is not None and v < lo:
            return False
        if hi is not None and v > hi:
            return False
    for row, rel, b in zip(p.A, p.relations, p.rhs):
        lhs = sum(a * v for a, v in zip(row, x) if a)
        if rel == LE and lhs > b:
            return False
        if rel == GE and lhs < b:
            return False
        if rel == EQ and lhs != b:
            return False
    return True


def check_farkas(p: LPProblem, z: Sequence) -> bool:
    """True iff multipliers ``z`` prove that ``p`` has no feasible point.

    With z_i >= 0 on <= rows, z_i <= 0 on >= rows and z_i free on = rows,
    every feasible x obeys (z A) x <= z b.  The certificate is valid when
    the minimum of (z A) x over the variable box already exceeds z b.
    """
    if len(z) != len(p.A):
        return False
    for zi, rel in zip(z, p.relations):
        if (rel == LE and zi < 0) or (rel == GE and zi > 0):
            return False
    r = [sum(zi * row[j] for zi, row in zip(z, p.A) if zi) for j in range(p.n)]
    box_min = Fraction(0)
    for rj, (lo, hi) in zip(r, p.bounds):
        if rj > 0:
            if lo is None:
                return False
            box_min += rj * lo
        elif rj < 0:
            if hi is None:
                return False
            box_min += rj * hi
    return box_min > sum(zi * b for zi, b in zip(z, p.rhs))


# --- tableau machinery --------------------------------------------------------


@dataclass
class _Standard:
    """x = shift + D x', x' >= 0, rows G x' (rel) h."""

    shift: list
    columns: list  # per x' column: (original variable, sign)
    G: list
    rel: list
    h: list
    n_orig_rows: int


def _standardize(p: LPProblem) -> _Standard:
    shift = []
    columns = []
    extra = []  # (x' column, upper - lower)
    for j, (lo, hi) in enumerate(p.bounds):
        if lo is not None:
            shift.append(lo)
            columns.append((j, 1))
            if hi is not None:
                # hi < lo gives a negative width; phase 1 then reports infeasibility
                extra.append((len(columns) - 1, hi - lo))
        elif hi is not None:
            shift.append(hi)
            columns.append((j, -1))
        else:
            shift.append(Fraction(0))
            columns.append((j, 1))
            columns.append((j, -1))
    G, rel, h = [], [], []
    for row, r, b in zip(p.A, p.relations, p.rhs):
        G.append([row[j] * s for j, s in columns])
        rel.append(r)
        h.append(b - sum(a * s for a, s in zip(row, shift) if a))
    for col, width in extra:
        G.append([Fraction(int(k == col)) for k in range(len(columns))])
        rel.append(LE)
        h.append(width)
    return _Standard(shift, columns, G, rel, h, len(p.A))


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.T = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis = list(basis)
        self.pivots = 0

    @property
    def width(self):
        return len(self.T[0]) - 1 if self.T else 0

    def pivot(self, k, j):
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise RuntimeError(f"simplex exceeded {MAX_PIVOTS} pivots")
        row = self.T[k]
        piv = row[j]
        if piv != 1:
            row = [x / piv for x in row]
            self.T[k] = row
        nz = [c for c, x in enumerate(row) if x]
        for i, other in enumerate(self.T):
            if i != k:
                f = other[j]
                if f:
                    for c in nz:
                        other[c] -= f * row[c]
        self.basis[k] = j

    def reduced_costs(self, cost):
        d = list(cost) + [Fraction(0)]
        for k, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb:
                for c, x in enumerate(self.T[k]):
                    if x:
                        d[c] -= cb * x
        return d

    def run(self, cost, allowed):
        """Minimise cost over the current basis with Bland's rule."""
        while True:
            d = self.reduced_costs(cost)
            entering = next((j for j in range(self.width) if allowed[j] and d[j] < 0), None)
            if entering is None:
                return "optimal", d
            best = None
            for k, row in enumerate(self.T):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                return "unbounded", d
            self.pivot(best[1], entering)
            if log.isEnabledFor(logging.DEBUG):
                log.debug("pivot %d\n%s", self.pivots, format_tableau(self.T, self.basis))

    def values(self):
        x = [Fraction(0)] * self.width
        for k, bj in enumerate(self.basis):
            x[bj] = self.T[k][-1]
        return x


def format_tableau(T, basis) -> str:
    """Plain-text dump of a tableau, one row per basic variable."""
    lines = []
    for bj, row in zip(basis, T):
        lines.append(f"x{bj:<4}| " + " ".join(f"{str(v):>7}" for v in row[:-1]) + f" | {row[-1]}")
    return "\n".join(lines)


def simplex_solve(p: LPProblem) -> LPResult:
    """Solve ``p`` exactly.  Witnesses and certificates are verified."""
    st = _standardize(p)
    m = len(st.G)
    nx = len(st.columns)
    # slack/surplus columns for inequality rows
    slack_rows = [k for k in range(m) if st.rel[k] != EQ]
    ns = len(slack_rows)
    width = nx + ns + m
    rows, rhs, signs = [], [], []
    for k in range(m):
        r = list(st.G[k]) + [Fraction(0)] * (ns + m)
        if st.rel[k] != EQ:
            r[nx + slack_rows.index(k)] = Fraction(1 if st.rel[k] == LE else -1)
        sigma = -1 if st.h[k] < 0 else 1
        if sigma < 0:
            r = [-x for x in r]
        r[nx + ns + k] = Fraction(1)
        rows.append(r)
        rhs.append(st.h[k] * sigma)
        signs.append(sigma)
    tab = _Tableau(rows, rhs, [nx + ns + k for k in range(m)])

    phase1_cost = [Fraction(0)] * (nx + ns) + [Fraction(1)] * m
    allowed = [True] * width
    _, d = tab.run(phase1_cost, allowed)
    infeasibility = -d[-1]
    if infeasibility > 0:
        # y_k = 1 - reduced cost of artificial k; map back through row negation
        y = [1 - d[nx + ns + k] for k in range(m)]
        z = [-signs[k] * y[k] for k in range(st.n_orig_rows)]
        if not check_farkas(p, z):
            raise RuntimeError("internal error: Farkas certificate failed verification")
        return LPResult("infeasible", certificate=z, pivots=tab.pivots)

    # drive artificials out of the basis, dropping redundant rows
    art0 = nx + ns
    k = 0
    while k < len(tab.T):
        if tab.basis[k] >= art0:
            j = next((c for c in range(art0) if tab.T[k][c] != 0), None)
            if j is None:
                del tab.T[k]
                del tab.basis[k]
                continue
            tab.pivot(k, j)
        k += 1
    allowed = [True] * art0 + [False] * m

    sign = -1 if p.sense == "max" else 1
    cost = [Fraction(0)] * width
    for c, (j, s) in enumerate(st.columns):
        cost[c] = sign * p.objective[j] * s
    status, _ = tab.run(cost, allowed)
    if status == "unbounded":
        return LPResult("unbounded", pivots=tab.pivots)
    xs = tab.values()
    x = list(st.shift)  # one shift per original variable
    for c, (j, s) in enumerate(st.columns):
        x[j] += s * xs[c]
    if not check_witness(p, x):
        raise RuntimeError("internal error: simplex witness is infeasible")
    opt = sum(c * v for c, v in zip(p.objective, x))
    return LPResult("optimal", optimum=opt, witness=x, pivots=tab.pivots)


# --- geometry on top of the LP --------------------------------------------------


@dataclass
class Membership:
    member: bool
    weights: list | None = None
    # separator: coeffs . v <= bound for every vertex, coeffs . point > bound
    coeffs: list | None = None
    bound: Fraction | None = None
    lp: LPResult | None = field(default=None, repr=False)


def hull_membership(point: Sequence, vertices: Sequence[Sequence]) -> Membership:
    """Decide whether ``point`` is a convex combination of ``vertices``."""
    if not vertices:
        raise ValueError("empty vertex list")
    d = len(point)
    if any(len(v) != d for v in vertices):
        raise ValueError("vertices and point differ in dimension")
    n = len(vertices)
    A = [[Fraction(v[i]) for v in vertices] for i in range(d)]
    A.append([Fraction(1)] * n)
    rhs = [Fraction(x) for x in point] + [Fraction(1)]
    prob = LPProblem([0] * n, A, [EQ] * (d + 1), rhs)
    res = simplex_solve(prob)
    if res.status == "optimal":
        w = res.witness
        assert sum(w) == 1 and all(
            sum(wi * Fraction(v[i]) for wi, v in zip(w, vertices)) == Fraction(point[i]) for i in range(d)
        )
        return Membership(True, weights=w, lp=res)
    z = res.certificate
    coeffs = [-zi for zi in z[:d]]
    bound = z[d]
    vals = [sum(c * Fraction(x) for c, x in zip(coeffs, v)) for v in vertices]
    pval = sum(c * Fraction(x) for c, x in zip(coeffs, point))
    if not (max(vals) <= bound < pval):
        raise RuntimeError("internal error: separating functional does not separate")
    return Membership(False, coeffs=coeffs, bound=bound, lp=res)


def matrix_rank(rows: Sequence[Sequence]) -> int:
    """Rank by exact Gaussian elimination."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pr = M[rank]
        for i in range(rank + 1, len(M)):
            f = M[i][c]
            if f:
                f = f / pr[c]
                M[i] = [x - f * y for x, y in zip(M[i], pr)]
        rank += 1
        if rank == len(M):
            break
    return rank


def affine_rank(vectors: Sequence[Sequence]) -> int:
    """Maximum number of affinely independent vectors in the list."""
    if not vectors:
        raise ValueError("affine rank of an empty list")
    v0 = [Fraction(x) for x in vectors[0]]
    diffs = [[Fraction(x) - y for x, y in zip(v, v0)] for v in vectors[1:]]
    return matrix_rank(diffs) + 1


def maximize_over_vertices(objective: Sequence, vertices: Sequence[Sequence]):
    """Exact maximum of a linear functional over a finite list, with all maximisers."""
    if not vertices:
        raise ValueError("empty vertex list")
    obj = [Fraction(c) for c in objective]
    vals = [sum(c * x for c, x in zip(obj, v) if c and x) for v in vertices]
    best = max(vals)
    return best, [i for i, v in enumerate(vals) if v == best]
