"""Singlet-state behaviors for planar spin measurements."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import OUTCOME_VALUES, Behavior, default_tolerance, flat_index

NORMALIZATION_TOLERANCE = 1e-12
TSIRELSON = 2 * math.sqrt(2)


@dataclass(frozen=True)
class MeasurementAngles:
    """Measurement angles in radians: theta_a, theta_a', theta_b, theta_b'."""

    theta_a: float
    theta_a_prime: float
    theta_b: float
    theta_b_prime: float

    def __post_init__(self):
        for v in self.as_tuple():
            if not math.isfinite(v):
                raise ValueError(f"angle {v} is not finite")

    @classmethod
    def from_degrees(cls, *deg) -> "MeasurementAngles":
        return cls(*(math.radians(d) for d in deg))

    def as_tuple(self) -> tuple:
        return (self.theta_a, self.theta_a_prime, self.theta_b, self.theta_b_prime)

    def reduced(self) -> tuple:
        return tuple(math.fmod(t, 2 * math.pi) % (2 * math.pi) for t in self.as_tuple())

    def party1(self, x):
        return self.as_tuple()[x]

    def party2(self, y):
        return self.as_tuple()[2 + y]


# Angles under which the canonical CHSH expression reaches 2*sqrt(2).
CANONICAL_OPTIMAL = MeasurementAngles(0.0, math.pi / 2, 5 * math.pi / 4, 3 * math.pi / 4)
# A second optimal configuration; here the maximum is on the CHSH variant
# with signs (+, -, -, -).
QUARTER_TURN_OPTIMAL = MeasurementAngles(0.0, math.pi / 2, 3 * math.pi / 4, math.pi / 4)


def correlator(m: MeasurementAngles, x: int, y: int) -> float:
    return -math.cos(m.party1(x) - m.party2(y))


def singlet_behavior(m: MeasurementAngles, tolerance=None) -> Behavior:
    """P(A,B|x,y) = (1 - AB cos(theta_x - theta_y)) / 4, approximate mode."""
    p = [0.0] * 16
    for x, y, A, B in itertools.product(range(2), repeat=4):
        c = math.cos(m.party1(x) - m.party2(y))
        p[flat_index(x, y, A, B)] = (1 - OUTCOME_VALUES[A] * OUTCOME_VALUES[B] * c) / 4
    tol = default_tolerance() if tolerance is None else Fraction(tolerance)
    return Behavior(tuple(p), tolerance=tol)


CHSH_SIGNS = (1, 1, 1, -1)


def chsh_value(m: MeasurementAngles, signs=CHSH_SIGNS) -> float:
    """<ab> + <ab'> + <a'b> - <a'b'> for the singlet, or another sign pattern."""
    return sum(s * correlator(m, x, y)
               for s, (x, y) in zip(signs, itertools.product(range(2), repeat=2)))


def max_chsh_value(m: MeasurementAngles):
    """Largest value over the eight CHSH variants, with the sign pattern that reaches it."""
    from .polytopes import PR_PROJECTIONS

    vals = [(chsh_value(m, s), s) for s in PR_PROJECTIONS]
    return max(vals, key=lambda t: t[0])


class RationalizationError(ValueError):
    pass


@dataclass(frozen=True)
class Rationalized:
    behavior: Behavior
    max_perturbation: float


def _round_block(vals, max_denominator):
    q = [Fraction(v).limit_denominator(max_denominator) for v in vals]
    # put the residual on the largest entry so the block sums to 1 exactly
    k = max(range(len(q)), key=lambda i: q[i])
    q[k] += 1 - sum(q)
    return q


def rationalize(b: Behavior, max_denominator: int = 10**6) -> Rationalized:
    """Nearest exact behavior: round, renormalize each block, then symmetrize marginals.

    Rounding breaks the no-signaling equalities, so every block is shifted by
    half the gap between its marginals and their average over the far
    setting.  The shift keeps each block normalized and makes both parties'
    marginals independent of the far setting exactly.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be positive")
    q = [Fraction(0)] * 16
    for x, y in itertools.product(range(2), repeat=2):
        idx = [flat_index(x, y, A, B) for A in range(2) for B in range(2)]
        for i, v in zip(idx, _round_block([b.p[i] for i in idx], max_denominator)):
            q[i] = v

    def row(x, y, A):
        return q[flat_index(x, y, A, 0)] + q[flat_index(x, y, A, 1)]

    def col(x, y, B):
        return q[flat_index(x, y, 0, B)] + q[flat_index(x, y, 1, B)]

    half = Fraction(1, 2)
    out = list(q)
    for x, y in itertools.product(range(2), repeat=2):
        for A, B in itertools.product(range(2), repeat=2):
            dr = (row(x, 0, A) + row(x, 1, A)) * half - row(x, y, A)
            dc = (col(0, y, B) + col(1, y, B)) * half - col(x, y, B)
            out[flat_index(x, y, A, B)] = q[flat_index(x, y, A, B)] + (dr + dc) * half
    neg = [i for i, v in enumerate(out) if v < 0]
    if neg:
        raise RationalizationError(
            f"entries {neg} became negative; use a larger max_denominator")
    pert = max(abs(float(v) - float(x)) for v, x in zip(out, b.p))
    return Rationalized(Behavior(tuple(out)), pert)
