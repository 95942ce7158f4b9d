"""Random exact behaviors.

Batches are returned as integer numerators plus denominators, which is what
the kernels consume; ``to_behavior`` turns one row back into an exact
Behavior.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Behavior
from .polytopes import ns_vertices

GENERAL_DENOMINATOR = 2**32
WEIGHT_LIMIT = 2**20


@dataclass(frozen=True)
class Batch:
    nums: np.ndarray   # (n, 16) int64
    dens: np.ndarray   # (n,) int64

    def __len__(self):
        return self.nums.shape[0]

    def to_behavior(self, i: int) -> Behavior:
        d = int(self.dens[i])
        return Behavior(tuple(Fraction(int(x), d) for x in self.nums[i]))

    def behaviors(self):
        return [self.to_behavior(i) for i in range(len(self))]


def sample_general(n: int, rng: np.random.Generator) -> Batch:
    """Per setting pair: four uniform draws, normalized and rounded to k / 2^32.

    The rounding residual goes to the largest entry so every block sums to
    exactly one.
    """
    u = rng.random((n, 4, 4))
    u /= u.sum(axis=2, keepdims=True)
    k = np.floor(u * GENERAL_DENOMINATOR).astype(np.int64)
    resid = GENERAL_DENOMINATOR - k.sum(axis=2)
    top = k.argmax(axis=2)
    np.put_along_axis(k, top[..., None],
                      np.take_along_axis(k, top[..., None], axis=2) + resid[..., None], axis=2)
    return Batch(k.reshape(n, 16), np.full(n, GENERAL_DENOMINATOR, dtype=np.int64))


def ns_vertex_matrix() -> np.ndarray:
    """The 24 no-signaling vertices scaled by 2 (entries 0, 1 or 2)."""
    return np.array([[int(2 * x) for x in v] for v in ns_vertices().vectors()], dtype=np.int64)


def sample_weights(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, WEIGHT_LIMIT, size=(n, k), dtype=np.int64)


def sample_no_signaling(n: int, rng: np.random.Generator, weights=None) -> Batch:
    """Random convex combinations of the 24 no-signaling vertices, integer weights."""
    from .kernels import mix_batch

    V = ns_vertex_matrix()
    w = sample_weights(n, V.shape[0], rng) if weights is None else np.asarray(weights, dtype=np.int64)
    # an all-zero weight row would be an empty mixture
    w[w.sum(axis=1) == 0, 0] = 1
    return Batch(mix_batch(w, V), 2 * w.sum(axis=1))


def random_general_behavior(rng: np.random.Generator) -> Behavior:
    return sample_general(1, rng).to_behavior(0)


def random_ns_behavior(rng: np.random.Generator) -> Behavior:
    return sample_no_signaling(1, rng).to_behavior(0)


def integer_coefficients(ineqs):
    """Coefficient matrix and bounds scaled to integers; one common scale per row."""
    rows, bounds = [], []
    for q in ineqs:
        vals = list(q.prob_coeffs) + [q.bound]
        scale = np.lcm.reduce([Fraction(v).denominator for v in vals])
        rows.append([int(Fraction(v) * scale) for v in q.prob_coeffs])
        bounds.append(int(q.bound * scale))
    return np.array(rows, dtype=np.int64), np.array(bounds, dtype=np.int64)


def violations(ineqs, batch: Batch):
    """(sample, inequality) index pairs where prob_coeffs . p > bound, exactly."""
    C, b = integer_coefficients(ineqs)
    from .kernels import eval_batch

    lhs = eval_batch(C, batch.nums)
    bad = lhs > b[None, :] * batch.dens[:, None]
    return list(zip(*np.nonzero(bad)))
