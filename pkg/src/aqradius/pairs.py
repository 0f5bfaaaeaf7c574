"""Sampling of unit pairs (x, y) with a prescribed weighted inner product.

The constraint set behind the weighted q-numerical range is

    ||x||_A = ||y||_A = 1,   <x, y>_A = q.

Pairs are produced from a parameterization that satisfies the constraint by
construction: given an A-unit x, an A-unit z A-orthogonal to x and an angle
theta,

    y = conj(q) * x + sqrt(1 - |q|^2) * exp(i theta) * z

is A-unit with <x, y>_A = q exactly in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .semispace import Weight, a_inner, a_norm_vec, as_vector, validate_q

__all__ = ["RankTooLow", "UnitPair", "complete_pair", "sample_pairs"]

_MAX_REDRAWS = 100


class RankTooLow(ValueError):
    """The weight has rank < 2, so no A-orthogonal partner direction exists."""


@dataclass
class UnitPair:
    """An (x, y) pair satisfying the unit-norm and inner-product constraints."""

    x: np.ndarray
    y: np.ndarray
    q_achieved: complex
    constraint_residual: float


def complete_pair(w: Weight, x, z, theta: float, q) -> UnitPair:
    """Build the constraint-satisfying partner of x from an A-orthogonal z.

    Raises if x or z is not A-unit, if z is not A-orthogonal to x, or if the
    constructed pair misses the constraints by more than 1e-8 (which signals
    an ill-conditioned weight).
    """
    q = validate_q(q, allow_zero=True)
    x = as_vector(x, w.dim)
    z = as_vector(z, w.dim)
    if abs(a_norm_vec(w, x) - 1.0) > 1e-9:
        raise ValueError("x is not A-unit")
    if abs(a_norm_vec(w, z) - 1.0) > 1e-9:
        raise ValueError("z is not A-unit")
    if abs(a_inner(w, z, x)) > 1e-9:
        raise ValueError("z is not A-orthogonal to x")

    p = math.sqrt(max(0.0, 1.0 - abs(q) ** 2))
    y = q.conjugate() * x + p * np.exp(1j * theta) * z
    q_achieved = a_inner(w, x, y)
    residual = max(abs(a_norm_vec(w, y) - 1.0), abs(q_achieved - q))
    if residual > 1e-8:
        raise ValueError(
            f"constraint residual {residual:.3e} exceeds 1e-8; weight is ill-conditioned"
        )
    return UnitPair(x=x, y=y, q_achieved=q_achieved, constraint_residual=residual)


def _draw_unit(w: Weight, rng: np.random.Generator) -> np.ndarray:
    """A-unit vector from a complex Gaussian draw projected onto range(A)."""
    for _ in range(_MAX_REDRAWS):
        raw = rng.standard_normal(w.dim) + 1j * rng.standard_normal(w.dim)
        v = w.range_projector @ raw
        nv = a_norm_vec(w, v)
        if nv > 1e-12:
            return v / nv
    raise RuntimeError("failed to draw a nonzero vector in range(weight)")


def sample_pairs(w: Weight, q, count: int, seed: int) -> list[UnitPair]:
    """Draw `count` constraint pairs; deterministic for a fixed seed.

    Requires rank(A) >= 2 unless |q| = 1, in which case y = conj(q) x needs no
    orthogonal direction at all.
    """
    q = validate_q(q, allow_zero=True)
    degenerate = abs(abs(q) - 1.0) <= 1e-12
    if w.rank < 2 and not degenerate:
        raise RankTooLow(
            f"weight rank {w.rank} < 2: the constraint set is empty for |q| < 1"
        )
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(count):
        x = _draw_unit(w, rng)
        if w.rank < 2:
            y = q.conjugate() * x
            q_achieved = a_inner(w, x, y)
            residual = max(abs(a_norm_vec(w, y) - 1.0), abs(q_achieved - q))
            pairs.append(UnitPair(x, y, q_achieved, residual))
            continue
        z = None
        for _ in range(_MAX_REDRAWS):
            cand = _draw_unit(w, rng)
            cand = cand - a_inner(w, cand, x) * x
            nc = a_norm_vec(w, cand)
            if nc > 1e-9:
                z = cand / nc
                break
        if z is None:
            raise RuntimeError("Gram-Schmidt kept breaking down; weight is degenerate")
        theta = rng.uniform(0.0, 2.0 * math.pi)
        pairs.append(complete_pair(w, x, z, theta, q))
    return pairs
