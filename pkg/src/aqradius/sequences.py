"""Convergence experiments for operator sequences and q-sequences.

Every trace evaluates a radius/Crawford/gap quantity along a sequence and
checks it against the limiting value pointwise, using the Lipschitz-type
envelopes that the quantities satisfy:

    |omega_{A,q}(T_n) - omega_{A,q}(T)| <= ||T_n - T||_A
    |c_{A,q}(T_n)     - c_{A,q}(T)|     <= ||T_n - T||_A
    |gap(T_n)         - gap(T)|         <= 2 ||T_n - T||_A
    |omega_{A,q_n}(T) - omega_A(T)|     <= sqrt(2 (1 - Re q_n)) ||T||_A

augmented by an estimator slack.  A violated envelope raises, since it means
either the sequence does not converge as declared or an estimator went wrong.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .radius import Budget, a_radius, aq_crawford, aq_radius
from .semispace import Weight, a_opnorm, as_operator, validate_q

__all__ = [
    "DEFAULT_INDICES",
    "ConvergenceTrace",
    "EnvelopeViolation",
    "OperatorSequence",
    "trace_crawford",
    "trace_gaps",
    "trace_q",
    "trace_radius",
    "trace_to_csv",
]

DEFAULT_INDICES = (1, 2, 4, 8, 16, 32, 64, 128, 256)
DEFAULT_SLACK = 5e-3


class EnvelopeViolation(RuntimeError):
    """A trace value escaped its Lipschitz envelope around the target."""


@dataclass
class ConvergenceTrace:
    indices: list[int]
    values: list[float]
    target: float
    rates: list[float]
    envelopes: list[float]


class OperatorSequence:
    """A rule n -> T_n together with the declared limit and the weight."""

    def __init__(self, weight: Weight, term_fn: Callable[[int], np.ndarray], limit):
        self.weight = weight
        self._term_fn = term_fn
        self.limit = as_operator(limit)

    def term(self, n: int) -> np.ndarray:
        return as_operator(self._term_fn(n))

    def deviation(self, n: int) -> float:
        """||T_n - limit||_A, the uniform-convergence modulus at index n."""
        return a_opnorm(self.weight, self.term(n) - self.limit)

    @classmethod
    def perturbation(cls, weight: Weight, limit, direction) -> "OperatorSequence":
        """T_n = limit + direction / n."""
        limit = as_operator(limit)
        direction = as_operator(direction)
        return cls(weight, lambda n: limit + direction / n, limit)

    @classmethod
    def multiplication(cls, psi, phi, grid_points: int = 64) -> "OperatorSequence":
        """Diagonal discretization of multiplication operators on a [0, 1] grid.

        The weight is diag(psi(x_i)) and T_n = diag(phi(n, x_i)); with
        phi(n, .) -> 1 uniformly the sequence converges to the identity.
        """
        grid = np.linspace(0.0, 1.0, grid_points)
        weight = Weight(np.diag(np.asarray(psi(grid), dtype=np.complex128)))
        limit = np.eye(grid_points, dtype=np.complex128)
        return cls(weight, lambda n: np.diag(np.asarray(phi(n, grid), dtype=np.complex128)), limit)

    @classmethod
    def explicit(cls, weight: Weight, terms: Sequence, limit) -> "OperatorSequence":
        """T_n taken from a list (n is 1-based and must stay within the list)."""
        mats = [as_operator(m) for m in terms]

        def term(n: int) -> np.ndarray:
            if not 1 <= n <= len(mats):
                raise IndexError(f"index {n} outside the explicit sequence of length {len(mats)}")
            return mats[n - 1]

        return cls(weight, term, limit)


def _finish(indices, values, target, envelopes, what: str) -> ConvergenceTrace:
    rates = [abs(v - target) for v in values]
    for n, rate, env in zip(indices, rates, envelopes):
        if rate > env:
            raise EnvelopeViolation(
                f"{what}: |value - target| = {rate:.3e} exceeds envelope {env:.3e} at n = {n}"
            )
    return ConvergenceTrace(
        indices=list(indices),
        values=values,
        target=target,
        rates=rates,
        envelopes=envelopes,
    )


def trace_radius(
    seq: OperatorSequence,
    q,
    indices: Sequence[int] = DEFAULT_INDICES,
    budget: Budget | None = None,
    seed: int = 0,
    slack: float = DEFAULT_SLACK,
) -> ConvergenceTrace:
    """q-radius along the sequence vs. the q-radius of the limit."""
    q = validate_q(q)
    target = aq_radius(seq.weight, seq.limit, q, budget=budget, seed=seed).value
    values, envelopes = [], []
    for n in indices:
        values.append(aq_radius(seq.weight, seq.term(n), q, budget=budget, seed=seed).value)
        envelopes.append(seq.deviation(n) + slack)
    return _finish(indices, values, target, envelopes, "radius trace")


def trace_crawford(
    seq: OperatorSequence,
    q,
    indices: Sequence[int] = DEFAULT_INDICES,
    budget: Budget | None = None,
    seed: int = 0,
    slack: float = DEFAULT_SLACK,
) -> ConvergenceTrace:
    """q-Crawford number along the sequence vs. that of the limit."""
    q = validate_q(q)
    target = aq_crawford(seq.weight, seq.limit, q, budget=budget, seed=seed).value
    values, envelopes = [], []
    for n in indices:
        values.append(aq_crawford(seq.weight, seq.term(n), q, budget=budget, seed=seed).value)
        envelopes.append(seq.deviation(n) + slack)
    return _finish(indices, values, target, envelopes, "crawford trace")


def trace_q(
    w: Weight,
    t,
    q_list: Sequence,
    budget: Budget | None = None,
    seed: int = 0,
    slack: float = DEFAULT_SLACK,
    kind: str = "radius",
) -> ConvergenceTrace:
    """Radius (or Crawford) at a q-sequence with Re q_n -> 1 vs. the plain quantity."""
    t = as_operator(t)
    opn = a_opnorm(w, t)
    if kind == "radius":
        target = a_radius(w, t, budget=budget, seed=seed).value
        value_fn = lambda q: aq_radius(w, t, q, budget=budget, seed=seed).value
    elif kind == "crawford":
        target = aq_crawford(w, t, 1.0, budget=budget, seed=seed).value
        value_fn = lambda q: aq_crawford(w, t, q, budget=budget, seed=seed).value
    else:
        raise ValueError("kind must be 'radius' or 'crawford'")
    values, envelopes = [], []
    qs = [validate_q(q) for q in q_list]
    for q in qs:
        values.append(value_fn(q))
        envelopes.append(math.sqrt(max(0.0, 2.0 * (1.0 - q.real))) * opn + slack)
    return _finish(list(range(1, len(qs) + 1)), values, target, envelopes, "q trace")


def trace_gaps(
    seq: OperatorSequence,
    q,
    indices: Sequence[int] = DEFAULT_INDICES,
    budget: Budget | None = None,
    seed: int = 0,
    slack: float = DEFAULT_SLACK,
) -> tuple[ConvergenceTrace, ConvergenceTrace]:
    """Radius gap and Crawford gap along the sequence (2-Lipschitz envelopes)."""
    q = validate_q(q)
    w = seq.weight
    op_lim = a_opnorm(w, seq.limit)
    target_omega = op_lim - aq_radius(w, seq.limit, q, budget=budget, seed=seed).value
    target_crawford = op_lim - aq_crawford(w, seq.limit, q, budget=budget, seed=seed).value
    vals_o, vals_c, envs = [], [], []
    for n in indices:
        t_n = seq.term(n)
        op_n = a_opnorm(w, t_n)
        vals_o.append(op_n - aq_radius(w, t_n, q, budget=budget, seed=seed).value)
        vals_c.append(op_n - aq_crawford(w, t_n, q, budget=budget, seed=seed).value)
        envs.append(2.0 * seq.deviation(n) + slack)
    return (
        _finish(indices, vals_o, target_omega, envs, "radius-gap trace"),
        _finish(indices, vals_c, target_crawford, envs, "crawford-gap trace"),
    )


def trace_to_csv(trace: ConvergenceTrace, path) -> None:
    with open(path, "w") as fh:
        fh.write("n,value,target,rate,envelope\n")
        for n, v, r, e in zip(trace.indices, trace.values, trace.rates, trace.envelopes):
            fh.write(f"{n},{v:.12g},{trace.target:.12g},{r:.12g},{e:.12g}\n")
