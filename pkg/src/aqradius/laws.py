"""The radius/Crawford inequalities as executable predicates, plus a suite runner.

Each law evaluates both sides on a concrete (weight, matrix, q) instance and
reports the slack.  Since suprema are estimated from below and infima from
above, a law whose *larger* side carries such an estimate can look violated
purely from estimator shortfall; those laws get a loose tolerance and the
suite re-runs near-violations at 4x and then 16x the restart budget before
reporting a failure.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .radius import Budget, a_radius, aq_crawford, aq_radius
from .semispace import (
    Weight,
    a_adjoint,
    a_opnorm,
    as_operator,
    kron,
    validate_q,
)

__all__ = [
    "LawReport",
    "LinComboParams",
    "SuiteConfig",
    "law_app1",
    "law_cor1",
    "law_note",
    "law_t1_1",
    "law_t1_23",
    "law_t1_45",
    "law_t1_78",
    "law_t2",
    "law_t3",
    "law_t4_1",
    "law_t5_1",
    "law_t5_3",
    "reports_csv_summary",
    "reports_to_jsonl",
    "run_suite",
    "summarize_reports",
]

TOL_EXACT = 1e-7
TOL_EQ = 2e-3
TOL_LOOSE = 5e-3
NEAR_ZERO_DENOMINATOR = 1e-6


@dataclass
class LawReport:
    """Outcome of checking one inequality (kind "le") or identity (kind "eq")."""

    law_id: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    tol_law: float
    instance_digest: str
    estimator_budget: Budget
    kind: str = "le"
    skipped: bool = False
    skip_reason: str = ""

    def to_dict(self) -> dict:
        d = {
            "law_id": self.law_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "pass": self.passed,
            "tol_law": self.tol_law,
            "instance_digest": self.instance_digest,
            "budget": {
                "restarts": self.estimator_budget.restarts,
                "iterations": self.estimator_budget.iterations,
                "grid_resolution": self.estimator_budget.grid_resolution,
            },
            "kind": self.kind,
        }
        if self.skipped:
            d["skipped"] = True
            d["skip_reason"] = self.skip_reason
        return d


@dataclass
class LinComboParams:
    """Coefficients (lambda, mu) with the induced normalizer gamma."""

    lam: complex
    mu: complex
    gamma: float

    @classmethod
    def for_q(cls, lam, mu, q) -> "LinComboParams":
        q = validate_q(q)
        g2 = abs(lam) ** 2 + abs(mu) ** 2 + 2.0 * (lam * np.conj(mu) * q).real
        if g2 <= 1e-24:
            raise ValueError("degenerate combination: gamma vanishes")
        return cls(lam=complex(lam), mu=complex(mu), gamma=math.sqrt(g2))


def _report(law_id, lhs, rhs, tol, digest, budget, kind="le") -> LawReport:
    slack = rhs - lhs
    passed = abs(slack) <= tol if kind == "eq" else slack >= -tol
    return LawReport(
        law_id=law_id,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        passed=bool(passed),
        tol_law=float(tol),
        instance_digest=digest,
        estimator_budget=budget,
        kind=kind,
    )


def _skip(law_id, reason, digest, budget) -> LawReport:
    return LawReport(
        law_id=law_id,
        lhs=0.0,
        rhs=0.0,
        slack=0.0,
        passed=True,
        tol_law=0.0,
        instance_digest=digest,
        estimator_budget=budget,
        skipped=True,
        skip_reason=reason,
    )


class _Ev:
    """Cached estimator front-end for one (weight, matrix) instance."""

    def __init__(self, w: Weight, t, seed: int):
        self.w = w
        self.t = as_operator(t)
        self.seed = seed
        self._cache: dict = {}

    def _key(self, op: str, q, budget) -> tuple:
        if q is None:
            qk = None
        else:
            qc = complex(q)
            qk = (round(qc.real, 13), round(qc.imag, 13))
        return (op, qk, budget)

    def opnorm(self) -> float:
        key = self._key("opnorm", None, None)
        if key not in self._cache:
            self._cache[key] = a_opnorm(self.w, self.t)
        return self._cache[key]

    def radius_a(self, budget: Budget) -> float:
        key = self._key("ra", None, budget)
        if key not in self._cache:
            self._cache[key] = a_radius(self.w, self.t, budget=budget, seed=self.seed).value
        return self._cache[key]

    def radius_q(self, q, budget: Budget) -> float:
        key = self._key("rq", q, budget)
        if key not in self._cache:
            self._cache[key] = aq_radius(self.w, self.t, q, budget=budget, seed=self.seed).value
        return self._cache[key]

    def crawford_q(self, q, budget: Budget) -> float:
        key = self._key("cq", q, budget)
        if key not in self._cache:
            self._cache[key] = aq_crawford(self.w, self.t, q, budget=budget, seed=self.seed).value
        return self._cache[key]

    def crawford_a(self, budget: Budget) -> float:
        return self.crawford_q(1.0, budget)


def _digest(w: Weight, t, q, seed: int) -> str:
    t = as_operator(t)
    h = hashlib.sha1()
    h.update(w.a.tobytes())
    h.update(t.tobytes())
    h.update(repr(complex(q)).encode())
    return f"s{seed}-n{t.shape[0]}-{h.hexdigest()[:12]}"


def _sqrt_2_1mre(q: complex) -> float:
    return math.sqrt(max(0.0, 2.0 * (1.0 - q.real)))


# --- individual laws (internal forms working on evaluators) -----------------


def _law_t1_1(ev: _Ev, q, budget, tol, digest) -> LawReport:
    return _report("t1_1", ev.radius_q(q, budget), ev.opnorm(), tol, digest, budget)


def _law_t1_23(ev: _Ev, ev_alpha: _Ev, q, alpha, budget, tol, digest):
    r_scaled = ev_alpha.radius_q(q, budget)
    r_moved = ev.radius_q(alpha * q, budget)
    c_scaled = ev_alpha.crawford_q(q, budget)
    c_moved = ev.crawford_q(alpha * q, budget)
    return (
        _report("t1_2", r_scaled, r_moved, tol, digest, budget, kind="eq"),
        _report("t1_3", c_scaled, c_moved, tol, digest, budget, kind="eq"),
    )


def _composite_q(params: LinComboParams, q: complex, composite: str) -> complex:
    if composite == "proof":
        return (params.lam + np.conj(params.mu) * q) / params.gamma
    return (params.lam + params.mu * np.conj(q)) / params.gamma


def _law_t1_45(ev: _Ev, ev_adj: _Ev, q, params, composite, budget, tol, digest):
    qc = _composite_q(params, q, composite)
    m = abs(qc)
    if m < 1e-12 or m > 1.0 + 1e-12:
        reason = f"composite parameter |{qc:.4f}| outside (0, 1]"
        return (_skip("t1_4", reason, digest, budget), _skip("t1_5", reason, digest, budget))
    al, am = abs(params.lam), abs(params.mu)
    base = al * ev.radius_a(budget)
    rep4 = _report(
        "t1_4",
        params.gamma * ev.radius_q(qc, budget),
        base + am * ev_adj.radius_q(q, budget),
        tol,
        digest,
        budget,
    )
    rep5 = _report(
        "t1_5",
        params.gamma * ev.crawford_q(qc, budget),
        base + am * ev_adj.crawford_q(q, budget),
        tol,
        digest,
        budget,
    )
    return rep4, rep5


def _law_t1_78(ev: _Ev, q, budget, tol, digest):
    if abs(q - 1.0) < 1e-12:
        return (
            _skip("t1_7", "q = 1: correction term degenerates", digest, budget),
            _skip("t1_8", "q = 1: correction term degenerates", digest, budget),
        )
    s = _sqrt_2_1mre(q)
    q78 = (1.0 - q) / s
    corr = s * ev.radius_q(q78, budget)
    rep7 = _report(
        "t1_7", ev.radius_a(budget), ev.radius_q(q, budget) + corr, tol, digest, budget
    )
    rep8 = _report(
        "t1_8", ev.crawford_a(budget), ev.crawford_q(q, budget) + corr, tol, digest, budget
    )
    return rep7, rep8


def _law_note(ev: _Ev, q, budget, tol, digest) -> LawReport:
    lhs = (1.0 - _sqrt_2_1mre(q)) * ev.radius_a(budget)
    return _report("note", lhs, ev.radius_q(q, budget), tol, digest, budget)


def _law_t2(ev: _Ev, q, budget, tol, digest):
    pair_sum = ev.radius_q(q, budget) + ev.radius_q(np.conj(q), budget)
    lower = _report(
        "t2_lower", 2.0 * abs(q.real) * ev.radius_a(budget), pair_sum, tol, digest, budget
    )
    upper_rhs = 2.0 * ev.radius_a(budget) + 2.0 * math.sqrt(2.0) * math.sqrt(
        max(0.0, 1.0 - q.real)
    ) * ev.opnorm()
    upper = _report("t2_upper", pair_sum, upper_rhs, tol, digest, budget)
    return lower, upper


def _law_t4_1(ev: _Ev, q, budget, tol, digest) -> LawReport:
    lhs = abs(ev.radius_q(q, budget) - ev.radius_a(budget))
    return _report("t4_1", lhs, _sqrt_2_1mre(q) * ev.opnorm(), tol, digest, budget)


def _law_t5_1(ev: _Ev, q, budget, tol, digest) -> LawReport:
    lhs = abs(ev.crawford_q(q, budget) - ev.crawford_a(budget))
    return _report("t5_1", lhs, _sqrt_2_1mre(q) * ev.opnorm(), tol, digest, budget)


def _law_t5_3(ev: _Ev, ev_s: _Ev, ev_diff: _Ev, q, budget, tol, digest) -> LawReport:
    lhs = abs(ev.crawford_q(q, budget) - ev_s.crawford_q(q, budget))
    return _report("t5_3", lhs, ev_diff.radius_q(q, budget), tol, digest, budget)


def _law_t3(ev1: _Ev, q1, ev2: _Ev, q2, ev_prod: _Ev, budget, tol, digest):
    q = complex(q1) * complex(q2)
    c1 = ev1.crawford_q(q1, budget)
    c2 = ev2.crawford_q(q2, budget)
    o1 = ev1.radius_q(q1, budget)
    o2 = ev2.radius_q(q2, budget)
    return (
        _report("t3_link1", ev_prod.crawford_q(q, budget), c1 * c2, tol, digest, budget),
        _report("t3_link2", c1 * c2, o1 * o2, tol, digest, budget),
        _report("t3_link3", o1 * o2, ev_prod.radius_q(q, budget), tol, digest, budget),
    )


def _law_cor1(ev1: _Ev, q1, ev2: _Ev, q2, ev_prod: _Ev, budget, tol, digest):
    # scalar consequences of the tensor chain: dividing the sup/inf links by a
    # positive factor (the paper's printed direction for the Crawford pair
    # contradicts the chain; the derivable direction is implemented)
    q = complex(q1) * complex(q2)
    c1 = ev1.crawford_q(q1, budget)
    c2 = ev2.crawford_q(q2, budget)
    o1 = ev1.radius_q(q1, budget)
    o2 = ev2.radius_q(q2, budget)
    op = ev_prod.radius_q(q, budget)
    cp = ev_prod.crawford_q(q, budget)
    reports = []
    pairs = [
        ("cor1_1", c1, o2, op / c1 if c1 > NEAR_ZERO_DENOMINATOR else None),
        ("cor1_2", c2, o1, op / c2 if c2 > NEAR_ZERO_DENOMINATOR else None),
        ("cor1_3", o1, cp / o1 if o1 > NEAR_ZERO_DENOMINATOR else None, c2),
        ("cor1_4", o2, cp / o2 if o2 > NEAR_ZERO_DENOMINATOR else None, c1),
    ]
    for law_id, denom, lhs, rhs in pairs:
        if denom <= NEAR_ZERO_DENOMINATOR or lhs is None or rhs is None:
            reports.append(_skip(law_id, "near-zero denominator", digest, budget))
        else:
            reports.append(_report(law_id, lhs, rhs, tol, digest, budget))
    return tuple(reports)


def _law_app1(ev_s: _Ev, ev_m: _Ev, ev_sum: _Ev, q, budget, tol, digest):
    g_omega = lambda ev: ev.opnorm() - ev.radius_q(q, budget)
    g_crawford = lambda ev: ev.opnorm() - ev.crawford_q(q, budget)
    rep_omega = _report(
        "app1_omega",
        g_omega(ev_sum),
        max(g_omega(ev_s), g_omega(ev_m)),
        tol,
        digest,
        budget,
    )
    rep_crawford = _report(
        "app1_crawford",
        max(g_crawford(ev_s), g_crawford(ev_m)),
        g_crawford(ev_sum),
        tol,
        digest,
        budget,
    )
    return rep_omega, rep_crawford


# --- public single-instance law API ------------------------------------------


def _prep(w, t, q, seed):
    q = validate_q(q)
    return _Ev(w, t, seed), q, _digest(w, t, q, seed)


def law_t1_1(w: Weight, t, q, budget: Budget | None = None, seed: int = 0, tol: float = TOL_EXACT):
    """omega_{A,q}(T) <= ||T||_A."""
    ev, q, digest = _prep(w, t, q, seed)
    return _law_t1_1(ev, q, budget or Budget(), tol, digest)


def law_t1_23(w: Weight, t, q, alpha, budget: Budget | None = None, seed: int = 0, tol: float = TOL_EQ):
    """Phase covariance: the radius/Crawford numbers of alpha T at q equal those of T at alpha q."""
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise ValueError("alpha must be unimodular")
    ev, q, digest = _prep(w, t, q, seed)
    ev_alpha = _Ev(w, alpha * as_operator(t), seed)
    return _law_t1_23(ev, ev_alpha, q, complex(alpha), budget or Budget(), tol, digest)


def law_t1_45(
    w: Weight,
    t,
    q,
    params: LinComboParams,
    budget: Budget | None = None,
    seed: int = 0,
    tol: float = TOL_LOOSE,
    adjoint: str = "weighted",
    composite: str = "statement",
):
    """Linear-combination bounds at the composite parameter (lambda + mu conj(q))/gamma.

    `adjoint` selects the partner operator: "weighted" uses A^+ T^H A, which is
    what the underlying pairing identity requires and holds on all weights;
    "ordinary" uses T^H, which provably fails for skewed weights and is kept
    for diagnosis only.  `composite` can switch to the "proof" variant
    (lambda + conj(mu) q)/gamma of the parameter.
    """
    ev, q, digest = _prep(w, t, q, seed)
    t_adj = a_adjoint(w, t) if adjoint == "weighted" else as_operator(t).conj().T
    ev_adj = _Ev(w, t_adj, seed)
    return _law_t1_45(ev, ev_adj, q, params, composite, budget or Budget(), tol, digest)


def law_t1_78(w: Weight, t, q, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """Reverse triangle bounds recovering the plain radius/Crawford from the q-versions."""
    ev, q, digest = _prep(w, t, q, seed)
    return _law_t1_78(ev, q, budget or Budget(), tol, digest)


def law_note(w: Weight, t, q, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """(1 - sqrt(2(1 - Re q))) omega_A(T) <= omega_{A,q}(T)."""
    ev, q, digest = _prep(w, t, q, seed)
    return _law_note(ev, q, budget or Budget(), tol, digest)


def law_t2(w: Weight, t, q, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """Two-sided chain for omega_{A,q}(T) + omega_{A,conj(q)}(T)."""
    ev, q, digest = _prep(w, t, q, seed)
    return _law_t2(ev, q, budget or Budget(), tol, digest)


def law_t3(w1: Weight, t1, q1, w2: Weight, t2, q2, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """Tensor-product chain c <= c1 c2 <= o1 o2 <= o at q = q1 q2."""
    q1 = validate_q(q1)
    q2 = validate_q(q2)
    ev1 = _Ev(w1, t1, seed)
    ev2 = _Ev(w2, t2, seed)
    w_prod = Weight(kron(w1.a, w2.a))
    ev_prod = _Ev(w_prod, kron(t1, t2), seed)
    digest = _digest(w_prod, ev_prod.t, complex(q1) * complex(q2), seed)
    return _law_t3(ev1, q1, ev2, q2, ev_prod, budget or Budget(), tol, digest)


def law_cor1(w1: Weight, t1, q1, w2: Weight, t2, q2, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """Scalar consequences of the tensor chain (skipping near-zero denominators)."""
    q1 = validate_q(q1)
    q2 = validate_q(q2)
    ev1 = _Ev(w1, t1, seed)
    ev2 = _Ev(w2, t2, seed)
    w_prod = Weight(kron(w1.a, w2.a))
    ev_prod = _Ev(w_prod, kron(t1, t2), seed)
    digest = _digest(w_prod, ev_prod.t, complex(q1) * complex(q2), seed)
    return _law_cor1(ev1, q1, ev2, q2, ev_prod, budget or Budget(), tol, digest)


def law_t4_1(w: Weight, t, q, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """|omega_{A,q}(T) - omega_A(T)| <= sqrt(2(1 - Re q)) ||T||_A."""
    ev, q, digest = _prep(w, t, q, seed)
    return _law_t4_1(ev, q, budget or Budget(), tol, digest)


def law_t5_1(w: Weight, t, q, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """|c_{A,q}(T) - c_A(T)| <= sqrt(2(1 - Re q)) ||T||_A."""
    ev, q, digest = _prep(w, t, q, seed)
    return _law_t5_1(ev, q, budget or Budget(), tol, digest)


def law_t5_3(w: Weight, t, s, q, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """|c_{A,q}(T) - c_{A,q}(S)| <= omega_{A,q}(T - S)."""
    ev, q, digest = _prep(w, t, q, seed)
    ev_s = _Ev(w, s, seed)
    ev_diff = _Ev(w, as_operator(t) - as_operator(s), seed)
    return _law_t5_3(ev, ev_s, ev_diff, q, budget or Budget(), tol, digest)


def law_app1(w1: Weight, s, w2: Weight, m, q, budget: Budget | None = None, seed: int = 0, tol: float = TOL_LOOSE):
    """Direct-sum gap bounds: omega-gap bounded by the block maxima, Crawford-gap from below."""
    q = validate_q(q)
    s = as_operator(s)
    m = as_operator(m)
    ev_s = _Ev(w1, s, seed)
    ev_m = _Ev(w2, m, seed)
    n1, n2 = s.shape[0], m.shape[0]
    a_sum = np.zeros((n1 + n2, n1 + n2), dtype=np.complex128)
    a_sum[:n1, :n1] = w1.a
    a_sum[n1:, n1:] = w2.a
    t_sum = np.zeros_like(a_sum)
    t_sum[:n1, :n1] = s
    t_sum[n1:, n1:] = m
    w_sum = Weight(a_sum)
    ev_sum = _Ev(w_sum, t_sum, seed)
    digest = _digest(w_sum, t_sum, q, seed)
    return _law_app1(ev_s, ev_m, ev_sum, q, budget or Budget(), tol, digest)


# --- randomized suite --------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    """Configuration of the randomized verification suite (deterministic per seed)."""

    n_instances: int = 200
    dims: tuple[int, ...] = (2, 3, 4)
    seed: int = 0
    budget: Budget = Budget(restarts=32, iterations=200, grid_resolution=128)
    tol_law: float = TOL_EXACT
    tol_eq: float = TOL_EQ
    tol_loose: float = TOL_LOOSE
    forced_q1_fraction: float = 0.1


def _crandn(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _random_weight(rng: np.random.Generator, n: int) -> Weight:
    z = _crandn(rng, n)
    u = np.linalg.qr(z)[0]
    d = np.exp(rng.uniform(math.log(0.1), math.log(10.0), n))
    return Weight((u * d) @ u.conj().T)


def _random_q(rng: np.random.Generator, forced_q1_fraction: float) -> complex:
    if rng.random() < forced_q1_fraction:
        return 1.0 + 0.0j
    modulus = 1.0 - rng.random()  # uniform on (0, 1]
    phase = rng.uniform(0.0, 2.0 * math.pi)
    return modulus * complex(math.cos(phase), math.sin(phase))


def _ladder(make_reports, budget: Budget, unsafe: bool):
    reports = make_reports(budget)
    if all(r.passed for r in reports) or not unsafe:
        return reports
    reports = make_reports(budget.scaled(4))
    if all(r.passed for r in reports):
        return reports
    return make_reports(budget.scaled(16))


def run_suite(config: SuiteConfig) -> list[LawReport]:
    """Run every law on randomized instances; deterministic for a fixed config."""
    all_reports: list[LawReport] = []
    for idx in range(config.n_instances):
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, idx)))
        n = int(config.dims[rng.integers(len(config.dims))])
        w = _random_weight(rng, n)
        t = _crandn(rng, n)
        q = _random_q(rng, config.forced_q1_fraction)
        alpha = complex(np.exp(2j * math.pi * rng.random()))
        lam = complex(rng.standard_normal() + 1j * rng.standard_normal())
        mu = complex(rng.standard_normal() + 1j * rng.standard_normal())
        # independent small partner instance for the tensor and direct-sum laws
        w2 = _random_weight(rng, 2)
        t2 = _crandn(rng, 2)
        q2 = _random_q(rng, config.forced_q1_fraction)
        s_mat = t + 0.05 * _crandn(rng, n)
        est_seed = int(np.random.SeedSequence((config.seed, idx, 0xE57)).generate_state(1)[0])

        digest = _digest(w, t, q, est_seed)
        ev = _Ev(w, t, est_seed)
        ev_alpha = _Ev(w, alpha * t, est_seed)
        ev_adj = _Ev(w, a_adjoint(w, t), est_seed)
        ev_s = _Ev(w, s_mat, est_seed)
        ev_diff = _Ev(w, t - s_mat, est_seed)
        ev2 = _Ev(w2, t2, est_seed)
        w_prod = Weight(kron(w.a, w2.a))
        ev_prod = _Ev(w_prod, kron(t, t2), est_seed)
        a_sum = np.zeros((n + 2, n + 2), dtype=np.complex128)
        a_sum[:n, :n] = w.a
        a_sum[n:, n:] = w2.a
        t_sum = np.zeros_like(a_sum)
        t_sum[:n, :n] = t
        t_sum[n:, n:] = t2
        ev_sum = _Ev(Weight(a_sum), t_sum, est_seed)

        try:
            params = LinComboParams.for_q(lam, mu, q)
        except ValueError:
            params = None

        groups = [
            (lambda b: [_law_t1_1(ev, q, b, config.tol_law, digest)], False),
            (lambda b: list(_law_t1_23(ev, ev_alpha, q, alpha, b, config.tol_eq, digest)), True),
            (lambda b: list(_law_t1_78(ev, q, b, config.tol_loose, digest)), True),
            (lambda b: [_law_note(ev, q, b, config.tol_loose, digest)], True),
            (lambda b: list(_law_t2(ev, q, b, config.tol_loose, digest)), True),
            (lambda b: [_law_t4_1(ev, q, b, config.tol_loose, digest)], True),
            (lambda b: [_law_t5_1(ev, q, b, config.tol_loose, digest)], True),
            (lambda b: [_law_t5_3(ev, ev_s, ev_diff, q, b, config.tol_loose, digest)], True),
            (lambda b: list(_law_t3(ev, q, ev2, q2, ev_prod, b, config.tol_loose, digest)), True),
            (lambda b: list(_law_cor1(ev, q, ev2, q2, ev_prod, b, config.tol_loose, digest)), True),
            (lambda b: list(_law_app1(ev, ev2, ev_sum, q2, b, config.tol_loose, digest)), True),
        ]
        if params is not None:
            groups.insert(
                2,
                (
                    lambda b: list(
                        _law_t1_45(ev, ev_adj, q, params, "statement", b, config.tol_loose, digest)
                    ),
                    True,
                ),
            )
        for make_reports, unsafe in groups:
            all_reports.extend(_ladder(make_reports, config.budget, unsafe))

    all_reports.sort(key=lambda r: (r.instance_digest, r.law_id))
    return all_reports


def summarize_reports(reports: list[LawReport]) -> list[dict]:
    """Per-law pass rate and minimum slack (skips excluded)."""
    by_law: dict[str, list[LawReport]] = {}
    for rep in reports:
        by_law.setdefault(rep.law_id, []).append(rep)
    rows = []
    for law_id in sorted(by_law):
        reps = [r for r in by_law[law_id] if not r.skipped]
        n_skipped = sum(1 for r in by_law[law_id] if r.skipped)
        if reps:
            pass_rate = sum(1 for r in reps if r.passed) / len(reps)
            min_slack = min(r.slack for r in reps)
        else:
            pass_rate = 1.0
            min_slack = 0.0
        rows.append(
            {
                "law_id": law_id,
                "pass_rate": pass_rate,
                "min_slack": min_slack,
                "n_checked": len(reps),
                "n_skipped": n_skipped,
            }
        )
    return rows


def reports_to_jsonl(reports: list[LawReport], path) -> None:
    with open(path, "w") as fh:
        for rep in reports:
            fh.write(json.dumps(rep.to_dict()) + "\n")


def reports_csv_summary(reports: list[LawReport], path) -> None:
    rows = summarize_reports(reports)
    with open(path, "w") as fh:
        fh.write("law_id,pass_rate,min_slack\n")
        for row in rows:
            fh.write(f"{row['law_id']},{row['pass_rate']:.12g},{row['min_slack']:.12g}\n")
