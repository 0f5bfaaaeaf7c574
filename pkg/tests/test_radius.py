import numpy as np
import pytest

from aqradius import (
    LOWER_BOUND_OF_SUP,
    TWO_SIDED,
    UPPER_BOUND_OF_INF,
    Budget,
    NotABounded,
    RankTooLow,
    Weight,
    a_crawford,
    a_inner,
    a_opnorm,
    a_radius,
    aq_crawford,
    aq_radius,
    gaps,
    oracle_grid,
    reduce_to_range,
)
from conftest import crandn, random_pd_weight, random_q

EX1 = np.array([[0.0, 1.0 / 70.0], [0.0, 0.0]], dtype=complex)
EX2 = np.array([[0.0, 1.0 / 24.0], [0.0, 0.0]], dtype=complex)
JORDAN3 = np.diag([1.0, 1.0], k=1).astype(complex)
I2 = Weight.identity(2)
I3 = Weight.identity(3)


def witness_value(w, t, est):
    return abs(a_inner(w, np.asarray(t) @ est.witness_x, est.witness_y))


class TestARadius:
    def test_paper_halved_norm_nilpotent(self):
        est = a_radius(I2, EX2)
        assert est.value == pytest.approx(1 / 48, abs=1e-12)
        assert est.direction == TWO_SIDED

    def test_paper_jordan_block(self):
        assert a_radius(I3, JORDAN3).value == pytest.approx(1 / np.sqrt(2), abs=1e-10)

    def test_hermitian_spectral_radius(self):
        assert a_radius(I2, np.diag([-2.0, 1.0])).value == pytest.approx(2.0, abs=1e-12)

    def test_witness_reproduces_value(self, rng):
        w = random_pd_weight(rng, 3)
        t = crandn(rng, 3, 3)
        est = a_radius(w, t)
        assert witness_value(w, t, est) == pytest.approx(est.value, abs=1e-7)


class TestAqRadius:
    @pytest.mark.parametrize("q", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_example1_formula(self, q):
        target = (1 + np.sqrt(1 - q * q)) / 140
        assert aq_radius(I2, EX1, q).value == pytest.approx(target, abs=1e-6)

    @pytest.mark.parametrize("q", [0.1, 0.4, 1.0])
    def test_scalar_formula(self, q):
        est = aq_radius(I2, np.eye(2) / 20, q)
        assert est.value == pytest.approx(q / 20, abs=1e-10)

    def test_jordan_li_nakazato_value(self):
        q = 0.75
        target = 0.125 * np.sqrt(
            27 + 18 * q - 13 * q**2 + (9 + 7 * q) * np.sqrt((1 - q) * (9 + 7 * q))
        )
        assert aq_radius(I3, JORDAN3, q).value == pytest.approx(target, abs=1e-5)

    def test_q_one_matches_phase_sweep(self, rng):
        for _ in range(8):
            n = int(rng.integers(2, 5))
            w = random_pd_weight(rng, n)
            t = crandn(rng, n, n)
            assert aq_radius(w, t, 1.0).value == pytest.approx(
                a_radius(w, t).value, abs=1e-6
            )

    def test_direction_label(self):
        assert aq_radius(I2, EX1, 0.5).direction == LOWER_BOUND_OF_SUP

    def test_rank_too_low(self):
        w = Weight.diagonal([1.0, 0.0])
        with pytest.raises(RankTooLow):
            aq_radius(w, np.diag([1.0, 0.0]), 0.5)

    def test_rank_one_degenerate_q(self):
        w = Weight.diagonal([1.0, 0.0])
        est = aq_radius(w, np.diag([3.0, 0.0]), 1.0)
        assert est.value == pytest.approx(3.0, abs=1e-10)

    def test_not_a_bounded_propagates(self):
        w = Weight.diagonal([1.0, 0.0])
        with pytest.raises(NotABounded):
            aq_radius(w, np.array([[0, 1], [0, 0]], dtype=complex), 1.0)

    def test_witness_is_constraint_pair_reproducing_value(self, rng):
        for _ in range(6):
            w = random_pd_weight(rng, 3)
            t = crandn(rng, 3, 3)
            q = random_q(rng)
            est = aq_radius(w, t, q)
            assert witness_value(w, t, est) == pytest.approx(est.value, abs=1e-7)
            assert a_inner(w, est.witness_x, est.witness_y) == pytest.approx(q, abs=1e-9)

    def test_depends_only_on_q_modulus(self, rng):
        w = random_pd_weight(rng, 3)
        t = crandn(rng, 3, 3)
        v1 = aq_radius(w, t, 0.6).value
        v2 = aq_radius(w, t, 0.6j).value
        assert v1 == pytest.approx(v2, abs=2e-3)


class TestAqCrawford:
    @pytest.mark.parametrize("q", [0.2, 0.5, 0.9])
    def test_nilpotent_vanishes(self, q):
        assert aq_crawford(I2, EX1, q).value == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("q", [0.3, 0.8, 1.0])
    def test_scalar_formula(self, q):
        est = aq_crawford(I2, np.eye(2) / 20, q)
        assert est.value == pytest.approx(q / 20, abs=1e-10)
        assert est.direction == UPPER_BOUND_OF_INF

    def test_positive_diagonal_crawford_at_q_one(self):
        assert aq_crawford(I2, np.diag([1.0, 3.0]), 1.0).value == pytest.approx(
            1.0, abs=1e-6
        )

    def test_a_crawford_is_q_one_specialization(self, rng):
        w = random_pd_weight(rng, 3)
        t = crandn(rng, 3, 3)
        assert a_crawford(w, t).value == aq_crawford(w, t, 1.0).value

    def test_witness_reproduces_value(self, rng):
        for _ in range(6):
            n = int(rng.integers(2, 5))
            w = random_pd_weight(rng, n)
            t = crandn(rng, n, n)
            q = random_q(rng)
            est = aq_crawford(w, t, q)
            assert witness_value(w, t, est) == pytest.approx(est.value, abs=1e-7)
            assert a_inner(w, est.witness_x, est.witness_y) == pytest.approx(q, abs=1e-9)


class TestGaps:
    @pytest.mark.parametrize("q", [0.3, 0.8 + 0.1j, 1.0])
    def test_identity_gaps(self, q):
        gw, gc = gaps(I2, np.eye(2), q)
        assert gw.gap == pytest.approx(1 - abs(q), abs=1e-8)
        assert gc.gap == pytest.approx(1 - abs(q), abs=1e-8)

    def test_example1_gap_at_q_one(self):
        gw, _ = gaps(I2, EX1, 1.0)
        assert gw.op_norm == pytest.approx(1 / 70, abs=1e-15)
        assert gw.gap == pytest.approx(1 / 140, abs=1e-8)

    def test_gap_identity_holds(self, rng):
        w = random_pd_weight(rng, 3)
        t = crandn(rng, 3, 3)
        gw, gc = gaps(w, t, 0.7)
        assert gw.gap == gw.op_norm - gw.radius_or_crawford
        assert gc.gap == gc.op_norm - gc.radius_or_crawford
        assert gw.gap >= -1e-7


class TestOracleGrid:
    def test_example1_against_formula(self):
        lo_sup, _ = oracle_grid(I2, EX1, 0.5, resolution=400)
        target = (1 + np.sqrt(0.75)) / 140
        assert lo_sup == pytest.approx(target, abs=2e-4)
        assert lo_sup <= target + 1e-12

    def test_zero_matrix(self):
        assert oracle_grid(I2, np.zeros((2, 2)), 0.5, 64) == (0.0, 0.0)

    def test_hermitian_q_one_matches_eigenvalues(self):
        t = np.diag([-2.0, 1.0]).astype(complex)
        lo_sup, up_inf = oracle_grid(I2, t, 1.0, resolution=200)
        assert lo_sup == pytest.approx(2.0, abs=1e-6)  # spectral radius
        assert up_inf == pytest.approx(0.0, abs=1e-6)  # 0 is inside [-2, 1]

    def test_rejects_large_dimension(self, rng):
        w = Weight.identity(4)
        with pytest.raises(ValueError, match="<= 3"):
            oracle_grid(w, crandn(rng, 4, 4), 0.5)

    def test_estimators_agree_with_oracle(self, rng):
        for n in (2, 3):
            for _ in range(2):
                w = random_pd_weight(rng, n)
                t = crandn(rng, n, n)
                q = random_q(rng)
                lo_sup, up_inf = oracle_grid(w, t, q, resolution=200)
                rad = aq_radius(w, t, q).value
                cra = aq_crawford(w, t, q).value
                assert rad >= lo_sup - 1e-6
                assert cra <= up_inf + 1e-6
                assert rad == pytest.approx(lo_sup, abs=5e-3)
                assert cra == pytest.approx(up_inf, abs=5e-3)


class TestEstimatorContracts:
    def test_monotone_budget_in_restarts(self, rng):
        w = random_pd_weight(rng, 3)
        t = crandn(rng, 3, 3)
        q = 0.45
        small = Budget(restarts=4, iterations=60)
        rad_small = aq_radius(w, t, q, small, seed=9).value
        rad_big = aq_radius(w, t, q, small.scaled(2), seed=9).value
        assert rad_big >= rad_small - 1e-12
        cra_small = aq_crawford(w, t, q, small, seed=9).value
        cra_big = aq_crawford(w, t, q, small.scaled(2), seed=9).value
        assert cra_big <= cra_small + 1e-12

    def test_deterministic_for_fixed_seed(self, rng):
        w = random_pd_weight(rng, 3)
        t = crandn(rng, 3, 3)
        e1 = aq_radius(w, t, 0.3, Budget(8, 80), seed=5)
        e2 = aq_radius(w, t, 0.3, Budget(8, 80), seed=5)
        assert e1.value == e2.value
        assert np.array_equal(e1.witness_x, e2.witness_x)

    def test_inner_maximization_identity(self, rng):
        # the collapsed objective dominates every raw pair value and is attained
        w = random_pd_weight(rng, 4)
        t = crandn(rng, 4, 4)
        q = random_q(rng)
        b = reduce_to_range(w, t)
        p = np.sqrt(max(0.0, 1 - abs(q) ** 2))
        for _ in range(10_000):
            u = crandn(rng, 4)
            u /= np.linalg.norm(u)
            z = crandn(rng, 4)
            z -= (u.conj() @ z) * u
            z /= np.linalg.norm(z)
            theta = rng.uniform(0, 2 * np.pi)
            raw = abs(q * (u.conj() @ b @ u) + p * np.exp(-1j * theta) * (z.conj() @ b @ u))
            bu = b @ u
            c = u.conj() @ bu
            rho = np.linalg.norm(bu - c * u)
            assert raw <= abs(q) * abs(c) + p * rho + 1e-10

    def test_phase_covariance_of_radius_and_crawford(self, rng):
        # scaling the operator by a unimodular factor moves the phase onto q
        for _ in range(4):
            w = random_pd_weight(rng, 3)
            t = crandn(rng, 3, 3)
            q = random_q(rng)
            alpha = np.exp(1j * rng.uniform(0, 2 * np.pi))
            lhs = aq_radius(w, alpha * t, q).value
            rhs = aq_radius(w, t, alpha * q).value
            assert lhs == pytest.approx(rhs, abs=2e-3)
            lhs_c = aq_crawford(w, alpha * t, q).value
            rhs_c = aq_crawford(w, t, alpha * q).value
            assert lhs_c == pytest.approx(rhs_c, abs=2e-3)

    def test_radius_bounded_by_opnorm(self, rng):
        for _ in range(6):
            n = int(rng.integers(2, 5))
            w = random_pd_weight(rng, n)
            t = crandn(rng, n, n)
            q = random_q(rng)
            assert aq_radius(w, t, q).value <= a_opnorm(w, t) + 1e-9
