import numpy as np
import pytest

from aqradius import (
    Budget,
    EnvelopeViolation,
    OperatorSequence,
    Weight,
    trace_crawford,
    trace_gaps,
    trace_q,
    trace_radius,
    trace_to_csv,
)
from conftest import crandn, random_pd_weight

EX1 = np.array([[0.0, 1.0 / 70.0], [0.0, 0.0]], dtype=complex)
EX2 = np.array([[0.0, 1.0 / 24.0], [0.0, 0.0]], dtype=complex)
I2 = Weight.identity(2)
FAST = Budget(restarts=16, iterations=150)
SHORT = (1, 2, 4, 8, 16, 32)


def scaled_sequence(base, weight):
    """T_n = (1 + 1/n) * base, which converges uniformly to base."""
    return OperatorSequence(weight, lambda n: (1.0 + 1.0 / n) * base, base)


class TestTraceRadius:
    def test_scaled_example1_rates_follow_scaling(self):
        seq = scaled_sequence(EX1, I2)
        trace = trace_radius(seq, 0.5, indices=SHORT, budget=FAST)
        target = (1 + np.sqrt(0.75)) / 140
        assert trace.target == pytest.approx(target, abs=1e-6)
        # the q-radius is positively homogeneous, so the rate is target / n
        for n, rate in zip(trace.indices, trace.rates):
            assert rate == pytest.approx(target / n, abs=1e-6)

    def test_constant_sequence_has_zero_rates(self, rng):
        t = crandn(rng, 2, 2)
        seq = OperatorSequence(I2, lambda n: t, t)
        trace = trace_radius(seq, 0.7, indices=SHORT, budget=FAST)
        for rate in trace.rates:
            assert rate <= 1e-9

    def test_multiplication_rule_converges_to_q_modulus(self):
        seq = OperatorSequence.multiplication(
            psi=lambda x: 1.0 + x, phi=lambda n, x: 1.0 + x / n, grid_points=64
        )
        trace = trace_radius(seq, 0.5, indices=SHORT, budget=FAST)
        assert trace.target == pytest.approx(0.5, abs=1e-9)
        assert trace.rates[-1] <= trace.envelopes[-1]

    def test_envelope_violation_detected_for_wrong_limit(self, rng):
        t = crandn(rng, 2, 2)
        wrong_limit = t + np.eye(2)
        seq = OperatorSequence(I2, lambda n: t, wrong_limit)
        with pytest.raises(EnvelopeViolation):
            trace_radius(seq, 0.9, indices=(64, 128), budget=FAST, slack=1e-4)


class TestTraceCrawford:
    def test_constant_sequence(self, rng):
        t = crandn(rng, 2, 2)
        seq = OperatorSequence(I2, lambda n: t, t)
        trace = trace_crawford(seq, 0.6, indices=SHORT, budget=FAST)
        for rate in trace.rates:
            assert rate <= 1e-9

    def test_perturbed_scalar_target(self):
        base = np.eye(2) / 20
        seq = OperatorSequence.perturbation(I2, base, np.eye(2))
        trace = trace_crawford(seq, 0.8, indices=SHORT, budget=FAST)
        assert trace.target == pytest.approx(0.8 / 20, abs=1e-9)
        for n, value in zip(trace.indices, trace.values):
            # T_n is the scalar (1/20 + 1/n) I, so the value is q * that scalar
            assert value == pytest.approx(0.8 * (1 / 20 + 1 / n), abs=1e-6)

    def test_multiplication_rule_target(self):
        seq = OperatorSequence.multiplication(
            psi=lambda x: 1.0 + x, phi=lambda n, x: 1.0 + x / n, grid_points=32
        )
        trace = trace_crawford(seq, 0.3, indices=SHORT, budget=FAST)
        assert trace.target == pytest.approx(0.3, abs=1e-9)


class TestTraceQ:
    def test_example2_envelope_from_closed_forms(self):
        q_list = [1.0 - 1.0 / (n * n) for n in range(2, 12)]
        trace = trace_q(I2, EX2, q_list, budget=FAST)
        assert trace.target == pytest.approx(1 / 48, abs=1e-9)
        for q, value, env in zip(q_list, trace.values, trace.envelopes):
            assert value == pytest.approx((1 + np.sqrt(1 - q * q)) / 48, abs=1e-6)
            assert env == pytest.approx(np.sqrt(2 * (1 - q)) / 24 + 5e-3, abs=1e-12)

    def test_constant_q_one(self, rng):
        t = crandn(rng, 2, 2)
        trace = trace_q(I2, t, [1.0, 1.0, 1.0], budget=FAST)
        for rate in trace.rates:
            assert rate <= 2e-6

    def test_complex_q_sequence(self, rng):
        t = crandn(rng, 2, 2)
        q_list = [(1 - 1 / n) + 1j / (n * n) for n in range(2, 8)]
        trace = trace_q(I2, t, q_list, budget=FAST)
        assert len(trace.values) == len(q_list)

    def test_crawford_variant(self, rng):
        w = random_pd_weight(rng, 2)
        t = crandn(rng, 2, 2)
        q_list = [1.0 - 1.0 / (n * n) for n in range(2, 8)]
        trace = trace_q(w, t, q_list, budget=FAST, kind="crawford")
        assert len(trace.values) == len(q_list)

    def test_rejects_unknown_kind(self, rng):
        with pytest.raises(ValueError, match="kind"):
            trace_q(I2, crandn(rng, 2, 2), [0.9], kind="nope")


class TestTraceGaps:
    def test_multiplication_discretization_gap(self):
        seq = OperatorSequence.multiplication(
            psi=lambda x: 1.0 + x, phi=lambda n, x: 1.0 + x / n, grid_points=64
        )
        gw, gc = trace_gaps(seq, 0.5, indices=SHORT, budget=FAST)
        assert gw.target == pytest.approx(0.5, abs=1e-6)
        assert gc.target == pytest.approx(0.5, abs=1e-6)

    def test_constant_sequence(self, rng):
        t = crandn(rng, 2, 2)
        seq = OperatorSequence(I2, lambda n: t, t)
        gw, gc = trace_gaps(seq, 0.4, indices=SHORT, budget=FAST)
        for rate in gw.rates + gc.rates:
            assert rate <= 1e-8

    def test_direct_sum_blockwise_limit_bound(self, rng):
        # S_n + M_n block-diagonal: the limiting omega-gap obeys the block bound
        s = np.eye(2, dtype=complex)
        m = np.array([[0, 1], [0, 0]], dtype=complex)
        a = np.eye(4, dtype=complex)
        t_lim = np.zeros((4, 4), dtype=complex)
        t_lim[:2, :2] = s
        t_lim[2:, 2:] = m
        w4 = Weight(a)
        seq = OperatorSequence(w4, lambda n: (1 + 1 / n) * t_lim, t_lim)
        q = 0.6
        gw, _ = trace_gaps(seq, q, indices=SHORT, budget=FAST)
        from aqradius import aq_radius, a_opnorm

        gap_s = a_opnorm(I2, s) - aq_radius(I2, s, q, FAST).value
        gap_m = a_opnorm(I2, m) - aq_radius(I2, m, q, FAST).value
        assert gw.target <= max(gap_s, gap_m) + 5e-3

    def test_grid_doubling_stability(self):
        # the limiting gap does not depend on the discretization size
        targets = []
        for grid_points in (64, 128):
            seq = OperatorSequence.multiplication(
                psi=lambda x: 1.0 + x, phi=lambda n, x: 1.0 + x / n, grid_points=grid_points
            )
            gw, _ = trace_gaps(seq, 0.5, indices=(1, 2), budget=FAST)
            targets.append(gw.target)
        assert abs(targets[0] - targets[1]) < 1e-6


class TestSequenceTypes:
    def test_explicit_rule(self, rng):
        mats = [crandn(rng, 2, 2) for _ in range(4)]
        seq = OperatorSequence.explicit(I2, mats, mats[-1])
        np.testing.assert_array_equal(seq.term(2), mats[1])
        with pytest.raises(IndexError):
            seq.term(9)

    def test_deviation_is_opnorm_distance(self, rng):
        t = crandn(rng, 2, 2)
        seq = OperatorSequence.perturbation(I2, t, np.eye(2))
        assert seq.deviation(4) == pytest.approx(0.25, abs=1e-12)

    def test_psd_weight_path_for_vanishing_density(self):
        # density vanishing at the left endpoint routes through the PSD machinery
        seq = OperatorSequence.multiplication(
            psi=lambda x: x, phi=lambda n, x: 1.0 + x / n, grid_points=16
        )
        assert seq.weight.rank == 15
        trace = trace_radius(seq, 0.9, indices=(1, 2, 4), budget=FAST)
        assert trace.target == pytest.approx(0.9, abs=1e-9)


def test_trace_to_csv(tmp_path, rng):
    t = crandn(rng, 2, 2)
    seq = OperatorSequence(I2, lambda n: t, t)
    trace = trace_radius(seq, 0.5, indices=(1, 2), budget=FAST)
    path = tmp_path / "trace.csv"
    trace_to_csv(trace, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,value,target,rate,envelope"
    assert len(lines) == 3
