import math

import numpy as np
import pytest

from core.errors import DegenerateSchedule, FitNotFound
from experiments.studies import steady_state_study
from experiments.sweep import ideal_expectation
from mitigation.extrapolation import (fit_exponential, fit_linear, fit_richardson, propagate_variance,
                                      richardson_weights)
from mitigation.zne import ScalingSchedule, ZneReport, evaluate, extrapolate_all, scaled_expectations, select_best
from model.tfim import TfimSpec, build_observable, build_tfim, zero_state
from qsp.circuit import build_qsp_circuit
from simulation.density import plus_state
from simulation.sampling import ShotEstimate, exact_estimate

SCHEDULE = ScalingSchedule((1, 2, 3))


def exact(values):
    return [exact_estimate(v) for v in values]


# --- schedules ---
def test_schedule_validation():
    assert ScalingSchedule((1, 1.25, 1.5)).label == "1-1.25-1.5"
    with pytest.raises(DegenerateSchedule):
        ScalingSchedule((2, 3))
    with pytest.raises(DegenerateSchedule):
        ScalingSchedule((1, 1, 2))
    with pytest.raises(DegenerateSchedule):
        SCHEDULE.check_noise(0.3)


# --- Richardson ---
def test_richardson_weights_for_unit_steps():
    betas = richardson_weights([1, 2, 3])
    assert betas == pytest.approx([3, -3, 1], abs=1e-12)
    c = np.array([1.0, 2.0, 3.0])
    assert betas.sum() == pytest.approx(1, abs=1e-12)
    assert betas @ c == pytest.approx(0, abs=1e-12)
    assert betas @ c**2 == pytest.approx(0, abs=1e-12)


def test_richardson_weights_for_fine_steps():
    assert richardson_weights([1, 1.25, 1.5]) == pytest.approx([15, -24, 10])


def test_richardson_is_exact_on_quadratics():
    rng = np.random.default_rng(0)
    c = np.array([1.0, 1.25, 1.5])
    for _ in range(100):
        coeffs = rng.uniform(-1, 1, size=3)
        estimate, _ = fit_richardson(c, np.polyval(coeffs, c))
        assert estimate == pytest.approx(coeffs[-1], abs=1e-9)


def test_richardson_degree_cap():
    with pytest.raises(DegenerateSchedule):
        richardson_weights([1, 2, 3, 4, 5])


# --- linear & exponential ---
def test_linear_intercept():
    assert fit_linear([1, 2, 3], [0.9, 0.8, 0.7]) == pytest.approx(1.0)


@pytest.mark.parametrize("schedule", [(1, 2, 3), (1, 1.25, 1.5), (1, 1.5, 3), (1, 1.5, 2, 3)])
def test_exponential_recovers_decay(schedule):
    c = np.array(schedule, dtype=float)
    y = 0.2 + 0.5 * np.exp(-0.3 * c)
    assert fit_exponential(c, y) == pytest.approx(0.7, abs=1e-6)


@pytest.mark.parametrize("means,reason", [
    ([0.5, 0.7, 0.6], "non-monotone"),
    ([0.3, 0.3, 0.3], "constant"),
    ([0.9, 0.8, 0.7], "line"),
    ([1e-3, 1e-6, 1e-9], "gain"),
])
def test_exponential_refuses_unidentifiable_data(means, reason):
    with pytest.raises(FitNotFound) as info:
        fit_exponential([1, 2, 3], means)
    assert reason in info.value.reason


def test_gain_cap_is_adjustable():
    c = np.array([1.0, 2.0, 3.0])
    y = 0.2 + 0.7 * np.exp(-5 * c)
    with pytest.raises(FitNotFound):
        fit_exponential(c, y)
    assert fit_exponential(c, y, max_gain=200) == pytest.approx(0.9, abs=1e-9)
    scaled = exact(y)
    assert evaluate("exponential", SCHEDULE, scaled, 0.9, max_gain=200).bias == pytest.approx(0, abs=1e-9)


def test_variance_propagation():
    assert propagate_variance("richardson", [1, 2, 3], [1e-6] * 3, None) == pytest.approx(19e-6)
    assert propagate_variance("linear", [1, 2, 3], [1e-6] * 3, None) == pytest.approx(1e-6 * (16 + 1 + 4) / 9)
    y = 0.2 + 0.5 * np.exp(-0.3 * np.array([1.0, 2.0, 3.0]))
    assert propagate_variance("exponential", [1, 2, 3], [1e-6] * 3, y) > 0
    assert propagate_variance("exponential", [1, 2, 3], [0.0] * 3, y) == 0.0


# --- reports ---
def test_evaluate_scores_against_ideal():
    scaled = [ShotEstimate(m, 1e-6, 10**6) for m in (0.9, 0.8, 0.7)]
    report = evaluate("linear", SCHEDULE, scaled, ideal=0.95)
    assert report.estimate == pytest.approx(1.0)
    assert report.bias == pytest.approx(0.05)
    assert report.mse == pytest.approx(report.variance + report.bias**2)
    assert evaluate("richardson", SCHEDULE, scaled, 0.95).fit == "richardson2"


def test_select_best_breaks_ties_by_method_then_schedule():
    a = ZneReport("linear", "1-2-3", 1.0, 0.0, 0.0, 1e-4)
    b = ZneReport("exponential", "1-2-3", 1.0, 0.0, 0.0, 1e-4)
    c = ZneReport("exponential", "1-1.25-1.5", 1.0, 0.0, 0.0, 1e-4)
    assert select_best([a, b]) is b
    assert select_best([a, b, c]) is c
    assert select_best([a, ZneReport("richardson", "1-2-3", 1.0, 0.0, 0.0, 2e-4)]) is a


def test_blind_mode_reports_failures():
    results = {r.method: r for r in extrapolate_all(SCHEDULE, exact([0.3, 0.3, 0.3]))}
    assert results["exponential"].failure.startswith("FitNotFound")
    assert results["richardson"].estimate == pytest.approx(0.3)
    assert results["linear"].estimate == pytest.approx(0.3)


# --- end to end on exact means ---
def test_exponential_zne_on_weak_noise():
    h = build_tfim(TfimSpec(N=4))
    o = build_observable(4)
    rho0 = plus_state(zero_state(4))
    taus = [0.5, 1.0, 2.0, 3.5, 5.0]
    within = 0
    for tau in taus:
        circuit, _ = build_qsp_circuit(h, tau, 1e-4)
        scaled = scaled_expectations(circuit.to_circuit(), rho0, 1e-4, SCHEDULE, None, 0, o)
        assert all(s.shots == 0 for s in scaled)
        report = evaluate("exponential", SCHEDULE, scaled, ideal_expectation(h, o, tau))
        within += abs(report.bias) <= 8e-4
    assert within >= 0.8 * len(taus)


def test_scaled_means_fall_with_noise():
    h = build_tfim(TfimSpec(N=4))
    circuit, _ = build_qsp_circuit(h, 1.0, 1e-3)
    scaled = scaled_expectations(circuit.to_circuit(), plus_state(zero_state(4)), 1e-3, SCHEDULE, None, 0,
                                 build_observable(4))
    means = [s.mean for s in scaled]
    assert means[0] >= means[1] >= means[2]


def test_steady_state_plateau():
    rows = steady_state_study(4, [250.0, 300.0], [0.01], shots=5_000_000, seed=1, circuit="echo")
    for row in rows:
        assert row.circuit == "echo"
        assert row.depth == 2 * row.degree + 1
        assert abs(row.expectation) <= 2e-3
        assert row.variance_proxy >= 0.999
        for estimate in (row.linear, row.richardson, row.exponential):
            assert estimate is None or abs(estimate - row.expectation) <= 2e-3
    assert math.isfinite(rows[0].sampled_mean)
