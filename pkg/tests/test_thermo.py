import math

import numpy as np

from qfcool.densmat import SIGMA_Z
from qfcool.protocol import ProtocolParams, run_protocol, thermal_qubit
from qfcool.thermo import (
    delta_e_system, delta_e_system_matrix, energy_model, entropy_reduction,
    entropy_reduction_matrix, ergotropy, figures_of_merit, heat_reset,
    heat_reset_matrix, phi_crit, total_work, total_work_matrix, work_feedback,
    work_feedback_matrix, work_measurement, work_measurement_matrix,
)

HALF_PI = math.pi / 2

# frozen by the independent density-matrix oracle
ATANH_04 = 0.42364893019360184
ATANH_08 = 1.0986122886681098
Y_CROSS = 0.7783640596221255       # 0.8 atanh(0.4) + 0.4 atanh(0.8)
ENTROPY_DROP = 0.2857813286634452  # register entropy reduction at (0.4, 0.8)


def params_grid(n=8):
    for es in np.linspace(0.0, 0.9, n):
        for ea in np.linspace(es, 0.95, n):
            for phi in np.linspace(0.0, HALF_PI, n):
                yield ProtocolParams(float(es), float(ea), float(phi))


# ---------------------------------------------------------------------------
# energy model
# ---------------------------------------------------------------------------

def test_level_splitting_zero_bias():
    model = energy_model(ProtocolParams(0.0, 0.0, 0.0))
    assert model.omega_s == 0.0 and model.omega_a == 0.0


def test_level_splitting_value():
    model = energy_model(ProtocolParams(0.4, 0.8, 0.0))
    assert abs(model.omega_s - 2 * ATANH_04) <= 1e-15
    assert abs(model.omega_a - 2 * ATANH_08) <= 1e-15


def test_hamiltonian_contraction_with_initial_state():
    params = ProtocolParams(0.4, 0.8, 1.0)
    model = energy_model(params)
    rho0 = run_protocol(params).rho0
    expected = -(0.4 * ATANH_04 + 0.8 * ATANH_08)
    assert abs(np.trace(model.hamiltonian @ rho0).real - expected) <= 1e-12


def test_energy_model_scales_with_temperature():
    hot = energy_model(ProtocolParams(0.4, 0.8, 0.0, temperature=2.5))
    assert abs(hot.omega_s - 2.5 * 2 * ATANH_04) <= 1e-15


# ---------------------------------------------------------------------------
# closed forms vs matrix oracles
# ---------------------------------------------------------------------------

def test_work_measurement_values():
    assert work_measurement(ProtocolParams(0.0, 0.0, 0.3)) == 0.0
    assert abs(work_measurement(ProtocolParams(0.4, 0.8, 0.0)) + 0.8788898309344879) <= 1e-12
    assert abs(work_measurement(ProtocolParams(0.4, 0.8, HALF_PI)) + 1.0483494030119287) <= 1e-12


def test_work_feedback_sign_and_values():
    # x-measurement: work extracted, equal to the cross-bias term
    p = ProtocolParams(0.4, 0.8, HALF_PI)
    assert abs(work_feedback(p) - Y_CROSS) <= 1e-12
    assert abs(work_feedback_matrix(p) - Y_CROSS) <= 1e-10
    # z-measurement: work injected
    p0 = ProtocolParams(0.4, 0.8, 0.0)
    assert abs(work_feedback(p0) + 0.16945957207744072) <= 1e-12
    assert abs(work_feedback_matrix(p0) - work_feedback(p0)) <= 1e-10


def test_heat_reset_values():
    assert abs(heat_reset(ProtocolParams(0.4, 0.4, HALF_PI))) <= 1e-15
    assert abs(heat_reset(ProtocolParams(0.4, 0.8, HALF_PI)) - 0.43944491546724396) <= 1e-12
    assert abs(heat_reset(ProtocolParams(0.4, 0.8, 0.0)) - 0.8788898309344879) <= 1e-12


def test_delta_e_system_values():
    # cooling-window boundary: sin(phi) = eps_s / eps_a
    boundary = ProtocolParams(0.4, 0.8, math.asin(0.5))
    assert abs(delta_e_system(boundary)) <= 1e-15
    assert abs(delta_e_system(ProtocolParams(0.4, 0.8, HALF_PI)) - 0.16945957207744072) <= 1e-12
    assert abs(delta_e_system(ProtocolParams(0.4, 0.8, 0.0)) + 0.16945957207744072) <= 1e-12


def test_entropy_reduction_values_and_phi_independence():
    assert entropy_reduction(ProtocolParams(0.5, 0.5, 0.2)) == 0.0
    assert abs(entropy_reduction(ProtocolParams(0.4, 0.8, 0.0)) - ENTROPY_DROP) <= 1e-12
    values = {entropy_reduction(ProtocolParams(0.4, 0.8, float(phi)))
              for phi in np.linspace(0.0, HALF_PI, 9)}
    assert max(values) - min(values) <= 1e-15


def test_closed_forms_match_matrix_oracles_on_grid():
    for params in params_grid(6):
        trace = run_protocol(params)
        model = energy_model(params)
        assert abs(work_measurement(params) - work_measurement_matrix(params, trace, model)) <= 1e-10
        assert abs(work_feedback(params) - work_feedback_matrix(params, trace, model)) <= 1e-10
        assert abs(heat_reset(params) - heat_reset_matrix(params, trace, model)) <= 1e-10
        assert abs(delta_e_system(params) - delta_e_system_matrix(params, trace, model)) <= 1e-10
        assert abs(entropy_reduction(params) - entropy_reduction_matrix(params, trace)) <= 1e-10
        assert abs(total_work(params) - total_work_matrix(params, trace, model)) <= 1e-10
        # bookkeeping: energy lost by the pair equals minus the total work
        combined = work_measurement(params) + work_feedback(params)
        assert abs(combined + total_work_matrix(params, trace, model)) <= 1e-10


def test_temperature_is_a_multiplicative_scale():
    cold = ProtocolParams(0.3, 0.7, 0.8, temperature=1.0)
    hot = ProtocolParams(0.3, 0.7, 0.8, temperature=3.0)
    for fn in (work_measurement, work_feedback, heat_reset, delta_e_system, total_work):
        assert abs(fn(hot) - 3.0 * fn(cold)) <= 1e-12
    assert abs(entropy_reduction(hot) - entropy_reduction(cold)) <= 1e-15


# ---------------------------------------------------------------------------
# threshold angle
# ---------------------------------------------------------------------------

def test_phi_crit_equal_biases_is_universal():
    # sin(phi_crit) = sqrt(2) - 1 regardless of the common bias
    expected = math.asin(math.sqrt(2.0) - 1.0)
    assert abs(expected - 0.42707858639247626) <= 1e-15
    for eps in (0.2, 0.5, 0.8):
        assert abs(phi_crit(ProtocolParams(eps, eps, 0.0)) - expected) <= 1e-12


def test_phi_crit_is_feedback_work_root():
    params = ProtocolParams(0.4, 0.8, 0.0)
    pc = phi_crit(params)
    assert abs(pc - 0.20980480810492377) <= 1e-12
    assert abs(work_feedback(ProtocolParams(0.4, 0.8, pc))) <= 1e-9
    below = work_feedback(ProtocolParams(0.4, 0.8, pc - 1e-6))
    above = work_feedback(ProtocolParams(0.4, 0.8, pc + 1e-6))
    assert below < 0.0 < above


def test_phi_crit_decreases_with_ancilla_bias():
    values = [phi_crit(ProtocolParams(0.4, float(ea), 0.0))
              for ea in np.linspace(0.4, 0.95, 12)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_phi_crit_degenerate_at_zero_register_bias():
    params = ProtocolParams(0.0, 0.5, 0.3)
    assert phi_crit(params) == 0.0
    report = figures_of_merit(params)
    assert not report.phi_crit_defined
    assert not report.work_extracting_feedback
    assert abs(work_feedback(params)) <= 1e-15


# ---------------------------------------------------------------------------
# figures of merit
# ---------------------------------------------------------------------------

def test_figures_of_merit_frozen_point():
    report = figures_of_merit(ProtocolParams(0.4, 0.8, HALF_PI))
    assert abs(report.cooling_load - ENTROPY_DROP) <= 1e-12
    assert abs(report.total_work - 0.2699853433898032) <= 1e-12
    assert abs(report.cop - 1.0585068251310068) <= 1e-12
    assert abs(report.eta - 0.6503234389675109) <= 1e-12
    assert abs(report.chi - 0.3025014868852642) <= 1e-12
    assert report.in_cooling_window
    assert report.work_extracting_feedback
    assert not report.reversible_limit


def test_figures_of_merit_reversible_point():
    report = figures_of_merit(ProtocolParams(0.4, 0.4, HALF_PI))
    assert report.reversible_limit
    assert report.cop is None and report.eta is None and report.chi is None
    assert abs(report.cooling_load) <= 1e-15
    assert abs(report.heat_reset) <= 1e-15
    assert abs(report.total_work) <= 1e-15


def test_thermodynamic_inequalities_on_grid():
    for params in params_grid(8):
        report = figures_of_merit(params)
        if params.eps_a > params.eps_s + 1e-12:
            assert report.total_work > 0.0
        if params.eps_a > params.eps_s * math.sin(params.phi) + 1e-12 and params.eps_a > 0:
            assert report.heat_reset > 0.0
        assert report.heat_reset >= report.cooling_load - 1e-12
        assert report.entropy_reduction >= -1e-15
        if report.eta is not None:
            assert -1e-12 <= report.eta <= 1.0 + 1e-12
        in_window = params.eps_a * math.sin(params.phi) > params.eps_s
        assert report.in_cooling_window == in_window
        if abs(report.delta_e_system) > 1e-12:
            assert (report.delta_e_system > 0) == in_window
        if math.sin(params.phi) < params.eps_s:
            assert report.delta_e_system <= 1e-15


def test_cop_monotone_in_phi_at_fixed_biases():
    for es, ea in ((0.2, 0.5), (0.4, 0.8), (0.6, 0.9)):
        cops = [figures_of_merit(ProtocolParams(es, ea, float(phi))).cop
                for phi in np.linspace(0.0, HALF_PI, 15)]
        assert all(b >= a - 1e-12 for a, b in zip(cops, cops[1:]))


# ---------------------------------------------------------------------------
# ergotropy
# ---------------------------------------------------------------------------

def test_ergotropy_of_passive_state_is_zero():
    model = energy_model(ProtocolParams(0.4, 0.8, 0.0))
    rho0 = run_protocol(ProtocolParams(0.4, 0.8, 0.0)).rho0
    assert ergotropy(rho0, model.hamiltonian) <= 1e-12
    assert ergotropy(thermal_qubit(0.6), 0.5 * 2 * math.atanh(0.6) * SIGMA_Z) <= 1e-12


def test_ergotropy_of_inverted_qubit():
    omega = 1.7
    excited = np.diag([1.0, 0.0]).astype(complex)  # +1 eigenstate of sigma_z
    assert abs(ergotropy(excited, 0.5 * omega * SIGMA_Z) - omega) <= 1e-12


def test_ergotropy_bounds_feedback_work():
    for params in params_grid(6):
        trace = run_protocol(params)
        model = energy_model(params)
        assert ergotropy(trace.rho_m, model.hamiltonian) >= work_feedback(params) - 1e-12
    # strict gap at the x-measurement
    p = ProtocolParams(0.4, 0.8, HALF_PI)
    gap = ergotropy(run_protocol(p).rho_m, energy_model(p).hamiltonian) - work_feedback(p)
    assert gap > 0.1
    assert abs(ergotropy(run_protocol(p).rho_m, energy_model(p).hamiltonian)
               - 1.0483494030119285) <= 1e-10
