import math

import numpy as np
import pytest

from qfcool import sweep
from qfcool.protocol import ProtocolParams
from qfcool.sweep import (
    SweepGrid, characteristic_curve, eps_a_for_cooling_load, evaluate_grid,
    landscape, optimize_working_point, separability_boundary,
)
from qfcool.thermo import delta_e_system, figures_of_merit, work_feedback

HALF_PI = math.pi / 2


def brute_force_working_point(objective, eps_s, phi, n=1_000_001):
    """Dense vectorized scan, independent of the golden-section path."""
    eps_a = np.linspace(eps_s + 1e-9, 1.0 - 1e-9, n)
    ats, ata = math.atanh(eps_s), np.arctanh(eps_a)
    p = eps_a * ata - eps_s * ats + 0.5 * np.log((1 - eps_a**2) / (1 - eps_s**2))
    q = (eps_a - eps_s * math.sin(phi)) * ata
    de_s = -(eps_s - eps_a * math.sin(phi)) * ats
    w = -de_s + q
    with np.errstate(divide="ignore", invalid="ignore"):
        values = {"cop": p / w, "eta": p / q, "chi": p * p / w}[objective]
    values = np.where(w <= 1e-14, -np.inf, values)
    best = int(np.argmax(values))
    return float(eps_a[best]), float(values[best])


# ---------------------------------------------------------------------------
# grid validation
# ---------------------------------------------------------------------------

def test_sweep_grid_validation():
    SweepGrid(0.4, (0.0, 1.0), (0.4, 0.9))
    with pytest.raises(ValueError, match="strictly increasing"):
        SweepGrid(0.4, (1.0, 0.5), (0.4, 0.9))
    with pytest.raises(ValueError, match="strictly increasing"):
        SweepGrid(0.4, (0.5, 0.5), (0.4, 0.9))
    with pytest.raises(ValueError, match="fall below eps_s"):
        SweepGrid(0.4, (0.5,), (0.2, 0.9))
    with pytest.raises(ValueError, match="below 1"):
        SweepGrid(0.4, (0.5,), (0.5, 1.0))
    with pytest.raises(ValueError, match="must not be empty"):
        SweepGrid(0.4, (), (0.5,))


# ---------------------------------------------------------------------------
# characteristic curves
# ---------------------------------------------------------------------------

def test_characteristic_curve_endpoints():
    curve = characteristic_curve(0.4, HALF_PI, 41)
    loads = [pt.thermo.cooling_load for pt in curve]
    assert abs(loads[0]) <= 1e-12          # eps_a -> eps_s
    assert loads[-1] == max(loads)         # maximal toward eps_a -> 1
    assert curve[-1].eps_a == 1.0 - sweep.EPS_A_CLAMP


def test_characteristic_curve_never_cools_at_phi_zero():
    curve = characteristic_curve(0.4, 0.0, 25)
    assert all(not pt.thermo.in_cooling_window for pt in curve)


def test_characteristic_curve_cop_peaks_inside_at_quarter_angle():
    curve = characteristic_curve(0.4, math.pi / 4, 201)
    cops = [pt.thermo.cop if pt.thermo.cop is not None else -math.inf for pt in curve]
    best = int(np.argmax(cops))
    assert 0 < best < len(curve) - 1


def test_curve_points_reproducible_from_scratch():
    curve = characteristic_curve(0.3, 0.8, 7, include_correlations=True)
    for pt in curve:
        again = figures_of_merit(ProtocolParams(0.3, pt.eps_a, pt.phi))
        assert again == pt.thermo


def test_characteristic_curve_requires_two_points():
    with pytest.raises(ValueError):
        characteristic_curve(0.4, 0.3, 1)


# ---------------------------------------------------------------------------
# working-point optimization
# ---------------------------------------------------------------------------

def test_optimize_chi_at_x_measurement_high_bias():
    wp = optimize_working_point("chi", 0.4, HALF_PI)
    assert 0.75 <= wp.eps_a_star <= 0.95
    assert wp.at_boundary is None
    brute_x, brute_v = brute_force_working_point("chi", 0.4, HALF_PI)
    assert abs(wp.eps_a_star - brute_x) <= 1e-4
    assert abs(wp.objective_value - brute_v) <= 1e-8


def test_optimize_cop_at_x_measurement_hits_lower_boundary():
    wp = optimize_working_point("cop", 0.4, HALF_PI)
    assert wp.at_boundary == "lower"
    assert wp.eps_a_star - 0.4 <= 1e-3
    assert wp.cooling_load_star <= 1e-6


def test_optimize_cop_interior_matches_brute_force():
    wp = optimize_working_point("cop", 0.4, math.pi / 4)
    assert wp.at_boundary is None
    brute_x, brute_v = brute_force_working_point("cop", 0.4, math.pi / 4)
    assert abs(wp.eps_a_star - brute_x) <= 1e-4
    assert abs(wp.objective_value - brute_v) <= 1e-8


def test_optimize_matches_brute_force_on_random_draws(rng):
    objectives = ("cop", "eta", "chi")
    for _ in range(20):
        eps_s = float(rng.uniform(0.05, 0.7))
        phi = float(rng.uniform(0.25, 1.5))
        objective = objectives[int(rng.integers(0, 3))]
        wp = optimize_working_point(objective, eps_s, phi)
        brute_x, brute_v = brute_force_working_point(objective, eps_s, phi)
        assert abs(wp.eps_a_star - brute_x) <= 1e-4, (objective, eps_s, phi)
        assert abs(wp.objective_value - brute_v) <= 1e-8, (objective, eps_s, phi)


def test_optimize_rejects_unknown_objective():
    with pytest.raises(ValueError):
        optimize_working_point("speed", 0.4, 1.0)


# ---------------------------------------------------------------------------
# landscape
# ---------------------------------------------------------------------------

def landscape_grid():
    return SweepGrid(
        eps_s=0.4,
        phi_values=tuple(np.linspace(0.0, HALF_PI, 8)),
        eps_a_values=tuple(np.linspace(0.4, 0.95, 7)),
    )


def test_landscape_shape_and_order():
    grid = landscape_grid()
    result = landscape(grid, quantities={"thermo", "correlations"})
    assert len(result.points) == 8 * 7
    # phi outer, eps_a inner
    phis = [pt.phi for pt in result.points]
    assert phis == sorted(phis)
    first_block = result.points[:7]
    assert [pt.eps_a for pt in first_block] == sorted(pt.eps_a for pt in first_block)
    assert all(pt.correlations is not None for pt in result.points)


def test_landscape_cooling_boundary_points_are_roots():
    result = landscape(landscape_grid())
    assert result.cooling_window_boundary  # sin(phi) > eps_s happens on this grid
    for b in result.cooling_window_boundary:
        assert abs(delta_e_system(ProtocolParams(0.4, b.eps_a, b.phi))) <= 1e-9


def test_landscape_work_boundary_points_are_roots():
    result = landscape(landscape_grid())
    assert result.work_extraction_boundary
    for b in result.work_extraction_boundary:
        assert abs(work_feedback(ProtocolParams(0.4, b.eps_a, b.phi))) <= 1e-9


def test_landscape_columns_are_iso_discord():
    result = landscape(landscape_grid(), quantities={"thermo", "correlations"})
    by_phi = {}
    for pt in result.points:
        by_phi.setdefault(pt.phi, []).append(pt)
    for pts in by_phi.values():
        discords = {pt.correlations.discord_analytic for pt in pts}
        assert max(discords) - min(discords) <= 1e-15
        loads = [pt.thermo.cooling_load for pt in pts]
        assert max(loads) - min(loads) > 0.1  # the load does vary meanwhile


def test_landscape_rejects_unknown_selector():
    with pytest.raises(ValueError):
        landscape(landscape_grid(), quantities={"thermo", "plots"})


def test_evaluate_grid_parallel_matches_serial():
    grid = SweepGrid(0.3, (0.2, 1.0), tuple(np.linspace(0.3, 0.9, 5)))
    serial = evaluate_grid(grid, include_correlations=True, max_workers=1)
    parallel = evaluate_grid(grid, include_correlations=True, max_workers=2)
    assert serial == parallel


def test_fixed_load_figures_grow_with_phi():
    # the cooling load depends only on the biases, so a fixed load is a
    # fixed eps_a; along it the whole performance triple rises with phi
    eps_s = 0.4
    eps_a = eps_a_for_cooling_load(eps_s, 0.15)
    ladder = [figures_of_merit(ProtocolParams(eps_s, eps_a, phi))
              for phi in np.linspace(0.6, HALF_PI, 5)]
    for name in ("cop", "eta", "chi"):
        values = [getattr(r, name) for r in ladder]
        assert all(b > a for a, b in zip(values, values[1:])), name


# ---------------------------------------------------------------------------
# separability boundary
# ---------------------------------------------------------------------------

def test_separability_boundary_interior_case():
    result = separability_boundary(0.4, 0.8)
    assert result.status == "interior"
    assert abs(result.phi - 0.2590617972561781) <= 2e-6
    again = separability_boundary(0.4, 0.8)
    assert again == result  # bit-for-bit reproducible


def test_separability_boundary_never_entangled():
    # a maximally mixed register never entangles with the ancilla
    result = separability_boundary(0.0, 0.5)
    assert result.status == "never_entangled"
    assert result.phi == HALF_PI


def test_separability_boundary_always_entangled(monkeypatch):
    monkeypatch.setattr(sweep.correlations, "concurrence", lambda rho: 1.0)
    result = separability_boundary(0.4, 0.8)
    assert result.status == "always_entangled"
    assert result.phi == 0.0


def test_separability_boundary_requires_bias_gap():
    with pytest.raises(ValueError):
        separability_boundary(0.5, 0.5)


def test_zero_concurrence_points_sit_below_the_boundary():
    # along each eps_a column, entanglement appears exactly above the
    # bisected boundary angle
    from qfcool.correlations import concurrence
    from qfcool.protocol import run_protocol
    for eps_a in (0.6, 0.9):
        boundary = separability_boundary(0.4, eps_a).phi
        for phi in np.linspace(0.0, HALF_PI, 15):
            if abs(phi - boundary) < 1e-3:
                continue  # skip the bisection window itself
            rho_m = run_protocol(ProtocolParams(0.4, eps_a, float(phi))).rho_m
            if concurrence(rho_m) <= 1e-12:
                assert phi < boundary
            else:
                assert phi > boundary


# ---------------------------------------------------------------------------
# load inversion
# ---------------------------------------------------------------------------

def test_eps_a_for_cooling_load_round_trip():
    from qfcool.thermo import cooling_load
    for load in (0.01, 0.15, 0.4):
        eps_a = eps_a_for_cooling_load(0.4, load)
        assert abs(cooling_load(ProtocolParams(0.4, eps_a, 0.0)) - load) <= 1e-9


def test_eps_a_for_cooling_load_rejects_unreachable():
    with pytest.raises(ValueError):
        eps_a_for_cooling_load(0.4, 100.0)
    with pytest.raises(ValueError):
        eps_a_for_cooling_load(0.4, -0.1)
