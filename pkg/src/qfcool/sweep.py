"""Parameter-space exploration: characteristic curves, landscapes,
working-point optimization and boundary curves.

All outputs are pure functions of their inputs: recomputing any emitted
point from scratch reproduces it bit for bit, and grid points may be
evaluated in any order (assembly is index-ordered).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import correlations, protocol, thermo
from .correlations import CorrelationReport
from .protocol import ProtocolParams
from .thermo import ThermoReport

# Open-interval clamp for the ancilla bias: entropies and energy gaps
# diverge at eps_a = 1.
EPS_A_CLAMP = 1e-9
OBJECTIVES = ("cop", "eta", "chi")
# A maximizer within this fraction of the search span from an endpoint is
# reported as a boundary supremum.
_BOUNDARY_WINDOW = 1e-4

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepGrid:
    """Rectangular (phi, eps_a) grid at fixed register bias."""

    eps_s: float
    phi_values: tuple[float, ...]
    eps_a_values: tuple[float, ...]
    temperature: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "phi_values", tuple(float(v) for v in self.phi_values))
        object.__setattr__(self, "eps_a_values", tuple(float(v) for v in self.eps_a_values))
        if not 0.0 <= self.eps_s < 1.0:
            raise ValueError("eps_s must be in [0, 1)")
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")
        for name, values in (("phi_values", self.phi_values), ("eps_a_values", self.eps_a_values)):
            if not values:
                raise ValueError(f"{name} must not be empty")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        if not 0.0 <= self.phi_values[0] and self.phi_values[-1] <= math.pi / 2:
            raise ValueError("phi values must lie in [0, pi/2]")
        if self.eps_a_values[0] < self.eps_s:
            raise ValueError("eps_a values must not fall below eps_s")
        if self.eps_a_values[-1] >= 1.0:
            raise ValueError("eps_a values must be below 1")


@dataclass(frozen=True)
class CurvePoint:
    """One evaluated grid point; correlations are filled on demand."""

    eps_a: float
    phi: float
    thermo: ThermoReport
    correlations: Optional[CorrelationReport] = None


class BoundaryPoint(NamedTuple):
    phi: float
    eps_a: float


@dataclass(frozen=True)
class WorkingPoint:
    """Maximizer of one figure of merit over the ancilla bias.

    ``at_boundary`` is "lower"/"upper" when the search ran into an
    endpoint of the open interval (supremum, not an attained interior
    maximum); ``degenerate`` marks a flat objective.
    """

    eps_a_star: float
    objective_value: float
    cooling_load_star: float
    at_boundary: Optional[str] = None
    degenerate: bool = False


@dataclass(frozen=True)
class Landscape:
    """Full grid evaluation plus the regime boundary curves."""

    points: tuple[CurvePoint, ...]
    cooling_window_boundary: tuple[BoundaryPoint, ...]
    work_extraction_boundary: tuple[BoundaryPoint, ...]


@dataclass(frozen=True)
class SeparabilityBoundary:
    """First angle at which the post-measurement state becomes entangled.

    ``status`` is "interior" when a sign change was bracketed,
    "never_entangled" (phi pinned to pi/2) when no angle produces
    entanglement, "always_entangled" (phi pinned to 0) otherwise.
    """

    phi: float
    status: str


def objective_value(name: str, report: ThermoReport) -> Optional[float]:
    """Extract one figure of merit from a report; None when undefined."""
    if name not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {name!r}")
    return getattr(report, name)


def _evaluate(eps_s: float, eps_a: float, phi: float, temperature: float,
              include_correlations: bool) -> CurvePoint:
    params = ProtocolParams(eps_s, eps_a, phi, temperature)
    corr = None
    if include_correlations:
        corr = correlations.correlation_report(params, numeric_discord=False)
    return CurvePoint(eps_a=eps_a, phi=phi, thermo=thermo.figures_of_merit(params), correlations=corr)


def _evaluate_task(task: tuple) -> CurvePoint:
    return _evaluate(*task)


def evaluate_grid(grid: SweepGrid, include_correlations: bool = False,
                  max_workers: int = 1) -> list[CurvePoint]:
    """Evaluate every (phi, eps_a) grid point, phi outer and eps_a inner.

    Points are independent; with ``max_workers > 1`` they are fanned out
    to a process pool, and assembly stays index-ordered so the result is
    identical to the serial one.
    """
    tasks = [
        (grid.eps_s, eps_a, phi, grid.temperature, include_correlations)
        for phi in grid.phi_values
        for eps_a in grid.eps_a_values
    ]
    if max_workers > 1:
        chunk = max(1, len(tasks) // (4 * max_workers))
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_evaluate_task, tasks, chunksize=chunk))
    return [_evaluate_task(t) for t in tasks]


def characteristic_curve(eps_s: float, phi: float, n_points: int,
                         temperature: float = 1.0,
                         include_correlations: bool = False) -> list[CurvePoint]:
    """Sweep the ancilla bias over [eps_s, 1) at a fixed measurement angle."""
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    eps_a_values = np.linspace(eps_s, 1.0 - EPS_A_CLAMP, n_points)
    return [
        _evaluate(eps_s, float(ea), phi, temperature, include_correlations)
        for ea in eps_a_values
    ]


def optimize_working_point(objective: str, eps_s: float, phi: float,
                           temperature: float = 1.0,
                           coarse_points: int = 256,
                           xtol: float = 1e-9) -> WorkingPoint:
    """Maximize COP, eta or chi over the ancilla bias.

    Coarse scan over the open interval followed by golden-section
    refinement of the best bracket; undefined objective values (the
    reversible limit) rank below every defined one.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    lo = eps_s + EPS_A_CLAMP
    hi = 1.0 - EPS_A_CLAMP
    if lo >= hi:
        raise ValueError("eps_s leaves no room for an ancilla bias below 1")

    def evaluate(eps_a: float) -> float:
        report = thermo.figures_of_merit(ProtocolParams(eps_s, eps_a, phi, temperature))
        value = objective_value(objective, report)
        return -math.inf if value is None else value

    xs = np.linspace(lo, hi, coarse_points)
    values = np.array([evaluate(float(x)) for x in xs])
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        raise ValueError("objective is undefined on the whole search interval")
    degenerate = finite.size > 1 and float(finite.max() - finite.min()) <= 1e-15
    best = int(np.argmax(values))
    bracket_lo = xs[max(0, best - 1)]
    bracket_hi = xs[min(len(xs) - 1, best + 1)]
    star, value = _golden_max(evaluate, float(bracket_lo), float(bracket_hi), xtol)

    at_boundary = None
    window = _BOUNDARY_WINDOW * (hi - lo)
    if star - lo <= window:
        at_boundary = "lower"
    elif hi - star <= window:
        at_boundary = "upper"
    load = thermo.cooling_load(ProtocolParams(eps_s, star, phi, temperature))
    return WorkingPoint(eps_a_star=star, objective_value=value,
                        cooling_load_star=load, at_boundary=at_boundary,
                        degenerate=degenerate)


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                xtol: float) -> tuple[float, float]:
    """Golden-section search for the maximum of f on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
    x = 0.5 * (a + b)
    return x, f(x)


def landscape(grid: SweepGrid,
              quantities: frozenset[str] | set[str] = frozenset({"thermo"}),
              max_workers: int = 1) -> Landscape:
    """Evaluate the full (phi, eps_a) grid plus the regime boundary curves.

    ``quantities`` may contain "thermo" (always computed) and
    "correlations" (concurrence, EoF, mutual information and closed-form
    discord per point; the numeric basis search is left to dedicated
    single-point calls).
    """
    unknown = set(quantities) - {"thermo", "correlations"}
    if unknown:
        raise ValueError(f"unknown quantity selectors: {sorted(unknown)}")
    include_corr = "correlations" in quantities
    points = evaluate_grid(grid, include_corr, max_workers)

    cooling = []
    if grid.eps_s > 0.0:
        for phi in grid.phi_values:
            s = math.sin(phi)
            if s > grid.eps_s:
                eps_a = grid.eps_s / s
                if grid.eps_a_values[0] <= eps_a <= grid.eps_a_values[-1]:
                    cooling.append(BoundaryPoint(phi=phi, eps_a=eps_a))

    extraction = []
    if grid.eps_s > 0.0:
        for eps_a in grid.eps_a_values:
            pc = thermo._phi_crit(grid.eps_s, eps_a)
            if grid.phi_values[0] <= pc <= grid.phi_values[-1]:
                extraction.append(BoundaryPoint(phi=pc, eps_a=eps_a))

    return Landscape(points=tuple(points),
                     cooling_window_boundary=tuple(cooling),
                     work_extraction_boundary=tuple(extraction))


def separability_boundary(eps_s: float, eps_a: float, temperature: float = 1.0,
                          tol: float = 1e-6, scan_points: int = 181) -> SeparabilityBoundary:
    """Angle at which the post-measurement state first becomes entangled.

    Bisection on the first sign change of the concurrence along an
    ascending phi scan (monotonicity of the concurrence is not assumed).
    """
    if not eps_s < eps_a:
        raise ValueError("eps_s must be strictly below eps_a")

    def entangled(phi: float) -> bool:
        rho_m = protocol.run_protocol(ProtocolParams(eps_s, eps_a, phi, temperature)).rho_m
        return correlations.concurrence(rho_m) > 1e-12

    phis = np.linspace(0.0, math.pi / 2, scan_points)
    flags = [entangled(float(p)) for p in phis]
    if flags[0]:
        return SeparabilityBoundary(phi=0.0, status="always_entangled")
    if not any(flags):
        return SeparabilityBoundary(phi=math.pi / 2, status="never_entangled")
    first = flags.index(True)
    a, b = float(phis[first - 1]), float(phis[first])
    while b - a > tol:
        mid = 0.5 * (a + b)
        if entangled(mid):
            b = mid
        else:
            a = mid
    return SeparabilityBoundary(phi=0.5 * (a + b), status="interior")


def eps_a_for_cooling_load(eps_s: float, load: float, temperature: float = 1.0,
                           tol: float = 1e-12) -> float:
    """Invert the cooling load for the ancilla bias by monotone bisection.

    The load is strictly increasing in eps_a above eps_s, so the solution
    on [eps_s, 1) is unique when it exists.
    """
    if load < 0.0:
        raise ValueError("cooling load must be nonnegative")

    def f(eps_a: float) -> float:
        return thermo.cooling_load(ProtocolParams(eps_s, eps_a, 0.0, temperature)) - load

    lo, hi = eps_s, 1.0 - EPS_A_CLAMP
    if f(hi) < 0.0:
        raise ValueError("cooling load is not attainable below eps_a = 1")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
