"""The four-stage feedback cooling cycle on a register/ancilla qubit pair.

Stages: thermal initialization, a joint "pre-measurement" unitary that
imprints register populations onto the ancilla, a conditional feedback
rotation of the register controlled on the ancilla x-basis, and a
dissipative reset that replaces the ancilla marginal with a fresh thermal
state.  Everything is exact 4x4 algebra; the unitaries are assembled from
closed-form trigonometric blocks (no general matrix exponential).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .densmat import ID2, SIGMA_X, SIGMA_Y, SIGMA_Z, partial_trace, tensor

_SQRT1_2 = 1.0 / math.sqrt(2.0)

# Conditional register rotations exp{+-i pi/4 sigma_y} and the ancilla
# x-basis projectors they are slaved to.
_ROT_PLUS = _SQRT1_2 * (ID2 + 1j * SIGMA_Y)
_ROT_MINUS = _SQRT1_2 * (ID2 - 1j * SIGMA_Y)
_PROJ_X_PLUS = 0.5 * (ID2 + SIGMA_X)
_PROJ_X_MINUS = 0.5 * (ID2 - SIGMA_X)


@dataclass(frozen=True)
class ProtocolParams:
    """Full configuration of one cooling cycle.

    ``eps_s`` and ``eps_a`` are the register and ancilla polarization
    biases (ground minus excited population), ``phi`` the measurement
    angle in radians (axis ``(sin phi, 0, cos phi)`` in the x-z plane),
    ``temperature`` the bath temperature with k_B = 1.  The limit cases
    ``eps_s == eps_a`` and ``eps_s == 0`` are accepted.
    """

    eps_s: float
    eps_a: float
    phi: float
    temperature: float = 1.0

    def __post_init__(self):
        for name in ("eps_s", "eps_a", "phi", "temperature"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite number")
        if not 0.0 <= self.eps_s < 1.0:
            raise ValueError("eps_s must be in [0, 1)")
        if not 0.0 <= self.eps_a < 1.0:
            raise ValueError("eps_a must be in [0, 1)")
        if self.eps_s > self.eps_a:
            raise ValueError("eps_s must not exceed eps_a")
        if not 0.0 <= self.phi <= math.pi / 2:
            raise ValueError("phi must be in [0, pi/2]")
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")


@dataclass(frozen=True)
class ProtocolTrace:
    """State sequence of one run plus the six stage marginals.

    ``rho_reset`` is the product state left after the ancilla reset:
    (register marginal of ``rho_f``) tensor (fresh thermal ancilla).
    """

    rho0: np.ndarray
    rho_m: np.ndarray
    rho_f: np.ndarray
    rho_reset: np.ndarray
    rho0_s: np.ndarray
    rho0_a: np.ndarray
    rho_m_s: np.ndarray
    rho_m_a: np.ndarray
    rho_f_s: np.ndarray
    rho_f_a: np.ndarray


def thermal_qubit(eps: float) -> np.ndarray:
    """Thermal qubit (I - eps*sigma_z)/2 = diag((1-eps)/2, (1+eps)/2).

    The sigma_z expectation is -eps: the majority population sits in the
    ground state ``|1>``.
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must be in [0, 1)")
    return np.array([[(1.0 - eps) / 2.0, 0.0], [0.0, (1.0 + eps) / 2.0]], dtype=complex)


def initial_state(params: ProtocolParams) -> np.ndarray:
    """Uncorrelated thermal pair: thermal(eps_s) tensor thermal(eps_a)."""
    return tensor(thermal_qubit(params.eps_s), thermal_qubit(params.eps_a))


def measurement_axis(phi: float) -> np.ndarray:
    """sigma along the unit axis (sin phi, 0, cos phi)."""
    return math.sin(phi) * SIGMA_X + math.cos(phi) * SIGMA_Z


def measurement_unitary(phi: float) -> np.ndarray:
    """Joint unitary exp{-i pi/4 sigma_m tensor sigma_y}.

    Because (sigma_m tensor sigma_y)^2 = I, this is evaluated in closed
    form as cos(pi/4) I - i sin(pi/4) (sigma_m tensor sigma_y).
    """
    if not 0.0 <= phi <= math.pi / 2:
        raise ValueError("phi must be in [0, pi/2]")
    coupling = np.kron(measurement_axis(phi), SIGMA_Y)
    return _SQRT1_2 * (np.eye(4, dtype=complex) - 1j * coupling)


def feedback_unitary() -> np.ndarray:
    """Register rotation by -+pi/2 about y, controlled on the ancilla x-basis."""
    return np.kron(_ROT_PLUS, _PROJ_X_PLUS) + np.kron(_ROT_MINUS, _PROJ_X_MINUS)


def run_protocol(params: ProtocolParams) -> ProtocolTrace:
    """Execute one full cycle and return all stage states and marginals."""
    rho0 = initial_state(params)
    u_m = measurement_unitary(params.phi)
    rho_m = u_m @ rho0 @ u_m.conj().T
    u_f = feedback_unitary()
    rho_f = u_f @ rho_m @ u_f.conj().T
    rho_f_s = partial_trace(rho_f, "S")
    return ProtocolTrace(
        rho0=rho0,
        rho_m=rho_m,
        rho_f=rho_f,
        rho_reset=tensor(rho_f_s, thermal_qubit(params.eps_a)),
        rho0_s=partial_trace(rho0, "S"),
        rho0_a=partial_trace(rho0, "A"),
        rho_m_s=partial_trace(rho_m, "S"),
        rho_m_a=partial_trace(rho_m, "A"),
        rho_f_s=rho_f_s,
        rho_f_a=partial_trace(rho_f, "A"),
    )
