"""Dense complex linear algebra for one- and two-qubit states.

Conventions used throughout the package:

* computational basis ``|s a>`` ordered ``|00>, |01>, |10>, |11>``
  (register-major), with subsystem order register (S) tensor ancilla (A);
* ``|0>`` is the +1 eigenstate of ``sigma_z``;
* all entropies are in nats (natural logarithm).

Only 2x2 and 4x4 matrices are supported; there is no n-qubit ambition.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

# Default elementwise tolerance for matrix comparisons and state validation.
ATOL = 1e-12
# Eigenvalues at or below this threshold count as exactly zero in entropies.
ENTROPY_CUTOFF = 1e-15
# Eigenvalues in [-PSD_CLAMP, 0) are clamped to zero; anything lower is an error.
PSD_CLAMP = 1e-12

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class Spectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Coerce input to a square complex 2x2 or 4x4 ndarray."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in (2, 4):
        raise ValueError(f"expected a 2x2 or 4x4 matrix, got shape {a.shape}")
    return a


def matrices_equal(a, b, atol: float = ATOL) -> bool:
    """Elementwise equality within an absolute tolerance."""
    return bool(np.all(np.abs(as_matrix(a) - as_matrix(b)) <= atol))


def is_hermitian(m, atol: float = ATOL) -> bool:
    a = as_matrix(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= atol)


def validate_density_matrix(rho, atol: float = ATOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the ndarray.

    Raises ValueError naming the violated property.
    """
    a = as_matrix(rho)
    if not is_hermitian(a, atol):
        raise ValueError("density matrix must be Hermitian")
    if abs(np.trace(a) - 1.0) > atol:
        raise ValueError("density matrix must have unit trace")
    smallest = np.linalg.eigvalsh(a)[0]
    if smallest < -atol:
        raise ValueError(f"density matrix must be positive semidefinite (min eigenvalue {smallest:.3e})")
    return a


def validate_unitary(u, atol: float = ATOL) -> np.ndarray:
    """Check U+ U = I elementwise within ``atol``; return the ndarray."""
    a = as_matrix(u)
    dev = np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0])))
    if dev > atol:
        raise ValueError(f"matrix is not unitary (max |U+U - I| = {dev:.3e})")
    return a


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices, register-major ordering."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape != (2, 2) or mb.shape != (2, 2):
        raise ValueError("tensor expects two 2x2 factors")
    return np.kron(ma, mb)


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduce a 4x4 density matrix to the marginal of one subsystem.

    ``keep`` is ``"S"`` (trace out the ancilla) or ``"A"`` (trace out the
    register).
    """
    a = validate_density_matrix(rho)
    if a.shape != (4, 4):
        raise ValueError("partial_trace expects a 4x4 density matrix")
    r = a.reshape(2, 2, 2, 2)
    if keep == "S":
        return np.trace(r, axis1=1, axis2=3)
    if keep == "A":
        return np.trace(r, axis1=0, axis2=2)
    raise ValueError(f"keep must be 'S' or 'A', got {keep!r}")


def vn_entropy(rho) -> float:
    """Von Neumann entropy in nats, with 0 ln 0 = 0."""
    a = validate_density_matrix(rho)
    w = np.linalg.eigvalsh(a)
    w = w[w > ENTROPY_CUTOFF]
    return float(-(w * np.log(w)).sum())


def hermitian_eig(m) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix (ascending eigenvalues)."""
    a = as_matrix(m)
    if not is_hermitian(a):
        raise ValueError("hermitian_eig expects a Hermitian matrix")
    w, v = np.linalg.eigh(a)
    return Spectrum(eigenvalues=w, eigenvectors=v)


def psd_sqrt(rho) -> np.ndarray:
    """Hermitian PSD square root S with S @ S == rho.

    Eigenvalues in [-PSD_CLAMP, 0) are clamped to zero; anything below
    -PSD_CLAMP raises.
    """
    a = as_matrix(rho)
    if not is_hermitian(a):
        raise ValueError("psd_sqrt expects a Hermitian matrix")
    w, v = np.linalg.eigh(a)
    if w[0] < -PSD_CLAMP:
        raise ValueError(f"psd_sqrt expects a PSD matrix (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    s = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (s + s.conj().T)


def conjugate(m) -> np.ndarray:
    """Entrywise complex conjugation in the fixed computational basis."""
    return np.conj(as_matrix(m))


def expectation(h, rho) -> float:
    """tr(H rho) for Hermitian H; the imaginary residue must be negligible."""
    ha, ra = as_matrix(h), validate_density_matrix(rho)
    if ha.shape != ra.shape:
        raise ValueError(f"dimension mismatch: {ha.shape} vs {ra.shape}")
    val = np.trace(ha @ ra)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"expectation value has imaginary part {val.imag:.3e}")
    return float(val.real)


def purity(rho) -> float:
    """tr(rho^2)."""
    a = validate_density_matrix(rho)
    return float(np.trace(a @ a).real)


def bloch_vector(rho) -> np.ndarray:
    """(x, y, z) Pauli expectations of a single-qubit state."""
    a = validate_density_matrix(rho)
    if a.shape != (2, 2):
        raise ValueError("bloch_vector expects a 2x2 density matrix")
    return np.array([np.trace(s @ a).real for s in PAULI])
