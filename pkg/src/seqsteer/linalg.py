"""Dense complex linear algebra for single-qubit (2x2) and two-qubit (4x4) operators.

Matrices are plain ``numpy`` complex arrays.  Subsystem A is the left tensor
factor and the computational basis is |0> = (1, 0), |1> = (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    hermitian_input: float = 1e-10
    eigen_convergence: float = 1e-12
    trace: float = 1e-10
    psd: float = 1e-9


TOL = Tolerances()

SUPPORTED_DIMS = (2, 4)


def _frozen(entries) -> np.ndarray:
    arr = np.array(entries, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


I2 = _frozen(np.eye(2))
I4 = _frozen(np.eye(4))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    """Coerce ``m`` to a square complex array of a supported dimension."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension {arr.shape[0]}; expected one of {SUPPORTED_DIMS}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} matrix, got {arr.shape[0]}x{arr.shape[0]}")
    return arr


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def hermiticity_error(m) -> float:
    arr = as_matrix(m)
    return float(np.max(np.abs(arr - arr.conj().T)))


def is_hermitian(m, tol: float = TOL.hermitian) -> bool:
    return hermiticity_error(m) <= tol


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with ``out[2i+k, 2j+l] = a[i, j] * b[k, l]``."""
    a = as_matrix(a, 2)
    b = as_matrix(b, 2)
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(4, 4)


def trace(m) -> complex:
    return complex(np.trace(as_matrix(m)))


def partial_trace_A(m) -> np.ndarray:
    """Trace out the left qubit of a 4x4 operator."""
    return np.einsum("ijik->jk", as_matrix(m, 4).reshape(2, 2, 2, 2))


def partial_trace_B(m) -> np.ndarray:
    """Trace out the right qubit of a 4x4 operator."""
    return np.einsum("ijkj->ik", as_matrix(m, 4).reshape(2, 2, 2, 2))


def bloch_operator(v) -> np.ndarray:
    """``v . sigma`` for a real 3-vector ``v``."""
    x, y, z = (float(c) for c in v)
    return x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z


def pauli_decomposition(m) -> tuple[float, np.ndarray]:
    """Split a Hermitian 2x2 matrix as ``c*I + a.sigma`` and return ``(c, a)``."""
    m = as_matrix(m, 2)
    c = 0.5 * (m[0, 0] + m[1, 1]).real
    a = np.array([m[0, 1].real, -m[0, 1].imag, 0.5 * (m[0, 0] - m[1, 1]).real])
    return float(c), a


def _jacobi_hermitian(m: np.ndarray, tol: float, max_sweeps: int = 64) -> np.ndarray:
    a = m.copy()
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = max(abs(a[p, q]) for p in range(n) for q in range(p + 1, n))
        if off <= tol:
            return np.sort(np.diag(a).real)
        for p in range(n):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= tol:
                    continue
                # phase the pivot real, then apply a real Givens rotation
                phase = apq / r
                theta = 0.5 * math.atan2(2.0 * r, (a[q, q] - a[p, p]).real)
                c, s = math.cos(theta), math.sin(theta)
                g = np.eye(n, dtype=np.complex128)
                g[p, p] = c
                g[q, q] = c
                g[p, q] = s * phase
                g[q, p] = -s * np.conj(phase)
                a = g.conj().T @ a @ g
                a = 0.5 * (a + a.conj().T)
                a[p, q] = a[q, p] = 0.0
    raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def hermitian_eigenvalues(m, tol: Tolerances = TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian 2x2 or 4x4 matrix.

    2x2 inputs use the closed form ``c +/- |a|`` of ``c*I + a.sigma``; 4x4
    inputs are diagonalized by cyclic complex Jacobi rotations until every
    off-diagonal magnitude is below ``tol.eigen_convergence``.
    """
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > tol.hermitian_input:
        raise ValueError(f"matrix is not Hermitian (max |M - M^dag| = {err:.3e})")
    if m.shape[0] == 2:
        c, a = pauli_decomposition(m)
        r = float(np.linalg.norm(a))
        return np.array([c - r, c + r])
    return _jacobi_hermitian(0.5 * (m + m.conj().T), tol.eigen_convergence)


def max_eigenvalue(m, tol: Tolerances = TOL) -> float:
    return float(hermitian_eigenvalues(m, tol)[-1])


def min_eigenvalue(m, tol: Tolerances = TOL) -> float:
    return float(hermitian_eigenvalues(m, tol)[0])
