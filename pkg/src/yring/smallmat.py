"""Fixed-shape complex linear algebra: 2x2 / 3x3 matrices and the SU(3) generators.

All matrices are plain numpy arrays of dtype complex128; the module never
infers shapes.  Only four generator exponentials are provided, in closed
form, because only those four appear in the Euler-angle factorization used
by the junction module.
"""

from __future__ import annotations

import math

import numpy as np

# Aliases for readability of signatures; these are ordinary ndarrays.
Mat2 = np.ndarray
Mat3 = np.ndarray
Vec2 = np.ndarray
Vec3 = np.ndarray

#: Default tolerance for unitarity checks.  Entries are O(1) everywhere.
UNITARITY_TOL = 1e-12

#: Relative determinant threshold below which a 2x2 matrix is treated as singular.
SINGULAR_RTOL = 1e-13


class SingularMatrixError(ValueError):
    """A 2x2 inverse was requested for an effectively singular matrix."""


def _finite(m: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return m


def as_complex_matrix(entries, shape: tuple[int, int]) -> np.ndarray:
    """Coerce to a complex array of the given shape, rejecting non-finite entries."""
    m = np.asarray(entries, dtype=complex)
    if m.shape != shape:
        raise ValueError(f"expected shape {shape}, got {m.shape}")
    return _finite(m)


def as_vec3(entries) -> Vec3:
    v = np.asarray(entries, dtype=complex).reshape(3)
    return _finite(v)


_GELL_MANN: tuple[Mat3, ...] = tuple(
    np.array(m, dtype=complex)
    for m in (
        [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
        [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
        [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
        [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
        [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
        [
            [1 / math.sqrt(3), 0, 0],
            [0, 1 / math.sqrt(3), 0],
            [0, 0, -2 / math.sqrt(3)],
        ],
    )
)
for _m in _GELL_MANN:
    _m.setflags(write=False)


def gell_mann(index: int) -> Mat3:
    """Return the SU(3) generator with the given 1-based index (1..8)."""
    if not isinstance(index, (int, np.integer)) or not 1 <= index <= 8:
        raise ValueError(f"generator index must be in 1..8, got {index!r}")
    return _GELL_MANN[index - 1].copy()


def exp_i_generator(index: int, angle: float) -> Mat3:
    """Return exp(i * angle * generator) for index in {2, 3, 5, 8}, in closed form.

    Generators 2 and 5 exponentiate to real rotation blocks, 3 and 8 to
    diagonal phases.  The remaining generators are not needed and are
    rejected.
    """
    t = float(angle)
    if not math.isfinite(t):
        raise ValueError("angle must be finite")
    if index == 2:
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, s, 0], [-s, c, 0], [0, 0, 1]], dtype=complex)
    if index == 3:
        p = np.exp(1j * t)
        return np.diag([p, p.conjugate(), 1.0 + 0j])
    if index == 5:
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]], dtype=complex)
    if index == 8:
        p = np.exp(1j * t / math.sqrt(3))
        return np.diag([p, p, (p * p).conjugate()])
    raise ValueError(f"no closed-form exponential for generator {index!r}")


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product."""
    return a @ b


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T.copy()


def max_norm(a: np.ndarray) -> float:
    """Largest entry modulus."""
    return float(np.abs(a).max())


def inverse2(a: Mat2) -> Mat2:
    """Invert a 2x2 matrix via the determinant formula.

    Raises SingularMatrixError when |det| <= SINGULAR_RTOL * max_norm(a)**2,
    which in the ring solver signals an internal wire decoupling.
    """
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if abs(det) <= SINGULAR_RTOL * max_norm(a) ** 2:
        raise SingularMatrixError(f"2x2 matrix is singular to working precision (|det|={abs(det):.3e})")
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=complex) / det


def unitarity_error(a: np.ndarray) -> float:
    """Max-norm of a @ a^dagger - I for a square matrix."""
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("unitarity_error expects a square matrix")
    return max_norm(a @ a.conj().T - np.eye(n))
