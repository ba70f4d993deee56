"""A single three-wire node: U(3) boundary matrix, scattering matrices, predicates.

The node condition couples boundary values and derivatives of the wave
function through a unitary matrix U and a length scale L0:

    (U - I) Psi + i L0 (U + I) Psi' = 0.

U is parametrized by three eigenphases theta_i and six Euler angles
(alpha, beta, gamma, delta, a, b) of the diagonalizing SU(3) element.
The scattering matrix for a plane wave of wavenumber k at node position
xi follows in closed form; `junction_residual` checks any candidate
scattering relation directly against the node condition and is the
ground truth for everything else in this package.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .smallmat import (
    Mat3,
    UNITARITY_TOL,
    Vec3,
    as_complex_matrix,
    as_vec3,
    exp_i_generator,
    max_norm,
    unitarity_error,
)

TWO_PI = 2.0 * math.pi

#: Default tolerance for angle-based predicates; looser than the arithmetic
#: tolerance because users typically type truncated decimals for pi.
PREDICATE_TOL = 1e-9


def canonical_angle(x: float) -> float:
    """Reduce an angle to the canonical storage range [0, 2*pi)."""
    v = math.fmod(float(x), TWO_PI)
    if v < 0.0:
        v += TWO_PI
    if v >= TWO_PI:
        v = 0.0
    return v


class Orientation(Enum):
    """Wire axis convention at a node: axes pointing toward or away from it."""

    INWARD = "inward"
    OUTWARD = "outward"


@dataclass(frozen=True)
class JunctionParams:
    """The nine angles plus gauge length defining one U(3) node.

    theta holds the three eigenphases of U; the six Euler angles fix the
    diagonalizing unitary.  Two further Euler angles of the general
    factorization commute with the eigenphase diagonal and cancel in
    U = V D V^dagger, so they are deliberately not stored.  All angles are
    reduced to [0, 2*pi) on construction.
    """

    theta: tuple[float, float, float] = (0.0, 0.0, 0.0)
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    a: float = 0.0
    b: float = 0.0
    L0: float = 1.0

    def __post_init__(self) -> None:
        th = tuple(float(t) for t in self.theta)
        if len(th) != 3:
            raise ValueError("theta must hold exactly three eigenphases")
        angles = (*th, self.alpha, self.beta, self.gamma, self.delta, self.a, self.b)
        if not all(math.isfinite(x) for x in angles):
            raise ValueError("all angles must be finite")
        if not (math.isfinite(self.L0) and self.L0 > 0.0):
            raise ValueError(f"L0 must be positive and finite, got {self.L0!r}")
        object.__setattr__(self, "theta", tuple(canonical_angle(t) for t in th))
        for name in ("alpha", "beta", "gamma", "delta", "a", "b"):
            object.__setattr__(self, name, canonical_angle(getattr(self, name)))
        object.__setattr__(self, "L0", float(self.L0))


@dataclass(frozen=True)
class ScatteringMatrix:
    """A 3x3 unitary node scattering matrix tagged with its wave context."""

    m: Mat3
    k: float
    xi: float
    orientation: Orientation

    def __post_init__(self) -> None:
        m = as_complex_matrix(self.m, (3, 3))
        err = unitarity_error(m)
        if err > UNITARITY_TOL:
            raise ValueError(f"scattering matrix is not unitary (error {err:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)


@functools.lru_cache(maxsize=128)
def build_V(p: JunctionParams) -> Mat3:
    """Diagonalizing unitary from the six Euler angles (product of generator exponentials)."""
    v = exp_i_generator(3, p.alpha)
    v = v @ exp_i_generator(2, p.beta)
    v = v @ exp_i_generator(3, p.gamma)
    v = v @ exp_i_generator(5, p.delta)
    v = v @ exp_i_generator(3, p.a)
    v = v @ exp_i_generator(2, p.b)
    v.setflags(write=False)
    return v


def build_U(p: JunctionParams) -> Mat3:
    """Boundary matrix U = V diag(exp(i*theta_i)) V^dagger."""
    v = build_V(p)
    d = np.exp(1j * np.array(p.theta))
    return (v * d) @ v.conj().T


def _s0_diagonal(p: JunctionParams, k: float, orientation: Orientation) -> np.ndarray:
    # (i k L_i + 1) / (i k L_i - 1) with L_i = L0 * cot(theta_i / 2), written
    # through (cos, sin) of theta_i/2 so theta_i = 0 needs no limit handling.
    out = np.empty(3, dtype=complex)
    for i, th in enumerate(p.theta):
        c = p.L0 * k * math.cos(th / 2.0)
        s = math.sin(th / 2.0)
        if orientation is Orientation.INWARD:
            out[i] = (1j * c + s) / (1j * c - s)
        else:
            out[i] = (1j * c - s) / (1j * c + s)
    return out


def s_matrix(
    p: JunctionParams,
    k: float,
    xi: float,
    orientation: Orientation = Orientation.INWARD,
) -> ScatteringMatrix:
    """Scattering matrix of the node at position xi for wavenumber k > 0.

    Inward orientation carries the exp(+2ik xi) position phase and maps
    incoming amplitudes (coefficients of exp(+ik x)) to outgoing ones;
    outward orientation flips the sign of k throughout.
    """
    if not (math.isfinite(k) and k > 0.0):
        raise ValueError(f"k must be positive and finite, got {k!r}")
    if not math.isfinite(xi):
        raise ValueError("xi must be finite")
    v = build_V(p)
    d = _s0_diagonal(p, k, orientation)
    sign = 2.0 if orientation is Orientation.INWARD else -2.0
    phase = np.exp(1j * sign * k * xi)
    m = phase * ((v * d) @ v.conj().T)
    return ScatteringMatrix(m=m, k=float(k), xi=float(xi), orientation=orientation)


def junction_residual(
    U: Mat3,
    L0: float,
    k: float,
    xi: float,
    phi: Vec3,
    psi: Vec3,
    orientation: Orientation = Orientation.INWARD,
) -> float:
    """Max-norm defect of the node condition for given incoming/outgoing amplitudes.

    Builds the boundary vector and its derivative from plane waves
    phi * exp(+-ik x) + psi * exp(-+ik x) evaluated at xi and returns
    max | (U - I) Psi + i L0 (U + I) Psi' |.  A correct scattering relation
    psi = S phi drives this to rounding level; it is the oracle every
    scattering matrix here is tested against.
    """
    if not (math.isfinite(k) and k > 0.0):
        raise ValueError(f"k must be positive and finite, got {k!r}")
    U = as_complex_matrix(U, (3, 3))
    phi = as_vec3(phi)
    psi = as_vec3(psi)
    if orientation is Orientation.INWARD:
        e_in, e_out = np.exp(1j * k * xi), np.exp(-1j * k * xi)
        big_psi = e_in * phi + e_out * psi
        big_dpsi = 1j * k * (e_in * phi - e_out * psi)
    else:
        e_in, e_out = np.exp(-1j * k * xi), np.exp(1j * k * xi)
        big_psi = e_in * phi + e_out * psi
        big_dpsi = -1j * k * (e_in * phi - e_out * psi)
    eye = np.eye(3)
    res = (U - eye) @ big_psi + 1j * L0 * (U + eye) @ big_dpsi
    return float(np.abs(res).max())


def probabilities(S: ScatteringMatrix) -> np.ndarray:
    """Real 3x3 table with entry (j, i) = |S_ji|^2, the probability for i -> j.

    Diagonal entries are reflection probabilities; rows and columns each sum
    to one by unitarity.
    """
    return np.abs(S.m) ** 2


def is_time_reversal(p: JunctionParams, tol: float = PREDICATE_TOL) -> bool:
    """True when the boundary matrix is symmetric (U = U^T).

    A sufficient parameter condition is alpha, gamma, a each in {0, pi}
    mod 2*pi, which makes V real and the scattering matrix symmetric.
    """
    u = build_U(p)
    return max_norm(u - u.T) <= tol


def _dist_to_0_or_pi(theta: float) -> float:
    # theta is canonical in [0, 2*pi)
    return min(theta, TWO_PI - theta, abs(theta - math.pi))


def is_scale_invariant(p: JunctionParams, tol: float = PREDICATE_TOL) -> bool:
    """True when every eigenphase is 0 or pi (mod 2*pi) within tol.

    For such nodes the boundary condition splits into value and derivative
    parts, the length scale drops out, and scattering probabilities become
    independent of k.
    """
    return all(_dist_to_0_or_pi(t) <= tol for t in p.theta)


def buttiker_matrix(b: float) -> Mat3:
    """The classic symmetric three-port beam-splitter scattering matrix.

    One real parameter b sets the split; b = pi/4 is the balanced coupler
    with zero back-reflection on port 1.  Equals the node construction with
    eigenphases (0, pi, pi) and Euler angles (0, 3*pi/2, pi, pi/4, 0, b),
    up to the position phase.
    """
    c, s = math.cos(2.0 * b), math.sin(2.0 * b)
    r = s / math.sqrt(2.0)
    return np.array(
        [
            [-c, r, r],
            [r, (c - 1.0) / 2.0, (c + 1.0) / 2.0],
            [r, (c + 1.0) / 2.0, (c - 1.0) / 2.0],
        ],
        dtype=complex,
    )


def gauge_shift(p: JunctionParams, new_L0: float) -> JunctionParams:
    """Rescale the gauge length, absorbing the change into the eigenphases.

    The eigenphases transform so that L0 * cot(theta_i / 2) is preserved,
    which leaves the scattering matrix invariant at every wavenumber.
    Eigenphases 0 and pi are fixed points.
    """
    if not (math.isfinite(new_L0) and new_L0 > 0.0):
        raise ValueError(f"new_L0 must be positive and finite, got {new_L0!r}")
    ratio = p.L0 / new_L0
    new_theta = tuple(
        2.0 * math.atan2(math.sin(t / 2.0), ratio * math.cos(t / 2.0)) for t in p.theta
    )
    return JunctionParams(
        theta=new_theta,
        alpha=p.alpha,
        beta=p.beta,
        gamma=p.gamma,
        delta=p.delta,
        a=p.a,
        b=p.b,
        L0=new_L0,
    )
