"""Double-node ring solvers: bounce series, resolvent closed form, and algebraic forms.

A ring is two three-wire nodes at positions xi1 > xi2 joined by the two
interior wires; unit flux enters on the exterior wire of the left node.
The six amplitudes (A, B, C, D, E, F) of the piecewise plane-wave state
are obtained by three independent routes that must agree:

* solve_series      -- sums the multiple-bounce expansion term by term,
* solve_closed_form -- resums the bounce series into a 2x2 resolvent,
* solve_algebraic   -- explicit component formulas from eliminating the
                       interior amplitudes.

Scale-invariant nodes admit much simpler closed forms for the symmetric
and swap-antisymmetric ring variants; those fast paths live here too,
together with the perfect-transmission target for the antisymmetric ring.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .junction import (
    JunctionParams,
    Orientation,
    ScatteringMatrix,
    build_V,
    is_scale_invariant,
    s_matrix,
)
from .smallmat import Mat2, Mat3, SingularMatrixError, inverse2

#: Interior-wire swap used by the antisymmetric ring variant.
PERM_23: Mat3 = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
PERM_23.setflags(write=False)

#: |denominator| below this is treated as a decoupled (degenerate) ring.
DEGENERATE_TOL = 1e-13

#: Bounce count after which solve_series switches to binary doubling.
_SERIES_DOUBLING_THRESHOLD = 4096


class DegenerateRingError(ArithmeticError):
    """The ring solve is singular: an interior wire has effectively decoupled."""


class ConvergenceError(ArithmeticError):
    """The bounce series did not meet its tolerance within the term budget."""

    def __init__(self, message: str, partial: "RingAmplitudes", terms: int, bound: float):
        super().__init__(message)
        self.partial = partial
        self.terms = terms
        self.bound = bound


@dataclass(frozen=True)
class Symmetric:
    """Right node identical to the left one."""


@dataclass(frozen=True)
class AntiSymmetric:
    """Right node identical to the left one with the interior wires swapped."""


@dataclass(frozen=True)
class General:
    """Independent right node."""

    right: JunctionParams


SymmetryMode = Symmetric | AntiSymmetric | General

SYMMETRIC = Symmetric()
ANTISYMMETRIC = AntiSymmetric()


@dataclass(frozen=True)
class RingConfig:
    """Two nodes at xi1 > xi2 plus the symmetry relation between them."""

    left: JunctionParams
    mode: SymmetryMode
    xi1: float
    xi2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.xi1) and math.isfinite(self.xi2)):
            raise ValueError("node positions must be finite")
        if not self.xi1 > self.xi2:
            raise ValueError(f"xi1 must exceed xi2, got xi1={self.xi1!r}, xi2={self.xi2!r}")
        if not isinstance(self.mode, (Symmetric, AntiSymmetric, General)):
            raise ValueError(f"unknown symmetry mode {self.mode!r}")

    @property
    def dxi(self) -> float:
        """Arm length xi1 - xi2 (strictly positive)."""
        return self.xi1 - self.xi2


@dataclass(frozen=True)
class RingAmplitudes:
    """The six complex coefficients of the ring scattering state.

    A is the reflected and F the transmitted exterior amplitude; B..E live
    on the interior wires.  For unitary nodes |A|^2 + |F|^2 = 1.
    """

    A: complex
    B: complex
    C: complex
    D: complex
    E: complex
    F: complex

    @property
    def p_reflection(self) -> float:
        return abs(self.A) ** 2

    @property
    def p_transmission(self) -> float:
        return abs(self.F) ** 2

    def to_array(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C, self.D, self.E, self.F], dtype=complex)


def flux_defect(amps: RingAmplitudes) -> float:
    """| |A|^2 + |F|^2 - 1 |, zero for any ring built from unitary nodes."""
    return abs(amps.p_reflection + amps.p_transmission - 1.0)


@dataclass(frozen=True)
class SubBlocks:
    """Component view of the two node matrices as used by the ring formulas.

    Index 1 is the exterior wire of each node; 2 and 3 are the interior
    wires.  `s` and `s_tilde` are the interior 2x2 blocks of the left and
    effective right matrices.
    """

    m1: Mat3
    m2: Mat3

    @classmethod
    def from_matrices(cls, S1: ScatteringMatrix, S2eff: ScatteringMatrix) -> "SubBlocks":
        return cls(m1=S1.m, m2=S2eff.m)

    @property
    def s(self) -> Mat2:
        return self.m1[1:, 1:].copy()

    @property
    def s_tilde(self) -> Mat2:
        return self.m2[1:, 1:].copy()

    # Left-node components.
    @property
    def s11(self) -> complex:
        return complex(self.m1[0, 0])

    @property
    def s12(self) -> complex:
        return complex(self.m1[0, 1])

    @property
    def s13(self) -> complex:
        return complex(self.m1[0, 2])

    @property
    def s21(self) -> complex:
        return complex(self.m1[1, 0])

    @property
    def s22(self) -> complex:
        return complex(self.m1[1, 1])

    @property
    def s23(self) -> complex:
        return complex(self.m1[1, 2])

    @property
    def s31(self) -> complex:
        return complex(self.m1[2, 0])

    @property
    def s32(self) -> complex:
        return complex(self.m1[2, 1])

    @property
    def s33(self) -> complex:
        return complex(self.m1[2, 2])

    # Effective right-node components ("tilde").
    @property
    def t11(self) -> complex:
        return complex(self.m2[0, 0])

    @property
    def t12(self) -> complex:
        return complex(self.m2[0, 1])

    @property
    def t13(self) -> complex:
        return complex(self.m2[0, 2])

    @property
    def t21(self) -> complex:
        return complex(self.m2[1, 0])

    @property
    def t22(self) -> complex:
        return complex(self.m2[1, 1])

    @property
    def t23(self) -> complex:
        return complex(self.m2[1, 2])

    @property
    def t31(self) -> complex:
        return complex(self.m2[2, 0])

    @property
    def t32(self) -> complex:
        return complex(self.m2[2, 1])

    @property
    def t33(self) -> complex:
        return complex(self.m2[2, 2])


def ring_matrices(cfg: RingConfig, k: float) -> tuple[ScatteringMatrix, ScatteringMatrix]:
    """Left inward matrix at xi1 and the effective right outward matrix at xi2."""
    s1 = s_matrix(cfg.left, k, cfg.xi1, Orientation.INWARD)
    if isinstance(cfg.mode, Symmetric):
        s2 = s_matrix(cfg.left, k, cfg.xi2, Orientation.OUTWARD)
    elif isinstance(cfg.mode, AntiSymmetric):
        raw = s_matrix(cfg.left, k, cfg.xi2, Orientation.OUTWARD)
        s2 = ScatteringMatrix(
            m=PERM_23 @ raw.m @ PERM_23,
            k=raw.k,
            xi=raw.xi,
            orientation=Orientation.OUTWARD,
        )
    else:
        s2 = s_matrix(cfg.mode.right, k, cfg.xi2, Orientation.OUTWARD)
    return s1, s2


def _assemble(blocks: SubBlocks, v: np.ndarray) -> RingAmplitudes:
    # v is the resolvent (or partial bounce sum) applied to (s21, s31).
    st = blocks.s_tilde
    sv = st @ v
    return RingAmplitudes(
        A=blocks.s11 + blocks.s12 * sv[0] + blocks.s13 * sv[1],
        B=blocks.s21 + blocks.s22 * sv[0] + blocks.s23 * sv[1],
        C=blocks.t22 * v[0] + blocks.t23 * v[1],
        D=blocks.s31 + blocks.s32 * sv[0] + blocks.s33 * sv[1],
        E=blocks.t32 * v[0] + blocks.t33 * v[1],
        F=blocks.t12 * v[0] + blocks.t13 * v[1],
    )


def solve_closed_form(S1: ScatteringMatrix, S2eff: ScatteringMatrix) -> RingAmplitudes:
    """Resum the bounce series: apply the 2x2 resolvent (I - s s~)^-1 exactly."""
    blocks = SubBlocks.from_matrices(S1, S2eff)
    gap = np.eye(2, dtype=complex) - blocks.s @ blocks.s_tilde
    # gap entries are O(1) by unitarity, so the degeneracy test is absolute;
    # a uniformly tiny gap (fully decoupled ring at resonance) must not pass
    # the scale-relative singularity test inside inverse2.
    det = gap[0, 0] * gap[1, 1] - gap[0, 1] * gap[1, 0]
    if abs(det) < DEGENERATE_TOL:
        raise DegenerateRingError(
            f"ring is degenerate at k={S1.k!r}: |det(I - s s~)|={abs(det):.3e}"
        )
    try:
        resolvent = inverse2(gap)
    except SingularMatrixError as exc:
        raise DegenerateRingError(f"ring is degenerate at k={S1.k!r}: {exc}") from exc
    w = np.array([blocks.s21, blocks.s31], dtype=complex)
    return _assemble(blocks, resolvent @ w)


def solve_series(
    S1: ScatteringMatrix,
    S2eff: ScatteringMatrix,
    tol: float = 1e-12,
    max_terms: int = 100_000,
) -> tuple[RingAmplitudes, int]:
    """Sum the multiple-bounce expansion term by term.

    Term n applies (s s~)^(n-1) to the launch vector (s21, s31); summation
    stops once a geometric bound on the remaining tail drops below tol.
    Two bounds are tried each step and either may certify the stop:

    * block bound -- with P = (s s~)^n and q = |P|_inf < 1, the exact
      identity tail = sum_b P^b * partial gives |tail| <= q/(1-q) * |partial|;
    * ratio bound -- |next increment| / (1 - rho), with rho the matrix
      infinity norm when it certifies contraction, else the worst observed
      increment ratio.  This handles rings where the matrix powers never
      decay but the launch vector lies in the contracting eigenspace
      (symmetric rings keep a unimodular eigenvalue orthogonal to the
      launch vector).

    Slowly contracting rings (thousands of bounces) are finished by exact
    binary doubling of the same series: partial sums over 2n terms follow
    from n via S_2n = S_n + (s s~)^n S_n, so the term count in the result
    stays the true number of bounce terms summed.

    Returns the amplitudes and the number of terms used.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if max_terms < 1:
        raise ValueError("max_terms must be at least 1")
    blocks = SubBlocks.from_matrices(S1, S2eff)
    prod = blocks.s @ blocks.s_tilde
    m11, m12 = complex(prod[0, 0]), complex(prod[0, 1])
    m21, m22 = complex(prod[1, 0]), complex(prod[1, 1])
    rho_matrix = max(abs(m11) + abs(m12), abs(m21) + abs(m22))
    noise_floor = 1e-3 * tol  # rounding noise in increments sits near 1e-16

    d1, d2 = blocks.s21, blocks.s31
    u1 = u2 = 0.0 + 0.0j
    p11, p12, p21, p22 = 1.0 + 0j, 0j, 0j, 1.0 + 0j  # running power of s s~
    terms = 0
    bound = math.inf
    norms: list[float] = []
    phase1 = min(max_terms, _SERIES_DOUBLING_THRESHOLD)
    while terms < phase1:
        u1 += d1
        u2 += d2
        terms += 1
        d1, d2 = m11 * d1 + m12 * d2, m21 * d1 + m22 * d2
        p11, p12, p21, p22 = (
            p11 * m11 + p12 * m21,
            p11 * m12 + p12 * m22,
            p21 * m11 + p22 * m21,
            p21 * m12 + p22 * m22,
        )
        nd = max(abs(d1), abs(d2))
        norms.append(nd)
        if nd <= noise_floor:
            bound = nd
            break
        bound = math.inf
        q = max(abs(p11) + abs(p12), abs(p21) + abs(p22))
        if q < 1.0:
            bound = q / (1.0 - q) * max(abs(u1), abs(u2))
        rho = rho_matrix
        if rho >= 1.0 and len(norms) >= 3 and norms[-3] > 0.0:
            rho = max(norms[-1] / norms[-2], norms[-2] / norms[-3])
        if rho < 1.0:
            bound = min(bound, nd / (1.0 - rho))
        if bound <= tol:
            break
    else:
        return _series_doubling(
            blocks, (m11, m12, m21, m22), (p11, p12, p21, p22), (u1, u2), terms, tol, max_terms
        )
    return _assemble(blocks, np.array([u1, u2], dtype=complex)), terms


def _series_doubling(blocks, m, p, u, terms, tol, max_terms):
    """Finish a slowly contracting bounce series by doubling partial sums."""
    M = np.array([[m[0], m[1]], [m[2], m[3]]], dtype=complex)
    P = np.array([[p[0], p[1]], [p[2], p[3]]], dtype=complex)  # M**terms
    S = np.array([u[0], u[1]], dtype=complex)
    prev_inc = math.inf
    bound = math.inf
    while True:
        inc = P @ S  # series terms [terms, 2*terms), summed
        inc_norm = float(np.abs(inc).max())
        if inc_norm == 0.0:
            bound = 0.0
            break
        if inc_norm <= tol:
            # certify with a per-block decay factor: the matrix norm of P when
            # it contracts (rigorous), else the observed block-to-block decay
            ratios = []
            q = float(np.abs(P).sum(axis=1).max())
            if q < 1.0:
                ratios.append(q)
            if math.isfinite(prev_inc) and prev_inc > 0.0:
                ratios.append(inc_norm / prev_inc)
            if ratios and min(ratios) < 1.0:
                bound = inc_norm / (1.0 - min(ratios))
                if bound <= tol:
                    break
        if 2 * terms > max_terms:
            partial = _assemble(blocks, S)
            raise ConvergenceError(
                f"bounce series did not reach tol={tol:g} within {max_terms} terms "
                f"(block increment {inc_norm:g})",
                partial=partial,
                terms=terms,
                bound=bound if math.isfinite(bound) else inc_norm,
            )
        S = S + inc
        P = P @ P
        terms *= 2
        prev_inc = inc_norm
    return _assemble(blocks, S), terms


def solve_algebraic(S1: ScatteringMatrix, S2eff: ScatteringMatrix) -> RingAmplitudes:
    """Explicit component solution obtained by eliminating the interior amplitudes.

    Independent of the resolvent route: everything is spelled out through
    the pair sums over the interior wires and a common 2x2 determinant.
    """
    b = SubBlocks.from_matrices(S1, S2eff)

    def pair_a(i: int, j: int) -> complex:
        # sum over interior wires of s[wire, i] * s~[j, wire]
        return b.m1[1, i] * b.m2[j, 1] + b.m1[2, i] * b.m2[j, 2]

    def pair_b(i: int, j: int) -> complex:
        return b.m2[1, i] * b.m1[j, 1] + b.m2[2, i] * b.m1[j, 2]

    a12, a13 = pair_a(0, 1), pair_a(0, 2)
    a22, a23, a32, a33 = pair_a(1, 1), pair_a(1, 2), pair_a(2, 1), pair_a(2, 2)
    b22, b23, b32, b33 = pair_b(1, 1), pair_b(1, 2), pair_b(2, 1), pair_b(2, 2)
    delta = (1.0 - a22) * (1.0 - a33) - a23 * a32
    delta_b = (1.0 - b22) * (1.0 - b33) - b23 * b32
    assert abs(delta - delta_b) <= 1e-12, "determinant identity violated"
    if abs(delta) < DEGENERATE_TOL:
        raise DegenerateRingError(f"ring is degenerate at k={S1.k!r}: |Delta|={abs(delta):.3e}")

    c_num = a12 * (1.0 - a33) + a13 * a32
    e_num = a13 * (1.0 - a22) + a12 * a23
    b_num = b.s31 * b32 + b.s21 * (1.0 - b33)
    d_num = b.s21 * b23 + b.s31 * (1.0 - b22)
    return RingAmplitudes(
        A=b.s11 + (b.s12 * c_num + b.s13 * e_num) / delta,
        B=b_num / delta,
        C=c_num / delta,
        D=d_num / delta,
        E=e_num / delta,
        F=(b.t12 * b_num + b.t13 * d_num) / delta,
    )


def _require_scale_invariant(cfg: RingConfig, expected_mode: type) -> None:
    if not isinstance(cfg.mode, expected_mode):
        raise ValueError(f"this fast path requires {expected_mode.__name__} mode")
    if not is_scale_invariant(cfg.left):
        raise ValueError("this fast path requires a scale-invariant left node")


def solve_symmetric_scale_invariant(cfg: RingConfig, k: float) -> RingAmplitudes:
    """Closed forms for the symmetric ring with a scale-invariant node.

    Everything reduces to the left matrix components and the arm phase
    g = exp(2ik(xi1-xi2)); the common denominator is 1 - g |s11|^2.
    Perfect transmission (A = 0) happens exactly at g = 1.
    """
    _require_scale_invariant(cfg, Symmetric)
    s1 = s_matrix(cfg.left, k, cfg.xi1, Orientation.INWARD)
    g = cmath.exp(2j * k * cfg.dxi)
    s11, s12, s13 = complex(s1.m[0, 0]), complex(s1.m[0, 1]), complex(s1.m[0, 2])
    s21, s31 = complex(s1.m[1, 0]), complex(s1.m[2, 0])
    p11 = abs(s11) ** 2
    den = 1.0 - g * p11
    if abs(den) < DEGENERATE_TOL:
        raise DegenerateRingError(f"symmetric ring is degenerate at k={k!r}")
    return RingAmplitudes(
        A=(1.0 - g) * s11 / den,
        B=s21 / den,
        C=-g * s11 * s12.conjugate() / den,
        D=s31 / den,
        E=-g * s11 * s13.conjugate() / den,
        F=g * (1.0 - p11) / den,
    )


def _anti_invariants(m: Mat3) -> tuple[complex, complex]:
    """Denominator trace term and coupling combination for the antisymmetric forms."""
    cj = complex.conjugate
    s11, s12, s13 = complex(m[0, 0]), complex(m[0, 1]), complex(m[0, 2])
    s21, s22, s23 = complex(m[1, 0]), complex(m[1, 1]), complex(m[1, 2])
    s31, s32, s33 = complex(m[2, 0]), complex(m[2, 1]), complex(m[2, 2])
    trm = s22 * cj(s33) + s23 * cj(s32) + s32 * cj(s23) + s33 * cj(s22)
    lam = (
        -s11 * trm
        + s12 * (cj(s33) * s21 + cj(s23) * s31)
        + s13 * (cj(s32) * s21 + cj(s22) * s31)
    )
    return trm, lam


def solve_antisymmetric_scale_invariant(cfg: RingConfig, k: float) -> RingAmplitudes:
    """Closed forms for the swap-antisymmetric ring with a scale-invariant node.

    With g = exp(2ik(xi1-xi2)) the denominator is
    den = 1 - g * (s22 s33* + s23 s32* + s32 s23* + s33 s22*) + |s11|^2 g^2.
    Perfect reflection (F = 0) happens exactly at g = 1 whenever the
    interior couplings s21, s31 are both nonzero (and den is not).
    """
    _require_scale_invariant(cfg, AntiSymmetric)
    s1 = s_matrix(cfg.left, k, cfg.xi1, Orientation.INWARD)
    g = cmath.exp(2j * k * cfg.dxi)
    m = s1.m
    cj = complex.conjugate
    s11, s12, s13 = complex(m[0, 0]), complex(m[0, 1]), complex(m[0, 2])
    s21, s22, s23 = complex(m[1, 0]), complex(m[1, 1]), complex(m[1, 2])
    s31, s32, s33 = complex(m[2, 0]), complex(m[2, 1]), complex(m[2, 2])
    trm, lam = _anti_invariants(m)
    den = 1.0 - g * trm + abs(s11) ** 2 * g * g
    if abs(den) < DEGENERATE_TOL:
        raise DegenerateRingError(f"antisymmetric ring is degenerate at k={k!r}")
    return RingAmplitudes(
        A=(s11 + s11 * g * g + g * lam) / den,
        B=(
            s21
            + g * (-s21 * (s32 * cj(s23) + s33 * cj(s22)) + s31 * (s22 * cj(s23) + cj(s22) * s23))
        )
        / den,
        C=g * ((cj(s33) * s21 + cj(s23) * s31) + s11 * cj(s12) * g) / den,
        D=(
            s31
            + g * (-s31 * (s22 * cj(s33) + s23 * cj(s32)) + s21 * (s32 * cj(s33) + s33 * cj(s32)))
        )
        / den,
        E=g * ((cj(s32) * s21 + cj(s22) * s31) + s11 * cj(s13) * g) / den,
        F=g * (cj(s31) * s21 + cj(s21) * s31) * (1.0 - g) / den,
    )


@dataclass(frozen=True)
class TransmissionTarget:
    """Outcome of the antisymmetric perfect-transmission condition.

    status is "ok" when c_star holds the value cos(2 k (xi1-xi2)) must take
    for the reflected amplitude to vanish; "out_of_range" when the required
    cosine has modulus above one (no wavenumber works); "degenerate" when
    the condition collapses because the node's exterior reflection vanishes
    (s11 = 0) or the exterior wire decouples entirely (|s11| = 1, where the
    nominal cosine root is a denominator zero, not a transmission zero).
    """

    c_star: float | None
    status: str


def reflection_core(p: JunctionParams) -> Mat3:
    """Position-independent part of a scale-invariant node's scattering matrix.

    V diag(+-1) V^dagger with the signs read off the eigenphases; Hermitian
    as well as unitary.
    """
    if not is_scale_invariant(p):
        raise ValueError("reflection_core requires a scale-invariant node")
    v = build_V(p)
    signs = np.array([1.0 if _dist0(t) <= _distpi(t) else -1.0 for t in p.theta])
    return (v * signs) @ v.conj().T


def _dist0(theta: float) -> float:
    return min(theta, 2.0 * math.pi - theta)


def _distpi(theta: float) -> float:
    return abs(theta - math.pi)


def perfect_transmission_target(cfg: RingConfig) -> TransmissionTarget:
    """Target value of cos(2k(xi1-xi2)) for zero reflection on the antisymmetric ring.

    Computed from the position-independent node matrix, so it needs no
    wavenumber.  The underlying ratio is real for every scale-invariant
    node (the core matrix is Hermitian); an assertion guards this.
    """
    _require_scale_invariant(cfg, AntiSymmetric)
    h = reflection_core(cfg.left)
    h11 = complex(h[0, 0])
    if abs(h11) < 1e-12 or abs(h11) > 1.0 - 1e-12:
        return TransmissionTarget(c_star=None, status="degenerate")
    _, lam = _anti_invariants(h)
    ratio = -lam / (2.0 * h11)
    assert abs(ratio.imag) < 1e-10, "transmission target ratio should be real"
    c_star = ratio.real
    if abs(c_star) <= 1.0:
        return TransmissionTarget(c_star=c_star, status="ok")
    return TransmissionTarget(c_star=None, status="out_of_range")


def solve_auto(cfg: RingConfig, k: float) -> RingAmplitudes:
    """Solve one ring at one wavenumber, taking a fast path when one applies.

    Scale-invariant symmetric/antisymmetric rings use their dedicated closed
    forms (well conditioned at their resonances, where the general resolvent
    becomes singular); everything else goes through the resolvent.  In debug
    runs the fast paths are cross-checked against the resolvent.
    """
    if isinstance(cfg.mode, Symmetric) and is_scale_invariant(cfg.left):
        amps = solve_symmetric_scale_invariant(cfg, k)
    elif isinstance(cfg.mode, AntiSymmetric) and is_scale_invariant(cfg.left):
        amps = solve_antisymmetric_scale_invariant(cfg, k)
    else:
        return solve_closed_form(*ring_matrices(cfg, k))
    if __debug__:
        _crosscheck_fast_path(cfg, k, amps)
    return amps


def _crosscheck_fast_path(cfg: RingConfig, k: float, amps: RingAmplitudes) -> None:
    s1, s2 = ring_matrices(cfg, k)
    blocks = SubBlocks.from_matrices(s1, s2)
    gap = np.eye(2, dtype=complex) - blocks.s @ blocks.s_tilde
    det = gap[0, 0] * gap[1, 1] - gap[0, 1] * gap[1, 0]
    if abs(det) < 1e-6:
        return  # resolvent too ill-conditioned near resonance to compare against
    ref = _assemble(blocks, inverse2(gap) @ np.array([blocks.s21, blocks.s31]))
    diff = float(np.abs(amps.to_array() - ref.to_array()).max())
    assert diff <= 1e-8, f"fast path disagrees with resolvent by {diff:.3e} at k={k!r}"
