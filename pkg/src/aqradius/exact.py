"""Closed-form q-radius and q-Crawford values for special matrices.

Any 2x2 complex matrix is unitarily similar to ``exp(i t) [[gamma, a], [b, gamma]]``
with 0 <= b <= a, and its q-numerical range for real q in [0, 1] is a translated
filled ellipse.  This module computes that canonical form, the ellipse, and the
resulting extremal moduli, plus the known formula for the 3x3 nilpotent Jordan
block.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .semispace import as_operator

__all__ = [
    "CanonicalForm2x2",
    "ComplexQUnsupported",
    "EllipseDisk",
    "QOutOfRange",
    "canonical_2x2",
    "jordan3_q_radius",
    "q_crawford_2x2",
    "q_radius_2x2",
    "q_range_2x2",
]


class ComplexQUnsupported(ValueError):
    """The ellipse closed form only covers real q in [0, 1]."""


class QOutOfRange(ValueError):
    """q is outside the domain of the requested closed form."""


@dataclass
class CanonicalForm2x2:
    """Parameters (t, gamma, a, b) of the zero-diagonal canonical form.

    ``u_similar^H T u_similar = exp(i t) [[gamma, a], [b, gamma]]`` with
    0 <= b <= a and t in [0, 2 pi).
    """

    t: float
    gamma: complex
    a: float
    b: float
    u_similar: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.t) * np.array(
            [[self.gamma, self.a], [self.b, self.gamma]], dtype=np.complex128
        )


@dataclass
class EllipseDisk:
    """Filled rotated ellipse: the q-numerical range of a 2x2 matrix (real q).

    The set is ``center + exp(i rotation) * {r (M cos s + i m sin s)}`` over
    r in [0, 1], s in [0, 2 pi), with semi-axes M = semi_major, m = semi_minor.
    """

    center: complex
    semi_major: float
    semi_minor: float
    rotation: float

    def point(self, r: float, s: float) -> complex:
        body = r * (self.semi_major * math.cos(s) + 1j * self.semi_minor * math.sin(s))
        return self.center + cmath.exp(1j * self.rotation) * body

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        zeta = (complex(z) - self.center) * cmath.exp(-1j * self.rotation)
        xi, eta = zeta.real, zeta.imag
        big, small = self.semi_major, self.semi_minor
        if big <= tol:
            return abs(zeta) <= tol
        if small <= tol:
            return abs(eta) <= tol and abs(xi) <= big + tol
        return (xi / big) ** 2 + (eta / small) ** 2 <= 1.0 + tol


def _zero_diagonal_vector(m: np.ndarray) -> np.ndarray:
    """Unit u with u^H M u = 0 for a traceless 2x2 matrix M (closed form)."""
    d = complex(m[0, 0])
    b = complex(m[0, 1])
    c = complex(m[1, 0])
    if abs(d) < 1e-300:
        return np.array([1.0, 0.0], dtype=np.complex128)
    # u = (cos r, sin r e^{i phi}) gives u^H M u = d cos 2r + beta(phi) sin 2r
    # with beta = (b e^{i phi} + c e^{-i phi}) / 2; pick phi making beta a real
    # multiple of d, then solve the real equation for r.
    bp = b / d
    cp = c / d
    phi = math.atan2(-(bp.imag + cp.imag), bp.real - cp.real)
    kappa = ((b * cmath.exp(1j * phi) + c * cmath.exp(-1j * phi)) / (2.0 * d)).real
    two_r = math.atan2(1.0, -kappa)
    r = 0.5 * two_r
    return np.array([math.cos(r), math.sin(r) * cmath.exp(1j * phi)], dtype=np.complex128)


def canonical_2x2(t) -> CanonicalForm2x2:
    """Canonical form of a 2x2 matrix under unitary similarity.

    Splits off the trace, conjugates the traceless part to zero diagonal, and
    absorbs the off-diagonal phases into a diagonal unitary so the remaining
    entries are the nonnegative reals b <= a times a common phase exp(i t).
    """
    t_mat = as_operator(t)
    if t_mat.shape != (2, 2):
        raise ValueError("canonical form is defined for 2x2 matrices only")
    half_trace = 0.5 * complex(np.trace(t_mat))
    m0 = t_mat - half_trace * np.eye(2)

    u1 = _zero_diagonal_vector(m0)
    u2 = np.array([-np.conj(u1[1]), np.conj(u1[0])], dtype=np.complex128)
    basis = np.column_stack([u1, u2])
    m = basis.conj().T @ m0 @ basis
    # missing arguments of vanished off-diagonals default to 0
    up, lo = complex(m[0, 1]), complex(m[1, 0])
    arg_up = cmath.phase(up) if abs(up) > 1e-300 else 0.0
    arg_lo = cmath.phase(lo) if abs(lo) > 1e-300 else 0.0
    phase = math.fmod(0.5 * (arg_up + arg_lo), 2.0 * math.pi)
    if phase < 0.0:
        phase += 2.0 * math.pi
    delta = 0.5 * (arg_lo - arg_up)
    basis = basis @ np.diag([1.0, cmath.exp(1j * delta)]).astype(np.complex128)
    a_val, b_val = abs(up), abs(lo)
    if a_val < b_val:
        a_val, b_val = b_val, a_val
        basis = basis @ np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    gamma = half_trace * cmath.exp(-1j * phase)
    return CanonicalForm2x2(t=phase, gamma=gamma, a=a_val, b=b_val, u_similar=basis)


def _check_real_q(q) -> float:
    qc = complex(q)
    if abs(qc.imag) > 1e-12:
        raise ComplexQUnsupported(
            "the ellipse closed form needs real q; use the sampling estimator instead"
        )
    qr = float(qc.real)
    if not 0.0 <= qr <= 1.0 + 1e-12:
        raise QOutOfRange(f"q = {qr} is outside [0, 1]")
    return min(qr, 1.0)


def q_range_2x2(form: CanonicalForm2x2, q) -> EllipseDisk:
    """Ellipse-disk q-numerical range of a canonical 2x2 form, real q in [0, 1]."""
    qr = _check_real_q(q)
    c = 0.5 * (form.a + form.b)
    d = 0.5 * (form.a - form.b)
    p = math.sqrt(max(0.0, 1.0 - qr * qr))
    return EllipseDisk(
        center=cmath.exp(1j * form.t) * form.gamma * qr,
        semi_major=c + p * d,
        semi_minor=d + p * c,
        rotation=form.t,
    )


def _extreme_on_boundary(disk: EllipseDisk, sign: float) -> float:
    """Extremal |z| over the boundary ellipse (sign=+1 max, sign=-1 min)."""
    zeta = disk.center * cmath.exp(-1j * disk.rotation)
    big, small = disk.semi_major, disk.semi_minor

    def modulus(s: float) -> float:
        return abs(zeta + big * math.cos(s) + 1j * small * math.sin(s))

    grid = np.linspace(0.0, 2.0 * math.pi, 720, endpoint=False)
    vals = np.abs(zeta + big * np.cos(grid) + 1j * small * np.sin(grid))
    idx = int(np.argmax(sign * vals))
    step = grid[1] - grid[0]
    res = minimize_scalar(
        lambda s: -sign * modulus(s),
        bounds=(grid[idx] - step, grid[idx] + step),
        method="bounded",
        options={"xatol": 1e-13},
    )
    best = max(-res.fun, sign * float(vals[idx]))
    return best if sign > 0 else -best


def q_radius_2x2(form: CanonicalForm2x2, q) -> float:
    """Largest modulus over the ellipse-disk range (attained on the boundary)."""
    disk = q_range_2x2(form, q)
    return _extreme_on_boundary(disk, 1.0)


def _distance_to_ellipse(px: float, py: float, big: float, small: float) -> float:
    """Distance from a point outside the axis-aligned ellipse to its boundary."""
    px, py = abs(px), abs(py)
    if big <= 0.0 and small <= 0.0:
        return math.hypot(px, py)
    if small <= 0.0:
        # degenerate segment [-big, big] on the x axis
        return math.hypot(max(px - big, 0.0), py)
    if big <= 0.0:
        return math.hypot(px, max(py - small, 0.0))
    # on-axis outside points project onto the nearest vertex
    if py == 0.0:
        return max(px - big, 0.0)
    if px == 0.0:
        return max(py - small, 0.0)

    # projection equation, strictly decreasing in t on (-small^2, inf)
    def g(t: float) -> float:
        return (big * px / (t + big * big)) ** 2 + (small * py / (t + small * small)) ** 2 - 1.0

    lo = -(small * small) + max(1e-300, small * small) * 1e-14
    hi = math.hypot(big * px, small * py)
    while g(hi) >= 0.0:
        hi *= 2.0
    t_star = brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    ex = big * big * px / (t_star + big * big)
    ey = small * small * py / (t_star + small * small)
    return math.hypot(px - ex, py - ey)


def q_crawford_2x2(form: CanonicalForm2x2, q) -> float:
    """Smallest modulus over the ellipse-disk range (0 if the origin is inside)."""
    disk = q_range_2x2(form, q)
    if disk.contains(0.0):
        return 0.0
    zeta = -disk.center * cmath.exp(-1j * disk.rotation)
    return _distance_to_ellipse(zeta.real, zeta.imag, disk.semi_major, disk.semi_minor)


def jordan3_q_radius(q) -> float:
    """q-numerical radius of the 3x3 nilpotent Jordan block, q in [1/2, 1].

    omega_q = (1/8) sqrt(27 + 18 q - 13 q^2 + (9 + 7q) sqrt((1 - q)(9 + 7q))).
    """
    qc = complex(q)
    if abs(qc.imag) > 1e-12:
        raise ComplexQUnsupported("the Jordan-block formula needs real q")
    qr = float(qc.real)
    if not 0.5 - 1e-12 <= qr <= 1.0 + 1e-12:
        raise QOutOfRange(f"q = {qr} is outside [1/2, 1]")
    qr = min(max(qr, 0.5), 1.0)
    inner = (1.0 - qr) * (9.0 + 7.0 * qr)
    val = 27.0 + 18.0 * qr - 13.0 * qr * qr + (9.0 + 7.0 * qr) * math.sqrt(inner)
    return 0.125 * math.sqrt(val)
