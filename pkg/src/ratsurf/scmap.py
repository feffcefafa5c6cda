"""Schwarz-Christoffel map of the upper half plane onto a rational triangle.

F_T(xi) = int_0^xi w^(n0/n - 1) (1 - w)^(n1/n - 1) dw.

Legs of the contour that start at a prevertex (0 or 1) are integrated with
Gauss-Jacobi rules whose weight absorbs the algebraic endpoint singularity.
All other legs have smooth integrands and use adaptive composite
Gauss-Legendre panels.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .rootsheet import BRANCH_EPS, BranchPointError, SurfacePoint, omega, sheet_of
from .signature import TriangleSignature

DEFAULT_TOL = 1e-10
NEAR = 0.5  # legs from a prevertex are used when xi lies within this distance
JACOBI_LEN = 0.25


class QuadratureError(RuntimeError):
    def __init__(self, msg: str, estimate: float):
        super().__init__(f"{msg} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


def _check_tol(tol: float) -> float:
    if not (1e-13 <= tol <= 1e-6):
        raise ValueError(f"tol must lie in [1e-13, 1e-6], got {tol}")
    return tol


@lru_cache(maxsize=None)
def _jacobi(npts: int, beta: float):
    """Gauss-Jacobi rule for the weight (1 + x)^beta on [-1, 1], by Golub-Welsch.

    scipy's roots_jacobi places the nodes near -1 too loosely once beta
    approaches -1 (moments off by 1e-11), so the Jacobi matrix is
    diagonalized directly instead.
    """
    k = np.arange(npts, dtype=float)
    s = 2.0 * k + beta
    diag = beta * beta / (s * (s + 2.0))
    diag[0] = beta / (beta + 2.0)
    k1 = k[1:]
    s1 = 2.0 * k1 + beta
    off = np.sqrt(4.0 * k1 * k1 * (k1 + beta) * (k1 + beta) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)))
    x, vec = eigh_tridiagonal(diag, off)
    mu0 = 2.0 ** (beta + 1.0) / (beta + 1.0)
    return x, mu0 * vec[0] ** 2


@lru_cache(maxsize=None)
def _legendre(npts: int):
    return np.polynomial.legendre.leggauss(npts)


def _exponents(sig: TriangleSignature) -> tuple[float, float]:
    return sig.n0 / sig.n, sig.n1 / sig.n


def _integrand(w: np.ndarray, a: float, b: float) -> np.ndarray:
    """w^(a-1) (1-w)^(b-1) on the closed upper half plane (arg w in [0,pi], arg(1-w) in [-pi,0])."""
    y = np.abs(w.imag)
    arg0 = np.arctan2(y, w.real)
    arg1 = np.arctan2(y, w.real - 1.0) - np.pi
    lw = np.log(np.abs(w)) + 1j * arg0
    l1 = np.log(np.abs(1.0 - w)) + 1j * arg1
    return np.exp((a - 1.0) * lw + (b - 1.0) * l1)


def _prevertex_leg(start: int, h: complex, a: float, b: float, tol: float) -> complex:
    """Integral from the prevertex `start` (0 or 1) to start + h, |h| <= NEAR.

    Substituting w = start + h t puts the singular factor t^(c-1) into the
    Gauss-Jacobi weight.  The Jacobi piece is kept to length JACOBI_LEN so the
    remaining factor is analytic on |t| < 1/JACOBI_LEN; the rest of the leg is
    smooth.
    """
    if h == 0:
        return 0j
    if abs(h) > JACOBI_LEN:
        cut = h * (JACOBI_LEN / abs(h))
        return _jacobi_piece(start, cut, a, b, tol) + _smooth_leg(start + cut, start + h, a, b, tol)
    return _jacobi_piece(start, h, a, b, tol)


def _jacobi_piece(start: int, h: complex, a: float, b: float, tol: float) -> complex:
    c = a if start == 0 else b
    prev = None
    # high-order Jacobi nodes lose accuracy for strongly singular weights,
    # so convergence is judged over a short ladder of moderate orders
    for npts in (10, 16, 22, 28):
        x, wts = _jacobi(npts, c - 1.0)
        t = (1.0 + x) / 2.0
        w = start + h * t
        if start == 0:
            y = np.abs(w.imag)
            arg1 = np.arctan2(y, w.real - 1.0) - np.pi
            smooth = np.exp((b - 1.0) * (np.log(np.abs(1.0 - w)) + 1j * arg1))
            arg_h = math.atan2(abs(h.imag), h.real)
            scale = cmath.exp(a * complex(math.log(abs(h)), arg_h))
        else:
            y = np.abs(w.imag)
            arg0 = np.arctan2(y, w.real)
            smooth = np.exp((a - 1.0) * (np.log(np.abs(w)) + 1j * arg0))
            # (1 - w) = -h t with arg(-h) in [-pi, 0]
            arg_mh = math.atan2(abs(h.imag), h.real) - math.pi
            if h.imag == 0.0 and h.real < 0.0:
                arg_mh = 0.0
            scale = h * cmath.exp((b - 1.0) * complex(math.log(abs(h)), arg_mh))
        val = scale * 2.0 ** (-c) * complex(np.dot(wts, smooth))
        if prev is not None:
            diff = abs(val - prev)
            # the sum itself is only good to a few ulps of its magnitude
            floor = 16 * np.finfo(float).eps * abs(scale) * 2.0 ** (-c) * float(np.dot(np.abs(wts), np.abs(smooth)))
            if diff <= max(tol * (1.0 + abs(val)) * 0.1, floor):
                return val
        prev = val
    raise QuadratureError("Gauss-Jacobi leg did not converge", diff)


def _smooth_leg(p: complex, q: complex, a: float, b: float, tol: float, max_depth: int = 40) -> complex:
    """Adaptive composite Gauss-Legendre on a segment that avoids both prevertices."""
    x, wts = _legendre(20)
    worst = [0.0]

    def panel(u: complex, v: complex) -> complex:
        mid, half = (u + v) / 2.0, (v - u) / 2.0
        return half * complex(np.dot(wts, _integrand(mid + half * x, a, b)))

    def rec(u, v, whole, depth, budget):
        m = (u + v) / 2.0
        left, right = panel(u, m), panel(m, v)
        err = abs(left + right - whole)
        if err <= budget or depth >= max_depth:
            if err > budget:
                worst[0] = max(worst[0], err)
            return left + right
        return rec(u, m, left, depth + 1, budget / 2.0) + rec(m, v, right, depth + 1, budget / 2.0)

    budget = tol * 0.1 * (1.0 + abs(q - p))
    out = rec(p, q, panel(p, q), 0, budget)
    if worst[0] > 0.0:
        raise QuadratureError("adaptive Gauss-Legendre hit its depth limit", worst[0])
    return out


@lru_cache(maxsize=None)
def _beta_quadrature(n0: int, n1: int, n: int, tol: float) -> float:
    a, b = n0 / n, n1 / n
    left = _prevertex_leg(0, 0.5 + 0j, a, b, tol)
    right = _prevertex_leg(1, -0.5 + 0j, a, b, tol)
    return (left - right).real


def sc_integral(xi: complex, sig: TriangleSignature, tol: float = DEFAULT_TOL) -> complex:
    """F_T(xi) for xi in the closed upper half plane.

    Contour: 0 -> i max(1,|xi|) -> xi.  When xi is within NEAR of a prevertex
    the last leg starts at that prevertex instead (path independence).
    """
    tol = _check_tol(tol)
    xi = complex(xi)
    if xi.imag < 0.0:
        raise ValueError("sc_integral expects Im(xi) >= 0; use F_Q below the real axis")
    if abs(xi) < BRANCH_EPS:
        return 0j
    a, b = _exponents(sig)
    if abs(xi) <= NEAR:
        return _prevertex_leg(0, xi, a, b, tol)
    C = _beta_quadrature(sig.n0, sig.n1, sig.n, tol)
    if abs(xi - 1.0) < BRANCH_EPS:
        return complex(C, 0.0)
    if abs(xi - 1.0) <= NEAR:
        return C + _prevertex_leg(1, xi - 1.0, a, b, tol)
    top = 1j * max(1.0, abs(xi))
    out = _prevertex_leg(0, NEAR * 1j, a, b, tol)
    out += _smooth_leg(NEAR * 1j, top, a, b, tol)
    out += _smooth_leg(top, xi, a, b, tol)
    return out


def F_T(xi: complex, sig: TriangleSignature, tol: float = DEFAULT_TOL) -> complex:
    return sc_integral(xi, sig, tol)


def F_Q(xi: complex, sig: TriangleSignature, tol: float = DEFAULT_TOL) -> complex:
    """Schwarz reflection extension of F_T to C minus {0, 1}."""
    xi = complex(xi)
    if abs(xi) < BRANCH_EPS or abs(xi - 1.0) < BRANCH_EPS:
        raise BranchPointError(f"xi = {xi} is a branch point (0 or 1)")
    if xi.imag < 0.0:
        return sc_integral(xi.conjugate(), sig, tol).conjugate()
    return sc_integral(xi, sig, tol)


def C_value(sig: TriangleSignature, tol: float = DEFAULT_TOL) -> float:
    return _beta_quadrature(sig.n0, sig.n1, sig.n, _check_tol(tol))


def D_closed_form(sig: TriangleSignature, C: float) -> complex:
    n = sig.n
    ratio = math.sin(math.pi * sig.n1 / n) / math.sin(math.pi * sig.n_inf / n)
    return cmath.exp(1j * math.pi * sig.n0 / n) * ratio * C


@dataclass(frozen=True)
class TriangleImage:
    O: complex
    C: complex
    D: complex
    angles: tuple[Fraction, Fraction, Fraction]  # multiples of pi at O, C, D
    D_probe_error: float | None = None

    @property
    def vertices(self) -> tuple[complex, complex, complex]:
        return (self.O, self.C, self.D)


def interior_angles(A: complex, B: complex, Cc: complex) -> tuple[float, float, float]:
    """Numeric interior angles of the triangle ABC."""

    def ang(p, q, r):
        u, v = q - p, r - p
        return abs(cmath.phase(v / u))

    return ang(A, B, Cc), ang(B, Cc, A), ang(Cc, A, B)


def triangle_image(sig: TriangleSignature, tol: float = DEFAULT_TOL, probe: bool = False) -> TriangleImage:
    C = C_value(sig, tol)
    D = D_closed_form(sig, C)
    n = sig.n
    probe_err = None
    if probe:
        # F_T(R) - D decays like R^(-n_inf/n); report the gap on a large real xi
        big = 1e6
        probe_err = abs(sc_integral(complex(-big, 0.0), sig, max(tol, 1e-10)) - D) / abs(D)
    return TriangleImage(0j, complex(C, 0.0), D, (Fraction(sig.n0, n), Fraction(sig.n1, n), Fraction(sig.n_inf, n)), probe_err)


def developing_map(p: SurfacePoint, sig: TriangleSignature, tol: float = DEFAULT_TOL) -> complex:
    """delta_K*(xi, eta) = R^k F_Q(xi) where eta lies on sheet k."""
    k = sheet_of(p.xi, p.eta, sig)
    return omega(k, sig.n) * F_Q(p.xi, sig, tol)


def straightening_residual(
    p: SurfacePoint,
    sig: TriangleSignature,
    h: float = 1e-5,
    tol: float = 1e-13,
    scheme: str = "central",
) -> float:
    """Finite-difference check that the developing map pushes X to the unit field.

    Moves xi along the dxi-component eta of X.  On sheet k the pushforward is
    e^(4 pi i k/n) d/dz, so that factor is divided out; on the fundamental
    sheet the quantity is |d delta/d xi * eta - 1| itself.
    """
    if h <= 1e-300 or not math.isfinite(h):
        raise ValueError("step underflow")
    xi, eta = complex(p.xi), complex(p.eta)
    if min(abs(xi), abs(xi - 1.0)) < 10 * h * max(1.0, abs(eta)):
        raise ValueError("point too close to a branch point for this step")
    k = sheet_of(xi, eta, sig)
    n = sig.n
    rot = omega(k, n)
    F = lambda z: F_Q(z, sig, tol)  # noqa: E731
    if scheme == "forward":
        diff = (F(xi + h * eta) - F(xi)) / h
    elif scheme == "central":
        diff = (F(xi + h * eta) - F(xi - h * eta)) / (2.0 * h)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    # delta = rot * F_Q on sheet k; eta = rot * eta_D, so rot*rot is the expected factor
    return abs(rot * diff / (rot * rot) - 1.0)


def measured_triangle(sig: TriangleSignature, tol: float = DEFAULT_TOL) -> tuple[complex, complex, complex]:
    """Image triangle located from F_T values alone.

    F_T sends (-inf, 0) into the side OD and (1, inf) into the side CD, so D
    is the intersection of the line through O and F_T(-1) with the line
    through C and F_T(2).
    """
    C = sc_integral(1.0, sig, tol)
    p = sc_integral(-1.0 + 0j, sig, tol)
    q = sc_integral(2.0 + 0j, sig, tol)
    d1, d2 = p, q - C
    den = d1.real * d2.imag - d1.imag * d2.real
    if abs(den) < 1e-14 * abs(d1) * abs(d2):
        raise QuadratureError("image sides are parallel", abs(den))
    s = (C.real * d2.imag - C.imag * d2.real) / den
    return 0j, complex(C), s * d1
