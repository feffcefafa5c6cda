"""The n-th root branches, sheets of the covering, the vector field X and the flat metric."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .signature import TriangleSignature

BRANCH_EPS = 1e-13
TWO_PI = 2.0 * math.pi


class BranchPointError(ValueError):
    pass


class SingularPointError(ValueError):
    pass


def _check_regular(xi: complex) -> complex:
    xi = complex(xi)
    if abs(xi) < BRANCH_EPS or abs(xi - 1.0) < BRANCH_EPS:
        raise BranchPointError(f"xi = {xi} is a branch point (0 or 1)")
    return xi


def _angle_0_2pi(z: complex) -> float:
    a = math.atan2(z.imag, z.real)
    if a < 0.0:
        a += TWO_PI
    # atan2(-0.0, x>0) gives -0.0, which must map to 0 rather than 2*pi
    return 0.0 if a >= TWO_PI or a == 0.0 else a


@dataclass(frozen=True)
class BranchPoint:
    xi: complex
    r0: float
    r1: float
    theta0: float
    theta1: float


def polar_data(xi: complex) -> BranchPoint:
    xi = _check_regular(xi)
    one_minus = 1.0 - xi
    if xi.imag == 0.0:
        xi = complex(xi.real, 0.0)
        one_minus = complex(one_minus.real, 0.0)
    return BranchPoint(xi, abs(xi), abs(one_minus), _angle_0_2pi(xi), _angle_0_2pi(one_minus))


def principal_root(xi: complex, sig: TriangleSignature) -> complex:
    """(xi^(n-n0) (1-xi)^(n-n1))^(1/n) with both angles taken in [0, 2pi)."""
    b = polar_data(xi)
    n = sig.n
    p0, p1 = n - sig.n0, n - sig.n1
    # work with logs so large |xi| does not overflow
    log_mod = (p0 * math.log(b.r0) + p1 * math.log(b.r1)) / n
    arg = (p0 * b.theta0 + p1 * b.theta1) / n
    return cmath.exp(complex(log_mod, arg))


def _uhp_args(xi: complex) -> tuple[float, float]:
    """arg xi in [0, pi] and arg(1 - xi) in [-pi, 0] for xi in the closed upper half plane."""
    a0 = math.atan2(abs(xi.imag), xi.real)
    a1 = math.atan2(abs(xi.imag), xi.real - 1.0) - math.pi
    return a0, a1


def domain_root(xi: complex, sig: TriangleSignature) -> complex:
    """Root on the fundamental sheet: the branch for which dF_Q = dxi / eta.

    Holomorphic off the real cuts (-inf, 0] and [1, inf), positive on (0, 1),
    and symmetric under complex conjugation.
    """
    xi = _check_regular(xi)
    n = sig.n
    lower = xi.imag < 0.0
    w = xi.conjugate() if lower else xi
    a0, a1 = _uhp_args(w)
    e0 = (n - sig.n0) / n
    e1 = (n - sig.n1) / n
    val = cmath.exp(complex(e0 * math.log(abs(w)) + e1 * math.log(abs(1.0 - w)), e0 * a0 + e1 * a1))
    return val.conjugate() if lower else val


@dataclass(frozen=True)
class SurfacePoint:
    xi: complex
    eta: complex
    sheet: int

    def rotate(self, sig: TriangleSignature, k: int = 1) -> "SurfacePoint":
        """Deck transformation (xi, eta) -> (xi, e^(2 pi i k/n) eta)."""
        n = sig.n
        return SurfacePoint(self.xi, self.eta * cmath.exp(2j * math.pi * k / n), (self.sheet + k) % n)


def omega(k: int, n: int) -> complex:
    return cmath.exp(2j * math.pi * (k % n) / n)


def curve_residual(xi: complex, eta: complex, sig: TriangleSignature) -> float:
    """|eta^n - xi^(n-n0) (1-xi)^(n-n1)| relative to the size of the right side.

    The right side grows like |xi|^(2n-n0-n1), so a 1 + |xi|^n scale would
    overstate the error for large xi.
    """
    n = sig.n
    lhs = eta**n
    rhs = xi ** (n - sig.n0) * (1 - xi) ** (n - sig.n1)
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def surface_point(xi: complex, sig: TriangleSignature, sheet: int = 0) -> SurfacePoint:
    xi = _check_regular(xi)
    k = sheet % sig.n
    return SurfacePoint(xi, omega(k, sig.n) * domain_root(xi, sig), k)


def fiber(xi: complex, sig: TriangleSignature) -> list[SurfacePoint]:
    """The n points over xi; sheet k carries eta = e^(2 pi i k/n) times the fundamental root."""
    xi = _check_regular(xi)
    base = domain_root(xi, sig)
    n = sig.n
    return [SurfacePoint(xi, omega(k, n) * base, k) for k in range(n)]


def sheet_of(xi: complex, eta: complex, sig: TriangleSignature) -> int:
    """Index k with eta = e^(2 pi i k/n) * domain_root(xi)."""
    ratio = eta / domain_root(xi, sig)
    k = round(cmath.phase(ratio) * sig.n / TWO_PI) % sig.n
    return k


def vector_field_X(p: SurfacePoint, sig: TriangleSignature) -> tuple[complex, complex]:
    xi, eta = complex(p.xi), complex(p.eta)
    if abs(eta) < BRANCH_EPS:
        raise SingularPointError("X is only defined at regular points (eta != 0)")
    n, n0, n1 = sig.n, sig.n0, sig.n1
    c = (n - n0) / n
    lin = 1.0 - ((2 * n - n0 - n1) / (n - n0)) * xi
    d_eta = c * xi ** (n - n0 - 1) * (1 - xi) ** (n - n1 - 1) * lin / eta ** (n - 2)
    return eta, d_eta


def dg(p: SurfacePoint, sig: TriangleSignature) -> tuple[complex, complex]:
    """Coefficients of dg = g_xi dxi + g_eta deta for g = eta^n - xi^(n-n0)(1-xi)^(n-n1)."""
    xi, eta = complex(p.xi), complex(p.eta)
    n, n0, n1 = sig.n, sig.n0, sig.n1
    lin = 1.0 - ((2 * n - n0 - n1) / (n - n0)) * xi
    g_xi = -(n - n0) * xi ** (n - n0 - 1) * (1 - xi) ** (n - n1 - 1) * lin
    g_eta = n * eta ** (n - 1)
    return g_xi, g_eta


def metric_gamma_norm(p: SurfacePoint, v: tuple[complex, complex]) -> float:
    eta = complex(p.eta)
    if abs(eta) < BRANCH_EPS:
        raise SingularPointError("the metric is only defined at regular points")
    return abs(complex(v[0])) ** 2 / abs(eta) ** 2
