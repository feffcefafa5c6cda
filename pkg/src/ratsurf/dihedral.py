"""Symbolic dihedral group R^p U^l, the reflections S^(j)_k and the affine group G x| T.

R is rotation by 2 pi/n, U is complex conjugation, and RU = UR^-1.  Translations
are integer vectors over the 2n generators 2 u_j; G permutes generators by
index, so every product here is exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .signature import TriangleSignature, branch_index


@dataclass(frozen=True)
class GroupElement:
    p: int
    ell: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "p", self.p % self.n)
        object.__setattr__(self, "ell", self.ell % 2)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        if self.ell:
            return self
        return GroupElement(-self.p, 0, self.n)

    def __pow__(self, k: int) -> "GroupElement":
        out = identity(self.n)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def is_identity(self) -> bool:
        return self.p == 0 and self.ell == 0

    def act(self, z: complex) -> complex:
        if self.ell:
            z = complex(z).conjugate()
        return cmath.exp(2j * math.pi * self.p / self.n) * z

    def vertex_index(self, m: int) -> int:
        """Image of polygon vertex V_m (vertex m sits at angle m pi/n)."""
        if self.ell:
            m = -m
        return (m + 2 * self.p) % (2 * self.n)

    def edge_index(self, e: int) -> int:
        """Image of polygon edge e = (V_e, V_e+1), as an edge index."""
        a, b = self.vertex_index(e), self.vertex_index(e + 1)
        return a if (b - a) % (2 * self.n) == 1 else b

    def u_index(self, k: int) -> int:
        """Image of translation generator u_k under the linear part."""
        if self.ell:
            k = 1 - k
        return (k + 2 * self.p) % (2 * self.n)

    def __repr__(self):
        if self.is_identity:
            return "e"
        r = "" if self.p == 0 else ("R" if self.p == 1 else f"R^{self.p}")
        return r + ("U" if self.ell else "")


def identity(n: int) -> GroupElement:
    return GroupElement(0, 0, n)


def rotation(n: int, p: int = 1) -> GroupElement:
    return GroupElement(p, 0, n)


def conjugation(n: int) -> GroupElement:
    return GroupElement(0, 1, n)


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.n != b.n:
        raise ValueError("elements of different dihedral groups")
    # U R^p = R^-p U
    sign = -1 if a.ell else 1
    return GroupElement(a.p + sign * b.p, a.ell ^ b.ell, a.n)


def elements(n: int) -> list[GroupElement]:
    return [GroupElement(p, ell, n) for ell in (0, 1) for p in range(n)]


def reflection_S(j, k: int, sig: TriangleSignature) -> GroupElement:
    """S^(j)_k = R^k (R^n_j U) R^-k = R^(2k + n_j) U, the reflection in the ray R^k l^j."""
    n = sig.n
    return GroupElement(2 * k + sig.part(j), 1, n)


def conjugate_index(j, k: int, by: GroupElement, sig: TriangleSignature) -> int:
    """r with by S^(j)_k by^-1 = S^(j)_r.

    R shifts k by one.  U sends R^(2k+n_j) U to R^-(2k+n_j) U, which is
    S^(j)_r for r = -(k + n_j).  For even n the answer is only defined up to
    n/2, since S^(j)_r = S^(j)_(r+n/2); the representative below is returned.
    """
    n, nj = sig.n, sig.part(j)
    r = k
    if by.ell:
        r = -(r + nj)
    return (r + by.p) % n


def conjugate_index_literal(j, k: int, by: GroupElement, sig: TriangleSignature) -> int:
    """The index rule with -(k + 2 n_j) for U, kept to report where it fails."""
    n, nj = sig.n, sig.part(j)
    r = k
    if by.ell:
        r = -(r + 2 * nj)
    return (r + by.p) % n


def generated_subgroup(gens, n: int) -> frozenset[GroupElement]:
    seen = {identity(n)}
    frontier = [identity(n)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return frozenset(seen)


def G_j(sig: TriangleSignature, j) -> frozenset[GroupElement]:
    return generated_subgroup([reflection_S(j, k, sig) for k in range(sig.n)], sig.n)


def u_vector(index: int, sig: TriangleSignature, C_magnitude: float = 1.0) -> complex:
    n, n1 = sig.n, sig.n1
    m = index % (2 * n)
    amp = C_magnitude * math.sin(math.pi * n1 / n)
    if m % 2 == 0:
        j = m // 2
        phase = 0.5 - n1 / n + 2 * j / n
    else:
        phase = -0.5 + n1 / n - 1 / n + m / n
    return amp * cmath.exp(1j * math.pi * phase)


def _coeffs(t, n: int) -> tuple[int, ...]:
    t = tuple(int(c) for c in t)
    if len(t) != 2 * n:
        raise ValueError(f"translation vector needs {2 * n} coefficients, got {len(t)}")
    return t


@dataclass(frozen=True)
class AffineElement:
    """z -> g(z) + sum_j t[j] * 2 u_j."""

    g: GroupElement
    t: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "t", _coeffs(self.t, self.g.n))

    @property
    def n(self) -> int:
        return self.g.n

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        return affine_mul(self, other)

    def inverse(self) -> "AffineElement":
        ginv = self.g.inverse()
        moved = act_on_translation(ginv, self.t)
        return AffineElement(ginv, tuple(-c for c in moved))

    def __repr__(self):
        terms = [f"{c}*2u{j}" for j, c in enumerate(self.t) if c]
        return f"({self.g!r}, {' + '.join(terms) or '0'})"


def affine_identity(n: int) -> AffineElement:
    return AffineElement(identity(n), (0,) * (2 * n))


def tau(j: int, n: int) -> AffineElement:
    """Translation by 2 u_j."""
    t = [0] * (2 * n)
    t[j % (2 * n)] = 1
    return AffineElement(identity(n), tuple(t))


def linear(g: GroupElement) -> AffineElement:
    return AffineElement(g, (0,) * (2 * g.n))


def act_on_translation(g: GroupElement, t) -> tuple[int, ...]:
    out = [0] * (2 * g.n)
    for k, c in enumerate(t):
        if c:
            out[g.u_index(k)] += c
    return tuple(out)


def affine_mul(a: AffineElement, b: AffineElement) -> AffineElement:
    if a.n != b.n:
        raise ValueError("elements of different affine groups")
    moved = act_on_translation(a.g, b.t)
    return AffineElement(a.g * b.g, tuple(x + y for x, y in zip(moved, a.t)))


def translation_value(t, sig: TriangleSignature, C_magnitude: float = 1.0) -> complex:
    return sum((2 * c * u_vector(k, sig, C_magnitude) for k, c in enumerate(t) if c), 0j)


def apply(a: AffineElement, z: complex, sig: TriangleSignature, C_magnitude: float = 1.0) -> complex:
    return a.g.act(z) + translation_value(a.t, sig, C_magnitude)
