"""Triangle signatures and the genus of the associated branched cover."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

BRANCHES = ("0", "1", "inf")


class SignatureError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TriangleSignature:
    n0: int
    n1: int
    n_inf: int

    def __post_init__(self):
        for name in ("n0", "n1", "n_inf"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise SignatureError(f"{name} must be an integer, got {v!r}")
            if v < 1:
                raise SignatureError(f"{name} must be >= 1, got {v}")
        if not (self.n0 <= self.n1 <= self.n_inf):
            raise SignatureError(
                f"signature ({self.n0},{self.n1},{self.n_inf}) violates "
                "the normalization n0 <= n1 <= n_inf"
            )

    @property
    def n(self) -> int:
        return self.n0 + self.n1 + self.n_inf

    def part(self, j) -> int:
        """n_j for branch label j in {0, 1, 'inf'} (also accepts '0', '1', 2)."""
        return (self.n0, self.n1, self.n_inf)[branch_index(j)]

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n0, self.n1, self.n_inf)

    def __str__(self):
        return f"({self.n0},{self.n1},{self.n_inf};{self.n})"


def branch_index(j) -> int:
    if j in (0, "0"):
        return 0
    if j in (1, "1"):
        return 1
    if j in (2, "inf", "oo", "infinity"):
        return 2
    raise SignatureError(f"unknown branch label {j!r}; use 0, 1 or 'inf'")


def make_signature(n0: int, n1: int, n_inf: int) -> TriangleSignature:
    return TriangleSignature(n0, n1, n_inf)


def parse_signature(text: str) -> TriangleSignature:
    parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != 3:
        raise SignatureError(f"expected 'n0,n1,ninf', got {text!r}")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise SignatureError(f"signature entries must be integers, got {text!r}") from None
    return TriangleSignature(*vals)


@dataclass(frozen=True)
class CoverProfile:
    d0: int
    d1: int
    d_inf: int
    degree0: int
    degree1: int
    degree_inf: int
    ramification_r: int
    genus: int

    @property
    def d(self) -> tuple[int, int, int]:
        return (self.d0, self.d1, self.d_inf)

    @property
    def degrees(self) -> tuple[int, int, int]:
        return (self.degree0, self.degree1, self.degree_inf)


def cover_profile(sig: TriangleSignature) -> CoverProfile:
    n = sig.n
    d = [gcd(nj, n) for nj in sig.as_tuple()]
    twice_g = n + 2 - sum(d)
    # integrality: sum(d) has the parity of n, see the test suite
    assert twice_g % 2 == 0 and twice_g >= 0, (sig, d)
    return CoverProfile(
        d0=d[0],
        d1=d[1],
        d_inf=d[2],
        degree0=n // d[0],
        degree1=n // d[1],
        degree_inf=n // d[2],
        ramification_r=sum(n - dj for dj in d),
        genus=twice_g // 2,
    )


def genus(sig: TriangleSignature) -> int:
    return cover_profile(sig).genus


def signatures(n: int):
    """All normalized signatures with n0 + n1 + n_inf = n, ordered by (n0, n1)."""
    for n0 in range(1, n // 3 + 1):
        for n1 in range(n0, (n - n0) // 2 + 1):
            yield TriangleSignature(n0, n1, n - n0 - n1)


@dataclass(frozen=True)
class TableRow:
    signature: TriangleSignature
    profile: CoverProfile

    @property
    def genus(self) -> int:
        return self.profile.genus

    @property
    def primitive(self) -> bool:
        """True when gcd(n0, n1, n_inf) = 1, i.e. the triangle is not a rescaled smaller one."""
        s = self.signature
        return gcd(gcd(s.n0, s.n1), s.n_inf) == 1


def genus_table(n_max: int, max_genus: int | None = None) -> list[TableRow]:
    if n_max < 3:
        raise SignatureError(f"n_max must be >= 3, got {n_max}")
    rows = []
    for n in range(3, n_max + 1):
        for sig in signatures(n):
            prof = cover_profile(sig)
            if max_genus is None or prof.genus <= max_genus:
                rows.append(TableRow(sig, prof))
    rows.sort(key=lambda r: (r.genus, r.signature.n, r.signature.n0, r.signature.n1))
    return rows


@dataclass(frozen=True)
class SingularSet:
    affine_points: tuple[tuple[int, int, int], ...]
    point_at_infinity_singular: bool

    @property
    def points(self) -> tuple[tuple[int, int, int], ...]:
        if self.point_at_infinity_singular:
            return self.affine_points + ((0, 1, 0),)
        return self.affine_points


def singular_points(sig: TriangleSignature) -> SingularSet:
    # [xi : eta : zeta]; the affine branch points (0,0) and (1,0)
    return SingularSet(((0, 0, 1), (1, 0, 1)), sig.n_inf > 1)
