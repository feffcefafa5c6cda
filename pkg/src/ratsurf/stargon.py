"""The regular stellated n-gon K*, its edge identifications and triangulation counts.

Vertex V_m sits at angle m pi/n: even indices are the outer vertices R^k C at
radius |C|, odd indices the inner vertices at radius |D'|.  Edge e joins V_e
and V_(e+1).  All identifications are computed on indices; coordinates are
only used for cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

from .dihedral import GroupElement, G_j, elements, generated_subgroup, reflection_S
from .signature import BRANCHES, TriangleSignature, branch_index, cover_profile


class ConstructionError(ValueError):
    pass


class CombinatoricsError(RuntimeError):
    pass


@dataclass(frozen=True)
class StellatedPolygon:
    n: int
    outer_radius: float
    inner_radius: float

    @cached_property
    def vertices(self) -> tuple[complex, ...]:
        out = []
        for m in range(2 * self.n):
            r = self.outer_radius if m % 2 == 0 else self.inner_radius
            out.append(r * cmath.exp(1j * math.pi * m / self.n))
        return tuple(out)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((m, (m + 1) % (2 * self.n)) for m in range(2 * self.n))

    def edge_points(self, e: int) -> tuple[complex, complex]:
        a, b = self.edges[e % (2 * self.n)]
        return self.vertices[a], self.vertices[b]

    def inward_normal(self, e: int) -> complex:
        p, q = self.edge_points(e)
        d = (q - p) / abs(q - p)
        # vertices run counterclockwise, so the interior is on the left
        return 1j * d

    def contains(self, z: complex, tol: float = 1e-9) -> bool:
        """Closed star membership (within tol of the boundary counts as inside)."""
        z = complex(z)
        for e in range(2 * self.n):
            p, q = self.edge_points(e)
            if _seg_dist(z, p, q) <= tol:
                return True
        return _winding(z, self.vertices) != 0


def _seg_dist(z: complex, p: complex, q: complex) -> float:
    d = q - p
    t = ((z - p) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (p + t * d))


def _winding(z: complex, poly) -> int:
    w = 0.0
    m = len(poly)
    for i in range(m):
        a, b = poly[i] - z, poly[(i + 1) % m] - z
        w += cmath.phase(b / a)
    return round(w / (2 * math.pi))


def inner_radius(sig: TriangleSignature, C_magnitude: float) -> float:
    n, n1 = sig.n, sig.n1
    if n1 + 1 >= n:
        raise ConstructionError(f"{sig}: n1 + 1 = n, the triangle T' collapses")
    if C_magnitude <= 0:
        raise ConstructionError("|C| must be positive")
    # sin(pi n1/n) < sin(pi (n1+1)/n) exactly when 2 n1 + 1 < n
    if 2 * n1 + 1 >= n:
        raise ConstructionError(f"{sig}: |D'| >= |C| (needs 2*n1 + 1 < n), the star is degenerate")
    return C_magnitude * math.sin(math.pi * n1 / n) / math.sin(math.pi * (n1 + 1) / n)


def build_polygon(sig: TriangleSignature, C_magnitude: float = 1.0) -> StellatedPolygon:
    return StellatedPolygon(sig.n, float(C_magnitude), inner_radius(sig, C_magnitude))


def adjacent(e: int, f: int, n: int) -> bool:
    m = 2 * n
    return len({e % m, (e + 1) % m} & {f % m, (f + 1) % m}) > 0


@dataclass(frozen=True)
class EdgePair:
    e: int
    e_prime: int
    witness: GroupElement
    j: int  # branch index 0, 1, 2
    m: int  # S^(j)_m

    @property
    def key(self) -> frozenset[int]:
        return frozenset((self.e, self.e_prime))

    def __repr__(self):
        return f"[E{self.e}, E{self.e_prime}] via S^({BRANCHES[self.j]})_{self.m}"


def all_equivalent_pairs(sig: TriangleSignature, j) -> list[frozenset[int]]:
    """Every unordered nonadjacent pair {E, S^(j)_m(E)} over all m and all edges."""
    n = sig.n
    found = set()
    for m in range(n):
        s = reflection_S(j, m, sig)
        for e in range(2 * n):
            f = s.edge_index(e)
            if f != e and not adjacent(e, f, n):
                found.add(frozenset((e, f)))
    return sorted(found, key=lambda p: tuple(sorted(p)))


def edge_pairs(sig: TriangleSignature, j) -> list[EdgePair]:
    """The matching E^j: one pair per reflection S^(j)_m.

    The ray R^m l^j ends at vertex V_v, v = 2m + n_j.  Its pair consists of the
    two edges lying n1 steps from V_v on either side, E_(v-1-n1) and E_(v+n1),
    which S^(j)_m swaps.  Every edge occurs in exactly one pair.
    """
    n = sig.n
    ji = branch_index(j)
    out = []
    seen = set()
    for m in range(n):
        s = reflection_S(ji, m, sig)
        v = (2 * m + sig.part(ji)) % (2 * n)
        e = (v - 1 - sig.n1) % (2 * n)
        f = s.edge_index(e)
        if f != (v + sig.n1) % (2 * n) or adjacent(e, f, n):
            raise CombinatoricsError(f"{sig}, j={j}, m={m}: bad pair ({e}, {f})")
        key = frozenset((e, f))
        if key in seen:
            continue
        seen.add(key)
        out.append(EdgePair(e, f, s, ji, m))
    return out


def act_on_pair(g: GroupElement, pair: frozenset[int]) -> frozenset[int]:
    return frozenset(g.edge_index(e) for e in pair)


def orbit_decomposition(sig: TriangleSignature, j) -> list[frozenset[frozenset[int]]]:
    """Partition of E^j into orbits of G^j, by closing under the generators S^(j)_k."""
    n = sig.n
    pairs = [p.key for p in edge_pairs(sig, j)]
    pair_set = set(pairs)
    gens = [reflection_S(j, k, sig) for k in range(n)]
    remaining = list(pairs)
    orbits = []
    assigned = set()
    for start in remaining:
        if start in assigned:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for q in frontier:
                for s in gens:
                    r = act_on_pair(s, q)
                    if r not in pair_set:
                        raise CombinatoricsError(f"{sig}: G^{j} does not preserve E^{j}")
                    if r not in orbit:
                        orbit.add(r)
                        nxt.append(r)
            frontier = nxt
        assigned |= orbit
        orbits.append(frozenset(orbit))
    return orbits


@dataclass(frozen=True)
class VertexClass:
    branch: int  # 0, 1, 2 for the triangle vertex O, C, D
    members: frozenset[GroupElement]  # copies g T meeting at this point
    polygon_vertices: frozenset[int] | None  # vertex indices of cl(K*), when the point is one


def _side_reflections(sig: TriangleSignature) -> dict[str, GroupElement]:
    n = sig.n
    return {
        "OC": GroupElement(0, 1, n),  # real axis
        "OD": GroupElement(sig.n0, 1, n),  # ray at angle n0 pi/n
        "CD": GroupElement(-sig.n1, 1, n),  # line through C at angle pi - n1 pi/n
    }


def _polygon_vertex(g: GroupElement, branch: int, sig: TriangleSignature) -> int | None:
    n = sig.n
    if branch == 1:
        return (2 * g.p) % (2 * n)
    if branch == 2 and sig.n0 == 1:
        # D = D' at angle pi/n; its conjugate sits at -pi/n
        return (2 * g.p + (-1 if g.ell else 1)) % (2 * n)
    return None


def vertex_orbits(sig: TriangleSignature, j=None) -> list[VertexClass]:
    """Vertex classes of the surface glued from the 2n copies g T, g in G.

    Copy g T and copy g s T share the side fixed by the side reflection s, so
    the copies around the triangle vertex at branch j form a left coset of
    the dihedral subgroup generated by the two side reflections there.
    """
    n = sig.n
    sides = _side_reflections(sig)
    at_vertex = {0: ("OC", "OD"), 1: ("OC", "CD"), 2: ("OD", "CD")}
    branches = [branch_index(j)] if j is not None else [0, 1, 2]
    out = []
    for b in branches:
        sub = generated_subgroup([sides[s] for s in at_vertex[b]], n)
        seen = set()
        for g in elements(n):
            if g in seen:
                continue
            coset = frozenset(g * h for h in sub)
            seen |= coset
            pv = None
            if b != 0:
                idx = {_polygon_vertex(x, b, sig) for x in coset}
                pv = None if None in idx else frozenset(idx)
            out.append(VertexClass(b, coset, pv))
    return out


def sheet_orbits(sig: TriangleSignature, j) -> list[frozenset[int]]:
    """Cycles of the local monodromy k -> k + n_j on the n sheets."""
    n, nj = sig.n, sig.part(j)
    seen, out = set(), []
    for k in range(n):
        if k in seen:
            continue
        cyc, x = set(), k
        while x not in cyc:
            cyc.add(x)
            x = (x + nj) % n
        seen |= cyc
        out.append(frozenset(cyc))
    return out


@dataclass(frozen=True)
class TriangulationCount:
    vertices: int
    edges: int
    faces: int
    euler: int
    genus: int


def triangulation_counts(sig: TriangleSignature) -> TriangulationCount:
    n = sig.n
    classes = vertex_orbits(sig)
    V = len(classes)
    prof = cover_profile(sig)
    if V != sum(prof.d):
        raise CombinatoricsError(f"{sig}: {V} vertex classes but d0+d1+d_inf = {sum(prof.d)}")
    # each side of T is shared by the copies {g, g s}: n edges per side
    sides = _side_reflections(sig)
    E = 0
    for s in sides.values():
        E += len({frozenset((g, g * s)) for g in elements(n)})
    F = 2 * n
    chi = V - E + F
    if (2 - chi) % 2:
        raise CombinatoricsError(f"{sig}: odd Euler characteristic {chi}")
    return TriangulationCount(V, E, F, chi, (2 - chi) // 2)


@dataclass(frozen=True)
class ClosedFormComparison:
    j: int
    d_j: int
    expected_size: int
    orbit_sizes: tuple[int, ...]
    group_order: int
    covers: bool
    disjoint: bool

    @property
    def count_matches(self) -> bool:
        return len(self.orbit_sizes) == self.d_j

    @property
    def sizes_match(self) -> bool:
        return all(s == self.expected_size for s in self.orbit_sizes)

    @property
    def matches(self) -> bool:
        return self.count_matches and self.sizes_match

    @property
    def consistent(self) -> bool:
        return self.covers and self.disjoint


def closed_form_comparison(sig: TriangleSignature, j) -> ClosedFormComparison:
    """Brute-force G^j orbits on E^j against d_j orbits of size n/d_j."""
    ji = branch_index(j)
    n = sig.n
    d = cover_profile(sig).d[ji]
    orbits = orbit_decomposition(sig, ji)
    pairs = {p.key for p in edge_pairs(sig, ji)}
    union = set().union(*orbits) if orbits else set()
    disjoint = sum(len(o) for o in orbits) == len(union)
    return ClosedFormComparison(
        j=ji,
        d_j=d,
        expected_size=n // d,
        orbit_sizes=tuple(sorted(len(o) for o in orbits)),
        group_order=len(G_j(sig, ji)),
        covers=union == pairs,
        disjoint=disjoint,
    )


HEXAGON_LABELS = {
    # pairs of the (1,1,4) hexagon named as in the classical picture;
    # D'_k = V_(2k+1), conj(D'_k) = V_(2k-1), C_k = V_(2k)
    "a": frozenset((11, 2)),
    "b": frozenset((1, 4)),
    "c": frozenset((5, 8)),
    "d": frozenset((3, 6)),
    "e": frozenset((7, 10)),
    "f": frozenset((9, 0)),
}


def label_pairs(orbits, labels=HEXAGON_LABELS) -> list[frozenset[str]]:
    inv = {v: k for k, v in labels.items()}
    return [frozenset(inv.get(p, "?") for p in o) for o in orbits]


@dataclass(frozen=True)
class ContainmentReport:
    signature: TriangleSignature
    samples: int
    outside: int
    worst_excess: float  # largest distance of an outside sample from cl(K*)

    @property
    def contained(self) -> bool:
        return self.outside == 0


def _boundary_distance(poly: StellatedPolygon, z: complex) -> float:
    return min(_seg_dist(z, *poly.edge_points(e)) for e in range(2 * poly.n))


def quadrilateral_containment(sig: TriangleSignature, samples: int = 400, tol: float = 1e-9) -> ContainmentReport:
    """Sample the quadrilateral Q = O, D, C, conj D on a barycentric grid and test it against cl(K*)."""
    from .scmap import C_value, D_closed_form

    C = C_value(sig)
    D = D_closed_form(sig, C)
    poly = build_polygon(sig, C)
    m = max(2, int(math.isqrt(samples)))
    pts = []
    for tri in ((0j, complex(C), D), (0j, complex(C), D.conjugate())):
        a, b, c = tri
        for i in range(m + 1):
            for k in range(m + 1 - i):
                s, t = i / m, k / m
                pts.append(a + s * (b - a) + t * (c - a))
    outside, worst = 0, 0.0
    for z in pts:
        if not poly.contains(z, tol=tol):
            outside += 1
            worst = max(worst, _boundary_distance(poly, z))
    return ContainmentReport(sig, len(pts), outside, worst)
