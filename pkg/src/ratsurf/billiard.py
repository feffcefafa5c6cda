"""Billiards in cl(K*) minus the center, extended motions and unfolding.

A trajectory with K bounces has K reflections and K + 1 segments; the last
segment stops at the next edge it would hit.  Unfolding replaces each
reflection by reflecting the polygon instead: copy k of cl(K*) is F_k(cl K*)
with F_(k+1) = F_k * rho_(e_k), where rho_e is the affine reflection in edge e.
The frames are exact elements of G x| T, so numeric placement never drifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dihedral import AffineElement, GroupElement, affine_identity, apply, translation_value
from .signature import TriangleSignature
from .stargon import StellatedPolygon

GUARD = 1e-13
UNIT_TOL = 1e-12
GRAZE_TOL = 1e-12

BUDGET = "budget exhausted"
VERTEX = "vertex hit"
CENTER = "center hit"


class BilliardError(ValueError):
    pass


class GrazingError(BilliardError):
    pass


class FoldError(BilliardError):
    pass


class UnfoldError(RuntimeError):
    pass


def _dot(a: complex, b: complex) -> float:
    return a.real * b.real + a.imag * b.imag


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


@dataclass(frozen=True)
class BilliardState:
    position: complex
    direction: complex
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", complex(self.position))
        object.__setattr__(self, "direction", complex(self.direction))
        if abs(abs(self.direction) - 1.0) > UNIT_TOL:
            raise BilliardError(f"direction must be a unit vector, |v| = {abs(self.direction)!r}")
        if self.time < 0:
            raise BilliardError("time must be nonnegative")

    def moved(self, g: GroupElement) -> "BilliardState":
        """Image under a linear isometry g of G."""
        d = g.act(self.direction)
        return BilliardState(g.act(self.position), d / abs(d), self.time)


@dataclass(frozen=True)
class Reflection:
    edge: int
    point: complex
    incoming: complex
    outgoing: complex
    param: float  # position along the edge, 0 at V_e and 1 at V_e+1


@dataclass
class Trajectory:
    segments: list[tuple[complex, complex]] = field(default_factory=list)
    reflections: list[Reflection] = field(default_factory=list)
    terminated_reason: str = BUDGET
    final_edge: int | None = None

    @property
    def points(self) -> list[complex]:
        if not self.segments:
            return []
        return [self.segments[0][0]] + [b for _, b in self.segments]

    @property
    def length(self) -> float:
        return sum(abs(b - a) for a, b in self.segments)

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(r.edge for r in self.reflections)

    @property
    def reflection_keys(self) -> frozenset[tuple[int, float]]:
        """Reflection points as (edge, parameter), rounded for exact set algebra."""
        return frozenset((r.edge, round(r.param, 9)) for r in self.reflections)

    def moved(self, g: GroupElement) -> "Trajectory":
        segs = [(g.act(a), g.act(b)) for a, b in self.segments]
        refl = []
        for r in self.reflections:
            e = g.edge_index(r.edge)
            # U reverses edge orientation
            t = 1.0 - r.param if g.ell else r.param
            refl.append(Reflection(e, g.act(r.point), g.act(r.incoming), g.act(r.outgoing), t))
        fe = None if self.final_edge is None else g.edge_index(self.final_edge)
        return Trajectory(segs, refl, self.terminated_reason, fe)


def reflect_direction(v: complex, edge: int, poly: StellatedPolygon) -> complex:
    v = complex(v)
    if abs(abs(v) - 1.0) > UNIT_TOL:
        raise BilliardError(f"direction must be a unit vector, |v| = {abs(v)!r}")
    nh = poly.inward_normal(edge)
    c = _dot(v, nh)
    if abs(c) < GRAZE_TOL:
        raise GrazingError(f"direction {v} grazes edge {edge}")
    out = v - 2 * c * nh
    return out / abs(out)


@dataclass(frozen=True)
class _Hit:
    t: float
    edge: int
    param: float
    point: complex


def _edges_through(poly: StellatedPolygon, p: complex, tol: float) -> set[int]:
    out = set()
    for e in range(2 * poly.n):
        a, b = poly.edge_points(e)
        d = b - a
        s = _dot(p - a, d) / abs(d) ** 2
        if -tol <= s <= 1 + tol and abs(_cross(d, p - a)) / abs(d) <= tol:
            out.add(e)
    return out


def _next_hit(poly: StellatedPolygon, p: complex, d: complex, exclude: set[int]) -> _Hit:
    best = None
    for e in range(2 * poly.n):
        if e in exclude:
            continue
        a, b = poly.edge_points(e)
        w = b - a
        den = _cross(d, w)
        if den == 0.0:
            continue
        t = _cross(a - p, w) / den
        s = _cross(a - p, d) / den
        if t <= GUARD * poly.outer_radius or s < -1e-12 or s > 1 + 1e-12:
            continue
        if best is None or t < best.t:
            best = _Hit(t, e, min(1.0, max(0.0, s)), p + t * d)
    if best is None:
        raise BilliardError(f"no edge ahead of {p} in direction {d}; is the point inside the polygon?")
    return best


def _near_center(p: complex, q: complex, eps: float) -> complex | None:
    """Closest point of [p, q] to O when it lies within eps, else None."""
    d = q - p
    s = min(1.0, max(0.0, -_dot(p, d) / abs(d) ** 2))
    c = p + s * d
    return c if abs(c) <= eps else None


def _vertex_near(poly: StellatedPolygon, hit: _Hit, eps: float) -> bool:
    a, b = poly.edge_points(hit.edge)
    return abs(hit.point - a) <= eps or abs(hit.point - b) <= eps


def _check_start(poly: StellatedPolygon, p: complex, eps: float):
    if abs(p) <= eps:
        raise BilliardError("start at the center O is not allowed")
    for v in poly.vertices:
        if abs(p - v) <= eps:
            raise BilliardError(f"start {p} is on a vertex")
    if not poly.contains(p, tol=eps):
        raise BilliardError(f"start {p} is outside cl(K*)")


def default_eps(poly: StellatedPolygon) -> float:
    return 1e-9 * poly.outer_radius


def _start_exclusions(poly: StellatedPolygon, p: complex, d: complex, eps: float) -> set[int]:
    # starting on an edge and heading inward: that edge is behind us
    return {e for e in _edges_through(poly, p, eps) if _dot(d, poly.inward_normal(e)) > 0}


def simulate(start: BilliardState, poly: StellatedPolygon, max_bounces: int, eps_vertex: float | None = None) -> Trajectory:
    if max_bounces < 0:
        raise BilliardError("max_bounces must be nonnegative")
    eps = default_eps(poly) if eps_vertex is None else float(eps_vertex)
    if eps <= 0:
        raise BilliardError("eps_vertex must be positive")
    p, d = start.position, start.direction
    _check_start(poly, p, eps)
    traj = Trajectory()
    exclude = _start_exclusions(poly, p, d, eps)
    while True:
        hit = _next_hit(poly, p, d, exclude)
        c = _near_center(p, hit.point, eps)
        if c is not None:
            traj.segments.append((p, c))
            traj.terminated_reason = CENTER
            return traj
        traj.segments.append((p, hit.point))
        traj.final_edge = hit.edge
        if _vertex_near(poly, hit, eps):
            traj.terminated_reason = VERTEX
            return traj
        if len(traj.reflections) == max_bounces:
            traj.terminated_reason = BUDGET
            return traj
        out = reflect_direction(d, hit.edge, poly)
        traj.reflections.append(Reflection(hit.edge, hit.point, d, out, hit.param))
        p, d = hit.point, out
        exclude = {hit.edge}


def reverse(traj: Trajectory, poly: StellatedPolygon, eps_vertex: float | None = None) -> Trajectory:
    """Run the trajectory backwards from its end point for the same number of bounces."""
    if traj.terminated_reason != BUDGET:
        raise BilliardError("only budget-terminated trajectories can be reversed")
    a, b = traj.segments[-1]
    d = (a - b) / abs(a - b)
    return simulate(BilliardState(b, d), poly, len(traj.reflections), eps_vertex)


def extended_motion(z: complex, direction: complex, poly: StellatedPolygon, max_bounces: int,
                    eps: float | None = None) -> tuple[Trajectory, Trajectory]:
    """The pair (gamma_z, gamma_zbar) whose union is invariant under U."""
    z = complex(z)
    e = default_eps(poly) if eps is None else eps
    if abs(z.imag) <= e:
        raise BilliardError(f"z = {z} is fixed by U; an extended motion needs Im z != 0")
    g = simulate(BilliardState(z, direction), poly, max_bounces, e)
    gbar = simulate(BilliardState(z.conjugate(), complex(direction).conjugate()), poly, max_bounces, e)
    U = GroupElement(0, 1, poly.n)
    mirror = g.moved(U)
    if len(mirror.segments) != len(gbar.segments) or any(
        abs(x - y) > 1e-9 * poly.outer_radius for x, y in zip(mirror.points, gbar.points)
    ):
        raise UnfoldError("U(gamma_z) and gamma_zbar disagree")
    return g, gbar


def edge_reflection(e: int, sig: TriangleSignature) -> AffineElement:
    """Affine reflection z -> -uh^2 conj(z) + 2u in the line through edge e.

    Edge 2j has outward normal u_2j; edge 2j-1 has outward normal u_2j+1.
    """
    n, n1 = sig.n, sig.n1
    e %= 2 * n
    if e % 2 == 0:
        k, p = e, e - n1
    else:
        k, p = (e + 2) % (2 * n), n1 + e + 1
    t = [0] * (2 * n)
    t[k] = 1
    return AffineElement(GroupElement(p, 1, n), tuple(t))


@dataclass
class UnfoldedRay:
    origin: complex
    direction: complex
    frames: list[AffineElement]
    segments: list[tuple[complex, complex]]  # unfolded sub-segments, one per frame

    @property
    def length(self) -> float:
        return sum(abs(b - a) for a, b in self.segments)

    @property
    def end(self) -> complex:
        return self.segments[-1][1]


def _place(a: AffineElement, z: complex, poly: StellatedPolygon, sig) -> complex:
    return apply(a, z, sig, poly.outer_radius)


def unfold(traj: Trajectory, poly: StellatedPolygon, sig: TriangleSignature) -> UnfoldedRay:
    if traj.terminated_reason == VERTEX:
        raise BilliardError("cannot unfold a trajectory that ends in a vertex")
    if not traj.segments:
        raise BilliardError("empty trajectory")
    tol = 1e-8 * poly.outer_radius
    frame = affine_identity(sig.n)
    frames, segs = [], []
    for k, (a, b) in enumerate(traj.segments):
        frames.append(frame)
        segs.append((_place(frame, a, poly, sig), _place(frame, b, poly, sig)))
        if k < len(traj.reflections):
            r = traj.reflections[k]
            rho = edge_reflection(r.edge, sig)
            if abs(_place(rho, r.point, poly, sig) - r.point) > tol:
                raise UnfoldError(f"edge reflection {rho} does not fix the hit point on edge {r.edge}")
            frame = frame * rho
    for (_, b), (c, _) in zip(segs, segs[1:]):
        if abs(b - c) > tol:
            raise UnfoldError("unfolded sub-segments do not join up")
    a0, b0 = segs[0]
    d = traj.segments[0][1] - traj.segments[0][0]
    return UnfoldedRay(a0, d / abs(d), frames, segs)


def collinearity_error(ray: UnfoldedRay) -> float:
    """Largest distance of any unfolded breakpoint from the line of the ray."""
    worst = 0.0
    for a, b in ray.segments:
        for z in (a, b):
            worst = max(worst, abs(_cross(ray.direction, z - ray.origin)))
    return worst


def center_images(ray: UnfoldedRay, poly: StellatedPolygon, sig) -> list[complex]:
    """Centers F_k(O) of the copies the ray visits."""
    return [translation_value(f.t, sig, poly.outer_radius) for f in ray.frames]


def forbidden_points(ray: UnfoldedRay, poly: StellatedPolygon, sig) -> list[complex]:
    """Images of O and of the polygon vertices in every visited copy."""
    out = []
    for f in ray.frames:
        out.append(_place(f, 0j, poly, sig))
        out.extend(_place(f, v, poly, sig) for v in poly.vertices)
    return out


def fold(ray: UnfoldedRay, poly: StellatedPolygon, sig: TriangleSignature, eps: float | None = None) -> Trajectory:
    """Walk the straight ray through the unfolded copies and map each piece home.

    Only the origin, direction and number of pieces of the ray are used; the
    frames are rebuilt from the edges actually crossed and compared with the
    stored ones.
    """
    e = default_eps(poly) if eps is None else eps
    frame = affine_identity(sig.n)
    traj = Trajectory()
    x = ray.origin
    exclude = _start_exclusions(poly, x, ray.direction, e)
    count = len(ray.frames)
    for k in range(count):
        if frame != ray.frames[k]:
            raise FoldError(f"frame {k} is {ray.frames[k]!r} but the ray crosses into {frame!r}")
        inv = frame.inverse()
        q = _place(inv, x, poly, sig)
        d = inv.g.act(ray.direction)
        d /= abs(d)
        hit = _next_hit(poly, q, d, exclude)
        if _near_center(q, hit.point, e) is not None:
            raise FoldError("ray passes within eps of a translated center")
        if _vertex_near(poly, hit, e):
            raise FoldError("ray passes within eps of a translated vertex")
        traj.segments.append((q, hit.point))
        traj.final_edge = hit.edge
        x = _place(frame, hit.point, poly, sig)
        if k + 1 < count:
            out = reflect_direction(d, hit.edge, poly)
            traj.reflections.append(Reflection(hit.edge, hit.point, d, out, hit.param))
            frame = frame * edge_reflection(hit.edge, sig)
            exclude = {hit.edge}
    traj.terminated_reason = BUDGET
    return traj


def breakpoint_error(a: Trajectory, b: Trajectory) -> float:
    if len(a.segments) != len(b.segments):
        return math.inf
    return max(abs(x - y) for x, y in zip(a.points, b.points))
