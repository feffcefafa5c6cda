"""ratsurf command line: genus, table, map, polygon, billiard, verify.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import random
import sys
from fractions import Fraction

from . import billiard as bl
from . import checks
from .scmap import DEFAULT_TOL, F_Q, QuadratureError, triangle_image
from .signature import SignatureError, cover_profile, genus_table, parse_signature, singular_points
from .stargon import ConstructionError, build_polygon, edge_pairs, orbit_decomposition, vertex_orbits

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

FORMATS = {
    "genus": ("json",),
    "table": ("csv", "json"),
    "map": ("json", "csv"),
    "polygon": ("json", "svg"),
    "billiard": ("json", "svg"),
    "verify": ("json",),
}


class UsageError(Exception):
    pass


def cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def frac(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def _pair(text: str) -> complex:
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None
    return complex(a, b)


def _sig_dict(sig) -> dict:
    return {"n0": sig.n0, "n1": sig.n1, "n_inf": sig.n_inf, "n": sig.n}


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# commands; each returns (text, exit code)

def cmd_genus(sig, fmt="json"):
    prof = cover_profile(sig)
    sing = singular_points(sig)
    data = {
        "signature": _sig_dict(sig),
        "d": list(prof.d),
        "local_degrees": list(prof.degrees),
        "ramification": prof.ramification_r,
        "genus": prof.genus,
        "singular_points": [list(p) for p in sing.points],
    }
    return _json(data), EXIT_OK


TABLE_COLUMNS = ["n0", "n1", "n_inf", "n", "d0", "d1", "d_inf", "genus"]


def cmd_table(n_max: int, fmt="csv"):
    if n_max < 3:
        raise UsageError("--nmax must be at least 3 (n = n0 + n1 + n_inf with every part >= 1)")
    rows = []
    for r in genus_table(n_max):
        s, p = r.signature, r.profile
        rows.append([s.n0, s.n1, s.n_inf, s.n, p.d0, p.d1, p.d_inf, p.genus])
    if fmt == "csv":
        return _csv(TABLE_COLUMNS, rows), EXIT_OK
    return _json([dict(zip(TABLE_COLUMNS, r)) for r in rows]), EXIT_OK


def map_grid(sig, size: int, tol: float):
    """F_Q on a size x size grid over [-1, 2] x [-1.5, 1.5], off the real axis."""
    pts = []
    for i in range(size):
        for k in range(size):
            x = -1.0 + 3.0 * (i + 0.5) / size
            y = -1.5 + 3.0 * (k + 0.5) / size
            if abs(y) < 1e-12:
                continue
            xi = complex(x, y)
            pts.append((xi, F_Q(xi, sig, tol)))
    return pts


def cmd_map(sig, size=8, tol=DEFAULT_TOL, fmt="json"):
    tri = triangle_image(sig, tol)
    pts = map_grid(sig, size, tol)
    if fmt == "csv":
        rows = [[repr(a.real), repr(a.imag), repr(b.real), repr(b.imag)] for a, b in pts]
        return _csv(["xi_re", "xi_im", "f_re", "f_im"], rows), EXIT_OK
    data = {
        "signature": _sig_dict(sig),
        "tol": tol,
        "vertices": {"O": cplx(tri.O), "C": cplx(tri.C), "D": cplx(tri.D)},
        "angles": {k: frac(a) for k, a in zip(("O", "C", "D"), tri.angles)},
        "points": [{"xi": cplx(a), "F_Q": cplx(b)} for a, b in pts],
    }
    return _json(data), EXIT_OK


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _svg(poly, paths=(), marks=()) -> str:
    R = poly.outer_radius * 1.1
    size = 2 * R
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(-R)} {_fmt(-R)} {_fmt(size)} {_fmt(size)}" '
        'width="600" height="600">',
        # flip y so the picture has the usual orientation of C
        '<g transform="scale(1,-1)">',
    ]
    sw = _fmt(poly.outer_radius / 300)
    pts = " ".join(f"{_fmt(v.real)},{_fmt(v.imag)}" for v in poly.vertices)
    out.append(f'<polygon class="star" points="{pts}" fill="none" stroke="black" stroke-width="{sw}"/>')
    out.append(f'<circle class="center" cx="0.000000" cy="0.000000" r="{sw}" fill="black"/>')
    for line in paths:
        p = " ".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in line)
        out.append(f'<polyline class="trajectory" points="{p}" fill="none" stroke="blue" stroke-width="{sw}"/>')
    r = _fmt(poly.outer_radius / 120)
    for z in marks:
        out.append(f'<circle class="reflection" cx="{_fmt(z.real)}" cy="{_fmt(z.imag)}" r="{r}" fill="red"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _polygon_for(sig, tol):
    from .scmap import C_value

    return build_polygon(sig, C_value(sig, tol))


def cmd_polygon(sig, tol=DEFAULT_TOL, fmt="json"):
    poly = _polygon_for(sig, tol)
    if fmt == "svg":
        return _svg(poly), EXIT_OK
    ident = {}
    for j, name in enumerate(("0", "1", "inf")):
        pairs = edge_pairs(sig, j)
        orbits = orbit_decomposition(sig, j)
        ident[name] = {
            "pairs": [{"e": p.e, "e_prime": p.e_prime, "witness": {"j": name, "m": p.m}} for p in pairs],
            "orbits": [sorted(sorted(pair) for pair in o) for o in orbits],
        }
    classes = []
    for c in vertex_orbits(sig):
        classes.append({
            "branch": ("0", "1", "inf")[c.branch],
            "polygon_vertices": None if c.polygon_vertices is None else sorted(c.polygon_vertices),
            "copies": sorted(repr(g) for g in c.members),
        })
    data = {
        "signature": _sig_dict(sig),
        "outer_radius": poly.outer_radius,
        "inner_radius": poly.inner_radius,
        "vertices": [cplx(v) for v in poly.vertices],
        "edges": [list(e) for e in poly.edges],
        "identifications": ident,
        "vertex_classes": classes,
    }
    return _json(data), EXIT_OK


def _random_start(poly, seed: int) -> complex:
    return checks.random_state(random.Random(seed), poly).position


def _frame_dict(f) -> dict:
    return {"p": f.g.p, "ell": f.g.ell, "t": list(f.t), "text": repr(f)}


def cmd_billiard(sig, start=None, direction=1 + 0j, bounces=10, fmt="json", seed=0, tol=DEFAULT_TOL):
    if bounces < 0:
        raise UsageError("--bounces must be nonnegative")
    poly = _polygon_for(sig, tol)
    if start is None:
        start = _random_start(poly, seed)
    if direction == 0:
        raise UsageError("--dir must be nonzero")
    state = bl.BilliardState(start, direction / abs(direction))
    traj = bl.simulate(state, poly, bounces)
    if fmt == "svg":
        return _svg(poly, [traj.points], [r.point for r in traj.reflections]), EXIT_OK
    frames = []
    if traj.terminated_reason != bl.VERTEX:
        frames = [_frame_dict(f) for f in bl.unfold(traj, poly, sig).frames]
    data = {
        "signature": _sig_dict(sig),
        "start": cplx(state.position),
        "direction": cplx(state.direction),
        "terminated_reason": traj.terminated_reason,
        "length": traj.length,
        "segments": [[cplx(a), cplx(b)] for a, b in traj.segments],
        "reflections": [
            {"edge": r.edge, "point": cplx(r.point), "incoming": cplx(r.incoming), "outgoing": cplx(r.outgoing)}
            for r in traj.reflections
        ],
        "frames": frames,
    }
    return _json(data), EXIT_OK


def cmd_verify(sig=None, n_max=None, seed=0, tol=DEFAULT_TOL):
    if sig is None and n_max is None:
        raise UsageError("verify needs --sig or --nmax")
    if n_max is not None and n_max < 3:
        raise UsageError("--nmax must be at least 3")
    if sig is not None:
        results = {str(sig): checks.verify_signature(sig, seed, tol=tol)}
    else:
        results = checks.verify_all(n_max, seed, tol=tol)
    failed = any(checks.any_failed(v) for v in results.values())
    counts = {}
    for v in results.values():
        for c in v:
            counts[c.status] = counts.get(c.status, 0) + 1
    data = {
        "seed": seed,
        "status": "fail" if failed else "pass",
        "counts": dict(sorted(counts.items())),
        "signatures": {k: [c.as_dict() for c in v] for k, v in results.items()},
    }
    return _json(data), EXIT_VERIFY if failed else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ratsurf", description="Rational triangles, their Riemann surfaces and billiards.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, sig=True, fmt="json"):
        if sig:
            sp.add_argument("--sig", required=sig == "required", help="signature n0,n1,ninf with n0 <= n1 <= ninf")
        sp.add_argument("--format", default=fmt, help="output format")
        sp.add_argument("--out", help="write output to this path instead of stdout")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL, help="quadrature tolerance")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized choices")

    common(sub.add_parser("genus", help="cover profile and genus of one signature"), "required")
    t = sub.add_parser("table", help="genus table for all signatures up to n_max")
    common(t, sig=False, fmt="csv")
    t.add_argument("--nmax", type=int, required=True)
    m = sub.add_parser("map", help="Schwarz-Christoffel map on a grid")
    common(m, "required")
    m.add_argument("--grid", type=int, default=8, help="grid points per axis")
    common(sub.add_parser("polygon", help="stellated polygon and its edge identifications"), "required")
    b = sub.add_parser("billiard", help="simulate a billiard trajectory in the stellated polygon")
    common(b, "required")
    b.add_argument("--bounces", type=int, default=10)
    b.add_argument("--start", type=_pair, help="start point re,im (default: seeded random point)")
    b.add_argument("--dir", type=_pair, default=complex(1, 0), help="direction re,im")
    v = sub.add_parser("verify", help="run the property suite")
    common(v, sig=True)
    v.add_argument("--nmax", type=int)
    return p


def run(argv=None) -> tuple[str, int, str | None]:
    """Parse argv and execute; returns (output text, exit code, output path)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    text, code = _dispatch(parser, args)
    return text, code, args.out


def _dispatch(parser, args) -> tuple[str, int]:
    if args.format not in FORMATS[args.command]:
        parser.error(f"--format {args.format} is not valid for {args.command}; choose from {', '.join(FORMATS[args.command])}")
    if not (1e-13 <= args.tol <= 1e-6):
        parser.error("--tol must lie in [1e-13, 1e-6]")
    try:
        sig = parse_signature(args.sig) if getattr(args, "sig", None) else None
    except SignatureError as exc:
        parser.error(str(exc))
    try:
        if args.command == "genus":
            return cmd_genus(sig)
        if args.command == "table":
            return cmd_table(args.nmax, args.format)
        if args.command == "map":
            if args.grid < 1:
                raise UsageError("--grid must be positive")
            return cmd_map(sig, args.grid, args.tol, args.format)
        if args.command == "polygon":
            return cmd_polygon(sig, args.tol, args.format)
        if args.command == "billiard":
            return cmd_billiard(sig, args.start, args.dir, args.bounces, args.format, args.seed, args.tol)
        return cmd_verify(sig, args.nmax, args.seed, args.tol)
    except (UsageError, ConstructionError, SignatureError) as exc:
        parser.error(str(exc))
    except bl.GrazingError as exc:
        return f"numeric failure: {exc}\n", EXIT_NUMERIC
    except bl.BilliardError as exc:
        parser.error(str(exc))
    except (QuadratureError, bl.UnfoldError, ArithmeticError) as exc:
        return f"numeric failure: {exc}\n", EXIT_NUMERIC


def main(argv=None) -> int:
    try:
        text, code, out = run(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if code == EXIT_NUMERIC:
        sys.stderr.write(text)
    elif out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
