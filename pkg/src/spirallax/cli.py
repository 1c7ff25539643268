"""Command-line front end: reproducible file-based workflows.

Subcommands: gen, lift, coords, shift, spectrum, orbit, verify, render.
All outputs are deterministic (sorted JSON keys, shortest round-trip float
text, atomic writes). Exit codes: 0 success, 2 validation, 3 numeric
failure, 4 verification failure. SPIRALLAX_LOG controls log verbosity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile

import numpy as np

from . import coords as coords_mod
from . import laxspec, shiftmap
from .errors import (
    DegenerateConfiguration,
    GenericityViolation,
    IllConditioned,
    IndexOutOfRange,
    InvalidN,
    NonDivisible,
    NotLiftable,
    SingularMatrix,
    SpiralError,
)
from .lift import LiftedSpiral, canonical_lift
from .spiral import Seed, random_seed
from .tolerances import DEFAULT

log = logging.getLogger("spirallax")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_VERIFICATION = 4

_NUMERIC_ERRORS = (
    NotLiftable,
    DegenerateConfiguration,
    NonDivisible,
    SingularMatrix,
    IllConditioned,
    GenericityViolation,
    IndexOutOfRange,
)


class ValidationError(SpiralError):
    """Bad flags, bad paths, or malformed input files."""


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".spirallax-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, data: str) -> None:
    if args.output:
        _atomic_write(args.output, data)
    else:
        sys.stdout.write(data)


def _load_json(path: str) -> dict:
    if not os.path.exists(path):
        raise ValidationError(f"input file does not exist: {path}")
    try:
        with open(path) as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from exc


def _tolerances(args):
    tol = DEFAULT
    overrides = {}
    if getattr(args, "tol_lift", None) is not None:
        overrides["lift"] = args.tol_lift
    if getattr(args, "tol_spec", None) is not None:
        overrides["spec"] = args.tol_spec
    return tol.with_overrides(**overrides) if overrides else tol


def _check_n(n: int) -> None:
    if n < 5 or n % 3 == 1:
        raise ValidationError(
            f"n = {n} is not admissible: need n >= 5 with n % 3 != 1 "
            "(the canonical lift exists only for such n)"
        )


def _seed_from_args(args, tol) -> Seed:
    if getattr(args, "input", None):
        obj = _load_json(args.input)
        if "points" not in obj:
            raise ValidationError(f"{args.input} does not contain a seed")
        seed = Seed.from_json(obj)
        _check_n(seed.n)
        return seed
    if getattr(args, "n", None) is None:
        raise ValidationError("need --input or --n/--rng-seed")
    _check_n(args.n)
    return random_seed(args.n, args.rng_seed, args.twist, tol)


def _coords_from_input(args, tol) -> coords_mod.Coords:
    obj = _load_json(args.input)
    if "a" in obj and "b" in obj:
        return coords_mod.Coords.from_json(obj)
    if "vectors" in obj:
        return coords_mod.extract_coords(LiftedSpiral.from_json(obj), tol)
    if "points" in obj:
        seed = Seed.from_json(obj)
        _check_n(seed.n)
        return coords_mod.extract_coords(canonical_lift(seed, tol), tol)
    raise ValidationError(f"{args.input} is neither a seed, a lift, nor coordinates")


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    tol = _tolerances(args)
    _check_n(args.n)
    seed = random_seed(args.n, args.rng_seed, args.twist, tol)
    _emit(args, seed.dumps())
    return EXIT_OK


def cmd_lift(args) -> int:
    tol = _tolerances(args)
    seed = _seed_from_args(args, tol)
    ls = canonical_lift(seed, tol)
    _emit(args, ls.dumps())
    return EXIT_OK


def cmd_coords(args) -> int:
    tol = _tolerances(args)
    c = _coords_from_input(args, tol)
    _emit(args, c.dumps(coords_mod.derive(c, tol)))
    return EXIT_OK


def cmd_shift(args) -> int:
    tol = _tolerances(args)
    if args.geometric:
        seed = _seed_from_args(args, tol)
        for _ in range(args.steps):
            seed = shiftmap.geometric_shift(seed, tol)
        c = coords_mod.extract_coords(canonical_lift(seed, tol), tol)
    else:
        c = _coords_from_input(args, tol)
        for _ in range(args.steps):
            c = shiftmap.shift_coords(c, tol)
    _emit(args, c.dumps(coords_mod.derive(c, tol)))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    tol = _tolerances(args)
    c = _coords_from_input(args, tol)
    table = laxspec.spectral_table(c, tol)
    if args.check_invariance:
        report = laxspec.verify_spectral_invariance(c, args.steps, tol)
        sys.stderr.write(json.dumps(report, sort_keys=True) + "\n")
        if not report["pass"]:
            _emit(args, table.dumps())
            return EXIT_VERIFICATION
    _emit(args, table.dumps())
    return EXIT_OK


def cmd_orbit(args) -> int:
    tol = _tolerances(args)
    c = _coords_from_input(args, tol)
    orbit = shiftmap.shift_orbit(c, args.steps, tol)
    base_table = laxspec.spectral_table(c, tol)
    spec_cols = sorted(base_table.entries, key=lambda jk: (jk[1], jk[0]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    n = c.n
    header = (
        ["step"]
        + [f"a_{k}" for k in range(n)]
        + [f"b_{k}" for k in range(n)]
        + ["c_n", "alpha", "beta"]
        + [f"spec_r{k}_mu{j}" for (j, k) in spec_cols]
    )
    writer.writerow(header)
    for step, ck in enumerate(orbit):
        ab = shiftmap.alpha_beta(ck, tol=tol)
        table = laxspec.spectral_table(ck, tol)
        row = (
            [step]
            + [repr(float(x)) for x in ck.a]
            + [repr(float(x)) for x in ck.b]
            + [repr(float(ck.c_n)), repr(ab.alpha), repr(ab.beta)]
            + [repr(table.coeff(j, k)) for (j, k) in spec_cols]
        )
        writer.writerow(row)
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = _tolerances(args)
    seed = _seed_from_args(args, tol)
    reports = run_property_suite(seed, tol, mus=args.mu or [-1.0, 0.5, 1.0, 2.0])
    payload = json.dumps(
        {"reports": reports, "pass": all(r["pass"] for r in reports)},
        sort_keys=True,
        indent=2,
    ) + "\n"
    _emit(args, payload)
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_VERIFICATION


def cmd_render(args) -> int:
    tol = _tolerances(args)
    obj = _load_json(args.input)
    if "vectors" in obj:
        ls = LiftedSpiral.from_json(obj)
    elif "points" in obj:
        seed = Seed.from_json(obj)
        _check_n(seed.n)
        ls = canonical_lift(seed, tol)
    else:
        raise ValidationError(f"{args.input} is neither a seed nor a lift")
    _emit(args, spiral_svg(ls))
    return EXIT_OK


# ---------------------------------------------------------------------------
# the property suite behind `verify`


def run_property_suite(seed: Seed, tol=DEFAULT, mus=(-1.0, 0.5, 1.0, 2.0)) -> list:
    """Machine-readable checks of the lift, coordinate, shift and spectral
    properties on a single instance."""
    reports = []
    ls = canonical_lift(seed, tol)
    res = ls.max_unit_det_residual()
    reports.append(
        {"check": "lift_unit_determinants", "max_dev": res, "pass": res <= tol.lift}
    )

    # uniqueness under an arbitrary rescale of the input representatives
    rng = np.random.default_rng(20240 + seed.n)
    factors = rng.uniform(0.25, 4.0, size=seed.n + 1)
    rescaled = Seed(
        n=seed.n,
        points=tuple(f * p for f, p in zip(factors[:-1], seed.points)),
        side_point=factors[-1] * seed.side_point,
        monodromy=seed.monodromy,
    )
    ls2 = canonical_lift(rescaled, tol)
    dev = max(
        float(np.max(np.abs(ls[i] - ls2[i])))
        for i in range(0, seed.n + 2)
    )
    reports.append({"check": "lift_uniqueness", "max_dev": dev, "pass": dev <= 1e-8})

    c = coords_mod.extract_coords(ls, tol)
    d = coords_mod.derive(c, tol)

    # derived boundary invariants vs. geometric extraction
    geo_n = coords_mod.invariants_at(ls, seed.n)
    geo_m1 = coords_mod.invariants_at(ls, -1)
    geo_n1 = coords_mod.invariants_at(ls, seed.n + 1)
    pairs = [
        (d.a_n, geo_n[0]),
        (d.b_n, geo_n[1]),
        (d.c_n1, geo_n1[2]),
        (d.a_m1, geo_m1[0]),
        (d.b_m1, geo_m1[1]),
        (d.c_m1, geo_m1[2]),
    ]
    dev = max(abs(x - y) / max(1.0, abs(x), abs(y)) for x, y in pairs)
    reports.append(
        {"check": "boundary_invariants_geometric", "max_dev": dev, "pass": dev <= tol.shift}
    )

    # internal identities of the chart
    lhs = d.c_m1
    rel_devs = [
        abs(d.c_m1 - d.A[0] * d.A[1] / c.c_n) / max(1.0, abs(d.c_m1)),
        abs(d.c_n1 - c.c_n / (c.c_n + d.b_n * c.a[-2])) / max(1.0, abs(d.c_n1)),
        abs(
            lhs / (1.0 + c.a[0] * d.b_m1)
            - c.c_n / ((c.c_n + d.b_n * c.a[-2]) * (1.0 + c.a[2] * c.b[1]))
        ),
    ]
    dev = max(rel_devs)
    reports.append({"check": "chart_identities", "max_dev": dev, "pass": dev <= 1e-8})

    # gauge relation at the seam: K_{n+1} vs A1^{-1} K_{-1} A2
    from .projgeo import mat_inverse

    a1 = coords_mod.gauge_A(1, c, d)
    a2 = coords_mod.gauge_A(2, c, d)
    k_n1 = mat_inverse(a1) @ coords_mod.k_at(c, d, -1) @ a2
    k_geo = coords_mod.k_matrix(*coords_mod.invariants_at(ls, seed.n + 1))
    dev = float(np.max(np.abs(k_n1 - k_geo) / np.maximum(1.0, np.abs(k_geo))))
    reports.append({"check": "gauge_seam", "max_dev": dev, "pass": dev <= tol.shift})

    reports.append(shiftmap.verify_shift_commutation(seed, tol))
    reports.append(shiftmap.verify_equivariance(c, 2.5, tol))
    reports.append(laxspec.verify_lax(c, mus, tol))
    reports.append(laxspec.verify_spectral_invariance(c, steps=3, tol=tol))
    reports.append(laxspec.check_scaling_consistency(c, nu=1.7, tol=tol))

    for r in reports:
        r["pass"] = bool(r["pass"])
        if "worst_at" in r:
            r["worst_at"] = list(r["worst_at"]) if r["worst_at"] else None
    return reports


# ---------------------------------------------------------------------------
# SVG export


def spiral_svg(ls: LiftedSpiral, width: float = 640.0) -> str:
    """Projectivized spiral window in the affine chart, vertices joined in
    index order, seed points marked."""
    pts = []
    for i in range(ls.window.lo, ls.window.hi + 1):
        v = ls[i]
        if abs(v[2]) <= 1e-12 * float(np.linalg.norm(v)):
            raise DegenerateConfiguration(f"vertex {i} is at infinity in the chart")
        pts.append((i, v[0] / v[2], v[1] / v[2]))
    xs = [p[1] for p in pts]
    ys = [p[2] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    margin = 0.05 * span
    x0, y0 = min(xs) - margin, min(ys) - margin
    scale = width / (span + 2 * margin)

    def sx(x):
        return repr((x - x0) * scale)

    def sy(y):
        # flip so the counterclockwise plane renders upright
        return repr(width - (y - y0) * scale)

    polyline = " ".join(f"{sx(x)},{sy(y)}" for _, x, y in pts)
    marks = []
    for i, x, y in pts:
        if 1 <= i <= ls.n + 1:
            marks.append(
                f'<circle cx="{sx(x)}" cy="{sy(y)}" r="4" fill="#c33"/>'
            )
    body = "\n  ".join(marks)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {repr(width)} {repr(width)}">\n'
        f'  <polyline fill="none" stroke="#336" stroke-width="1.5" points="{polyline}"/>\n'
        f"  {body}\n"
        "</svg>\n"
    )


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _add_common(p: argparse.ArgumentParser, needs_input=False) -> None:
    p.add_argument("-i", "--input", help="input JSON path")
    p.add_argument("-o", "--output", help="output path (stdout if omitted)")
    p.add_argument("--tol-lift", type=float, default=None, help="override lift tolerance")
    p.add_argument("--tol-spec", type=float, default=None, help="override spectral tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spirallax",
        description="Twisted pentagram spirals: lifts, coordinates, shift map, spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a deterministic random seed")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--twist", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("lift", help="canonical lift of a seed")
    _add_common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--twist", type=float, default=0.0)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("coords", help="moduli coordinates of a seed or lift")
    _add_common(p)
    p.set_defaults(func=cmd_coords)

    p = sub.add_parser("shift", help="apply the shift map to coordinates")
    _add_common(p)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--geometric", action="store_true", help="route through the geometric shift")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--twist", type=float, default=0.0)
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("spectrum", help="spectral table of the scaled monodromy")
    _add_common(p)
    p.add_argument("--check-invariance", action="store_true")
    p.add_argument("--steps", type=int, default=3)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("orbit", help="CSV time series along the shift orbit")
    _add_common(p)
    p.add_argument("--steps", type=int, default=8)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("verify", help="run the property suite on an instance")
    _add_common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--twist", type=float, default=0.0)
    p.add_argument("--mu", type=float, action="append", help="sample value (repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="SVG of the projectivized spiral window")
    _add_common(p)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("SPIRALLAX_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValidationError, InvalidN) as exc:
        log.error("validation: %s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except _NUMERIC_ERRORS as exc:
        log.error("numeric: %s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
