"""Command-line front end: ``rayinv <subcommand> --disc D [--level N] ...``."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass

from . import __version__
from .errors import IntegralityError, RayInvError
from .forms import make_field, reduced_forms, theta_Q
from .invariants import (
    conjugate_orbit,
    exact_exponent_unit,
    exceptional_invariant,
    field_degree,
    integrality_scale,
    min_poly_invariant,
    normal_basis_bound,
    normal_basis_exponent,
    singular_y,
    verify_inequality1,
    verify_inequality2,
)
from .numerics import DEFAULT_DIGITS, PrecisionContext

PRECISION_ENV = "RAYINV_PRECISION"


@dataclass(frozen=True)
class RunConfig:
    discriminant: int
    level: int | None
    exponent: int | None
    precision: int
    output_format: str


def _fmt(mp, x, digits=30) -> str:
    return mp.nstr(x, digits)


def _cplx(mp, z, digits=40) -> str:
    return f"{mp.nstr(z.real, digits)} {'-' if z.imag < 0 else '+'} {mp.nstr(abs(z.imag), digits)}*I"


class Failure(Exception):
    """A computation ran but a requested check did not pass."""


def _require(value, flag):
    if value is None:
        raise RayInvError(f"{flag} is required for this subcommand")
    return value


def cmd_class_group(cfg: RunConfig, ctx: PrecisionContext):
    forms = reduced_forms(cfg.discriminant)
    mp = ctx.mp
    rows = [{"form": f.as_list(), "theta_Q": _cplx(mp, theta_Q(f, ctx))} for f in forms]
    result = {"discriminant": cfg.discriminant, "class_number": len(forms), "forms": rows}
    lines = [f"d_K = {cfg.discriminant}, class number h = {len(forms)}"]
    lines += [f"  [{r['form'][0]},{r['form'][1]},{r['form'][2]}]  theta_Q = {r['theta_Q']}" for r in rows]
    return result, [], lines


def cmd_minpoly(cfg: RunConfig, ctx: PrecisionContext, normalize=False, workers=None):
    N = _require(cfg.level, "--level")
    e = _require(cfg.exponent, "--exp")
    fld = make_field(cfg.discriminant, ctx)
    try:
        poly = min_poly_invariant(fld, N, e, ctx, normalize=normalize, workers=workers)
    except IntegralityError as exc:
        hint = "increase --precision"
        if integrality_scale(N, e) != 1 and not normalize:
            hint += f"; N = {N} is a prime power, so try --normalize (roots scaled by {N}^{4 * e})"
        raise RayInvError(f"{exc}; {hint}") from exc
    result = {
        "degree": poly.degree,
        "coefficients": [str(c) for c in poly.coeffs],
        "normalized": normalize,
        "polynomial": poly.to_text(),
    }
    checks = [{"name": "integrality", "passed": True,
               "detail": f"all {poly.degree + 1} coefficients integral at tolerance 1e-30"}]
    return result, checks, [poly.to_text()]


def cmd_conjugates(cfg: RunConfig, ctx: PrecisionContext, workers=None):
    N = _require(cfg.level, "--level")
    e = cfg.exponent if cfg.exponent is not None else exact_exponent_unit(N)
    fld = make_field(cfg.discriminant, ctx)
    report = conjugate_orbit(fld, N, e, ctx, workers=workers)
    mp = ctx.mp
    rows, lines = [], [f"{len(report.values)} conjugates of y_(0,1/{N})^{e}(theta_K), d_K = {cfg.discriminant}"]
    for lab, v in zip(report.labels, report.values):
        rows.append({"alpha": str(lab.alpha), "form": lab.form.as_list(), "u_Q": str(lab.u),
                     "value": _cplx(mp, v)})
        lines.append(f"  alpha={lab.alpha} Q={lab.form} u_Q={lab.u}  {_cplx(mp, v, 25)}")
    return {"exponent": e, "conjugates": rows}, [], lines


def cmd_verify(cfg: RunConfig, ctx: PrecisionContext):
    N = _require(cfg.level, "--level")
    d = cfg.discriminant
    fld = make_field(d, ctx)
    mp = ctx.mp
    tol = ctx.tolerance * mp.mpf(10) ** 10
    checks, lines = [], []

    def add(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})
        lines.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")

    if d == -3:
        rep = exceptional_invariant(N, ctx)
        add("exceptional_identity", rep.sign != 0,
            f"sign {rep.sign:+d}, residual {_fmt(mp, rep.residual, 5)}, "
            f"other sign residual {_fmt(mp, rep.other_residual, 5)}")
        add("g3_squared_over_delta", abs(rep.g3_squared_over_delta + mp.mpf(1) / 27) < tol,
            f"g3^2/Delta = {_fmt(mp, rep.g3_squared_over_delta.real, 20)}")
        add("j_zero", abs(rep.j_value) < tol, f"|j(theta)| = {_fmt(mp, abs(rep.j_value), 5)}")
        return {"exceptional_sign": rep.sign}, checks, lines
    result = {}
    if d <= -20:
        rep = verify_inequality1(fld, N, ctx)
        add("inequality1", rep.passed, f"max ratio {rep.max_ratio:.6f} < {rep.threshold}")
        result["inequality1_max_ratio"] = rep.max_ratio
    if d <= -11:
        rep = verify_inequality2(fld, N, ctx)
        add("inequality2", rep.passed, f"max ratio {rep.max_ratio:.6f} < {rep.threshold}")
        result["inequality2_max_ratio"] = rep.max_ratio
    if d not in (-3, -4):
        e = exact_exponent_unit(N)
        base = singular_y(fld, N, e, ctx)
        first = conjugate_orbit(fld, N, e, ctx).values[0]
        rel = abs(first - base) / abs(base)
        add("identity_label", rel < tol, f"relative difference {_fmt(mp, rel, 5)}")
    if not checks:
        raise RayInvError(f"no verifications apply to d_K = {d}")
    return result, checks, lines


def cmd_normal_basis(cfg: RunConfig, ctx: PrecisionContext):
    N = _require(cfg.level, "--level")
    fld = make_field(cfg.discriminant, ctx)
    s = normal_basis_exponent(fld, N)
    deg = field_degree(fld, N)
    bound = normal_basis_bound(deg, N)
    result = {"degree": deg, "exponent": s, "bound": bound,
              "element": f"y_(0,1/{N})^{4 * s // math.gcd(4, N)}(theta_K)"}
    lines = [f"[K_({N}):K] = {deg}", f"bound = {bound:.6f}", f"s = {s}",
             f"normal basis element: {result['element']}"]
    return result, [], lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rayinv", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, level=True, exp=False):
        p.add_argument("--disc", type=int, required=True, help="fundamental discriminant d_K < 0")
        if level:
            p.add_argument("--level", type=int, required=True, help="modulus N")
        if exp:
            p.add_argument("--exp", type=int, help="exponent e, a multiple of 12N/gcd(6,N)")
        p.add_argument("--precision", type=int, default=None,
                       help=f"decimal digits (default ${PRECISION_ENV} or {DEFAULT_DIGITS})")
        p.add_argument("--format", choices=("text", "json"), default="text")

    common(sub.add_parser("class-group", help="reduced forms of discriminant d_K"), level=False)
    p = sub.add_parser("minpoly", help="integer minimal polynomial of y_(0,1/N)^e(theta_K)")
    common(p, exp=True)
    p.add_argument("--normalize", action="store_true",
                   help="scale roots by N^(4e) when N is a prime power")
    p.add_argument("--workers", type=int, default=None)
    p = sub.add_parser("conjugates", help="all conjugates of y_(0,1/N)^e(theta_K)")
    common(p, exp=True)
    p.add_argument("--workers", type=int, default=None)
    common(sub.add_parser("verify", help="run the applicable numerical verifications"))
    common(sub.add_parser("normal-basis", help="degree and normal-basis exponent"))
    return parser


def resolve_precision(flag, environ=os.environ) -> int:
    if flag is not None:
        return flag
    env = environ.get(PRECISION_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise RayInvError(f"{PRECISION_ENV} must be an integer, got {env!r}")
    return DEFAULT_DIGITS


def render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    inputs = {"command": args.command, "discriminant": args.disc,
              "level": getattr(args, "level", None), "exponent": getattr(args, "exp", None)}
    result, checks, lines, error = None, [], [], None
    try:
        precision = resolve_precision(args.precision)
        inputs["precision"] = precision
        cfg = RunConfig(args.disc, inputs["level"], inputs["exponent"], precision, args.format)
        ctx = PrecisionContext(precision)
        if args.command == "class-group":
            result, checks, lines = cmd_class_group(cfg, ctx)
        elif args.command == "minpoly":
            inputs["normalize"] = args.normalize
            result, checks, lines = cmd_minpoly(cfg, ctx, args.normalize, args.workers)
        elif args.command == "conjugates":
            result, checks, lines = cmd_conjugates(cfg, ctx, args.workers)
        elif args.command == "verify":
            result, checks, lines = cmd_verify(cfg, ctx)
        else:
            result, checks, lines = cmd_normal_basis(cfg, ctx)
    except RayInvError as exc:
        error = f"{type(exc).__name__}: {exc}"
        checks.append({"name": "error", "passed": False, "detail": error})
    elapsed = int(round((time.perf_counter() - started) * 1000))
    ok = error is None and all(c["passed"] for c in checks)
    if args.format == "json":
        print(render_json({"inputs": inputs, "result": result, "checks": checks, "timing_ms": elapsed}))
    else:
        for line in lines:
            print(line)
        if error:
            print(f"error: {error}", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
