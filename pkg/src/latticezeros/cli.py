"""Command-line interface: ``lzt <command> ...`` (or ``python -m latticezeros``).

Exit codes: 0 ok, 1 verification failure, 2 domain error, 3 convergence
error, 4 usage or bracket error. Files are delimited text with a header row;
every command that writes files also writes ``<out>.manifest.json``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, fields

import numpy as np

from . import __version__
from .errors import BracketError, ConvergenceError, DomainError, LatticeZerosError, WindowError
from .latticesum import EvalConfig, LatticeShape, factorized_reference, s0, s0_tilde
from .latticesum.kober import s0_tilde_value
from .latticesum.reference import factor_zeros
from .specialfn import QuadratureSpec

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_USAGE = 0, 1, 2, 3, 4


def fmt(x: float) -> str:
    """Round-trip formatting (17 significant digits)."""
    return format(float(x), ".17g")


def principal_arg(v: complex) -> float:
    """arg v in (-pi, pi]; atan2 returns -pi for a negative real with -0.0 imaginary part."""
    if v == 0:
        return 0.0
    a = math.atan2(v.imag, v.real)
    return math.pi if a <= -math.pi else a


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

_QUAD_KEYS = {"bessel_abs_tol": "abs_tol", "bessel_rel_tol": "rel_tol", "bessel_max_levels": "max_levels"}


def read_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (p.strip() for p in line.split("=", 1))
            out[key] = value
    return out


def build_config(args) -> EvalConfig:
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    cfg_fields = {f.name: f.type for f in fields(EvalConfig)}
    kwargs, quad = {}, {}
    for key, raw in values.items():
        if key in _QUAD_KEYS:
            quad[_QUAD_KEYS[key]] = int(raw) if key == "bessel_max_levels" else float(raw)
        elif key in ("target_rel_err", "activation_ratio"):
            kwargs[key] = float(raw)
        elif key == "max_terms_per_axis":
            kwargs[key] = int(raw)
        elif key not in cfg_fields:
            raise UsageError(f"unknown config key {key!r}")
    if quad:
        kwargs["bessel_quadrature"] = QuadratureSpec(**quad)
    if getattr(args, "tol", None) is not None:
        kwargs["target_rel_err"] = args.tol
    return EvalConfig.from_env(**kwargs)


def config_snapshot(cfg: EvalConfig) -> dict:
    return asdict(cfg)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_table(path: str, header: list[str], rows) -> None:
    tmp = path + ".partial"
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(c if isinstance(c, str) else fmt(c) for c in row) + "\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def write_manifest(out: str, command: str, params: dict, cfg: EvalConfig, started: float, outputs: list[str], extra=None):
    manifest = {
        "command": command,
        "parameters": params,
        "config": config_snapshot(cfg),
        "artifact_version": __version__,
        "wall_time": time.time() - started,
        "outputs": [{"path": p, "sha256": _sha256(p)} for p in outputs],
    }
    if extra:
        manifest.update(extra)
    path = out + ".manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    return path


def shape_from_args(args) -> LatticeShape:
    lam = getattr(args, "lam", None)
    c = getattr(args, "c", None)
    if (lam is None) == (c is None):
        raise UsageError("give exactly one of --lambda and --c")
    return LatticeShape(lam) if lam is not None else LatticeShape.from_c(c)


def _pool_map(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    shape = shape_from_args(args)
    cfg = build_config(args)
    s = complex(args.sigma, args.t)
    tv = s0_tilde(shape, s, cfg)
    sv = s0(shape, s, cfg)
    c = args.c if args.c is not None else shape.c
    rec = {
        "lambda": shape.lam,
        "c": c,
        "s": [s.real, s.imag],
        "S0": [sv.value.real, sv.value.imag],
        "S0_err": sv.est_abs_err,
        "S0_tilde": [tv.value.real, tv.value.imag],
        "S0_tilde_err": tv.est_abs_err,
        "S0_tilde_scale": tv.scale,
        "S0_tilde_rel_to_scale": abs(tv.value) / tv.scale if tv.scale else None,
        "terms": tv.terms_used,
    }
    try:
        ref = factorized_reference(shape, s)
        rec["closed_form"] = [ref.real, ref.imag]
    except DomainError:
        pass
    if args.json:
        print(json.dumps(rec))
    else:
        print(f"lambda      {fmt(shape.lam)}  (c = {fmt(c)})")
        print(f"s           {fmt(s.real)} {fmt(s.imag)}i")
        print(f"S0          {fmt(sv.value.real)} {fmt(sv.value.imag)}i  +- {sv.est_abs_err:.2e}")
        print(f"S0~         {fmt(tv.value.real)} {fmt(tv.value.imag)}i  +- {tv.est_abs_err:.2e}")
        print(f"|S0~|/scale {rec['S0_tilde_rel_to_scale']:.3e}  (scale {tv.scale:.6e}, {tv.terms_used} MacDonald terms)")
        if "closed_form" in rec:
            print(f"closed form {fmt(rec['closed_form'][0])} {fmt(rec['closed_form'][1])}i")
    return EXIT_OK


class _GridRow:
    """Picklable worker: one row of the grid at fixed axis-1 value."""

    def __init__(self, axis1: str, fixed: float, ts, quantity: str, cfg: EvalConfig):
        self.axis1, self.fixed, self.ts, self.quantity, self.cfg = axis1, fixed, list(ts), quantity, cfg

    def __call__(self, a1: float):
        out = []
        for t in self.ts:
            if self.axis1 == "sigma":
                lam, s = self.fixed, complex(a1, t)
            else:
                lam, s = a1, complex(self.fixed, t)
            v, _ = s0_tilde_value(lam, s, self.cfg)
            if self.quantity == "logmod":
                out.append(math.log(abs(v)) if v != 0 else -math.inf)
            else:
                out.append(principal_arg(v))
        return out


def cmd_grid(args) -> int:
    cfg = build_config(args)
    started = time.time()
    if args.n1 < 2 or args.nt < 2:
        raise UsageError("grids need at least 2 points per axis")
    a1 = np.linspace(args.min1, args.max1, args.n1)
    ts = np.linspace(args.t_min, args.t_max, args.nt)
    if args.axis1 == "sigma":
        shape = shape_from_args(args)
        fixed = shape.lam
        fixed_name = "lambda"
    else:
        if args.sigma is None:
            raise UsageError("--sigma is required when axis1 is lambda")
        fixed = args.sigma
        fixed_name = "sigma"
        shape = None
    worker = _GridRow(args.axis1, fixed, ts, args.quantity, cfg)
    rows_vals = _pool_map(worker, [float(x) for x in a1], args.jobs)
    rows = [(x, t, v) for x, vals in zip(a1, rows_vals) for t, v in zip(ts, vals)]
    outputs = [args.out]
    write_table(args.out, [args.axis1, "t", args.quantity], rows)
    if shape is not None:
        marks_path = args.out + ".zeros.csv"
        try:
            marks = factor_zeros(shape, float(ts[0]), float(ts[-1]))
        except DomainError:
            marks = []
        write_table(marks_path, ["source", "sigma", "t"], [(lbl, z.real, z.imag) for lbl, z in marks])
        outputs.append(marks_path)
    params = {
        "axis1": {"name": args.axis1, "min": args.min1, "max": args.max1, "n": args.n1},
        "axis2": {"name": "t", "min": args.t_min, "max": args.t_max, "n": args.nt},
        "fixed": {fixed_name: fixed},
        "quantity": args.quantity,
    }
    write_manifest(args.out, "grid", params, cfg, started, outputs)
    return EXIT_OK


class _LineValues:
    def __init__(self, lam: float, cfg: EvalConfig):
        self.lam, self.cfg = lam, cfg

    def __call__(self, t: float):
        return s0_tilde_value(self.lam, complex(0.5, t), self.cfg)


def cmd_scan(args) -> int:
    from .zeros import scan_critical_line

    shape = shape_from_args(args)
    cfg = build_config(args)
    started = time.time()
    if args.t_max < args.t_min:
        raise DomainError("t_max must be >= t_min")
    res = scan_critical_line(shape.lam, args.t_min, args.t_max, args.step, cfg, mapper=_mapper(args.jobs))
    rows = [(z.lam, z.s.real, z.s.imag, str(z.multiplicity), z.residual, z.method.value) for z in res.zeros]
    write_table(args.out, ["lambda", "sigma", "t", "multiplicity", "residual", "method"], rows)
    extra = {"candidates": res.candidates, "max_imag_ratio": res.max_imag_ratio}
    write_manifest(args.out, "scan", {"lambda": shape.lam, "t_min": args.t_min, "t_max": args.t_max, "step": args.step}, cfg, started, [args.out], extra)
    print(f"{len(res.zeros)} zeros, {len(res.candidates)} minima without sign change")
    return EXIT_OK


def _mapper(jobs: int):
    def m(fn, items):
        return _pool_map(fn, items, jobs)

    return m


def cmd_trace(args) -> int:
    from .trajectory import trace

    cfg = build_config(args)
    started = time.time()
    traj = trace(args.c_start, complex(args.sigma, args.t), args.c_end, cfg, max_step=args.max_step)
    rows = [(p.c, p.lam, p.s.real, p.s.imag, p.residual) for p in traj.points]
    write_table(args.out, ["c", "lambda", "sigma", "t", "residual"], rows)
    fin = traj.final
    extra = {"termination": traj.termination.value, "points": len(traj.points)}
    params = {"c_start": args.c_start, "s_start": [args.sigma, args.t], "c_end": args.c_end, "max_step": args.max_step}
    write_manifest(args.out, "trace", params, cfg, started, [args.out], extra)
    print(f"{traj.termination.value}: {len(traj.points)} points, final c = {fmt(fin.c)}, s = {fmt(fin.s.real)} + {fmt(fin.s.imag)}i")
    return EXIT_OK


def cmd_transition(args) -> int:
    from .trajectory import find_transition, merge_signature, transition_point

    cfg = build_config(args)
    started = time.time()
    br = find_transition(args.c_lo, args.c_hi, args.t_center, args.t_halfwidth, args.width, cfg)
    c_mid, s_merge = transition_point(br, cfg)
    sig = merge_signature(c_mid, s_merge, cfg)
    rows = [
        ("c_lo", br.c_lo),
        ("c_hi", br.c_hi),
        ("classification_lo", br.classification_lo.value),
        ("classification_hi", br.classification_hi.value),
        ("t_merge", s_merge.imag),
        ("winding", str(sig.winding)),
        ("beta", sig.beta),
        ("beta_ci_lo", sig.beta_ci[0]),
        ("beta_ci_hi", sig.beta_ci[1]),
    ]
    write_table(args.out, ["key", "value"], rows)
    params = {"c_lo": args.c_lo, "c_hi": args.c_hi, "t_center": args.t_center, "t_halfwidth": args.t_halfwidth, "width": args.width}
    write_manifest(args.out, "transition", params, cfg, started, [args.out])
    print(f"transition in [{fmt(br.c_lo)}, {fmt(br.c_hi)}] ({br.classification_lo.value} -> {br.classification_hi.value})")
    print(f"merge at t = {fmt(s_merge.imag)}, winding {sig.winding}, beta = {sig.beta:.4f} [{sig.beta_ci[0]:.4f}, {sig.beta_ci[1]:.4f}]")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    cfg = build_config(args)
    started = time.time()
    checks = run_suite(args.suite, cfg)
    lines = [json.dumps(c.as_dict(), sort_keys=True) for c in checks]
    for line in lines:
        print(line)
    ok = all(c.passed for c in checks)
    if args.out:
        rows = [(c.suite, c.name, c.residual, c.tolerance, str(c.samples), "PASS" if c.passed else "FAIL") for c in checks]
        write_table(args.out, ["suite", "check", "residual", "tolerance", "samples", "status"], rows)
        write_manifest(args.out, "verify", {"suite": args.suite}, cfg, started, [args.out], {"passed": ok})
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _shape_args(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--lambda", dest="lam", type=float, help="period ratio lambda")
    g.add_argument("--c", type=float, help="c = lambda**2")


def _common(p):
    p.add_argument("--tol", type=float, help="target relative error (default: LZT_DEFAULT_TOL or 1e-14)")
    p.add_argument("--config", help="file of key=value lines overriding EvalConfig fields")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output does not depend on it)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lzt", description="Rectangular lattice sums and their zeros.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate S0 and S0~ at one point")
    _shape_args(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--json", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="log|S0~| or arg S0~ on a grid")
    p.add_argument("--axis1", choices=("sigma", "lambda"), default="sigma")
    p.add_argument("--min1", type=float, required=True)
    p.add_argument("--max1", type=float, required=True)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--t-min", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--nt", type=int, required=True)
    _shape_args(p, required=False)
    p.add_argument("--sigma", type=float, help="fixed sigma when axis1 is lambda")
    p.add_argument("--quantity", choices=("logmod", "arg"), default="logmod")
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("scan", help="zeros on the critical line")
    _shape_args(p)
    p.add_argument("--t-min", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("trace", help="follow a zero as c = lambda**2 varies")
    p.add_argument("--c-start", type=float, required=True)
    p.add_argument("--c-end", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True, help="Re s of the starting zero")
    p.add_argument("--t", type=float, required=True, help="Im s of the starting zero")
    p.add_argument("--max-step", type=float, default=0.05)
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("transition", help="bisect for an on-line/off-line transition in c")
    p.add_argument("--c-lo", type=float, required=True)
    p.add_argument("--c-hi", type=float, required=True)
    p.add_argument("--t-center", type=float, required=True)
    p.add_argument("--t-halfwidth", type=float, default=0.1)
    p.add_argument("--width", type=float, default=1e-10, help="target bracket width in c")
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", nargs="?", default="all", choices=("identities", "factorizations", "expansions", "all"))
    p.add_argument("--out")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help, --version and argparse usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, BracketError, WindowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ValueError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except LatticeZerosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
