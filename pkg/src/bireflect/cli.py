"""Command-line harness: verify, continue-field, kernel-dump, testgen dump."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import kernels
from .config import CONFIG_HELP, RunConfig, load_config
from .curves import Circle, Curve, LineY0
from .errors import ConfigError, ReflectionError, Unsupported
from .quadrature import QuadratureSpec
from .reflection import continue_clamped_general, continue_general, continue_line
from .testgen import BoundaryCase, boundary_residual, closed_form_family, collocation_family

SCHEMA = "bireflect.report/1"
EXIT_GATE = 1
EXIT_USAGE = 2


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for r in rows:
            wr.writerow([fmt(v) for v in r])


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _finite(x):
    return None if x is None or not math.isfinite(x) else float(x)


# shared plumbing -------------------------------------------------------------
def quad_spec(cfg: RunConfig) -> QuadratureSpec:
    return QuadratureSpec(nodes=cfg.quad_nodes, max_refinement=cfg.quad_max_refinement, tol=cfg.quad_tol)


def family_for(cfg: RunConfig, curve: Curve, case: BoundaryCase):
    """(fields, residual) from the configured family kind."""
    if cfg.family == "custom":
        u = cfg.custom_field()
        sample = curve.boundary_sample(400)
        return [u], boundary_residual(u, curve, case, sample)
    if cfg.family == "collocation":
        fam = collocation_family(curve, case, cfg.basis_size, cfg.sample_size)
    else:
        fam = closed_form_family(curve, case)
    return list(fam.fields), fam.residual


def sample_points(curve: Curve, count: int, dmin: float, dmax: float, rng) -> np.ndarray:
    """Points on the U₁ side of the curve at distance in [dmin, dmax]."""
    d = rng.uniform(dmin, dmax, count)
    if isinstance(curve, LineY0):
        return rng.uniform(-1.0, 1.0, count) + 1j * d
    if isinstance(curve, Circle):
        th = rng.uniform(0.0, 2 * np.pi, count)
        return (curve.a + d) * np.exp(1j * th)
    pool = curve.boundary_sample(400)
    feet = pool[rng.integers(0, len(pool), count)]
    return np.array([f - di * curve.normal(f) for f, di in zip(feet, d)])


def continue_point(u, curve, case, P, quad, cfg):
    if isinstance(curve, LineY0):
        return continue_line(u, case, P, quad)
    if case is BoundaryCase.I:
        return continue_clamped_general(u, curve, P)
    k_max = cfg.k_max if curve.closed_form else min(cfg.k_max, kernels.K_MAX_IMPLICIT)
    return continue_general(u, curve, case, P, quad, k_max=k_max)


def gate_for(cfg: RunConfig, curve: Curve, case: BoundaryCase) -> float:
    if not curve.closed_form:
        return cfg.gate_implicit
    if isinstance(curve, LineY0) and case in (BoundaryCase.I, BoundaryCase.II, BoundaryCase.V):
        return cfg.gate_point
    if not isinstance(curve, LineY0) and case is BoundaryCase.I:
        return cfg.gate_point
    return cfg.gate_quadrature


# subcommands -------------------------------------------------------------------
def cmd_verify(cfg: RunConfig, out_dir: str):
    """testgen → reflection over the point sample; returns (report, exit code)."""
    cfg.validate()
    curve = cfg.make_curve()
    rng = np.random.default_rng(cfg.seed)
    pts = sample_points(curve, cfg.count, cfg.dist_min, cfg.dist_max, rng)
    quad = quad_spec(cfg)
    records, summary = [], {}
    for case in cfg.cases():
        fields, fam_res = family_for(cfg, curve, case)
        errs, failures = [], 0
        for fi, u in enumerate(fields):
            for pi, P in enumerate(pts):
                rec = {"case": case.name, "field": fi, "point": pi, "x": P.real, "y": P.imag}
                try:
                    r = continue_point(u, curve, case, P, quad, cfg)
                    truth = u.eval(P)
                    err = abs(r.value - truth)
                    rec.update(true=truth, continued=r.value, abs_error=err, correction=abs(r.correction),
                               K_used=r.truncation_K_used, quad_error=r.quadrature_error_estimate, status="ok")
                    errs.append(err)
                except ReflectionError as exc:
                    failures += 1
                    rec.update(true=None, continued=None, abs_error=None, correction=None,
                               K_used=None, quad_error=None, status=type(exc).__name__)
                records.append(rec)
        gate = gate_for(cfg, curve, case)
        mx = max(errs) if errs else None
        summary[case.name] = {
            "max_error": mx, "median_error": float(np.median(errs)) if errs else None,
            "gate": gate, "family_residual": fam_res, "points": len(pts), "fields": len(fields),
            "failures": failures, "pass": bool(errs) and failures == 0 and mx <= gate,
        }
    header = ["case", "field", "point", "x", "y", "true", "continued", "abs_error", "correction",
              "K_used", "quad_error", "status"]
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "verify.csv"), header, ([r[h] for h in header] for r in records))
    report = {"schema": SCHEMA, "kind": "verify", "config": cfg.as_dict(), "summary": summary,
              "records": [{k: (_finite(v) if isinstance(v, float) else v) for k, v in r.items()} for r in records]}
    write_json(os.path.join(out_dir, "verify.json"), report)
    ok = all(s["pass"] for s in summary.values())
    return report, 0 if ok else EXIT_GATE


def cmd_continue_field(cfg: RunConfig, out_dir: str):
    cfg.validate()
    curve = cfg.make_curve()
    case = cfg.cases()[0]
    fields, _ = family_for(cfg, curve, case)
    g = cfg.grid
    if not 0 <= g["field"] < len(fields):
        raise ConfigError(f"grid.field={g['field']} but the family has {len(fields)} members")
    u = fields[g["field"]]
    if g["nx"] < 1 or g["ny"] < 1:
        raise ConfigError("empty grid")
    xs = np.linspace(g["x_min"], g["x_max"], g["nx"])
    ys = np.linspace(g["y_min"], g["y_max"], g["ny"])
    quad = quad_spec(cfg)
    rows, flagged = [], 0
    for y in ys:
        for x in xs:
            P = complex(x, y)
            try:
                r = continue_point(u, curve, case, P, quad, cfg)
                rows.append((x, y, r.value, r.correction, "ok"))
            except ReflectionError as exc:
                flagged += 1
                rows.append((x, y, None, None, type(exc).__name__))
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "field.csv"), ["x", "y", "u_continued", "correction", "status"], rows)
    if flagged:
        print(f"warning: {flagged} grid points flagged (outside validity or failed)", file=sys.stderr)
    return rows, 0


def _kernel_points(cfg: RunConfig, curve: Curve):
    if isinstance(curve, LineY0):
        z0, z, w = 0.3 + 0.4j, 0.2 - 0.3j, 0.25 + 0.35j
    elif isinstance(curve, Circle):
        a = curve.a
        z0, z = 1.2 * a * np.exp(0.3j), 0.9 * a * np.exp(0.2j)
        w = np.conj(z) + 0.01 * a
    else:
        foot = curve.boundary_sample(1, half_width=0.0)[0]
        n = curve.normal(foot)
        z0, z = foot - 0.1 * n, foot + 0.05 * n
        w = np.conj(z)
    z0 = cfg.kernel_source if cfg.kernel_source is not None else z0
    z = cfg.kernel_z if cfg.kernel_z is not None else z
    w = cfg.kernel_w if cfg.kernel_w is not None else w
    return complex(z0), complex(z), complex(w)


def cmd_kernel_dump(cfg: RunConfig, out_dir: str):
    """(case, k, |a_k|, |b_k|) plus partial-sum residuals against closed forms."""
    cfg.validate()
    curve = cfg.make_curve()
    cases = cfg.cases()
    if any(c is BoundaryCase.I for c in cases):
        raise Unsupported("case (i) has no series kernel; kernel-dump supports cases ii-v")
    z0, z, w = _kernel_points(cfg, curve)
    k_top = cfg.k_max if curve.closed_form else min(cfg.k_max, kernels.K_MAX_IMPLICIT)
    rows = []
    for case in cases:
        sa = kernels.CoefficientSequence(case, "a", curve)
        sb = kernels.CoefficientSequence(case, "b", curve)
        for k in range(1, k_top + 1):
            ak, bk = abs(sa(k, z, w, z0)), abs(sb(k, z, w, np.conj(z0)))
            ks = kernels.KernelSeries(case, curve, z0, k_max=k, tol=cfg.series_tol, strict=False)
            res_v = res_g = None
            if isinstance(curve, Circle) and case is BoundaryCase.II:
                v1, v2 = kernels.circle_V_closed(z, w, z0, np.conj(z0), curve.a)
                res_v = max(abs(ks.eval_V("V1", z, w) - v1), abs(ks.eval_V("V2", z, w) - v2))
            if isinstance(curve, LineY0):
                res_g = abs(ks.eval_reflected_G(z, w) - kernels.line_reflected_G(case, z, w, z0, np.conj(z0)))
            rows.append((case.name, k, ak, bk, res_v, res_g))
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "kernel.csv"),
              ["case", "k", "abs_a", "abs_b", "residual_V", "residual_G"], rows)
    return rows, 0


def cmd_testgen_dump(cfg: RunConfig, out_dir: str):
    cfg.validate()
    curve = cfg.make_curve()
    rows, meta = [], {}
    for case in cfg.cases():
        fields, res = family_for(cfg, curve, case)
        meta[case.name] = {"fields": len(fields), "residual": res}
        for fi, u in enumerate(fields):
            for slot, kind, n, cre, cim in u.records():
                rows.append((case.name, fi, slot, kind, n, cre, cim))
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "families.csv"), ["case", "field", "slot", "kind", "n", "re", "im"], rows)
    write_json(os.path.join(out_dir, "families.json"),
               {"schema": SCHEMA, "kind": "testgen", "curve": curve.spec(), "families": meta})
    return rows, 0


# entry point -------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI-style run configuration file")
    common.add_argument("--out", help="output directory (overrides [output] dir)")
    common.add_argument("--seed", type=int, help="random seed, unsigned 64-bit")
    common.add_argument("--case", help="i | ii | iii | iv | v | all (comma lists allowed)")
    common.add_argument("--curve", help="line | circle:a=<f> | implicit:poly=i:j:c,...|ref=x,y")
    p = argparse.ArgumentParser(prog="bireflect", description="Reflection of biharmonic functions across analytic curves.",
                                epilog=CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in (("verify", "check continuations against exact test fields"),
                      ("continue-field", "continue one field over a grid"),
                      ("kernel-dump", "tabulate series coefficients and residuals")):
        sub.add_parser(name, parents=[common], help=hlp, epilog=CONFIG_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    tg = sub.add_parser("testgen", help="test family utilities")
    tgs = tg.add_subparsers(dest="action", required=True)
    tgs.add_parser("dump", parents=[common], help="write family records", epilog=CONFIG_HELP,
                   formatter_class=argparse.RawDescriptionHelpFormatter)
    return p


def resolve_config(args) -> RunConfig:
    text = None
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    cfg = load_config(text)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.case is not None:
        cfg.case = args.case
    if args.curve is not None:
        cfg.curve = args.curve
    if args.out is not None:
        cfg.out_dir = args.out
    return cfg


COMMANDS = {"verify": cmd_verify, "continue-field": cmd_continue_field, "kernel-dump": cmd_kernel_dump}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        fn = cmd_testgen_dump if args.command == "testgen" else COMMANDS[args.command]
        result, code = fn(cfg, cfg.out_dir)
    except (ConfigError, Unsupported) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReflectionError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GATE
    if args.command == "verify":
        for name, s in result["summary"].items():
            status = "PASS" if s["pass"] else "FAIL"
            print(f"{status} case {name}: max_error={fmt(s['max_error'])} gate={fmt(s['gate'])} failures={s['failures']}")
    return code
