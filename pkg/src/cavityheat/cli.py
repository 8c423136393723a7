"""Batch command-line front end.

Subcommands compose through files so that every artifact carries its
run manifest: ``coeffs`` (surface -> coefficient report JSON),
``modes`` (ball spectra -> CSV + sidecar), ``trace`` (modes + t-grid ->
CSV), ``fit`` (trace CSV -> fit JSON), ``casimir`` (modes + coefficient
JSON -> remainder-scan report) and ``verify`` (exact table relations
plus curvature-identity residuals).

Exit codes: 0 success; 1 usage error; 2 numerical-tolerance failure,
with machine-readable diagnostics on standard error.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import FitConfig, fit_coefficients
from .casimir import (
    RegulatorKind,
    divergence_prediction,
    mode_count,
    phi_expansion,
    regulator_integral,
    remainder_scan,
)
from .coefficients import (
    a3_local,
    a3_local_kappa_variant,
    compute_moments,
    delta_a3,
    em_coefficients,
    form_coefficients,
    gauss_bonnet_residual,
)
from .geometry import QuadratureSpec, ellipsoid, sphere, torus
from .geometry.identities import curvature_identity_residuals
from .spectrum import ModeList, em_modes, form_modes, heat_trace_samples
from .surfacefile import load_surface
from .tables import consistency_report

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1 (argparse defaults to 2, which this tool
    # reserves for numerical-tolerance failures)
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit1(message)


class SystemExit1(Exception):
    pass


class ToleranceFailure(Exception):
    """Numerical check failed; carries machine-readable diagnostics."""

    def __init__(self, message, diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


def _sha256(path):
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def _manifest(args, inputs=(), t0=None):
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k != "func" and v is not None}
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "cavityheat", "version": __version__},
        "command": args._command,
        "config": cfg,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "timestamp_utc": datetime.datetime.now(datetime.timezone.utc)
        .isoformat(timespec="seconds"),
        "wall_time_s": None if t0 is None else round(time.time() - t0, 3),
    }


def _write_json(path, payload):
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


def _out_dir(args):
    out = Path(getattr(args, "out", ".") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _surface_from_args(args, parser):
    spec = args.surface
    if spec == "sphere":
        return sphere(args.radius)
    if spec == "ellipsoid":
        a, b, c = args.axes
        return ellipsoid(a, b, c)
    if spec == "torus":
        return torus(args.ring_radius, args.tube_radius)
    if spec.startswith("file:"):
        return load_surface(spec[5:]), Path(spec[5:])
    parser.error(f"unknown surface {spec!r}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_coeffs(args, parser):
    t0 = time.time()
    got = _surface_from_args(args, parser)
    model, inputs = (got if isinstance(got, tuple) else (got, None))
    quad = QuadratureSpec(order=args.quad_order)
    moments = compute_moments(model, quad)
    topo = model.topology

    em = em_coefficients(moments, topo)
    forms = {f"p{p}": form_coefficients(p, moments).as_dict() for p in range(4)}
    checks = consistency_report(topo)
    gb = gauss_bonnet_residual(moments, topo)
    gb_tol = max(1e-8, 10.0 * moments.detL.error)
    a3l = a3_local(moments)
    kappa = a3_local_kappa_variant(moments)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "surface": {"name": model.name,
                    "components": topo.components,
                    "genera": list(topo.genera)},
        "quadrature": {"order": quad.order,
                       "periodic_factor": quad.periodic_factor},
        "moments": moments.as_dict(),
        "em": em.as_dict(),
        "forms": forms,
        "consistency": {c.name: c.ok for c in checks},
        "gauss_bonnet": {"residual": gb.value, "quadrature_error": gb.error,
                         "tolerance": gb_tol, "ok": abs(gb.value) <= gb_tol},
        "a3_local": {"value": a3l.value, "error": a3l.error},
        "a3_local_kappa_variant": {
            "value": kappa.value, "error": kappa.error,
            "flag": "alternative printed normalisation; comparison only, "
                    "never substituted"},
        "phi_expansion": phi_expansion(em.values).as_dict(),
    }
    if topo.connected_boundary:
        d3 = delta_a3(topo, a3l.value)
        mc = mode_count(a3l.value, topo.genera[0])
        payload["delta_a3"] = {"value": d3.value,
                               "nonlocal_sum": str(d3.nonlocal_sum)}
        payload["mode_count"] = mc.as_dict()
    payload["manifest"] = _manifest(args, [inputs] if inputs else [], t0)

    _write_json(_out_dir(args) / "coeffs.json", payload)
    failed = [c.name for c in checks if not c.ok]
    if failed:
        raise ToleranceFailure("exact consistency failure",
                               {"failed_relations": failed})
    if not payload["gauss_bonnet"]["ok"]:
        raise ToleranceFailure(
            "total-curvature residual beyond tolerance",
            {"gauss_bonnet": payload["gauss_bonnet"],
             "hint": "declared topology may not match the surface"})
    return 0


_P_CHOICES = ("em", "0", "1", "2", "3")


def _cmd_modes(args, parser):
    t0 = time.time()
    p = args.p
    if p == "em":
        modes = em_modes(args.omega_max, args.radius)
    else:
        modes = form_modes(int(p), args.omega_max, args.radius)
    if args.format == "json":
        out = _out_dir(args) / f"modes_{p}.json"
        rows = [{"family": str(f), "l": int(l), "m": int(m),
                 "multiplicity": int(mu), "lambda": float(lam)}
                for f, l, m, mu, lam in zip(modes.family, modes.l, modes.m,
                                            modes.multiplicity, modes.lam)]
        _write_json(out, {"schema_version": SCHEMA_VERSION,
                          "radius": modes.radius,
                          "omega_max": modes.omega_max, "modes": rows})
    else:
        out = _out_dir(args) / f"modes_{p}.csv"
        modes.to_csv(out)
        print(f"wrote {out}")
    _write_json(_out_dir(args) / f"modes_{p}.manifest.json",
                {**_manifest(args, [], t0),
                 "modes": {"rows": len(modes), "count": modes.count,
                           "families": modes.families_present()}})
    return 0


def _cmd_trace(args, parser):
    t0 = time.time()
    modes = ModeList.from_csv(args.modes)
    ts = np.geomspace(args.t_lo, args.t_hi, args.t_points)
    t, K, bound = heat_trace_samples(modes, ts, rtol=args.rtol)
    if args.format == "json":
        out = _out_dir(args) / "trace.json"
        _write_json(out, {"schema_version": SCHEMA_VERSION,
                          "samples": [{"t": float(a), "K": float(b),
                                       "bound": float(c)}
                                      for a, b, c in zip(t, K, bound)]})
    else:
        out = _out_dir(args) / "trace.csv"
        with open(out, "w") as fh:
            fh.write("t,K,bound\n")
            for row in zip(t, K, bound):
                fh.write(",".join(repr(float(x)) for x in row) + "\n")
        print(f"wrote {out}")
    _write_json(_out_dir(args) / "trace.manifest.json",
                _manifest(args, [args.modes], t0))
    return 0


def _cmd_fit(args, parser):
    t0 = time.time()
    rows = np.genfromtxt(args.trace, delimiter=",", names=True)
    t = np.atleast_1d(rows["t"])
    keep = np.ones(len(t), dtype=bool)
    if args.t_lo is not None:
        keep &= t >= args.t_lo
    if args.t_hi is not None:
        keep &= t <= args.t_hi
    samples = (t[keep], np.atleast_1d(rows["K"])[keep],
               np.atleast_1d(rows["bound"])[keep])
    pinned = {-1.0: 0.0} if args.pin_a1_zero else {}
    config = FitConfig(t_lo=float(samples[0].min()),
                       t_hi=float(samples[0].max()),
                       n_points=len(samples[0]), pinned=pinned)
    result = fit_coefficients(samples, config)
    payload = {"schema_version": SCHEMA_VERSION,
               "fit": result.as_dict(),
               "a_n": {f"a{n}": result.a(n) for n in range(6)},
               "manifest": _manifest(args, [args.trace], t0)}
    _write_json(_out_dir(args) / "fit.json", payload)
    model = sum(result.value(e) * samples[0] ** e for e in config.exponents)
    with open(_out_dir(args) / "fit_curve.csv", "w") as fh:
        fh.write("t,K,model\n")
        for row in zip(samples[0], samples[1], model):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    print(f"wrote {_out_dir(args) / 'fit_curve.csv'}")
    if result.condition_number > 1e6:
        print(f"note: condition number {result.condition_number:.3g}",
              file=sys.stderr)
    return 0


def _cmd_casimir(args, parser):
    t0 = time.time()
    modes = ModeList.from_csv(args.modes)
    coeffs_doc = json.loads(Path(args.coeffs).read_text())
    a = coeffs_doc["em"]["values"]
    kind = RegulatorKind(args.regulator)
    pred = divergence_prediction(a, kind)
    gammas = np.geomspace(args.gamma_lo, args.gamma_hi, args.gamma_points)
    scan = remainder_scan(modes, pred, gammas, z_threshold=args.z_threshold)

    out = _out_dir(args)
    with open(out / "scan.csv", "w") as fh:
        fh.write("gamma,S,prediction,remainder\n")
        for row in zip(scan.gammas, scan.values, scan.prediction,
                       scan.remainder):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    print(f"wrote {out / 'scan.csv'}")

    integrals = {}
    for n in range(5):
        ri = regulator_integral(n, args.gamma_lo)
        integrals[str(n)] = {"numeric": ri.numeric, "asymptote": ri.asymptote}
    payload = {"schema_version": SCHEMA_VERSION,
               "prediction": pred.as_dict(),
               "scan": scan.as_dict(),
               "regulator_integrals": integrals,
               "manifest": _manifest(args, [args.modes, args.coeffs], t0)}
    _write_json(out / "casimir.json", payload)
    if not scan.finite:
        raise ToleranceFailure(
            "half-power component incompatible with a finite limit",
            {"half_power": list(scan.half_power), "z": scan.z_half})
    return 0


def _cmd_verify(args, parser):
    t0 = time.time()
    rng = np.random.default_rng(args.seed)
    report = {"exact_relations": {}, "identity_residuals": {},
              "gauss_bonnet": {}}
    failures = []

    for topo_name, model in (("sphere", sphere(1.0)),
                             ("torus", torus(2.0, 0.5))):
        for check in consistency_report(model.topology):
            key = f"{topo_name}:{check.name}"
            report["exact_relations"][key] = check.ok
            if not check.ok:
                failures.append(key)

    surfaces = {"ellipsoid": (ellipsoid(1.0, 1.3, 1.7), (0.4, 2.7)),
                "torus": (torus(2.0, 0.5), (0.0, 2 * math.pi))}
    for sname, (model, u_win) in surfaces.items():
        worst = 0.0
        for _ in range(args.points):
            u = rng.uniform(*u_win)
            v = rng.uniform(0.0, 2 * math.pi)
            res = curvature_identity_residuals(model.charts[0], u, v)
            worst = max(worst, res.max_residual)
        report["identity_residuals"][sname] = worst
        if worst > args.identity_tol:
            failures.append(f"identity:{sname}")

    for model in (sphere(1.0), ellipsoid(1.0, 1.3, 1.7), torus(2.0, 0.5)):
        moments = compute_moments(model, QuadratureSpec(order=args.quad_order))
        gb = gauss_bonnet_residual(moments, model.topology)
        report["gauss_bonnet"][model.name] = gb.value
        if abs(gb.value) > 1e-8:
            failures.append(f"gauss_bonnet:{model.name}")

    payload = {"schema_version": SCHEMA_VERSION, "report": report,
               "failures": failures,
               "manifest": _manifest(args, [], t0)}
    _write_json(_out_dir(args) / "verify.json", payload)
    for key, ok in report["exact_relations"].items():
        if not ok:
            print(f"FAIL {key}")
    print(f"exact relations: "
          f"{sum(report['exact_relations'].values())}"
          f"/{len(report['exact_relations'])} ok")
    print(f"identity residuals: "
          + ", ".join(f"{k}={v:.2e}" for k, v in
                      report["identity_residuals"].items()))
    if failures:
        raise ToleranceFailure("verification failures", {"failures": failures})
    return 0


# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="cavityheat",
                     description="heat-trace coefficients, ball spectra and "
                                 "Casimir divergence structure for smooth "
                                 "cavities")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_out(p):
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("coeffs", help="curvature-integral coefficients")
    p.add_argument("--surface", default="sphere",
                   help="sphere | ellipsoid | torus | file:PATH")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--axes", type=float, nargs=3, default=(1.0, 1.3, 1.7),
                   metavar=("A", "B", "C"))
    p.add_argument("--ring-radius", type=float, default=2.0)
    p.add_argument("--tube-radius", type=float, default=0.5)
    p.add_argument("--quad-order", type=int, default=32)
    add_out(p)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("modes", help="enumerate ball spectra to CSV")
    p.add_argument("--p", choices=_P_CHOICES, default="em")
    p.add_argument("--omega-max", type=float, default=60.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_out(p)
    p.set_defaults(func=_cmd_modes)

    p = sub.add_parser("trace", help="heat-trace samples from a mode CSV")
    p.add_argument("--modes", required=True)
    p.add_argument("--t-lo", type=float, default=0.006)
    p.add_argument("--t-hi", type=float, default=0.06)
    p.add_argument("--t-points", type=int, default=40)
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_out(p)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("fit", help="coefficients from a trace CSV")
    p.add_argument("--trace", required=True)
    p.add_argument("--t-lo", type=float)
    p.add_argument("--t-hi", type=float)
    p.add_argument("--pin-a1-zero", action="store_true",
                   help="pin the t^-1 coefficient to 0")
    add_out(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("casimir", help="regulated-sum remainder scan")
    p.add_argument("--modes", required=True)
    p.add_argument("--coeffs", required=True,
                   help="coefficient report JSON from 'coeffs'")
    p.add_argument("--regulator", choices=("heat", "sqrt"), default="heat")
    p.add_argument("--gamma-lo", type=float, default=1e-3)
    p.add_argument("--gamma-hi", type=float, default=5e-2)
    p.add_argument("--gamma-points", type=int, default=40)
    p.add_argument("--z-threshold", type=float, default=2.0,
                   help="half-power significance treated as a violation")
    add_out(p)
    p.set_defaults(func=_cmd_casimir)

    p = sub.add_parser("verify", help="exact relations and identity residuals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--quad-order", type=int, default=64)
    p.add_argument("--identity-tol", type=float, default=1e-6)
    add_out(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
        args._command = ["cavityheat"] + argv
        return args.func(args, parser)
    except SystemExit1 as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ToleranceFailure as err:
        print(json.dumps({"error": str(err), "diagnostics": err.diagnostics},
                         sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
