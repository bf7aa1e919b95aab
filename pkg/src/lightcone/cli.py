"""Command-line front end: ``lightcone <subcommand> [options]``.

Reports are JSON (or CSV per-field grids) with the resolved configuration
and the tool version embedded, so identical inputs give identical bytes.

Exit codes: 0 ok, 2 configuration error, 3 numerical degeneracy,
4 more than half of the grid masked.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, adjoint, chart, invariants, lorentz, pair, pairmap, quat
from .jet import SingularJetError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_MASK = 0, 2, 3, 4

CONFIG_KEYS = {
    "chart", "grid", "tol", "branch", "lorentz_seed", "out", "format",
    "partner", "partner_file", "trials", "seed", "order", "export", "start_root",
}
DEFAULT_GRID = {"invariants": "32x32", "pair": "16x16", "adjoint": "16x16", "pairmap": "16x16"}


class ConfigError(ValueError):
    pass


# -- configuration ---------------------------------------------------------
def load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def resolve(args) -> dict:
    """Merge config file and flags (flags win) into a validated run config."""
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cmd = args.command
    cfg.setdefault("chart", "clifford")
    cfg.setdefault("grid", DEFAULT_GRID.get(cmd, "16x16"))
    cfg.setdefault("tol", invariants.DEFAULT_TOL)
    cfg.setdefault("lorentz_seed", 0)
    cfg.setdefault("format", "json")
    if cfg["format"] not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {cfg['format']!r}")
    if cmd in ("adjoint", "pairmap"):
        cfg.setdefault("branch", "swillmore")
        if cfg["branch"] not in adjoint.BRANCHES:
            raise ConfigError(f"branch must be one of {adjoint.BRANCHES}")
    try:
        cfg["tol"] = float(cfg["tol"])
        cfg["lorentz_seed"] = int(cfg["lorentz_seed"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def build_chart(spec) -> chart.SurfaceChart:
    """A chart from a catalog name or a config table {name = ..., ...}."""
    if isinstance(spec, str):
        return chart.catalog(spec)
    if not isinstance(spec, dict) or "name" not in spec:
        raise ConfigError("chart must be a catalog name or a table with a 'name' key")
    params = {k: v for k, v in spec.items() if k != "name"}
    return chart.catalog(spec["name"], **params)


def chart_label(spec) -> str:
    return spec if isinstance(spec, str) else spec.get("name", "?")


# -- report emission -------------------------------------------------------
def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if np.isfinite(v) else str(v)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def render(report: dict, fmt: str, fields: dict, grid_uv) -> str:
    if fmt == "json":
        body = dict(report)
        body["fields"] = fields
        return json.dumps(_clean(body), sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = sorted(fields)
    w.writerow(["u", "v"] + names)
    u, v = grid_uv
    flat = {k: np.asarray(fields[k]).ravel() for k in names}
    for i, (uu, vv) in enumerate(zip(np.ravel(u), np.ravel(v))):
        w.writerow([repr(float(uu)), repr(float(vv))] + [repr(_scalar(flat[k][i])) for k in names])
    return buf.getvalue()


def _scalar(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    return float(np.real(x))


def emit(cfg: dict, text: str):
    out = cfg.get("out")
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def header(cmd: str, cfg: dict) -> dict:
    return {"tool": "lightcone", "version": __version__, "command": cmd, "config": cfg}


# -- subcommands -----------------------------------------------------------
def _setup(cfg):
    ch = build_chart(cfg["chart"])
    grid = chart.GridSpec.parse(cfg["grid"])
    T = lorentz.random_lorentz(cfg["lorentz_seed"], ch.n) if cfg["lorentz_seed"] else None
    return ch, grid, T


def cmd_invariants(cfg) -> tuple[dict, dict, tuple, int]:
    ch, grid, T = _setup(cfg)
    order = int(cfg.get("order", 6))
    frame = invariants.surface_frame(ch, grid, order)
    rep = invariants.invariants_report(frame)
    energy = grid.integrate(frame.kk().value.real, ch.domain).real
    kk, umb = invariants.mobius_metric(frame)
    summary = rep.as_dict()
    summary["willmore_energy"] = energy
    summary["passed"] = all(v < cfg["tol"] for k, v in rep.values.items()
                            if k != "willmore" and k != "gauss_map_harmonic")
    summary["willmore_surface"] = rep["willmore"] < cfg["tol"]
    fields = {
        "mobius_density": kk,
        "umbilic": umb,
        "willmore": invariants.willmore_field(frame),
        "schwarzian_re": frame.s.value.real,
        "schwarzian_im": frame.s.value.imag,
    }
    out = header("invariants", cfg)
    out["summary"] = summary
    if T is not None:
        moved = invariants.surface_frame(ch, grid, order, T)
        e2 = grid.integrate(moved.kk().value.real, ch.domain).real
        out["mobius_deltas"] = {
            "mobius_density": invariants.sup(moved.kk().value - frame.kk().value),
            "willmore": abs(invariants.willmore_residual(moved) - rep["willmore"]),
            "willmore_energy": abs(e2 - energy),
        }
    return out, fields, grid.points(ch.domain), EXIT_OK


def _load_partner(cfg, ch, grid, u, v, order):
    if cfg.get("partner_file"):
        other = read_export(cfg["partner_file"])
        if other.domain.as_list() != ch.domain.as_list():
            raise ConfigError("exported partner lives on a different domain")
        return chart.light_cone_lift(other, u, v, order)
    if cfg.get("partner"):
        other = build_chart(cfg["partner"]).embedded(ch.n)
        return chart.light_cone_lift(other, u, v, order)
    return None


def cmd_pair(cfg):
    ch, grid, T = _setup(cfg)
    order = int(cfg.get("order", 6))
    if T is not None:
        ch = ch.transformed(T)
    u, v = grid.points(ch.domain)
    frame = invariants.frame_at(chart.lift_chart(ch, u, v, order))
    raw = _load_partner(cfg, ch, grid, u, v, order - 1)
    if raw is None:
        raise ConfigError("pair needs --partner CHART or --partner-file EXPORT")
    Yh = pair.normalize_pair(frame.Y, raw)
    pp = pair.pair_invariants(frame, Yh)
    th6, rh6 = pair.bivector_invariants(frame.Y, Yh)
    dth, drh = pair.tangent_sphere_check(frame, Yh, pp)
    th, rh = pp.theta.value, pp.rho.value
    tol = cfg["tol"]
    fields = {
        "theta_re": th.real, "theta_im": th.imag, "rho_re": rh.real, "rho_im": rh.imag,
        "touch": np.abs(rh) < tol, "cotouch": np.abs(th) < tol,
    }
    out = header("pair", cfg)
    out["summary"] = {
        "bivector_agreement": float(max(np.max(np.abs(th6 - th)), np.max(np.abs(rh6 - rh)))),
        "fundamental": pair.fundamental_residual(frame, pp),
        "reconstruction": invariants.sup(pp.reconstruction(frame) - Yh),
        "tangent_sphere": float(np.max(dth + drh)),
        "theta_max": float(np.max(np.abs(th))),
        "rho_max": float(np.max(np.abs(rh))),
        "touch_points": int(fields["touch"].sum()),
        "cotouch_points": int(fields["cotouch"].sum()),
    }
    return out, fields, (u, v), EXIT_OK


def _adjoint_run(cfg):
    ch, grid, T = _setup(cfg)
    order = int(cfg.get("order", adjoint.ADJOINT_ORDER))
    run = adjoint.adjoint_transform(ch, grid, cfg["branch"], order, T, tol=cfg["tol"],
                                    start=int(cfg.get("start_root", 0)))
    return ch, grid, T, run


def export_surface(run, domain: chart.Domain, grid: chart.GridSpec) -> dict:
    x = adjoint.affine_points(run.adjoint.Ytilde)
    return {
        "nu": grid.nu,
        "nv": grid.nv,
        "domain": domain.as_list(),
        "periodic": [domain.periodic_u, domain.periodic_v],
        "points": x.reshape(-1, x.shape[-1]).tolist(),
    }


def read_export(path) -> chart.SurfaceChart:
    try:
        data = json.loads(Path(path).read_text())
        nu, nv = int(data["nu"]), int(data["nv"])
        pts = np.asarray(data["points"], dtype=float).reshape(nu, nv, -1)
        dom = chart.Domain(*map(float, data["domain"]), *map(bool, data.get("periodic", [False, False])))
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"cannot read exported surface {path}: {exc}") from None
    return chart.fit_graph(pts, dom)


def round_trip(export: dict, run, grid, cfg):
    """Adjoint of the re-ingested adjoint, compared with the original surface.

    Returns the projective distance, or a string saying why the exported
    grid could not be re-ingested (non-periodic domain, or a trigonometric
    fit that is not conformal at this resolution).
    """
    dom = chart.Domain(*export["domain"], *export["periodic"])
    if not (dom.periodic_u and dom.periodic_v):
        return "unavailable: re-ingestion needs a doubly periodic domain"
    pts = np.asarray(export["points"]).reshape(export["nu"], export["nv"], -1)
    try:
        again = chart.fit_graph(pts, dom)
        run2 = adjoint.adjoint_transform(again, grid, cfg["branch"], run.frame.Y.order + 1,
                                         tol=max(cfg["tol"], 1e-7))
    except (chart.ChartError, adjoint.NotWillmoreError, SingularJetError) as exc:
        return f"unavailable: {exc}"
    return adjoint.projective_distance(run2.adjoint.Ytilde, run.frame.Y,
                                       run.adjoint.mask | run2.adjoint.mask)


def cmd_adjoint(cfg):
    ch, grid, T, run = _adjoint_run(cfg)
    dom = ch.domain
    adj = run.adjoint
    mf = run.mufield
    mu = adj.mu.value
    fields = {
        "mu_re": mu.real, "mu_im": mu.imag,
        "sigma": adj.sigma.value.real, "mask": adj.mask,
        "branch_label": mf.labels,
    }
    if mf.roots is not None:
        fields.update({
            "root1_re": mf.roots[0].real, "root1_im": mf.roots[0].imag,
            "root2_re": mf.roots[1].real, "root2_im": mf.roots[1].imag,
            "branch_merge": mf.flagged,
        })
    if mf.discriminant is not None:
        fields["discriminant_abs"] = np.abs(mf.discriminant)
    out = header("adjoint", cfg)
    summary = run.report.as_dict()
    summary["branch_used"] = mf.branch
    summary["base_willmore"] = run.willmore
    exp = export_surface(run, dom, grid)
    if cfg.get("export"):
        Path(cfg["export"]).write_text(json.dumps(exp, sort_keys=True) + "\n")
    summary["round_trip_export"] = round_trip(exp, run, grid, cfg)
    if T is not None:
        base = adjoint.adjoint_transform(ch, grid, cfg["branch"], run.frame.Y.order + 1, tol=cfg["tol"])
        moved = lorentz.apply(T, base.adjoint.Ytilde)
        summary["mobius_commutation"] = adjoint.projective_distance(
            moved, adj.Ytilde, base.adjoint.mask | adj.mask)
    out["summary"] = summary
    frac = run.report.counts["unmasked_fraction"]
    code = EXIT_MASK if frac < 0.5 else EXIT_OK
    return out, fields, grid.points(ch.domain if T is None else ch.transformed(T).domain), code


def cmd_pairmap(cfg):
    ch, grid, T = _setup(cfg)
    if cfg.get("partner") or cfg.get("partner_file"):
        order = int(cfg.get("order", 6))
        if T is not None:
            ch = ch.transformed(T)
        u, v = grid.points(ch.domain)
        frame = invariants.frame_at(chart.lift_chart(ch, u, v, order))
        Yh = pair.normalize_pair(frame.Y, _load_partner(cfg, ch, grid, u, v, order - 1))
        mask = np.zeros(u.shape, dtype=bool)
    else:
        ch, grid, T, run = _adjoint_run(cfg)
        frame, Yh, mask = run.frame, run.adjoint.Yhat, run.adjoint.mask
        u, v = grid.points(ch.domain)
    pp = pair.pair_invariants(frame, Yh)
    pm = pairmap.pairmap_fundamental(frame.Y, Yh)
    th, rh = pp.theta.value, pp.rho.value
    energy = pairmap.pair_energy(rh, grid, ch.domain)
    fields = {
        "theta_re": th.real, "theta_im": th.imag, "rho_re": rh.real, "rho_im": rh.imag,
        "energy_density": 2.0 * (rh + np.conj(rh)).real,
        "harmonic_residual": pm.tangential_defect,
    }
    keep = ~mask
    out = header("pairmap", cfg)
    out["summary"] = {
        "hh": float(np.max(np.abs(pm.hh + 1.0)[keep])),
        "hz_hz_vs_theta": float(np.max(np.abs(pm.hz_hz - th)[keep])),
        "hz_hzb_vs_rho": float(np.max(np.abs(pm.hz_hzb - 0.5 * (rh + np.conj(rh)))[keep])),
        "theta": float(np.max(np.abs(th)[keep])),
        "energy": float(energy.real),
        "energy_imag": float(energy.imag),
        "harmonic_residual": float(np.max(pm.tangential_defect[keep])),
    }
    return out, fields, (u, v), EXIT_OK


def cmd_quat(cfg):
    trials = int(cfg.get("trials", 1000))
    seed = int(cfg.get("seed", 0))
    res = quat.equivalence_check(trials, seed, tol=cfg["tol"])
    out = header("quat-check", cfg)
    out["summary"] = res
    return out, {}, (np.zeros(0), np.zeros(0)), EXIT_OK


def cmd_verify_all(cfg):
    from .verify import run_all

    results = run_all()
    out = header("verify-all", cfg)
    out["summary"] = {r["name"]: r for r in results}
    code = EXIT_OK if all(r["passed"] for r in results) else 1
    for r in results:
        print(f"[{'PASS' if r['passed'] else 'FAIL'}] {r['name']}: {r['detail']}", file=sys.stderr)
    return out, {}, (np.zeros(0), np.zeros(0)), code


COMMANDS = {
    "invariants": cmd_invariants,
    "pair": cmd_pair,
    "adjoint": cmd_adjoint,
    "pairmap": cmd_pairmap,
    "quat-check": cmd_quat,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lightcone", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="TOML run configuration")
        s.add_argument("--out", help="report path (default: stdout)")
        s.add_argument("--format", choices=["json", "csv"])
        s.add_argument("--tol", type=float)
        if name == "quat-check":
            s.add_argument("--trials", type=int)
            s.add_argument("--seed", type=int)
            continue
        if name == "verify-all":
            continue
        s.add_argument("--chart", help="catalog chart name")
        s.add_argument("--grid", help="sample lattice, e.g. 32x32")
        s.add_argument("--lorentz-seed", dest="lorentz_seed", type=int)
        s.add_argument("--order", type=int, help="jet order of the chart evaluation")
        if name in ("adjoint", "pairmap"):
            s.add_argument("--branch", choices=list(adjoint.BRANCHES))
            s.add_argument("--start-root", dest="start_root", type=int, choices=[0, 1])
        if name == "adjoint":
            s.add_argument("--export", help="write the adjoint surface grid (JSON)")
        if name in ("pair", "pairmap"):
            s.add_argument("--partner", help="second catalog chart")
            s.add_argument("--partner-file", dest="partner_file", help="exported surface grid")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        report, fields, uv, code = COMMANDS[args.command](cfg)
        emit(cfg, render(report, cfg["format"], fields, uv))
    except (ConfigError, chart.ChartError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularJetError, invariants.FrameConstructionError, adjoint.NotWillmoreError,
            adjoint.NotSWillmoreError, pair.ContactElementError) as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    if code == EXIT_MASK:
        print("warning: more than half of the grid is masked", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
