"""Command-line front end: JSON configs, figure recipes, CSV/JSON export."""

import argparse
import csv
import datetime
import hashlib
import json
import sys
from importlib import resources

import numpy as np

from . import __version__
from .coupled_mode import IsolationBand, ModeGraph, mode_sparams
from .errors import ConfigError, ParamisoError
from .oracle import TransientRun, power_spectrum, simulate
from .spectral import netlist_sparams, cascade_isolators
from .squid import SquidParams
from .synthesis import FilterSpec, capacitive_ladder, synthesize
from .tuner import (IsolatorDesign, PumpPlan, TuneObjective, evaluate_plan,
                    optimize, sweep_coupled, sweep_plan, sweep_two_squid)

MODES = ("synth", "sparams", "sweep", "optimize", "oracle", "cascade",
         "coupled-mode")


# --- config handling ----------------------------------------------------------

def _require(cfg, key, kind=None, where="config"):
    if key not in cfg:
        raise ConfigError(key, f"missing required field (in {where})")
    val = cfg[key]
    if kind is not None:
        try:
            val = kind(val)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected {kind.__name__}, got {val!r}")
    if isinstance(val, float) and (not np.isfinite(val)):
        raise ConfigError(key, "must be finite")
    return val


def _filter_spec(cfg):
    f = _require(cfg, "filter", dict)
    spec = FilterSpec(order=_require(f, "order", int, "filter"),
                      center_freq=_require(f, "center_freq_hz", float, "filter"),
                      bandwidth=_require(f, "bandwidth_hz", float, "filter"),
                      ripple_db=_require(f, "ripple_db", float, "filter"),
                      z0=float(f.get("z0_ohm", 50.0)))
    if spec.center_freq <= 0 or spec.bandwidth <= 0:
        raise ConfigError("filter", "frequencies must be positive")
    return spec


def _design(cfg):
    spec = _filter_spec(cfg)
    pole_z = cfg.get("pole_impedances_ohm")
    synth = synthesize(spec, pole_z)
    beta = np.deg2rad(_require(cfg, "dc_flux_deg", float))
    return IsolatorDesign(synth=synth, beta=beta,
                          squid_fraction=float(cfg.get("squid_fraction", 1.0)),
                          style=cfg.get("netlist_style", "inverter"))


def _plan(cfg, n):
    p = _require(cfg, "pumps", dict)
    alphas = np.deg2rad(np.atleast_1d(_require(p, "alphas_deg", None, "pumps")))
    phases = np.deg2rad(np.atleast_1d(_require(p, "phases_deg", None, "pumps")))
    fm = _require(p, "pump_freq_hz", float, "pumps")
    if fm <= 0:
        raise ConfigError("pumps.pump_freq_hz", "must be positive")
    if len(alphas) == 1:
        alphas = np.repeat(alphas, n)
    if len(phases) != n or len(alphas) != n:
        raise ConfigError("pumps", f"need {n} amplitudes and phases")
    return PumpPlan(alphas=tuple(alphas), phases=tuple(phases),
                    pump_freqs=(2 * np.pi * fm,) * n)


def _grid(cfg):
    g = _require(cfg, "grid", dict)
    fmin = _require(g, "fmin_hz", float, "grid")
    fmax = _require(g, "fmax_hz", float, "grid")
    pts = int(g.get("points", 201))
    if not 0 < fmin < fmax:
        raise ConfigError("grid", "need 0 < fmin_hz < fmax_hz")
    if pts < 2:
        raise ConfigError("grid.points", "need at least 2 points")
    return np.linspace(fmin, fmax, pts)


def load_recipe(name):
    """Bundled figure-reproduction configuration."""
    ref = resources.files("paramiso").joinpath(f"recipes/{name}.json")
    if not ref.is_file():
        raise ConfigError("recipe", f"unknown recipe '{name}'")
    return json.loads(ref.read_text())


# --- mode runners --------------------------------------------------------------

def run_synth(cfg, seed):
    spec = _filter_spec(cfg)
    synth = synthesize(spec, cfg.get("pole_impedances_ohm"))
    lad = capacitive_ladder(synth)
    payload = {
        "g": list(synth.g),
        "fractional_bw": synth.w_bar,
        "pole_impedances_ohm": list(synth.pole_impedances),
        "inverters_s": list(synth.inverters),
        "capacitive_ladder": {
            "c_in_f": lad.c_in, "c_out_f": lad.c_out,
            "c_couple_f": list(lad.c_couple),
            "node_caps_f": list(lad.node_caps),
            "pole_inds_h": list(lad.pole_inds)},
    }
    header = ["pole", "impedance_ohm", "inverter_in_s", "cap_f", "ind_h"]
    rows = [[k + 1, synth.pole_impedances[k], synth.inverters[k],
             lad.node_caps[k], lad.pole_inds[k]] for k in range(spec.order)]
    return header, rows, payload


def run_sparams(cfg, seed):
    design = _design(cfg)
    plan = _plan(cfg, design.synth.spec.order)
    freqs = _grid(cfg)
    nsb = int(cfg.get("n_sidebands", 4))
    net = design.netlist(plan)
    header = ["freq_hz", "s11_00_db", "s21_00_db", "s12_00_db", "s22_00_db"]
    offsets = range(-nsb, nsb + 1)
    header += [f"s21_{n}{p}_db" for n in offsets for p in offsets]
    rows = []
    for f in freqs:
        sp = netlist_sparams(net, 2 * np.pi * f, nsb)
        row = [f] + [_db(abs(sp.entry(*ij))) for ij in
                     ((1, 1), (2, 1), (1, 2), (2, 2))]
        row += [_db(abs(sp.entry(2, 1, n, p))) for n in offsets for p in offsets]
        rows.append(row)
    payload = {"columns": header, "rows": rows}
    return header, rows, payload


def run_sweep(cfg, seed):
    sw = _require(cfg, "sweep", dict)
    kind = _require(sw, "kind", str, "sweep")
    axes = {k: _axis_values(v, k) for k, v in _require(sw, "axes", dict,
                                                       "sweep").items()}
    if kind == "plan":
        design = _design(cfg)
        plan = _plan(cfg, design.synth.spec.order)
        freqs = _grid(cfg)
        res = sweep_plan(design, plan, axes, freqs,
                         int(cfg.get("n_sidebands", 3)))
        value_cols = ["d_db", "il_db", "rl_db"]
    elif kind == "coupled":
        graph = _coupled_graph(cfg)
        res = sweep_coupled(graph, axes)
        value_cols = ["fwd_db", "rev_db", "d_db"]
    elif kind == "two_squid":
        sq = _require(cfg, "squid", dict)
        base = SquidParams(
            ic0=_require(sq, "ic0_a", float, "squid"),
            beta=np.deg2rad(_require(sq, "dc_flux_deg", float, "squid")),
            alpha=np.deg2rad(_require(sq, "alpha_deg", float, "squid")),
            pump_freq=2 * np.pi * _require(sq, "pump_freq_hz", float, "squid"))
        res = sweep_two_squid(base, base,
                              _axis_values(sw["axes"]["coupling_c"], "coupling_c"),
                              _axis_values(sw["axes"]["phi_d"], "phi_d"),
                              _require(cfg, "freq_hz", float),
                              int(cfg.get("n_sidebands", 3)))
        value_cols = ["d_db"]
    else:
        raise ConfigError("sweep.kind", f"unknown kind '{kind}'")
    names = list(res["axes"])
    header = names + value_cols
    rows = []
    shape = tuple(len(res["axes"][n]) for n in names)
    for idx in np.ndindex(shape):
        row = [res["axes"][n][idx[i]] for i, n in enumerate(names)]
        row += [res[c][idx] for c in value_cols]
        rows.append(row)
    payload = {"axes": {k: list(v) for k, v in res["axes"].items()},
               **{c: np.asarray(res[c]).tolist() for c in value_cols}}
    return header, rows, payload


def run_optimize(cfg, seed):
    design = _design(cfg)
    plan = _plan(cfg, design.synth.spec.order)
    obj_cfg = _require(cfg, "objective", dict)
    band = IsolationBand(
        center=2 * np.pi * _require(obj_cfg, "band_center_hz", float, "objective"),
        iso_bw=2 * np.pi * _require(obj_cfg, "iso_bw_hz", float, "objective"),
        filter_bw=2 * np.pi * design.synth.spec.bandwidth)
    objective = TuneObjective(
        band=band,
        min_directionality_db=float(obj_cfg.get("min_directionality_db", 15.0)),
        max_insertion_loss_db=float(obj_cfg.get("max_insertion_loss_db", 5.0)),
        min_return_loss_db=float(obj_cfg.get("min_return_loss_db", 10.0)))
    fc = band.center / (2 * np.pi)
    half = band.iso_bw / (4 * np.pi)
    freqs = np.linspace(fc - half, fc + half, int(cfg.get("band_points", 41)))
    result = optimize(design, plan, objective, freqs,
                      n_sidebands=int(cfg.get("n_sidebands", 3)),
                      budget=int(cfg.get("budget", 200)),
                      restarts=int(cfg.get("restarts", 8)), seed=seed)
    m = result.metrics
    payload = {
        "plan": {"alphas_deg": list(np.rad2deg(result.plan.alphas)),
                 "phases_deg": list(np.rad2deg(result.plan.phases)),
                 "pump_freq_hz": result.plan.pump_freq / (2 * np.pi)},
        "metrics": {"min_d_db": m.min_d_db, "max_il_db": m.max_il_db,
                    "min_rl_db": m.min_rl_db},
        "feasible": result.feasible,
        "score_trace": list(result.trace),
    }
    header = ["freq_hz", "d_db", "il_db", "rl_db"]
    rows = [[m.freqs[i], m.d_db[i], m.il_db[i], m.rl_db[i]]
            for i in range(len(m.freqs))]
    return header, rows, payload


def run_oracle(cfg, seed):
    design = _design(cfg)
    if design.style != "capacitive":
        design = IsolatorDesign(synth=design.synth, beta=design.beta,
                                squid_fraction=design.squid_fraction,
                                style="capacitive")
    plan = _plan(cfg, design.synth.spec.order)
    d = _require(cfg, "drive", dict)
    run = TransientRun(
        netlist=design.netlist(plan),
        drive_port=_require(d, "port", int, "drive"),
        drive_freq=_require(d, "freq_hz", float, "drive"),
        flux_exact=bool(cfg.get("flux_exact", True)),
        voltage_model=cfg.get("voltage_model", "flux"))
    res = simulate(run)
    spec = power_spectrum(res, port=2 if run.drive_port == 1 else 1)
    keep = spec.freqs <= 2.5 * run.drive_freq
    header = ["freq_hz", "power_db"]
    rows = list(zip(spec.freqs[keep], spec.power_db[keep]))
    payload = {"resolution_bw_hz": spec.resolution_bw,
               "n_rows": int(keep.sum())}
    return header, rows, payload


def run_cascade(cfg, seed):
    stages = []
    for key in ("stage_a", "stage_b"):
        sc = _require(cfg, key, dict)
        design = _design(sc)
        plan = _plan(sc, design.synth.spec.order)
        stages.append(design.netlist(plan))
    freqs = _grid(cfg)
    nsb = int(cfg.get("n_sidebands", 3))
    header = ["freq_hz", "d_a_db", "d_b_db", "d_total_db", "s21_total_db"]
    rows = []
    for f in freqs:
        w = 2 * np.pi * f
        sp_a = netlist_sparams(stages[0], w, nsb)
        sp_b = netlist_sparams(stages[1], w, nsb)
        tot = cascade_isolators(sp_a, sp_b)
        da = _db(abs(sp_a.entry(2, 1)) / abs(sp_a.entry(1, 2)))
        dbv = _db(abs(sp_b.entry(2, 1)) / abs(sp_b.entry(1, 2)))
        dt = _db(abs(tot.entry(2, 1)) / abs(tot.entry(1, 2)))
        rows.append([f, da, dbv, dt, _db(abs(tot.entry(2, 1)))])
    payload = {"columns": header, "rows": rows}
    return header, rows, payload


def run_coupled_mode(cfg, seed):
    graph = _coupled_graph(cfg)
    freqs = _grid(cfg)
    header = ["freq_hz", "fwd_db", "rev_db", "refl_db", "d_db"]
    rows = []
    for f in freqs:
        s = mode_sparams(graph, 2 * np.pi * f)
        fwd, rev = _db(abs(s[1, 0])), _db(abs(s[0, 1]))
        rows.append([f, fwd, rev, _db(abs(s[0, 0])), fwd - rev])
    payload = {"columns": header, "rows": rows}
    return header, rows, payload


def _coupled_graph(cfg):
    f = _require(cfg, "filter", dict)
    if int(_require(f, "order", int, "filter")) != 2:
        raise ConfigError("filter.order", "the coupled-mode model is two-pole")
    return ModeGraph.from_filter(
        center_freq=2 * np.pi * _require(f, "center_freq_hz", float, "filter"),
        bandwidth=2 * np.pi * _require(f, "bandwidth_hz", float, "filter"),
        ripple_db=_require(f, "ripple_db", float, "filter"),
        pump_freq=2 * np.pi * _require(cfg, "pump_freq_hz", float),
        beta_p=_require(cfg, "beta_p", float),
        phi=np.deg2rad(_require(cfg, "phi_deg", float)))


def _axis_values(spec, name):
    if isinstance(spec, list):
        return np.asarray(spec, dtype=float)
    if not isinstance(spec, dict):
        raise ConfigError(f"sweep.axes.{name}", "expected list or range object")
    vals = np.linspace(_require(spec, "start", float, name),
                       _require(spec, "stop", float, name),
                       _require(spec, "points", int, name))
    if spec.get("degrees"):
        vals = np.deg2rad(vals)
    return vals


def _db(x):
    return 20 * np.log10(max(float(x), 1e-300))


# --- export ---------------------------------------------------------------------

def config_hash(cfg):
    return hashlib.sha256(
        json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def export(header, rows, payload, cfg, out_path, fmt):
    """Write results as CSV (9 significant digits) or JSON with metadata."""
    if fmt == "csv":
        with open(out_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt_cell(c) for c in row])
    else:
        doc = {"metadata": {"config_hash": config_hash(cfg),
                            "version": __version__,
                            "timestamp": datetime.datetime.now(
                                datetime.timezone.utc).isoformat()},
               "config": cfg,
               "data": payload}
        with open(out_path, "w") as fh:
            json.dump(doc, fh, indent=2, default=_json_default)
            fh.write("\n")


def _fmt_cell(c):
    if isinstance(c, (int, np.integer)):
        return str(c)
    return f"{float(c):.9g}"


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


# --- entry point ------------------------------------------------------------------

RUNNERS = {"synth": run_synth, "sparams": run_sparams, "sweep": run_sweep,
           "optimize": run_optimize, "oracle": run_oracle,
           "cascade": run_cascade, "coupled-mode": run_coupled_mode}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="paramiso",
        description="Simulate, synthesize, and tune SQUID parametric isolators.")
    sub = ap.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--recipe", help="bundled recipe name (fig2..fig7)")
        p.add_argument("--output", default=f"{mode}_out.csv")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0,
                       help="random seed for optimizer restarts")
        p.add_argument("--points", type=int, help="override grid point count")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.recipe:
            cfg = load_recipe(args.recipe)
        elif args.config:
            with open(args.config) as fh:
                cfg = json.load(fh)
        else:
            raise ConfigError("config", "provide --config or --recipe")
        cfg_mode = cfg.get("mode", args.mode)
        if cfg_mode != args.mode:
            raise ConfigError("mode", f"config is for '{cfg_mode}', "
                                      f"invoked as '{args.mode}'")
        if args.points and "grid" in cfg:
            cfg["grid"]["points"] = args.points
        header, rows, payload = RUNNERS[args.mode](cfg, args.seed)
        export(header, rows, payload, cfg, args.output, args.format)
    except ConfigError as exc:
        json.dump({"error": "config", "field": exc.field, "message": str(exc)},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2
    except ParamisoError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
