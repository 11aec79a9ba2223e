"""Pump-parameter sweeps and derivative-free tuning of isolator netlists.

The pump plan (per-SQUID modulation amplitudes, a common modulation
frequency, and per-SQUID phases) determines how the conversion paths
interfere.  Good plans are found by scalarizing the in-band worst-case
directionality with hinge penalties on insertion loss and match, then
running a simplex search with randomized restarts.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .coupled_mode import IsolationBand, ModeGraph, mode_sparams
from .errors import InvalidParameterError
from .spectral import (IsolatorNetlist, build_capacitive_netlist,
                       build_inverter_netlist, netlist_sparams,
                       two_squid_circuit)
from .squid import SquidParams
from .synthesis import SynthesizedFilter


@dataclass(frozen=True)
class PumpPlan:
    """Per-SQUID pump settings.

    Attributes
    ----------
    alphas : tuple of float
        RF flux amplitudes [rad], one per SQUID.
    phases : tuple of float
        Modulation phases [rad], one per SQUID.
    pump_freqs : tuple of float
        Angular modulation frequencies [rad/s]; all equal when shared_freq.
    shared_freq : bool
        Enforce a common modulation frequency (required by the spectral and
        time-domain engines).
    """

    alphas: tuple
    phases: tuple
    pump_freqs: tuple
    shared_freq: bool = True

    def __post_init__(self):
        alphas = tuple(float(a) for a in np.atleast_1d(self.alphas))
        phases = tuple(float(p) for p in np.atleast_1d(self.phases))
        freqs = tuple(float(f) for f in np.atleast_1d(self.pump_freqs))
        n = max(len(alphas), len(phases), len(freqs))
        if len(alphas) == 1:
            alphas = alphas * n
        if len(phases) == 1:
            phases = phases * n
        if len(freqs) == 1:
            freqs = freqs * n
        if not len(alphas) == len(phases) == len(freqs):
            raise InvalidParameterError("pump plan fields must have equal length")
        if self.shared_freq and len(set(freqs)) > 1:
            raise InvalidParameterError(
                "shared_freq is set but pump frequencies differ")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "pump_freqs", freqs)

    @property
    def pump_freq(self):
        return self.pump_freqs[0]

    def per_squid(self, n):
        """(alpha, pump_freq, phase) triples for an n-SQUID netlist."""
        if len(self.alphas) != n:
            raise InvalidParameterError(
                f"plan covers {len(self.alphas)} SQUIDs, netlist has {n}")
        return list(zip(self.alphas, self.pump_freqs, self.phases))


@dataclass(frozen=True)
class TuneObjective:
    """Targets for in-band performance, all in dB."""

    band: IsolationBand
    min_directionality_db: float = 15.0
    max_insertion_loss_db: float = 5.0
    min_return_loss_db: float = 10.0

    def __post_init__(self):
        if not np.isfinite([self.min_directionality_db,
                            self.max_insertion_loss_db,
                            self.min_return_loss_db]).all():
            raise InvalidParameterError("objective thresholds must be finite")


@dataclass(frozen=True)
class IsolatorDesign:
    """A synthesized filter plus the SQUID loading choices.

    ``style`` selects ideal inverters or the capacitive-ladder realization
    when building a netlist for a given pump plan.
    """

    synth: SynthesizedFilter
    beta: float
    squid_fraction: float = 1.0
    style: str = "inverter"

    def netlist(self, plan: PumpPlan) -> IsolatorNetlist:
        build = {"inverter": build_inverter_netlist,
                 "capacitive": build_capacitive_netlist}.get(self.style)
        if build is None:
            raise InvalidParameterError(f"unknown netlist style '{self.style}'")
        return build(self.synth, self.beta, plan, self.squid_fraction)


@dataclass(frozen=True)
class BandMetrics:
    """Per-frequency and worst-case in-band figures, all in dB."""

    freqs: np.ndarray
    d_db: np.ndarray
    il_db: np.ndarray
    rl_db: np.ndarray
    min_d_db: float
    max_il_db: float
    min_rl_db: float


@dataclass(frozen=True)
class TuneResult:
    plan: PumpPlan
    metrics: BandMetrics
    score: float
    feasible: bool
    trace: tuple


def evaluate_plan(design: IsolatorDesign, plan: PumpPlan, freqs,
                  n_sidebands=3) -> BandMetrics:
    """Directionality, insertion loss, and return loss over a grid [Hz]."""
    net = design.netlist(plan)
    freqs = np.asarray(freqs, dtype=float)
    d = np.empty(len(freqs))
    il = np.empty(len(freqs))
    rl = np.empty(len(freqs))
    for i, f in enumerate(freqs):
        sp = netlist_sparams(net, 2 * np.pi * f, n_sidebands)
        fwd = abs(sp.entry(2, 1))
        rev = abs(sp.entry(1, 2))
        refl = max(abs(sp.entry(1, 1)), abs(sp.entry(2, 2)))
        d[i] = 20 * np.log10(fwd / rev) if rev > 0 else np.inf
        il[i] = -20 * np.log10(fwd) if fwd > 0 else np.inf
        rl[i] = -20 * np.log10(refl) if refl > 0 else np.inf
    return BandMetrics(freqs=freqs, d_db=d, il_db=il, rl_db=rl,
                       min_d_db=float(d.min()), max_il_db=float(il.max()),
                       min_rl_db=float(rl.min()))


def _score(metrics: BandMetrics, objective: TuneObjective,
           il_weight=10.0, rl_weight=10.0, rl_margin=0.3):
    """Scalar quality: worst-case D minus hinge penalties (higher is better).

    ``rl_margin`` pads the return-loss requirement so plans that barely pass
    on the tuning grid survive finer grids.
    """
    pen = il_weight * max(0.0, metrics.max_il_db - objective.max_insertion_loss_db)
    pen += rl_weight * max(0.0, objective.min_return_loss_db + rl_margin
                           - metrics.min_rl_db)
    return metrics.min_d_db - pen


def meets(metrics: BandMetrics, objective: TuneObjective):
    return (metrics.min_d_db >= objective.min_directionality_db
            and metrics.max_il_db <= objective.max_insertion_loss_db
            and metrics.min_rl_db >= objective.min_return_loss_db)


# --- sweeps -------------------------------------------------------------------

def sweep_coupled(graph: ModeGraph, axes, signal_freq=None):
    """Grid evaluation of the coupled-mode model.

    Parameters
    ----------
    graph : ModeGraph
        Base graph; swept fields are replaced point by point.
    axes : dict
        One or two of {'beta_p', 'pump_freq', 'phi'} mapped to value arrays.
    signal_freq : float, optional
        Angular drive frequency; defaults to the A-mode frequency.

    Returns
    -------
    dict
        'axes' (name -> values), 'fwd_db', 'rev_db', 'd_db' arrays with one
        dimension per axis, in the order given.
    """
    valid = {"beta_p", "pump_freq", "phi"}
    _check_axes(axes, valid)
    if signal_freq is None:
        signal_freq = graph.mode_freqs[0]
    names = list(axes)
    grids = [np.asarray(axes[k], dtype=float) for k in names]
    shape = tuple(len(g) for g in grids)
    fwd = np.empty(shape)
    rev = np.empty(shape)
    for idx in np.ndindex(shape):
        over = {k: grids[i][idx[i]] for i, k in enumerate(names)}
        g = graph
        if "pump_freq" in over:
            wp = over.pop("pump_freq")
            wa = g.mode_freqs[0]
            g = replace(g, pump_freq=wp, mode_freqs=np.array(
                [wa, wa, wa + wp, wa + wp, wa - wp, wa - wp]))
        if over:
            g = replace(g, **over)
        s = mode_sparams(g, signal_freq)
        fwd[idx] = 20 * np.log10(abs(s[1, 0]))
        rev[idx] = 20 * np.log10(abs(s[0, 1]))
    return {"axes": dict(zip(names, grids)), "fwd_db": fwd, "rev_db": rev,
            "d_db": fwd - rev}


def sweep_plan(design: IsolatorDesign, base_plan: PumpPlan, axes, freqs,
               n_sidebands=3):
    """Grid evaluation of a spectral netlist over pump-plan axes.

    Axis names: 'alpha' (all SQUIDs), 'alpha<k>', 'phase<k>' (1-based k),
    or 'pump_freq' [rad/s].  Values of D/IL/RL are in-band worst cases over
    ``freqs`` [Hz].
    """
    n = len(base_plan.alphas)
    valid = ({"alpha", "pump_freq"}
             | {f"alpha{k}" for k in range(1, n + 1)}
             | {f"phase{k}" for k in range(1, n + 1)})
    _check_axes(axes, valid)
    names = list(axes)
    grids = [np.asarray(axes[k], dtype=float) for k in names]
    shape = tuple(len(g) for g in grids)
    d = np.empty(shape)
    il = np.empty(shape)
    rl = np.empty(shape)
    for idx in np.ndindex(shape):
        plan = base_plan
        for i, name in enumerate(names):
            plan = _apply_axis(plan, name, grids[i][idx[i]])
        m = evaluate_plan(design, plan, freqs, n_sidebands)
        d[idx], il[idx], rl[idx] = m.min_d_db, m.max_il_db, m.min_rl_db
    return {"axes": dict(zip(names, grids)), "d_db": d, "il_db": il, "rl_db": rl}


def sweep_two_squid(squid_a: SquidParams, squid_b: SquidParams,
                    couplings, phase_diffs, freq, n_sidebands=3, z0=50.0):
    """Directionality map of the capacitively-coupled SQUID pair.

    Sweeps the coupling capacitance [F] and the differential pump phase
    applied to the second SQUID; returns D in dB on the (couplings,
    phase_diffs) grid.
    """
    couplings = np.asarray(couplings, dtype=float)
    phase_diffs = np.asarray(phase_diffs, dtype=float)
    d = np.empty((len(couplings), len(phase_diffs)))
    for i, c in enumerate(couplings):
        for j, pd in enumerate(phase_diffs):
            sb = squid_b.with_pump(pump_phase=squid_a.pump_phase + pd)
            sp = two_squid_circuit(squid_a, sb, c, freq, n_sidebands, z0)
            d[i, j] = 20 * np.log10(abs(sp.entry(2, 1)) / abs(sp.entry(1, 2)))
    return {"axes": {"coupling_c": couplings, "phi_d": phase_diffs}, "d_db": d}


def _check_axes(axes, valid):
    unknown = set(axes) - valid
    if unknown or not axes:
        raise InvalidParameterError(
            f"unknown sweep axes {sorted(unknown)}; valid axes: {sorted(valid)}")


def _apply_axis(plan: PumpPlan, name, value):
    if name == "alpha":
        return replace(plan, alphas=(value,) * len(plan.alphas))
    if name == "pump_freq":
        return replace(plan, pump_freqs=(value,) * len(plan.pump_freqs))
    if name.startswith("alpha"):
        k = int(name[5:]) - 1
        alphas = list(plan.alphas)
        alphas[k] = value
        return replace(plan, alphas=tuple(alphas))
    k = int(name[5:]) - 1
    phases = list(plan.phases)
    phases[k] = value
    return replace(plan, phases=tuple(phases))


# --- optimization ---------------------------------------------------------------

def optimize(design: IsolatorDesign, seed_plan: PumpPlan,
             objective: TuneObjective, freqs, n_sidebands=3,
             budget=200, restarts=8, seed=0, tune_amplitudes=True,
             tune_freq=True) -> TuneResult:
    """Simplex search with restarts over pump phases (and optionally
    amplitudes and the common modulation frequency).

    The first SQUID's phase stays fixed as the global reference; phases live
    on a torus, so simplex steps are unconstrained and wrapped when building
    plans.  Deterministic for a given ``seed`` and restart schedule.

    Returns the best plan found, its metrics on ``freqs`` [Hz], the scalar
    score, a feasibility flag against ``objective``, and the best-so-far
    score trace.
    """
    if budget < 0 or restarts < 1:
        raise InvalidParameterError("budget must be >= 0 and restarts >= 1")
    rng = np.random.default_rng(seed)
    nsq = len(seed_plan.alphas)
    freqs = np.asarray(freqs, dtype=float)

    def unpack(x):
        phases = (0.0,) + tuple(np.mod(x[:nsq - 1], 2 * np.pi))
        pos = nsq - 1
        alphas = seed_plan.alphas
        wm = seed_plan.pump_freq
        if tune_amplitudes:
            alphas = tuple(np.abs(x[pos:pos + nsq]))
            pos += nsq
        if tune_freq:
            wm = abs(x[pos]) * seed_plan.pump_freq
        return replace(seed_plan, alphas=alphas, phases=phases,
                       pump_freqs=(wm,) * nsq)

    def pack(plan):
        x = list(np.asarray(plan.phases[1:]) - plan.phases[0])
        if tune_amplitudes:
            x += list(plan.alphas)
        if tune_freq:
            x += [1.0]
        return np.array(x)

    trace = []
    best = None

    def cost(x):
        nonlocal best
        try:
            m = evaluate_plan(design, unpack(x), freqs, n_sidebands)
        except InvalidParameterError:
            return 1e6
        s = _score(m, objective)
        if best is None or s > best[0]:
            best = (s, unpack(x), m)
        trace.append(best[0])
        return -s

    x0 = pack(seed_plan)
    cost(x0)
    if budget > 0:
        for r in range(restarts):
            start = x0 if r == 0 else x0 + rng.normal(0, 0.25, size=x0.shape)
            minimize(cost, start, method="Nelder-Mead",
                     options={"maxfev": budget, "xatol": 1e-4, "fatol": 1e-4})
    score, plan, metrics = best
    return TuneResult(plan=plan, metrics=metrics, score=score,
                      feasible=meets(metrics, objective), trace=tuple(trace))


def amplification_preset(center_freq, n_squids=3, alpha=0.099 * np.pi,
                         pump_freq=None, phases=None) -> PumpPlan:
    """Pump plan for the gain regime: modulation far above the signal band.

    Placing the common pump near twice the center frequency makes the lower
    conversion sideband land at a negative signed frequency, turning the
    conversion path into an amplifying one.  The default staggered phases
    assume a three-pole design with roughly 40% of each pole inductance in
    the SQUID.

    Parameters
    ----------
    center_freq : float
        Filter center frequency [Hz].
    pump_freq : float, optional
        Override of the modulation frequency [Hz]; default 2*center_freq.
    """
    fm = 2 * center_freq if pump_freq is None else pump_freq
    if phases is None:
        if n_squids == 3:
            phases = (0.0, np.deg2rad(200.0), np.deg2rad(63.0))
        else:
            phases = tuple(np.linspace(0, np.pi / 2, n_squids))
    return PumpPlan(alphas=(alpha,) * n_squids, phases=tuple(phases),
                    pump_freqs=(2 * np.pi * fm,) * n_squids)
