"""Independent time-domain integrator for the modulated-inductor circuit.

The isolator is integrated as a linear time-varying circuit: capacitor
charges and inductor fluxes are the state, so the flux-modulated SQUID
inductances enter through i = lambda/L(t) without differentiating L(t)
numerically.  A fixed-step fourth-order Runge-Kutta loop (compiled with
numba) advances the state; steady-state port voltages are then correlated
against single tones to estimate multi-sideband S-parameters, providing an
engine-independent check on the spectral-domain results.

Only capacitively-coupled netlists are integrable: ideal admittance
inverters have no time-domain realization.
"""

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import InvalidParameterError, ResolutionError
from .squid import PHI0
from .spectral import IsolatorNetlist, SeriesCap, SquidPole


@dataclass(frozen=True)
class TransientRun:
    """One time-domain simulation request.

    Attributes
    ----------
    netlist : IsolatorNetlist
        Must alternate series capacitors and SQUID-loaded poles
        (the capacitive ladder form).
    drive_port : int
        1 or 2.
    drive_freq : float
        Source frequency [Hz].
    drive_amp : float
        Source EMF amplitude [V]; the available wave amplitude is half of it.
    duration : float
        Simulated time [s]; at least 200 pump periods when pumped.
    step : float
        Integrator step [s]; at most 1/(50 * highest frequency present).
    flux_exact : bool
        Evaluate the full cosine flux-to-inductance relation (default) or its
        second-order expansion in the RF amplitude.
    voltage_model : str
        "flux": exact branch relation v = d(L(t) i)/dt via the flux state.
        "ldi": the approximation v = L(t) di/dt, for quantifying its error.
    """

    netlist: IsolatorNetlist
    drive_port: int
    drive_freq: float
    drive_amp: float = 1e-6
    duration: float = None
    step: float = None
    flux_exact: bool = True
    voltage_model: str = "flux"

    def __post_init__(self):
        if self.drive_port not in (1, 2):
            raise InvalidParameterError("drive_port must be 1 or 2")
        if self.drive_freq <= 0 or self.drive_amp <= 0:
            raise InvalidParameterError("drive frequency and amplitude must be positive")
        if self.voltage_model not in ("flux", "ldi"):
            raise InvalidParameterError("voltage_model must be 'flux' or 'ldi'")
        wm = self.netlist.pump_freq
        fm = wm / (2 * np.pi)
        if self.duration is None:
            object.__setattr__(self, "duration",
                               400 / fm if fm > 0 else 300 / self.drive_freq)
        if self.step is None:
            object.__setattr__(self, "step", 1 / (60 * self._fmax()))
        if self.step > 1 / (50 * self._fmax()):
            raise InvalidParameterError(
                f"step {self.step:.3e} s too coarse; need <= {1/(50*self._fmax()):.3e} s")
        if fm > 0 and self.duration < 200 / fm:
            raise InvalidParameterError(
                "duration must cover at least 200 pump periods")

    def _fmax(self):
        return self.drive_freq + 2 * self.netlist.pump_freq / (2 * np.pi)


@dataclass(frozen=True)
class TraceResult:
    """Port voltage traces; ts[i] is the time of the i-th recorded sample."""

    ts: np.ndarray
    vport1: np.ndarray
    vport2: np.ndarray
    run: TransientRun


@dataclass(frozen=True)
class PowerSpectrum:
    freqs: np.ndarray
    power_db: np.ndarray
    resolution_bw: float


@dataclass(frozen=True)
class SidebandEstimate:
    """Center and first/second-sideband transmission estimated from traces."""

    s21_00: float
    s12_00: float
    fwd_sidebands: np.ndarray
    rev_sidebands: np.ndarray


@njit(cache=True)
def _rhs(t, y, out, npoles, z0, c_in, c_out, cinv, lg, l0, ic0, beta, tanb,
         alpha, wm, ph, wd, vs_amp, drive_port, flux_exact, flux_state):
    vs1 = vs_amp * np.sin(wd * t) if drive_port == 1 else 0.0
    vs2 = vs_amp * np.sin(wd * t) if drive_port == 2 else 0.0
    dq_in = (vs1 - y[2] - y[0] / c_in) / z0
    dq_out = (y[1 + npoles] - y[1] / c_out - vs2) / z0
    r = np.empty(npoles)
    for m in range(npoles):
        x = alpha[m] * np.cos(wm * t + ph[m])
        if flux_exact:
            ls = PHI0 / (4 * np.pi * ic0[m] * np.cos(beta[m] + x))
        else:
            ls = l0[m] * (1.0 + tanb[m] * x + 0.5 * x * x)
        ltot = ls + lg[m]
        if flux_state:
            il = y[2 + npoles + m] / ltot
            out[2 + npoles + m] = y[2 + m]
        else:
            il = y[2 + npoles + m]
            out[2 + npoles + m] = y[2 + m] / ltot
        r[m] = -il
    r[0] += dq_in
    r[npoles - 1] -= dq_out
    out[0] = dq_in
    out[1] = dq_out
    for m in range(npoles):
        acc = 0.0
        for k in range(npoles):
            acc += cinv[m, k] * r[k]
        out[2 + m] = acc


@njit(cache=True)
def _integrate(nsteps, dt, npoles, z0, c_in, c_out, cinv, lg, l0, ic0, beta,
               tanb, alpha, wm, ph, wd, vs_amp, drive_port, flux_exact,
               flux_state):
    nstate = 2 * npoles + 2
    y = np.zeros(nstate)
    k1 = np.empty(nstate); k2 = np.empty(nstate)
    k3 = np.empty(nstate); k4 = np.empty(nstate)
    yy = np.empty(nstate)
    rec1 = np.empty(nsteps)
    rec2 = np.empty(nsteps)
    for i in range(nsteps):
        t = i * dt
        _rhs(t, y, k1, npoles, z0, c_in, c_out, cinv, lg, l0, ic0, beta, tanb,
             alpha, wm, ph, wd, vs_amp, drive_port, flux_exact, flux_state)
        for j in range(nstate):
            yy[j] = y[j] + dt / 2 * k1[j]
        _rhs(t + dt / 2, yy, k2, npoles, z0, c_in, c_out, cinv, lg, l0, ic0,
             beta, tanb, alpha, wm, ph, wd, vs_amp, drive_port, flux_exact,
             flux_state)
        for j in range(nstate):
            yy[j] = y[j] + dt / 2 * k2[j]
        _rhs(t + dt / 2, yy, k3, npoles, z0, c_in, c_out, cinv, lg, l0, ic0,
             beta, tanb, alpha, wm, ph, wd, vs_amp, drive_port, flux_exact,
             flux_state)
        for j in range(nstate):
            yy[j] = y[j] + dt * k3[j]
        _rhs(t + dt, yy, k4, npoles, z0, c_in, c_out, cinv, lg, l0, ic0, beta,
             tanb, alpha, wm, ph, wd, vs_amp, drive_port, flux_exact,
             flux_state)
        for j in range(nstate):
            y[j] = y[j] + dt / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j])
        rec1[i] = y[2] + y[0] / c_in
        rec2[i] = y[1 + npoles] - y[1] / c_out
    return rec1, rec2


def _ladder_arrays(netlist: IsolatorNetlist):
    """Decompose a capacitive-ladder netlist into integrator arrays."""
    els = netlist.elements
    npoles = sum(isinstance(e, SquidPole) for e in els)
    if npoles < 1 or len(els) != 2 * npoles + 1:
        raise InvalidParameterError(
            "time-domain engine needs an alternating series-cap / pole ladder")
    expect_cap = True
    caps, poles = [], []
    for e in els:
        if expect_cap and isinstance(e, SeriesCap):
            caps.append(e.c)
        elif not expect_cap and isinstance(e, SquidPole):
            poles.append(e)
        else:
            raise InvalidParameterError(
                f"unsupported element {type(e).__name__} in a time-domain netlist")
        expect_cap = not expect_cap
    c_in, c_out = caps[0], caps[-1]
    c_couple = np.array(caps[1:-1])
    cmat = np.diag([p.cap for p in poles]).astype(float)
    for k, c in enumerate(c_couple):
        cmat[k, k] += c
        cmat[k + 1, k + 1] += c
        cmat[k, k + 1] -= c
        cmat[k + 1, k] -= c
    squids = [p.squid for p in poles]
    return dict(
        npoles=npoles, c_in=c_in, c_out=c_out,
        cinv=np.linalg.inv(cmat),
        lg=np.array([p.geo_ind for p in poles]),
        l0=np.array([PHI0 / (4 * np.pi * s.ic0 * np.cos(s.beta)) for s in squids]),
        ic0=np.array([s.ic0 for s in squids]),
        beta=np.array([s.beta for s in squids]),
        tanb=np.array([np.tan(s.beta) for s in squids]),
        alpha=np.array([s.alpha for s in squids]),
        wm=netlist.pump_freq,
        ph=np.array([s.pump_phase for s in squids]),
    )


def simulate(run: TransientRun) -> TraceResult:
    """Integrate the circuit and record both port voltages."""
    arr = _ladder_arrays(run.netlist)
    nsteps = int(run.duration / run.step)
    rec1, rec2 = _integrate(
        nsteps, run.step, arr["npoles"], run.netlist.z0,
        arr["c_in"], arr["c_out"], arr["cinv"], arr["lg"], arr["l0"],
        arr["ic0"], arr["beta"], arr["tanb"], arr["alpha"], arr["wm"],
        arr["ph"], 2 * np.pi * run.drive_freq, run.drive_amp, run.drive_port,
        run.flux_exact, run.voltage_model == "flux")
    ts = (np.arange(nsteps) + 1) * run.step
    return TraceResult(ts=ts, vport1=rec1, vport2=rec2, run=run)


def tone_amplitude(ts, trace, freq, discard=0.25):
    """Complex amplitude of a single tone in a trace.

    Correlates the Hann-windowed steady-state portion (after dropping the
    first ``discard`` fraction) against exp(-2j*pi*freq*t).
    """
    n0 = int(len(ts) * discard)
    if len(ts) - n0 < 16:
        raise ResolutionError("trace too short after transient discard")
    t = ts[n0:]
    x = trace[n0:]
    w = np.hanning(len(x))
    return 2 * np.sum(w * x * np.exp(-2j * np.pi * freq * t)) / np.sum(w)


def power_spectrum(result: TraceResult, port=2, discard=0.25) -> PowerSpectrum:
    """Windowed power spectrum of a port voltage, normalized to the drive.

    0 dB corresponds to the full available source wave appearing at the port.
    """
    trace = result.vport2 if port == 2 else result.vport1
    n0 = int(len(result.ts) * discard)
    x = trace[n0:]
    if len(x) < 64:
        raise ResolutionError("trace too short for a spectrum")
    w = np.hanning(len(x))
    spec = np.fft.rfft(w * x) * 2 / np.sum(w)
    freqs = np.fft.rfftfreq(len(x), d=result.run.step)
    ref = result.run.drive_amp / 2
    power = 20 * np.log10(np.maximum(np.abs(spec), 1e-300) / ref)
    rbw = 1 / (len(x) * result.run.step)
    return PowerSpectrum(freqs=freqs, power_db=power, resolution_bw=rbw)


def extract_sideband_sparams(netlist: IsolatorNetlist, drive_freq,
                             n_sidebands=2, **run_kwargs) -> SidebandEstimate:
    """Estimate |S21^00|, |S12^00| and sideband magnitudes from paired runs.

    Drives port 1 then port 2 at ``drive_freq`` and reads the transmitted
    tone amplitudes at the drive frequency and its first ``n_sidebands``
    sideband offsets.  Amplitudes are normalized so that a matched,
    reflectionless through yields 1.
    """
    fm = netlist.pump_freq / (2 * np.pi)
    mags = []
    for port in (1, 2):
        run = TransientRun(netlist=netlist, drive_port=port,
                           drive_freq=drive_freq, **run_kwargs)
        res = simulate(run)
        out = res.vport2 if port == 1 else res.vport1
        ref = run.drive_amp / 2
        offsets = np.arange(-n_sidebands, n_sidebands + 1)
        mags.append(np.array([
            abs(tone_amplitude(res.ts, out, drive_freq + n * fm)) / ref
            for n in offsets]))
    fwd, rev = mags
    return SidebandEstimate(s21_00=fwd[n_sidebands], s12_00=rev[n_sidebands],
                            fwd_sidebands=fwd, rev_sidebands=rev)
