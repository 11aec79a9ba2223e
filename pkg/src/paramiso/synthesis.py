"""Chebyshev band-pass synthesis into shunt poles and admittance inverters.

A band-pass filter of order n is realized as n shunt LC poles separated by
admittance inverters.  The pole impedances may be chosen freely (e.g. to suit
available SQUID inductances); the inverter values then absorb the impedance
scaling.  An equivalent capacitively-coupled ladder is also produced, which
is what the time-domain engine integrates (ideal inverters have no
time-domain realization).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .squid import PHI0, SquidParams


@dataclass(frozen=True)
class FilterSpec:
    """Band-pass filter prescription.

    Attributes
    ----------
    order : int
        Number of poles (>= 2).
    center_freq : float
        Center frequency [Hz].
    bandwidth : float
        Pass-band width [Hz].
    ripple_db : float
        In-band ripple [dB].
    z0 : float
        Port impedance [ohm].
    """

    order: int
    center_freq: float
    bandwidth: float
    ripple_db: float
    z0: float = 50.0

    def __post_init__(self):
        if self.order < 2:
            raise InvalidParameterError(f"order must be >= 2, got {self.order}")
        if not 0 < self.bandwidth < 2 * self.center_freq:
            raise InvalidParameterError("bandwidth must lie in (0, 2*center_freq)")
        if self.ripple_db <= 0:
            raise InvalidParameterError("ripple_db must be positive")
        if self.z0 <= 0:
            raise InvalidParameterError("z0 must be positive")


@dataclass(frozen=True)
class SynthesizedFilter:
    """Synthesis output: prototype values, pole impedances, inverter values."""

    spec: FilterSpec
    g: np.ndarray
    w_bar: float
    pole_impedances: np.ndarray
    inverters: np.ndarray


@dataclass(frozen=True)
class PoleRealization:
    """Component values of one SQUID-loaded shunt pole."""

    cap: float
    geo_ind: float
    squid: SquidParams


@dataclass(frozen=True)
class CapacitiveLadder:
    """Capacitively-coupled equivalent of the inverter filter.

    End inverters become series capacitors with their tuning parasitics
    absorbed into the adjacent pole; inner inverters become series capacitors
    whose negative shunt halves are absorbed into the neighboring poles.
    ``node_caps`` are the remaining shunt capacitances and ``pole_inds`` the
    untouched shunt inductances.
    """

    c_in: float
    c_out: float
    c_couple: np.ndarray
    node_caps: np.ndarray
    pole_inds: np.ndarray
    z0: float
    w0: float


def chebyshev_prototype(order, ripple_db):
    """Low-pass prototype coefficients g0..g_{n+1} for a Chebyshev response."""
    if order < 1:
        raise InvalidParameterError("order must be >= 1")
    if ripple_db <= 0:
        raise InvalidParameterError("ripple_db must be positive")
    beta = np.log(1 / np.tanh(ripple_db / 17.37))
    gam = np.sinh(beta / (2 * order))
    a = np.sin((2 * np.arange(1, order + 1) - 1) * np.pi / (2 * order))
    b = gam**2 + np.sin(np.arange(1, order + 1) * np.pi / order) ** 2
    g = np.empty(order + 2)
    g[0] = 1.0
    g[1] = 2 * a[0] / gam
    for k in range(2, order + 1):
        g[k] = 4 * a[k - 2] * a[k - 1] / (b[k - 2] * g[k - 1])
    g[order + 1] = 1.0 if order % 2 else 1 / np.tanh(beta / 4) ** 2
    return g


def knee_freqs(spec: FilterSpec):
    """Angular band-edge frequencies (w1, w2) with w1*w2 = w0^2."""
    w0 = 2 * np.pi * spec.center_freq
    bw = 2 * np.pi * spec.bandwidth
    w1 = (-bw + np.sqrt(bw**2 + 4 * w0**2)) / 2
    return w1, w1 + bw


def fractional_bw(omega1, omega2):
    """Fractional bandwidth (w2 - w1)/sqrt(w1*w2)."""
    if not 0 < omega1 <= omega2:
        raise InvalidParameterError("need 0 < omega1 <= omega2")
    return (omega2 - omega1) / np.sqrt(omega1 * omega2)


def pole_impedances(spec: FilterSpec):
    """Pole impedances that make every inverter equal 1/z0.

    Z_1 = w_bar*z0/(g0*g1), then Z_{k+1} = (z0*w_bar)^2/(g_k*g_{k+1}*Z_k).
    """
    g = chebyshev_prototype(spec.order, spec.ripple_db)
    wbar = fractional_bw(*knee_freqs(spec))
    zr = np.empty(spec.order)
    zr[0] = wbar * spec.z0 / (g[0] * g[1])
    for k in range(1, spec.order):
        zr[k] = (spec.z0 * wbar) ** 2 / (g[k] * g[k + 1] * zr[k - 1])
    return zr


def inverter_values(spec: FilterSpec, pole_z):
    """Admittance inverter values [S] for given pole impedances.

    J_in = sqrt(w_bar/(g0*g1*z0*Z_1)); inner J_k = w_bar/sqrt(g_k*g_{k+1}*Z_k*Z_{k+1});
    J_out mirrors J_in with the last prototype pair.
    """
    pole_z = np.asarray(pole_z, dtype=float)
    if pole_z.shape != (spec.order,):
        raise InvalidParameterError("pole impedance list must match the filter order")
    g = chebyshev_prototype(spec.order, spec.ripple_db)
    wbar = fractional_bw(*knee_freqs(spec))
    n = spec.order
    j = np.empty(n + 1)
    j[0] = np.sqrt(wbar / (g[0] * g[1] * spec.z0 * pole_z[0]))
    for k in range(1, n):
        j[k] = wbar * np.sqrt(1 / (g[k] * g[k + 1] * pole_z[k - 1] * pole_z[k]))
    j[n] = np.sqrt(wbar / (g[n] * g[n + 1] * pole_z[n - 1] * spec.z0))
    return j


def synthesize(spec: FilterSpec, pole_z=None) -> SynthesizedFilter:
    """Synthesize a filter spec into pole impedances and inverter values.

    Parameters
    ----------
    spec : FilterSpec
    pole_z : sequence of float, optional
        Pole impedance overrides [ohm]; default uses the recursion that
        yields direct 1/z0 coupling everywhere.
    """
    if pole_z is None:
        pole_z = pole_impedances(spec)
    pole_z = np.asarray(pole_z, dtype=float)
    if np.any(pole_z <= 0):
        raise InvalidParameterError("pole impedances must be positive")
    return SynthesizedFilter(
        spec=spec,
        g=chebyshev_prototype(spec.order, spec.ripple_db),
        w_bar=fractional_bw(*knee_freqs(spec)),
        pole_impedances=pole_z,
        inverters=inverter_values(spec, pole_z),
    )


def tl_input_impedance(z0_line, z_load, electrical_length):
    """Input impedance of a loaded transmission-line section.

    At a quarter wave (electrical_length = pi/2) this reduces to the inverter
    action z0_line^2/z_load, handled in closed form to avoid the tangent pole.
    """
    if z0_line <= 0:
        raise InvalidParameterError("z0_line must be positive")
    if np.isclose(np.cos(electrical_length), 0.0, atol=1e-12):
        return z0_line**2 / z_load
    t = np.tan(electrical_length)
    return z0_line * (z_load + 1j * z0_line * t) / (z0_line + 1j * z_load * t)


def realize_pole(z_r, center_freq, squid: SquidParams, squid_fraction=1.0):
    """Size a SQUID-loaded shunt pole resonating at center_freq at DC bias.

    The pole's total inductance L = z_r/w0 is split into a geometric part and
    a SQUID whose static (DC-bias) inductance supplies ``squid_fraction`` of
    the total; the junction critical current is solved from that requirement.

    Parameters
    ----------
    z_r : float
        Pole impedance [ohm].
    center_freq : float
        Resonance frequency at DC bias [Hz].
    squid : SquidParams
        Carries the DC bias and pump settings; ic0 is replaced by the sized value.
    squid_fraction : float
        Share of the pole inductance realized by the SQUID, in (0, 1].
    """
    if not 0 < squid_fraction <= 1:
        raise InvalidParameterError(
            f"squid_fraction must be in (0, 1], got {squid_fraction}")
    w0 = 2 * np.pi * center_freq
    l_tot = z_r / w0
    l_sq = squid_fraction * l_tot
    ic0 = PHI0 / (4 * np.pi * l_sq * np.cos(squid.beta))
    sized = SquidParams(ic0=ic0, beta=squid.beta, alpha=squid.alpha,
                        pump_freq=squid.pump_freq, pump_phase=squid.pump_phase)
    return PoleRealization(cap=1 / (z_r * w0), geo_ind=l_tot - l_sq, squid=sized)


def capacitive_ladder(synth: SynthesizedFilter) -> CapacitiveLadder:
    """Convert the inverter filter into a capacitively-coupled ladder.

    Inner inverters J become series capacitors C = J/w0 whose accompanying
    negative shunt capacitors are absorbed into the adjacent poles.  End
    inverters become series capacitors C = J/(w0*sqrt(1-(J*z0)^2)) whose
    port-side parasitic is left to the termination and whose pole-side
    parasitic C/(1+(w0*C*z0)^2) is absorbed into the end pole.
    """
    spec = synth.spec
    w0 = 2 * np.pi * spec.center_freq
    z0 = spec.z0
    j = synth.inverters
    n = spec.order
    for jj in (j[0], j[-1]):
        if jj * z0 >= 1:
            raise InvalidParameterError(
                "end inverter too strong for a capacitive realization (J*z0 >= 1)")
    c_in = j[0] / (w0 * np.sqrt(1 - (j[0] * z0) ** 2))
    c_out = j[-1] / (w0 * np.sqrt(1 - (j[-1] * z0) ** 2))
    c_couple = j[1:-1] / w0
    pole_caps = 1 / (synth.pole_impedances * w0)
    pole_inds = synth.pole_impedances / w0
    node = pole_caps.copy()
    node[0] -= c_in / (1 + (w0 * c_in * z0) ** 2)
    node[-1] -= c_out / (1 + (w0 * c_out * z0) ** 2)
    for k, c in enumerate(c_couple):
        node[k] -= c
        node[k + 1] -= c
    if np.any(node <= 0):
        raise InvalidParameterError(
            "coupling capacitors exceed a pole capacitance; "
            "choose larger pole impedances or a narrower band")
    return CapacitiveLadder(c_in=c_in, c_out=c_out, c_couple=c_couple,
                            node_caps=node, pole_inds=pole_inds,
                            z0=z0, w0=w0)
