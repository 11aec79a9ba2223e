"""Spectral ABCD matrices, multi-sideband S-parameters, and isolator netlists.

Every two-port element is represented by four (2N+1)x(2N+1) blocks acting on
the vector of sideband amplitudes at frequencies omega + n*omega_m.  Elements
without modulation are diagonal in sideband index; pumped SQUIDs couple the
sidebands.  Cascading is ordinary block-matrix multiplication, and the
S-parameter conversion solves the port wave-variable equations for all drive
sidebands at once.
"""

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InvalidParameterError, SingularNetworkError
from .squid import SquidParams, spectral_impedance, sideband_freqs
from .synthesis import SynthesizedFilter, capacitive_ladder, realize_pole


@dataclass(frozen=True)
class SpectralABCD:
    """ABCD blocks of a two-port over sideband space."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    n_sidebands: int
    freq: float

    def __post_init__(self):
        dim = 2 * self.n_sidebands + 1
        for blk in (self.a, self.b, self.c, self.d):
            if blk.shape != (dim, dim):
                raise InvalidParameterError(
                    f"ABCD block shape {blk.shape} does not match N={self.n_sidebands}")

    @classmethod
    def identity(cls, n_sidebands, freq):
        dim = 2 * n_sidebands + 1
        eye = np.eye(dim, dtype=complex)
        zero = np.zeros((dim, dim), dtype=complex)
        return cls(eye, zero, zero, eye.copy(), n_sidebands, freq)

    def __matmul__(self, other: "SpectralABCD") -> "SpectralABCD":
        if self.n_sidebands != other.n_sidebands:
            raise InvalidParameterError("cascade requires matching sideband count")
        return SpectralABCD(
            a=self.a @ other.a + self.b @ other.c,
            b=self.a @ other.b + self.b @ other.d,
            c=self.c @ other.a + self.d @ other.c,
            d=self.c @ other.b + self.d @ other.d,
            n_sidebands=self.n_sidebands, freq=self.freq)


@dataclass(frozen=True)
class SpectralSParams:
    """Multi-sideband scattering parameters.

    Block entry ``sij[n_idx, p_idx]`` is the wave leaving port i at sideband
    n in response to a unit wave entering port j at sideband p, with array
    index n_idx = n + N.
    """

    s11: np.ndarray
    s21: np.ndarray
    s12: np.ndarray
    s22: np.ndarray
    n_sidebands: int
    freq: float
    z0: float

    def entry(self, i, j, n=0, p=0):
        """Scalar S_ij^{np}; ports are 1-based, sidebands are signed offsets."""
        blk = {(1, 1): self.s11, (2, 1): self.s21,
               (1, 2): self.s12, (2, 2): self.s22}[(i, j)]
        c = self.n_sidebands
        return blk[c + n, c + p]


# --- netlist elements -------------------------------------------------------

@dataclass(frozen=True)
class Inverter:
    """Ideal admittance inverter of value j [S], applied per sideband."""

    j: float


@dataclass(frozen=True)
class SeriesCap:
    """Series coupling capacitor [F]."""

    c: float


@dataclass(frozen=True)
class SeriesImpedance:
    """Frequency-independent series impedance [ohm] (diagonal in sidebands)."""

    z: complex


@dataclass(frozen=True)
class TransmissionLine:
    """Lossless line of impedance z0 that is a quarter wave at quarter_freq [Hz]."""

    z0: float
    quarter_freq: float


@dataclass(frozen=True)
class SquidPole:
    """Shunt pole: capacitor in parallel with (geometric inductor + SQUID)."""

    cap: float
    geo_ind: float
    squid: SquidParams


Element = Union[Inverter, SeriesCap, SeriesImpedance, TransmissionLine, SquidPole]


@dataclass(frozen=True)
class IsolatorNetlist:
    """Ordered spectral two-port elements between matched z0 ports."""

    elements: tuple
    z0: float = 50.0

    def __post_init__(self):
        if len(self.elements) == 0:
            raise InvalidParameterError("netlist needs at least one element")
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def pumps(self):
        """SquidParams of each SQUID-loaded pole, in circuit order."""
        return tuple(e.squid for e in self.elements if isinstance(e, SquidPole))

    @property
    def pump_freq(self):
        """Common modulation frequency [rad/s]; 0 if there are no SQUIDs."""
        freqs = {p.pump_freq for p in self.pumps}
        if len(freqs) > 1:
            raise InvalidParameterError(
                "netlist SQUIDs must share a common pump frequency")
        return freqs.pop() if freqs else 0.0


# --- element ABCD construction ----------------------------------------------

def shunt_abcd(z, n_sidebands, freq):
    """ABCD of a shunt element given its spectral impedance matrix."""
    dim = 2 * n_sidebands + 1
    z = np.asarray(z, dtype=complex)
    try:
        y = np.linalg.inv(z)
    except np.linalg.LinAlgError as exc:
        raise SingularNetworkError("shunt impedance is singular", freq=freq) from exc
    return SpectralABCD(np.eye(dim, dtype=complex),
                        np.zeros((dim, dim), dtype=complex),
                        y, np.eye(dim, dtype=complex), n_sidebands, freq)


def shunt_admittance_abcd(y, n_sidebands, freq):
    """ABCD of a shunt element given its spectral admittance matrix."""
    dim = 2 * n_sidebands + 1
    return SpectralABCD(np.eye(dim, dtype=complex),
                        np.zeros((dim, dim), dtype=complex),
                        np.asarray(y, dtype=complex),
                        np.eye(dim, dtype=complex), n_sidebands, freq)


def series_abcd(z_diag, n_sidebands, freq):
    """ABCD of a series element with per-sideband impedances z_diag."""
    dim = 2 * n_sidebands + 1
    return SpectralABCD(np.eye(dim, dtype=complex),
                        np.diag(np.asarray(z_diag, dtype=complex)),
                        np.zeros((dim, dim), dtype=complex),
                        np.eye(dim, dtype=complex), n_sidebands, freq)


def inverter_abcd(j, n_sidebands, freq):
    """ABCD of an ideal admittance inverter (quarter-wave convention)."""
    if j <= 0:
        raise InvalidParameterError("inverter value must be positive")
    dim = 2 * n_sidebands + 1
    eye = np.eye(dim, dtype=complex)
    zero = np.zeros((dim, dim), dtype=complex)
    return SpectralABCD(zero, (1j / j) * eye, (1j * j) * eye.copy(),
                        zero.copy(), n_sidebands, freq)


def tline_abcd(z0_line, quarter_freq, omega, pump_freq, n_sidebands):
    """ABCD of a lossless line, electrical length evaluated per sideband."""
    if z0_line <= 0 or quarter_freq <= 0:
        raise InvalidParameterError("line parameters must be positive")
    wn = sideband_freqs(omega, pump_freq, n_sidebands)
    theta = (np.pi / 2) * wn / (2 * np.pi * quarter_freq)
    return SpectralABCD(np.diag(np.cos(theta)).astype(complex),
                        np.diag(1j * z0_line * np.sin(theta)),
                        np.diag(1j * np.sin(theta) / z0_line),
                        np.diag(np.cos(theta)).astype(complex),
                        n_sidebands, omega)


def squid_pole_admittance(pole: SquidPole, omega, pump_freq, n_sidebands):
    """Spectral admittance of a SQUID-loaded shunt pole."""
    wn = sideband_freqs(omega, pump_freq, n_sidebands)
    z_branch = spectral_impedance(pole.squid, omega, n_sidebands)
    if pole.geo_ind:
        z_branch = z_branch + np.diag(1j * wn * pole.geo_ind)
    try:
        y = np.linalg.inv(z_branch)
    except np.linalg.LinAlgError as exc:
        raise SingularNetworkError("pole inductive branch is singular",
                                   freq=omega) from exc
    return y + np.diag(1j * wn * pole.cap)


def element_abcd(element: Element, omega, pump_freq, n_sidebands):
    """Spectral ABCD of one netlist element at signal frequency omega."""
    wn = sideband_freqs(omega, pump_freq, n_sidebands)
    if isinstance(element, Inverter):
        return inverter_abcd(element.j, n_sidebands, omega)
    if isinstance(element, SeriesCap):
        return series_abcd(1 / (1j * wn * element.c), n_sidebands, omega)
    if isinstance(element, SeriesImpedance):
        return series_abcd(np.full(2 * n_sidebands + 1, element.z), n_sidebands, omega)
    if isinstance(element, TransmissionLine):
        return tline_abcd(element.z0, element.quarter_freq, omega,
                          pump_freq, n_sidebands)
    if isinstance(element, SquidPole):
        y = squid_pole_admittance(element, omega, pump_freq, n_sidebands)
        return shunt_admittance_abcd(y, n_sidebands, omega)
    raise InvalidParameterError(f"unknown element type {type(element).__name__}")


def cascade(blocks):
    """Ordered product of spectral ABCD matrices."""
    blocks = list(blocks)
    if not blocks:
        raise InvalidParameterError("cascade needs at least one element")
    out = blocks[0]
    for blk in blocks[1:]:
        out = out @ blk
    return out


def to_sparams(abcd: SpectralABCD, z0) -> SpectralSParams:
    """Convert spectral ABCD blocks to S-parameters between z0 ports.

    Solves the port relations V1 = A V2 + B I2, I1 = C V2 + D I2 together
    with the incident-wave definitions a_k = (V_k + z0 I_k)/(2 sqrt(z0))
    (current into the network at port 1, out of it at port 2) for unit drives
    on every sideband of both ports.
    """
    if z0 <= 0:
        raise InvalidParameterError("z0 must be positive")
    n = abcd.n_sidebands
    dim = 2 * n + 1
    eye = np.eye(dim, dtype=complex)
    sz = np.sqrt(z0)
    # Unknowns x = [V2; I2]; rows: port-1 drive equation, port-2 drive equation.
    sys = np.block([[abcd.a + z0 * abcd.c, abcd.b + z0 * abcd.d],
                    [eye, -z0 * eye]])
    rhs = np.zeros((2 * dim, 2 * dim), dtype=complex)
    rhs[:dim, :dim] = 2 * sz * eye
    rhs[dim:, dim:] = 2 * sz * eye
    try:
        x = np.linalg.solve(sys, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularNetworkError("wave-variable system is singular",
                                   freq=abcd.freq) from exc
    v2, i2 = x[:dim], x[dim:]
    v1 = abcd.a @ v2 + abcd.b @ i2
    i1 = abcd.c @ v2 + abcd.d @ i2
    b1 = (v1 - z0 * i1) / (2 * sz)
    b2 = (v2 + z0 * i2) / (2 * sz)
    return SpectralSParams(s11=b1[:, :dim], s12=b1[:, dim:],
                           s21=b2[:, :dim], s22=b2[:, dim:],
                           n_sidebands=n, freq=abcd.freq, z0=z0)


def directionality(sp: SpectralSParams):
    """Center-sideband forward/reverse ratio |S21^00|/|S12^00| (linear)."""
    fwd = abs(sp.entry(2, 1))
    rev = abs(sp.entry(1, 2))
    if rev == 0:
        return np.inf
    return fwd / rev


# --- circuit-level drivers ---------------------------------------------------

def netlist_abcd(netlist: IsolatorNetlist, omega, n_sidebands):
    """Cascaded spectral ABCD of a full netlist at one signal frequency."""
    wm = netlist.pump_freq
    return cascade(element_abcd(e, omega, wm, n_sidebands)
                   for e in netlist.elements)


def netlist_sparams(netlist: IsolatorNetlist, omega, n_sidebands):
    """Spectral S-parameters of a netlist at one signal frequency."""
    return to_sparams(netlist_abcd(netlist, omega, n_sidebands), netlist.z0)


def isolator_sparams(netlist: IsolatorNetlist, freq_grid, n_sidebands):
    """Spectral S-parameters over a frequency grid [Hz].

    Returns a list of SpectralSParams, one per grid point.
    """
    return [netlist_sparams(netlist, 2 * np.pi * f, n_sidebands)
            for f in np.asarray(freq_grid, dtype=float)]


def two_squid_circuit(s1: SquidParams, s2: SquidParams, coupling_c,
                      freq, n_sidebands, z0=50.0):
    """Two shunt SQUIDs joined by a series capacitor, between z0 ports."""
    if coupling_c <= 0:
        raise InvalidParameterError("coupling capacitance must be positive")
    net = IsolatorNetlist(elements=(
        SquidPole(cap=0.0, geo_ind=0.0, squid=s1),
        SeriesCap(c=coupling_c),
        SquidPole(cap=0.0, geo_ind=0.0, squid=s2),
    ), z0=z0)
    return netlist_sparams(net, 2 * np.pi * freq, n_sidebands)


def build_inverter_netlist(synth: SynthesizedFilter, beta, pump_plan,
                           squid_fraction=1.0) -> IsolatorNetlist:
    """SQUID-loaded filter with ideal admittance inverters.

    ``pump_plan`` supplies per-pole (alpha, pump_freq, phase); see
    ``tuner.PumpPlan``.
    """
    poles = _realized_poles(synth, beta, pump_plan, squid_fraction)
    elements = [Inverter(j=synth.inverters[0])]
    for k, pole in enumerate(poles):
        elements.append(pole)
        elements.append(Inverter(j=synth.inverters[k + 1]))
    return IsolatorNetlist(elements=tuple(elements), z0=synth.spec.z0)


def build_capacitive_netlist(synth: SynthesizedFilter, beta, pump_plan,
                             squid_fraction=1.0) -> IsolatorNetlist:
    """SQUID-loaded filter in the capacitively-coupled ladder form.

    Electrically equivalent to the inverter form near the band center and
    directly realizable by the time-domain engine.
    """
    lad = capacitive_ladder(synth)
    poles = _realized_poles(synth, beta, pump_plan, squid_fraction,
                            node_caps=lad.node_caps)
    elements = [SeriesCap(c=lad.c_in)]
    for k, pole in enumerate(poles):
        elements.append(pole)
        cnext = lad.c_couple[k] if k < len(lad.c_couple) else lad.c_out
        elements.append(SeriesCap(c=cnext))
    return IsolatorNetlist(elements=tuple(elements), z0=synth.spec.z0)


def _realized_poles(synth, beta, pump_plan, squid_fraction, node_caps=None):
    spec = synth.spec
    settings = pump_plan.per_squid(spec.order)
    poles = []
    for k, (alpha, wm, phase) in enumerate(settings):
        seed = SquidParams(ic0=1e-6, beta=beta, alpha=alpha,
                           pump_freq=wm, pump_phase=phase)
        real = realize_pole(synth.pole_impedances[k], spec.center_freq,
                            seed, squid_fraction)
        cap = real.cap if node_caps is None else node_caps[k]
        poles.append(SquidPole(cap=cap, geo_ind=real.geo_ind, squid=real.squid))
    return poles


def cascade_isolators(sp_a: SpectralSParams, sp_b: SpectralSParams):
    """Compose two pumped stages through an ideal interstage diplexer.

    The diplexer passes the center sideband unchanged and terminates every
    n != 0 sideband in a matched load, so only the center-sideband 2x2 blocks
    of each stage interact.  Returns the composed 2x2 center S-matrix as a
    SpectralSParams with n_sidebands = 0.
    """
    if not np.isclose(sp_a.freq, sp_b.freq):
        raise InvalidParameterError("stages must be evaluated at the same frequency")
    s11a, s21a = sp_a.entry(1, 1), sp_a.entry(2, 1)
    s12a, s22a = sp_a.entry(1, 2), sp_a.entry(2, 2)
    s11b, s21b = sp_b.entry(1, 1), sp_b.entry(2, 1)
    s12b, s22b = sp_b.entry(1, 2), sp_b.entry(2, 2)
    den = 1 - s22a * s11b
    if abs(den) < 1e-15:
        raise SingularNetworkError("interstage resonance: |1 - S22a*S11b| ~ 0",
                                   freq=sp_a.freq)
    one = np.ones((1, 1), dtype=complex)
    return SpectralSParams(
        s11=one * (s11a + s12a * s11b * s21a / den),
        s21=one * (s21b * s21a / den),
        s12=one * (s12a * s12b / den),
        s22=one * (s22b + s21b * s22a * s12b / den),
        n_sidebands=0, freq=sp_a.freq, z0=sp_a.z0)
