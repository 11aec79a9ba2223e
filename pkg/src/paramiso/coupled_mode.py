"""Six-mode coupled-mode model of a pumped two-pole band-pass filter.

The filter's two poles at the center frequency (modes A1, A2) acquire, under
flux modulation at the pump frequency, upper sidebands (B1, B2) and lower
sidebands (C1, C2).  Passive coupling beta_c links degenerate modes; the
parametric coupling beta_p links each pole to its own sidebands, with a
differential pump phase phi on the output-pole links.  The interference of
the conversion paths makes transmission non-reciprocal.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (InfeasibleWindowError, InvalidParameterError,
                     SingularNetworkError)

MODE_ORDER = ("A1", "A2", "B1", "B2", "C1", "C2")

#: dB cap used when reporting (near-)infinite directionality.
D_CAP_DB = 200.0


@dataclass(frozen=True)
class ModeGraph:
    """Six-mode graph of a pumped two-pole filter.

    Attributes
    ----------
    mode_freqs : ndarray
        Angular frequency of each mode in MODE_ORDER [rad/s].
    port_rates : ndarray
        External coupling rate of each mode to its port [rad/s]; odd entries
        couple to the input port, even entries to the output port.
    gamma0 : float
        Geometric-mean loss rate of the system [rad/s].
    beta_c : float
        Dimensionless passive coupling between degenerate modes.
    beta_p : float
        Dimensionless parametric coupling to the sidebands.
    phi : float
        Differential pump phase [rad].
    pump_freq : float
        Angular pump frequency [rad/s].
    """

    mode_freqs: np.ndarray
    port_rates: np.ndarray
    beta_c: float
    beta_p: float
    phi: float
    pump_freq: float
    gamma0: float = None

    def __post_init__(self):
        mf = np.asarray(self.mode_freqs, dtype=float)
        pr = np.asarray(self.port_rates, dtype=float)
        if mf.shape != (6,) or pr.shape != (6,):
            raise InvalidParameterError("mode_freqs and port_rates must have 6 entries")
        object.__setattr__(self, "mode_freqs", mf)
        object.__setattr__(self, "port_rates", pr)
        if self.gamma0 is None:
            object.__setattr__(self, "gamma0", float(np.exp(np.mean(np.log(pr)))))
        if not np.isfinite(mf).all() or not np.isfinite(pr).all():
            raise InvalidParameterError("graph parameters must be finite")
        if np.any(pr <= 0):
            raise InvalidParameterError("port rates must be positive")
        wa = mf[0]
        if not (np.allclose(mf[2:4], wa + self.pump_freq) and
                np.allclose(mf[4:6], wa - self.pump_freq)):
            raise InvalidParameterError(
                "sideband modes must sit at the A-mode frequency +/- pump_freq")
        if self.beta_c < 0 or self.beta_p < 0:
            raise InvalidParameterError("beta_c and beta_p must be >= 0")
        if not 0 <= self.phi < 2 * np.pi:
            raise InvalidParameterError("phi must lie in [0, 2*pi)")

    @classmethod
    def from_filter(cls, center_freq, bandwidth, ripple_db, pump_freq,
                    beta_p, phi, gamma_in=None, gamma_out=None):
        """Build the graph equivalent of a two-pole Chebyshev band-pass filter.

        The two poles map onto the A modes; the sidebands inherit the same
        port rates.  With prototype coefficients g0..g3, the pole decay rate
        into its port is BW/(g0*g1) and the inter-pole coupling rate is
        BW/(2*sqrt(g1*g2)); normalizing the latter by the former gives
        beta_c.  All frequencies are angular [rad/s].

        Parameters
        ----------
        center_freq, bandwidth, pump_freq : float
            Angular frequencies [rad/s].
        ripple_db : float
            In-band ripple of the underlying filter [dB].
        beta_p, phi : float
            Parametric coupling strength and differential pump phase.
        gamma_in, gamma_out : float, optional
            Port rate overrides; default is the pole decay rate BW/(g0*g1).
        """
        from .synthesis import chebyshev_prototype
        g = chebyshev_prototype(2, ripple_db)
        gamma0 = bandwidth / (g[0] * g[1])
        beta_c = (bandwidth / (2 * np.sqrt(g[1] * g[2]))) / gamma0
        gi = gamma0 if gamma_in is None else gamma_in
        go = gamma0 if gamma_out is None else gamma_out
        wa = center_freq
        mode_freqs = np.array([wa, wa,
                               wa + pump_freq, wa + pump_freq,
                               wa - pump_freq, wa - pump_freq])
        port_rates = np.array([gi, go] * 3, dtype=float)
        return cls(mode_freqs=mode_freqs, port_rates=port_rates,
                   beta_c=beta_c, beta_p=beta_p, phi=phi,
                   pump_freq=pump_freq)


@dataclass(frozen=True)
class DirectionalityTerms:
    """Closed-form pieces of the directionality ratio."""

    M_a: float
    zeta: float
    eta: float
    D: float


@dataclass(frozen=True)
class IsolationBand:
    """Desired isolation band relative to the linear filter band [rad/s]."""

    center: float
    iso_bw: float
    filter_bw: float

    def __post_init__(self):
        if self.iso_bw > self.filter_bw:
            raise InfeasibleWindowError(
                f"isolation bandwidth {self.iso_bw:.4g} exceeds filter "
                f"bandwidth {self.filter_bw:.4g}")


def build_coupling_matrix(graph: ModeGraph, signal_freq):
    """Assemble the 6x6 coupling matrix of the mode graph.

    Diagonal entries are detunings normalized by gamma0: the signal seen by
    a sideband mode is the applied signal shifted by +/- the pump frequency,
    referenced to the pole (A-mode) frequency, so that an on-resonance drive
    with equal couplings yields i/2 on the pole rows and i/2 +/- pump/gamma0
    on the sideband rows.  Off-diagonals place beta_c between degenerate
    modes and beta_p on the pole-sideband links, with phase factors
    exp(+/- i*phi) on the output-pole links.
    """
    if not np.isfinite(signal_freq) or signal_freq <= 0:
        raise InvalidParameterError(f"signal_freq must be positive and finite")
    shifts = np.array([0.0, 0.0, graph.pump_freq, graph.pump_freq,
                       -graph.pump_freq, -graph.pump_freq])
    pole_freqs = np.tile(graph.mode_freqs[:2], 3)
    delta = ((signal_freq + shifts) - pole_freqs
             + 1j * graph.port_rates / 2) / graph.gamma0
    bc, bp = graph.beta_c, graph.beta_p
    ep = np.exp(1j * graph.phi)
    em = np.conj(ep)
    m = np.array([
        [delta[0], bc,       bp,       0,        bp,       0],
        [bc,       delta[1], 0,        bp * ep,  0,        bp * em],
        [bp,       0,        delta[2], bc,       0,        0],
        [0,        bp * em,  bc,       delta[3], 0,        0],
        [bp,       0,        0,        0,        delta[4], bc],
        [0,        bp * ep,  0,        0,        bc,       delta[5]],
    ], dtype=complex)
    return m


def mode_sparams(graph: ModeGraph, signal_freq):
    """Scattering matrix between the port-coupled modes.

    Uses the input-output convention S = 1 - i*K*M^-1*K/gamma0 with
    K = diag(sqrt(port_rates)); the forward/reverse ratio is independent of
    this normalization.

    Returns
    -------
    ndarray
        6x6 complex scattering matrix in MODE_ORDER.  The forward amplitude
        (input A1 -> output A2) is entry [1, 0].
    """
    m = build_coupling_matrix(graph, signal_freq)
    try:
        minv = np.linalg.inv(m)
    except np.linalg.LinAlgError as exc:
        raise SingularNetworkError("coupling matrix is singular",
                                   freq=signal_freq) from exc
    k = np.sqrt(graph.port_rates)
    return np.eye(6) - 1j * (k[:, None] * minv * k[None, :]) / graph.gamma0


def directionality_closed_form(beta_c, beta_p, a, phi):
    """Closed-form directionality of the six-mode graph.

    Parameters
    ----------
    beta_c, beta_p : float
        Passive and parametric couplings.
    a : float
        Pump frequency normalized by the mean loss rate, omega_p/gamma0.
    phi : float
        Differential pump phase [rad].

    Returns
    -------
    DirectionalityTerms
        D is the linear forward/reverse ratio; +inf when the reverse path
        interferes to zero (complete suppression).
    """
    vals = np.asarray([beta_c, beta_p, a, phi], dtype=float)
    if not np.isfinite(vals).all():
        raise InvalidParameterError("all inputs must be finite")
    if beta_c <= 0:
        raise InvalidParameterError("beta_c must be positive")
    M_a = (-beta_c / 16 - beta_c**3 / 2 - beta_c**5
           - beta_c * a**2 / 2 + 2 * beta_c**3 * a**2 - beta_c * a**4)
    zeta = (beta_c * beta_p**2 / 2 + 2 * beta_c**3 * beta_p**2
            - 2 * beta_c * beta_p**2 * a**2)
    eta = 2 * beta_c * beta_p**2 * a
    num = abs(M_a + zeta * np.cos(phi) - eta * np.sin(phi))
    den = abs(M_a + zeta * np.cos(phi) + eta * np.sin(phi))
    d = np.inf if den == 0 else num / den
    return DirectionalityTerms(M_a=M_a, zeta=zeta, eta=eta, D=d)


def directionality_db(d_linear):
    """Directionality in dB, capped at +/-D_CAP_DB to keep sweeps plottable."""
    if d_linear == 0:
        return -D_CAP_DB
    if not np.isfinite(d_linear):
        return D_CAP_DB
    return float(np.clip(20 * np.log10(d_linear), -D_CAP_DB, D_CAP_DB))


def forward_transmission_approx(beta_p, b):
    """Small-coupling estimate of forward transmission, (1+beta_p^2)/(1+b*beta_p^2)."""
    if b <= 1:
        raise InvalidParameterError(f"b must exceed 1, got {b}")
    if beta_p < 0:
        raise InvalidParameterError("beta_p must be >= 0")
    return (1 + beta_p**2) / (1 + b * beta_p**2)


def pump_window(band: IsolationBand):
    """Feasible pump-frequency window [iso_bw, filter_bw] for a target band."""
    return band.iso_bw, band.filter_bw


def pump_sideband_freqs(omega_a, iso_bw, pump_freq):
    """Sidebands generated at the isolation band edges for a candidate pump.

    Returns (wB_plus, wC_plus, wB_minus, wC_minus): upper/lower sidebands of
    the upper (+) and lower (-) edge of the isolation band.
    """
    return (omega_a + iso_bw / 2 + pump_freq,
            omega_a + iso_bw / 2 - pump_freq,
            omega_a - iso_bw / 2 + pump_freq,
            omega_a - iso_bw / 2 - pump_freq)
