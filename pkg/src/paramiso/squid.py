"""DC-SQUID inductance model and its multi-sideband spectral impedance.

A DC-SQUID biased away from zero flux behaves as a flux-tunable inductor.
Modulating the flux at a pump frequency ``omega_m`` turns it into a
periodically time-varying inductor that mixes a signal at ``omega`` into
sidebands at ``omega + n*omega_m``.  Expanding the inductance to second
order in the RF flux amplitude yields a banded spectral impedance matrix
whose off-diagonals carry the three-wave (first sideband) and four-wave
(second sideband) conversion amplitudes.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DivergentInductanceError, InvalidParameterError

#: Magnetic flux quantum h/2e [Wb].
PHI0 = 2.067833848e-15


@dataclass(frozen=True)
class SquidParams:
    """Physical state of one flux-pumped DC-SQUID.

    Attributes
    ----------
    ic0 : float
        Critical current of a single junction [A]; the SQUID carries 2*ic0.
    beta : float
        DC flux bias expressed as a phase, pi*Phi_DC/Phi0 [rad].
    alpha : float
        RF flux modulation amplitude, also a phase [rad].
    pump_freq : float
        Angular modulation frequency omega_m [rad/s].
    pump_phase : float
        Modulation phase phi [rad].
    """

    ic0: float
    beta: float
    alpha: float = 0.0
    pump_freq: float = 0.0
    pump_phase: float = 0.0

    def __post_init__(self):
        if not np.isfinite([self.ic0, self.beta, self.alpha,
                            self.pump_freq, self.pump_phase]).all():
            raise InvalidParameterError("SQUID parameters must be finite")
        if self.ic0 <= 0:
            raise InvalidParameterError(f"ic0 must be positive, got {self.ic0}")
        if abs(self.beta) >= np.pi / 2:
            raise DivergentInductanceError(
                f"DC flux phase beta={self.beta:.4f} outside (-pi/2, pi/2)")
        if self.alpha < 0:
            raise InvalidParameterError(f"alpha must be >= 0, got {self.alpha}")
        if self.alpha > 0.5:
            warnings.warn(
                f"alpha={self.alpha:.3f} exceeds the small-pump regime (alpha <= 0.5); "
                "the second-order expansion may be inaccurate", stacklevel=2)

    def with_pump(self, alpha=None, pump_freq=None, pump_phase=None):
        """Return a copy with the RF pump settings replaced."""
        return SquidParams(
            ic0=self.ic0,
            beta=self.beta,
            alpha=self.alpha if alpha is None else alpha,
            pump_freq=self.pump_freq if pump_freq is None else pump_freq,
            pump_phase=self.pump_phase if pump_phase is None else pump_phase,
        )


@dataclass(frozen=True)
class MixingCoeffs:
    """Second-order mixing coefficients of a pumped SQUID.

    ``l0`` is the static inductance at the DC bias point; ``gamma`` scales the
    non-converting (diagonal) impedance; ``kappa_plus/minus`` are the
    single-sideband (three-wave) conversion amplitudes and
    ``eta_plus/minus`` the double-sideband (four-wave) ones.
    """

    l0: float
    gamma: float
    eta_plus: complex
    eta_minus: complex
    kappa_plus: complex
    kappa_minus: complex


def squid_inductance(ic0, applied_flux_phase):
    """Inductance of a DC-SQUID at a given applied flux.

    Parameters
    ----------
    ic0 : float
        Single-junction critical current [A].
    applied_flux_phase : float or ndarray
        pi*Phi_A/Phi0 [rad].

    Returns
    -------
    float or ndarray
        Phi0 / (2*pi * 2*ic0 * cos(applied_flux_phase)) [H].
    """
    c = np.cos(applied_flux_phase)
    if np.any(np.abs(c) < 1e-12):
        raise DivergentInductanceError(
            "applied flux phase at +/-pi/2: inductance diverges")
    return PHI0 / (4 * np.pi * ic0 * c)


def mixing_coeffs(params: SquidParams) -> MixingCoeffs:
    """Static inductance and sideband conversion coefficients of a pumped SQUID."""
    l0 = squid_inductance(params.ic0, params.beta)
    a, phi = params.alpha, params.pump_phase
    gamma = 1 + a**2 / 4
    eta_p = a**2 * np.exp(2j * phi) / 4
    kap_p = np.tan(params.beta) * a * np.exp(1j * phi) / 2
    return MixingCoeffs(
        l0=l0, gamma=gamma,
        eta_plus=eta_p, eta_minus=np.conj(eta_p),
        kappa_plus=kap_p, kappa_minus=np.conj(kap_p),
    )


def time_inductance(params: SquidParams, t, exact=True):
    """Instantaneous SQUID inductance under flux modulation.

    Parameters
    ----------
    params : SquidParams
    t : float or ndarray
        Time [s].
    exact : bool
        If True evaluate the full cosine flux relation; otherwise use the
        second-order expansion in the RF amplitude (the same truncation that
        underlies the spectral impedance matrix).

    Returns
    -------
    float or ndarray
        Inductance [H], periodic with period 2*pi/pump_freq.
    """
    x = params.alpha * np.cos(params.pump_freq * np.asarray(t) + params.pump_phase)
    if exact:
        return squid_inductance(params.ic0, params.beta + x)
    l0 = squid_inductance(params.ic0, params.beta)
    return l0 * (1 + np.tan(params.beta) * x + x**2 / 2)


def spectral_impedance(params: SquidParams, omega, n_sidebands):
    """Spectral impedance matrix of a flux-pumped SQUID.

    Couples currents and voltages at the sideband frequencies
    ``omega_n = omega + n*pump_freq`` for ``n`` in ``[-N, N]``.  The matrix
    is banded with bandwidth 2 in sideband index: first sidebands couple via
    ``kappa``, second sidebands via ``eta``.  Frequencies are kept signed;
    entries at negative ``omega_n`` acquire a negative imaginary prefactor,
    which is what produces parametric gain when the pump sits far above the
    signal band.

    Parameters
    ----------
    params : SquidParams
    omega : float
        Signal angular frequency [rad/s].
    n_sidebands : int
        N >= 2; matrix dimension is 2N+1.

    Returns
    -------
    ndarray
        Complex (2N+1, 2N+1) impedance matrix, center index N.
    """
    if n_sidebands < 2:
        raise InvalidParameterError(
            f"n_sidebands must be >= 2, got {n_sidebands}")
    if omega <= 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    mc = mixing_coeffs(params)
    coeff = {0: mc.gamma,
             1: mc.kappa_plus, -1: mc.kappa_minus,
             2: mc.eta_plus, -2: mc.eta_minus}
    dim = 2 * n_sidebands + 1
    offsets = np.arange(dim) - n_sidebands
    wn = omega + offsets * params.pump_freq
    z = np.zeros((dim, dim), dtype=complex)
    for d, c in coeff.items():
        idx = np.arange(max(0, d), min(dim, dim + d))
        z[idx, idx - d] = 1j * wn[idx] * mc.l0 * c
    return z


def sideband_freqs(omega, pump_freq, n_sidebands):
    """Signed sideband frequencies omega + n*pump_freq for n in [-N, N]."""
    offsets = np.arange(-n_sidebands, n_sidebands + 1)
    return omega + offsets * pump_freq
