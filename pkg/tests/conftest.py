"""Shared fixtures and independent reference implementations.

The reference implementations here are deliberately written from scratch
(textbook ladder analysis, explicit closed-form block algebra) so that the
package code is checked against something other than itself.
"""

import numpy as np
import pytest

from paramiso.spectral import squid_pole_admittance


def db(x):
    return 20 * np.log10(np.abs(x))


def lowpass_ladder_s21(g, omega):
    """|S21|^2 of the low-pass prototype ladder, computed by brute force.

    Source resistance g[0], load g[-1]; elements g[1..n] alternate shunt
    capacitor / series inductor starting with a shunt capacitor.  This is an
    independent check on the prototype recursion: if the g-values are right,
    the response is equiripple with exactly the design ripple for omega <= 1.
    """
    n = len(g) - 2
    a, b, c, d = 1.0 + 0j, 0.0 + 0j, 0.0 + 0j, 1.0 + 0j
    for k in range(1, n + 1):
        if k % 2:  # shunt capacitor
            ya = 1j * omega * g[k]
            a, b, c, d = a + b * ya, b, c + d * ya, d
        else:  # series inductor
            zb = 1j * omega * g[k]
            a, b, c, d = a, a * zb + b, c, c * zb + d
    # with a shunt-first ladder, g[-1] is a conductance for even orders
    rs, rl = g[0], 1 / g[-1]
    denom = a * rl + b + c * rs * rl + d * rs
    s21 = 2 * np.sqrt(rs * rl) / denom
    return abs(s21) ** 2


def three_pole_closed_form(j01, j12, j23, j34, y1, y2, y3):
    """Closed-form ABCD blocks of inverter-coupled three-pole network.

    Derived independently by multiplying out
    K(j01) P(y1) K(j12) P(y2) K(j23) P(y3) K(j34)
    with K(j) = [[0, i/j], [ij, 0]] and P(y) = [[I, 0], [y, I]].
    Matrix products are kept in circuit order (y1 @ y2 etc.).
    """
    eye = np.eye(y1.shape[0], dtype=complex)
    a = j34 * (j12**2 * eye + y1 @ y2) / (j01 * j12 * j23)
    b = (j23**2 * y1 + j12**2 * y3 + y1 @ y2 @ y3) / (j01 * j12 * j23 * j34)
    c = j01 * j34 * y2 / (j12 * j23)
    d = j01 * (j23**2 * eye + y2 @ y3) / (j12 * j23 * j34)
    return a, b, c, d


def pole_admittance(pole, omega, pump_freq, n_sidebands):
    # thin re-export so tests build closed-form oracles from the same poles
    return squid_pole_admittance(pole, omega, pump_freq, n_sidebands)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20250823)
