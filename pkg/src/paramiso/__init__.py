"""Simulation, synthesis, and pump tuning for SQUID-based parametric isolators."""

__version__ = "0.1.0"

from .coupled_mode import (IsolationBand, ModeGraph, build_coupling_matrix,
                           directionality_closed_form, directionality_db,
                           mode_sparams, pump_window)
from .errors import (ConfigError, DivergentInductanceError,
                     InfeasibleWindowError, InvalidParameterError,
                     ParamisoError, ResolutionError, SingularNetworkError)
from .oracle import (TransientRun, extract_sideband_sparams, power_spectrum,
                     simulate, tone_amplitude)
from .spectral import (Inverter, IsolatorNetlist, SeriesCap, SpectralABCD,
                       SpectralSParams, SquidPole, TransmissionLine,
                       build_capacitive_netlist, build_inverter_netlist,
                       cascade, cascade_isolators, directionality,
                       isolator_sparams, netlist_sparams, to_sparams,
                       two_squid_circuit)
from .squid import (PHI0, MixingCoeffs, SquidParams, mixing_coeffs,
                    spectral_impedance, squid_inductance, time_inductance)
from .synthesis import (CapacitiveLadder, FilterSpec, SynthesizedFilter,
                        capacitive_ladder, chebyshev_prototype, fractional_bw,
                        inverter_values, pole_impedances, realize_pole,
                        synthesize, tl_input_impedance)
from .tuner import (BandMetrics, IsolatorDesign, PumpPlan, TuneObjective,
                    TuneResult, amplification_preset, evaluate_plan, optimize,
                    sweep_coupled, sweep_plan, sweep_two_squid)
