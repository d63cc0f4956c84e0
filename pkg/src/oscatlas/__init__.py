"""Oscillatory integrals with monomial and analytic phases.

Closed forms for generalized Fresnel integrals, asymptotic expansions in
inverse powers of the frequency, and quadrature oracles to check them.
"""
from .amplitude import (Amplitude, AmplitudeND, builtin, class_check, parse_amplitude,
                        reflected, tensor)
from .errors import *  # noqa: F401,F403
from .expansion import (Expansion, PhaseSeries, Term, composite_jet, evaluate_expansion,
                        expand_analytic_phase, expand_full_line, expand_half_line,
                        expand_parity_forms)
from .expansion_nd import IndexSet, PhaseND, expand_nd, omega_set, preset_phase
from .fresnel import beta_extended, coeff_full_line, coeff_minus, fresnel_general
from .jets import Jet, jet_compose, jet_div, jet_exp, jet_mul, jet_powf, jet_revert
from .numerics import gamma, lambert_w0, lambert_w0_prime
from .oracle import (OracleConfig, OracleResult, oscillatory_full_line, oscillatory_half_line,
                     oscillatory_nd)
from .regularizer import SplitConfig, apply_Lstar, c_table, l_min

__version__ = "0.1.0"
