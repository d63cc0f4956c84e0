"""Asymptotic expansions of one-dimensional oscillatory integrals.

Every expansion is a finite list of terms ``coeff * lam**(-exponent)`` plus
the decay order guaranteed for the remainder.  Terms whose coefficient is
exactly zero are kept, so term ``k`` always belongs to ``a^(k)(0)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .amplitude import Amplitude
from .errors import BadParams, InadmissibleClass, InadmissiblePhase, SupportTooWide
from .fresnel import coeff_full_line, fresnel_general
from .jets import Jet, jet_compose, jet_mul, jet_powf, jet_revert
from .numerics import gamma, parse_sign, sign_str


@dataclass(frozen=True)
class Term:
    exponent: float
    coeff: complex
    index: object = None   # k for 1-D expansions, a multi-index for n-D ones


@dataclass(frozen=True)
class Expansion:
    terms: tuple
    remainder_exponent: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        exps = [t.exponent for t in self.terms]
        strict = self.meta.get("strict_order", True)
        for a, b in zip(exps, exps[1:]):
            if b < a or (strict and b == a):
                raise ValueError("expansion exponents must increase")
        if exps and self.remainder_exponent < exps[-1]:
            raise ValueError("remainder exponent below the last term exponent")

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms], dtype=complex)

    @property
    def exponents(self) -> np.ndarray:
        return np.array([t.exponent for t in self.terms], dtype=float)

    def __call__(self, lam):
        return evaluate_expansion(self, lam)

    def to_dict(self) -> dict:
        terms = []
        for t in self.terms:
            d = {"exponent": t.exponent, "re": t.coeff.real, "im": t.coeff.imag}
            if isinstance(t.index, tuple):
                d["alpha"] = list(t.index)
            elif t.index is not None:
                d["k"] = t.index
            terms.append(d)
        return {"terms": terms, "remainder_exponent": self.remainder_exponent,
                "meta": dict(self.meta)}


def evaluate_expansion(e: Expansion, lam) -> complex:
    """``sum coeff * lam**(-exponent)``; ``lam`` may be an array."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise BadParams("lambda must be > 0")
    total = np.zeros(lam.shape, dtype=complex)
    for t in e.terms:
        total = total + t.coeff * lam ** (-t.exponent)
    return complex(total) if total.ndim == 0 else total


def _check_N(N):
    if int(N) != N or N < 1:
        raise BadParams(f"N must be a positive integer, got {N!r}")
    return int(N)


def _check_admissible(a: Amplitude, p: float):
    if not a.delta < p - 1:
        raise InadmissibleClass(f"amplitude {a.name}: delta = {a.delta} is not < p - 1 = {p - 1}")


def _taylor(a: Amplitude, K: int) -> np.ndarray:
    """``a^(k)(0) / k!`` for k = 0..K."""
    return np.asarray(a.jet_at(0.0, K).coeffs, dtype=float)


def _check_m(m):
    if int(m) != m or m < 1:
        raise BadParams(f"m must be a positive integer, got {m!r}")
    return int(m)


def half_line_remainder(p: float, N: int) -> float:
    return (N + 1 - (p - math.floor(p))) / p


def expand_half_line(p: float, sign, a: Amplitude, N: int) -> Expansion:
    if not p > 0:
        raise BadParams("p must be > 0")
    N = _check_N(N)
    s = parse_sign(sign)
    _check_admissible(a, p)
    taylor = _taylor(a, N - 1)
    terms = tuple(Term((k + 1) / p, fresnel_general(p, k + 1, s) * taylor[k], k) for k in range(N))
    return Expansion(terms, half_line_remainder(p, N),
                     {"kind": "half_line", "p": p, "N": N, "sign": sign_str(s), "amplitude": a.name})


def expand_full_line(m: int, sign, a: Amplitude, N: int) -> Expansion:
    m = _check_m(m)
    N = _check_N(N)
    s = parse_sign(sign)
    _check_admissible(a, m)
    taylor = _taylor(a, N - 1)
    terms = tuple(Term((k + 1) / m, coeff_full_line(m, k, s) * taylor[k], k) for k in range(N))
    return Expansion(terms, (N + 1) / m,
                     {"kind": "full_line", "m": m, "N": N, "sign": sign_str(s), "amplitude": a.name})


def expand_parity_forms(l: int, sign, a: Amplitude, N: int, parity: str) -> Expansion:
    """Trigonometric forms of the full-line expansion for ``m = 2l - 1`` or ``m = 2l``.

    Odd powers pair the terms ``j = 2k`` (cosine) and ``j = 2k + 1`` (sine),
    giving ``2N`` terms; even powers only keep ``j = 2k`` and the listed
    terms run over ``j = 0..2N - 2`` with zeros at odd ``j``.
    """
    if int(l) != l or l < 1:
        raise BadParams(f"l must be a positive integer, got {l!r}")
    l = int(l)
    N = _check_N(N)
    s = parse_sign(sign)
    if parity in ("odd", "odd_power"):
        m = 2 * l - 1
        _check_admissible(a, m)
        taylor = _taylor(a, 2 * N - 1)
        terms = []
        for k in range(N):
            # cos vanishes exactly when (2k+1)/m is an odd integer
            th = math.pi * (2 * k + 1) / (2 * m)
            cos_th = 0.0 if (2 * k + 1) % m == 0 else math.cos(th)
            c_even = 2.0 / m * cos_th * gamma((2 * k + 1) / m).real
            terms.append(Term((2 * k + 1) / m, complex(c_even * taylor[2 * k]), 2 * k))
            th = math.pi * (2 * k + 2) / (2 * m)
            sin_th = 0.0 if (k + 1) % m == 0 else math.sin(th)
            c_odd = s * 2j / m * sin_th * gamma((2 * k + 2) / m).real
            terms.append(Term((2 * k + 2) / m, c_odd * taylor[2 * k + 1], 2 * k + 1))
        rem = (N + 1) / m
    elif parity in ("even", "even_power"):
        m = 2 * l
        _check_admissible(a, m)
        taylor = _taylor(a, 2 * N - 2)
        terms = []
        for j in range(2 * N - 1):
            if j % 2:
                terms.append(Term((j + 1) / m, 0j, j))
                continue
            c = cmath.exp(s * 0.5j * math.pi * (j + 1) / m) * gamma((j + 1) / m).real / l
            terms.append(Term((j + 1) / m, c * taylor[j], j))
        rem = N / l
    else:
        raise BadParams(f"parity must be 'odd' or 'even', got {parity!r}")
    # the stated remainder can sit below the last listed exponent; keep the
    # larger of the two so the expansion stays well formed
    last = terms[-1].exponent
    return Expansion(tuple(terms), max(rem, last),
                     {"kind": f"parity_{'odd' if m % 2 else 'even'}", "l": l, "m": m, "N": N,
                      "sign": sign_str(s), "amplitude": a.name, "stated_remainder": rem})


# ---------------------------------------------------------------------------
# analytic perturbations of the monomial phase

@dataclass(frozen=True)
class PhaseSeries:
    """Phase ``x^p (1 + sum_j a_j x^j)`` given by a finite coefficient prefix.

    ``func`` optionally evaluates the factor ``1 + sum_j a_j x^j`` in closed
    form (for example ``exp``) for quadrature.
    """

    p: float
    coeffs: tuple = ()
    func: Optional[Callable] = None
    name: str = "series"

    def __post_init__(self):
        if not self.p > 0:
            raise BadParams("phase power p must be > 0")
        c = tuple(float(v) for v in self.coeffs)
        if not all(math.isfinite(v) for v in c):
            raise InadmissiblePhase("phase coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def growth_bound(self) -> float:
        vals = [abs(a) ** (1.0 / j) for j, a in enumerate(self.coeffs, start=1) if a != 0]
        return max(vals) if vals else 0.0

    @property
    def R0(self) -> float:
        g = self.growth_bound
        return math.inf if g == 0 else 1.0 / (2.0 * g)

    def factor(self, x):
        """``1 + sum_j a_j x^j`` (or the closed form when given)."""
        x = np.asarray(x, dtype=float)
        if self.func is not None:
            return self.func(x)
        acc = np.zeros_like(x)
        for c in reversed(self.coeffs):
            acc = (acc + c) * x
        return 1.0 + acc

    def phase(self, x):
        x = np.asarray(x, dtype=float)
        if self.p == int(self.p):
            return x ** int(self.p) * self.factor(x)
        return x ** self.p * self.factor(x)

    @classmethod
    def exponential(cls, p: float, order: int = 30) -> "PhaseSeries":
        """``x^p e^x``: coefficients ``1 / j!``."""
        return cls(p, tuple(1.0 / math.factorial(j) for j in range(1, order + 1)), np.exp, "exp")

    @classmethod
    def monomial(cls, p: float) -> "PhaseSeries":
        return cls(p, (), None, "monomial")


def phase_substitution(phase: PhaseSeries, K: int) -> Jet:
    """Jet of ``Phi`` with ``Phi(y)^p (1 + sum a_j Phi(y)^j) = y^p``.

    ``Phi`` inverts ``f(x) = x (1 + sum a_j x^j)^(1/p)``.
    """
    u = np.zeros(K + 1)
    u[0] = 1.0
    for j, c in enumerate(phase.coeffs[:K], start=1):
        u[j] = c
    root = jet_powf(Jet(u), 1.0 / phase.p)
    f = jet_mul(Jet.identity(K), root)
    return jet_revert(f)


def composite_jet(phase: PhaseSeries, a: Amplitude, K: int) -> Jet:
    """Jet at 0 of ``a(Phi(y)) Phi'(y)`` up to order ``K``."""
    phi = phase_substitution(phase, K + 1)
    outer = a.jet_at(0.0, K + 1)
    comp = jet_compose(outer, phi).truncate(K)
    dphi = phi.deriv().truncate(K)
    return jet_mul(comp, dphi)


def expand_analytic_phase(phase: PhaseSeries, sign, a: Amplitude, N: int,
                          line: str = "half") -> Expansion:
    """Expansion for the phase ``x^p (1 + sum a_j x^j)``.

    After the substitution ``x = Phi(y)`` the integral has a monomial phase
    and amplitude ``a(Phi(y)) Phi'(y)``, whose Taylor coefficients come from
    jet reversion.  On the full line the coefficients are
    ``coeff_full_line(m, k)``.
    """
    N = _check_N(N)
    s = parse_sign(sign)
    p = phase.p
    if line not in ("half", "full"):
        raise BadParams(f"line must be 'half' or 'full', got {line!r}")
    if a.support_radius is None:
        raise SupportTooWide(f"amplitude {a.name} has no compact support")
    if not a.support_radius < phase.R0:
        raise SupportTooWide(f"support radius {a.support_radius} is not inside R0 = {phase.R0}")
    if line == "full" and p != int(p):
        raise BadParams("full-line expansion needs an integer power")
    K = N + 4
    comp = composite_jet(phase, a, K).coeffs
    if line == "half":
        terms = tuple(Term((k + 1) / p, fresnel_general(p, k + 1, s) * comp[k], k) for k in range(N))
        rem = half_line_remainder(p, N)
    else:
        m = int(p)
        terms = tuple(Term((k + 1) / m, coeff_full_line(m, k, s) * comp[k], k) for k in range(N))
        rem = (N + 1) / m
    return Expansion(terms, rem, {"kind": f"analytic_{line}", "p": p, "N": N, "sign": sign_str(s),
                                  "amplitude": a.name, "phase": phase.name, "jet_order": K,
                                  "R0": phase.R0})
