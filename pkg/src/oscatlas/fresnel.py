"""Generalized Fresnel integrals and the coefficients built from them.

``fresnel_general(p, q, s)`` is the oscillatory integral of
``exp(s i x**p) x**(q-1)`` over ``(0, inf)``, which equals
``p**-1 exp(s i pi q / (2p)) Gamma(q/p)``.
"""
from __future__ import annotations

import cmath
import math

from .errors import BadParams, PoleError
from .numerics import gamma, parse_sign, pole_index


def _check_p(p):
    if not p > 0:
        raise BadParams(f"phase power p must be > 0, got {p!r}")


def fresnel_general(p: float, q, sign="+") -> complex:
    s = parse_sign(sign)
    _check_p(p)
    q = complex(q)
    ratio = q / p
    j = pole_index(ratio)
    if j is not None:
        raise PoleError(f"pole of order 1 at q = -p*j = {-p * j:g} (p={p:g}, j={j})",
                        location=-p * j, order=1)
    return _quarter_turn(s * ratio) * gamma(ratio) / p


def _quarter_turn(t) -> complex:
    """``exp(i pi t / 2)``, exact when ``t`` is an integer."""
    if t.imag == 0 and t.real == round(t.real):
        return (1, 1j, -1, -1j)[int(round(t.real)) % 4]
    return cmath.exp(0.5j * math.pi * t)


def fresnel_meta(p: float, q) -> dict:
    """Provenance flags for a closed-form value."""
    q = complex(q)
    real_positive = q.imag == 0 and q.real > 0
    return {
        "p": p,
        "q": [q.real, q.imag],
        "formula": "closed_form",
        "validated_by_quadrature": bool(real_positive),
        "continuation": not real_positive,
    }


def _check_mk(m, k):
    if int(m) != m or m < 1:
        raise BadParams(f"m must be a positive integer, got {m!r}")
    if int(k) != k or k < 0:
        raise BadParams(f"k must be a non-negative integer, got {k!r}")
    return int(m), int(k)


def fresnel_reflected(m: int, k: int, sign="+") -> complex:
    """Integral of ``exp(s (-1)^m i y^m) y^k`` over ``(0, inf)``."""
    m, k = _check_mk(m, k)
    s = parse_sign(sign)
    return fresnel_general(m, k + 1, s * (-1) ** m)


def _full_line_vanishes(m, k):
    if m % 2 == 0:
        return k % 2 == 1
    return (k + 1) % m == 0


def coeff_full_line(m: int, k: int, sign="+") -> complex:
    """``I_{m,k+1} + (-1)^k I^{refl}_{m,k+1}``; exact zeros from parity."""
    m, k = _check_mk(m, k)
    s = parse_sign(sign)
    if _full_line_vanishes(m, k):
        return 0j
    return fresnel_general(m, k + 1, s) + (-1) ** k * fresnel_reflected(m, k, s)


def coeff_minus(m: int, k: int, sign="+") -> complex:
    """``I_{m,k+1} - (-1)^k I^{refl}_{m,k+1}``; zero for even m and even k."""
    m, k = _check_mk(m, k)
    s = parse_sign(sign)
    if m % 2 == 0 and k % 2 == 0:
        return 0j
    return fresnel_general(m, k + 1, s) - (-1) ** k * fresnel_reflected(m, k, s)


def beta_extended(p1, p2, p3, q1, q2, q3, sign="+") -> complex:
    """Beta-type ratio of three generalized Fresnel integrals.

    Reduces to the Euler Beta function ``B(q1, q2)`` at ``p = (1, 1, 1)``,
    ``q3 = q1 + q2``.
    """
    s = parse_sign(sign)
    for p in (p1, p2, p3):
        _check_p(p)
    i1 = fresnel_general(p1, q1, s)
    i2 = fresnel_general(p2, q2, s)
    i3 = fresnel_general(p3, q3, s)
    if i3 == 0:
        raise ZeroDivisionError("denominator Fresnel integral vanished")
    phase = cmath.exp(-s * 0.5j * math.pi * (complex(q1) / p1 + complex(q2) / p2 - complex(q3) / p3))
    return phase * (p1 * p2 / p3) * i1 * i2 / i3
