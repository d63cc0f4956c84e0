"""Complex Gamma function and the principal Lambert W branch."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import BadParams, DomainError, PoleError

POLE_TOL = 1e-12

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_2k / (2k (2k - 1)) for the Stirling tail, k = 1..10.
_STIRLING = tuple(
    b / (2 * k * (2 * k - 1))
    for k, b in enumerate(
        (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
         -3617 / 510, 43867 / 798, -174611 / 330),
        start=1,
    )
)
_STIRLING_RADIUS = 10.0


@dataclass(frozen=True)
class RealInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


def parse_sign(sign) -> int:
    """Normalise ``'+'``, ``'-'``, ``'plus'``, ``'minus'``, ``+1``, ``-1`` to +1/-1."""
    if isinstance(sign, str):
        s = sign.strip().lower()
        if s in ("+", "plus", "+1", "p"):
            return 1
        if s in ("-", "minus", "-1", "m"):
            return -1
    elif sign in (1, -1):
        return int(sign)
    raise BadParams(f"unrecognised sign {sign!r}")


def sign_str(sign: int) -> str:
    return "+" if sign > 0 else "-"


def pole_index(z, tol: float = POLE_TOL):
    """Return j >= 0 if ``z`` lies within ``tol`` of ``-j``, else None."""
    z = complex(z)
    if abs(z.imag) >= tol or z.real > tol:
        return None
    j = round(-z.real)
    if abs(z.real + j) < tol:
        return int(j)
    return None


def _gamma_stirling(z: complex) -> complex:
    s = (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    term = zinv
    for c in _STIRLING:
        s += c * term
        term *= zinv2
    return cmath.exp(s)


def _gamma_right(z: complex) -> complex:
    # Lanczos loses ~1e-13 for |Im z| ~ 50; Stirling is sharper out there.
    if abs(z) >= _STIRLING_RADIUS:
        return _gamma_stirling(z)
    z = z - 1.0
    x = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        x += _LANCZOS_COEFFS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # exp of a combined log keeps t**(z+1/2) from overflowing early
    return _SQRT_2PI * x * cmath.exp((z + 0.5) * cmath.log(t) - t)


def gamma(z) -> complex:
    """Gamma function on the complex plane.

    Raises PoleError when ``z`` is within 1e-12 of a non-positive integer.
    """
    z = complex(z)
    j = pole_index(z)
    if j is not None:
        raise PoleError(f"Gamma has a pole at z = {-j}", location=-j, order=1)
    if z.real < 0.5:
        s = cmath.sin(math.pi * z)
        return math.pi / (s * _gamma_right(1.0 - z))
    return _gamma_right(z)


def lambert_w0(y: float) -> float:
    """Principal branch W0 of the inverse of x*exp(x), for y >= -1/e."""
    y = float(y)
    branch = -math.exp(-1.0)
    if y < branch - 1e-15:
        raise DomainError(f"lambert_w0 undefined below -1/e (got {y!r})")
    if y <= branch:
        return -1.0
    if y == 0.0:
        return 0.0
    if math.isinf(y):
        return math.inf

    if y < -0.25:
        # branch-point series in p = sqrt(2(e*y + 1))
        p = math.sqrt(2.0 * (math.e * y + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    elif y < 3.0:
        w = math.log1p(y) * (1.0 - math.log1p(math.log1p(y)) / (2.0 + math.log1p(y)))
    else:
        l1 = math.log(y)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1

    for _ in range(20):
        ew = math.exp(w)
        f = w * ew - y
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        dw = f / denom
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    return max(w, -1.0)


def lambert_w0_prime(y: float) -> float:
    """dW0/dY = 1 / ((1 + W) exp(W))."""
    w = lambert_w0(y)
    return 1.0 / ((1.0 + w) * math.exp(w))
