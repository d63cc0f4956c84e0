"""Amplitude functions with exact derivatives and class metadata.

An amplitude carries the two class parameters ``tau`` and ``delta`` of the
symbol-type bound ``|a^(k)(x)| <= C_k <x>^(tau + delta k)``. Whether it is
admissible for a phase ``x**p`` depends on ``p`` (``delta < p - 1``) and is
checked by the callers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BadParams
from .jets import Jet, jet_div, jet_exp, jet_mul, jet_powf

# Beyond this distance from the origin a Gaussian factor and its first ~20
# derivatives sit below 1e-30, so it is treated as numerically supported.
GAUSSIAN_NEGLIGIBLE_RADIUS = 12.0

JetFn = Callable[[np.ndarray, int], np.ndarray]


@dataclass(frozen=True, eq=False)
class Amplitude:
    """Real amplitude ``a(x)`` exposing values, derivatives and jets.

    ``jet_fn(x, K)`` returns an array of shape ``(K + 1,) + x.shape`` holding
    ``a^(k)(x) / k!``.
    """

    name: str
    jet_fn: JetFn
    tau: float = 0.0
    delta: float = -1.0
    support_radius: Optional[float] = None
    negligible_radius: Optional[float] = None
    value_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: dict = field(default_factory=dict)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        if self.value_fn is not None:
            return self.value_fn(x)
        return self.jet_fn(x, 0)[0]

    __call__ = eval

    def jet_at(self, x, K: int) -> Jet:
        x = np.asarray(x, dtype=float)
        return Jet(self.jet_fn(x, K))

    def deriv(self, k: int, x):
        if k < 0:
            raise ValueError("derivative order must be >= 0")
        if k == 0:
            return self.eval(x)
        x = np.asarray(x, dtype=float)
        return self.jet_fn(x, k)[k] * math.factorial(k)

    def derivs_at_zero(self, K: int) -> np.ndarray:
        """``a^(k)(0)`` for k = 0..K."""
        return self.jet_at(0.0, K).derivatives()

    @property
    def effective_radius(self) -> Optional[float]:
        """Radius outside which ``a`` vanishes, exactly or numerically."""
        if self.support_radius is not None:
            return self.support_radius
        return self.negligible_radius

    def with_class(self, tau: float, delta: float) -> "Amplitude":
        return Amplitude(self.name, self.jet_fn, tau, delta, self.support_radius,
                         self.negligible_radius, self.value_fn, dict(self.params))


# ---------------------------------------------------------------------------
# jet helpers

def _shape_zeros(x, K):
    return np.zeros((K + 1,) + np.shape(x))


def gaussian_jet(x, K):
    """Coefficients ``(-1)^k H_k(x) exp(-x^2) / k!`` via the Hermite recurrence."""
    x = np.asarray(x, dtype=float)
    out = _shape_zeros(x, K)
    g = np.exp(-x * x)
    h_prev = np.ones_like(x)
    out[0] = g
    if K == 0:
        return out
    h = 2.0 * x
    fact = 1.0
    for k in range(1, K + 1):
        fact *= k
        out[k] = (-1) ** k * h * g / fact
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return out


def poly_jet(coeffs, x, K):
    """Taylor coefficients at ``x`` of the polynomial ``sum coeffs[i] t**i``."""
    x = np.asarray(x, dtype=float)
    out = _shape_zeros(x, K)
    poly = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    fact = 1.0
    for k in range(K + 1):
        if k:
            fact *= k
        out[k] = poly(x) / fact
        poly = poly.deriv()
    return out


def _mollifier(t_jet: Jet) -> Jet:
    """Jet of ``g(t) = exp(-1/t)`` for t > 0, zero for t <= 0."""
    t0 = t_jet.coeffs[0]
    out = np.zeros_like(t_jet.coeffs, dtype=float)
    # exp(-1/t) * poly(1/t) is below 1e-100 for t < 2e-3 at the orders used
    live = t0 > 2e-3
    if np.any(live):
        sub = Jet(t_jet.coeffs[:, live])
        inv = jet_div(Jet.constant(np.ones(sub.batch_shape), sub.order), sub)
        out[:, live] = jet_exp(-inv).coeffs
    return Jet(out)


def smooth_step_jet(x, K, r0, r1):
    """Jet of the cut-off: 1 on |x| <= r0, 0 on |x| >= r1, C-infinity between.

    ``step = g(u) / (g(u) + g(1 - u))`` with ``u = (r1 - |x|) / (r1 - r0)`` with ``g(t) = exp(-1/t)``.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape
    xf = x.ravel()
    out = np.zeros((K + 1, xf.size))
    s = np.abs(xf)
    out[0, s <= r0] = 1.0
    mid = (s > r0) & (s < r1)
    if np.any(mid):
        xm = xf[mid]
        sgn = np.where(xm >= 0.0, 1.0, -1.0)
        sj = np.zeros((K + 1, xm.size))
        sj[0] = np.abs(xm)
        if K >= 1:
            sj[1] = sgn
        s_jet = Jet(sj)
        w = r1 - r0
        num = _mollifier((r1 - s_jet) * (1.0 / w))
        den = num + _mollifier((s_jet - r0) * (1.0 / w))
        out[:, mid] = jet_div(num, den).coeffs
    return out.reshape((K + 1,) + shape)


def _squeeze_like(arr, x):
    return arr.reshape((arr.shape[0],) + np.shape(x))


# ---------------------------------------------------------------------------
# builtins

def gaussian() -> Amplitude:
    return Amplitude("gaussian", gaussian_jet, tau=0.0, delta=-1.0,
                     negligible_radius=GAUSSIAN_NEGLIGIBLE_RADIUS,
                     value_fn=lambda x: np.exp(-x * x))


def constant_one() -> Amplitude:
    def jet(x, K):
        out = _shape_zeros(x, K)
        out[0] = 1.0
        return out

    return Amplitude("constant_one", jet, tau=0.0, delta=-1.0,
                     value_fn=lambda x: np.ones_like(x))


def zero() -> Amplitude:
    return Amplitude("zero", lambda x, K: _shape_zeros(x, K), tau=0.0, delta=-1.0,
                     support_radius=0.0, value_fn=lambda x: np.zeros_like(x))


def poly_times_gaussian(coeffs: Sequence[float]) -> Amplitude:
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise BadParams("poly_times_gaussian needs at least one coefficient")
    poly = np.polynomial.Polynomial(coeffs)

    def jet(x, K):
        return jet_mul(Jet(poly_jet(coeffs, x, K)), Jet(gaussian_jet(x, K))).coeffs

    return Amplitude("poly_times_gaussian", jet, tau=0.0, delta=-1.0,
                     negligible_radius=GAUSSIAN_NEGLIGIBLE_RADIUS + len(coeffs),
                     value_fn=lambda x: poly(x) * np.exp(-x * x),
                     params={"coeffs": coeffs})


def rational_decay(power: float) -> Amplitude:
    """``(1 + x^2)^(-power/2)``, i.e. ``<x>^-power``."""
    power = float(power)
    if not power > 0:
        raise BadParams("rational_decay power must be > 0")

    def jet(x, K):
        x = np.asarray(x, dtype=float)
        base = _shape_zeros(x, K)
        base[0] = 1.0 + x * x
        if K >= 1:
            base[1] = 2.0 * x
        if K >= 2:
            base[2] = 1.0
        return jet_powf(Jet(base), -power / 2.0).coeffs

    return Amplitude("rational_decay", jet, tau=-power, delta=-1.0,
                     value_fn=lambda x: (1.0 + x * x) ** (-power / 2.0),
                     params={"power": power})


def _check_radii(r0, r1, min_r0):
    if not (r0 >= min_r0 and r1 > r0):
        raise BadParams(f"need r0 >= {min_r0} and r1 > r0, got r0={r0}, r1={r1}")


def bump(r0: float = 1.0, r1: float = 2.0) -> Amplitude:
    """Smooth cut-off: exactly 1 on ``|x| <= r0`` and 0 on ``|x| >= r1``."""
    r0, r1 = float(r0), float(r1)
    _check_radii(r0, r1, 1.0)
    return _bump(r0, r1, "bump")


def _bump(r0, r1, name):
    return Amplitude(name, lambda x, K: smooth_step_jet(x, K, r0, r1),
                     tau=0.0, delta=-1.0, support_radius=r1,
                     params={"r0": r0, "r1": r1})


def gaussian_bump(r0: float = 0.5, r1: float = 1.0) -> Amplitude:
    """Gaussian times a cut-off with arbitrary radii ``0 < r0 < r1``."""
    r0, r1 = float(r0), float(r1)
    _check_radii(r0, r1, 0.0)
    if r0 <= 0:
        raise BadParams("gaussian_bump needs r0 > 0")

    def jet(x, K):
        return jet_mul(Jet(gaussian_jet(x, K)), Jet(smooth_step_jet(x, K, r0, r1))).coeffs

    return Amplitude("gaussian_bump", jet, tau=0.0, delta=-1.0, support_radius=r1,
                     params={"r0": r0, "r1": r1})


def reflected(a: Amplitude) -> Amplitude:
    """``x -> a(-x)``."""

    def jet(x, K):
        c = a.jet_fn(-np.asarray(x, dtype=float), K)
        signs = (-1.0) ** np.arange(K + 1)
        return c * signs.reshape((-1,) + (1,) * (c.ndim - 1))

    value = None if a.value_fn is None else (lambda x: a.value_fn(-x))
    return Amplitude(f"reflected({a.name})", jet, a.tau, a.delta, a.support_radius,
                     a.negligible_radius, value, dict(a.params))


def from_function(func: Callable[[np.ndarray], np.ndarray], support_radius: float,
                  name: str = "sampled") -> Amplitude:
    """Amplitude known only by its values, supported in ``[-r, r]``.

    Derivatives are available only where the function vanishes identically,
    which is all the quadrature oracle needs once the cut-off radius covers
    the support.
    """
    r = float(support_radius)

    def value(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        inside = np.abs(x) <= r
        if np.any(inside):
            out[inside] = func(x[inside])
        return out

    def jet(x, K):
        x = np.asarray(x, dtype=float)
        out = np.zeros((K + 1,) + x.shape, dtype=complex)
        inside = np.abs(x) <= r
        if K > 0 and np.any(inside):
            raise NotImplementedError(f"{name}: derivatives unavailable inside the support")
        out[0] = value(x)
        return out

    return Amplitude(name, jet, tau=0.0, delta=-1.0, support_radius=r, value_fn=value)


BUILTINS = {
    "gaussian": gaussian,
    "constant_one": constant_one,
    "zero": zero,
    "poly_times_gaussian": poly_times_gaussian,
    "rational_decay": rational_decay,
    "bump": bump,
    "gaussian_bump": gaussian_bump,
}


def builtin(name: str, *args, **kwargs) -> Amplitude:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise BadParams(f"unknown amplitude {name!r}; choose from {sorted(BUILTINS)}") from None
    try:
        return factory(*args, **kwargs)
    except TypeError as exc:
        raise BadParams(str(exc)) from None


def parse_amplitude(text: str) -> Amplitude:
    """Parse ``"name"`` or ``"name:arg1,arg2"`` (e.g. ``"bump:1,2"``)."""
    name, _, rest = text.strip().partition(":")
    if name == "poly_times_gaussian":
        return builtin(name, [float(v) for v in rest.split(",") if v])
    args = [float(v) for v in rest.split(",") if v.strip()]
    return builtin(name, *args)


# ---------------------------------------------------------------------------
# class diagnostics

@dataclass
class ClassReport:
    p: float
    tau: float
    delta: float
    admissible: bool
    seminorm: float
    per_order: list
    bounded: bool
    k_max: int

    @property
    def reason(self) -> str:
        if self.admissible:
            return f"delta = {self.delta} < p - 1 = {self.p - 1}"
        return f"delta = {self.delta} >= p - 1 = {self.p - 1}"


def class_check(a: Amplitude, p: float, sample_grid, k_max: int) -> ClassReport:
    """Empirical seminorm ``max_k sup_grid <x>^(-tau - delta k) |a^(k)(x)|``.

    A finite grid can only sample the supremum; the result is a diagnostic,
    not a proof of class membership.
    """
    if not p > 0:
        raise BadParams("p must be > 0")
    if k_max < 0:
        raise BadParams("k_max must be >= 0")
    x = np.asarray(sample_grid, dtype=float)
    jet = a.jet_at(x, k_max).derivatives()
    weight = np.sqrt(1.0 + x * x)
    per_order = []
    for k in range(k_max + 1):
        mag = np.abs(jet[k])
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.where(mag > 0, mag * weight ** (-(a.tau + a.delta * k)), 0.0)
        per_order.append(float(np.max(vals)) if vals.size else 0.0)
    seminorm = max(per_order) if per_order else 0.0
    return ClassReport(p=p, tau=a.tau, delta=a.delta, admissible=bool(a.delta < p - 1),
                       seminorm=seminorm, per_order=per_order,
                       bounded=bool(np.isfinite(seminorm)), k_max=k_max)


# ---------------------------------------------------------------------------
# n-dimensional amplitudes

@dataclass(frozen=True, eq=False)
class AmplitudeND:
    """Amplitude on R^n: values plus mixed partials at the origin.

    ``func`` takes an array of shape ``(n, ...)``; ``partial_fn(alpha)``
    returns the mixed derivative ``d^alpha a(0)``.
    """

    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    partial_fn: Callable[[tuple], float]
    support_radius: float
    name: str = "nd"
    factors: Optional[tuple] = None

    def eval(self, x):
        return self.func(np.asarray(x, dtype=float))

    __call__ = eval

    def partial_at_zero(self, alpha) -> float:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.dim:
            raise BadParams(f"multi-index {alpha} does not match dimension {self.dim}")
        return self.partial_fn(alpha)


def tensor(*factors: Amplitude, support_radius: Optional[float] = None) -> AmplitudeND:
    """Separable amplitude ``prod_j a_j(x_j)``.

    ``support_radius`` overrides the radius used for quadrature; values of a
    gaussian factor are below 1e-21 beyond 7, a smaller radius than the one
    needed for its derivatives.
    """
    if not factors:
        raise BadParams("tensor needs at least one factor")
    radii = [f.effective_radius for f in factors]
    if support_radius is not None:
        radii = [float(support_radius)]
    if any(r is None for r in radii):
        raise BadParams("tensor factors must be (numerically) compactly supported")

    def func(x):
        out = factors[0].eval(x[0])
        for j in range(1, len(factors)):
            out = out * factors[j].eval(x[j])
        return out

    def partial(alpha):
        val = 1.0
        for f, k in zip(factors, alpha):
            val *= float(f.deriv(k, 0.0))
        return val

    name = "tensor(" + ",".join(f.name for f in factors) + ")"
    return AmplitudeND(len(factors), func, partial, float(max(radii)), name, tuple(factors))
