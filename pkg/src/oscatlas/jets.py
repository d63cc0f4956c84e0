"""Truncated Taylor series ("jets") with a fixed order K.

A jet stores ``c[0..K]`` with ``f(x0 + h) = sum c[k] h**k + O(h**(K+1))``.
The coefficient axis is axis 0, so a single :class:`Jet` can carry a whole
batch of expansion points: ``coeffs.shape == (K + 1,) + batch_shape``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import (NonpositiveLeadError, NonzeroInnerConstant,
                     NotInvertible, OrderMismatch)

DEFAULT_ORDER = 16

_ZERO_TOL = 1e-13


class Jet:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs)
        if c.dtype.kind not in "fc":
            c = c.astype(float)
        if c.ndim == 0:
            c = c.reshape(1)
        if not np.all(np.isfinite(c)):
            raise ValueError("jet coefficients must be finite")
        self.coeffs = c

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def batch_shape(self):
        return self.coeffs.shape[1:]

    def __len__(self):
        return self.coeffs.shape[0]

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        return f"Jet({np.array2string(self.coeffs, precision=6)})"

    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER):
        value = np.asarray(value)
        c = np.zeros((order + 1,) + value.shape, dtype=np.result_type(value, float))
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER, x0=0.0):
        """Jet of ``x -> x`` expanded at ``x0``."""
        x0 = np.asarray(x0, dtype=float)
        c = np.zeros((order + 1,) + x0.shape)
        c[0] = x0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            pad = np.zeros((order - self.order,) + self.batch_shape, dtype=self.coeffs.dtype)
            return Jet(np.concatenate([self.coeffs, pad]))
        return Jet(self.coeffs[: order + 1].copy())

    def derivatives(self):
        """Return ``f^(k)(x0)`` for k = 0..K."""
        fact = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.coeffs * fact.reshape((-1,) + (1,) * len(self.batch_shape))

    def deriv(self) -> "Jet":
        """Jet of f' (order drops by one)."""
        k = np.arange(1, self.order + 1, dtype=float)
        k = k.reshape((-1,) + (1,) * len(self.batch_shape))
        if self.order == 0:
            return Jet(np.zeros_like(self.coeffs))
        return Jet(self.coeffs[1:] * k)

    def __call__(self, h):
        out = 0.0
        for c in self.coeffs[::-1]:
            out = out * h + c
        return out

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            _check_orders(self, other)
            return other
        return Jet.constant(other, self.order)

    def __add__(self, other):
        if not isinstance(other, Jet):
            c = self.coeffs.astype(np.result_type(self.coeffs, np.asarray(other)), copy=True)
            c[0] = c[0] + other
            return Jet(c)
        _check_orders(self, other)
        return Jet(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div(self, other)
        return Jet(self.coeffs / other)

    def __rtruediv__(self, other):
        return jet_div(self._coerce(other), self)

    def __pow__(self, alpha):
        return jet_powf(self, alpha)


def _check_orders(f: Jet, g: Jet):
    if f.order != g.order:
        raise OrderMismatch(f"jet orders differ: {f.order} vs {g.order}")


def jet_mul(f: Jet, g: Jet) -> Jet:
    """Cauchy product truncated at the common order."""
    _check_orders(f, g)
    K = f.order
    a, b = f.coeffs, g.coeffs
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
    for k in range(K + 1):
        acc = a[0] * b[k]
        for i in range(1, k + 1):
            acc = acc + a[i] * b[k - i]
        out[k] = acc
    return Jet(out)


def jet_div(f: Jet, g: Jet) -> Jet:
    _check_orders(f, g)
    a, b = f.coeffs, g.coeffs
    if np.any(b[0] == 0):
        raise ZeroDivisionError("jet division by a series with zero constant term")
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
    for k in range(f.order + 1):
        acc = a[k]
        for j in range(1, k + 1):
            acc = acc - b[j] * out[k - j]
        out[k] = acc / b[0]
    return Jet(out)


def jet_exp(f: Jet) -> Jet:
    a = f.coeffs
    out = np.zeros_like(a, dtype=np.result_type(a, float))
    out[0] = np.exp(a[0])
    for k in range(1, f.order + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + j * a[j] * out[k - j]
        out[k] = acc / k
    return Jet(out)


def jet_powf(f: Jet, alpha: float) -> Jet:
    """``f**alpha`` from the recurrence ``f g' = alpha f' g``; needs f0 > 0."""
    a = f.coeffs
    if np.iscomplexobj(a) or np.any(a[0] <= 0):
        if not (np.iscomplexobj(a) and np.all(a[0].real > 0) and np.all(a[0].imag == 0)):
            raise NonpositiveLeadError("jet_powf needs a positive constant term")
    out = np.zeros_like(a, dtype=np.result_type(a, float))
    out[0] = a[0] ** alpha
    for k in range(1, f.order + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + (alpha * j - (k - j)) * a[j] * out[k - j]
        out[k] = acc / (k * a[0])
    return Jet(out)


def jet_compose(f: Jet, g: Jet) -> Jet:
    """Taylor coefficients of ``f(g(x))`` for ``g(0) = 0`` (Horner in jets)."""
    _check_orders(f, g)
    g0 = g.coeffs[0]
    scale = max(1.0, float(np.max(np.abs(g.coeffs))))
    if np.any(np.abs(g0) > _ZERO_TOL * scale):
        raise NonzeroInnerConstant("inner jet must vanish at the origin")
    inner = Jet(g.coeffs.copy())
    inner.coeffs[0] = 0.0
    K = f.order
    dtype = np.result_type(f.coeffs, g.coeffs)
    shape = np.broadcast_shapes(f.coeffs.shape[1:], g.coeffs.shape[1:])
    acc = Jet(np.zeros((K + 1,) + shape, dtype=dtype))
    for k in range(K, -1, -1):
        acc = jet_mul(acc, inner)
        acc.coeffs[0] = acc.coeffs[0] + f.coeffs[k]
    return acc


def _revert_triangular(f: Jet) -> Jet:
    K = f.order
    f1 = f.coeffs[1]
    phi = np.zeros_like(f.coeffs, dtype=np.result_type(f.coeffs, float))
    phi[1] = 1.0 / f1
    for k in range(2, K + 1):
        # coefficient k of f(phi) is f1 * phi_k + (terms in phi_1..phi_{k-1})
        partial = jet_compose(f.truncate(k), Jet(phi[: k + 1]))
        phi[k] = -partial.coeffs[k] / f1
    return Jet(phi)


def jet_revert(f: Jet) -> Jet:
    """Compositional inverse: returns phi with phi(0) = 0 and f(phi(y)) = y.

    Newton iteration on jets with the working order doubled each sweep;
    falls back to a coefficient-by-coefficient triangular solve when the
    Newton residual is not clean.
    """
    c = f.coeffs
    K = f.order
    if c.ndim != 1:
        raise ValueError("jet_revert works on a single jet")
    scale = max(1.0, float(np.max(np.abs(c))))
    if abs(c[0]) > _ZERO_TOL * scale:
        raise NotInvertible("jet_revert needs f(0) = 0")
    if K == 0:
        return Jet(np.zeros(1, dtype=c.dtype))
    if c[1] == 0:
        raise NotInvertible("jet_revert needs f'(0) != 0")

    work = 1
    phi = np.zeros(K + 1, dtype=np.result_type(c, float))
    phi[1] = 1.0 / c[1]
    while work < K:
        work = min(K, 2 * work + 1)
        fw = f.truncate(work)
        ph = Jet(phi[: work + 1])
        ident = Jet.identity(work)
        resid = jet_compose(fw, ph) - ident
        dfw = fw.deriv().truncate(work)
        slope = jet_compose(dfw, ph)
        step = jet_div(resid, slope)
        phi[: work + 1] = ph.coeffs - step.coeffs
        phi[0] = 0.0

    result = Jet(phi)
    check = jet_compose(f, result) - Jet.identity(K)
    if np.max(np.abs(check.coeffs)) > 1e-9 * max(1.0, float(np.max(np.abs(phi)))):
        result = _revert_triangular(f)
    return result
