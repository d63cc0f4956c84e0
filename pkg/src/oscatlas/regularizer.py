"""Integration-by-parts regularization of half-line oscillatory integrals.

With ``L* g = -(1/(i s lam)) d/dx ( g / (p x^(p-1)) )`` the ``l``-fold
adjoint applied to ``x^(q-1) h(x)`` is

    (s i / (lam p))^l * sum_j C[l, j] x^(q-1-p l+j) h^(j)(x)

where the triangular table ``C`` obeys
``C[l, j] = (q - p l + j) C[l-1, j] + C[l-1, j-1]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .amplitude import Amplitude, smooth_step_jet
from .errors import BadParams, DomainError, InadmissibleClass, OrderError
from .numerics import parse_sign


def _exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(float(v))


@dataclass(frozen=True)
class CTable:
    p: float
    q: float
    rows: tuple  # rows[l][j] as exact Fractions

    @property
    def L(self) -> int:
        return len(self.rows) - 1

    def __getitem__(self, lj):
        l, j = lj
        return float(self.rows[l][j])

    def row(self, l: int) -> np.ndarray:
        return np.array([float(c) for c in self.rows[l]])

    def as_array(self) -> np.ndarray:
        out = np.zeros((self.L + 1, self.L + 1))
        for l, row in enumerate(self.rows):
            out[l, : l + 1] = [float(c) for c in row]
        return out

    def recurrence_residual(self) -> Fraction:
        """Largest exact residual of the defining recurrence (0 for a valid table)."""
        p, q = _exact(self.p), _exact(self.q)
        worst = Fraction(0)
        if self.rows[0][0] != 1:
            worst = abs(self.rows[0][0] - 1)
        for l in range(1, self.L + 1):
            prev, cur = self.rows[l - 1], self.rows[l]
            worst = max(worst, abs(cur[0] - (q - p * l) * prev[0]))
            worst = max(worst, abs(cur[l] - prev[l - 1]))
            for j in range(1, l):
                expect = (q - p * l + j) * prev[j] + prev[j - 1]
                worst = max(worst, abs(cur[j] - expect))
        return worst


@lru_cache(maxsize=256)
def _c_rows(p: Fraction, q: Fraction, L: int) -> tuple:
    rows = [(Fraction(1),)]
    for l in range(1, L + 1):
        prev = rows[-1]
        cur = [Fraction(0)] * (l + 1)
        cur[0] = (q - p * l) * prev[0]
        cur[l] = prev[l - 1]
        for j in range(1, l):
            cur[j] = (q - p * l + j) * prev[j] + prev[j - 1]
        rows.append(tuple(cur))
    return tuple(rows)


def c_table(p: float, q: float, L: int) -> CTable:
    if not p > 0 or not q > 0:
        raise BadParams("c_table needs p > 0 and q > 0")
    if L < 0:
        raise BadParams("L must be >= 0")
    return CTable(p, q, _c_rows(_exact(p), _exact(q), int(L)))


def l_min(p: float, q: float, tau: float, delta: float) -> int:
    """Smallest IBP order making the regularized tail absolutely integrable:
    ``floor((q + tau)^+ / (p - 1 - delta)) + 1``."""
    p_, q_, t_, d_ = (_exact(v) for v in (p, q, tau, delta))
    if d_ >= p_ - 1:
        raise InadmissibleClass(f"delta = {delta} must be < p - 1 = {p - 1}")
    num = max(q_ + t_, Fraction(0))
    return math.floor(num / (p_ - 1 - d_)) + 1


def ibp_inner_order(p: float, q: float) -> int:
    """Greatest integer strictly below ``q/p``, floored at 0."""
    r = _exact(q) / _exact(p)
    n = math.ceil(r) - 1
    return max(n, 0)


@dataclass(frozen=True)
class SplitConfig:
    r0: float = 1.0
    r1: float = 2.0
    l: int | None = None  # None: l_min + 1

    def __post_init__(self):
        if not self.r0 >= 1.0:
            raise BadParams(f"cut-off radius r0 must be >= 1, got {self.r0}")
        if not self.r1 > self.r0:
            raise BadParams(f"need r1 > r0, got r0={self.r0}, r1={self.r1}")


def default_split(a: Amplitude) -> SplitConfig:
    r0 = max(1.0, a.support_radius or 0.0)
    return SplitConfig(r0, r0 + 1.0)


def cutoff_jet(x, K, split: SplitConfig, part: str):
    """Jet of the inner cut-off phi or the tail factor psi = 1 - phi."""
    phi = smooth_step_jet(x, K, split.r0, split.r1)
    if part == "inner":
        return phi
    if part == "tail":
        psi = -phi
        psi[0] = psi[0] + 1.0
        return psi
    raise BadParams(f"cutoff part must be 'inner' or 'tail', got {part!r}")


def lstar_from_jet(p, q, lam, sign, l, x, h_jet, table: CTable | None = None):
    """Apply ``(s L*)^l`` to ``x^(q-1) h(x)`` given the jet of ``h`` at ``x``.

    ``h_jet`` has shape ``(K + 1,) + x.shape`` with ``K >= l``, holding
    ``h^(j)(x) / j!``.
    """
    s = parse_sign(sign)
    x = np.asarray(x, dtype=float)
    table = table if table is not None and table.L >= l else c_table(p, q, l)
    row = table.row(l)
    acc = np.zeros(x.shape, dtype=np.result_type(h_jet, float))
    fact = 1.0
    for j in range(l + 1):
        if j:
            fact *= j
        if row[j] == 0.0:
            continue
        acc = acc + row[j] * x ** (q - 1.0 - p * l + j) * (h_jet[j] * fact)
    return (s * 1j / (lam * p)) ** l * acc


def apply_Lstar(p, q, lam, a: Amplitude, cutoff_part: str, l: int, x, sign="+",
                split: SplitConfig | None = None, require_integrable: bool = False):
    """Value of ``(s L*)^l [x^(q-1) a(x) c(x)]`` with ``c`` the inner or tail cut-off.

    Derivatives of ``a * c`` come from exact jets (Leibniz), never from
    finite differences.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("apply_Lstar needs x > 0")
    if l < 0:
        raise OrderError("l must be >= 0")
    if not p > 0 or not q > 0 or not lam > 0:
        raise BadParams("p, q and lambda must be positive")
    split = split or default_split(a)
    if cutoff_part == "inner" and l > ibp_inner_order(p, q):
        raise OrderError(f"inner part allows l <= {ibp_inner_order(p, q)}, got {l}")
    if cutoff_part == "tail" and require_integrable:
        lm = l_min(p, q, a.tau, a.delta)
        if l < lm:
            raise OrderError(f"tail integrand needs l >= {lm}, got {l}")
    cut = cutoff_jet(x, l, split, cutoff_part)
    amp = a.jet_at(x, l).coeffs
    h = _leibniz_product(amp, cut)
    return lstar_from_jet(p, q, lam, sign, l, x, h)


def _leibniz_product(f, g):
    K = f.shape[0] - 1
    out = np.zeros(np.broadcast_shapes(f.shape, g.shape), dtype=np.result_type(f, g))
    for k in range(K + 1):
        acc = f[0] * g[k]
        for i in range(1, k + 1):
            acc = acc + f[i] * g[k - i]
        out[k] = acc
    return out
