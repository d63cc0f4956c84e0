"""Quadrature oracles for oscillatory integrals.

Two independent routes evaluate the half-line integral of
``exp(s i lam x^p) x^(q-1) a(x)``:

* ``eps_extrapolation`` damps the integrand with ``chi(eps x)``, integrates
  for a geometric sequence of ``eps`` and extrapolates to ``eps -> 0`` in
  powers of ``eps**2``;
* ``ibp_regularized`` splits off the tail with a smooth cut-off and
  integrates by parts ``l`` times so the tail becomes absolutely integrable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .amplitude import Amplitude, AmplitudeND, class_check, from_function, reflected
from .errors import (BadParams, CrosscheckFailure, DimensionTooLarge,
                     InadmissibleClass, NonConvergence, OrderError)
from .numerics import parse_sign
from .quadrature import adaptive_gk15, phase_mesh, sampled_phase_mesh
from .regularizer import (SplitConfig, c_table, cutoff_jet, default_split,
                          l_min, lstar_from_jet)

METHODS = ("eps_extrapolation", "ibp_regularized", "both_crosscheck")

# decay constants: chi(t) < 1e-16 beyond these t
_CHI_CUT = {"gaussian": 6.1, "sech": 38.0}

# budget of phase half-periods for one truncated quadrature
_PANEL_BUDGET = 400_000


@dataclass(frozen=True)
class OracleConfig:
    method: str = "ibp_regularized"
    quad_tol: float = 1e-12
    abs_tol: float = 1e-15
    eps_sequence: tuple = (0.5, 0.5, 9)   # (eps0, ratio, count)
    eps_auto: bool = True                  # rescale eps0/ratio to the phase
    chi: str = "gaussian"
    extrap_tol: float = 1e-7
    truncation_radius: Optional[float] = None
    split: Optional[SplitConfig] = None
    dtheta: float = math.pi
    crosscheck_factor: float = 10.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise BadParams(f"unknown oracle method {self.method!r}")
        if not self.quad_tol > 0:
            raise BadParams("quad_tol must be > 0")
        eps0, ratio, count = self.eps_sequence
        if not (eps0 > 0 and 0 < ratio < 1 and count >= 2):
            raise BadParams("eps sequence must be strictly decreasing to 0")
        if self.chi not in _CHI_CUT:
            raise BadParams(f"unknown convergence factor {self.chi!r}")


@dataclass
class OracleResult:
    value: complex
    err_estimate: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = complex(self.value)
        self.err_estimate = float(abs(self.err_estimate))


def chi_factor(name: str, t):
    t = np.abs(t)
    if name == "gaussian":
        return np.exp(-t * t)
    if name == "sech":
        e = np.exp(-t)
        return 2.0 * e / (1.0 + e * e)
    raise BadParams(f"unknown convergence factor {name!r}")


def _check_admissible(a: Amplitude, p: float):
    if not a.delta < p - 1:
        raise InadmissibleClass(f"amplitude {a.name}: delta = {a.delta} is not < p - 1 = {p - 1}")


def _weighted_integral(p, q, s, lam, weight, upper, cfg, rel_tol=None):
    """``int_0^upper exp(s i lam x^p) x^(q-1) weight(x) dx``.

    For q < 1 the substitution ``x = u^(1/q)`` removes the endpoint
    singularity of the power weight.
    """
    rel = cfg.quad_tol if rel_tol is None else rel_tol
    if upper <= 0:
        return 0j, 0.0, 0
    if q < 1.0:
        power = p / q
        top = upper ** q

        def f(u):
            x = u ** (1.0 / q)
            return np.exp(s * 1j * lam * u ** power) * weight(x) / q
    else:
        power, top = p, upper

        def f(x):
            return np.exp(s * 1j * lam * x ** p) * x ** (q - 1.0) * weight(x)
    mesh = phase_mesh(lam, power, 0.0, top, dtheta=cfg.dtheta)
    res = adaptive_gk15(f, mesh, abs_tol=cfg.abs_tol, rel_tol=rel)
    return complex(res.value), res.error, res.n_panels


# ---------------------------------------------------------------------------
# integration by parts

def _decay_constants(a: Amplitude, K: int, start: float):
    """Empirical per-order bounds ``S_k >= sup <x>^-(tau+delta k) |a^(k)|`` on x >= start."""
    grid = np.geomspace(start, 1e9, 600)
    rep = class_check(a, 1.0 + a.delta + 1.0, grid, K)
    return [2.0 * v + 1e-300 for v in rep.per_order]


def _tail_bound(p, q, lam, l, a, S, R, X):
    """Bound on ``|int_R^inf exp(...) F_l dx|`` using the class envelope."""
    row = np.abs(c_table(p, q, l).row(l))
    total = 0.0
    for j in range(l + 1):
        if row[j] == 0:
            continue
        e = a.tau + a.delta * j
        beta = q - 1.0 - p * l + j + e
        if beta >= -1.0:
            return math.inf
        bracket = (1.0 + 1.0 / (X * X)) ** (max(e, 0.0) / 2.0)
        total += row[j] * S[j] * bracket * R ** (beta + 1.0) / (-beta - 1.0)
    return total * (lam * p) ** (-l)


def _plan_tail(p, q, lam, l, a, split, target, cfg):
    """Pick the extra IBP order ``l2``, boundary point ``X`` and radius ``R``."""
    S = _decay_constants(a, l + 40, split.r1)
    best = None
    for l2 in range(l, l + 41):
        X = max(split.r1, (2.0 * (q + p * l2 + abs(a.tau) + 1.0) / (lam * p)) ** (1.0 / p))
        if _tail_bound(p, q, lam, l2, a, S, 1e300, X) > 0 and not math.isfinite(
                _tail_bound(p, q, lam, l2, a, S, X, X)):
            continue
        lo, hi = math.log(X), math.log(1e300)
        if _tail_bound(p, q, lam, l2, a, S, X, X) <= target:
            R = X
        else:
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if _tail_bound(p, q, lam, l2, a, S, math.exp(mid), X) > target:
                    lo = mid
                else:
                    hi = mid
            R = math.exp(hi)
        cost = lam * (R ** p + X ** p) / cfg.dtheta
        if best is None or cost < best[0]:
            best = (cost, l2, X, R)
        if cost < 2000:
            break
    if best is None:
        raise NonConvergence("no integrable regularization order found for the tail")
    cost, l2, X, R = best
    if cost > 50 * _PANEL_BUDGET:
        raise NonConvergence(f"tail truncation radius {R:.3g} too large to integrate")
    return l2, X, R, _tail_bound(p, q, lam, l2, a, S, R, X)


def _lstar_values(p, q, lam, s, l, a, x, split, with_cutoff):
    amp = a.jet_at(x, l).coeffs
    if with_cutoff:
        cut = cutoff_jet(x, l, split, "tail")
        from .regularizer import _leibniz_product
        h = _leibniz_product(amp, cut)
    else:
        h = amp
    return lstar_from_jet(p, q, lam, s, l, x, h)


def oracle_split(a: Amplitude, p: float, q: float, lam: float, l: int) -> SplitConfig:
    """Cut-off placement for the oracle.

    Each integration by parts gains roughly ``(q + p l) / (lam p x^p)`` and
    loses ``1 / width`` through the cut-off derivatives, so the transition
    starts where ``lam p r0^p >= q + p l`` and spans ``[r0, 4 r0]``.
    """
    base = default_split(a)
    r0 = max(base.r0, ((q + p * l) / (lam * p)) ** (1.0 / p))
    if r0 == base.r0:
        return SplitConfig(base.r0, base.r1, l)
    return SplitConfig(r0, 4.0 * r0, l)


def _ibp_regularized(p, q, s, lam, a, cfg):
    lm = l_min(p, q, a.tau, a.delta)
    if cfg.split is not None:
        split = cfg.split
        l = split.l if split.l is not None else lm + 1
    else:
        l = lm + 1
        split = oracle_split(a, p, q, lam, l)
    if l < lm:
        raise OrderError(f"tail regularization needs l >= {lm}, got {l}")
    r0, r1 = split.r0, split.r1

    def inner_weight(x):
        return a.eval(x) * cutoff_jet(x, 0, split, "inner")[0]

    inner, inner_err, inner_panels = _weighted_integral(p, q, s, lam, inner_weight, r1, cfg)
    diag = {"l": l, "l_min": lm, "r0": r0, "r1": r1, "inner_panels": inner_panels}
    scale = max(abs(inner), cfg.abs_tol / cfg.quad_tol)
    target = max(cfg.abs_tol, 0.1 * cfg.quad_tol * scale)

    reff = a.effective_radius
    if cfg.truncation_radius is not None:
        reff = cfg.truncation_radius if reff is None else min(reff, cfg.truncation_radius)
    tail = 0j
    tail_err = 0.0
    if reff is None or reff > r0:
        def f_cut(x):
            return np.exp(s * 1j * lam * x ** p) * _lstar_values(p, q, lam, s, l, a, x, split, True)

        if reff is not None:
            R = max(reff, r1)
            res = adaptive_gk15(f_cut, phase_mesh(lam, p, r0, R, dtheta=cfg.dtheta),
                                abs_tol=cfg.abs_tol, rel_tol=cfg.quad_tol)
            tail, tail_err = complex(res.value), res.error
            diag.update(tail_radius=R, tail_panels=res.n_panels, truncation_bound=0.0,
                        truncation="numerical support")
        else:
            l2, X, R, bound = _plan_tail(p, q, lam, l, a, split, target, cfg)
            res_a = adaptive_gk15(f_cut, phase_mesh(lam, p, r0, X, dtheta=cfg.dtheta),
                                  abs_tol=cfg.abs_tol, rel_tol=cfg.quad_tol)
            boundary = 0j
            bsum = 0.0
            xb = np.array([X])
            ph = np.exp(s * 1j * lam * X ** p)
            for m in range(l, l2):
                fm = _lstar_values(p, q, lam, s, m, a, xb, split, False)[0]
                term = -ph * fm / (s * 1j * lam * p * X ** (p - 1.0))
                boundary += term
                bsum += abs(term)

            def f_far(x):
                return np.exp(s * 1j * lam * x ** p) * _lstar_values(p, q, lam, s, l2, a, x, split, False)

            if R > X:
                res_b = adaptive_gk15(f_far, phase_mesh(lam, p, X, R, dtheta=cfg.dtheta),
                                      abs_tol=cfg.abs_tol, rel_tol=cfg.quad_tol)
                far, far_err, far_panels = complex(res_b.value), res_b.error, res_b.n_panels
            else:
                far, far_err, far_panels = 0j, 0.0, 0
            tail = complex(res_a.value) + boundary + far
            tail_err = res_a.error + far_err + bound + 64 * np.finfo(float).eps * bsum
            diag.update(tail_radius=R, boundary_point=X, l_far=l2, truncation_bound=bound,
                        tail_panels=res_a.n_panels + far_panels, truncation="class bound")
    value = inner + tail
    return OracleResult(value, inner_err + tail_err, "ibp_regularized", diag)


# ---------------------------------------------------------------------------
# convergence-factor extrapolation

def _auto_eps(p, lam, chi, eps0, ratio, count, reach):
    """Scale the eps sequence so that the extrapolation is well posed and the
    damped integrals stay within the panel budget."""
    if p < 2.0:
        # keep exp(-c eps^(-2p/(2-p))) beyond-all-orders terms below ~1e-15
        safe = (p / 2.0) ** (1.0 / p) * 35.0 ** (-(2.0 - p) / (2.0 * p))
        eps0 = min(eps0, safe * max(lam, 1.0) ** (1.0 / p))
    if reach is None:
        x_budget = (_PANEL_BUDGET * math.pi / lam) ** (1.0 / p)
        eps_min = _CHI_CUT[chi] / x_budget
        if eps0 * ratio ** (count - 1) < eps_min:
            ratio = (eps_min / eps0) ** (1.0 / (count - 1))
            if ratio >= 0.95:
                raise NonConvergence("eps sequence cannot fit the quadrature budget; "
                                     "use ibp_regularized for this case")
    return eps0, ratio


def _neville_to_zero(h, values):
    """Polynomial extrapolation table in ``h`` evaluated at ``h = 0``.

    Returns the best entry along the last row and its error estimate.
    """
    n = len(h)
    T = [[0j] * n for _ in range(n)]
    for i in range(n):
        T[i][0] = values[i]
        for k in range(1, i + 1):
            T[i][k] = T[i][k - 1] + (T[i][k - 1] - T[i - 1][k - 1]) * h[i] / (h[i - k] - h[i])
    best, best_err = T[n - 1][0], abs(T[n - 1][0] - T[n - 2][0])
    for i in range(1, n):
        for k in range(1, i + 1):
            err = max(abs(T[i][k] - T[i][k - 1]), abs(T[i][k] - T[i - 1][k - 1]))
            if err < best_err:
                best, best_err = T[i][k], err
    return best, best_err, T


def _eps_extrapolation(p, q, s, lam, a, cfg, chi=None):
    chi = chi or cfg.chi
    eps0, ratio, count = cfg.eps_sequence
    reach = a.effective_radius
    if cfg.eps_auto:
        eps0, ratio = _auto_eps(p, lam, chi, eps0, ratio, int(count), reach)
    eps = [eps0 * ratio ** k for k in range(int(count))]
    values, qerr = [], []
    panels = 0
    for e in eps:
        upper = _CHI_CUT[chi] / e
        if reach is not None:
            upper = min(upper, reach)

        def weight(x, e=e):
            return a.eval(x) * chi_factor(chi, e * x)

        v, err, n = _weighted_integral(p, q, s, lam, weight, upper, cfg, rel_tol=0.1 * cfg.quad_tol)
        values.append(v)
        qerr.append(err)
        panels += n
    h = [e * e for e in eps]
    value, xerr, table = _neville_to_zero(h, values)
    err = xerr + max(qerr) * 4.0
    diag = {"eps": eps, "chi": chi, "panels": panels,
            "extrapolation_table": [[[t.real, t.imag] for t in row[: i + 1]] for i, row in enumerate(table)]}
    if err > cfg.extrap_tol * max(1.0, abs(value)):
        raise NonConvergence(f"eps extrapolation did not settle (error {err:.2e})")
    return OracleResult(value, err, "eps_extrapolation", diag)


# ---------------------------------------------------------------------------
# public oracles

def oscillatory_half_line(p: float, q: float, sign, lam: float, a: Amplitude,
                          cfg: OracleConfig | None = None) -> OracleResult:
    cfg = cfg or OracleConfig()
    s = parse_sign(sign)
    if not (p > 0 and q > 0 and lam > 0):
        raise BadParams("p, q and lambda must be positive")
    _check_admissible(a, p)
    if cfg.method == "ibp_regularized":
        return _ibp_regularized(p, q, s, lam, a, cfg)
    if cfg.method == "eps_extrapolation":
        return _eps_extrapolation(p, q, s, lam, a, cfg)
    r1 = _ibp_regularized(p, q, s, lam, a, cfg)
    r2 = _eps_extrapolation(p, q, s, lam, a, cfg)
    gap = abs(r1.value - r2.value)
    allowed = cfg.crosscheck_factor * max(r1.err_estimate, r2.err_estimate)
    diag = {"ibp": r1.diagnostics, "eps": r2.diagnostics, "gap": gap, "allowed": allowed,
            "values": [[r1.value.real, r1.value.imag], [r2.value.real, r2.value.imag]],
            "errors": [r1.err_estimate, r2.err_estimate]}
    if gap > allowed:
        raise CrosscheckFailure(f"methods disagree by {gap:.3e} (allowed {allowed:.3e})", [r1, r2])
    return OracleResult(r1.value, max(r1.err_estimate, gap), "both_crosscheck", diag)


def oscillatory_full_line(m: int, sign, lam: float, a: Amplitude,
                          cfg: OracleConfig | None = None) -> OracleResult:
    """Full-line integral of ``exp(s i lam x^m) a(x)`` as two half-line integrals."""
    if int(m) != m or m < 1:
        raise BadParams("m must be a positive integer")
    m = int(m)
    s = parse_sign(sign)
    right = oscillatory_half_line(m, 1.0, s, lam, a, cfg)
    left = oscillatory_half_line(m, 1.0, s * (-1) ** m, lam, reflected(a), cfg)
    return OracleResult(right.value + left.value, right.err_estimate + left.err_estimate,
                        right.method, {"right": right.diagnostics, "left": left.diagnostics,
                                       "halves": [[right.value.real, right.value.imag],
                                                  [left.value.real, left.value.imag]]})


# ---------------------------------------------------------------------------
# compactly supported integrands with general phases

def compact_oscillatory(phase, lam: float, func, lo: float, hi: float,
                        cfg: OracleConfig | None = None):
    """``int_lo^hi exp(i lam phase(x)) func(x) dx`` for a smooth, bounded integrand."""
    cfg = cfg or OracleConfig()
    mesh = sampled_phase_mesh(lambda x: lam * phase(x), lo, hi, dtheta=cfg.dtheta)

    def f(x):
        return np.exp(1j * lam * phase(x)) * func(x)

    res = adaptive_gk15(f, mesh, abs_tol=cfg.abs_tol, rel_tol=cfg.quad_tol)
    return OracleResult(res.value, res.error, "compact", {"panels": res.n_panels})


def _batched_line(p, s, lam, func, R, full, cfg):
    """Half-line ``[0, R]`` or full-line ``[-R, R]`` integral of
    ``exp(s i lam x^p) func(x)``; ``func`` may be vector valued."""
    if R <= 0:
        return 0.0, 0.0
    mesh = phase_mesh(lam, p, 0.0, R, dtheta=cfg.dtheta, grade_zero=False)

    def right(x):
        ph = np.exp(s * 1j * lam * x ** p)
        v = func(x)
        return v * ph.reshape(ph.shape + (1,) * (np.ndim(v) - 1))

    res = adaptive_gk15(right, mesh, abs_tol=cfg.abs_tol, rel_tol=cfg.quad_tol)
    val, err = res.value, res.error
    if full:
        sl = s * (-1) ** int(p)

        def left(x):
            ph = np.exp(sl * 1j * lam * x ** p)
            v = func(-x)
            return v * ph.reshape(ph.shape + (1,) * (np.ndim(v) - 1))

        res2 = adaptive_gk15(left, mesh, abs_tol=cfg.abs_tol, rel_tol=cfg.quad_tol)
        val = val + res2.value
        err += res2.error
    return val, err


def oscillatory_nd(powers, signs, lam: float, a: AmplitudeND, cfg: OracleConfig | None = None,
                   domain: str = "positive_orthant") -> OracleResult:
    """Integral of ``exp(i lam sum_j s_j x_j^p_j) a(x)`` over the orthant or R^n."""
    cfg = cfg or OracleConfig()
    powers = [float(p) for p in powers]
    signs = [parse_sign(s) for s in signs]
    n = len(powers)
    if n != a.dim or len(signs) != n:
        raise BadParams("powers, signs and amplitude dimension must agree")
    if n > 3:
        raise DimensionTooLarge(f"oscillatory_nd supports n <= 3, got {n}")
    full = domain == "full_space"
    if full and any(p != int(p) for p in powers):
        raise BadParams("full-space integrals need integer powers")
    if domain not in ("positive_orthant", "full_space"):
        raise BadParams(f"unknown domain {domain!r}")
    R = float(a.support_radius)
    if n == 1:
        amp = from_function(lambda x: a.eval(np.asarray(x)[None]), R, name=a.name)
        if full:
            res = oscillatory_full_line(int(powers[0]), signs[0], lam, amp, cfg)
        else:
            res = oscillatory_half_line(powers[0], 1.0, signs[0], lam, amp, cfg)
        return OracleResult(res.value, res.err_estimate, res.method, {"n": 1})

    # innermost coordinates first: build a batched evaluator over outer nodes
    val, err = _iterated(powers, signs, lam, a, R, full, cfg)
    return OracleResult(complex(val), err, "iterated_chebyshev",
                        {"n": n, "support_radius": R, "domain": domain})


def _iterated(powers, signs, lam, a, R, full, cfg, max_deg=384):
    """Iterated quadrature for n = 2 or 3 with Chebyshev interpolation of the
    partially integrated amplitude in each outer variable."""
    n = len(powers)
    lo = -R if full else 0.0
    cheb = np.polynomial.chebyshev

    def line(p, s, func):
        return _batched_line(p, s, lam, func, R, full, cfg)

    # degree reached at each level; later calls at that level start there
    deg_hint = {}

    def partial(level, outer_pts):
        """Integrate coordinates ``level..n-1`` for each row of ``outer_pts``
        (shape (B, level)); returns values (B,) and an error bound."""
        B = outer_pts.shape[0]
        if level == n - 1:
            def func(x):
                pts = np.empty((n, x.size, B))
                for j in range(level):
                    pts[j] = outer_pts[:, j][None, :]
                pts[level] = x[:, None]
                return a.eval(pts)
            vals, err = line(powers[level], signs[level], func)
            return np.asarray(vals), err
        deg = deg_hint.get(level, 32)
        while True:
            nodes = cheb.chebpts1(deg + 1)
            xs = 0.5 * (nodes + 1.0) * (R - lo) + lo
            grid = np.concatenate([np.repeat(outer_pts, xs.size, axis=0),
                                   np.tile(xs, B)[:, None]], axis=1)
            vals, inner_err = partial(level + 1, grid)
            vals = vals.reshape(B, xs.size)
            coef = cheb.chebfit(nodes, vals.T, deg)  # (deg+1, B)
            head = float(np.max(np.abs(coef)))
            tail = float(np.max(np.abs(coef[-4:])))
            if tail <= max(cfg.abs_tol, 0.01 * cfg.quad_tol * head) or deg >= max_deg:
                break
            deg = int(deg * 1.5)
        deg_hint[level] = deg

        def func(x):
            t = 2.0 * (x - lo) / (R - lo) - 1.0
            return cheb.chebval(t, coef).T  # (len(x), B)

        vals, err = line(powers[level], signs[level], func)
        return np.asarray(vals), err + (inner_err + 4.0 * tail) * (R - lo)

    vals, err = partial(0, np.zeros((1, 0)))
    return vals[0], err
