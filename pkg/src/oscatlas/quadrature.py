"""Globally adaptive Gauss-Kronrod (G7/K15) quadrature, vectorised over panels.

Oscillatory integrands are handled by seeding the adaptive loop with a mesh
whose panels each cover a bounded increment of the phase.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Kronrod 15-point abscissae (positive half, descending) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 nodes, ascending
KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GWEIGHTS = np.zeros(15)
GWEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps
_CHUNK = 65536


@dataclass
class QuadResult:
    value: complex | np.ndarray
    error: float
    n_panels: int
    n_evals: int
    converged: bool
    rounds: int = 0


def _rule(f, lo, hi):
    """Apply G7/K15 on each panel; returns (K, err) with batch dims trailing."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    vals = []
    n = lo.size
    for s in range(0, n, _CHUNK):
        x = mid[s:s + _CHUNK, None] + half[s:s + _CHUNK, None] * NODES[None, :]
        fx = np.asarray(f(x.ravel()))
        fx = fx.reshape(x.shape + fx.shape[1:])
        vals.append(fx)
    fx = np.concatenate(vals, axis=0) if len(vals) > 1 else vals[0]
    extra = fx.ndim - 2
    w_shape = (1, 15) + (1,) * extra
    h = half.reshape((-1,) + (1,) * extra)
    kron = np.sum(fx * KWEIGHTS.reshape(w_shape), axis=1) * h
    gauss = np.sum(fx * GWEIGHTS.reshape(w_shape), axis=1) * h
    mean = kron / np.where(h == 0, 1.0, 2.0 * h)
    resasc = np.sum(np.abs(fx - mean[:, None]) * KWEIGHTS.reshape(w_shape), axis=1) * np.abs(h)
    resabs = np.sum(np.abs(fx) * KWEIGHTS.reshape(w_shape), axis=1) * np.abs(h)
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where((resasc > 0) & (err > 0),
                          resasc * np.minimum(1.0, (200.0 * err / np.where(resasc > 0, resasc, 1.0)) ** 1.5),
                          err)
    floor = 50.0 * _EPS * resabs
    if extra:
        scaled = scaled.reshape(scaled.shape[0], -1).max(axis=1)
        floor = floor.reshape(floor.shape[0], -1).max(axis=1)
    return kron, scaled, floor


def adaptive_gk15(f, breakpoints, abs_tol=1e-13, rel_tol=1e-12, max_rounds=80,
                  max_panels=4_000_000) -> QuadResult:
    """Integrate ``f`` over ``[breakpoints[0], breakpoints[-1]]``.

    ``f`` takes a 1-D array of nodes and returns values of shape
    ``(n,)`` or ``(n, ...)``; vector-valued integrands share one mesh and the
    error is the maximum over components.
    """
    pts = np.unique(np.asarray(breakpoints, dtype=float))
    if pts.size < 2:
        return QuadResult(0j, 0.0, 0, 0, True)
    lo, hi = pts[:-1].copy(), pts[1:].copy()
    val, err, floor = _rule(f, lo, hi)
    n_evals = 15 * lo.size
    rounds = 0
    converged = False
    while True:
        total = val.sum(axis=0)
        trunc_err = float(err.sum())
        scale = float(np.max(np.abs(total))) if np.ndim(total) else abs(total)
        tol = max(abs_tol, rel_tol * scale)
        if trunc_err <= tol:
            converged = True
            break
        # panels already at the rounding floor gain nothing from bisection
        live = err > floor
        if float(err[live].sum()) <= 0.5 * tol:
            converged = True
            break
        if rounds >= max_rounds or lo.size >= max_panels:
            break
        work = np.where(live, err, 0.0)
        order = np.argsort(work)[::-1]
        cum = np.cumsum(work[order])
        # split the worst panels until what is left is within half the budget
        remaining = float(work.sum()) - cum
        n_split = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        n_split = min(max(n_split, 1), lo.size)
        pick = order[:n_split]
        keep = np.ones(lo.size, dtype=bool)
        keep[pick] = False
        mids = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mids])
        new_hi = np.concatenate([mids, hi[pick]])
        nv, ne, nf = _rule(f, new_lo, new_hi)
        n_evals += 15 * new_lo.size
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        floor = np.concatenate([floor[keep], nf])
        rounds += 1
    total = val.sum(axis=0)
    error = float(np.maximum(err, floor).sum())
    return QuadResult(total, error, int(lo.size), n_evals, converged, rounds)


def phase_mesh(lam: float, power: float, lo: float, hi: float,
               dtheta: float = math.pi, grade_zero: bool = True,
               n_grade: int = 60) -> np.ndarray:
    """Breakpoints where ``lam * x**power`` advances by ``dtheta``.

    When ``lo == 0`` a geometric sequence towards the origin is added so that
    endpoint singularities of the weight are resolved.
    """
    if hi <= lo:
        return np.array([lo, hi])
    th_lo, th_hi = lam * lo ** power, lam * hi ** power
    k0 = math.floor(th_lo / dtheta) + 1
    k1 = math.ceil(th_hi / dtheta) - 1
    pts = [np.array([lo, hi])]
    if k1 >= k0:
        ks = np.arange(k0, k1 + 1, dtype=float)
        pts.append((ks * dtheta / lam) ** (1.0 / power))
    if lo == 0.0 and grade_zero:
        first = min(hi, (dtheta / lam) ** (1.0 / power))
        pts.append(first * 2.0 ** -np.arange(1, n_grade + 1))
    mesh = np.unique(np.concatenate(pts))
    return mesh[(mesh >= lo) & (mesh <= hi)]


def sampled_phase_mesh(phase, lo: float, hi: float, dtheta: float = math.pi,
                       n_sample: int = 20001) -> np.ndarray:
    """Breakpoints for a general phase function (vectorised ``phase(x)``)."""
    x = np.linspace(lo, hi, n_sample)
    th = phase(x)
    total = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(th)))])
    n = max(1, math.ceil(total[-1] / dtheta))
    targets = np.linspace(0.0, total[-1], n + 1)
    pts = np.interp(targets, total, x)
    # sampling guard: never coarser than the sample spacing allows
    return np.unique(np.concatenate([pts, [lo, hi]]))
