"""Verification campaigns: sweep lambda, compare expansion and oracle, fit slopes.

A campaign file is YAML::

    name: demo
    lambda_grid: {start: 16, ratio: 2, count: 9}
    slope_tolerance: 0.2
    oracle: {method: ibp_regularized, quad_tol: 1.0e-12}
    cases:
      - id: gauss_m2
        phase: {kind: full_line, m: 2}
        amplitude: gaussian
        sign: "+"
        N: [1, 3]

Phase kinds: ``half_line`` (``p``), ``full_line`` (``m``), ``analytic``
(``p``, ``series: exp`` or a coefficient list, ``line``) and ``nd``
(``powers``/``signs``/``domain`` or ``preset``/``n``/``signs``).
"""
from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .amplitude import Amplitude, parse_amplitude, tensor
from .errors import ConfigParse, OscatlasError
from .expansion import (Expansion, PhaseSeries, evaluate_expansion, expand_analytic_phase,
                        expand_full_line, expand_half_line)
from .expansion_nd import PhaseND, expand_nd, preset_phase
from .oracle import (OracleConfig, OracleResult, compact_oscillatory, oscillatory_full_line,
                     oscillatory_half_line, oscillatory_nd)
from .regularizer import SplitConfig

# points with |error| below this are treated as exact agreement
ABS_FLOOR = 1e-300

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_INCONCLUSIVE = "inconclusive"
STATUS_NOISE = "below_noise_floor"
STATUS_ERROR = "error"


@dataclass(frozen=True)
class LambdaGrid:
    start: float
    ratio: float
    count: int

    def values(self) -> list:
        return [self.start * self.ratio ** k for k in range(self.count)]


@dataclass(frozen=True)
class CaseSpec:
    id: str
    phase: dict
    amplitude: object
    sign: object = "+"
    N: tuple = (1,)


@dataclass(frozen=True)
class Campaign:
    name: str
    cases: tuple
    lambda_grid: LambdaGrid
    oracle_cfg: OracleConfig = OracleConfig()
    slope_tolerance: float = 0.2
    noise_factor: float = 10.0


@dataclass
class SlopeReport:
    case_id: str
    N: int
    status: str
    fitted_slope: Optional[float]
    guaranteed_exponent: float
    pass_: bool
    residuals: list = field(default_factory=list)
    table: list = field(default_factory=list)
    used_points: int = 0
    message: str = ""

    def to_dict(self) -> dict:
        return {"case_id": self.case_id, "N": self.N, "status": self.status,
                "fitted_slope": self.fitted_slope, "guaranteed_exponent": self.guaranteed_exponent,
                "pass": self.pass_, "used_points": self.used_points, "residuals": self.residuals,
                "message": self.message}


# ---------------------------------------------------------------------------
# parsing

def _oracle_cfg(d: dict) -> OracleConfig:
    d = dict(d or {})
    if "split" in d and d["split"] is not None:
        s = d["split"]
        d["split"] = SplitConfig(float(s["r0"]), float(s["r1"]), s.get("l"))
    if "eps_sequence" in d:
        d["eps_sequence"] = tuple(d["eps_sequence"])
    return OracleConfig(**d)


def parse_campaign(data: dict) -> Campaign:
    if not isinstance(data, dict):
        raise ConfigParse("campaign must be a mapping")
    try:
        grid = data["lambda_grid"]
        lg = LambdaGrid(float(grid["start"]), float(grid.get("ratio", 2.0)), int(grid["count"]))
        if lg.start < 1:
            raise ConfigParse("lambda_grid.start must be >= 1")
        if lg.count < 4:
            raise ConfigParse("lambda_grid.count must be >= 4 for a slope fit")
        if not lg.ratio > 1:
            raise ConfigParse("lambda_grid.ratio must be > 1")
        cases = []
        seen = set()
        for i, c in enumerate(data["cases"]):
            cid = str(c.get("id", f"case{i}"))
            if cid in seen:
                raise ConfigParse(f"duplicate case id {cid!r}")
            seen.add(cid)
            N = c.get("N", 1)
            N = tuple(int(v) for v in (N if isinstance(N, (list, tuple)) else [N]))
            cases.append(CaseSpec(cid, dict(c["phase"]), c["amplitude"], c.get("sign", "+"), N))
        cfg = _oracle_cfg(data.get("oracle"))
        return Campaign(str(data.get("name", "campaign")), tuple(cases), lg, cfg,
                        float(data.get("slope_tolerance", 0.2)),
                        float(data.get("noise_factor", 10.0)))
    except ConfigParse:
        raise
    except (KeyError, TypeError, ValueError, OscatlasError) as exc:
        raise ConfigParse(f"invalid campaign: {exc!r}") from None


def load_campaign(path) -> Campaign:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParse(f"cannot read campaign file: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParse(f"campaign file is not valid YAML: {exc}") from None
    return parse_campaign(data)


# ---------------------------------------------------------------------------
# building expansions and oracles for a case

def _nd_amplitude(spec, n: int):
    if isinstance(spec, dict):
        factors = spec["factors"]
        radius = spec.get("support_radius")
    else:
        factors, radius = spec, None
    if isinstance(factors, str):
        factors = [factors] * n
    amps = [parse_amplitude(f) for f in factors]
    if len(amps) != n:
        raise ConfigParse(f"expected {n} amplitude factors, got {len(amps)}")
    return tensor(*amps, support_radius=radius)


def _series(phase: dict) -> PhaseSeries:
    p = float(phase["p"])
    series = phase.get("series", [])
    if series == "exp":
        return PhaseSeries.exponential(p, int(phase.get("order", 30)))
    return PhaseSeries(p, tuple(float(v) for v in series))


def build_case(case: CaseSpec):
    """Return ``(expand(N), oracle(lam, cfg))`` callables for a case."""
    ph = case.phase
    kind = ph.get("kind")
    if kind == "half_line":
        p, q = float(ph["p"]), 1.0
        a = parse_amplitude(case.amplitude)
        return (lambda N: expand_half_line(p, case.sign, a, N),
                lambda lam, cfg: oscillatory_half_line(p, q, case.sign, lam, a, cfg))
    if kind == "full_line":
        m = int(ph["m"])
        a = parse_amplitude(case.amplitude)
        return (lambda N: expand_full_line(m, case.sign, a, N),
                lambda lam, cfg: oscillatory_full_line(m, case.sign, lam, a, cfg))
    if kind == "analytic":
        series = _series(ph)
        line = ph.get("line", "half")
        a = parse_amplitude(case.amplitude)
        from .numerics import parse_sign
        s = parse_sign(case.sign)
        R = a.support_radius
        lo = -R if line == "full" else 0.0
        return (lambda N: expand_analytic_phase(series, s, a, N, line),
                lambda lam, cfg: compact_oscillatory(lambda x: s * series.phase(x), lam,
                                                     a.eval, lo, R, cfg))
    if kind == "nd":
        if "preset" in ph:
            phase = preset_phase(ph["preset"], int(ph["n"]), list(ph["signs"]),
                                 domain=ph.get("domain", "full_space"))
        else:
            phase = PhaseND(tuple(ph["powers"]), tuple(ph["signs"]),
                            ph.get("domain", "positive_orthant"))
        a = _nd_amplitude(case.amplitude, phase.n)
        return (lambda N: expand_nd(phase, a, N),
                lambda lam, cfg: oscillatory_nd(phase.powers, phase.signs, lam, a, cfg,
                                                 domain=phase.domain))
    raise ConfigParse(f"unknown phase kind {kind!r}")


# ---------------------------------------------------------------------------
# slope fitting

def fit_slope(lams, errors, err_estimates, guaranteed: float, tolerance: float,
              noise_factor: float = 10.0):
    """OLS slope of ``log|error|`` against ``log lam`` on points above the noise floor.

    Returns ``(status, slope, residuals, used)``.
    """
    lams = np.asarray(lams, float)
    errors = np.asarray(errors, float)
    est = np.asarray(err_estimates, float)
    usable = (errors >= noise_factor * est) & (errors > ABS_FLOOR)
    used = int(usable.sum())
    if used == 0:
        return STATUS_NOISE, None, [], 0
    if used < 4:
        return STATUS_INCONCLUSIVE, None, [], used
    x = np.log(lams[usable])
    y = np.log(errors[usable])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    residuals = [float(v) for v in y - (slope * x + icpt)]
    status = STATUS_PASS if slope <= -guaranteed + tolerance else STATUS_FAIL
    return status, float(slope), residuals, used


# ---------------------------------------------------------------------------
# running

def _threads() -> int:
    raw = os.environ.get("OSCATLAS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_case(case: CaseSpec, campaign: Campaign, pool=None) -> list:
    lams = campaign.lambda_grid.values()
    try:
        expand, oracle = build_case(case)
        expansions = {N: expand(N) for N in case.N}
    except (OscatlasError, KeyError, ValueError, TypeError) as exc:
        return [SlopeReport(case.id, N, STATUS_ERROR, None, math.nan, False,
                            message=f"{type(exc).__name__}: {exc}") for N in case.N]
    cfg = campaign.oracle_cfg
    mapper = pool.map if pool is not None else map
    try:
        results = list(mapper(lambda lam: oracle(lam, cfg), lams))
    except OscatlasError as exc:
        return [SlopeReport(case.id, N, STATUS_ERROR, None, expansions[N].remainder_exponent,
                            False, message=f"{type(exc).__name__}: {exc}") for N in case.N]
    reports = []
    for N in case.N:
        e = expansions[N]
        table = []
        for lam, r in zip(lams, results):
            ev = evaluate_expansion(e, lam)
            table.append({"lambda": lam, "oracle_re": r.value.real, "oracle_im": r.value.imag,
                          "expansion_re": ev.real, "expansion_im": ev.imag,
                          "abs_error": abs(r.value - ev), "err_estimate": r.err_estimate})
        status, slope, resid, used = fit_slope(
            [t["lambda"] for t in table], [t["abs_error"] for t in table],
            [t["err_estimate"] for t in table], e.remainder_exponent,
            campaign.slope_tolerance, campaign.noise_factor)
        reports.append(SlopeReport(case.id, N, status, slope, e.remainder_exponent,
                                   status == STATUS_PASS, resid, table, used))
    return reports


def run_campaign(campaign: Campaign, threads: Optional[int] = None) -> list:
    threads = threads or _threads()
    reports = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for case in campaign.cases:
                reports.extend(run_case(case, campaign, pool))
    else:
        for case in campaign.cases:
            reports.extend(run_case(case, campaign))
    return reports


def exit_code(reports) -> int:
    """0 iff every report that was not skipped passed."""
    for r in reports:
        if r.status != STATUS_NOISE and not r.pass_:
            return 1
    return 0


CSV_COLUMNS = ("lambda", "oracle_re", "oracle_im", "expansion_re", "expansion_im",
               "abs_error", "err_estimate")


def write_reports(reports, campaign: Campaign, out_dir, timestamp: Optional[str] = None):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for r in reports:
        if not r.table:
            continue
        with open(out / f"{r.case_id}_N{r.N}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for row in r.table:
                w.writerow([repr(float(row[c])) for c in CSV_COLUMNS])
    summary = {
        "campaign": campaign.name,
        "timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "slope_tolerance": campaign.slope_tolerance,
        "lambda_grid": campaign.lambda_grid.values(),
        "exit_code": exit_code(reports),
        "reports": [r.to_dict() for r in reports],
    }
    path = out / "summary.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True, allow_nan=True) + "\n")
    return path
