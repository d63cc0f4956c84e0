import csv
import json

import numpy as np
import pytest

from oscatlas.campaign import (STATUS_ERROR, STATUS_FAIL, STATUS_INCONCLUSIVE, STATUS_NOISE,
                               STATUS_PASS, exit_code, fit_slope, load_campaign, parse_campaign,
                               run_campaign, write_reports, SlopeReport)
from oscatlas.errors import ConfigParse

BASE = {
    "name": "unit",
    "lambda_grid": {"start": 16, "ratio": 2, "count": 6},
    "cases": [
        {"id": "gauss_m2", "phase": {"kind": "full_line", "m": 2}, "amplitude": "gaussian",
         "sign": "+", "N": [1]},
        {"id": "zero", "phase": {"kind": "full_line", "m": 2}, "amplitude": "zero", "N": 1},
    ],
}


def test_fit_slope_statuses():
    lams = 16.0 * 2.0 ** np.arange(8)
    errs = 3.0 * lams ** -1.5
    est = np.full_like(lams, 1e-15)
    status, slope, resid, used = fit_slope(lams, errs, est, 1.0, 0.2)
    assert status == STATUS_PASS and slope == pytest.approx(-1.5) and used == 8
    assert max(abs(r) for r in resid) < 1e-12
    assert fit_slope(lams, errs, est, 2.0, 0.2)[0] == STATUS_FAIL
    # points at the noise floor are dropped
    est2 = est.copy()
    est2[5:] = 1.0
    assert fit_slope(lams, errs, est2, 1.0, 0.2)[3] == 5
    est3 = est.copy()
    est3[3:] = 1.0
    assert fit_slope(lams, errs, est3, 1.0, 0.2)[0] == STATUS_INCONCLUSIVE
    assert fit_slope(lams, np.zeros(8), est, 1.0, 0.2)[0] == STATUS_NOISE


def test_run_campaign(tmp_path):
    camp = parse_campaign(BASE)
    reports = run_campaign(camp)
    by_id = {r.case_id: r for r in reports}
    g = by_id["gauss_m2"]
    assert g.status == STATUS_PASS and g.fitted_slope <= -1.0 + 0.2
    assert by_id["zero"].status == STATUS_NOISE
    assert exit_code(reports) == 0
    path = write_reports(reports, camp, tmp_path, timestamp="fixed")
    summary = json.loads(path.read_text())
    assert summary["exit_code"] == 0 and len(summary["reports"]) == 2
    with open(tmp_path / "gauss_m2_N1.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["lambda", "oracle_re", "oracle_im", "expansion_re", "expansion_im",
                       "abs_error", "err_estimate"]
    assert len(rows) == 7
    # shortest round-trip formatting
    for row in rows[1:]:
        for v in row:
            assert repr(float(v)) == v


def test_summary_is_deterministic(tmp_path, monkeypatch):
    camp = parse_campaign(BASE)
    a = write_reports(run_campaign(camp), camp, tmp_path / "a", timestamp="t").read_bytes()
    monkeypatch.setenv("OSCATLAS_THREADS", "3")
    b = write_reports(run_campaign(camp), camp, tmp_path / "b", timestamp="t").read_bytes()
    assert a == b


def test_failures_and_errors_set_exit_code():
    data = dict(BASE, cases=BASE["cases"] + [
        {"id": "unknown_amp", "phase": {"kind": "full_line", "m": 2}, "amplitude": "no_such_thing",
         "N": [1]}])
    reports = run_campaign(parse_campaign(data))
    assert [r.status for r in reports] == [STATUS_PASS, STATUS_NOISE, STATUS_ERROR]
    assert exit_code(reports) == 1
    failing = SlopeReport("f", 1, STATUS_FAIL, -0.5, 1.0, False)
    inconclusive = SlopeReport("i", 1, STATUS_INCONCLUSIVE, None, 1.0, False)
    noise = SlopeReport("n", 1, STATUS_NOISE, None, 1.0, False)
    assert exit_code([noise]) == 0
    assert exit_code([noise, failing]) == 1
    assert exit_code([inconclusive]) == 1


def test_config_errors(tmp_path):
    with pytest.raises(ConfigParse):
        parse_campaign({"cases": []})
    bad = dict(BASE, lambda_grid={"start": 0.5, "ratio": 2, "count": 6})
    with pytest.raises(ConfigParse):
        parse_campaign(bad)
    bad = dict(BASE, lambda_grid={"start": 16, "ratio": 2, "count": 3})
    with pytest.raises(ConfigParse):
        parse_campaign(bad)
    f = tmp_path / "bad.yaml"
    f.write_text("cases: [unclosed")
    with pytest.raises(ConfigParse):
        load_campaign(f)
    with pytest.raises(ConfigParse):
        load_campaign(tmp_path / "missing.yaml")
    dup = dict(BASE, cases=[BASE["cases"][0], BASE["cases"][0]])
    with pytest.raises(ConfigParse):
        parse_campaign(dup)


def test_unknown_phase_reported_per_case():
    data = dict(BASE, cases=[{"id": "x", "phase": {"kind": "spiral"}, "amplitude": "gaussian"}])
    reports = run_campaign(parse_campaign(data))
    assert reports[0].status == STATUS_ERROR and not reports[0].pass_
