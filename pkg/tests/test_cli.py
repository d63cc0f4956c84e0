import json
import subprocess
import sys
from pathlib import Path

import pytest

from oscatlas.cli import main

CAMPAIGN = """
name: cli
lambda_grid: {start: 16, ratio: 2, count: 5}
cases:
  - id: g2
    phase: {kind: full_line, m: 2}
    amplitude: gaussian
    N: [1]
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fresnel(capsys):
    code, out, _ = run(capsys, "fresnel", "--p", "2", "--q", "1", "--sign", "+", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["value"]["re"] == pytest.approx(0.626657068657750)
    code, out, _ = run(capsys, "fresnel", "--p", "3", "--q", "3")
    assert out.startswith("0 + 0.333333333333333")


def test_fresnel_pole(capsys):
    code, _, err = run(capsys, "fresnel", "--p", "1", "--q", "-1")
    d = json.loads(err)
    assert code == 1 and d["error"] == "PoleError" and d["location"] == -1


def test_coeff(capsys):
    code, out, _ = run(capsys, "coeff", "--m", "1", "--k", "0", "--minus", "--format", "json")
    assert json.loads(out)["value"] == {"re": 0.0, "im": 2.0}


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--line", "full", "--m", "2", "--N", "1",
                       "--amplitude", "gaussian", "--format", "json")
    d = json.loads(out)
    assert d["terms"][0]["exponent"] == 0.5
    assert d["terms"][0]["re"] == pytest.approx(1.2533141373155)
    code, out, _ = run(capsys, "expand", "--line", "full", "--m", "1", "--N", "5", "--format", "json")
    d = json.loads(out)
    assert d["remainder_exponent"] == 6 and all(t["re"] == 0 and t["im"] == 0 for t in d["terms"])
    code, out, _ = run(capsys, "expand", "--line", "nd", "--preset", "A(2)", "--n", "2",
                       "--N", "2", "--format", "csv")
    assert out.splitlines()[0] == "index,exponent,re,im"


def test_omega_reverse_lambertw(capsys):
    code, out, _ = run(capsys, "omega", "--powers", "2,2", "--N", "3", "--format", "json")
    assert sorted(map(tuple, json.loads(out)["members"])) == [(0, 0), (0, 1), (1, 0)]
    code, out, _ = run(capsys, "reverse", "--coeffs", "0,1,1", "--order", "4", "--format", "json")
    assert json.loads(out)["reverted"] == pytest.approx([0, 1, -1, 2, -5])
    code, out, _ = run(capsys, "lambertw", "--y", "1", "--format", "json")
    assert json.loads(out)["values"][0]["w"] == pytest.approx(0.5671432904097838, abs=1e-15)


def test_verify(tmp_path, capsys):
    f = tmp_path / "c.yaml"
    f.write_text(CAMPAIGN)
    code, out, _ = run(capsys, "verify", "--campaign", str(f), "--out", str(tmp_path / "out"))
    assert code == 0 and "g2 N=1: pass" in out
    assert (tmp_path / "out" / "summary.json").exists()
    assert (tmp_path / "out" / "g2_N1.csv").exists()


def test_verify_config_error(tmp_path, capsys):
    f = tmp_path / "c.yaml"
    f.write_text("name: x\n")
    code, _, err = run(capsys, "verify", "--campaign", str(f), "--out", str(tmp_path))
    assert code == 2 and json.loads(err)["error"] == "ConfigParse"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "oscatlas", "fresnel", "--p", "1", "--q", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("0 + 1i") or "1i" in res.stdout
