import csv
import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from bombieri import __version__
from bombieri.cli import RunRecord, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def record(*argv):
    code, out, err = invoke(*argv)
    assert code == 0, err
    return json.loads(out)


def test_sigma32():
    doc = record("sigma32", "--steps", "4000", "--grid", "40")
    assert doc["result"]["closed_form"] == pytest.approx(0.15803014, abs=1e-8)
    assert doc["result"]["value"] == pytest.approx(0.15803014, abs=1e-6)
    assert doc["tool_version"] == __version__


def test_hessian_example():
    doc = record("hessian", "--variant", "L", "--mu", "-0.1", "--nu", "0", "--M", "inf")
    assert doc["result"]["fpp"] == pytest.approx(-1.24941, abs=1e-5)
    assert doc["params"]["M"] == "inf"


def test_domain_check():
    doc = record("domain-check", "--variant", "sigma34", "--mu", "-0.8")
    assert doc["result"]["admissible"] is True


def test_oracle_verify():
    doc = record("oracle-verify", "--variant", "sigma24", "--nu", "-0.5", "--steps", "1000")
    assert doc["result"]["max_abs_diff"] < 1e-5
    assert doc["integrator"]["steps"] == 1000


def test_exit_code_invalid_arguments():
    assert invoke("nonsense")[0] == 2
    assert invoke("hessian", "--M", "0.5")[0] == 2
    assert invoke("hessian", "--variant", "zzz")[0] == 2
    assert invoke("hessian", "--steps", "-4")[0] == 2
    assert invoke("hessian", "--mu", "abc")[0] == 2


def test_exit_code_admissibility():
    code, out, err = invoke("hessian", "--mu", "-0.3")
    assert code == 4 and out == "" and "admissib" in err


def test_exit_code_numerical():
    code, _, err = invoke("sigma24", "--interval", "-0.5", "-0.01", "--grid", "8", "--steps", "1000")
    assert code == 3 and err


def test_scan_csv(tmp_path):
    path = tmp_path / "scan.csv"
    code, out, _ = invoke("scan", "sigma34", "--grid", "25", "--steps", "1000", "--out", str(path))
    assert code == 0 and out == ""
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["param", "g1", "g2", "admissibility_margin"]
    values = [[float(c) for c in r] for r in rows[1:]]
    assert len(values) == 25
    params = [v[0] for v in values]
    assert all(a < b for a, b in zip(params, params[1:]))
    assert all(math.isfinite(c) for v in values for c in v)


def _strip(doc):
    doc = dict(doc)
    doc.pop("wall_time")
    return doc


def test_explicit_defaults_match_implicit():
    implicit = record("hessian", "--variant", "sigma24", "--nu", "-0.3")
    explicit = record("hessian", "--variant", "sigma24", "--nu", "-0.3", "--mu", "0", "--M", "inf",
                      "--steps", "20000", "--method", "rk4")
    assert _strip(implicit) == _strip(explicit)
    implicit = record("sigma34", "--steps", "8000", "--grid", "30")
    explicit = record("sigma34", "--steps", "8000", "--grid", "30", "--tol", "1e-7", "--method", "rk4",
                      "--interval", str(-2 * (math.sqrt(2) - 1)), "0")
    assert _strip(implicit) == _strip(explicit)


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.dictionaries(st.text(min_size=1, max_size=8), st.one_of(finite, st.integers(), st.booleans(),
                                                                  st.just(math.inf))))
def test_run_record_round_trip(payload):
    rec = RunRecord.create("hessian", payload, {"x": 1.5, "nested": [math.inf, 2]}, {"steps": 10}, 0.25)
    assert RunRecord.from_json(rec.to_json()) == rec


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bombieri", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert __version__ in proc.stdout
