import io
import json
import math

import pytest

from rhombus_distances.cli import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def test_eval_at_zero():
    status, out, _ = invoke("eval", "--case", "within", "--d", "0")
    assert status == 0
    assert out == "0,0,0\n"


def test_eval_line_has_three_fields():
    status, out, _ = invoke("eval", "--case", "within", "--d", "0.8660254")
    d, p, c = (float(x) for x in out.strip().split(","))
    assert d == 0.8660254
    assert p == pytest.approx(0.53884, abs=1e-4)


def test_eval_side_and_json():
    status, out, _ = invoke("eval", "--case", "within", "--d", str(math.sqrt(3)), "--side", "2",
                            "--format", "json")
    doc = json.loads(out)
    assert doc["pdf"] == pytest.approx(0.26942, abs=1e-5)


def test_table_rows():
    status, out, _ = invoke("table", "--case", "parallel", "--points", "500")
    lines = out.splitlines()
    assert lines[0] == "d,pdf,cdf"
    assert len(lines) == 501
    assert float(lines[-1].split(",")[0]) == pytest.approx(math.sqrt(7))
    assert float(lines[-1].split(",")[2]) == 1.0
    # 17 significant digits round-trip the floats
    assert all(len(f.replace(".", "").replace("-", "").lstrip("0")) <= 17
               for f in lines[1].split(","))


def test_sample_is_deterministic():
    a = invoke("sample", "--case", "shortdiag", "--n", "1000", "--seed", "42")[1]
    b = invoke("sample", "--case", "shortdiag", "--n", "1000", "--seed", "42")[1]
    c = invoke("sample", "--case", "shortdiag", "--n", "1000", "--seed", "43")[1]
    assert a == b and a != c
    lines = a.splitlines()
    assert lines[0] == "distance" and len(lines) == 1001


def test_moments_within():
    status, out, _ = invoke("moments", "--case", "within")
    (rec,) = json.loads(out)
    assert f"{rec['mean']:.10f}" == "0.5123783360"
    assert f"{rec['second_raw']:.10f}" == "0.3333333333"
    assert f"{rec['variance']:.10f}" == "0.0708017741"


def test_moments_all_csv():
    status, out, _ = invoke("moments", "--case", "all", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "case,side,mean,second_raw,variance"
    assert [line.split(",")[0] for line in lines[1:]] == ["within", "parallel", "longdiag", "shortdiag"]


def test_validate_passes():
    status, out, _ = invoke("validate")
    lines = out.splitlines()
    assert status == 0
    assert lines and all(line.endswith("PASS") for line in lines)
    assert len(lines[0].split()) == 5


def test_fit_json():
    status, out, _ = invoke("fit", "--case", "longdiag", "--degree", "20")
    doc = json.loads(out)
    assert status == 0
    assert len(doc["coefficients"]) == 21
    assert doc["norm_of_residuals"] < 0.5


@pytest.mark.parametrize("argv", [
    ("eval", "--case", "hexagon", "--d", "1"),
    ("eval", "--case", "within", "--d", "abc"),
    ("eval", "--case", "within", "--d", "1", "--bogus"),
    ("sample", "--case", "within", "--n", "-5"),
    ("table", "--case", "within", "--side", "0"),
    ("eval", "--case", "within", "--d", "nan"),
    ("eval", "--case", "all", "--d", "1"),
])
def test_errors_exit_nonzero(argv, tmp_path, capsys):
    target = tmp_path / "out.csv"
    status, out, err = invoke(*argv, "--output", str(target))
    assert status != 0
    assert out == ""
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_output_file(tmp_path):
    target = tmp_path / "t.csv"
    status, out, _ = invoke("table", "--case", "within", "--points", "5", "--output", str(target))
    assert status == 0 and out == ""
    data = target.read_bytes()
    assert data.startswith(b"d,pdf,cdf\n") and b"\r" not in data
