"""File formats round-trip and the command-line surface."""

import json
import subprocess
import sys

import pytest

from cwlab.errors import FormatError
from cwlab.fields import build_field
from cwlab.formats import read_sub, read_sys, write_sub, write_sys
from cwlab.polynomials import PolySystem, parse_poly
from cwlab.subspaces import AffineSubspace

F3 = build_field(3, 1)
F4 = build_field(2, 2)


SYS_TEXT = """# a comment
field p=3 k=1
vars x1 x2 x3
poly x1*x2 + x3^2   # trailing comment
poly x1 + 2
"""


def test_read_sys():
    field, names, system = read_sys(SYS_TEXT)
    assert field.q == 3 and names == ["x1", "x2", "x3"]
    assert system.r == 2 and system.degrees == (2, 1)


def test_sys_round_trip():
    field, names, system = read_sys(SYS_TEXT)
    text = write_sys(field, names, system)
    field2, names2, system2 = read_sys(text)
    assert (field2, names2, system2) == (field, names, system)
    assert write_sys(field2, names2, system2) == text


def test_sys_round_trip_extension_field():
    f = parse_poly("g*x1^2 + x2 + 1", F4, ["x1", "x2"])
    text = write_sys(F4, ["x1", "x2"], PolySystem([f]))
    field2, names2, system2 = read_sys(text)
    assert system2.polys[0] == f
    assert "modulus=1,1,1" in text


def test_sys_crlf_and_explicit_modulus():
    text = "field p=2 k=2 modulus=1,1,1\r\nvars x y\r\npoly g*x + y\r\n"
    field, names, system = read_sys(text)
    assert field.q == 4 and names == ["x", "y"]


def test_sys_errors_carry_line_numbers():
    with pytest.raises(FormatError) as err:
        read_sys("field p=3 k=1\nvars x1\npoly x1 + * 2\n")
    assert err.value.line == 3
    with pytest.raises(FormatError):
        read_sys("vars x1\npoly x1\n")
    with pytest.raises(FormatError):
        read_sys("field p=9 k=1\nvars x\npoly x\n")


def test_sub_round_trip():
    L = AffineSubspace(F3, (1, 2, 0), [(1, 0, 2), (0, 1, 1)])
    text = write_sub(L)
    assert read_sub(text, F3) == L


def _run(*args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "cwlab", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=300,
    )


@pytest.fixture()
def workdir(tmp_path):
    (tmp_path / "hyp.sys").write_text(
        "field p=2 k=1\nvars x1 x2 x3 x4\npoly x1*x2 + x3*x4\n", encoding="utf-8"
    )
    return tmp_path


def test_cli_count(workdir):
    res = _run("count", "--system", "hyp.sys", cwd=workdir)
    assert res.returncode == 0
    body = json.loads(res.stdout)
    assert body["count"] == 10
    assert list(body) == ["q", "n", "region", "count", "scanned", "workers"]


def test_cli_count_deterministic_body(workdir):
    a = _run("count", "--system", "hyp.sys", "--workers", "1", cwd=workdir)
    b = _run("count", "--system", "hyp.sys", "--workers", "1", cwd=workdir)
    assert a.stdout == b.stdout
    wide = _run("count", "--system", "hyp.sys", "--workers", "4", cwd=workdir)
    assert json.loads(wide.stdout)["count"] == json.loads(a.stdout)["count"]


def test_cli_check_laws(workdir):
    for law in ("ax", "chevalley", "warning-hyperplanes", "theorem1"):
        res = _run("check", "--system", "hyp.sys", "--law", law, cwd=workdir)
        assert res.returncode == 0, res.stderr
        assert json.loads(res.stdout)["pass"] is True


def test_cli_check_dim_restriction(workdir):
    res = _run(
        "check", "--system", "hyp.sys", "--law", "theorem1", "--all-pairs",
        "--dim", "2", cwd=workdir,
    )
    assert res.returncode == 0
    body = json.loads(res.stdout)
    assert body["pass"] is True and body["evidence"]["per_dim"] == {"2": 35}


def test_cli_check_violation_exit_code(workdir):
    (workdir / "bad.sys").write_text(
        "field p=2 k=1\nvars x1 x2\npoly x1*x2 + 1\n", encoding="utf-8"
    )
    res = _run("check", "--system", "bad.sys", "--law", "warning-hyperplanes", cwd=workdir)
    assert res.returncode == 2
    assert json.loads(res.stdout)["witness"] is not None


def test_cli_input_error_exit_code(workdir):
    (workdir / "bad.sys").write_text("field p=4 k=1\nvars x\npoly x\n", encoding="utf-8")
    res = _run("count", "--system", "bad.sys", cwd=workdir)
    assert res.returncode == 1
    assert "line 1" in res.stderr


def test_cli_budget_exit_code(workdir):
    (workdir / "wide.sys").write_text(
        "field p=5 k=1\nvars " + " ".join(f"x{i}" for i in range(9)) + "\npoly x0\n",
        encoding="utf-8",
    )
    res = _run("count", "--system", "wide.sys", "--budget", "1000", cwd=workdir)
    assert res.returncode == 3


def test_cli_count_subspace_and_ext(workdir):
    (workdir / "x1.sys").write_text("field p=3 k=1\nvars x1 x2\npoly x1\n", encoding="utf-8")
    (workdir / "line.sub").write_text("ambient 2\noffset 0 0\nbasis 0 1\n", encoding="utf-8")
    res = _run("count", "--system", "x1.sys", "--subspace", "line.sub", cwd=workdir)
    assert json.loads(res.stdout)["count"] == 3
    res2 = _run("count", "--system", "x1.sys", "--ext", "2", cwd=workdir)
    assert json.loads(res2.stdout)["count"] == 9


def test_cli_construct_and_recount(workdir):
    res = _run("construct", "example1", "--p", "3", "--out", "q.sys", cwd=workdir)
    assert res.returncode == 0
    res2 = _run("count", "--system", "q.sys", cwd=workdir)
    assert json.loads(res2.stdout)["count"] == 21
    recipe = json.loads((workdir / "q.recipe.json").read_text())
    assert recipe["kind"] == "example1" and recipe["parameters"]["p"] == 3
    # round-trip: the written file reparses to an identical canonical object
    text = (workdir / "q.sys").read_text()
    field, names, system = read_sys(text)
    assert write_sys(field, names, system) == text


def test_cli_audit(workdir):
    (workdir / "pair.sys").write_text(
        "field p=5 k=1\nvars x1 x2 x3\npoly x1*x2\n", encoding="utf-8"
    )
    res = _run("audit", "--system", "pair.sys", cwd=workdir)
    assert res.returncode == 0
    assert json.loads(res.stdout)["pass"] is True


def test_cli_estimate_dim(workdir):
    (workdir / "x1.sys").write_text("field p=3 k=1\nvars x1 x2\npoly x1\n", encoding="utf-8")
    res = _run("estimate-dim", "--system", "x1.sys", "--smax", "3", cwd=workdir)
    body = json.loads(res.stdout)
    assert body["d_hat"] == 1 and body["k_hat"] == 1


def test_cli_lemma_saturation(workdir):
    res = _run(
        "lemma", "saturation", "--p", "3", "--t", "2", "--part", "ii", "--exhaustive",
        cwd=workdir,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["pass"] is True


def test_cli_lemma_cover(workdir):
    res = _run("lemma", "cover", "--p", "2", "--n", "2", "--trials", "25", cwd=workdir)
    assert res.returncode == 0
    assert json.loads(res.stdout)["failures"] == 0


def test_cli_scan_conjecture(workdir):
    res = _run(
        "scan-conjecture", "--preset", "small", "--per-cell", "1",
        "--budget", "10000", "--out", "scan.csv", cwd=workdir,
    )
    assert res.returncode == 0
    lines = (workdir / "scan.csv").read_text().splitlines()
    assert lines[0].startswith("q,n,degrees")
    assert len(lines) > 1


def test_cli_suite_examples_preset(workdir):
    res = _run("suite", "--preset", "examples", "--seed", "0", cwd=workdir)
    assert res.returncode == 0, res.stdout + res.stderr
    body = json.loads(res.stdout.splitlines()[-1])
    assert body["failed"] == 0


def test_cli_suite_lemma2_preset_csv(workdir):
    res = _run(
        "suite", "--preset", "lemma2-exhaustive", "--format", "csv", cwd=workdir
    )
    assert res.returncode == 0, res.stdout + res.stderr
    lines = res.stdout.splitlines()
    assert any(line.startswith("C8,1,") for line in lines)
