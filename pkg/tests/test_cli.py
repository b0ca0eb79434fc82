"""Command-line interface: exit codes, output formats, determinism."""
import json

import pytest

from hardylab.cli import RunConfig, run_cli

GKS_SPEC = """\
u = pow(-2.0)
v = const(1.0)
w = piecewise([0, 1]: const(1.0); [1, inf]: pow(-3.0))
"""

THM33_SPEC = """\
u = pow(0.2)
b = const(1.0)
v = pow(-1.4)
w = piecewise([0, 1]: pow(2.0); [1, inf]: pow(-6.0))
"""

MAXIMAL_BAD_PHI_SPEC = """\
b = pow(0.5)
phi = pow(-0.2)
v = pow(-1.4)
w = piecewise([0, 1]: pow(2.0); [1, inf]: pow(-6.0))
"""


@pytest.fixture
def gks_spec(tmp_path):
    path = tmp_path / "gks.ws"
    path.write_text(GKS_SPEC)
    return str(path)


@pytest.fixture
def thm33_spec(tmp_path):
    path = tmp_path / "thm33.ws"
    path.write_text(THM33_SPEC)
    return str(path)


def _constant_args(spec, fmt="json"):
    return ["constant", "--theorem", "gks", "--case", "a",
            "--params", "m=2,p=2,q=2", "--weights", spec, "--format", fmt]


def test_constant_json_envelope(gks_spec, capsys):
    assert run_cli(_constant_args(gks_spec)) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == 1
    assert set(doc) == {"schema", "config", "defaults", "report"}
    assert doc["config"]["theorem"] == "gks"
    assert doc["report"]["total"] > 0.0
    names = [t["name"] for t in doc["report"]["terms"]]
    assert "D1" in names


def test_constant_output_is_byte_deterministic(gks_spec, capsys):
    run_cli(_constant_args(gks_spec))
    first = capsys.readouterr().out
    run_cli(_constant_args(gks_spec))
    assert capsys.readouterr().out == first


def test_constant_csv_column_order(gks_spec, capsys):
    assert run_cli(_constant_args(gks_spec, fmt="csv")) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    header = lines[0].split(",")
    # sorted parameter names first, then the terms in report order, then
    # the aggregate
    assert header[:3] == ["m", "p", "q"]
    assert header[-1] == "total"
    assert len(lines) == 2
    row = lines[1].split(",")
    assert float(row[0]) == 2.0
    assert float(row[-1]) > 0.0


def test_constant_writes_figures(gks_spec, tmp_path, capsys):
    figdir = tmp_path / "figs"
    assert run_cli(_constant_args(gks_spec)
                   + ["--figures", str(figdir)]) == 0
    capsys.readouterr()
    made = sorted(p.name for p in figdir.iterdir())
    assert made == ["gks-terms.png", "gks-weights.png"]


def test_constant_out_file(gks_spec, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run_cli(_constant_args(gks_spec) + ["--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["theorem"] == "gks"


def test_regime_violation_exits_one(thm33_spec, capsys):
    code = run_cli(["constant", "--theorem", "thm33",
                    "--params", "m=1.5,p=2,q=3,r=3.5",
                    "--weights", thm33_spec])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.err.startswith("regime violation")
    assert "error:" not in captured.err


def test_missing_weight_role_exits_one(gks_spec, capsys):
    code = run_cli(["constant", "--theorem", "thm33",
                    "--params", "m=1.5,p=2,q=3,r=2.5",
                    "--weights", gks_spec])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_unknown_config_key_exits_one(tmp_path, capsys):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"theorem": "gks", "wibble": 3}))
    code = run_cli(["constant", "--theorem", "gks",
                    "--config", str(cfgfile)])
    assert code == 1
    assert "unknown config keys" in capsys.readouterr().err


def test_soft_failure_exits_two(tmp_path, capsys):
    spec = tmp_path / "max.ws"
    spec.write_text(MAXIMAL_BAD_PHI_SPEC)
    code = run_cli(["maximal-norm", "--regime", "thm41",
                    "--params", "alpha=1.3,p1=2.6,m1=1.95,p2=3.25,m2=3.9",
                    "--weights", str(spec)])
    doc = json.loads(capsys.readouterr().out)
    assert code == 2
    assert any("certificate:" in f for f in doc["report"]["flags"])


def test_oracle_subcommand(gks_spec, capsys):
    code = run_cli(["oracle", "--inequality", "dual-(2.6)",
                    "--params", "m=2,p=2,q=2", "--weights", gks_spec,
                    "--budget", "60"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["report"]["best"] > 0.0


def test_sweep_rows_follow_input_order(gks_spec, capsys, monkeypatch):
    monkeypatch.setenv("HARDYLAB_THREADS", "3")
    code = run_cli(["sweep", "--theorem", "gks", "--case", "a",
                    "--params", "m=2,p=2", "--weights", gks_spec,
                    "--sweep", "q=2:4:3:lin"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert code == 0
    header = lines[0].split(",")
    qcol = header.index("q")
    qs = [float(r.split(",")[qcol]) for r in lines[1:]]
    assert qs == [2.0, 3.0, 4.0]


def test_verify_single_check(capsys):
    code = run_cli(["verify", "--suite", "rearrangement", "--seed", "7"])
    out = capsys.readouterr().out
    assert code == 0
    assert "rearrangement" in out
    assert "PASS" in out


def test_config_roundtrip(gks_spec):
    cfg = RunConfig(command="constant", theorem="gks", case="a",
                    params={"p": 2.0, "m": 2.0, "q": 2.0},
                    weights=gks_spec)
    doc = cfg.to_dict()
    assert list(doc["params"]) == ["m", "p", "q"]
