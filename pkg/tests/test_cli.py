import csv
import io
import json
from fractions import Fraction

import pytest

from tseq.cli import main, run
from tseq.config import ConfigError, ExperimentConfig, load_config, seq_from_spec
from tseq.reports import WitnessReport


def _cfg(experiment, **params):
    return ExperimentConfig(experiment, params)


def test_config_round_trip(tmp_path):
    cfg = _cfg("thm2-ring", r="3/2", N=60, witnesses="2")
    path = tmp_path / "c.json"
    path.write_text(cfg.dumps())
    again = load_config(str(path))
    assert again.dumps() == cfg.dumps()
    assert run(again).report.to_json() == run(cfg).report.to_json()


@pytest.mark.parametrize("doc, needle", [
    ({"experiment": "thm2-ring", "params": {"r": "2", "N": "10", "bogus": 1}}, "unknown keys"),
    ({"experiment": "thm2-ring", "params": {"r": "2"}}, "missing keys"),
    ({"experiment": "nope", "params": {}}, "unknown experiment"),
    ({"experiment": "thm2-ring", "params": {"r": "2", "N": "9"}, "extra": 1}, "unknown keys"),
])
def test_config_rejections(doc, needle):
    with pytest.raises(ConfigError, match=needle):
        ExperimentConfig.from_dict(doc)


def test_load_config_reports_line(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{\n  "experiment": "thm2-ring",\n  "params": {"r": "2", "N": "10", "zzz": "1"}\n}\n')
    with pytest.raises(ConfigError) as exc:
        load_config(str(path))
    assert exc.value.line == 3
    path.write_text('{\n  "experiment": "thm2-ring",\n  "params": {\n')
    with pytest.raises(ConfigError) as exc:
        load_config(str(path))
    assert exc.value.line is not None


@pytest.mark.parametrize("experiment, params", [
    ("thm2-ring", {"r": "3/2", "N": "60", "witnesses": "2"}),
    ("thm5-sup", {"a": "pow2", "b": "shifted(pow2, 1)", "g": "1", "N": "1000"}),
    ("thm6-tau", {"mode": "ball-cap", "n0": "3", "window": "6"}),
    ("thm4-amalgam", {"mode": "check", "c": "3", "bound": "100"}),
])
def test_run_certified(experiment, params):
    out = run(ExperimentConfig(experiment, params))
    assert out.report.verdict == "certified"
    assert out.exit_code == 0


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["sup-witness", "--a", "pow2", "--b", "shifted(pow2, 1)", "--g", "1", "--N", "300"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = WitnessReport.from_json(a.read_text())
    assert rep.to_json() == a.read_text()
    assert "timestamp" not in a.read_text()


@pytest.mark.parametrize("argv, code", [
    (["nbhd-member", "--seq", "e", "--x", "1e2", "--slots", "1"], 0),
    (["nbhd-member", "--seq", "e", "--x", "3e0", "--slots", "1"], 3),
    (["nbhd-member", "--seq", "pow2", "--x", "5", "--slots", "3"], 4),
    (["ringseq", "--r", "1", "--N", "10"], 2),
    (["nbhd-member", "--seq", "e", "--x", "3e0 2e1", "--slots", "1"], 2),
    (["gaps", "--seq", "n", "--N", "100", "--window", "16"], 0),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    err = capsys.readouterr().err
    assert err.startswith("tseq:")


def test_usage_error_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["track"])
    assert exc.value.code == 2
    assert main([]) == 2


def test_track_csv(tmp_path, capsys):
    base = tmp_path / "base.json"
    base.write_text(json.dumps({"kind": "padic", "p": "2", "depth": "20"}))
    assert main(["track", "--base", str(base), "--f", "n^2", "--N", "20"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["n", "f(n)", "eps(n)", "a_n", "k_n"]
    assert len(rows) == 21
    for n, f, eps, a, k in rows[1:]:
        f, a, k = int(f), int(a), int(k)
        assert int(f) == int(n) ** 2
        assert a % 2**k == 0
        assert abs(a - f) <= Fraction(eps)


def test_config_flag_writes_output(tmp_path):
    out = tmp_path / "ring.json"
    cfg = ExperimentConfig("thm2-ring", {"r": "2", "N": "60"}, str(out), "json")
    path = tmp_path / "c.json"
    path.write_text(cfg.dumps())
    assert main(["--config", str(path)]) == 0
    assert json.loads(out.read_text())["verdict"] == "certified"
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tseq-")]


@pytest.mark.parametrize("spec, head", [
    ("pow2", [1, 2, 4, 8]),
    ("pow(3/2)", [1, 1, 2, 3]),
    ("shifted(pow2, 1)", [2, 3, 5, 9]),
    ("n^2+1", [1, 2, 5, 10]),
    ({"preset": "table", "values": ["3", "5", "9"]}, [3, 5, 9]),
])
def test_seq_specs(spec, head):
    s = seq_from_spec(spec)
    assert [s[i] for i in range(len(head))] == head
