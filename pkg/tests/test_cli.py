import csv
import io
import json
from pathlib import Path

import pytest

from breakwave import cli

ROOT = Path(__file__).resolve().parent.parent
SCEN = ROOT / "scenarios"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def cfg(name):
    return SCEN / f"{name}.json"


def write_cfg(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


def base_doc(name="zero"):
    return json.loads(cfg(name).read_text())


def approx_tree(a, b, tol):
    if isinstance(a, dict):
        assert set(a) == set(b)
        for k in a:
            approx_tree(a[k], b[k], tol)
    elif isinstance(a, list):
        assert len(a) == len(b)
        for x, y in zip(a, b):
            approx_tree(x, y, tol)
    elif isinstance(a, float) and not isinstance(a, bool):
        assert abs(a - b) <= tol * max(1.0, abs(b)), (a, b)
    else:
        assert a == b


# ---- threshold

def test_threshold_matches_golden(capsys, tmp_path):
    code, out, _ = run(capsys, "threshold", "--config", cfg("tanh-steep"), "--out", tmp_path)
    assert code == 0
    doc = json.loads(out)
    approx_tree(doc, json.loads((GOLDEN / "tanh-steep.threshold.json").read_text()), 1e-12)
    assert json.loads((tmp_path / "threshold.json").read_text()) == doc
    assert doc["report"]["satisfied"] is True


def test_threshold_zero_data(capsys):
    code, out, _ = run(capsys, "threshold", "--config", cfg("zero"))
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["satisfied"] is False
    assert rep["blowup_bound"] is None


def test_fixed_mu_flag(capsys):
    code, out, _ = run(capsys, "threshold", "--config", cfg("tanh-steep"), "--mu", "-0.5")
    assert code == 0
    doc = json.loads(out)
    assert doc["mu_mode"] == "fixed"
    assert doc["report"]["mu"] == -0.5


def test_grid_flag_does_not_move_threshold_verdict(capsys):
    verdicts = []
    for N in (64, 256):
        code, out, _ = run(capsys, "threshold", "--config", cfg("tanh-steep"), "--grid", N)
        assert code == 0
        verdicts.append(json.loads(out)["report"]["satisfied"])
    assert verdicts[0] == verdicts[1]


# ---- configuration errors

@pytest.mark.parametrize("mutate, field", [
    (lambda d: d["kernel"]["params"].pop("b"), "kernel.params.b"),
    (lambda d: d["profile"].update(kind="Nope"), "profile.kind"),
    (lambda d: d["solver"].update(N=1000), "solver.N"),
    (lambda d: d["solver"].update(horizon=-1.0), "solver.horizon"),
    (lambda d: d.update(extra=1), "extra"),
    (lambda d: d["threshold"].update(mu=0.3) if "threshold" in d else d.update(
        threshold={"mu": 0.3}), "threshold.mu"),
    (lambda d: d.update(seed=-4), "seed"),
])
def test_malformed_config_names_the_field(capsys, tmp_path, mutate, field):
    doc = base_doc()
    mutate(doc)
    code, _, err = run(capsys, "threshold", "--config", write_cfg(tmp_path, doc))
    assert code == 2
    assert field in err


def test_json_syntax_error_has_position(capsys, tmp_path):
    p = write_cfg(tmp_path, '{\n  "name": "x",\n  "kernel": }\n')
    code, _, err = run(capsys, "threshold", "--config", p)
    assert code == 2
    assert "line 3" in err and "column" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "threshold", "--config", tmp_path / "absent.json")
    assert code == 2 and "cannot read" in err


def test_bad_mu_flag(capsys):
    code, _, err = run(capsys, "threshold", "--config", cfg("zero"), "--mu", "abc")
    assert code == 2 and "--mu" in err


# ---- simulate / verify

def test_simulate_ce98_matches_golden(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--config", cfg("ce98"), "--out", tmp_path)
    assert code == 0
    doc = json.loads(out)
    gold = json.loads((GOLDEN / "ce98.result.json").read_text())
    assert doc["breaking_detected"] and gold["breaking_detected"]
    for a, b in zip(doc["breaking_time_interval"], gold["breaking_time_interval"]):
        assert abs(a - b) <= gold["record_period"]
    names = {p.name for p in tmp_path.iterdir()}
    assert {"result.json", "history.csv", "plot_m1.csv", "f11.csv"} <= names
    assert {"snapshot_t0.csv", "snapshot_t0.05.csv"} & names
    rows = list(csv.reader(io.StringIO((tmp_path / "history.csv").read_text())))
    assert rows[0] == ["t", "m1", "m2", "xi1", "xi2"]


def test_boundary_contamination_exits_3(capsys):
    code, _, err = run(capsys, "simulate", "--config", cfg("boundary-contamination"))
    assert code == 3
    assert "BoundaryContaminationError" in err and "enlarge L" in err


def test_verify_pass(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--config", cfg("ramp-theorem"), "--out", tmp_path)
    assert code == 0
    assert "PASS" in out
    doc = json.loads((tmp_path / "verify.json").read_text())
    gold = json.loads((GOLDEN / "ramp-theorem.verify.json").read_text())
    assert doc["verdict"] == gold["verdict"] == "PASS"
    approx_tree(doc["threshold"], gold["threshold"], 1e-12)


def test_verify_no_prediction_for_small_data(capsys):
    code, out, _ = run(capsys, "verify", "--config", cfg("smooth-small"))
    assert code == 0
    assert "NO PREDICTION" in out
    assert "no breaking" in out


def test_verify_fail_exits_4(capsys, tmp_path):
    # shrink the horizon so the run cannot reach the predicted bound
    doc = base_doc("ramp-theorem")
    doc["solver"]["horizon"] = 0.01
    code, out, _ = run(capsys, "verify", "--config", write_cfg(tmp_path, doc))
    assert code == 4
    assert "FAIL" in out


def test_riccati_command(capsys, tmp_path):
    code, out, _ = run(capsys, "riccati", "--config", cfg("ramp-theorem"), "--out", tmp_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["blowup"] is True
    assert doc["blowup_interval"][1] <= doc["comparison_pole"] + 5 * doc["dt"]
    assert (tmp_path / "riccati.csv").read_text().startswith("t,m1,m2\n")


# ---- sweep

def _sweep_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_amplitude_sweep_is_monotone(capsys):
    code, out, _ = run(capsys, "sweep", "--config", cfg("tanh-amplitude-sweep"))
    assert code == 0
    flags = [r["satisfied"] == "True" for r in _sweep_rows(out)]
    assert len(flags) == 16
    first = flags.index(True)
    assert not any(flags[:first]) and all(flags[first:])


def test_single_point_sweep_equals_threshold(capsys):
    code, out, _ = run(capsys, "sweep", "--config", cfg("tanh-steep"),
                       "--axis", "profile.params.A=0.2:0.2:1")
    assert code == 0
    (row,) = _sweep_rows(out)
    code, th, _ = run(capsys, "threshold", "--config", cfg("tanh-steep"))
    rep = json.loads(th)["report"]
    assert float(row["mu"]) == rep["mu"]
    assert float(row["blowup_bound"]) == rep["blowup_bound"]
    assert (row["satisfied"] == "True") == rep["satisfied"]


def test_sweep_unknown_path(capsys):
    code, _, err = run(capsys, "sweep", "--config", cfg("tanh-steep"),
                       "--axis", "profile.params.Q=1:2:2")
    assert code == 2 and "profile.params.Q" in err


def test_sweep_without_axes(capsys):
    code, _, err = run(capsys, "sweep", "--config", cfg("zero"))
    assert code == 2 and "sweep" in err


def test_thread_cap(monkeypatch, capsys):
    monkeypatch.setenv("BREAKWAVE_THREADS", "1")
    assert cli.thread_cap() == 1
    one = run(capsys, "sweep", "--config", cfg("tanh-amplitude-sweep"))[1]
    monkeypatch.setenv("BREAKWAVE_THREADS", "4")
    assert cli.thread_cap() == 4
    four = run(capsys, "sweep", "--config", cfg("tanh-amplitude-sweep"))[1]
    assert one == four
    monkeypatch.setenv("BREAKWAVE_THREADS", "zero")
    code, _, err = run(capsys, "sweep", "--config", cfg("tanh-amplitude-sweep"))
    assert code == 2 and "BREAKWAVE_THREADS" in err


# ---- determinism and selftest

def test_outputs_are_byte_identical(capsys, tmp_path):
    for d in ("a", "b"):
        assert run(capsys, "simulate", "--config", cfg("ce98"), "--out", tmp_path / d)[0] == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", 3)
    assert code == 0
    assert "FAIL" not in out
