import json

import numpy as np
import pytest

from psgames.cli import EXIT_DEGENERATE, EXIT_ERROR, EXIT_OK, EXIT_USAGE, main
from psgames.tableio import read_tables


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ess_all_producer(capsys):
    code, out, _ = run(capsys, "ess", "--game", "foraging", "--n", "2", "--s", "0.5", "--gamma", "1")
    assert code == EXIT_OK
    assert out.startswith("AllProducer p★=1 π★=2 ")
    assert "verified=yes" in out


def test_ess_linear_tie_is_degenerate(capsys):
    # tie level c / (p_succ s (1 - a)) = 0.15 / (0.5 * 0.6 * 0.5) = 1
    code, out, _ = run(capsys, "ess", "--game", "company", "--utility", "linear", "--gamma", "1")
    assert code == EXIT_DEGENERATE
    assert out.startswith("Degenerate")


def test_ess_interior(capsys):
    code, out, _ = run(capsys, "ess", "--game", "foraging", "--n", "4", "--s", "0.4", "--gamma", "0.7")
    assert code == EXIT_OK and out.startswith("Interior p★=0.386206")


@pytest.mark.parametrize(
    "argv",
    [
        ["ess", "--gamma", "-1"],
        ["sweep", "--gamma-range", "0:3:0"],
        ["sweep", "--gamma-range", "3:0:0.1"],
        ["sweep", "--gamma-range", "0:3"],
        ["sweep"],
        ["sweep", "--gamma-range", "0:1:0.5", "--second-axis", "n:2:4:1"],
        ["sweep", "--gamma-range", "0:1:0.5", "--second-axis", "c:0.1:0.2:0.05"],
        ["ess", "--game", "chess"],
        ["ess", "--utility", "linear"],
        ["ess", "--game", "company", "--utility", "square"],
        ["ess", "--game", "company", "--s", "0.1"],
        ["ess", "--format", "xml"],
        ["ess", "--gamma-range", "0:1:0.5"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc_info:
        raise SystemExit(main(argv))
    assert exc_info.value.code == EXIT_USAGE


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"game": "foraging", "n": 2, "s": 0.5, "gamma": 4.0}))
    code, out, _ = run(capsys, "ess", "--config", str(cfg))
    assert code == EXIT_OK and out.startswith("AllScrounger")
    code, out, _ = run(capsys, "ess", "--config", str(cfg), "--gamma", "1")
    assert code == EXIT_OK and out.startswith("AllProducer")


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"game": "foraging", "colour": "red"}))
    code, _, err = run(capsys, "ess", "--config", str(cfg))
    assert code == EXIT_USAGE and "colour" in err
    code, _, _ = run(capsys, "ess", "--config", str(tmp_path / "missing.json"))
    assert code == EXIT_USAGE
    cfg.write_text("[1, 2]")
    code, _, _ = run(capsys, "ess", "--config", str(cfg))
    assert code == EXIT_USAGE


def test_config_accepts_hyphenated_keys(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"game": "company", "p-succ": 0.5, "gamma-range": "0:1:0.5"}))
    out = tmp_path / "t.csv"
    code, _, _ = run(capsys, "sweep", "--config", str(cfg), "--out", str(out))
    assert code == EXIT_OK and out.exists()


def test_sweep_csv_with_second_axis(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys, "sweep", "--game", "foraging", "--n", "4",
        "--gamma-range", "0:3:0.01", "--second-axis", "s:0.2:0.6:0.2", "--out", str(out),
    )
    assert code == EXIT_OK
    tables, meta = read_tables(out)
    assert [v for v, _ in tables] == [0.2, 0.4, 0.6]
    for _, t in tables:
        p = t.column("p_star")
        assert (np.diff(p) <= 1e-12).all() and p[-1] == 0.0
    assert meta["config"]["params"]["n"] == 4
    assert meta["config"]["second_axis"]["name"] == "s"
    assert meta["rc_intervals"][1]["s"] == 0.4
    assert meta["rc_intervals"][1]["pi_star"]


def test_sweep_json_echoes_config(tmp_path, capsys):
    out = tmp_path / "sweep.json"
    code, _, _ = run(
        capsys, "sweep", "--game", "company", "--utility", "exp:3", "--c", "0.05",
        "--gamma-range", "0:3:0.05", "--format", "json", "--out", str(out), "--root-tol", "1e-11",
    )
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    meta = doc["metadata"]
    assert meta["extrapolated"] is True
    params = meta["config"]["params"]
    assert params == {"n": 4, "s": 0.6, "gamma": 1.0, "c": 0.05, "a": 0.5, "p_succ": 0.5, "utility": "exp:3.0"}
    assert meta["config"]["solver"]["root_tol"] == 1e-11
    assert meta["config"]["gamma_range"]["step"] == 0.05
    assert set(doc["rows"][0]) == {"gamma", "p_star", "pi_star", "total_production", "classification"}


def test_sweep_to_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--gamma-range", "0:1:0.5")
    assert code == EXIT_OK
    assert out.splitlines()[1].startswith("gamma,")


def test_sweep_unwritable_path(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", "--gamma-range", "0:1:0.5", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == EXIT_ERROR and err


def test_sweep_workers_do_not_change_output(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--game", "company", "--gamma-range", "0:2:0.05"]
    run(capsys, *args, "--out", str(a))
    run(capsys, *args, "--out", str(b), "--workers", "3")
    assert a.read_text() == b.read_text()


def test_verify_foraging_defaults(capsys):
    code, out, _ = run(capsys, "verify", "--game", "foraging")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert all(line.startswith(("PASS", "RC intervals")) for line in lines)
    assert any("binomial enumeration" in line for line in lines)


def test_verify_company_chicken(capsys):
    code, out, _ = run(capsys, "verify", "--game", "company", "--n", "2", "--s", "0.6", "--c", "0.07")
    assert code == EXIT_OK
    assert "PASS  solver pi* vs closed form" in out


def test_verify_linear_reports_no_rc(capsys):
    code, out, _ = run(capsys, "verify", "--game", "company", "--utility", "linear")
    assert code == EXIT_OK
    assert "RC intervals: none" in out.splitlines()


def test_verify_modified(capsys):
    code, out, _ = run(capsys, "verify", "--game", "foraging-modified", "--producer-keeps-all")
    assert code == EXIT_OK and "RC intervals: none" in out
