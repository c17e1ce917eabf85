import csv
import hashlib
import json
import math
import subprocess
import sys

import pytest

from latticezeros.cli import fmt, main, principal_arg
from latticezeros.specialfn import dirichlet_l, riemann_zeta


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def check_manifest(out):
    with open(str(out) + ".manifest.json") as fh:
        man = json.load(fh)
    for entry in man["outputs"]:
        with open(entry["path"], "rb") as fh:
            assert hashlib.sha256(fh.read()).hexdigest() == entry["sha256"]
    assert {"command", "parameters", "config", "artifact_version", "wall_time", "outputs"} <= set(man)
    return man


def test_eval_potter_titchmarsh(capsys):
    code, out, _ = run(["eval", "--lambda", "2.2360679775", "--sigma", "0.9329", "--t", "15.6682", "--json"], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["S0_tilde_rel_to_scale"] < 1e-3


def test_eval_matches_factor_product(capsys):
    code, out, _ = run(["eval", "--lambda", "1", "--sigma", "3", "--t", "0", "--json"], capsys)
    assert code == 0
    rec = json.loads(out)
    expected = 4 * riemann_zeta(3).real * dirichlet_l(-4, 3).real
    assert abs(rec["S0"][0] - expected) < 1e-13 * expected
    assert abs(rec["closed_form"][0] - expected) < 1e-13 * expected


def test_eval_text_and_c_input(capsys):
    code, out, _ = run(["eval", "--c", "2", "--sigma", "2.5"], capsys)
    assert code == 0
    assert "(c = 2)" in out


def test_eval_pole_exits_2(capsys):
    code, _, err = run(["eval", "--lambda", "1", "--sigma", "1", "--t", "0"], capsys)
    assert code == 2
    assert err


def test_usage_errors_exit_4(capsys):
    assert run(["eval", "--lambda", "1", "--c", "1", "--sigma", "2"], capsys)[0] == 4
    assert run(["eval", "--sigma", "2"], capsys)[0] == 4
    assert run(["nonsense"], capsys)[0] == 4


def test_grid_minimal(tmp_path, capsys):
    out = tmp_path / "g.csv"
    code, _, _ = run(
        ["grid", "--lambda", "2.2360679775", "--min1", "0", "--max1", "1", "--n1", "2",
         "--t-min", "14", "--t-max", "17", "--nt", "2", "--out", str(out)],
        capsys,
    )
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["sigma", "t", "logmod"]
    assert len(rows) == 5
    for r in rows[1:]:
        assert all(math.isfinite(float(x)) for x in r)
    man = check_manifest(out)
    assert len(man["outputs"]) == 2


def test_grid_argument_range(tmp_path, capsys):
    out = tmp_path / "a.csv"
    code, _, _ = run(
        ["grid", "--c", "4.000711", "--min1", "0.45", "--max1", "0.55", "--n1", "5",
         "--t-min", "16.33", "--t-max", "16.39", "--nt", "7", "--quantity", "arg", "--out", str(out)],
        capsys,
    )
    assert code == 0
    vals = [float(r[2]) for r in read_csv(out)[1:]]
    assert all(-math.pi < v <= math.pi for v in vals)
    assert principal_arg(complex(-1.0, -0.0)) == math.pi


def test_grid_rejects_degenerate_axis(tmp_path, capsys):
    out = tmp_path / "bad.csv"
    code, _, _ = run(["grid", "--lambda", "1", "--min1", "0", "--max1", "1", "--n1", "1",
                      "--t-min", "1", "--t-max", "2", "--nt", "2", "--out", str(out)], capsys)
    assert code == 4
    assert not out.exists()


def test_scan_sqrt3_prefactor_zeros(tmp_path, capsys):
    out = tmp_path / "z.csv"
    code, _, _ = run(["scan", "--c", "3", "--t-min", "0", "--t-max", "20", "--out", str(out)], capsys)
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["lambda", "sigma", "t", "multiplicity", "residual", "method"]
    ts = [float(r[2]) for r in rows[1:]]
    for n in range(4):
        p = (2 * n + 1) * math.pi / (2 * math.log(2))
        assert min(abs(t - p) for t in ts) < 1e-6
    check_manifest(out)


def test_scan_empty_interval(tmp_path, capsys):
    out = tmp_path / "e.csv"
    code, _, _ = run(["scan", "--lambda", "1", "--t-min", "0.1", "--t-max", "0.2", "--out", str(out)], capsys)
    assert code == 0
    assert read_csv(out) == [["lambda", "sigma", "t", "multiplicity", "residual", "method"]]


def test_scan_jobs_is_deterministic(tmp_path, capsys):
    outs = []
    for jobs in ("1", "2"):
        out = tmp_path / f"j{jobs}.csv"
        assert run(["scan", "--lambda", "1", "--t-min", "10", "--t-max", "16", "--jobs", jobs, "--out", str(out)], capsys)[0] == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_trace_zero_length(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _, _ = run(["trace", "--c-start", "5", "--c-end", "5", "--sigma", "0.93297", "--t", "15.66825",
                      "--out", str(out)], capsys)
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["c", "lambda", "sigma", "t", "residual"]
    assert len(rows) == 2
    man = check_manifest(out)
    assert man["termination"] == "ReachedLambdaBound"


def test_trace_to_upper_merge(tmp_path, capsys):
    out = tmp_path / "up.csv"
    code, _, _ = run(["trace", "--c-start", "5", "--c-end", "4.0007", "--sigma", "0.93297", "--t", "15.66825",
                      "--out", str(out)], capsys)
    assert code == 0
    last = read_csv(out)[-1]
    assert abs(float(last[2]) - 0.5) < 1e-5
    assert 16.342539 < float(last[3]) < 16.384603
    assert check_manifest(out)["termination"] == "MergedOnCriticalLine"


def test_transition_report(tmp_path, capsys):
    out = tmp_path / "tr.csv"
    code, _, _ = run(["transition", "--c-lo", "4.0", "--c-hi", "4.001", "--t-center", "16.36", "--out", str(out)], capsys)
    assert code == 0
    rep = dict(read_csv(out)[1:])
    assert 4.00071094 < float(rep["c_lo"]) < float(rep["c_hi"]) < 4.00071095
    assert rep["winding"] == "2"
    assert 0.45 <= float(rep["beta"]) <= 0.55
    check_manifest(out)


def test_transition_same_class_exits_4(tmp_path, capsys):
    out = tmp_path / "bad.csv"
    code, _, err = run(["transition", "--c-lo", "4.5", "--c-hi", "5.0", "--t-center", "15.8", "--t-halfwidth", "0.2",
                        "--out", str(out)], capsys)
    assert code == 4
    assert "OffLinePair" in err
    assert not out.exists()


@pytest.mark.parametrize("suite", ["identities", "factorizations", "expansions"])
def test_verify_suites(suite, tmp_path, capsys):
    out = tmp_path / "v.csv"
    code, stdout, _ = run(["verify", suite, "--out", str(out)], capsys)
    assert code == 0
    checks = [json.loads(line) for line in stdout.splitlines()]
    assert checks and all(c["passed"] for c in checks)
    assert check_manifest(out)["passed"] is True


def test_config_file_and_env(tmp_path, capsys, monkeypatch):
    conf = tmp_path / "c.conf"
    conf.write_text("# tighter\ntarget_rel_err = 1e-13\n")
    code, out, _ = run(["eval", "--lambda", "1.3", "--sigma", "2", "--config", str(conf), "--json"], capsys)
    assert code == 0
    conf.write_text("no_such_key = 1\n")
    assert run(["eval", "--lambda", "1.3", "--sigma", "2", "--config", str(conf)], capsys)[0] == 4
    monkeypatch.setenv("LZT_DEFAULT_TOL", "1e-12")
    out_file = tmp_path / "s.csv"
    assert run(["scan", "--lambda", "1", "--t-min", "13", "--t-max", "15", "--out", str(out_file)], capsys)[0] == 0
    man = check_manifest(out_file)
    assert man["config"]["target_rel_err"] == 1e-12
    assert run(["scan", "--lambda", "1", "--t-min", "13", "--t-max", "15", "--tol", "1e-13", "--out", str(out_file)], capsys)[0] == 0
    assert check_manifest(out_file)["config"]["target_rel_err"] == 1e-13


def test_fmt_round_trips():
    for x in (math.pi, 1 / 3, 4.0007109410166732, 1e-300):
        assert float(fmt(x)) == x


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "latticezeros", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0.1.0" in proc.stdout
