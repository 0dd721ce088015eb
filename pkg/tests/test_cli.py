import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from bosonic_tradeoff.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from bosonic_tradeoff.entropy import g_entropy
from bosonic_tradeoff.finite_dim import FDChannel, FDEnsemble, dump_instance
from bosonic_tradeoff.regions import cq_frontier
from bosonic_tradeoff.serialize import fmt, frontier_from_csv, frontier_from_json, frontier_to_csv, frontier_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_frontier_cq_endpoint(capsys):
    code, out, _ = run(capsys, "frontier", "--slice", "cq", "--eta", "0.75", "--ns", "200")
    assert code == EXIT_OK
    assert out.startswith("# region=CQE")
    rows = _csv_rows(out)
    assert list(rows[0]) == ["lambda", "rate1", "rate2", "bound1", "bound2", "bound3"]
    q0 = [r for r in rows if float(r["rate2"]) == 0.0]
    assert float(q0[0]["rate1"]) == pytest.approx(g_entropy(150.0), abs=1e-12)


def test_capacities_table(capsys):
    code, out, _ = run(capsys, "capacities", "--eta", "0.75", "--ns", "200")
    assert code == EXIT_OK
    vals = {r["quantity"]: float(r["value"]) for r in _csv_rows(out)}
    assert vals["quantum_capacity_limit"] == pytest.approx(1.585, abs=5e-4)
    assert vals["ea_classical_capacity"] == pytest.approx(10.67, abs=0.01)
    assert vals["ea_ebit_cost"] == pytest.approx(9.09, abs=0.01)


def test_verify_example(capsys):
    code, out, _ = run(capsys, "verify", "--eta", "0.6", "--ns", "1", "--lambda", "1", "--cutoff", "60", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["passed"] is True
    assert doc["max_deviation"] < 1e-8
    assert {"cutoff", "tail_mass", "checks"} <= set(doc)
    assert {"name", "expected", "observed", "deviation"} <= set(doc["checks"][0])


def test_verify_failure_exit_code(capsys):
    code, _, err = run(capsys, "verify", "--eta", "0.75", "--ns", "2", "--cutoff", "8")
    assert code == EXIT_VERIFY
    assert "verification failed" in err


def test_infeasible_exit_code(capsys):
    code, _, err = run(capsys, "compare", "--eta", "0.75", "--ns", "200", "--target", "1.6")
    assert code == EXIT_INFEASIBLE
    assert "infeasible" in err


def test_domain_error_exit_code(capsys):
    code, _, _ = run(capsys, "capacities", "--eta", "1.5", "--ns", "200")
    assert code == EXIT_USAGE


def test_bad_flag_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "bosonic_tradeoff", "frontier", "--slice", "xyz", "--eta", "0.75", "--ns", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_USAGE
    assert "usage" in proc.stderr


def test_compare_output(capsys):
    code, out, _ = run(capsys, "compare", "--eta", "0.75", "--ns", "200", "--target", "1.4", "--format", "json")
    assert code == EXIT_OK
    rec = json.loads(out)["records"][0]
    assert rec["tradeoff_rate"] == pytest.approx(4.424322685143897, abs=1e-9)
    assert rec["tradeoff_rate"] > rec["timeshare_rate"]


def test_compare_ce_reports_db(capsys):
    code, out, _ = run(capsys, "compare", "--slice", "ce", "--eta", "0.75", "--ns", "200", "--target", "5", "--format", "json")
    assert code == EXIT_OK
    rec = json.loads(out)["records"][0]
    assert rec["consumption_db_decrease"] == pytest.approx(2.596, abs=1e-3)


def test_json_roundtrip_is_bitwise(tmp_path, capsys):
    path = tmp_path / "f.json"
    code, _, _ = run(capsys, "frontier", "--eta", "0.75", "--ns", "200", "--grid", "64", "--format", "json", "-o", str(path))
    assert code == EXIT_OK
    text = path.read_text()
    front = frontier_from_json(text)
    ref = cq_frontier(0.75, 200, grid=64)
    np.testing.assert_array_equal(front.rates, ref.rates)
    np.testing.assert_array_equal(front.param, ref.param)
    assert [fmt(x) for x in front.rates.ravel()] == [fmt(x) for x in ref.rates.ravel()]
    # re-emitting what was read gives the identical document
    assert frontier_to_json(front) == text


def test_csv_roundtrip(tmp_path):
    ref = cq_frontier(0.6, 10, grid=32)
    back = frontier_from_csv(frontier_to_csv(ref))
    np.testing.assert_array_equal(back.rates, ref.rates)
    np.testing.assert_array_equal(back.bounds, ref.bounds)
    assert back.region == ref.region and back.labels == ref.labels


def test_fd_eval(tmp_path, capsys):
    path = tmp_path / "inst.json"
    ch = FDChannel([np.eye(2)])
    dump_instance(ch, FDEnsemble([1.0], [np.eye(2) / 2]), path)
    code, out, _ = run(capsys, "fd-eval", "--input", str(path))
    assert code == EXIT_OK
    rec = _csv_rows(out)[0]
    assert [float(rec[k]) for k in ("bits", "qubits", "ebits")] == pytest.approx([0, 1, 0], abs=1e-10)
    assert [float(rec[k]) for k in ("bound1", "bound2", "bound3")] == pytest.approx([2, 1, 1], abs=1e-10)


def test_fd_eval_missing_file(capsys):
    code, _, _ = run(capsys, "fd-eval", "--input", "/nonexistent/instance.json")
    assert code == EXIT_USAGE


def test_minkowski_files(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.json"
    run(capsys, "frontier", "--eta", "0.75", "--ns", "10", "--grid", "16", "-o", str(a))
    run(capsys, "frontier", "--eta", "0.9", "--ns", "10", "--grid", "16", "--format", "json", "-o", str(b))
    code, out, _ = run(capsys, "minkowski", str(a), str(b))
    assert code == EXIT_OK
    summed = frontier_from_csv(out)
    ca, cb = cq_frontier(0.75, 10, grid=16), cq_frontier(0.9, 10, grid=16)
    assert summed.first.max() == pytest.approx(ca.first.max() + cb.first.max(), abs=1e-12)
    assert summed.second.max() == pytest.approx(ca.second.max() + cb.second.max(), abs=1e-12)


def test_minkowski_incompatible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "frontier", "--eta", "0.75", "--ns", "10", "--grid", "8", "-o", str(a))
    run(capsys, "frontier", "--slice", "rp", "--eta", "0.75", "--ns", "10", "--grid", "8", "-o", str(b))
    code, _, _ = run(capsys, "minkowski", str(a), str(b))
    assert code == EXIT_USAGE


def test_rule_of_thumb(capsys):
    code, out, _ = run(capsys, "rule-of-thumb", "--eta", "0.75", "--ns", "200", "--epsilon", "0.1")
    assert code == EXIT_OK
    assert float(_csv_rows(out)[0]["lambda_star"]) == pytest.approx(0.3847186775703902, rel=1e-12)


def test_output_is_deterministic(capsys):
    outs = [run(capsys, "frontier", "--slice", "ce", "--eta", "0.75", "--ns", "200", "--grid", "32")[1] for _ in range(2)]
    assert outs[0] == outs[1]
