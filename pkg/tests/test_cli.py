"""Command-line interface: exit codes, JSON shape, reproducibility."""

import json
import subprocess
import sys

import pytest

from qindlab import acceptance, cli


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_attack_exact_bz_reports_the_closed_form_rate(capsys):
    code, out, _ = run_cli(
        capsys,
        ["attack", "--name", "bz", "--scheme", "prf", "--m", "3",
         "--game", "fqind", "--mode", "exact", "--no-timing"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["command"] == "attack"
    est = doc["results"]["estimate"]
    assert est["win_rate"] == pytest.approx(0.9375, abs=1e-10)
    assert est["method"] == "exact"
    assert doc["results"]["expected_win_rate"] == pytest.approx(0.9375)


def test_attack_game_mismatch_exits_2(capsys):
    code, out, err = run_cli(
        capsys,
        ["attack", "--name", "bz", "--scheme", "prf", "--m", "3", "--game", "qind"],
    )
    assert code == 2
    assert out == ""
    assert "bz requires fqind" in err


def test_attack_sampled_needs_a_seed(capsys, monkeypatch):
    monkeypatch.delenv("QINDLAB_SEED", raising=False)
    argv = ["attack", "--name", "qlp", "--scheme", "prf", "--m", "2", "--tau", "2",
            "--game", "qind", "--trials", "50"]
    code, _, err = run_cli(capsys, argv)
    assert code == 2
    assert "seed" in err
    monkeypatch.setenv("QINDLAB_SEED", "7")
    code, out, _ = run_cli(capsys, argv)
    assert code == 0
    assert json.loads(out)["config"]["seed"] == 7


def test_attack_sampled_qlp_wins_every_trial(capsys):
    code, out, _ = run_cli(
        capsys,
        ["attack", "--name", "qlp", "--scheme", "prf", "--m", "2", "--tau", "2",
         "--game", "qind", "--trials", "100", "--seed", "7", "--no-timing"],
    )
    assert code == 0
    est = json.loads(out)["results"]["estimate"]
    assert est["wins"] == 100
    assert est["method"] == "hoeffding"


def test_lemma_exact_output_is_byte_identical_across_runs(capsys):
    argv = ["lemma", "--m", "1", "--tau", "1", "--mode", "exact", "--no-timing"]
    code_a, out_a, _ = run_cli(capsys, argv)
    code_b, out_b, _ = run_cli(capsys, argv)
    assert code_a == code_b == 0
    assert out_a == out_b
    results = json.loads(out_a)["results"]
    assert results["vacuous"] is True
    assert results["satisfied"] is True
    assert results["chi_c_trace_norm"] == pytest.approx(0.5, abs=1e-10)


def test_lemma_sampled_run_passes(capsys):
    code, out, _ = run_cli(
        capsys,
        ["lemma", "--m", "1", "--tau", "3", "--samples", "50", "--n-perm", "500",
         "--seed", "11", "--no-timing"],
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert results["bound"] == 0.5
    assert results["satisfied"] is True
    assert results["bound_kind"] == "taken-free"


def test_lemma_taken_outputs_flow_through(capsys):
    code, out, _ = run_cli(
        capsys,
        ["lemma", "--m", "1", "--tau", "3", "--taken", "3,6", "--samples", "20",
         "--n-perm", "300", "--seed", "2", "--no-timing"],
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert results["taken_count"] == 2
    assert results["bound_kind"] == "taken-excluded"


def test_lemma_exit_1_when_not_satisfied(capsys, monkeypatch):
    import dataclasses

    real = cli.channels.certify_lemma_bound

    def fake(*args, **kwargs):
        return dataclasses.replace(real(1, 1, samples=1), satisfied=False)

    monkeypatch.setattr(cli.channels, "certify_lemma_bound", fake)
    code, out, _ = run_cli(
        capsys, ["lemma", "--m", "1", "--tau", "1", "--mode", "exact", "--no-timing"]
    )
    assert code == 1
    assert json.loads(out)["results"]["satisfied"] is False


def test_secure_prp_within_bound(capsys):
    code, out, _ = run_cli(
        capsys,
        ["secure", "--scheme", "prp", "--m", "2", "--tau", "4", "--family", "ideal",
         "--game", "qind", "--trials", "400", "--seed", "3", "--no-timing"],
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert results["within_bound"] is True
    assert results["effective_bound"] == pytest.approx(0.25)
    assert results["taken_count"] == 0


def test_secure_learning_queries_grow_the_taken_count(capsys):
    code, out, _ = run_cli(
        capsys,
        ["secure", "--scheme", "prp", "--m", "2", "--tau", "4", "--q", "2",
         "--trials", "100", "--seed", "5", "--no-timing"],
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert results["taken_count"] == 2 * 1 * 4
    assert results["corollary_bound"] == pytest.approx(4 / (16 - 8 / 4))


def test_secure_block_scheme_with_entangled_probe(capsys):
    code, out, _ = run_cli(
        capsys,
        ["secure", "--scheme", "block", "--m", "2", "--tau", "4", "--mu", "2",
         "--game", "gqind", "--adversary", "entangled-blocks", "--trials", "60",
         "--seed", "8", "--no-timing"],
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert results["mu"] == 2
    assert results["effective_bound"] == pytest.approx(2 * 0.25)


def test_secure_adversary_game_mismatch_exits_2(capsys):
    code, _, err = run_cli(
        capsys,
        ["secure", "--scheme", "prp", "--m", "2", "--tau", "4",
         "--adversary", "entangled-blocks", "--game", "qind",
         "--trials", "10", "--seed", "1"],
    )
    assert code == 2
    assert "requires" in err


def test_equiv_reports_per_key_agreement(capsys):
    code, out, _ = run_cli(
        capsys,
        ["equiv", "--scheme", "prf", "--m", "2", "--tau", "2", "--keys", "8",
         "--seed", "5", "--no-timing"],
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert len(results["per_key"]) == 8
    assert results["max_entrywise_deviation"] <= 1e-12
    assert results["passed"] is True


def test_equiv_rejects_oversized_parameters(capsys):
    code, _, err = run_cli(
        capsys, ["equiv", "--scheme", "prf", "--m", "4", "--tau", "2", "--seed", "1"]
    )
    assert code == 2
    assert "m, tau <= 3" in err


def test_suite_wiring_and_exit_codes(capsys, monkeypatch):
    def passing(jobs=1):
        return [
            acceptance.CriterionResult(1, "one", True, 0.01, {}),
            acceptance.CriterionResult(2, "two", True, 0.02, {}),
        ]

    monkeypatch.setattr(cli.acceptance, "run_all", passing)
    code, out, _ = run_cli(capsys, ["suite", "--no-timing"])
    assert code == 0
    results = json.loads(out)["results"]
    assert results["all_passed"] is True
    assert len(results["criteria"]) == 2

    def failing(jobs=1):
        return [acceptance.CriterionResult(1, "one", False, 0.01, {"error": "x"})]

    monkeypatch.setattr(cli.acceptance, "run_all", failing)
    code, out, _ = run_cli(capsys, ["suite", "--no-timing"])
    assert code == 1
    assert json.loads(out)["results"]["all_passed"] is False


def test_out_writes_the_document_to_a_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        ["attack", "--name", "bz", "--scheme", "prf", "--m", "2", "--game", "fqind",
         "--mode", "exact", "--no-timing", "--out", str(target)],
    )
    assert code == 0
    assert out == ""
    doc = json.loads(target.read_text())
    assert doc["results"]["estimate"]["win_rate"] == pytest.approx(0.875, abs=1e-10)


def test_csv_flattens_config_and_results(capsys, tmp_path):
    import csv as csv_mod

    target = tmp_path / "row.csv"
    code, _, _ = run_cli(
        capsys,
        ["attack", "--name", "bz", "--scheme", "prf", "--m", "1", "--game", "fqind",
         "--mode", "exact", "--no-timing", "--csv", str(target)],
    )
    assert code == 0
    with open(target, newline="") as fh:
        rows = list(csv_mod.DictReader(fh))
    assert len(rows) == 1
    assert float(rows[0]["results.estimate.win_rate"]) == pytest.approx(0.75, abs=1e-10)
    assert rows[0]["config.m"] == "1"


def test_config_file_layers_under_flags(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 50, "seed": 7}))
    argv = ["attack", "--name", "qlp", "--scheme", "prf", "--m", "1", "--tau", "1",
            "--game", "qind", "--config", str(cfg), "--no-timing"]
    code, out, _ = run_cli(capsys, argv)
    assert code == 0
    assert json.loads(out)["config"]["trials"] == 50
    code, out, _ = run_cli(capsys, argv + ["--trials", "25"])
    assert code == 0
    assert json.loads(out)["config"]["trials"] == 25


def test_timing_key_is_present_unless_suppressed(capsys):
    argv = ["attack", "--name", "bz", "--scheme", "prf", "--m", "1", "--game", "fqind",
            "--mode", "exact"]
    code, out, _ = run_cli(capsys, argv)
    assert code == 0
    assert "timing" in json.loads(out)
    code, out, _ = run_cli(capsys, argv + ["--no-timing"])
    assert "timing" not in json.loads(out)


def test_bad_flag_values_exit_2_via_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["attack", "--name", "unknown", "--game", "qind"])
    assert exc.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as exc:
        cli.main(["attack", "--name", "bz", "--game", "fqind", "--trials", "0"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_no_subcommand_prints_usage_and_exits_2(capsys):
    code = cli.main([])
    captured = capsys.readouterr()
    assert code == 2
    assert "usage" in captured.err.lower()


def test_wire_budget_is_checked_before_running(capsys):
    code, _, err = run_cli(
        capsys,
        ["attack", "--name", "bz", "--scheme", "prf", "--m", "5", "--tau", "5",
         "--game", "fqind", "--mode", "exact"],
    )
    assert code == 2
    assert "wires" in err


def test_console_script_round_trips():
    proc = subprocess.run(
        ["qindlab", "attack", "--name", "bz", "--scheme", "prf", "--m", "1",
         "--game", "fqind", "--mode", "exact", "--no-timing"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["results"]["estimate"]["win_rate"] == pytest.approx(0.75, abs=1e-10)


def test_module_entry_point_matches_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "qindlab.cli", "lemma", "--m", "1", "--tau", "1",
         "--mode", "exact", "--no-timing"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["results"]["satisfied"] is True
