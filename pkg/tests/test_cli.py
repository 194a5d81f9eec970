import json
import os
import subprocess
import sys

CLI = [sys.executable, "-m", "asplan.cli"]

DESIGN_FLAGS = [
    "design",
    "--family", "ssp",
    "--lambda0", "300",
    "--lambda1", "50",
    "--alpha", "0.05",
    "--beta", "0.05",
    "--a", "1500",
    "--restarts", "6",
]


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    env.pop("ASP_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(CLI + args, capture_output=True, text=True, env=env)


def test_design_runs_and_reports_plan():
    result = run_cli(DESIGN_FLAGS)
    assert result.returncode == 0, result.stderr
    payload = json.loads(result.stdout)
    assert payload["family"] == "ssp"
    assert 0.0 < payload["t1"] <= payload["t2"] <= 300.0
    assert payload["n"] is None
    assert 0.0 <= payload["phi"] <= 1.0
    assert payload["seed"] == 42


def test_design_output_is_deterministic():
    first = run_cli(DESIGN_FLAGS)
    second = run_cli(DESIGN_FLAGS)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout


def test_seed_env_var_and_flag_precedence():
    from_env = run_cli(DESIGN_FLAGS, env_extra={"ASP_SEED": "7"})
    assert json.loads(from_env.stdout)["seed"] == 7
    explicit = run_cli(DESIGN_FLAGS + ["--seed", "11"], env_extra={"ASP_SEED": "7"})
    assert json.loads(explicit.stdout)["seed"] == 11
    bad = run_cli(DESIGN_FLAGS, env_extra={"ASP_SEED": "not-a-number"})
    assert bad.returncode == 1


def test_design_validation_errors_exit_1():
    missing_tau = run_cli(
        [
            "design", "--family", "type1", "--lambda0", "300", "--lambda1", "50",
            "--alpha", "0.05", "--beta", "0.05", "--a", "1500",
        ]
    )
    assert missing_tau.returncode == 1
    assert "tau" in missing_tau.stderr
    bad_a = run_cli(
        [
            "design", "--family", "ssp", "--lambda0", "300", "--lambda1", "50",
            "--alpha", "0.05", "--beta", "0.05", "--a", "200",
        ]
    )
    assert bad_a.returncode == 1


def test_config_file_fills_gaps_but_flags_win(tmp_path):
    config = tmp_path / "plan.cfg"
    config.write_text(
        "# shared study settings\n"
        "lambda1 = 50\n"
        "alpha = 0.10\n"
        "restarts = 6\n"
    )
    result = run_cli(
        [
            "design", "--config", str(config), "--family", "ssp",
            "--lambda0", "300", "--alpha", "0.05", "--beta", "0.05", "--a", "1500",
        ]
    )
    assert result.returncode == 0, result.stderr
    payload = json.loads(result.stdout)
    assert payload["inputs"]["lambda1"] == 50.0
    assert payload["inputs"]["alpha"] == 0.05  # flag beats config

    unknown = tmp_path / "bad.cfg"
    unknown.write_text("mystery = 1\n")
    result = run_cli(
        ["design", "--config", str(unknown)] + DESIGN_FLAGS[1:]
    )
    assert result.returncode == 1
    assert "mystery" in result.stderr


def test_crisp_baseline_matches_reference_cost():
    result = run_cli(["crisp-baseline"] + DESIGN_FLAGS[1:])
    assert result.returncode == 0, result.stderr
    payload = json.loads(result.stdout)
    assert payload["crisp"] is True
    assert payload["margins"]["g"] >= -1e-6
    assert payload["margins"]["h"] >= -1e-6


def test_verify_tables_subset_and_exit_codes(tmp_path):
    result = run_cli(["verify-tables", "--table", "7", "--json", str(tmp_path / "r.json")])
    assert result.returncode == 0, result.stderr
    assert "feasibility: 4/4" in result.stdout
    assert (tmp_path / "r.json").exists()

    empty = run_cli(["verify-tables", "--rows", "0"])
    assert empty.returncode == 0
    assert "no design rows selected" in empty.stdout


def test_dispose_exit_codes(tmp_path):
    accept = run_cli(
        ["dispose", "--data", "case-study", "--family", "ssp",
         "--t1", "41", "--t2", "3159"]
    )
    assert accept.returncode == 0
    assert json.loads(accept.stdout)["decision"] == "accept"

    data = tmp_path / "short.csv"
    data.write_text("5\n")
    reject = run_cli(
        ["dispose", "--data", str(data), "--family", "ssp", "--t1", "41", "--t2", "3159"]
    )
    assert reject.returncode == 3

    band = tmp_path / "band.csv"
    band.write_text("100\n200\n")
    undecided = run_cli(
        ["dispose", "--data", str(band), "--family", "ssp", "--t1", "41", "--t2", "3159"]
    )
    assert undecided.returncode == 4

    missing = run_cli(
        ["dispose", "--data", str(tmp_path / "nope.csv"), "--family", "ssp",
         "--t1", "1", "--t2", "2"]
    )
    assert missing.returncode == 1


def test_dispose_reads_design_json(tmp_path):
    design = tmp_path / "design.json"
    design.write_text(json.dumps({"t1": 41.0, "t2": 3159.0, "n": None, "inputs": {}}))
    result = run_cli(
        ["dispose", "--data", "case-study", "--family", "ssp",
         "--design-json", str(design)]
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["decided_at"] == 4


def test_oracle_single_case_and_determinism():
    args = ["oracle", "--family", "ssp", "--draws", "20000"]
    first = run_cli(args)
    second = run_cli(args)
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    reports = json.loads(first.stdout)
    assert len(reports) == 3
    assert all(r["passed"] for r in reports)
