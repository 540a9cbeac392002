"""Black-box tests for the command-line harness.

The binary path comes from the D2DCOMP_CLI environment variable (set by the
ctest harness); tests are skipped when it is absent.
"""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("D2DCOMP_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="D2DCOMP_CLI not set")

TINY_CONFIG = {
    "network": {
        "lambda_p_per_km2": 10,
        "sigma_m": 20,
        "n_bar": 6,
        "p": 0.5,
        "alpha": 4,
        "theta_db": 0,
    },
    "c_m": 0.5,
    "delivery": ["comp"],
    "evaluators": ["one_provider", "bound"],
    "sweep": {"variable": "c_m", "values": [0.3, 0.6]},
    "trials": 300,
    "seed": 11,
}


def run_cli(*args, cwd=None):
    return subprocess.run(
        [CLI, *args], capture_output=True, text=True, timeout=300, cwd=cwd
    )


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def read_csv_lines(path):
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("# config_sha=")
    assert lines[1].startswith("evaluator,delivery,caching,sweep_variable,")
    return lines


def strip_wall_time(lines):
    header = lines[1].split(",")
    column = header.index("wall_time_ms")
    stripped = [lines[0], lines[1]]
    for line in lines[2:]:
        cells = line.split(",")
        cells[column] = ""
        stripped.append(",".join(cells))
    return stripped


def test_run_writes_csv(tmp_path):
    config = write_config(tmp_path, TINY_CONFIG)
    out = tmp_path / "results.csv"
    proc = run_cli("run", str(config), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert "2 rows" not in proc.stdout  # 2 sweep values x 2 evaluators = 4 rows
    assert "4 rows" in proc.stdout
    lines = read_csv_lines(out)
    assert len(lines) == 2 + 4
    assert "seed=11" in lines[0]


def test_run_is_reproducible_modulo_wall_time(tmp_path):
    config = write_config(tmp_path, TINY_CONFIG)
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert run_cli("run", str(config), "--out", str(out_a)).returncode == 0
    assert run_cli("run", str(config), "--out", str(out_b)).returncode == 0
    assert strip_wall_time(read_csv_lines(out_a)) == strip_wall_time(read_csv_lines(out_b))


def test_seed_and_trials_overrides(tmp_path):
    config = write_config(tmp_path, TINY_CONFIG)
    out = tmp_path / "c.csv"
    proc = run_cli("run", str(config), "--out", str(out), "--seed", "99", "--trials", "150")
    assert proc.returncode == 0, proc.stderr
    lines = read_csv_lines(out)
    assert "seed=99" in lines[0]
    header = lines[1].split(",")
    trials_col = header.index("trials")
    evaluator_col = header.index("evaluator")
    for line in lines[2:]:
        cells = line.split(",")
        if cells[evaluator_col] == "bound":
            assert cells[trials_col] == ""  # deterministic evaluator


def test_invalid_config_exits_2_with_field_path(tmp_path):
    bad = dict(TINY_CONFIG)
    bad["network"] = dict(TINY_CONFIG["network"], alpha=2)
    config = write_config(tmp_path, bad)
    proc = run_cli("run", str(config))
    assert proc.returncode == 2
    assert "network.alpha" in proc.stderr


def test_malformed_json_exits_2(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json")
    proc = run_cli("run", str(path))
    assert proc.returncode == 2
    assert "config" in proc.stderr


def test_missing_file_exits_2(tmp_path):
    proc = run_cli("run", str(tmp_path / "absent.json"))
    assert proc.returncode == 2


def test_validate_ok_and_violations(tmp_path):
    good = write_config(tmp_path, TINY_CONFIG)
    proc = run_cli("validate", str(good))
    assert proc.returncode == 0
    assert proc.stdout.strip() == "ok"

    bad = dict(TINY_CONFIG)
    bad["evaluators"] = ["bogus"]
    bad_path = write_config(tmp_path, bad, name="bad.json")
    proc = run_cli("validate", str(bad_path))
    assert proc.returncode == 2
    assert "evaluators" in proc.stderr


def test_list_recipes_shows_catalog():
    proc = run_cli("list-recipes")
    assert proc.returncode == 0
    names = proc.stdout.split()
    for name in ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"):
        assert name in names


def test_recipe_flag_runs_without_config_file(tmp_path):
    out = tmp_path / "recipe.csv"
    proc = run_cli(
        "run", "--recipe", "fig7", "--out", str(out), "--trials", "200", cwd=tmp_path
    )
    assert proc.returncode == 0, proc.stderr
    lines = read_csv_lines(out)
    assert len(lines) > 2


def test_no_subcommand_is_a_usage_error():
    proc = run_cli()
    assert proc.returncode == 2
