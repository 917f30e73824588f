import json
import subprocess


def run_cli(cli_command, *args, expect_code=0):
    result = subprocess.run([*cli_command, *args], capture_output=True, text=True)
    assert result.returncode == expect_code, result.stderr or result.stdout
    return result


def test_gen_verify_count_round_trip(cli_command, tmp_path):
    path = tmp_path / "k6.json"
    out = run_cli(cli_command, "gen-convex", "6", "--out", str(path))
    assert json.loads(out.stdout) == {"out": str(path), "n": 6, "e": 15}

    verify = json.loads(run_cli(cli_command, "verify", str(path)).stdout)
    assert verify["is_valid"] is True

    count = json.loads(run_cli(cli_command, "count", str(path)).stdout)
    assert count["triple_count"] == 1
    assert count["crossing_pair_count"] == 15


def test_count_bundled_fixture(cli_command, fixtures_dir):
    count = json.loads(
        run_cli(cli_command, "count", str(fixtures_dir / "convex_k6.json")).stdout)
    assert count["triple_count"] == 1


def test_invalid_drawing_exits_one(cli_command, fixtures_dir):
    result = run_cli(cli_command, "verify",
                     str(fixtures_dir / "double_crossing.json"), expect_code=1)
    doc = json.loads(result.stdout)
    assert doc["is_valid"] is False
    assert doc["violations"][0]["kind"] == "multiple_meetings"

    result = run_cli(cli_command, "count",
                     str(fixtures_dir / "double_crossing.json"), expect_code=1)
    assert json.loads(result.stdout)["triple_count"] is None


def test_malformed_file_exits_two(cli_command, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": 1, "vertices": [{"id": "a", "x": "1/0", "y": "0"}], "edges": []}')
    result = run_cli(cli_command, "verify", str(bad), expect_code=2)
    assert json.loads(result.stderr)["error"]["kind"] == "zero-denominator"


def test_missing_file_exits_two(cli_command, tmp_path):
    run_cli(cli_command, "count", str(tmp_path / "nope.json"), expect_code=2)


def test_usage_error_exits_two(cli_command):
    result = subprocess.run([*cli_command, "frobnicate"], capture_output=True, text=True)
    assert result.returncode == 2


def test_bounds_complete_eleven(cli_command):
    doc = json.loads(run_cli(cli_command, "bounds", "--complete", "11").stdout)
    assert doc["eq1"] == "7/2"
    assert doc["best_integer_lower_bound"] == 4


def test_bounds_explicit_n_e(cli_command):
    doc = json.loads(run_cli(cli_command, "bounds", "--n", "18", "--e", "153").stdout)
    assert doc["eq1"] == "56"
    assert doc["best_integer_lower_bound"] > 56
    assert doc["eq2_fixed_alpha"]["alpha"] == "65/8"


def test_bounds_requires_arguments(cli_command):
    run_cli(cli_command, "bounds", expect_code=2)


def test_table_range(cli_command):
    doc = json.loads(
        run_cli(cli_command, "table", "--complete-range", "11", "14").stdout)
    rows = doc["complete_graphs"]
    assert [r["n"] for r in rows] == [11, 12, 13, 14]
    assert [r["eq1"] for r in rows] == ["7/2", "8", "27/2", "20"]
    assert [r["best_integer_lower_bound"] for r in rows] == [4, 8, 14, 20]


def test_subsample_cli(cli_command, fixtures_dir):
    doc = json.loads(run_cli(
        cli_command, "subsample", str(fixtures_dir / "convex_k6.json"),
        "--p", "1/2", "--trials", "2000", "--seed", "11").stdout)
    assert doc["expected"]["vertices"] == "3"
    assert doc["expected"]["edges"] == "15/4"
    assert doc["expected"]["triples"] == "1/64"
    assert doc["within_3_se"] is True


def test_svg_cli_deterministic(cli_command, fixtures_dir, tmp_path):
    out1 = tmp_path / "a.svg"
    out2 = tmp_path / "b.svg"
    src = str(fixtures_dir / "convex_k6.json")
    doc = json.loads(run_cli(cli_command, "svg", src, "--out", str(out1)).stdout)
    assert doc["triple_count"] == 1
    run_cli(cli_command, "svg", src, "--out", str(out2))
    assert out1.read_bytes() == out2.read_bytes()


def test_svg_cli_rejects_invalid(cli_command, fixtures_dir, tmp_path):
    run_cli(cli_command, "svg", str(fixtures_dir / "collinear_overlap.json"),
            "--out", str(tmp_path / "x.svg"), expect_code=1)


def test_search_cli_with_config_and_out(cli_command, tmp_path, fixtures_dir):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "seed": 42, "max_iterations": 3000,
        "initial_temperature": "3",
        "cooling_factor": "999/1000",
        "max_bends_per_edge": 2,
    }))
    out = tmp_path / "best.json"
    doc = json.loads(run_cli(
        cli_command, "search", str(fixtures_dir / "convex_k6.json"),
        "--config", str(cfg), "--out", str(out)).stdout)
    assert doc["iterations"] == 3000
    assert doc["best"]["triples"] <= 1
    assert out.exists()

    verify = json.loads(run_cli(cli_command, "verify", str(out)).stdout)
    assert verify["is_valid"] is True


def test_search_cli_checkpoint_and_resume(cli_command, tmp_path, fixtures_dir):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "seed": 9, "max_iterations": 800,
        "cooling_factor": "999/1000",
    }))
    prefix = tmp_path / "ck"
    run_cli(cli_command, "search", str(fixtures_dir / "convex_k6.json"),
            "--config", str(cfg), "--checkpoint", str(prefix),
            "--checkpoint-every", "400")
    state = prefix.parent / "ck.state.json"
    best = prefix.parent / "ck.best.json"
    assert state.exists() and best.exists()
    assert json.loads(
        run_cli(cli_command, "verify", str(best)).stdout)["is_valid"] is True

    # rewind: a 400-iteration checkpoint resumed up to 800
    cfg.write_text(json.dumps({
        "seed": 9, "max_iterations": 400, "cooling_factor": "999/1000"}))
    run_cli(cli_command, "search", str(fixtures_dir / "convex_k6.json"),
            "--config", str(cfg), "--checkpoint", str(prefix),
            "--checkpoint-every", "400")
    cfg.write_text(json.dumps({
        "seed": 9, "max_iterations": 800, "cooling_factor": "999/1000"}))
    doc = json.loads(run_cli(
        cli_command, "search", str(fixtures_dir / "convex_k6.json"),
        "--config", str(cfg), "--resume", str(state)).stdout)
    assert doc["iterations"] == 400  # the resumed half
    assert doc["best"]["triples"] <= 1
