"""End-to-end tests for the command-line pipeline (in-process via cli.run)."""

import json
import subprocess
import sys

import numpy as np
import pytest

from csiaug import cli
from csiaug.channel import ScenarioSpec, save_scenario
from csiaug.codec import EvalReport
from csiaug.core import Dataset, Domain, Provenance
from csiaug.dataset_io import read_dataset, read_report, write_dataset, write_report


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Scenario file plus the artifacts of one full pipeline run."""
    root = tmp_path_factory.mktemp("pipeline")
    spec = ScenarioSpec(
        subcarriers=16,
        antennas=4,
        paths=2,
        delay_range=(0.0, 5.0),
        angle_range=(-0.5, 0.5),
        gain_decay=0.4,
        seed=77,
    )
    save_scenario(spec, root / "scenario.json")

    def run(*argv):
        code = cli.run([str(a) for a in argv])
        assert code == 0, f"command failed: {argv}"

    run("gen", "--scenario", root / "scenario.json", "--count", 40, "--out", root / "train.csia")
    run("gen", "--scenario", root / "scenario.json", "--count", 10, "--seed", 78,
        "--out", root / "test.csia")
    run("transform", "--in", root / "train.csia", "--na", 8, "--out", root / "train_ang.csia")
    run("transform", "--in", root / "test.csia", "--na", 8, "--out", root / "test_ang.csia")
    run("augment", "--in", root / "train_ang.csia", "--method", "bs-down", "--shift", 1,
        "--seed", 5, "--out", root / "aug.csia")
    run("fit", "--train", root / "train_ang.csia", "--ratio", "1/4", "--out", root / "base.csic")
    run("fit", "--train", root / "aug.csia", "--ratio", "1/4", "--out", root / "aug.csic")
    run("eval", "--codec", root / "base.csic", "--test", root / "test_ang.csia",
        "--label", "baseline", "--out", root / "base.json")
    run("eval", "--codec", root / "aug.csic", "--test", root / "test_ang.csia",
        "--label", "bs-down", "--out", root / "aug.json")
    run("report", "--in", root / "base.json", root / "aug.json", "--format", "md",
        "--out", root / "grid.md")
    run("sweep", "--train", root / "train_ang.csia", "--test", root / "test_ang.csia",
        "--method", "bs-down", "--param", "shift", "--values", "0,1,2", "--ratio", "1/4",
        "--seed", 5, "--out", root / "sweep.json")
    return root


def test_pipeline_artifacts(workspace):
    train = read_dataset(workspace / "train.csia")
    assert train.domain is Domain.SPATIAL_FREQUENCY
    assert len(train) == 40 and train.sample_shape == (16, 4)
    ang = read_dataset(workspace / "train_ang.csia")
    assert ang.domain is Domain.ANGULAR_DELAY
    assert ang.sample_shape == (8, 4)
    aug = read_dataset(workspace / "aug.csia")
    assert len(aug) == 80  # append mode doubles the samples
    assert aug.meta.augmentations[0].method == "bs-down"
    report = read_report(workspace / "base.json")
    assert report.label == "baseline" and report.ratio == "1/4"
    grid = (workspace / "grid.md").read_text()
    assert grid.startswith("| method | 1/4 |")
    assert "| baseline |" in grid and "| bs-down |" in grid


def test_gen_seed_override_changes_data(workspace):
    a = read_dataset(workspace / "train.csia")
    b = read_dataset(workspace / "test.csia")
    assert not np.array_equal(a.samples[:10], b.samples)
    assert b.meta.seed == 78


def test_sweep_summary_schema(workspace):
    summary = json.loads((workspace / "sweep.json").read_text())
    assert summary["method"] == "bs-down"
    assert summary["param"] == "shift"
    assert summary["train_samples"] == 40 and summary["test_samples"] == 10
    assert [r["value"] for r in summary["results"]] == [0, 1, 2]
    best = min(summary["results"], key=lambda r: r["nmse_db"])
    assert summary["best_value"] == best["value"]


def test_reruns_are_byte_identical(workspace, tmp_path):
    code = cli.run(
        ["gen", "--scenario", str(workspace / "scenario.json"), "--count", "40",
         "--out", str(tmp_path / "again.csia")]
    )
    assert code == 0
    assert (tmp_path / "again.csia").read_bytes() == (workspace / "train.csia").read_bytes()
    assert (
        (tmp_path / "again.csia.meta.json").read_bytes()
        == (workspace / "train.csia.meta.json").read_bytes()
    )
    code = cli.run(
        ["sweep", "--train", str(workspace / "train_ang.csia"),
         "--test", str(workspace / "test_ang.csia"), "--method", "bs-down",
         "--param", "shift", "--values", "0,1,2", "--ratio", "1/4", "--seed", "5",
         "--out", str(tmp_path / "sweep.json")]
    )
    assert code == 0
    assert (tmp_path / "sweep.json").read_bytes() == (workspace / "sweep.json").read_bytes()


def report_file(tmp_path, name, label, ratio, db):
    report = EvalReport(
        label=label,
        ratio=ratio,
        nmse_linear=10 ** (db / 10),
        nmse_db=db,
        sample_count=10,
        codec_info={"ratio": ratio},
    )
    path = tmp_path / name
    write_report(report, path)
    return path


def test_report_grid_golden_md(tmp_path, capsys):
    a = report_file(tmp_path, "a.json", "baseline", "1/4", -10.5)
    b = report_file(tmp_path, "b.json", "bs-down", "1/4", -12.25)
    c = report_file(tmp_path, "c.json", "bs-down", "1/16", -5.0)
    assert cli.run(["report", "--in", str(a), str(b), str(c)]) == 0
    out = capsys.readouterr().out
    assert out == (
        "| method | 1/4 | 1/16 |\n"
        "| --- | --- | --- |\n"
        "| baseline | -10.500 | - |\n"
        "| bs-down | -12.250 | -5.000 |\n"
    )
    # listing order must not matter
    assert cli.run(["report", "--in", str(c), str(a), str(b)]) == 0
    assert capsys.readouterr().out == out


def test_report_grid_golden_csv(tmp_path, capsys):
    a = report_file(tmp_path, "a.json", "baseline", "1/4", -10.5)
    c = report_file(tmp_path, "c.json", "bs-down", "1/16", -5.0)
    assert cli.run(["report", "--in", str(a), str(c), "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out == (
        "method,1/4,1/16\n"
        "baseline,-10.500,\n"
        "bs-down,,-5.000\n"
    )


def test_report_conflicting_cells_fail(tmp_path, capsys):
    a = report_file(tmp_path, "a.json", "baseline", "1/4", -10.5)
    b = report_file(tmp_path, "b.json", "baseline", "1/4", -11.5)
    assert cli.run(["report", "--in", str(a), str(b)]) == 1
    assert "conflicting" in capsys.readouterr().err
    # identical duplicates are tolerated
    dup = report_file(tmp_path, "dup.json", "baseline", "1/4", -10.5)
    assert cli.run(["report", "--in", str(a), str(dup)]) == 0


USAGE_CASES = [
    ["transform", "--in", "x.csia", "--out", "y.csia"],  # forward without --na
    ["augment", "--in", "x.csia", "--method", "bs-up", "--out", "y.csia"],  # no --shift
    ["augment", "--in", "x.csia", "--method", "rg", "--out", "y.csia"],  # no --block
]


@pytest.mark.parametrize("argv", USAGE_CASES)
def test_usage_errors_exit_2(workspace, argv, capsys):
    fixed = [a.replace("x.csia", str(workspace / "train_ang.csia")) for a in argv]
    fixed = [a.replace("y.csia", str(workspace / "ignored.csia")) for a in fixed]
    assert cli.run(fixed) == 2
    assert "usage error" in capsys.readouterr().err


def test_transform_inverse_requires_nc(workspace, capsys):
    argv = ["transform", "--in", str(workspace / "train_ang.csia"), "--inverse",
            "--out", str(workspace / "ignored.csia")]
    assert cli.run(argv) == 2
    assert "--nc" in capsys.readouterr().err


def test_sweep_param_method_mismatch(workspace, capsys):
    base = ["sweep", "--train", str(workspace / "train_ang.csia"),
            "--test", str(workspace / "test_ang.csia"), "--ratio", "1/4",
            "--out", str(workspace / "ignored.json")]
    assert cli.run(base + ["--method", "rg", "--param", "shift", "--values", "1"]) == 2
    assert cli.run(base + ["--method", "bs-up", "--param", "block", "--values", "3"]) == 2
    assert cli.run(base + ["--method", "bs-up", "--param", "shift", "--values", "a,b"]) == 2
    assert cli.run(base + ["--method", "bs-up", "--param", "shift", "--values", ","]) == 2
    capsys.readouterr()


def test_bad_ratio_is_usage_error(workspace, capsys):
    argv = ["fit", "--train", str(workspace / "train_ang.csia"), "--ratio", "zero",
            "--out", str(workspace / "ignored.csic")]
    assert cli.run(argv) == 2
    assert "usage error" in capsys.readouterr().err


def test_runtime_errors_exit_1(workspace, tmp_path, capsys):
    missing = ["eval", "--codec", str(tmp_path / "nope.csic"),
               "--test", str(workspace / "test_ang.csia"), "--out", str(tmp_path / "r.json")]
    assert cli.run(missing) == 1
    # fitting on a frequency-domain dataset is a data error, not a usage error
    wrong_domain = ["fit", "--train", str(workspace / "train.csia"), "--ratio", "1/4",
                    "--out", str(tmp_path / "c.csic")]
    assert cli.run(wrong_domain) == 1
    # so is transforming a dataset that is already angular-delay
    retransform = ["transform", "--in", str(workspace / "train_ang.csia"), "--na", "4",
                   "--out", str(tmp_path / "t.csia")]
    assert cli.run(retransform) == 1
    corrupt = tmp_path / "corrupt.csia"
    corrupt.write_bytes(b"JUNKJUNKJUNKJUNKJUNKJUNK")
    assert cli.run(["fit", "--train", str(corrupt), "--ratio", "1/4",
                    "--out", str(tmp_path / "c.csic")]) == 1
    capsys.readouterr()


def test_augment_rejects_frequency_domain(workspace, tmp_path, capsys):
    argv = ["augment", "--in", str(workspace / "train.csia"), "--method", "bs-down",
            "--shift", "1", "--out", str(tmp_path / "a.csia")]
    assert cli.run(argv) == 1
    assert "angular-delay" in capsys.readouterr().err


def test_transform_inverse_round_trip(workspace, tmp_path, capsys):
    # lossless when nothing was truncated: forward with na == nc, then back
    full = ["transform", "--in", str(workspace / "train.csia"), "--na", "16",
            "--out", str(tmp_path / "full_ang.csia")]
    assert cli.run(full) == 0
    back = ["transform", "--in", str(tmp_path / "full_ang.csia"), "--inverse", "--nc", "16",
            "--out", str(tmp_path / "back.csia")]
    assert cli.run(back) == 0
    capsys.readouterr()
    original = read_dataset(workspace / "train.csia")
    restored = read_dataset(tmp_path / "back.csia")
    assert restored.domain is Domain.SPATIAL_FREQUENCY
    # float32 storage bounds the round-trip error, not the transform
    assert np.abs(restored.samples - original.samples).max() < 1e-6


def test_help_and_parse_failures(capsys):
    assert cli.run(["--help"]) == 0
    assert cli.run(["gen", "--help"]) == 0
    assert cli.run([]) == 2  # a command is required
    assert cli.run(["frobnicate"]) == 2
    assert cli.run(["gen", "--scenario", "s.json"]) == 2  # missing required flags
    capsys.readouterr()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "csiaug", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "csiaug" in proc.stdout


def test_eval_summary_line_format(workspace, tmp_path, capsys):
    argv = ["eval", "--codec", str(workspace / "base.csic"),
            "--test", str(workspace / "test_ang.csia"), "--label", "check",
            "--out", str(tmp_path / "check.json")]
    assert cli.run(argv) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("check ratio 1/4: NMSE ")
    assert line.endswith(str(tmp_path / "check.json"))
