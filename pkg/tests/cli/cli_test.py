import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from bmmpy import ProblemInstance, VariableLibrary, load_instance
from bmmpy.cli.cli import entry_point
from bmmpy.core.bench import read_pgm, read_records, write_pgm


def invoke(runner, args, **kwargs):
    return runner.invoke(entry_point, [str(arg) for arg in args], **kwargs)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def reset_variables():
    yield
    VariableLibrary().generate(regenerate=True)


@pytest.fixture
def instance_path(runner, tmp_path):
    path = tmp_path / "instance.toml"
    result = invoke(
        runner,
        ["gen", "--m", "32", "--n", "64", "--k", "4", "--seed", "3", "--out", path],
    )
    assert result.exit_code == 0, result.output
    return path


def test_version(runner):
    result = invoke(runner, ["--version"])

    assert result.exit_code == 0
    assert "bmmpy" in result.output


def test_unknown_command(runner):
    assert invoke(runner, ["recover"]).exit_code == 1


def test_gen(runner, instance_path):
    instance = load_instance(instance_path)

    assert instance == ProblemInstance.generate(m=32, n=64, k=4, seed=3)
    assert instance.noiseless


def test_gen_is_deterministic(runner, instance_path, tmp_path):
    other = tmp_path / "other.toml"
    result = invoke(
        runner,
        ["gen", "--m", "32", "--n", "64", "--k", "4", "--seed", "3", "--out", other],
    )

    assert result.exit_code == 0
    assert other.read_bytes() == instance_path.read_bytes()


def test_gen_noisy_with_seed_environment(runner, tmp_path):
    path = tmp_path / "noisy.toml"
    result = invoke(
        runner,
        ["gen", "--m", "24", "--k", "3", "--snr", "30", "--out", path],
        env={"BMMP_SEED": "7"},
    )

    assert result.exit_code == 0, result.output
    instance = load_instance(path)
    assert instance.seed == 7
    assert instance.n == 48
    assert instance.snr_db == 30.0
    assert instance.prior.a == pytest.approx(0.1)


@pytest.mark.parametrize(
    "args",
    [
        ["--k", "300", "--n", "256"],
        ["--m", "16", "--k", "16"],
        ["--m", "0", "--k", "1"],
        ["--k", "4", "--snr", "20", "--noiseless"],
        ["--k", "4", "--prior", "1,0"],
        ["--k", "-1"],
        ["--m", "16", "--n", "8", "--k", "2"],
        ["--m", "16", "--n", "16", "--k", "2"],
        ["--k", "0", "--snr", "20"],
    ],
)
def test_gen_usage_errors(runner, tmp_path, args):
    result = invoke(runner, ["gen", *args, "--out", tmp_path / "x.toml"])

    assert result.exit_code == 1
    assert not (tmp_path / "x.toml").exists()


def test_gen_refuses_to_overwrite(runner, instance_path):
    args = ["gen", "--m", "32", "--k", "2", "--out", instance_path]

    assert invoke(runner, args).exit_code == 1
    assert invoke(runner, [*args, "--overwrite"]).exit_code == 0
    assert load_instance(instance_path).k == 2


def test_solve(runner, instance_path, tmp_path):
    out = tmp_path / "result.json"
    result = invoke(
        runner, ["solve", "--in", instance_path, "--g", "2", "--out", out]
    )

    assert result.exit_code == 0, result.output
    assert "exact_recovery: true" in result.output

    content = json.loads(out.read_text())
    instance = load_instance(instance_path)
    assert content["support"] == instance.support_true.tolist()
    assert content["exact_support_recovery"] is True
    assert content["config"]["g"] == 2
    assert content["solver"] == "bmmp"


@pytest.mark.parametrize("solver", ["omp", "map-gomp", "sp", "bmmp-no-um"])
def test_solve_baselines(runner, instance_path, solver):
    result = invoke(runner, ["solve", "--in", instance_path, "--solver", solver])

    assert result.exit_code == 0, result.output
    assert "exact_recovery:" in result.output


def test_solve_errors(runner, instance_path, tmp_path):
    def solve(*args):
        return invoke(runner, ["solve", *args]).exit_code

    assert solve("--in", instance_path, "--g", "0") == 1
    assert solve("--in", instance_path, "--k", "32") == 1
    assert solve("--in", instance_path, "--solver", "l1") == 1
    assert solve("--in", tmp_path / "missing.toml") == 1

    broken = tmp_path / "broken.toml"
    broken.write_text("schema_version = 1\n")
    assert solve("--in", broken) == 2

    assert solve("--in", instance_path, "--solver", "cosamp", "--k", "12") == 2


def test_bench_and_plot_data(runner, tmp_path):
    args = [
        "bench",
        "--preset",
        "fig2d",
        "--scale",
        "0.125",
        "--trials",
        "2",
        "--seed",
        "1",
        "--output-dir",
        tmp_path,
    ]

    result = invoke(runner, args)
    assert result.exit_code == 0, result.output

    records_path = tmp_path / "fig2d_records.csv"
    records = read_records(records_path)
    assert {record.solver for record in records} == {
        "bmmp",
        "bmmp-no-u",
        "bmmp-no-um",
        "bmmp-no-ume",
    }
    assert len(records) == 4 * 2 * len({record.k for record in records})

    plot_lines = (tmp_path / "fig2d_plot.dat").read_text().splitlines()
    assert plot_lines[0] == "# k bmmp bmmp-no-u bmmp-no-um bmmp-no-ume"

    assert invoke(runner, args).exit_code == 1

    first = records_path.read_bytes()
    assert invoke(runner, [*args, "--overwrite"]).exit_code == 0
    assert records_path.read_bytes() == first

    out = tmp_path / "bmmp.dat"
    result = invoke(
        runner,
        [
            "plot-data",
            "--summary",
            tmp_path / "fig2d_summary.csv",
            "--x",
            "k",
            "--metric",
            "mse",
            "--solvers",
            "bmmp",
            "--out",
            out,
        ],
    )
    assert result.exit_code == 0, result.output
    assert out.read_text().splitlines()[0] == "# k bmmp"


def test_bench_usage_errors(runner, tmp_path):
    def bench(*args):
        return invoke(
            runner, ["bench", *args, "--output-dir", tmp_path]
        ).exit_code

    assert bench("--preset", "fig9") == 1
    assert bench("--preset", "fig3", "--solvers", "bmmp,nope") == 1
    assert bench("--preset", "fig3", "--solvers", "omp,omp") == 1
    assert bench("--preset", "fig3", "--trials", "0") == 1


def test_plot_data_errors(runner, tmp_path):
    summary = tmp_path / "summary.csv"
    summary.write_text("solver\nbmmp\n")

    result = invoke(
        runner,
        ["plot-data", "--summary", summary, "--x", "k", "--out", tmp_path / "p.dat"],
    )
    assert result.exit_code == 2

    result = invoke(
        runner,
        ["plot-data", "--summary", summary, "--x", "seed", "--out", tmp_path / "p.dat"],
    )
    assert result.exit_code == 1


def _write_image(path, pixels):
    write_pgm(path, np.asarray(pixels, dtype=np.uint8))
    return path


def test_image(runner, tmp_path):
    pixels = np.zeros((8, 8), dtype=np.uint8)
    pixels[1, 2], pixels[4, 4], pixels[6, 5] = 210, 60, 255
    image = _write_image(tmp_path / "sparse.pgm", pixels)
    output_dir = tmp_path / "out"

    result = invoke(
        runner,
        [
            "image",
            "--in",
            image,
            "--m",
            "20",
            "--noiseless",
            "--solvers",
            "bmmp,omp",
            "--output-dir",
            output_dir,
        ],
    )

    assert result.exit_code == 0, result.output
    np.testing.assert_array_equal(read_pgm(output_dir / "sparse_bmmp.pgm"), pixels)
    assert (output_dir / "sparse_omp.pgm").exists()

    metrics = pd.read_csv(output_dir / "sparse_metrics.csv")
    assert metrics["solver"].tolist() == ["bmmp", "omp"]
    assert metrics["k"].tolist() == [3, 3]
    assert bool(metrics["exact_support_recovery"][0])


def test_image_errors(runner, tmp_path):
    dense = _write_image(tmp_path / "dense.pgm", np.full((4, 4), 9))
    result = invoke(
        runner, ["image", "--in", dense, "--m", "8", "--output-dir", tmp_path]
    )
    assert result.exit_code == 2
    assert "ERROR" in result.output

    broken = tmp_path / "broken.pgm"
    broken.write_bytes(b"P2\n2 2\n255\n0 0 0 0\n")
    result = invoke(
        runner, ["image", "--in", broken, "--m", "2", "--output-dir", tmp_path]
    )
    assert result.exit_code == 2


def test_config_get_and_list(runner):
    result = invoke(runner, ["config", "get", "solver.g"])
    assert result.exit_code == 0
    assert "4" in result.output

    assert invoke(runner, ["config", "get", "solver"]).exit_code == 0
    assert invoke(runner, ["config", "get", "solver.nope"]).exit_code == 2
    assert invoke(runner, ["config", "list"]).exit_code == 0
    assert invoke(runner, ["config", "list", "sbl.tol"]).exit_code == 0


def test_config_set_and_reset(runner, reset_variables):
    result = invoke(runner, ["config", "set", "solver.g", "6"])
    assert result.exit_code == 0, result.output
    assert VariableLibrary.get_variable("solver.g") == 6

    assert invoke(runner, ["config", "set", "solver.g", "six"]).exit_code == 1
    assert invoke(runner, ["config", "set", "solver", "1"]).exit_code == 1
    assert invoke(runner, ["config", "set", "x.y", "1"]).exit_code == 2

    assert invoke(runner, ["config", "reset"]).exit_code == 1
    assert VariableLibrary.get_variable("solver.g") == 6

    assert invoke(runner, ["config", "reset", "--force"]).exit_code == 0
    assert VariableLibrary.get_variable("solver.g") == 4


def test_configured_candidates_reach_solve(runner, instance_path, reset_variables):
    invoke(runner, ["config", "set", "solver.g", "1"])
    invoke(runner, ["config", "set", "solver.early_exit", "false"])

    out = instance_path.with_suffix(".json")
    result = invoke(runner, ["solve", "--in", instance_path, "--out", out])

    assert result.exit_code == 0, result.output
    config = json.loads(out.read_text())["config"]
    assert config["g"] == 1
    assert config["early_exit"] is False
