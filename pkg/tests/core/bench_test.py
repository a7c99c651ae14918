import json
from dataclasses import replace

import numpy as np
import pytest

from bmmpy.core.bench import (
    PRESET_NAMES,
    ExperimentConfig,
    ExperimentKind,
    GridPoint,
    MetricsSummary,
    SkippedPoint,
    TrialRecord,
    aggregate,
    emit_plot_data,
    encode_pgm,
    image_demo,
    parse_pgm,
    plot_table,
    preset,
    psnr,
    read_pgm,
    read_records,
    read_summaries,
    run_experiment,
    to_display,
    wilson_half_width,
    write_pgm,
    write_reconstructions,
    write_records,
    write_summaries,
)
from bmmpy.core.bench.records import RECORD_COLUMNS
from bmmpy.core.utils.exceptions import (
    DenseImageError,
    InconsistentGridError,
    InvalidImageError,
    InvalidInputError,
    OutputExistsError,
    UnknownSolverError,
)


def _config(**overrides) -> ExperimentConfig:
    content = dict(
        name="test",
        experiment=ExperimentKind.PHASE_TRANSITION,
        m=(16,),
        n=(32,),
        k_sweep=(2,),
        solvers=("omp",),
        trials=1,
        seed_base=3,
    )
    content.update(overrides)
    return ExperimentConfig(**content)


def _record(solver="bmmp", k=4, seed=0, success=True, error=0.0, snr_db=None):
    return TrialRecord(
        experiment="test",
        solver=solver,
        m=16,
        n=32,
        k=k,
        snr_db=snr_db,
        seed=seed,
        exact_support_recovery=success,
        squared_error=error,
        residual_norm=0.5 * error,
        iterations=3,
    )


def _summary(solver, k, rate, m=16):
    return MetricsSummary(
        experiment="test",
        solver=solver,
        m=m,
        n=2 * m,
        k=k,
        snr_db=None,
        trial_count=10,
        successes=int(10 * rate),
        recovery_rate=rate,
        recovery_rate_ci95=0.1,
        mse=1.0 - rate,
        median_squared_error=0.0,
    )


def test_presets():
    assert PRESET_NAMES == ("fig2a", "fig2c", "fig2d", "fig3")

    detector = preset("fig3")
    assert detector.experiment is ExperimentKind.DETECTOR_COMPARE
    assert detector.m == (32, 64, 96, 128, 160, 192, 224, 256)
    assert [point.k for point in detector.grid()] == [
        int(m // 1.8) for m in detector.m
    ]
    assert [point.n for point in detector.grid()] == [2 * m for m in detector.m]

    ablation = preset("fig2d", trials=5)
    assert ablation.solvers == ("bmmp", "bmmp-no-u", "bmmp-no-um", "bmmp-no-ume")
    assert ablation.trials == 5
    assert ablation.m == (128,)

    noisy = preset("fig2c")
    assert noisy.experiment.metric == "mse"
    assert noisy.experiment.x_axis == "snr_db"
    assert [point.snr_db for point in noisy.grid()] == [20, 25, 30, 35, 40]
    assert noisy.prior.a == pytest.approx(0.1)


def test_scaled_presets():
    config = preset("fig2a", scale=0.25, g=2)

    assert config.m == (32,)
    assert config.n == (64,)
    assert all(0 < point.k < 32 for point in config.grid())
    assert config.solver_options == {"g": 2}

    with pytest.raises(InvalidInputError):
        preset("fig2a", scale=0)
    with pytest.raises(InvalidInputError):
        preset("fig9")


def test_experiment_config_validation():
    with pytest.raises(InvalidInputError):
        _config(trials=0)
    with pytest.raises(InvalidInputError):
        _config(solvers=())
    with pytest.raises(InvalidInputError):
        _config(k_divisor=2.0)
    with pytest.raises(UnknownSolverError):
        _config(solvers=("nope",))


def test_grid_and_trial_seeds():
    config = _config(k_sweep=(2, 4), snr_sweep_db=(None, 30.0))

    grid = config.grid()
    assert grid == [
        GridPoint(16, 32, 2, None),
        GridPoint(16, 32, 2, 30.0),
        GridPoint(16, 32, 4, None),
        GridPoint(16, 32, 4, 30.0),
    ]

    seeds = {config.trial_seed(point, trial) for point in grid for trial in range(5)}
    assert len(seeds) == 20
    assert config.trial_seed(grid[0], 0) == _config().trial_seed(grid[0], 0)
    assert config.trial_seed(grid[0], 0) != _config(seed_base=4).trial_seed(
        grid[0], 0
    )


def test_single_trial_gives_single_record():
    result = run_experiment(_config(), verbosity_level=0)

    assert len(result.records) == 1
    assert result.skipped == []
    assert result.records[0].solver == "omp"


def test_experiment_is_deterministic():
    config = _config(trials=3, solvers=("bmmp", "omp"), snr_sweep_db=(None, 30.0))

    def untimed(records):
        return [replace(record, wall_time=0.0) for record in records]

    first = run_experiment(config, verbosity_level=0)
    second = run_experiment(config, verbosity_level=0)

    assert len(first.records) == 12
    assert untimed(first.records) == untimed(second.records)


def test_experiment_with_worker_processes():
    config = _config(trials=4, solvers=("omp", "sp"))

    serial = run_experiment(config, jobs=1, verbosity_level=0)
    parallel = run_experiment(config, jobs=2, verbosity_level=0)

    assert [replace(r, wall_time=0.0) for r in serial.records] == [
        replace(r, wall_time=0.0) for r in parallel.records
    ]


def test_infeasible_points_are_skipped():
    config = _config(
        k_sweep=(2, 6),
        solvers=("omp", "cosamp"),
        trials=2,
        solver_options={"noiseless_epsilon_factor": 1e-9},
    )

    result = run_experiment(config, verbosity_level=0)

    assert len(result.records) == 6
    assert len(result.skipped) == 1
    assert result.skipped[0].solver == "cosamp"
    assert result.skipped[0].k == 6
    assert "3k <= m" in result.skipped[0].reason
    assert result.skipped_trials == 2


def test_wilson_half_width():
    assert wilson_half_width(7, 10) == pytest.approx(0.2477, abs=1e-4)
    assert wilson_half_width(0, 10) > 0
    assert np.isnan(wilson_half_width(0, 0))


def test_aggregate():
    records = [
        _record(seed=seed, success=seed < 7, error=float(seed)) for seed in range(10)
    ]
    records += [_record(solver="omp", seed=seed) for seed in range(3)]

    summaries = aggregate(records)

    assert [summary.solver for summary in summaries] == ["bmmp", "omp"]
    bmmp = summaries[0]
    assert bmmp.trial_count == 10
    assert bmmp.successes == 7
    assert bmmp.recovery_rate == 0.7
    assert bmmp.recovery_rate_ci95 == pytest.approx(0.2477, abs=1e-4)
    assert bmmp.mse == pytest.approx(4.5)
    assert bmmp.median_squared_error == pytest.approx(4.5)

    shuffled = list(np.random.default_rng(0).permutation(records))
    assert aggregate(shuffled) == summaries
    assert aggregate([]) == []


def test_aggregate_skipped_points():
    skipped = SkippedPoint(
        experiment="test",
        solver="cosamp",
        m=16,
        n=32,
        k=6,
        snr_db=None,
        trials=5,
        reason="too large",
    )

    summaries = aggregate([_record(k=2)], [skipped])

    assert len(summaries) == 2
    empty = next(summary for summary in summaries if summary.solver == "cosamp")
    assert empty.trial_count == 0
    assert np.isnan(empty.recovery_rate)
    assert np.isnan(empty.mse)


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_records_round_trip(tmp_path, fmt):
    records = [
        _record(seed=1, error=0.1),
        _record(seed=2, success=False, error=1 / 3, snr_db=25.0),
    ]
    path = tmp_path / f"records.{fmt}"

    write_records(records, path)

    assert read_records(path) == records


def test_records_with_timing(tmp_path):
    record = replace(_record(), wall_time=0.25)
    path = write_records([record], tmp_path / "timed.csv", timing=True)

    assert path.read_text().splitlines()[0].endswith(",wall_time")
    assert read_records(path)[0].wall_time == 0.25


def test_empty_records_write_header_only(tmp_path):
    path = write_records([], tmp_path / "empty.csv")

    assert path.read_text() == ",".join(RECORD_COLUMNS) + "\n"
    assert read_records(path) == []

    json_path = write_records([], tmp_path / "empty.json")
    assert json.loads(json_path.read_text()) == []


def test_record_output_errors(tmp_path):
    path = write_records([_record()], tmp_path / "records.csv")

    with pytest.raises(OutputExistsError):
        write_records([_record()], path)
    write_records([_record(), _record(seed=1)], path, overwrite=True)
    assert len(read_records(path)) == 2

    with pytest.raises(InvalidInputError):
        write_records([_record()], tmp_path / "records.txt")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_summaries_round_trip(tmp_path, fmt):
    skipped = SkippedPoint("test", "sp", 16, 32, 9, None, 2, "too large")
    summaries = aggregate(
        [_record(seed=s, success=s % 2 == 0) for s in range(4)], [skipped]
    )
    path = tmp_path / f"summary.{fmt}"

    write_summaries(summaries, path)
    loaded = read_summaries(path)

    assert [(s.solver, s.k, s.trial_count) for s in loaded] == [
        (s.solver, s.k, s.trial_count) for s in summaries
    ]
    assert loaded[0].recovery_rate == 0.5
    assert loaded[0].recovery_rate_ci95 == summaries[0].recovery_rate_ci95
    assert np.isnan(loaded[1].recovery_rate)
    assert loaded[1].snr_db is None


def test_plot_table():
    summaries = [
        _summary("bmmp", 4, 1.0),
        _summary("omp", 4, 0.8),
        _summary("bmmp", 8, 0.9),
        _summary("omp", 8, float("nan")),
    ]

    xs, values, solvers = plot_table(summaries, "k", "recovery_rate")

    assert xs.tolist() == [4, 8]
    assert solvers == ["bmmp", "omp"]
    assert values[0].tolist() == [1.0, 0.8]
    assert values[1, 0] == 0.9
    assert np.isnan(values[1, 1])

    _, values, solvers = plot_table(summaries, "k", "mse", solvers=["omp"])
    assert solvers == ["omp"]
    assert values.shape == (2, 1)


def test_plot_table_errors():
    with pytest.raises(InconsistentGridError):
        plot_table(
            [_summary("bmmp", 4, 1.0), _summary("bmmp", 4, 1.0, m=32)],
            "k",
            "recovery_rate",
        )
    with pytest.raises(InconsistentGridError):
        plot_table(
            [_summary("bmmp", 4, 1.0), _summary("omp", 8, 1.0)], "k", "recovery_rate"
        )
    with pytest.raises(InvalidInputError):
        plot_table([], "seed", "recovery_rate")
    with pytest.raises(InvalidInputError):
        plot_table([], "k", "iterations")


def test_emit_plot_data(tmp_path):
    summaries = [
        _summary("bmmp", 4, 1.0),
        _summary("map-omp", 4, 0.5),
        _summary("bmmp", 8, 0.75),
        _summary("map-omp", 8, float("nan")),
    ]

    path = emit_plot_data(summaries, tmp_path / "plot.dat", "k", "recovery_rate")

    lines = path.read_text().splitlines()
    assert lines[0] == "# k bmmp map-omp"
    data = np.loadtxt(path)
    assert data.shape == (2, 3)
    assert data[:, 0].tolist() == [4, 8]
    assert data[0, 1:].tolist() == [1.0, 0.5]
    assert np.isnan(data[1, 2])


def test_pgm_encoding():
    pixels = np.arange(12, dtype=np.uint8).reshape(3, 4)

    data = encode_pgm(pixels)

    assert data.startswith(b"P5\n4 3\n255\n")
    np.testing.assert_array_equal(parse_pgm(data), pixels)

    commented = b"P5 # a comment\n4\t3\n# another\n255\n" + pixels.tobytes()
    np.testing.assert_array_equal(parse_pgm(commented), pixels)


def test_pgm_errors(tmp_path):
    raster = bytes(12)

    with pytest.raises(InvalidImageError):
        parse_pgm(b"P2\n4 3\n255\n" + raster)
    with pytest.raises(InvalidImageError):
        parse_pgm(b"P5\n4 3\n65535\n" + raster)
    with pytest.raises(InvalidImageError):
        parse_pgm(b"P5\n4 3\n255\n" + raster[:5])
    with pytest.raises(InvalidImageError):
        parse_pgm(b"P5\n4 x\n255\n" + raster)
    with pytest.raises(InvalidImageError):
        parse_pgm(b"P5\n4")
    with pytest.raises(InvalidImageError):
        encode_pgm(np.zeros((2, 2), dtype=np.float64))
    with pytest.raises(InvalidImageError):
        encode_pgm(np.zeros(4, dtype=np.uint8))

    path = write_pgm(tmp_path / "image.pgm", np.zeros((2, 2), dtype=np.uint8))
    np.testing.assert_array_equal(read_pgm(path), np.zeros((2, 2)))
    with pytest.raises(OutputExistsError):
        write_pgm(path, np.zeros((2, 2), dtype=np.uint8))


def test_psnr_and_display():
    reference = np.zeros((2, 2))

    assert psnr(reference, reference) == float("inf")
    assert psnr(reference, np.ones((2, 2))) == pytest.approx(20 * np.log10(255))
    assert to_display(np.array([[-3.0, 12.4], [254.6, 300.0]])).tolist() == [
        [0, 12],
        [255, 255],
    ]


def _sparse_image() -> np.ndarray:
    image = np.zeros((8, 8), dtype=np.uint8)
    image[1, 2], image[3, 3], image[4, 6], image[6, 1], image[7, 7] = (
        200,
        120,
        255,
        90,
        170,
    )
    return image


def test_image_demo(tmp_path):
    result = image_demo(
        _sparse_image(),
        m=24,
        snr_db=None,
        solvers=("bmmp", "omp"),
        seed=4,
        verbosity_level=0,
    )

    assert result.k == 5
    assert [r.solver for r in result.reconstructions] == ["bmmp", "omp"]
    bmmp = result.reconstructions[0]
    assert bmmp.exact_support_recovery
    assert bmmp.psnr > 100
    np.testing.assert_array_equal(bmmp.display(), _sparse_image())

    again = image_demo(
        _sparse_image(),
        m=24,
        snr_db=None,
        solvers=("bmmp", "omp"),
        seed=4,
        verbosity_level=0,
    )
    for first, second in zip(result.reconstructions, again.reconstructions):
        np.testing.assert_array_equal(first.pixels, second.pixels)

    paths = write_reconstructions(result, tmp_path, stem="sparse")
    assert [path.name for path in paths] == ["sparse_bmmp.pgm", "sparse_omp.pgm"]
    np.testing.assert_array_equal(read_pgm(paths[0]), _sparse_image())


def test_image_demo_skips_infeasible_solvers():
    result = image_demo(
        _sparse_image(),
        m=12,
        snr_db=30.0,
        solvers=("bmmp", "cosamp"),
        verbosity_level=0,
    )

    assert [r.solver for r in result.reconstructions] == ["bmmp"]
    assert "cosamp" in result.skipped
    assert np.isfinite(result.reconstructions[0].mse)


def test_image_demo_edge_cases():
    with pytest.raises(DenseImageError):
        image_demo(np.full((4, 4), 7, dtype=np.uint8), m=8)
    with pytest.raises(InvalidImageError):
        image_demo(np.zeros(16, dtype=np.uint8), m=8)
    with pytest.raises(InvalidInputError):
        image_demo(_sparse_image(), m=64)

    blank = image_demo(np.zeros((4, 4), dtype=np.uint8), m=8)
    assert blank.k == 0
    assert blank.reconstructions[0].psnr == float("inf")
    assert blank.reconstructions[0].exact_support_recovery
