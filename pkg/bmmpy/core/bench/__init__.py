from bmmpy.core.bench.experiment import (
    PRESET_NAMES,
    ExperimentConfig,
    ExperimentKind,
    ExperimentResult,
    GridPoint,
    SkippedPoint,
    TrialRecord,
    preset,
    run_experiment,
    run_trial,
)
from bmmpy.core.bench.image import (
    ImageDemoResult,
    ImageReconstruction,
    image_demo,
    psnr,
    to_display,
    write_reconstructions,
)
from bmmpy.core.bench.pgm import encode_pgm, parse_pgm, read_pgm, write_pgm
from bmmpy.core.bench.plotdata import emit_plot_data, plot_table
from bmmpy.core.bench.records import (
    MetricsSummary,
    aggregate,
    read_records,
    read_summaries,
    wilson_half_width,
    write_records,
    write_summaries,
)

__all__ = [
    "PRESET_NAMES",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentResult",
    "GridPoint",
    "ImageDemoResult",
    "ImageReconstruction",
    "MetricsSummary",
    "SkippedPoint",
    "TrialRecord",
    "aggregate",
    "emit_plot_data",
    "encode_pgm",
    "image_demo",
    "parse_pgm",
    "plot_table",
    "preset",
    "psnr",
    "read_pgm",
    "read_records",
    "read_summaries",
    "run_experiment",
    "run_trial",
    "to_display",
    "wilson_half_width",
    "write_pgm",
    "write_reconstructions",
    "write_records",
    "write_summaries",
]
