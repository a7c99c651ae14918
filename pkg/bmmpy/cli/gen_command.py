from pathlib import Path

import rich_click as click

from bmmpy import ProblemInstance, SignalPrior, VariableLibrary, save_instance
from bmmpy.cli.colors import RESET, get_default_palette
from bmmpy.cli.elements import (
    INTERVAL,
    check_outputs,
    debug_option,
    print_error_message,
    print_info,
    print_tree,
    resolve_seed,
    seed_option,
    verbose_option,
)
from bmmpy.core.utils.exceptions import BmmpyError

palette = get_default_palette()


@click.command(
    "gen",
    help=f"Generate a random problem instance {palette.sky}y = Φx + w{RESET} "
    "and write it to an instance file.",
)
@click.option(
    "--m",
    "m",
    type=click.IntRange(min=1),
    default=128,
    show_default=True,
    help="The number of measurements.",
)
@click.option(
    "--n",
    "n",
    type=click.IntRange(min=1),
    default=None,
    help="The signal dimension. Defaults to 2m.",
)
@click.option(
    "--k",
    "k",
    type=click.IntRange(min=0),
    required=True,
    help="The number of nonzero entries of the signal.",
)
@click.option(
    "--snr",
    type=float,
    default=None,
    help="The measurement SNR in dB. Omit it (or pass --noiseless) for noiseless data.",
)
@click.option(
    "--noiseless",
    is_flag=True,
    help="Generate noiseless measurements.",
)
@click.option(
    "--prior",
    type=INTERVAL,
    default=None,
    help="The interval 'a,b' of the uniform nonzero values. Defaults to the "
    "configured 'model.prior' (noiseless) or 'model.noisy_prior' (noisy).",
)
@seed_option
@click.option(
    "--out",
    "out",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="The path of the instance file to write.",
)
@click.option(
    "--overwrite",
    is_flag=True,
    help="Replace an existing output file.",
)
@verbose_option
@debug_option
def gen(
    m: int,
    n: int | None,
    k: int,
    snr: float | None,
    noiseless: bool,
    prior: tuple[float, float] | None,
    seed: int | None,
    out: Path,
    overwrite: bool,
    verbose: int,
    debug: bool,
) -> None:
    verbose += 1

    if noiseless and snr is not None:
        raise click.UsageError("The options '--snr' and '--noiseless' are exclusive!")

    n = 2 * m if n is None else n
    if k >= m:
        raise click.UsageError(f"The sparsity k={k} has to be smaller than m={m}!")
    if n <= m:
        raise click.UsageError(
            f"The signal dimension n={n} has to be larger than m={m}!"
        )
    if k == 0 and snr is not None:
        raise click.UsageError("A noise level requires a signal with k > 0!")
    check_outputs([out], overwrite=overwrite)

    seed = resolve_seed(seed)

    try:
        if prior is None:
            prior = SignalPrior.from_string(
                VariableLibrary.get_variable(
                    "model.prior" if snr is None else "model.noisy_prior"
                )
            )
        else:
            prior = SignalPrior.uniform(*prior)

        print_tree(
            "Resolved configuration",
            {
                "model": {"m": m, "n": n, "k": k, "snr_db": snr, "prior": str(prior)},
                "seed": seed,
                "out": str(out),
            },
        )

        instance = ProblemInstance.generate(
            m=m, n=n, k=k, prior=prior, snr_db=snr, seed=seed
        )
        path = save_instance(instance, out, overwrite=overwrite)
    except (BmmpyError, OSError) as error:
        return print_error_message(error=error, debug=debug)

    print_info(
        f"Wrote the instance with m={instance.m}, n={instance.n}, k={instance.k} to "
        f"{palette.sky}{path}{palette.base}.",
        verbosity_level=verbose,
    )
    print_info(
        f"Support: {instance.support_true.tolist()}",
        verbosity_level=verbose,
        level=2,
    )

    return None
