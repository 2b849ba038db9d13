from functools import partial

import click

from app.search import repository as search_repo
from app.search import service as search
from app.search.schemas import GridSpec

from .dependencies import (
    build_config,
    data_options,
    manifest_for,
    out_option,
    parse_float_list,
    policy_options,
    resolve_data,
    translate_errors,
)
from .manifest import emit


@click.command("grid")
@data_options
@policy_options
@click.option("--gains", default=None, help="Comma list of g values (default: 0, e^0, e^0.5, ..., e^5).")
@click.option("--thetas", default=None, help="Comma list of theta values (default: 0, 0.1, ..., 0.9).")
@click.option("--n-jobs", type=int, default=None, help="Parallel cells (default: VOLTARGET_N_JOBS).")
@out_option
@translate_errors
def cmd_grid(**params):
    """Sweep (g, theta) and write the three metric surfaces."""
    risky, riskfree = resolve_data(params)
    overrides = {}
    gains = parse_float_list(params["gains"], name="--gains")
    thetas = parse_float_list(params["thetas"], name="--thetas")
    if gains is not None:
        overrides["gains"] = gains
    if thetas is not None:
        overrides["thetas"] = thetas
    spec = GridSpec(base=build_config(params, mode="control"), **overrides)
    result = search.run_grid(risky, riskfree, spec, n_jobs=params["n_jobs"])
    mono = search.monotonicity(result)
    emit(
        params["out"],
        {
            "grid_long.csv": partial(search_repo.write_grid_long_csv, result),
            "grid_matrix.json": partial(search_repo.write_grid_matrix_json, result),
            "monotonicity.csv": partial(search_repo.write_monotonicity_csv, mono),
        },
        manifest_for("grid", params),
    )
    click.echo(f"grid: {len(result.cells)} cells")
