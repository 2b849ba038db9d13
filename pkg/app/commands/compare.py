from functools import partial

import click

from app.metrics import repository as metrics_repo
from app.metrics import service as metrics

from .dependencies import (
    build_config,
    data_options,
    manifest_for,
    out_option,
    policy_options,
    resolve_data,
    translate_errors,
)
from .manifest import emit


@click.command("compare")
@data_options
@policy_options
@out_option
@translate_errors
def cmd_compare(**params):
    """Underlying vs open-loop vs control on the same data."""
    risky, riskfree = resolve_data(params)
    table = metrics.compare(risky, riskfree, build_config(params, mode="control"))
    emit(
        params["out"],
        {
            "comparison.csv": partial(metrics_repo.write_comparison_csv, table),
            "comparison.json": partial(metrics_repo.write_comparison_json, table),
        },
        manifest_for("compare", params),
    )
    click.echo(table.to_frame().to_string(index=False))
