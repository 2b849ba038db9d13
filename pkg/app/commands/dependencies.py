"""Options and resolvers shared by the subcommands.

Each subcommand receives its options as ``**params`` so the resolved values
can be recorded verbatim in the run manifest and replayed by ``rerun``.
"""
from functools import wraps
from typing import Any, Dict, List, Tuple

import click
from pydantic import ValidationError

from app import config as C
from app.backtest.schemas import BacktestConfig, CostConvention
from app.errors import VolTargetError
from app.policy.schemas import ControllerConfig, TargetSpec
from app.series import service as series
from app.series.schemas import ReturnSeries, ValueKind
from app.units import vol_to_period

from .manifest import RunManifest, digests
from .synth import SynthGrammarError, parse_synth

# resolved click options of one subcommand
Params = Dict[str, Any]
# risky, risk-free on the same timestamps
SeriesPair = Tuple[ReturnSeries, ReturnSeries]

MODES = ("open-loop", "control")


def _stack(*decorators):
    def apply(f):
        for d in reversed(decorators):
            f = d(f)
        return f

    return apply


csv_column_options = _stack(
    click.option("--date-column", default="date", show_default=True, help="Date column of every CSV (YYYY-MM-DD)."),
    click.option("--risky-column", default="close", show_default=True),
    click.option("--risky-kind", type=click.Choice([k.value for k in ValueKind]), default=ValueKind.PRICE.value, show_default=True),
    click.option("--riskfree-column", default="rate", show_default=True),
    click.option("--riskfree-kind", type=click.Choice([k.value for k in ValueKind]), default=ValueKind.ANNUAL_RATE.value, show_default=True),
)

riskfree_options = _stack(
    click.option("--riskfree", type=click.Path(dir_okay=False), default=None, help="Risk-free CSV."),
    click.option("--rate", type=float, default=None, help="Constant risk-free rate, annual percent (default 0)."),
)

data_options = _stack(
    click.option("--risky", type=click.Path(dir_okay=False), default=None, help="Risky asset CSV."),
    click.option("--synth", default=None, help="Inline synthetic risky series, e.g. iid:vol=0.30,len=5000,seed=1"),
    riskfree_options,
    csv_column_options,
    click.option("--seed", type=int, default=0, show_default=True, help="Default seed for synthetic specs."),
)

policy_options = _stack(
    click.option("--target-vol", type=float, default=C.DEFAULT_TARGET_VOL_ANN, show_default=True, help="Annualized target volatility."),
    click.option("--leverage", type=float, default=C.DEFAULT_LEVERAGE, show_default=True),
    click.option("--halflife", type=float, default=C.DEFAULT_HALFLIFE, show_default=True),
    click.option("--warmup", type=int, default=C.DEFAULT_WARMUP, show_default=True),
    click.option("--spread-bps", type=float, default=C.DEFAULT_SPREAD_BPS, show_default=True),
    click.option("--cost-convention", type=click.Choice([c.value for c in CostConvention]), default=CostConvention.HALF.value, show_default=True),
    click.option("--gain", type=float, default=C.DEFAULT_GAIN, show_default=True),
    click.option("--kappa-min", type=float, default=C.DEFAULT_KAPPA_MIN, show_default=True),
    click.option("--kappa-max", type=float, default=C.DEFAULT_KAPPA_MAX, show_default=True),
    click.option("--theta", type=float, default=C.DEFAULT_THETA, show_default=True),
)

out_option = click.option("--out", type=click.Path(file_okay=False), required=True, help="Output directory.")


def translate_errors(f):
    """Turn domain and validation failures into a clean exit code 1."""

    @wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (VolTargetError, ValidationError, SynthGrammarError) as e:
            raise click.ClickException(str(e)) from e

    return wrapper


def parse_float_list(text: str | None, *, name: str) -> List[float] | None:
    if text is None:
        return None
    try:
        values = [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"not a comma-separated list of numbers: {text!r}", param_hint=name)
    if not values:
        raise click.BadParameter("list must not be empty", param_hint=name)
    return values


# ---------- Resolvers ----------
def load_riskfree(params: Params, timestamps) -> ReturnSeries:
    if params["riskfree"] and params["rate"] is not None:
        raise click.UsageError("use either --riskfree or --rate, not both")
    if params["riskfree"]:
        return series.load_csv(
            params["riskfree"], params["date_column"], params["riskfree_column"], params["riskfree_kind"]
        )
    return series.constant_rate(timestamps, params["rate"] or 0.0)


def resolve_data(params: Params) -> SeriesPair:
    if bool(params["risky"]) == bool(params["synth"]):
        raise click.UsageError("give exactly one of --risky or --synth")
    if params["risky"]:
        risky = series.load_csv(
            params["risky"], params["date_column"], params["risky_column"], params["risky_kind"]
        )
    else:
        risky = series.generate(parse_synth(params["synth"], default_seed=params["seed"]))
    riskfree = load_riskfree(params, risky.timestamps)
    return series.align(risky, riskfree)


def build_config(params: Params, *, mode: str) -> BacktestConfig:
    controller = None
    if mode == "control":
        controller = ControllerConfig(
            gain=params["gain"],
            kappa_min=params["kappa_min"],
            kappa_max=params["kappa_max"],
            smoothing=params["theta"],
        )
    return BacktestConfig(
        target=TargetSpec(sigma_tar=vol_to_period(params["target_vol"]), leverage_limit=params["leverage"]),
        estimator_halflife=params["halflife"],
        controller=controller,
        warmup_steps=params["warmup"],
        spread_bps=params["spread_bps"],
        cost_convention=params["cost_convention"],
    )


def input_paths(params: Params) -> List[str]:
    paths = [params.get("risky"), params.get("riskfree"), *params.get("asset", ())]
    return [p for p in paths if p]


def manifest_for(subcommand: str, params: Params) -> RunManifest:
    return RunManifest(
        subcommand=subcommand,
        parameters={k: v for k, v in params.items() if k != "out"},
        input_digests=digests(input_paths(params)),
        seed=params.get("seed"),
    )
