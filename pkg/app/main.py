# app/main.py
import click

from app import __version__
from app.config import settings
from app.log import setup_logging

from app.commands.backtest import cmd_backtest
from app.commands.bands import cmd_bands
from app.commands.cohort import cmd_cohort
from app.commands.compare import cmd_compare
from app.commands.grid import cmd_grid
from app.commands.rerun import cmd_rerun


# ---------------------------------------------------------------------
# CLI group
# ---------------------------------------------------------------------
@click.group()
@click.version_option(__version__, prog_name="voltarget")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=settings.LOG_LEVEL,
    show_default=True,
)
def cli(log_level: str):
    """Volatility-targeted indices: open-loop versus feedback control."""
    setup_logging(log_level.upper())


# ---------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------
cli.add_command(cmd_backtest)
cli.add_command(cmd_compare)
cli.add_command(cmd_bands)
cli.add_command(cmd_grid)
cli.add_command(cmd_cohort)
cli.add_command(cmd_rerun)
