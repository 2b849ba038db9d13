import logging

import click

from app import __version__

from .manifest import load_manifest, sha256_file

logger = logging.getLogger(__name__)


@click.command("rerun")
@click.argument("manifest_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), required=True, help="Output directory for the replay.")
@click.pass_context
def cmd_rerun(ctx: click.Context, manifest_path: str, out: str):
    """Replay a recorded run into a new directory."""
    manifest = load_manifest(manifest_path)
    for path, digest in manifest.input_digests.items():
        try:
            current = sha256_file(path)
        except OSError as e:
            raise click.ClickException(f"input {path} unreadable: {e}")
        if current != digest:
            raise click.ClickException(f"input {path} changed since the recorded run")
    if manifest.tool_version != __version__:
        logger.warning("manifest written by version %s, running %s", manifest.tool_version, __version__)

    command = ctx.find_root().command.get_command(ctx, manifest.subcommand)
    if command is None or manifest.subcommand == "rerun":
        raise click.ClickException(f"cannot replay subcommand {manifest.subcommand!r}")
    params = {**manifest.parameters, "out": out}
    ctx.invoke(command, **params)
