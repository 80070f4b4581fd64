"""The ``fibersense`` command line.

One executable, verb-style subcommands, one config file as the source of
truth (flags only override scalars). Exit codes: 0 success, 1 internal
error, 2 config/validation error, 3 input-format error.
"""

import sys

import click

from ..errors import FormatError, ValidationError
from . import pipeline
from .runconfig import load_run_config


def _load(config, out, seed, duration_s, spacing_m):
    return load_run_config(config, output_dir=out, seed=seed,
                           duration_s=duration_s, spacing_m=spacing_m)


def common_options(fn):
    fn = click.option("--config", "-c", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="run config (YAML, schema run1)")(fn)
    fn = click.option("--out", default=None, help="output directory override")(fn)
    fn = click.option("--seed", type=int, default=None, help="seed override")(fn)
    fn = click.option("--duration-s", type=float, default=None,
                      help="override DAS/SOP record duration")(fn)
    fn = click.option("--spacing-m", type=float, default=None,
                      help="override DAS/BOTDR position spacing")(fn)
    return fn


def _only(only):
    if not only:
        return None
    names = tuple(p.strip() for p in only.split(",") if p.strip())
    bad = [n for n in names if n not in ("das", "botdr", "sop")]
    if bad:
        raise ValidationError(f"unknown modality {bad[0]!r} in --only")
    return names


@click.group()
def cli():
    """Multi-modal fiber sensing simulator and processing toolkit."""


@cli.command()
@common_options
@click.option("--only", default=None, help="comma-separated subset: das,botdr,sop")
@click.option("--jobs", type=int, default=1, help="parallel modality workers")
def simulate(config, out, seed, duration_s, spacing_m, only, jobs):
    """Synthesize the field and all enabled raw records."""
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.run_simulate(run, only=_only(only), jobs=jobs)
    click.echo(f"simulate: wrote {run.output_dir}/simulate.manifest.json")


@cli.command()
@common_options
@click.option("--only", default=None, help="comma-separated subset: das,botdr,sop")
@click.option("--jobs", type=int, default=1)
@click.option("--block-t", type=int, default=None, help="std waterfall time block")
@click.option("--block-x", type=int, default=None, help="std waterfall position block")
@click.option("--window-s", type=float, default=None, help="SOP stokes window")
def process(config, out, seed, duration_s, spacing_m, only, jobs, block_t,
            block_x, window_s):
    """Derive waterfalls, profiles and spectrograms from simulate outputs."""
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.run_process(run, only=_only(only), jobs=jobs, block_t=block_t,
                         block_x=block_x, window_s=window_s)
    click.echo(f"process: wrote {run.output_dir}/process.manifest.json")


@cli.command()
@common_options
def report(config, out, seed, duration_s, spacing_m):
    """Build the cross-modal report from processed products."""
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.run_report(run)
    click.echo(f"report: wrote {run.output_dir}/report.json")


@cli.group()
def das():
    """DAS-only verbs."""


@das.command("simulate")
@common_options
def das_simulate(config, out, seed, duration_s, spacing_m):
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.run_simulate(run, only=("das",))
    click.echo("das simulate: done")


@das.command("process")
@common_options
@click.option("--block-t", type=int, default=None)
@click.option("--block-x", type=int, default=None)
def das_process(config, out, seed, duration_s, spacing_m, block_t, block_x):
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.run_process(run, only=("das",), block_t=block_t, block_x=block_x)
    click.echo("das process: done")


@cli.group()
def botdr():
    """BOTDR-only verbs."""


@botdr.command("simulate")
@common_options
@click.option("--epoch", type=click.Choice(["before", "after", "both"]),
              default="both")
def botdr_simulate(config, out, seed, duration_s, spacing_m, epoch):
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.simulate_botdr_epochs(run, epoch)
    click.echo(f"botdr simulate ({epoch}): done")


@botdr.command("fit")
@common_options
def botdr_fit(config, out, seed, duration_s, spacing_m):
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.botdr_fit_epochs(run)
    click.echo("botdr fit: done")


@botdr.command("diff")
@common_options
def botdr_diff(config, out, seed, duration_s, spacing_m):
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.botdr_diff_profiles(run)
    click.echo("botdr diff: done")


@cli.group()
def sop():
    """SOP-only verbs."""


@sop.command("simulate")
@common_options
def sop_simulate(config, out, seed, duration_s, spacing_m):
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.run_simulate(run, only=("sop",))
    click.echo("sop simulate: done")


@sop.command("process")
@common_options
@click.option("--window-s", type=float, default=None)
def sop_process(config, out, seed, duration_s, spacing_m, window_s):
    run = _load(config, out, seed, duration_s, spacing_m)
    pipeline.run_process(run, only=("sop",), window_s=window_s)
    click.echo("sop process: done")


def main(argv=None):
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except click.UsageError as exc:
        exc.show()
        return 2
    except FormatError as exc:
        click.echo(f"format error: {exc}", err=True)
        return 3
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except Exception as exc:  # internal error
        click.echo(f"internal error: {exc!r}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
