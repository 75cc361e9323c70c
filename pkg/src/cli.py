# src/cli.py
import logging

import click

from src import __version__
from src.analysis import (EXIT_USAGE, execute, load_config_file,
                          parse_config)
from src.errors import ConfigError
from src.logs import configure_logging

logger = logging.getLogger(__name__)


class NumberList(click.ParamType):
    """Comma-separated numbers, e.g. ``-3,3,-3,3``."""
    name = "list"

    def __init__(self, cast=float):
        self.cast = cast

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return list(value)
        try:
            return [self.cast(v) for v in value.split(",") if v.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of "
                      f"{self.cast.__name__}s", param, ctx)


FLOATS = NumberList(float)
INTS = NumberList(int)


def _options(*decorators):
    def apply(func):
        for decorator in reversed(decorators):
            func = decorator(func)
        return func
    return apply


field_source = _options(
    click.option("--builtin", help="Name of a built-in field."),
    click.option("--expr", "expression", help="Expression in x0, x1, ..."),
    click.option("--dim", "dimension", type=int,
                 help="Dimension of --expr."),
)
box_option = click.option("--box", type=FLOATS,
                          help="Flat bounds lo0,hi0,lo1,hi1,...")
res_option = click.option("--res", "resolution", type=INTS,
                          help="Nodes per axis; a list for refinement.")
split_option = click.option("--split", type=int,
                            help="Number of x coordinates (default 1).")
expect_option = click.option(
    "--expect", help="Expected verdict or comma-separated counts; exit 1 on "
                     "mismatch, 0 otherwise.")
tolerances = _options(
    click.option("--tol", type=float),
    click.option("--tol-val", type=float),
    click.option("--tol-grad", type=float),
)
game_source = _options(
    click.option("--game", help="Name of a built-in game."),
    click.option("--game-file", type=click.Path(exists=True,
                                                dir_okay=False),
                 help="JSON game document."),
    click.option("--grid-box", type=FLOATS,
                 help="Per-player lattice bounds (replaces the game box)."),
)
lambda_options = _options(
    click.option("--refine", type=int),
    click.option("--budget", type=int),
    click.option("--subsample/--no-subsample", default=None),
)


def _dispatch(ctx, command, options):
    raw = {k: v for k, v in options.items() if v is not None}
    raw.update({k: v for k, v in ctx.obj.items() if v is not None})
    raw['command'] = command
    try:
        analysis = parse_config(raw, f"invex-topo {command}")
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_USAGE)
    _finish(ctx, analysis)


def _finish(ctx, analysis):
    report, code = execute(analysis)
    for check in report['checks']:
        click.echo(f"{check['name']}: {check['verdict']}")
    if report['error']:
        click.echo(f"error: {report['error']}", err=True)
    click.echo(f"report: {analysis.out}/report.json (exit {code})")
    ctx.exit(code)


@click.group()
@click.version_option(__version__)
@click.option("--seed", type=int, help="Seed of every quasi-random sampler.")
@click.option("--out", type=click.Path(file_okay=False),
              help="Output directory for report.json and CSV files.")
@click.option("--log-json", is_flag=True,
              help="Emit log records as JSON lines.")
@click.option("--progress", is_flag=True, help="Show progress bars.")
@click.option("--csv/--no-csv", default=True,
              help="Write CSV plot-data artifacts.")
@click.pass_context
def cli(ctx, seed, out, log_json, progress, csv):
    """Landscape, minimax and game analyses of explicit scalar fields."""
    configure_logging(json_output=log_json)
    ctx.obj = {'seed': seed, 'out': out, 'log_json': log_json,
               'progress': progress, 'csv': csv}


@cli.command()
@field_source
@box_option
@res_option
@click.option("--level", type=float, required=True)
@click.option("--mode", type=click.Choice(["sub", "super", "critical"]))
@click.option("--envelope/--no-envelope", default=None)
@tolerances
@expect_option
@click.pass_context
def sublevel(ctx, **options):
    """Component counts of a level set across resolutions."""
    _dispatch(ctx, 'sublevel', options)


@cli.command("certify-pl")
@field_source
@box_option
@res_option
@split_option
@click.option("--alpha", type=float)
@click.option("--mu", type=float)
@click.option("--two-sided", is_flag=True)
@click.option("--mu1", type=float)
@click.option("--mu2", type=float)
@click.option("--block", type=click.Choice(["x", "y"]))
@click.option("--f-star", type=float)
@click.option("--eps-excl", type=float)
@expect_option
@click.pass_context
def certify_pl(ctx, **options):
    """alpha-PL, block PL or two-sided PL on a lattice."""
    _dispatch(ctx, 'certify-pl', options)


@cli.command("certify-growth")
@field_source
@box_option
@res_option
@split_option
@click.option("--beta", type=float)
@click.option("--eta", type=float)
@click.option("--alpha", type=float)
@click.option("--mu", type=float, help="Derive eta from an alpha-PL mu.")
@click.option("--block", type=click.Choice(["x", "y"]))
@click.option("--f-star", type=float)
@click.option("--eps-excl", type=float)
@click.option("--tol", type=float)
@expect_option
@click.pass_context
def certify_growth(ctx, **options):
    """beta-growth away from the argmin or best-response set."""
    _dispatch(ctx, 'certify-growth', options)


@cli.command("certify-invex")
@field_source
@box_option
@click.option("--tol-grad", type=float)
@click.option("--tol-val", type=float)
@click.option("--starts", type=int)
@expect_option
@click.pass_context
def certify_invex(ctx, **options):
    """Every stationary point found is a global minimum."""
    _dispatch(ctx, 'certify-invex', options)


@cli.command("increasing-at-infinity")
@field_source
@click.option("--center", type=FLOATS)
@click.option("--radii", type=FLOATS, required=True)
@click.option("--level", type=float, required=True)
@expect_option
@click.pass_context
def increasing_at_infinity(ctx, **options):
    """Shell minima of the field must eventually exceed the level."""
    _dispatch(ctx, 'increasing-at-infinity', options)


@cli.command("mountain-pass")
@field_source
@click.option("--x0", type=FLOATS, required=True)
@click.option("--x1", type=FLOATS, required=True)
@click.option("--nodes", type=int)
@click.option("--iters", type=int)
@click.option("--tol", type=float)
@box_option
@res_option
@click.option("--level", type=float,
              help="Also verify separation at this level (needs --box).")
@click.option("--envelope/--no-envelope", default=None)
@expect_option
@click.pass_context
def mountain_pass(ctx, **options):
    """String relaxation plus climbing image between two points."""
    _dispatch(ctx, 'mountain-pass', options)


@cli.command("pl-flow")
@field_source
@click.option("--x0", type=FLOATS, required=True)
@click.option("--alpha", type=float)
@click.option("--mu", type=float)
@click.option("--f-star", type=float)
@box_option
@click.option("--stop-eps", type=float)
@click.option("--t-max", type=float)
@expect_option
@click.pass_context
def pl_flow(ctx, **options):
    """Integrate the rescaled gradient flow to the minimum value."""
    _dispatch(ctx, 'pl-flow', options)


@cli.command("minimax-classify")
@field_source
@box_option
@res_option
@split_option
@tolerances
@click.option("--saddle", "saddles", type=FLOATS, multiple=True,
              help="Two saddle points for the interchangeability check.")
@click.option("--x0", type=FLOATS, help="Joint GDA start.")
@click.option("--steps", type=FLOATS, help="GDA step_x,step_y.")
@click.option("--iters", type=int)
@expect_option
@click.pass_context
def minimax_classify(ctx, saddles, **options):
    """Primal, dual, minimax, maximin and saddle sets."""
    options['saddles'] = list(saddles) or None
    _dispatch(ctx, 'minimax-classify', options)


@cli.command("minimax-modulus")
@field_source
@box_option
@res_option
@split_option
@click.option("--side", type=click.Choice(["x", "y"]))
@click.option("--base", type=FLOATS, required=True)
@click.option("--deltas", type=FLOATS, required=True)
@click.option("--mode", type=click.Choice(["lipschitz", "hoelder", "eb"]))
@click.option("--tol", type=float)
@click.option("--alpha", type=float)
@click.option("--eta", type=float)
@click.option("--mu", type=float)
@expect_option
@click.pass_context
def minimax_modulus(ctx, **options):
    """Inner modulus of a best-response map at a base point."""
    _dispatch(ctx, 'minimax-modulus', options)


@cli.command("game-nash")
@game_source
@res_option
@click.option("--tol", type=float, help="Regret tolerance.")
@click.option("--tol-grad", type=float)
@expect_option
@click.pass_context
def game_nash(ctx, **options):
    """Approximate Nash set on the joint lattice."""
    _dispatch(ctx, 'game-nash', options)


@cli.command("game-rationalize")
@game_source
@res_option
@click.option("--k-box", type=FLOATS,
              help="Per-player box K for the compactness check.")
@click.option("--s0-box", type=FLOATS, help="Per-player start box.")
@click.option("--max-k", type=int)
@click.option("--tol", type=float)
@lambda_options
@expect_option
@click.pass_context
def game_rationalize(ctx, **options):
    """Iterate the joint best-response operator."""
    _dispatch(ctx, 'game-rationalize', options)


@cli.command("game-potential")
@game_source
@res_option
@click.option("--potential", help="Potential expression in x0, x1, ...")
@click.option("--tol", type=float)
@click.option("--tol-grad", type=float)
@expect_option
@click.pass_context
def game_potential(ctx, **options):
    """Potential consistency and Nash set against argmax P."""
    _dispatch(ctx, 'game-potential', options)


@cli.command()
@click.option("--config", "path", type=click.Path(dir_okay=False),
              required=True, help="JSON analysis configuration.")
@click.pass_context
def run(ctx, path):
    """Execute a JSON analysis configuration."""
    try:
        analysis = load_config_file(path)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_USAGE)
    # command-line globals win over the file when given explicitly
    update = {k: ctx.obj[k] for k in ('seed', 'out')
              if ctx.obj[k] is not None}
    update.update({k: True for k in ('log_json', 'progress')
                   if ctx.obj[k]})
    if not ctx.obj['csv']:
        update['csv'] = False
    analysis = analysis.model_copy(update=update)
    if analysis.log_json:
        configure_logging(json_output=True)
    _finish(ctx, analysis)


if __name__ == '__main__':
    cli()
