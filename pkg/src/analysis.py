"""One analysis per invocation: validated config in, JSON report out."""
import hashlib
import json
import logging
import os
import time
from pathlib import Path
from typing import List, Literal, Optional

import jsonschema
import numpy as np
from pydantic import (BaseModel, ConfigDict, Field, ValidationError,
                      model_validator)

from src import __version__
from src.certify import (FAIL, INCONCLUSIVE, PASS, check_alpha_pl,
                         check_block_growth, check_block_pl, check_growth,
                         check_increasing_at_infinity, check_two_sided_pl,
                         estimate_gradient_lipschitz, estimate_minimum,
                         invexity_verdict, jsonable, pl_gradient_flow,
                         pl_growth_constant)
from src.config import config
from src.data.data_ingestion import load_game
from src.errors import (ConfigError, DimensionError, ExprSyntaxError,
                        InconclusiveError, SeparationInputError,
                        ToolkitError, UnknownBuiltinError)
from src.expr import ScalarField, builtin
from src.games import (JointGridSet, builtin_game, find_nash,
                       iterate_rationalizable, nash_matches_potential,
                       potential_consistency_check, potential_maximizers,
                       strategic_compactness_check)
from src.grid import (BoxDomain, RegularGrid, connectedness_verdict,
                      sublevel_mask)
from src.minimax import (MinimaxProblem, classify_solutions,
                         estimate_inner_modulus, gda, inner_modulus_bound,
                         interchangeability_check, product_structure_check)
from src.mountainpass import find_mountain_pass, verify_separation
from src.visualization import export_labeling, export_rows

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).resolve().parent / "report_schema.json"
SCHEMA_VERSION = 1

FIELD_COMMANDS = ('sublevel', 'certify-pl', 'certify-growth',
                  'certify-invex', 'increasing-at-infinity', 'mountain-pass',
                  'pl-flow', 'minimax-classify', 'minimax-modulus')
GAME_COMMANDS = ('game-nash', 'game-rationalize', 'game-potential')
COMMANDS = FIELD_COMMANDS + GAME_COMMANDS

# fields that never change a numerical result
NON_SEMANTIC = {'out', 'log_json', 'progress', 'csv'}

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class AnalysisConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    command: Literal[COMMANDS]
    # function source: exactly one of builtin / expression (+ dimension)
    builtin: Optional[str] = None
    expression: Optional[str] = None
    dimension: Optional[int] = Field(None, ge=1)
    # game source: exactly one of game / game_file
    game: Optional[str] = None
    game_file: Optional[str] = None
    potential: Optional[str] = None

    box: Optional[List[float]] = None
    resolution: List[int] = Field(
        default_factory=lambda: [config.grid.default_resolution])
    split: int = Field(1, ge=1)

    level: Optional[float] = None
    mode: Optional[str] = None
    envelope: Optional[bool] = None
    alpha: float = Field(2.0, gt=1)
    mu: Optional[float] = Field(None, gt=0)
    mu1: Optional[float] = Field(None, gt=0)
    mu2: Optional[float] = Field(None, gt=0)
    two_sided: bool = False
    block: Optional[Literal['x', 'y']] = None
    beta: float = Field(2.0, gt=0)
    eta: Optional[float] = Field(None, gt=0)
    f_star: Optional[float] = None
    eps_excl: Optional[float] = Field(None, ge=0)
    tol: Optional[float] = Field(None, ge=0)
    tol_val: Optional[float] = Field(None, ge=0)
    tol_grad: Optional[float] = Field(None, ge=0)
    starts: Optional[int] = Field(None, ge=1)

    center: Optional[List[float]] = None
    radii: Optional[List[float]] = None
    x0: Optional[List[float]] = None
    x1: Optional[List[float]] = None
    nodes: Optional[int] = Field(None, ge=3)
    iters: Optional[int] = Field(None, ge=1)
    stop_eps: float = Field(1e-8, gt=0)
    t_max: float = Field(1e3, gt=0)

    saddles: Optional[List[List[float]]] = None
    steps: Optional[List[float]] = None
    side: Literal['x', 'y'] = 'y'
    base: Optional[List[float]] = None
    deltas: Optional[List[float]] = None

    grid_box: Optional[List[float]] = None
    k_box: Optional[List[float]] = None
    s0_box: Optional[List[float]] = None
    max_k: int = Field(20, ge=1)
    refine: Optional[int] = Field(None, ge=1)
    budget: Optional[int] = Field(None, ge=1)
    subsample: Optional[bool] = None

    expect: Optional[str] = None
    seed: int = 42
    out: str = "results"
    csv: bool = True
    log_json: bool = False
    progress: bool = False

    @model_validator(mode='after')
    def _one_source(self):
        if self.command in FIELD_COMMANDS:
            if (self.builtin is None) == (self.expression is None):
                raise ValueError("give exactly one of builtin / expression")
            if self.expression is not None and self.dimension is None:
                raise ValueError("an expression needs its dimension")
        elif (self.game is None) == (self.game_file is None):
            raise ValueError("give exactly one of game / game_file")
        return self

    def semantic_dict(self):
        return self.model_dump(mode='json', exclude=NON_SEMANTIC)

    def digest(self):
        canonical = json.dumps(self.semantic_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()


def parse_config(raw: dict, source="<config>") -> AnalysisConfig:
    try:
        return AnalysisConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first['loc']) or "<root>"
        raise ConfigError(f"{source}: field '{where}': {first['msg']}") \
            from exc


def load_config_file(path) -> AnalysisConfig:
    try:
        with open(path, "r") as f:
            raw = json.load(f)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: "
                          f"{exc.msg}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return parse_config(raw, str(path))


def _require(analysis, *names):
    missing = [n for n in names if getattr(analysis, n) is None]
    if missing:
        raise ConfigError(f"{analysis.command} needs: {', '.join(missing)}")


def _box(bounds, dimension=None):
    try:
        box = BoxDomain.from_bounds(bounds)
    except ValueError as exc:
        raise ConfigError(f"box {bounds}: {exc}") from exc
    if dimension is not None and box.dimension != dimension:
        raise ConfigError(f"box has dimension {box.dimension}, function "
                          f"has {dimension}")
    return box


def _point(values, dimension, name):
    p = np.asarray(values, dtype=float)
    if p.shape != (dimension,):
        raise ConfigError(f"{name} needs {dimension} coordinate(s)")
    return p


def _field(analysis):
    if analysis.builtin is not None:
        return builtin(analysis.builtin)
    return ScalarField.from_text(analysis.expression, analysis.dimension)


def _game(analysis):
    if analysis.game is not None:
        return builtin_game(analysis.game)
    return load_game(analysis.game_file)


def _check(name, verdict, result):
    return {'name': name, 'verdict': verdict, 'result': jsonable(result)}


def _certificate(name, certificate):
    return _check(name, certificate.verdict, certificate.to_dict())


class _Run:
    """Mutable state of one execution: checks, artifacts and counts to
    compare against ``expect``."""

    def __init__(self, analysis):
        self.analysis = analysis
        self.checks = []
        self.artifacts = []
        self.observed_counts = None

    def artifact(self, name, writer, *args, **kwargs):
        if not self.analysis.csv:
            return
        path = os.path.join(self.analysis.out, name)
        self.artifacts.append(writer(*args, path=path, **kwargs))


def _sublevel(run, field):
    a = run.analysis
    _require(a, 'box', 'level')
    box = _box(a.box, field.dimension)
    mode = a.mode or 'sub'
    verdict = connectedness_verdict(field, box, a.level, a.resolution, mode,
                                    a.envelope, a.tol_val, a.tol_grad)
    run.observed_counts = verdict.counts
    run.checks.append(_check('connectedness', PASS, verdict.to_dict()))
    if mode != 'critical':
        mask = sublevel_mask(field, RegularGrid(box, a.resolution[-1]),
                             a.level, mode, a.envelope)
        run.artifact('labels.csv', export_labeling, mask, field=field)


def _minimax_problem(a, field):
    _require(a, 'box')
    box = _box(a.box, field.dimension)
    if a.split >= field.dimension:
        raise ConfigError(f"split {a.split} leaves no y block")
    return MinimaxProblem.on_box(field, box, a.split)


def _certify_pl(run, field):
    a = run.analysis
    _require(a, 'box')
    grid = RegularGrid(_box(a.box, field.dimension), a.resolution[0])
    if a.two_sided:
        _require(a, 'mu1', 'mu2')
        problem = _minimax_problem(a, field)
        for cert in check_two_sided_pl(problem, grid, a.mu1, a.mu2,
                                       a.eps_excl):
            run.checks.append(_certificate(cert.condition, cert))
    elif a.block is not None:
        _require(a, 'mu')
        problem = _minimax_problem(a, field)
        cert = check_block_pl(problem, grid, a.block, a.alpha, a.mu,
                              eps_excl=a.eps_excl)
        run.checks.append(_certificate(cert.condition, cert))
    else:
        _require(a, 'mu')
        cert = check_alpha_pl(field, grid, a.alpha, a.mu, a.eps_excl,
                              a.f_star)
        run.checks.append(_certificate(cert.condition, cert))


def _certify_growth(run, field):
    a = run.analysis
    _require(a, 'box')
    eta = a.eta
    if eta is None:
        _require(a, 'mu')
        eta = pl_growth_constant(a.alpha, a.mu)
        logger.info(f"eta = {eta:.6g} from alpha-PL constant {a.mu:g}")
    grid = RegularGrid(_box(a.box, field.dimension), a.resolution[0])
    if a.block is not None:
        problem = _minimax_problem(a, field)
        cert = check_block_growth(problem, grid, a.block, a.beta, eta,
                                  a.eps_excl, a.tol)
    else:
        cert = check_growth(field, grid, a.beta, eta, eps_excl=a.eps_excl,
                            f_star=a.f_star)
    run.checks.append(_certificate(cert.condition, cert))


def _certify_invex(run, field):
    a = run.analysis
    _require(a, 'box')
    box = _box(a.box, field.dimension)
    cert = invexity_verdict(field, box, a.tol_grad,
                            1e-6 if a.tol_val is None else a.tol_val,
                            a.starts)
    run.checks.append(_certificate(cert.condition, cert))


def _increasing(run, field):
    a = run.analysis
    _require(a, 'radii', 'level')
    center = _point(a.center or [0.0] * field.dimension, field.dimension,
                    'center')
    cert = check_increasing_at_infinity(field, center, a.radii, a.level)
    run.checks.append(_certificate(cert.condition, cert))


def _mountain_pass(run, field):
    a = run.analysis
    _require(a, 'x0', 'x1')
    x0 = _point(a.x0, field.dimension, 'x0')
    x1 = _point(a.x1, field.dimension, 'x1')
    box = _box(a.box, field.dimension) if a.box is not None else None
    result = find_mountain_pass(field, x0, x1, a.nodes, a.iters, a.tol,
                                box=box)
    if result.no_pass:
        verdict = FAIL
    elif result.inconclusive or result.boundary_hit:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    run.checks.append(_check('mountain-pass', verdict, result.to_dict()))
    run.artifact('path.csv', export_rows, result)
    if a.level is None or box is None:
        return
    grid = RegularGrid(box, a.resolution[0])
    separated = verify_separation(field, box, grid, x0, x1, a.level,
                                  a.envelope)
    run.checks.append(_check('separation', PASS if separated else FAIL,
                             {'level': a.level, 'separated': separated}))
    if separated and verdict == PASS:
        above = result.pass_value > a.level
        run.checks.append(_check(
            'pass-above-level', PASS if above else FAIL,
            {'level': a.level, 'pass_value': result.pass_value}))


def _pl_flow(run, field):
    a = run.analysis
    _require(a, 'x0')
    x0 = _point(a.x0, field.dimension, 'x0')
    f_star = a.f_star
    if f_star is None:
        _require(a, 'box')
        f_star = estimate_minimum(field, _box(a.box, field.dimension),
                                  a.starts, a.iters).f_star
    trace = pl_gradient_flow(field, x0, a.alpha, f_star, a.mu, a.stop_eps,
                             a.t_max)
    ok = trace.converged and trace.within_bound is not False
    result = {**trace.to_dict(), 'f_star': f_star}
    run.checks.append(_check('pl-flow', PASS if ok else FAIL, result))
    run.artifact('flow.csv', export_rows, trace)


def _minimax_classify(run, field):
    a = run.analysis
    problem = _minimax_problem(a, field)
    grid = problem.grid(a.resolution[0])
    classification = classify_solutions(problem, grid, a.tol_val,
                                        a.tol_grad)
    gap = abs(classification.minimax_value - classification.maximin_value)
    equal = gap <= 1e-6 * (1 + abs(classification.minimax_value))
    run.checks.append(_check('classification', PASS if equal else FAIL,
                             {**classification.to_dict(False),
                              'value_gap': gap}))
    run.checks.append(_certificate(
        'product-structure', product_structure_check(classification, a.tol)))
    if a.saddles:
        if len(a.saddles) != 2:
            raise ConfigError("saddles needs exactly two points")
        s1, s2 = (_point(s, field.dimension, 'saddle') for s in a.saddles)
        run.checks.append(_certificate(
            'interchangeability',
            interchangeability_check(problem, s1, s2, a.tol_val)))
    run.artifact('saddles.csv', export_labeling, classification.masks['E'],
                 field=field)
    if a.steps is not None:
        _require(a, 'x0')
        if len(a.steps) != 2:
            raise ConfigError("steps needs step_x and step_y")
        start = _point(a.x0, field.dimension, 'x0')
        x, y = problem.parts(start)
        trace = gda(problem, x, y, a.steps[0], a.steps[1],
                    a.iters or config.numerics.max_iters)
        run.checks.append(_check(
            'gda', PASS if trace.converged else INCONCLUSIVE,
            trace.to_dict()))
        run.artifact('gda.csv', export_rows, trace)


def _minimax_modulus(run, field):
    a = run.analysis
    _require(a, 'base', 'deltas')
    problem = _minimax_problem(a, field)
    base = _point(a.base, field.dimension, 'base')
    estimate = estimate_inner_modulus(
        problem, a.side, base, a.deltas,
        problem.block_grid(a.side, a.resolution[0]), a.mode or 'lipschitz',
        a.tol)
    result = estimate.to_dict()
    if a.mu is not None and a.eta is not None:
        lipschitz = estimate_gradient_lipschitz(
            field, problem.grid(a.resolution[0]))
        kappa, exponent = inner_modulus_bound(lipschitz, a.alpha, a.eta,
                                              a.mu)
        result['bound'] = {'lipschitz': lipschitz, 'kappa': kappa,
                           'exponent': exponent}
    # an infinite modulus comes with a stationary witness off the response
    finite = np.isfinite(estimate.kappa)
    run.checks.append(_check('inner-modulus', PASS if finite else FAIL,
                             result))


def _per_player_box(bounds, game):
    box = _box(bounds)
    return [box] * game.players


def _game_grids(a, game):
    if a.grid_box is not None:
        boxes = _per_player_box(a.grid_box, game)
        resolution = a.resolution * game.players \
            if len(a.resolution) == 1 else a.resolution
        return [RegularGrid(b, r) for b, r in zip(boxes, resolution)]
    resolution = a.resolution[0] if len(a.resolution) == 1 \
        else a.resolution
    return game.grids(resolution)


def _lambda_options(a):
    return {k: v for k, v in (('refine', a.refine), ('budget', a.budget),
                              ('subsample', a.subsample)) if v is not None}


def _game_nash(run, game):
    a = run.analysis
    grids = _game_grids(a, game)
    nash = find_nash(game, grids, a.tol, a.tol_grad)
    run.observed_counts = [nash.component_count]
    run.checks.append(_check('nash', PASS if nash.component_count
                             else FAIL, nash.to_dict()))
    run.artifact('nash_labels.csv', export_labeling, nash.mask)


def _game_rationalize(run, game):
    a = run.analysis
    grids = _game_grids(a, game)
    options = _lambda_options(a)
    if a.k_box is not None:
        K = JointGridSet.from_boxes(grids, _per_player_box(a.k_box, game))
        run.checks.append(_certificate(
            'strategic-compactness',
            strategic_compactness_check(game, K, a.tol, **options)))
    if a.s0_box is not None:
        S0 = JointGridSet.from_boxes(grids, _per_player_box(a.s0_box, game))
    elif a.k_box is not None:
        S0 = K
    else:
        S0 = JointGridSet.full(grids)
    trace = iterate_rationalizable(game, S0, a.max_k, a.tol, **options)
    if trace.budget_exceeded or not trace.fixed_point_reached:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    run.checks.append(_check('rationalizability', verdict, trace.to_dict()))
    run.artifact('rationalizability.csv', export_rows, trace)


def _game_potential(run, game):
    a = run.analysis
    potential = game.potential
    if a.potential is not None:
        potential = ScalarField.from_text(a.potential, game.dimension)
    if potential is None:
        raise ConfigError("game-potential needs a potential")
    grids = _game_grids(a, game)
    run.checks.append(_certificate(
        'potential-consistency', potential_consistency_check(
            game, potential, grids, 1e-9 if a.tol is None else a.tol)))
    nash = find_nash(game, grids, tol_grad=a.tol_grad)
    maximizers = potential_maximizers(potential, grids)
    run.checks.append(_certificate('nash-equals-argmax-potential',
                                   nash_matches_potential(nash, maximizers)))


RUNNERS = {
    'sublevel': _sublevel,
    'certify-pl': _certify_pl,
    'certify-growth': _certify_growth,
    'certify-invex': _certify_invex,
    'increasing-at-infinity': _increasing,
    'mountain-pass': _mountain_pass,
    'pl-flow': _pl_flow,
    'minimax-classify': _minimax_classify,
    'minimax-modulus': _minimax_modulus,
    'game-nash': _game_nash,
    'game-rationalize': _game_rationalize,
    'game-potential': _game_potential,
}


def _expectation(run):
    """None without ``expect``; otherwise whether the outcome matches."""
    expect = run.analysis.expect
    if expect is None:
        return None
    if expect in (PASS, FAIL, INCONCLUSIVE):
        return _overall(run.checks) == expect
    try:
        wanted = [int(c) for c in expect.split(",")]
    except ValueError:
        raise ConfigError(f"expect '{expect}' is neither a verdict nor a "
                          f"list of counts") from None
    if run.observed_counts is None:
        raise ConfigError(f"{run.analysis.command} reports no counts")
    return wanted == list(run.observed_counts)


def _overall(checks):
    verdicts = [c['verdict'] for c in checks]
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts or not verdicts:
        return INCONCLUSIVE
    return PASS


def exit_code_for(checks, expectation=None):
    if expectation is not None:
        return EXIT_PASS if expectation else EXIT_FAIL
    return {PASS: EXIT_PASS, FAIL: EXIT_FAIL,
            INCONCLUSIVE: EXIT_INCONCLUSIVE}[_overall(checks)]


def validate_report(report):
    with open(SCHEMA_PATH, "r") as f:
        schema = json.load(f)
    jsonschema.validate(report, schema)


def execute(analysis: AnalysisConfig):
    """Run one analysis; returns (report, exit code) and writes
    report.json plus CSV artifacts under ``analysis.out``."""
    started = time.perf_counter()
    run = _Run(analysis)
    previous = (config.numerics.seed, config.logging.progress)
    config.numerics.seed = analysis.seed
    config.logging.progress = analysis.progress
    report = {'schema_version': SCHEMA_VERSION,
              'toolkit_version': __version__,
              'command': analysis.command,
              'config': analysis.model_dump(mode='json'),
              'config_hash': analysis.digest(),
              'subject': None, 'checks': [], 'artifacts': [],
              'expectation': None, 'error': None}
    try:
        if analysis.command in FIELD_COMMANDS:
            subject = _field(analysis)
        else:
            subject = _game(analysis)
        report['subject'] = subject.describe()
        loaded = time.perf_counter()
        logger.info(f"running {analysis.command} on "
                    f"{report['subject'].get('name') or 'expression'}")
        RUNNERS[analysis.command](run, subject)
        expectation = _expectation(run)
        code = exit_code_for(run.checks, expectation)
        report['expectation'] = expectation
    except (ConfigError, UnknownBuiltinError, ExprSyntaxError,
            DimensionError, SeparationInputError, ValueError) as exc:
        logger.error(f"configuration error: {exc}")
        report['error'] = str(exc)
        code, loaded = EXIT_USAGE, None
    except InconclusiveError as exc:
        logger.warning(f"inconclusive: {exc}")
        report['error'] = str(exc)
        code, loaded = EXIT_INCONCLUSIVE, None
    except ToolkitError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        report['error'] = f"{type(exc).__name__}: {exc}"
        code, loaded = EXIT_INCONCLUSIVE, None
    finally:
        config.numerics.seed, config.logging.progress = previous

    finished = time.perf_counter()
    report['checks'] = run.checks
    report['artifacts'] = run.artifacts
    report['verdict'] = None if report['error'] else _overall(run.checks)
    report['exit_code'] = code
    report['timings'] = {
        'total_seconds': finished - started,
        'analysis_seconds': None if loaded is None else finished - loaded}
    report = jsonable(report)
    validate_report(report)
    write_report(report, analysis.out)
    return report, code


def write_report(report, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "report.json")
    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
    logger.info(f"report written to {path}")
    return path
