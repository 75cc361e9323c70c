"""Best responses, the joint best-response operator and its iterates."""
import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.spatial import cKDTree
from tqdm import tqdm

from src.certify.certificate import FAIL, PASS, Certificate, jsonable
from src.config import config
from src.errors import BudgetExceededError
from src.games.sets import JointGridSet

logger = logging.getLogger(__name__)

_CHUNK_ROWS = 1_000_000


def best_response_masks(game, i, profiles, grid, tol=None):
    """Best-response node masks of player i, one row per opponent profile.

    A node belongs when u_i there is within tol * (1 + |max|) of the
    slice's grid maximum.
    """
    tol = config.games.br_tol if tol is None else tol
    own = grid.points()
    profiles = np.asarray(profiles, dtype=float)
    if profiles.ndim == 1:
        profiles = profiles.reshape(1, -1)
    per_chunk = max(1, _CHUNK_ROWS // len(own))
    out = []
    for start in range(0, len(profiles), per_chunk):
        chunk = profiles[start:start + per_chunk]
        rows = game.assemble(i, own, chunk)
        values = game.utilities[i].evaluate_batch(rows).reshape(
            len(chunk), len(own))
        best = values.max(axis=1, keepdims=True)
        out.append(values >= best - tol * (1 + np.abs(best)))
    return np.vstack(out)


def player_best_response(game, i, a_minus_i, grid, tol=None):
    """Node mask (grid shape) of player i's best responses."""
    mask = best_response_masks(game, i, a_minus_i, grid, tol)[0]
    return mask.reshape(grid.shape)


def _edge_samples(grid, mask, refine):
    """Mask nodes plus points subdividing every edge between true
    neighbours."""
    samples = [grid.points()[mask.ravel()]]
    if refine > 1:
        coords = grid.points().reshape(grid.shape + (grid.dimension,))
        fractions = np.arange(1, refine) / refine
        for axis in range(mask.ndim):
            lead = [slice(None)] * mask.ndim
            tail = [slice(None)] * mask.ndim
            lead[axis] = slice(None, -1)
            tail[axis] = slice(1, None)
            joined = mask[tuple(lead)] & mask[tuple(tail)]
            a = coords[tuple(lead)][joined]
            b = coords[tuple(tail)][joined]
            if len(a):
                inner = a[:, None, :] + fractions[None, :, None] * \
                    (b - a)[:, None, :]
                samples.append(inner.reshape(-1, grid.dimension))
    return np.vstack(samples)


@dataclass
class LambdaResult:
    image: JointGridSet
    approximate: bool = False
    evaluations: int = 0


def _enumerate(others, stride):
    index_iter = itertools.product(*[range(len(o)) for o in others])
    for k, index in enumerate(index_iter):
        if k % stride == 0:
            yield np.concatenate([o[j] for o, j in zip(others, index)])


def lambda_operator(game, S: JointGridSet, tol=None, refine=None,
                    budget=None, subsample=None):
    """
    Applies the joint best-response operator to a product set.

    Args:
        game (GameSpec): Utilities and per-player boxes.
        S (JointGridSet): Non-empty product set of action profiles.
        tol (float): Best-response tolerance relative to the slice maximum.
        refine (int): Edge subdivisions used to sample opponent masks.
        budget (int): Most opponent profiles (slice solves) per player.
        subsample (bool): Stride through profiles instead of refusing work
            above the budget.

    Returns:
        LambdaResult: Per player, the union of best responses to every
            opponent profile drawn from S, plus the approximation flag.
    """
    if S.empty:
        raise ValueError("lambda needs a non-empty set")
    settings = config.games
    refine = settings.refine if refine is None else refine
    budget = settings.budget if budget is None else budget
    subsample = settings.subsample if subsample is None else subsample

    masks, approximate, total = [], False, 0
    for i in range(game.players):
        grid = S.grids[i]
        others = [_edge_samples(S.grids[j], S.masks[j], refine)
                  for j in range(game.players) if j != i]
        # one slice solve per opponent profile
        count = int(np.prod([len(o) for o in others])) if others else 1
        stride = 1
        if count > budget:
            if not subsample:
                raise BudgetExceededError(count, budget, "slice solves")
            stride = int(np.ceil(count / budget))
            approximate = True
            logger.warning(f"player {i}: subsampling every {stride}th "
                           f"opponent profile of {count:,}")
        if others:
            profiles = np.array(list(_enumerate(others, stride)))
        else:
            profiles = np.zeros((1, 0))
        total += len(profiles) * grid.total
        responses = best_response_masks(game, i, profiles, grid, tol)
        masks.append(responses.any(axis=0).reshape(grid.shape))
    return LambdaResult(JointGridSet(S.grids, masks), approximate, total)


@dataclass
class TraceStep:
    k: int
    set: JointGridSet
    component_counts: List[int]
    sizes: List[int]

    def to_dict(self):
        return jsonable({'k': self.k, 'component_counts':
                         self.component_counts, 'sizes': self.sizes,
                         'set': self.set.to_dict()})


@dataclass
class RationalizabilityTrace:
    steps: List[TraceStep] = field(default_factory=list)
    fixed_point_reached: bool = False
    fixed_at: Optional[int] = None
    nested: bool = True
    budget_exceeded: bool = False
    approximate: bool = False

    @property
    def final(self):
        return self.steps[-1].set

    def to_dict(self):
        return jsonable({
            'fixed_point_reached': self.fixed_point_reached,
            'fixed_at': self.fixed_at, 'nested': self.nested,
            'budget_exceeded': self.budget_exceeded,
            'approximate': self.approximate,
            'steps': [s.to_dict() for s in self.steps]})

    def rows(self):
        for step in self.steps:
            yield from step.set.rows(step.k)


def _step(k, S):
    return TraceStep(k, S, S.component_counts(), S.sizes())


def iterate_rationalizable(game, S0: JointGridSet, max_k, tol=None,
                           **lambda_options):
    """Apply lambda until the masks stop changing or max_k rounds pass."""
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    trace = RationalizabilityTrace([_step(0, S0)])
    current = S0
    for k in tqdm(range(1, max_k + 1), desc="lambda rounds",
                  disable=not config.logging.progress):
        try:
            result = lambda_operator(game, current, tol, **lambda_options)
        except BudgetExceededError as exc:
            logger.warning(f"round {k}: {exc}; returning partial trace")
            trace.budget_exceeded = True
            break
        following = result.image
        trace.approximate = trace.approximate or result.approximate
        trace.steps.append(_step(k, following))
        trace.nested = trace.nested and following.issubset(current)
        logger.info(f"round {k}: sizes {following.sizes()}, components "
                    f"{following.component_counts()}")
        if following == current:
            trace.fixed_point_reached = True
            trace.fixed_at = k
            break
        current = following
    return trace


def strategic_compactness_check(game, K: JointGridSet, tol=None,
                                **lambda_options):
    """Every node of lambda(K) within one grid spacing of K."""
    result = lambda_operator(game, K, tol, **lambda_options)
    image = result.image
    worst, witness = 0.0, None
    for i in range(game.players):
        spacing = float(image.grids[i].spacing.max())
        img_nodes = image.nodes(i)
        k_nodes = K.nodes(i)
        if not len(img_nodes):
            continue
        distance, _ = cKDTree(k_nodes).query(img_nodes)
        ratio = distance / spacing
        j = int(np.argmax(ratio))
        if ratio[j] > worst:
            worst, witness = float(ratio[j]), (i, img_nodes[j])
    verdict = PASS if worst <= 1 + 1e-9 else FAIL
    notes = {'image': image.to_dict(), 'approximate': result.approximate}
    if witness is not None:
        notes['player'] = witness[0]
    return Certificate('strategic-compactness', {'tol': tol}, verdict,
                       worst, None if witness is None else witness[1],
                       sum(image.sizes()), notes=notes)
