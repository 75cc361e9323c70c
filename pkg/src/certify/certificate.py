"""Verdict objects shared by every certification routine."""
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

PASS = 'pass'
FAIL = 'fail'
INCONCLUSIVE = 'inconclusive'


def jsonable(value):
    """numpy scalars and arrays to plain Python."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


@dataclass
class Certificate:
    condition: str
    params: dict
    verdict: str
    worst_ratio: Optional[float] = None
    witness: Optional[np.ndarray] = None
    samples_checked: int = 0
    grid: Optional[dict] = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return jsonable({
            'condition': self.condition,
            'params': self.params,
            'verdict': self.verdict,
            'worst_ratio': self.worst_ratio,
            'witness': self.witness,
            'samples_checked': self.samples_checked,
            'grid': self.grid,
            **({'notes': self.notes} if self.notes else {}),
        })

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def worst_case(ratios, points):
    """Smallest ratio, ties broken by the lexicographically first point."""
    smallest = float(np.min(ratios))
    tied = points[ratios == smallest]
    first = np.lexsort(tuple(tied.T[::-1]))[0]
    return smallest, tied[first]
