# src/data/data_ingestion.py
import json
import logging
from abc import ABC, abstractmethod
from typing import List, Optional, Union

from pydantic import (BaseModel, ConfigDict, Field, ValidationError,
                      field_validator)

from src.errors import ConfigError
from src.games.spec import GameSpec
from src.grid.lattice import BoxDomain

logger = logging.getLogger(__name__)


class PlayerDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    dim: int = Field(ge=1)
    # flat [lo0, hi0, lo1, hi1, ...] or {"lo": [...], "hi": [...]}
    box: Union[List[float], dict]

    @field_validator('box')
    @classmethod
    def _box_shape(cls, value):
        if isinstance(value, dict):
            if set(value) != {'lo', 'hi'}:
                raise ValueError("box needs exactly 'lo' and 'hi'")
            return value
        if len(value) % 2:
            raise ValueError("flat box needs an even number of bounds")
        return value

    def to_box(self):
        if isinstance(self.box, dict):
            box = BoxDomain(tuple(self.box['lo']), tuple(self.box['hi']))
        else:
            box = BoxDomain.from_bounds(self.box)
        if box.dimension != self.dim:
            raise ValueError(f"box has dimension {box.dimension}, player "
                             f"declares {self.dim}")
        return box


class GameDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    players: List[PlayerDocument] = Field(min_length=1)
    utilities: List[str]
    potential: Optional[str] = None
    name: Optional[str] = None


class GameSource(ABC):
    @abstractmethod
    def fetch_game(self) -> GameSpec:
        pass


class LocalJsonGameSource(GameSource):
    """Reads a game document from a JSON file."""

    def __init__(self, file_path: str):
        self.file_path = file_path

    def fetch_game(self) -> GameSpec:
        logger.info(f"Reading game document from {self.file_path}...")
        try:
            with open(self.file_path, 'r', encoding='utf-8') as f:
                raw = json.load(f)
        except FileNotFoundError:
            logger.error(f"File not found at path: {self.file_path}")
            raise
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{self.file_path}: line {exc.lineno}: "
                              f"{exc.msg}") from exc
        return game_from_document(raw, source=self.file_path)


def game_from_document(raw: dict, source: str = "<document>") -> GameSpec:
    try:
        document = GameDocument.model_validate(raw)
        boxes = [p.to_box() for p in document.players]
    except (ValidationError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if len(document.utilities) != len(boxes):
        raise ConfigError(f"{source}: {len(boxes)} players but "
                          f"{len(document.utilities)} utilities")
    game = GameSpec.from_texts(boxes, document.utilities,
                               document.potential, document.name)
    logger.info(f"Loaded {game.players}-player game "
                f"({game.dimension} joint coordinates).")
    return game


def load_game(path) -> GameSpec:
    return LocalJsonGameSource(str(path)).fetch_game()
