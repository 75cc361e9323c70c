import json

import numpy as np
import pytest

from src.data.data_ingestion import game_from_document, load_game
from src.errors import ConfigError, ExprSyntaxError

COURNOT = {
    'name': 'cournot',
    'players': [{'dim': 1, 'box': [0, 10]},
                {'dim': 1, 'box': {'lo': [0], 'hi': [10]}}],
    'utilities': ["x0*(10 - x0 - x1) - x0", "x1*(10 - x0 - x1) - x1"],
}


def test_document_builds_game():
    game = game_from_document(COURNOT)
    assert game.players == 2
    assert game.name == 'cournot'
    assert game.potential is None
    np.testing.assert_array_equal(game.box.hi, [10.0, 10.0])


def test_load_game_from_file(tmp_path):
    path = tmp_path / 'game.json'
    path.write_text(json.dumps({**COURNOT, 'potential':
                                "9*x0 + 9*x1 - x0^2 - x1^2 - x0*x1"}))
    game = load_game(path)
    assert game.potential is not None
    assert game.describe()['utilities'] == COURNOT['utilities']


def test_missing_file_raises(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_game(tmp_path / 'absent.json')


def test_malformed_json_names_line(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{\n  "players": [\n')
    with pytest.raises(ConfigError, match="line"):
        load_game(path)


@pytest.mark.parametrize('change', [
    {'players': []},
    {'players': [{'dim': 1, 'box': [0, 1, 2]}]},
    {'players': [{'dim': 2, 'box': [0, 1]}]},
    {'players': [{'dim': 1, 'box': {'lo': [0]}}]},
    {'utilities': ["x0"]},
    {'payoffs': ["x0", "x1"]},
])
def test_invalid_documents(change):
    with pytest.raises(ConfigError):
        game_from_document({**COURNOT, **change}, source='inline')


def test_bad_utility_text():
    document = {**COURNOT, 'utilities': ["x0 +", "x1"]}
    with pytest.raises(ExprSyntaxError):
        game_from_document(document)
