import json

import pytest
from click.testing import CliRunner

from src import __version__
from src.analysis import AnalysisConfig, parse_config
from src.cli import cli
from src.config import config
from src.errors import ConfigError


@pytest.fixture
def invoke(tmp_path):
    runner = CliRunner()

    def _invoke(*args, out=None):
        out = out or tmp_path / 'out'
        result = runner.invoke(cli, ['--out', str(out), *args])
        report_path = out / 'report.json'
        report = json.loads(report_path.read_text()) \
            if report_path.exists() else None
        return result, report

    return _invoke


def test_version():
    result = CliRunner().invoke(cli, ['--version'])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_sublevel_counts_match(invoke, tmp_path):
    result, report = invoke('sublevel', '--builtin', 'fig1_invex',
                            '--box=-3,3,-3,3', '--level', '1e-6',
                            '--res', '101,201,401', '--expect', '2,2,2')
    assert result.exit_code == 0, result.output
    assert report['expectation'] is True
    assert report['checks'][0]['result']['counts'] == [2, 2, 2]
    assert (tmp_path / 'out' / 'labels.csv').exists()
    assert len(report['config_hash']) == 64


def test_expectation_mismatch_exits_one(invoke):
    result, report = invoke('sublevel', '--builtin', 'quadratic',
                            '--box=-2,2,-2,2', '--level', '1',
                            '--res', '51,101', '--expect', '2,2')
    assert result.exit_code == 1
    assert report['expectation'] is False


def test_two_sided_pl_passes(invoke):
    result, report = invoke('certify-pl', '--builtin', 'fig3_twosided_pl',
                            '--box=-3,3,-3,3', '--res', '201', '--two-sided',
                            '--mu1', str(1 / 32), '--mu2', str(1 / 7))
    assert result.exit_code == 0, result.output
    assert [c['verdict'] for c in report['checks']] == ['pass', 'pass']


def test_pl_failure_exits_one(invoke):
    result, report = invoke('certify-pl', '--builtin', 'quadratic',
                            '--box=-1,1,-1,1', '--res', '41', '--mu', '4.5')
    assert result.exit_code == 1
    assert report['verdict'] == 'fail'


def test_mountain_pass_on_doublewell(invoke):
    result, report = invoke('mountain-pass', '--builtin', 'doublewell',
                            '--x0=-1,0', '--x1', '1,0',
                            '--box=-3,3,-3,3', '--res', '101',
                            '--level', '0.5', '--expect', 'pass')
    assert result.exit_code == 0, result.output
    names = [c['name'] for c in report['checks']]
    assert names == ['mountain-pass', 'separation', 'pass-above-level']
    assert report['checks'][0]['result']['pass_value'] == \
        pytest.approx(1.0, abs=1e-4)


def test_game_nash_counts(invoke):
    result, report = invoke('game-nash', '--game', 'fig4', '--res', '101',
                            '--expect', '3')
    assert result.exit_code == 0, result.output
    assert report['subject']['players'] == 2


def test_game_potential_on_econ(invoke):
    result, report = invoke('game-potential', '--game', 'econ_incave',
                            '--res', '41')
    assert result.exit_code == 0, result.output
    assert report['verdict'] == 'pass'


def test_unknown_builtin_is_usage_error(invoke):
    result, report = invoke('certify-invex', '--builtin', 'nope',
                            '--box=-1,1')
    assert result.exit_code == 2
    assert 'nope' in report['error']
    assert report['verdict'] is None


def test_two_sources_rejected(invoke):
    result, report = invoke('certify-invex', '--builtin', 'quadratic',
                            '--expr', 'x0^2', '--dim', '1', '--box=-1,1')
    assert result.exit_code == 2
    assert report is None


def test_missing_required_field(invoke):
    result, report = invoke('sublevel', '--builtin', 'quadratic',
                            '--level', '1')
    assert result.exit_code == 2
    assert 'box' in report['error']


def test_run_config_file(invoke, tmp_path):
    path = tmp_path / 'analysis.json'
    path.write_text(json.dumps({
        'command': 'certify-invex', 'expression': 'x0^2 + x1^2',
        'dimension': 2, 'box': [-2, 2, -2, 2], 'starts': 8,
        'expect': 'pass'}))
    result, report = invoke('run', '--config', str(path))
    assert result.exit_code == 0, result.output
    assert report['command'] == 'certify-invex'
    assert report['subject']['expression'] == 'x0^2 + x1^2'


def test_run_rejects_unknown_field(invoke, tmp_path):
    path = tmp_path / 'analysis.json'
    path.write_text(json.dumps({'command': 'sublevel',
                                'builtin': 'fig1_invex', 'levle': 1.0}))
    result, _ = invoke('run', '--config', str(path))
    assert result.exit_code == 2
    assert 'levle' in result.output


def test_run_reports_json_position(invoke, tmp_path):
    path = tmp_path / 'analysis.json'
    path.write_text('{"command": "sublevel",\n "box": [1, 2,]}')
    result, _ = invoke('run', '--config', str(path))
    assert result.exit_code == 2
    assert 'line 2' in result.output


def test_reports_are_reproducible(invoke, tmp_path):
    args = ('certify-invex', '--builtin', 'doublewell', '--box=-2,2,-2,2',
            '--starts', '16')
    _, first = invoke(*args, out=tmp_path / 'a')
    _, second = invoke(*args, out=tmp_path / 'b')
    assert first['config_hash'] == second['config_hash']
    assert first['checks'] == second['checks']
    assert first['verdict'] == 'fail'


def test_config_hash_tracks_semantics():
    base = {'command': 'sublevel', 'builtin': 'fig1_invex',
            'box': [-3, 3, -3, 3], 'level': 1.0}
    digest = parse_config(base).digest()
    assert parse_config({**base, 'out': 'elsewhere',
                         'progress': True}).digest() == digest
    assert parse_config({**base, 'level': 2.0}).digest() != digest
    assert parse_config({**base, 'seed': 7}).digest() != digest


@pytest.mark.parametrize('raw', [
    {'command': 'sublevel'},
    {'command': 'sublevel', 'expression': 'x0'},
    {'command': 'game-nash', 'game': 'fig4', 'game_file': 'g.json'},
    {'command': 'certify-pl', 'builtin': 'quadratic', 'alpha': 1.0},
    {'command': 'sublevel', 'builtin': 'quadratic', 'level': float('nan')},
    {'command': 'teleport', 'builtin': 'quadratic'},
])
def test_invalid_configs(raw):
    with pytest.raises(ConfigError):
        parse_config(raw)


def test_defaults():
    analysis = AnalysisConfig(command='sublevel', builtin='quadratic')
    assert analysis.resolution == [config.grid.default_resolution]
    assert analysis.seed == 42
    assert analysis.csv


def test_default_resolution_follows_settings(monkeypatch):
    monkeypatch.setattr(config.grid, 'default_resolution', 77)
    analysis = AnalysisConfig(command='sublevel', builtin='quadratic')
    assert analysis.resolution == [77]


def test_error_bound_fails_at_stationary_node(invoke):
    result, report = invoke('minimax-modulus', '--expr',
                            '(x0^2 - 1)^2 - x1^2', '--dim', '2',
                            '--box=-2,2,-2,2', '--res', '201',
                            '--side', 'x', '--base', '1,0',
                            '--deltas', '1.5', '--mode', 'eb')
    assert result.exit_code == 1, result.output
    check = report['checks'][0]
    assert check['verdict'] == 'fail'
    assert check['result']['kappa'] is None
    assert check['result']['witness'] == [0.0]


def test_empty_sublevel_separation_is_inconclusive(invoke):
    result, report = invoke('mountain-pass', '--builtin', 'quadratic',
                            '--x0=-0.0005,0', '--x1', '0.0005,0',
                            '--box=-1,1,-1,1', '--res', '200',
                            '--level', '1e-6', '--no-envelope')
    assert result.exit_code == 3
    assert 'EmptySetError' in report['error']
