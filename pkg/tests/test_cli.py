"""
Unit tests for the CLI functionality.
"""

import json
import subprocess
import sys
from functools import partial
from io import StringIO
from unittest.mock import patch

import pytest

from dmc_checker import __version__, core
from dmc_checker.cli import create_parser, main
from dmc_checker.phi import phi_map

MISMATCH = {
    "name": "mismatch",
    "generators": [{"name": "x", "degree": 1}, {"name": "y", "degree": 2}],
    "brackets": [{"args": ["x", "x"], "value": [{"gen": "x", "coef": "1"}]}],
}


class TestParser:
    """Test argument parser creation."""

    def test_subcommand_required(self):
        parser = create_parser()
        with patch('sys.stderr', new_callable=StringIO):
            with pytest.raises(SystemExit) as excinfo:
                parser.parse_args([])
        assert excinfo.value.code == 2

    def test_defaults_left_to_config(self):
        args = create_parser().parse_args(['verify', 'fixture:heis'])
        assert args.file == 'fixture:heis'
        assert args.levels is None
        assert args.format is None
        assert args.verbose is False

    def test_arguments(self):
        args = create_parser().parse_args([
            'verify', 'spec.json', '--levels', '2', '--weight', '4', '--depth', '1',
            '--checks', 'ce,phi', '--format', 'json', '--jobs', '3', '--seed', '7',
            '--frame', 'vertex', '-v'])
        assert (args.levels, args.weight, args.depth, args.jobs, args.seed) == (2, 4, 1, 3, 7)
        assert args.checks == 'ce,phi'
        assert args.format == 'json'
        assert args.frame == 'vertex'
        assert args.verbose is True

    def test_unknown_frame_rejected(self):
        with patch('sys.stderr', new_callable=StringIO):
            with pytest.raises(SystemExit):
                create_parser().parse_args(['selftest', '--frame', 'polar'])

    def test_version(self):
        with patch('sys.stdout', new_callable=StringIO) as out:
            with pytest.raises(SystemExit) as excinfo:
                create_parser().parse_args(['--version'])
        assert excinfo.value.code == 0
        assert __version__ in out.getvalue()


class TestMain:
    """Test exit codes and output of main()."""

    def test_fixtures(self, capsys):
        assert main(['fixtures']) == 0
        assert capsys.readouterr().out.split() == ['abelian2', 'harrison-d2', 'heis',
                                                   'koszul-x2', 'odd-square']

    def test_validate_fixture(self, capsys):
        assert main(['validate', 'fixture:odd-square']) == 0
        out = capsys.readouterr().out
        assert 'PASS validate' in out
        assert 'Overall: PASS' in out

    def test_axiom_failure_exits_one(self, tmp_path, capsys):
        path = tmp_path / 'mismatch.json'
        path.write_text(json.dumps(MISMATCH))
        assert main(['validate', str(path)]) == 1
        assert '[x, x]' in capsys.readouterr().out

    def test_flipped_bracket_sign_fails_verify(self, monkeypatch, capsys):
        monkeypatch.setattr(core, 'phi_map', partial(phi_map, arity_signs={2: -1}))
        code = main(['verify', 'fixture:odd-square', '--checks', 'phi', '--levels', '1',
                     '--weight', '3', '--depth', '1', '--jobs', '1'])
        assert code == 1
        out = capsys.readouterr().out
        assert '  FAIL phi: chain_map: degree -1, weight 2, basis element t[y]' in out
        assert out.endswith('Overall: FAIL\n')

    def test_malformed_json_exits_two(self, tmp_path, capsys):
        path = tmp_path / 'broken.json'
        path.write_text('{"name": ')
        assert main(['validate', str(path)]) == 2
        assert capsys.readouterr().err.startswith('Error:')

    def test_bad_config_exits_two(self, capsys):
        assert main(['verify', 'fixture:heis', '--levels', '0']) == 2
        assert 'levels' in capsys.readouterr().err

    def test_unknown_check_exits_two(self, capsys):
        assert main(['selftest', '--checks', 'nonsense']) == 2

    def test_json_report(self, capsys):
        code = main(['verify', 'fixture:abelian2', '--checks', 'validate,ce',
                     '--levels', '2', '--weight', '2', '--depth', '1', '--format', 'json'])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data['command'] == 'verify'
        assert data['fixture'] == 'abelian2'
        assert data['passed'] is True
        assert set(data['checks']) == {'ce', 'validate'}
        assert data['bounds'] == {'levels': 2, 'weight': 2, 'depth': 1, 'frame': 'difference'}

    def test_config_file(self, tmp_path, capsys):
        path = tmp_path / 'dmc.yml'
        path.write_text('checks: [validate]\nformat: json\n')
        assert main(['verify', 'fixture:heis', '--config', str(path)]) == 0
        assert list(json.loads(capsys.readouterr().out)['checks']) == ['validate']

    def test_environment(self, monkeypatch, capsys):
        monkeypatch.setenv('DMC_FORMAT', 'json')
        assert main(['validate', 'fixture:abelian2']) == 0
        assert json.loads(capsys.readouterr().out)['passed'] is True

    def test_mc_locus_text(self, capsys):
        assert main(['mc-locus', 'fixture:odd-square', '--levels', '1']) == 0
        out = capsys.readouterr().out
        assert 'MC^* of odd-square (difference frame)' in out
        assert 'y[0] <- ' in out

    def test_selftest(self, capsys):
        code = main(['selftest', '--checks', 'dold-kan', '--levels', '2'])
        assert code == 0
        assert 'PASS dold-kan' in capsys.readouterr().out


class TestModuleEntryPoint:
    """Run the package as a module."""

    @pytest.mark.slow
    def test_python_m(self):
        result = subprocess.run([sys.executable, '-m', 'dmc_checker', 'fixtures'],
                                capture_output=True, text=True, check=False)
        assert result.returncode == 0
        assert 'odd-square' in result.stdout
